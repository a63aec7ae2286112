//! Noisy received blocks for the decoder benchmarks.

use corrmac_core::rng;
use corrmac_core::{ChannelConfig, CodeInstance, LlrBlock};
use rand::Rng;

/// A code together with one received block and a matching a-priori vector.
pub struct Fixture {
    pub code: CodeInstance,
    pub channel: LlrBlock,
    pub apriori: LlrBlock,
}

impl Fixture {
    /// Encodes random information bits and passes them through an AWGN
    /// channel at `gamma_db`.
    pub fn new(code: CodeInstance, gamma_db: f64, seed: u64) -> Self {
        let mut rng = rng::seeded(seed);
        let info: Vec<u8> = (0..code.info_len()).map(|_| rng.gen_range(0..2)).collect();
        let codeword = code.encode(&info).expect("fixture encodes");
        let channel = ChannelConfig::from_gamma(10f64.powf(gamma_db / 10.0))
            .expect("valid snr")
            .transmit(&codeword, &mut rng)
            .expect("fixture transmits");
        let apriori = info
            .iter()
            .map(|&b| if b == 0 { 1.5 } else { -1.5 } + rng.gen_range(-1.0..1.0))
            .collect();
        Self {
            code,
            channel,
            apriori,
        }
    }
}

/// `count` random LLR vectors of length `n` in `[-span, span]`.
pub fn llr_columns(n: usize, count: usize, span: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-span..span)).collect())
        .collect()
}
