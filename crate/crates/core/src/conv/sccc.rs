//! Serially concatenated convolutional code: terminated outer code, random
//! bit interleaver, unterminated rate-1 inner code.

use rand::seq::SliceRandom;

use super::bcjr::bcjr_with;
use super::{encode_with, RationalGenerator, Termination, Trellis};
use crate::error::{check_binary, check_len, invalid, Error, Result};
use crate::llr::LlrBlock;
use crate::rng;

/// A concrete SCCC instance. The codeword length is
/// `N = outputs_outer * (L + memory_outer)`; the inner code must have rate 1.
#[derive(Debug, Clone)]
pub struct ScccCode {
    outer: RationalGenerator,
    inner: RationalGenerator,
    info_len: usize,
    interleaver_seed: u64,
    /// Inner-encoder input `i` is outer-coded bit `interleaver[i]`.
    interleaver: Vec<usize>,
    outer_trellis: Trellis,
    inner_trellis: Trellis,
}

impl PartialEq for ScccCode {
    fn eq(&self, other: &Self) -> bool {
        self.outer == other.outer
            && self.inner == other.inner
            && self.info_len == other.info_len
            && self.interleaver == other.interleaver
    }
}

/// Soft outputs of [`sccc_decode`] on the information bits.
#[derive(Debug, Clone, PartialEq)]
pub struct ScccOutput {
    pub posterior: LlrBlock,
    pub extrinsic: LlrBlock,
}

impl ScccCode {
    pub fn new(
        outer: RationalGenerator,
        inner: RationalGenerator,
        info_len: usize,
        interleaver_seed: u64,
    ) -> Result<Self> {
        if info_len == 0 {
            return Err(invalid("L", "information length must be positive"));
        }
        if inner.outputs() != 1 {
            return Err(invalid("inner", "inner code must have rate 1"));
        }
        let outer_trellis = outer.trellis();
        let inner_trellis = inner.trellis();
        let n = outer.outputs() * (info_len + outer.memory());
        let mut interleaver: Vec<usize> = (0..n).collect();
        interleaver.shuffle(&mut rng::seeded(interleaver_seed));
        Ok(Self {
            outer,
            inner,
            info_len,
            interleaver_seed,
            interleaver,
            outer_trellis,
            inner_trellis,
        })
    }

    /// The reference rate-1/2 code with `info_len` information bits.
    pub fn reference(info_len: usize, interleaver_seed: u64) -> Result<Self> {
        Self::new(
            RationalGenerator::reference_outer(),
            RationalGenerator::reference_inner(),
            info_len,
            interleaver_seed,
        )
    }

    /// The reference code sized so that the codeword has exactly `n` bits.
    pub fn reference_with_length(n: usize, interleaver_seed: u64) -> Result<Self> {
        let outer = RationalGenerator::reference_outer();
        let per_step = outer.outputs();
        if n % per_step != 0 || n / per_step <= outer.memory() {
            return Err(invalid("N", format!("{n} is not a valid codeword length")));
        }
        Self::reference(n / per_step - outer.memory(), interleaver_seed)
    }

    pub fn info_len(&self) -> usize {
        self.info_len
    }

    pub fn code_len(&self) -> usize {
        self.interleaver.len()
    }

    pub fn rate(&self) -> f64 {
        self.info_len as f64 / self.code_len() as f64
    }

    pub fn outer(&self) -> &RationalGenerator {
        &self.outer
    }

    pub fn inner(&self) -> &RationalGenerator {
        &self.inner
    }

    pub fn interleaver(&self) -> &[usize] {
        &self.interleaver
    }

    pub fn interleaver_seed(&self) -> u64 {
        self.interleaver_seed
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        check_len("information bits", self.info_len, info.len())?;
        check_binary(info)?;
        let (outer_cw, _) = encode_with(&self.outer_trellis, info, Termination::Terminated);
        let permuted: Vec<u8> = self.interleaver.iter().map(|&i| outer_cw[i]).collect();
        Ok(encode_with(&self.inner_trellis, &permuted, Termination::Open).0)
    }

    /// Text form: generators in octal plus the interleaver seed.
    pub fn describe(&self) -> String {
        format!(
            "outer = {}\ninner = {}\ninfo_len = {}\ninterleaver_seed = {}\n",
            self.outer.to_octal(),
            self.inner.to_octal(),
            self.info_len,
            self.interleaver_seed
        )
    }

    /// Parses the output of [`ScccCode::describe`]. Blank lines and `#` comments are ignored.
    pub fn from_description(text: &str) -> Result<Self> {
        let (mut outer, mut inner, mut info_len, mut seed) = (None, None, None, None);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| match e {
                Error::Parse { reason, .. } => Error::Parse {
                    line: idx + 1,
                    reason,
                },
                other => other,
            };
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: idx + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            let int_err = |e: std::num::ParseIntError| Error::Parse {
                line: idx + 1,
                reason: format!("`{}`: {e}", value.trim()),
            };
            match key.trim() {
                "outer" => outer = Some(RationalGenerator::from_octal(value).map_err(at)?),
                "inner" => inner = Some(RationalGenerator::from_octal(value).map_err(at)?),
                "info_len" => info_len = Some(value.trim().parse::<usize>().map_err(int_err)?),
                "interleaver_seed" => seed = Some(value.trim().parse::<u64>().map_err(int_err)?),
                other => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        reason: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let missing = |k: &str| Error::Parse {
            line: 0,
            reason: format!("missing key `{k}`"),
        };
        Self::new(
            outer.ok_or_else(|| missing("outer"))?,
            inner.ok_or_else(|| missing("inner"))?,
            info_len.ok_or_else(|| missing("info_len"))?,
            seed.ok_or_else(|| missing("interleaver_seed"))?,
        )
    }
}

/// Iterative SCCC decoding with external a-priori LLRs on the information bits.
///
/// Each internal iteration runs the inner BCJR on the channel LLRs (with the
/// interleaved outer extrinsics as priors), then the outer BCJR on the
/// deinterleaved inner extrinsics plus `apriori`.
pub fn sccc_decode(
    code: &ScccCode,
    channel: &[f64],
    apriori: &[f64],
    internal_iters: usize,
) -> Result<ScccOutput> {
    if internal_iters < 1 {
        return Err(invalid(
            "internal_iters",
            "at least one iteration is required",
        ));
    }
    let n = code.code_len();
    check_len("channel LLRs", n, channel.len())?;
    check_len("a-priori LLRs", code.info_len, apriori.len())?;

    let pi = &code.interleaver;
    let mut outer_coded_ext = vec![0.0; n];
    let mut inner_prior = vec![0.0; n];
    let mut outer_in = vec![0.0; n];
    let mut result = None;
    for _ in 0..internal_iters {
        for (i, &src) in pi.iter().enumerate() {
            inner_prior[i] = outer_coded_ext[src];
        }
        let inner = bcjr_with(
            &code.inner_trellis,
            channel,
            &inner_prior,
            Termination::Open,
        )?;
        for (i, &dst) in pi.iter().enumerate() {
            outer_in[dst] = inner.info_extrinsic[i];
        }
        let outer = bcjr_with(
            &code.outer_trellis,
            &outer_in,
            apriori,
            Termination::Terminated,
        )?;
        outer_coded_ext.copy_from_slice(&outer.coded_extrinsic);
        result = Some(ScccOutput {
            posterior: outer.info_posterior,
            extrinsic: outer.info_extrinsic,
        });
    }
    Ok(result.expect("at least one iteration"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelConfig;
    use rand::Rng;

    fn random_bits(len: usize, seed: u64) -> Vec<u8> {
        let mut r = rng::seeded(seed);
        (0..len).map(|_| r.gen_range(0..=1)).collect()
    }

    #[test]
    fn dimensions_and_interleaver() {
        let code = ScccCode::reference(1024, 1).unwrap();
        assert_eq!(code.code_len(), 2 * (1024 + 2));
        let mut seen = vec![false; code.code_len()];
        for &i in code.interleaver() {
            assert!(!seen[i]);
            seen[i] = true;
        }
        let exact = ScccCode::reference_with_length(2048, 1).unwrap();
        assert_eq!(exact.code_len(), 2048);
        assert_eq!(exact.rate(), 1022.0 / 2048.0);
        assert!(ScccCode::reference_with_length(3, 1).is_err());
        assert!(ScccCode::new(
            RationalGenerator::reference_outer(),
            RationalGenerator::reference_outer(),
            16,
            0
        )
        .is_err());
    }

    #[test]
    fn encoding_is_linear() {
        let code = ScccCode::reference(256, 3).unwrap();
        assert!(code.encode(&[0; 256]).unwrap().iter().all(|&b| b == 0));
        let a = random_bits(256, 1);
        let b = random_bits(256, 2);
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ea = code.encode(&a).unwrap();
        let eb = code.encode(&b).unwrap();
        let sum: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
        assert_eq!(code.encode(&ab).unwrap(), sum);
        assert!(code.encode(&a[..10]).is_err());
    }

    #[test]
    fn description_round_trip() {
        let code = ScccCode::reference(500, 77).unwrap();
        let text = code.describe();
        assert!(text.contains("outer = 7: 5 1"));
        assert!(text.contains("inner = 17: 5"));
        let back = ScccCode::from_description(&text).unwrap();
        assert_eq!(back, code);
        assert!(ScccCode::from_description("outer = 7: 5 1\n").is_err());
        let err = ScccCode::from_description("outer = 7: 5 1\nbogus = 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn noiseless_single_iteration() {
        let code = ScccCode::reference(512, 5).unwrap();
        let info = random_bits(512, 6);
        let cw = code.encode(&info).unwrap();
        let channel: Vec<f64> = cw
            .iter()
            .map(|&b| if b == 0 { 50.0 } else { -50.0 })
            .collect();
        let out = sccc_decode(&code, &channel, &vec![0.0; 512], 1).unwrap();
        assert_eq!(out.posterior.hard_decisions(), info);
    }

    #[test]
    fn decodes_at_moderate_snr() {
        let code = ScccCode::reference(1024, 7).unwrap();
        let ch = ChannelConfig::from_gamma(10f64.powf(0.25)).unwrap();
        let mut r = rng::seeded(8);
        let info = random_bits(1024, 9);
        let llr = ch.transmit(&code.encode(&info).unwrap(), &mut r).unwrap();
        let out = sccc_decode(&code, &llr, &vec![0.0; 1024], 10).unwrap();
        let errors = out
            .posterior
            .hard_decisions()
            .iter()
            .zip(&info)
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(errors, 0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let code = ScccCode::reference(64, 1).unwrap();
        let n = code.code_len();
        assert!(sccc_decode(&code, &vec![0.0; n], &[0.0; 64], 0).is_err());
        assert!(sccc_decode(&code, &vec![0.0; n - 1], &[0.0; 64], 1).is_err());
        assert!(sccc_decode(&code, &vec![0.0; n], &[0.0; 63], 1).is_err());
    }
}
