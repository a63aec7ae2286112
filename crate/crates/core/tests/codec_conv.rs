use corrmac_core::conv::{bcjr_decode, conv_encode, sccc_decode, Termination};
use corrmac_core::{rng, ChannelConfig, RationalGenerator, ScccCode, LLR_CLIP};
use proptest::prelude::*;

fn bits(len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, len)
}

fn llrs(len: usize, span: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-span..span, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interleaver_is_a_bijection(info_len in 1usize..600, seed: u64) {
        let code = ScccCode::reference(info_len, seed).unwrap();
        let mut seen = vec![false; code.code_len()];
        for &i in code.interleaver() {
            prop_assert!(!seen[i]);
            seen[i] = true;
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(code.code_len(), 2 * (info_len + 2));
    }

    #[test]
    fn sccc_encoding_is_linear(a in bits(64), b in bits(64), seed: u64) {
        let code = ScccCode::reference(64, seed).unwrap();
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let lhs = code.encode(&sum).unwrap();
        let rhs: Vec<u8> = code.encode(&a).unwrap().iter().zip(code.encode(&b).unwrap()).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn generator_octal_round_trip(den in 1u32..64, n1 in 1u32..64, n2 in 0u32..64) {
        let den = den | 1;
        if let Ok(gen) = RationalGenerator::new(vec![n1, n2], den) {
            prop_assert_eq!(RationalGenerator::from_octal(&gen.to_octal()).unwrap(), gen);
        }
    }

    #[test]
    fn bcjr_stays_finite_and_clipped(channel in llrs(2 * 34, 400.0), apriori in llrs(32, 400.0)) {
        let gen = RationalGenerator::reference_outer();
        let out = bcjr_decode(&gen, &channel, &apriori, Termination::Terminated).unwrap();
        for v in out.info_posterior.iter().chain(out.info_extrinsic.iter()).chain(out.coded_extrinsic.iter()) {
            prop_assert!(v.is_finite());
        }
        for v in out.info_posterior.iter() {
            prop_assert!(v.abs() <= LLR_CLIP);
        }
    }

    #[test]
    fn bcjr_respects_codeword_symmetry(info in bits(16), channel in llrs(2 * 18, 8.0), apriori in llrs(16, 4.0)) {
        // Flipping the LLR signs along a codeword flips the posteriors of
        // its information bits.
        let gen = RationalGenerator::reference_outer();
        let code = conv_encode(&info, &gen, Termination::Terminated).unwrap();
        let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
        let flip_ch: Vec<f64> = channel.iter().zip(&code).map(|(l, &b)| l * sign(b)).collect();
        let flip_ap: Vec<f64> = apriori.iter().zip(&info).map(|(l, &b)| l * sign(b)).collect();
        let a = bcjr_decode(&gen, &channel, &apriori, Termination::Terminated).unwrap();
        let b = bcjr_decode(&gen, &flip_ch, &flip_ap, Termination::Terminated).unwrap();
        for ((x, y), &bit) in a.info_posterior.iter().zip(b.info_posterior.iter()).zip(&info) {
            prop_assert!((x * sign(bit) - y).abs() < 1e-9, "{} {}", x, y);
        }
    }

    #[test]
    fn sccc_decoder_stays_finite(seed: u64, gamma_db in -10.0f64..10.0) {
        let code = ScccCode::reference(128, seed).unwrap();
        let mut r = rng::seeded(seed);
        let ch = ChannelConfig::from_gamma(10f64.powf(gamma_db / 10.0)).unwrap();
        let llr = ch.transmit(&vec![0; code.code_len()], &mut r).unwrap();
        let out = sccc_decode(&code, &llr, &vec![0.0; 128], 3).unwrap();
        prop_assert!(out.posterior.iter().all(|v| v.is_finite() && v.abs() <= LLR_CLIP));
    }
}

#[test]
fn channel_llr_density_is_consistent() {
    let ch = ChannelConfig::new(0.7, 1.3).unwrap();
    let samples = 1_000_000;
    let llr = ch
        .transmit(&vec![0; samples], &mut rng::seeded(17))
        .unwrap();
    let mean = llr.iter().sum::<f64>() / samples as f64;
    let var = llr.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / samples as f64;
    let mu = 4.0 * 0.7 / 1.3;
    // Standard errors of the sample mean and variance.
    let (se_mean, se_var) = (
        (2.0 * mu / samples as f64).sqrt(),
        (2.0f64 / samples as f64).sqrt() * 2.0 * mu,
    );
    assert!((mean - mu).abs() < 3.0 * se_mean, "{mean} vs {mu}");
    assert!(
        (var - 2.0 * mu).abs() < 3.0 * se_var,
        "{var} vs {}",
        2.0 * mu
    );
}
