//! BPSK over AWGN and the matching channel LLRs.
//!
//! Bit 0 is sent as `-√Ec` and bit 1 as `+√Ec`; the noise has variance
//! `N0/2`. The link SNR is `γ = 2 Ec / N0`, which is the SNR entering
//! `λ = ½ log2(1 + γ)` and equals half the mean of the channel LLR
//! (`μ_ch = 4 Ec / N0 = 2γ`, variance `2 μ_ch`).

use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_binary, invalid, Result};
use crate::llr::{clip, LlrBlock};
use crate::rng;

/// Per-link energy and noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    ec: f64,
    n0: f64,
}

impl ChannelConfig {
    pub fn new(ec: f64, n0: f64) -> Result<Self> {
        if !(ec > 0.0) {
            return Err(invalid("ec", format!("{ec} must be positive")));
        }
        if !(n0 > 0.0) {
            return Err(invalid("n0", format!("{n0} must be positive")));
        }
        Ok(Self { ec, n0 })
    }

    /// Unit symbol energy with the noise level that yields link SNR `gamma`.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(invalid(
                "gamma",
                format!("{gamma} must be positive and finite"),
            ));
        }
        Self::new(1.0, 2.0 / gamma)
    }

    pub fn ec(&self) -> f64 {
        self.ec
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    /// Link SNR `2 Ec / N0`.
    pub fn gamma(&self) -> f64 {
        2.0 * self.ec / self.n0
    }

    /// Mean of the channel LLR given bit 0, `4 Ec / N0`.
    pub fn llr_mean(&self) -> f64 {
        4.0 * self.ec / self.n0
    }

    /// Modulate, add noise and return channel LLRs in one go.
    pub fn transmit(&self, codeword: &[u8], rng: &mut rng::Rng) -> Result<LlrBlock> {
        let mut y = modulate(codeword, self.ec)?;
        add_awgn_with(&mut y, self.n0, rng);
        Ok(channel_llr(&y, self.ec, self.n0))
    }
}

/// Antipodal mapping `√ec (2s - 1)`.
pub fn modulate(codeword: &[u8], ec: f64) -> Result<Vec<f64>> {
    check_binary(codeword)?;
    let amp = ec.sqrt();
    Ok(codeword
        .iter()
        .map(|&s| if s == 0 { -amp } else { amp })
        .collect())
}

/// Adds white Gaussian noise of variance `n0 / 2`.
pub fn add_awgn(signal: &[f64], n0: f64, seed: u64) -> Vec<f64> {
    let mut out = signal.to_vec();
    add_awgn_with(&mut out, n0, &mut rng::seeded(seed));
    out
}

pub(crate) fn add_awgn_with(signal: &mut [f64], n0: f64, rng: &mut rng::Rng) {
    let sigma = (0.5 * n0).sqrt();
    for y in signal.iter_mut() {
        let w: f64 = StandardNormal.sample(rng);
        *y += sigma * w;
    }
}

/// `LLR = -4 √ec y / n0`, clipped to the global LLR range.
pub fn channel_llr(y: &[f64], ec: f64, n0: f64) -> LlrBlock {
    let scale = -4.0 * ec.sqrt() / n0;
    y.iter().map(|&v| clip(scale * v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn mean_var(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, var)
    }

    #[test]
    fn modulation_examples() {
        assert_eq!(modulate(&[0, 1], 1.0).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(modulate(&[0; 4], 4.0).unwrap(), vec![-2.0; 4]);
        assert!(modulate(&[0, 2], 1.0).is_err());
        let mut r = rng::seeded(1);
        let bits: Vec<u8> = (0..1000).map(|_| r.gen_range(0..=1)).collect();
        let x = modulate(&bits, 2.5).unwrap();
        let energy = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((energy - 2.5).abs() < 1e-12);
    }

    #[test]
    fn noise_examples() {
        let x = vec![1.0, -1.0, 0.5];
        let y = add_awgn(&x, 1e-30, 3);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-10);
        }
        assert_eq!(add_awgn(&x, 1.0, 4), add_awgn(&x, 1.0, 4));
        assert_ne!(add_awgn(&x, 1.0, 4), add_awgn(&x, 1.0, 5));

        let n = 1_000_000;
        let (_, var) = mean_var(&add_awgn(&vec![0.0; n], 2.0, 6));
        // Sample variance of N(0, 1): standard error sqrt(2 / n).
        assert!(
            (var - 1.0).abs() < 3.0 * (2.0 / n as f64).sqrt(),
            "var {var}"
        );
    }

    #[test]
    fn llr_examples() {
        assert_eq!(channel_llr(&[1.0], 1.0, 2.0)[0], -2.0);
        assert_eq!(channel_llr(&[0.0], 1.0, 2.0)[0], 0.0);
        let ch = ChannelConfig::new(1.0, 0.01).unwrap();
        let llr = ch.transmit(&[0; 100], &mut rng::seeded(2)).unwrap();
        assert!(llr.iter().all(|&l| l > 10.0));
    }

    #[test]
    fn llr_density_is_consistent() {
        let ch = ChannelConfig::new(0.7, 1.3).unwrap();
        let n = 1_000_000;
        let llr = ch.transmit(&vec![0; n], &mut rng::seeded(9)).unwrap();
        let (m, v) = mean_var(&llr);
        let mu = 4.0 * 0.7 / 1.3;
        assert!((ch.llr_mean() - mu).abs() < 1e-12);
        assert!((ch.gamma() - mu / 2.0).abs() < 1e-12);
        let se_mean = (2.0 * mu / n as f64).sqrt();
        let se_var = 2.0 * mu * (2.0 / n as f64).sqrt();
        assert!((m - mu).abs() < 3.0 * se_mean, "mean {m}");
        assert!((v - 2.0 * mu).abs() < 3.0 * se_var, "var {v}");
    }

    #[test]
    fn config_validation() {
        assert!(ChannelConfig::new(0.0, 1.0).is_err());
        assert!(ChannelConfig::new(1.0, -1.0).is_err());
        assert!(ChannelConfig::from_gamma(0.0).is_err());
        let ch = ChannelConfig::from_gamma(3.0).unwrap();
        assert!((ch.gamma() - 3.0).abs() < 1e-12);
    }
}
