//! Log-likelihood ratio blocks.

use std::ops::{Deref, DerefMut};

/// Saturation applied to every LLR that enters or leaves a decoder.
pub const LLR_CLIP: f64 = 50.0;

/// Clips an LLR to `[-LLR_CLIP, LLR_CLIP]`. NaN maps to 0.
#[inline]
pub fn clip(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-LLR_CLIP, LLR_CLIP)
    }
}

/// Hard decision under the `ln P(0)/P(1)` convention; a zero LLR decides 0.
#[inline]
pub fn hard_bit(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// A vector of LLRs, `ln P(bit = 0) / P(bit = 1)` per entry.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LlrBlock(Vec<f64>);

impl LlrBlock {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Copy with every entry clipped to `±LLR_CLIP`.
    pub fn clipped(&self) -> Self {
        Self(self.0.iter().map(|&x| clip(x)).collect())
    }

    pub fn hard_decisions(&self) -> Vec<u8> {
        self.0.iter().map(|&x| hard_bit(x)).collect()
    }
}

impl Deref for LlrBlock {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for LlrBlock {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for LlrBlock {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl FromIterator<f64> for LlrBlock {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_decides_zero() {
        assert_eq!(hard_bit(0.0), 0);
        assert_eq!(hard_bit(-0.0), 0);
        assert_eq!(hard_bit(1e-300), 0);
        assert_eq!(hard_bit(-1e-300), 1);
    }

    #[test]
    fn clipping() {
        assert_eq!(clip(1e9), LLR_CLIP);
        assert_eq!(clip(-1e9), -LLR_CLIP);
        assert_eq!(clip(f64::NAN), 0.0);
        assert_eq!(clip(f64::INFINITY), LLR_CLIP);
    }
}
