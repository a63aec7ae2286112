//! Correlated binary sources: every sensor sees a common uniform bit through
//! its own binary symmetric channel that keeps the bit with probability `rho`.

use rand::Rng as _;

use crate::error::{check_binary, check_len, invalid, Result};
use crate::rng;

/// Above this many sources the joint pmf is evaluated in log space.
const LOG_SPACE_ABOVE: usize = 30;

/// `(n, rho)` pair of the common-bit correlation model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationModel {
    n: usize,
    rho: f64,
}

impl CorrelationModel {
    /// `rho` is the probability that a sensor keeps the common bit and must
    /// lie in `[0.5, 1]`; values below 0.5 are rejected, not mirrored.
    pub fn new(n: usize, rho: f64) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n", "at least one source is required"));
        }
        validate_rho(rho)?;
        Ok(Self { n, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Draws an `n x len` block. Column `i` is one common bit `b_i` XOR-ed
    /// with `n` independent flips, each flip being 0 with probability `rho`.
    pub fn generate_block(&self, len: usize, seed: u64) -> Result<SourceBlock> {
        let mut rng = rng::seeded(seed);
        self.generate_block_with(len, &mut rng)
    }

    pub(crate) fn generate_block_with(
        &self,
        len: usize,
        rng: &mut rng::Rng,
    ) -> Result<SourceBlock> {
        if len < 1 {
            return Err(invalid("L", "block length must be at least 1"));
        }
        let mut rows = vec![vec![0u8; len]; self.n];
        for i in 0..len {
            let common: u8 = rng.gen_range(0..=1);
            for row in rows.iter_mut() {
                let flip = u8::from(!rng.gen_bool(self.rho));
                row[i] = common ^ flip;
            }
        }
        Ok(SourceBlock { rows })
    }

    /// Probability of the column `x` (one bit per source).
    pub fn joint_pmf(&self, x: &[u8]) -> Result<f64> {
        check_len("source vector", self.n, x.len())?;
        check_binary(x)?;
        let zeros = x.iter().filter(|&&b| b == 0).count();
        Ok(self.pmf_by_zeros(zeros))
    }

    /// Joint pmf of any column with `zeros` zero entries.
    pub fn pmf_by_zeros(&self, zeros: usize) -> f64 {
        let n = self.n;
        let (p, q) = (self.rho, 1.0 - self.rho);
        if n <= LOG_SPACE_ABOVE {
            0.5 * (pow(p, zeros) * pow(q, n - zeros) + pow(q, zeros) * pow(p, n - zeros))
        } else {
            let a = ln_pow(p, zeros) + ln_pow(q, n - zeros);
            let b = ln_pow(q, zeros) + ln_pow(p, n - zeros);
            (log_add(a, b) - std::f64::consts::LN_2).exp()
        }
    }
}

pub(crate) fn validate_rho(rho: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&rho) {
        return Err(invalid("rho", format!("{rho} is outside [0.5, 1]")));
    }
    Ok(())
}

/// `base^exp` with `0^0 = 1`.
pub(crate) fn pow(base: f64, exp: usize) -> f64 {
    base.powi(exp as i32)
}

/// `exp * ln(base)` with `0 * ln 0 = 0`.
pub(crate) fn ln_pow(base: f64, exp: usize) -> f64 {
    if exp == 0 {
        0.0
    } else {
        exp as f64 * base.ln()
    }
}

/// `ln(e^a + e^b)`, tolerant of `-inf` operands.
pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// An `n x L` block of source bits; rows are sources, columns are epochs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBlock {
    rows: Vec<Vec<u8>>,
}

impl SourceBlock {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, k: usize) -> &[u8] {
        &self.rows[k]
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn column(&self, i: usize) -> Vec<u8> {
        self.rows.iter().map(|r| r[i]).collect()
    }
}
