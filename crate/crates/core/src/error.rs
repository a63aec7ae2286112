use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter is outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two inputs that must agree in length (or shape) do not.
    #[error("length mismatch for {what}: expected {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A vector that must be binary contains something other than 0 or 1.
    #[error("non-binary entry {value} at index {index}")]
    NonBinary { index: usize, value: u8 },

    /// The exact connection-node rule enumerates `2^(n-1)` configurations.
    #[error("exact connection-node combining supports at most {max} sources, got {n}")]
    TooManySources { n: usize, max: usize },

    /// LDPC construction could not produce a usable parity-check matrix.
    #[error("LDPC construction failed: {0}")]
    Construction(String),

    /// A probability density does not fit on its grid.
    #[error("grid too narrow: {leakage:e} of the mass falls outside [{min}, {max}]")]
    GridTooNarrow { leakage: f64, min: f64, max: f64 },

    /// Two densities live on incompatible grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A threshold search could not bracket the decoding threshold.
    #[error("threshold search failed: {0}")]
    Bracket(String),

    /// A projection was requested for fixed capacities that leave no feasible point.
    #[error("region is empty for the fixed capacities: {0}")]
    EmptyRegion(String),

    /// Malformed code description or parity-check text.
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            what,
            expected,
            actual,
        })
    }
}

pub(crate) fn check_binary(bits: &[u8]) -> Result<()> {
    match bits.iter().position(|&b| b > 1) {
        Some(index) => Err(Error::NonBinary {
            index,
            value: bits[index],
        }),
        None => Ok(()),
    }
}
