//! Recursive convolutional codes over GF(2), their BCJR decoder and the
//! serial concatenation (outer code, bit interleaver, rate-1 inner code).

mod bcjr;
mod sccc;

pub use bcjr::{bcjr_decode, max_star, BcjrOutput};
pub use sccc::{sccc_decode, ScccCode, ScccOutput};

use crate::error::{check_binary, invalid, Error, Result};

/// Whether the encoder appends tail bits that return the state to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Terminated,
    Open,
}

/// A set of rational transfer functions `n_j(D) / d(D)` sharing one
/// feedback polynomial. Polynomials are bit masks: bit `i` holds the
/// coefficient of `D^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalGenerator {
    numerators: Vec<u32>,
    denominator: u32,
}

const MAX_MEMORY: usize = 12;

impl RationalGenerator {
    pub fn new(numerators: Vec<u32>, denominator: u32) -> Result<Self> {
        if denominator & 1 == 0 {
            return Err(invalid("denominator", "constant term must be 1"));
        }
        if numerators.is_empty() || numerators.contains(&0) {
            return Err(invalid(
                "numerators",
                "need at least one non-zero numerator",
            ));
        }
        let g = Self {
            numerators,
            denominator,
        };
        if g.memory() > MAX_MEMORY {
            return Err(invalid(
                "memory",
                format!("{} exceeds {MAX_MEMORY}", g.memory()),
            ));
        }
        Ok(g)
    }

    /// Builds from coefficient lists, lowest power first.
    pub fn from_coefficients(numerators: &[&[u8]], denominator: &[u8]) -> Result<Self> {
        let to_mask = |c: &[u8]| -> Result<u32> {
            check_binary(c)?;
            if c.len() > 31 {
                return Err(invalid("polynomial", "degree too large"));
            }
            Ok(c.iter()
                .enumerate()
                .fold(0, |m, (i, &b)| m | (u32::from(b) << i)))
        };
        let nums = numerators
            .iter()
            .map(|c| to_mask(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nums, to_mask(denominator)?)
    }

    /// Outer code of the reference SCCC: `[(1+D²)/(1+D+D²), 1/(1+D+D²)]`.
    pub fn reference_outer() -> Self {
        Self::new(vec![0b101, 0b001], 0b111).expect("valid generator")
    }

    /// Inner code of the reference SCCC: `(1+D²)/(1+D+D²+D³)`.
    pub fn reference_inner() -> Self {
        Self::new(vec![0b101], 0b1111).expect("valid generator")
    }

    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    /// Number of output bits per input bit.
    pub fn outputs(&self) -> usize {
        self.numerators.len()
    }

    /// Encoder memory: the largest polynomial degree.
    pub fn memory(&self) -> usize {
        std::iter::once(self.denominator)
            .chain(self.numerators.iter().copied())
            .map(|p| (32 - p.leading_zeros()) as usize - 1)
            .max()
            .unwrap_or(0)
    }

    /// `den: num num ...` in octal, bit `i` of each value being the `D^i` coefficient.
    pub fn to_octal(&self) -> String {
        let nums: Vec<String> = self.numerators.iter().map(|p| format!("{p:o}")).collect();
        format!("{:o}: {}", self.denominator, nums.join(" "))
    }

    pub fn from_octal(text: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::Parse { line: 0, reason };
        let (den, nums) = text
            .split_once(':')
            .ok_or_else(|| parse_err(format!("expected `den: num ...`, got `{text}`")))?;
        let oct = |s: &str| {
            u32::from_str_radix(s.trim(), 8).map_err(|e| parse_err(format!("`{s}`: {e}")))
        };
        let numerators = nums
            .split_whitespace()
            .map(oct)
            .collect::<Result<Vec<_>>>()?;
        Self::new(numerators, oct(den)?)
    }

    pub(crate) fn trellis(&self) -> Trellis {
        Trellis::new(self)
    }
}

#[inline]
fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

/// State-transition tables. State bit `i - 1` holds the register value `w_{k-i}`.
#[derive(Debug, Clone)]
pub(crate) struct Trellis {
    pub memory: usize,
    pub states: usize,
    pub outputs: usize,
    pub next: Vec<[u32; 2]>,
    /// Output bits of each branch; bit `j` is output `j`.
    pub out: Vec<[u32; 2]>,
    /// Input that clears the register (used for tail bits).
    pub tail_input: Vec<u8>,
}

impl Trellis {
    fn new(g: &RationalGenerator) -> Self {
        let memory = g.memory();
        let states = 1usize << memory;
        let mask = (states - 1) as u32;
        let feedback_taps = g.denominator >> 1;
        let mut next = Vec::with_capacity(states);
        let mut out = Vec::with_capacity(states);
        let mut tail_input = Vec::with_capacity(states);
        for s in 0..states as u32 {
            let fb = parity(feedback_taps & s);
            let mut nx = [0; 2];
            let mut o = [0; 2];
            for u in 0..2u8 {
                let w = u32::from(u ^ fb);
                let reg = (s << 1) | w;
                o[u as usize] = g.numerators.iter().enumerate().fold(0, |acc, (j, &num)| {
                    acc | (u32::from(parity(num & reg)) << j)
                });
                nx[u as usize] = reg & mask;
            }
            next.push(nx);
            out.push(o);
            tail_input.push(fb);
        }
        Self {
            memory,
            states,
            outputs: g.outputs(),
            next,
            out,
            tail_input,
        }
    }
}

/// Encodes `bits` starting from the zero state. With
/// [`Termination::Terminated`], `memory` tail steps return the state to zero.
/// Output bits are emitted step by step, all outputs of a step together.
pub fn conv_encode(
    bits: &[u8],
    gen: &RationalGenerator,
    termination: Termination,
) -> Result<Vec<u8>> {
    if bits.is_empty() {
        return Err(invalid("bits", "input must not be empty"));
    }
    check_binary(bits)?;
    let t = gen.trellis();
    Ok(encode_with(&t, bits, termination).0)
}

/// Returns the coded bits and the final state.
pub(crate) fn encode_with(t: &Trellis, bits: &[u8], termination: Termination) -> (Vec<u8>, u32) {
    let steps = bits.len()
        + if termination == Termination::Terminated {
            t.memory
        } else {
            0
        };
    let mut coded = Vec::with_capacity(steps * t.outputs);
    let mut state = 0u32;
    let push = |state: &mut u32, u: u8, coded: &mut Vec<u8>| {
        let o = t.out[*state as usize][u as usize];
        coded.extend((0..t.outputs).map(|j| ((o >> j) & 1) as u8));
        *state = t.next[*state as usize][u as usize];
    };
    for &u in bits {
        push(&mut state, u, &mut coded);
    }
    if termination == Termination::Terminated {
        for _ in 0..t.memory {
            let u = t.tail_input[state as usize];
            push(&mut state, u, &mut coded);
        }
    }
    (coded, state)
}
