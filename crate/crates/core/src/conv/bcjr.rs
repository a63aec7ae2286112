//! Log-domain BCJR (symbol-by-symbol MAP) on a convolutional trellis.

use super::{RationalGenerator, Termination, Trellis};
use crate::error::{check_len, invalid, Result};
use crate::llr::{clip, LlrBlock};

/// Jacobian logarithm `ln(e^a + e^b)`.
#[inline]
pub fn max_star(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Soft outputs of one BCJR pass.
#[derive(Debug, Clone, PartialEq)]
pub struct BcjrOutput {
    /// Posterior LLRs of the input bits (tail steps excluded).
    pub info_posterior: LlrBlock,
    /// `info_posterior - apriori`.
    pub info_extrinsic: LlrBlock,
    /// Posterior minus channel LLR for every coded bit, tail included.
    pub coded_extrinsic: LlrBlock,
}

/// Decodes one block.
///
/// `apriori` has one LLR per input bit and fixes the block length `L`;
/// `channel` has `outputs * (L + tail)` LLRs in encoder output order, where
/// `tail` is the encoder memory for a terminated block and 0 otherwise.
pub fn bcjr_decode(
    gen: &RationalGenerator,
    channel: &[f64],
    apriori: &[f64],
    termination: Termination,
) -> Result<BcjrOutput> {
    bcjr_with(&gen.trellis(), channel, apriori, termination)
}

pub(crate) fn bcjr_with(
    t: &Trellis,
    channel: &[f64],
    apriori: &[f64],
    termination: Termination,
) -> Result<BcjrOutput> {
    let info_len = apriori.len();
    if info_len == 0 {
        return Err(invalid("apriori", "block must contain at least one bit"));
    }
    let tail = if termination == Termination::Terminated {
        t.memory
    } else {
        0
    };
    let steps = info_len + tail;
    check_len("coded LLRs", steps * t.outputs, channel.len())?;

    let s_count = t.states;
    let nout = t.outputs;
    let chan: Vec<f64> = channel.iter().map(|&x| clip(x)).collect();
    let prior: Vec<f64> = apriori.iter().map(|&x| clip(x)).collect();

    // Half-LLR metric of a set of output bits: +c/2 for a 0, -c/2 for a 1.
    let coded_metric = |step: usize, bits: u32| -> f64 {
        let c = &chan[step * nout..(step + 1) * nout];
        (0..nout)
            .map(|j| {
                if bits >> j & 1 == 0 {
                    0.5 * c[j]
                } else {
                    -0.5 * c[j]
                }
            })
            .sum()
    };
    let branch = |step: usize, s: usize, u: usize| -> Option<f64> {
        if step < info_len {
            let a = if u == 0 {
                0.5 * prior[step]
            } else {
                -0.5 * prior[step]
            };
            Some(a + coded_metric(step, t.out[s][u]))
        } else if usize::from(t.tail_input[s]) == u {
            Some(coded_metric(step, t.out[s][u]))
        } else {
            None
        }
    };

    let neg = f64::NEG_INFINITY;
    let mut alpha = vec![neg; (steps + 1) * s_count];
    alpha[0] = 0.0;
    for step in 0..steps {
        let (cur, nxt) = alpha[step * s_count..(step + 2) * s_count].split_at_mut(s_count);
        for s in 0..s_count {
            if cur[s] == neg {
                continue;
            }
            for u in 0..2 {
                if let Some(g) = branch(step, s, u) {
                    let ns = t.next[s][u] as usize;
                    nxt[ns] = max_star(nxt[ns], cur[s] + g);
                }
            }
        }
        normalize(nxt);
    }

    let mut beta = vec![neg; (steps + 1) * s_count];
    match termination {
        Termination::Terminated => beta[steps * s_count] = 0.0,
        Termination::Open => beta[steps * s_count..].fill(0.0),
    }
    for step in (0..steps).rev() {
        let (cur, nxt) = beta[step * s_count..(step + 2) * s_count].split_at_mut(s_count);
        for s in 0..s_count {
            for u in 0..2 {
                if let Some(g) = branch(step, s, u) {
                    let ns = t.next[s][u] as usize;
                    cur[s] = max_star(cur[s], g + nxt[ns]);
                }
            }
        }
        normalize(cur);
    }

    let mut info_posterior = Vec::with_capacity(info_len);
    let mut info_extrinsic = Vec::with_capacity(info_len);
    let mut coded_extrinsic = Vec::with_capacity(steps * nout);
    for step in 0..steps {
        let a = &alpha[step * s_count..(step + 1) * s_count];
        let b = &beta[(step + 1) * s_count..(step + 2) * s_count];
        let mut by_input = [neg; 2];
        let mut by_output = vec![[neg; 2]; nout];
        for s in 0..s_count {
            if a[s] == neg {
                continue;
            }
            for u in 0..2 {
                if let Some(g) = branch(step, s, u) {
                    let m = a[s] + g + b[t.next[s][u] as usize];
                    by_input[u] = max_star(by_input[u], m);
                    let bits = t.out[s][u];
                    for (j, slot) in by_output.iter_mut().enumerate() {
                        let k = (bits >> j & 1) as usize;
                        slot[k] = max_star(slot[k], m);
                    }
                }
            }
        }
        if step < info_len {
            let post = by_input[0] - by_input[1];
            info_posterior.push(clip(post));
            info_extrinsic.push(clip(post - prior[step]));
        }
        for (j, slot) in by_output.iter().enumerate() {
            coded_extrinsic.push(clip(slot[0] - slot[1] - chan[step * nout + j]));
        }
    }

    Ok(BcjrOutput {
        info_posterior: info_posterior.into(),
        info_extrinsic: info_extrinsic.into(),
        coded_extrinsic: coded_extrinsic.into(),
    })
}

fn normalize(metrics: &mut [f64]) {
    let m = metrics.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m.is_finite() {
        metrics.iter_mut().for_each(|x| *x -= m);
    }
}
