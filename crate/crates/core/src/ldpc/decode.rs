//! Flooding sum-product decoding.

use super::LdpcCode;
use crate::error::{check_len, invalid, Result};
use crate::llr::{clip, hard_bit, LlrBlock};

/// Largest tanh-product magnitude passed to `atanh`.
const TANH_LIMIT: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LdpcDecodeOutput {
    /// Posterior LLRs of the information bits, in information order.
    pub posterior: LlrBlock,
    /// Posterior minus a-priori, in information order.
    pub extrinsic: LlrBlock,
    /// All checks were satisfied after some iteration.
    pub converged: bool,
    /// Iterations actually run.
    pub iterations: usize,
    /// Hard decisions on the whole codeword after the last iteration.
    pub codeword: Vec<u8>,
}

/// Runs up to `iters` flooding iterations. `apriori` (length `L`) is added
/// only at the systematic variable nodes. With `early_exit` the decoder stops
/// at the first iteration whose hard decisions satisfy every check.
pub fn sum_product_decode(
    code: &LdpcCode,
    channel: &[f64],
    apriori: &[f64],
    iters: usize,
    early_exit: bool,
) -> Result<LdpcDecodeOutput> {
    check_len("channel LLRs", code.code_len(), channel.len())?;
    check_len("a-priori LLRs", code.info_len(), apriori.len())?;
    if iters == 0 {
        return Err(invalid("iters", "at least one iteration is required"));
    }
    let n = code.code_len();
    let prior: Vec<f64> = (0..n)
        .map(|v| {
            let a = code.info_index(v).map_or(0.0, |j| clip(apriori[j]));
            clip(channel[v]) + a
        })
        .collect();

    // Edges are numbered row by row; `var_edges[v]` lists the edges of `v`.
    let rows = code.rows();
    let mut row_start = Vec::with_capacity(rows.len() + 1);
    let mut edge_var = Vec::with_capacity(code.num_edges());
    row_start.push(0);
    for row in rows {
        edge_var.extend_from_slice(row);
        row_start.push(edge_var.len());
    }
    let mut var_edges = vec![Vec::new(); n];
    for (e, &v) in edge_var.iter().enumerate() {
        var_edges[v].push(e);
    }

    let mut v2c: Vec<f64> = edge_var.iter().map(|&v| clip(prior[v])).collect();
    let mut c2v = vec![0.0; edge_var.len()];
    let mut total = prior.clone();
    let mut hard = vec![0u8; n];
    let mut converged = false;
    let mut iterations = 0;
    let mut tanhs = Vec::new();
    let mut suffix = Vec::new();

    for _ in 0..iters {
        iterations += 1;
        for w in row_start.windows(2) {
            let (a, b) = (w[0], w[1]);
            tanhs.clear();
            tanhs.extend(v2c[a..b].iter().map(|&x| (0.5 * x).tanh()));
            suffix.clear();
            suffix.resize(b - a + 1, 1.0);
            for k in (0..b - a).rev() {
                suffix[k] = suffix[k + 1] * tanhs[k];
            }
            let mut prefix = 1.0;
            for k in 0..b - a {
                let p = (prefix * suffix[k + 1]).clamp(-TANH_LIMIT, TANH_LIMIT);
                c2v[a + k] = clip(2.0 * p.atanh());
                prefix *= tanhs[k];
            }
        }
        for v in 0..n {
            let t = prior[v] + var_edges[v].iter().map(|&e| c2v[e]).sum::<f64>();
            total[v] = t;
            hard[v] = hard_bit(t);
            for &e in &var_edges[v] {
                v2c[e] = clip(t - c2v[e]);
            }
        }
        if code.syndrome(&hard).is_empty() {
            converged = true;
            if early_exit {
                break;
            }
        }
    }

    let info = code.systematic_positions();
    let posterior: LlrBlock = info.iter().map(|&v| clip(total[v])).collect();
    let extrinsic: LlrBlock = info
        .iter()
        .enumerate()
        .map(|(j, &v)| clip(total[v] - clip(apriori[j])))
        .collect();
    Ok(LdpcDecodeOutput {
        posterior,
        extrinsic,
        converged,
        iterations,
        codeword: hard,
    })
}
