//! The characteristic function `Z` of a component decoder and the searches
//! for its balanced and unbalanced operating points.

use rand::RngCore;

use super::pdf::{connection_output_density, convolve_channel, gaussian_consistent_pdf, Grid};
use crate::channel::ChannelConfig;
use crate::error::{invalid, Error, Result};
use crate::jcd::CodeInstance;
use crate::llr::{LlrBlock, LLR_CLIP};
use crate::region::capacity_from_snr;
use crate::rng;

/// Fewest LLR samples accepted by [`measure_output_snr`].
pub const MIN_SNR_SAMPLES: usize = 10_000;

/// Output SNR counted as "escaped": 90 % of the largest SNR a clipped
/// consistent message can show (`LLR_CLIP / 2`).
pub const ESCAPE_SNR: f64 = 0.9 * LLR_CLIP / 2.0;

/// `SNR = mean / 2`, the consistent-Gaussian reading of a set of LLRs
/// (clamped at 0).
pub fn measure_output_snr(llr_samples: &[f64]) -> Result<f64> {
    if llr_samples.len() < MIN_SNR_SAMPLES {
        return Err(invalid(
            "llr_samples",
            format!(
                "at least {MIN_SNR_SAMPLES} are required, got {}",
                llr_samples.len()
            ),
        ));
    }
    let mean = llr_samples.iter().sum::<f64>() / llr_samples.len() as f64;
    Ok((0.5 * mean).max(0.0))
}

/// `mean² / variance`: agrees with [`measure_output_snr`] when the
/// samples really are consistent Gaussian.
pub fn variance_snr(llr_samples: &[f64]) -> Result<f64> {
    measure_output_snr(llr_samples)?;
    let len = llr_samples.len() as f64;
    let mean = llr_samples.iter().sum::<f64>() / len;
    let var = llr_samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (len - 1.0);
    if var == 0.0 {
        return Ok(if mean > 0.0 { f64::INFINITY } else { 0.0 });
    }
    Ok(mean * mean / var)
}

/// Monte Carlo and search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitParams {
    /// Tuples per connection-node density.
    pub mc_samples: usize,
    /// Extrinsic LLRs collected per `Z` evaluation (whole blocks are decoded).
    pub output_samples: usize,
    /// Internal decoder iterations; `None` uses 10 for SCCC and 50 for LDPC.
    pub internal_iters: Option<usize>,
    pub grid: Grid,
    /// A-priori SNR of the other sources when searching the unbalanced point.
    pub unbalanced_snr_in: f64,
    pub escape_snr: f64,
    /// Escaped evaluations, with fixed seeds, needed to confirm convergence.
    pub escape_run: usize,
    /// Fixed-point steps per balanced probe.
    pub budget: usize,
    /// A balanced probe stops after this many steps without improvement.
    pub stall_steps: usize,
    /// Channel SNR search bracket in dB.
    pub bracket_db: (f64, f64),
    /// Bisection stops when the capacity bracket is at most this wide.
    pub tol: f64,
    pub seed: u64,
}

impl Default for ExitParams {
    fn default() -> Self {
        Self {
            mc_samples: 1_000_000,
            output_samples: MIN_SNR_SAMPLES,
            internal_iters: None,
            grid: Grid::default(),
            unbalanced_snr_in: 50.0,
            escape_snr: ESCAPE_SNR,
            escape_run: 2,
            budget: 30,
            stall_steps: 3,
            bracket_db: (-12.0, 6.0),
            tol: 5e-3,
            seed: 0,
        }
    }
}

impl ExitParams {
    pub fn validate(&self) -> Result<()> {
        if self.output_samples < MIN_SNR_SAMPLES {
            return Err(invalid(
                "output_samples",
                format!("must be at least {MIN_SNR_SAMPLES}"),
            ));
        }
        if self.internal_iters == Some(0) {
            return Err(invalid("internal_iters", "must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol", "must be positive"));
        }
        if !(self.bracket_db.0 < self.bracket_db.1) {
            return Err(invalid("bracket_db", "lower end must be below upper end"));
        }
        if self.escape_run < 1 || self.budget < 1 || self.stall_steps < 1 {
            return Err(invalid(
                "budget",
                "escape_run, budget and stall_steps must be positive",
            ));
        }
        if !(self.unbalanced_snr_in >= 0.0) {
            return Err(invalid("unbalanced_snr_in", "must be non-negative"));
        }
        Ok(())
    }

    fn iters_for(&self, code: &CodeInstance) -> usize {
        self.internal_iters.unwrap_or(match code {
            CodeInstance::Sccc(_) => crate::jcd::DEFAULT_SCCC_INTERNAL_ITERS,
            CodeInstance::Ldpc(_) => crate::jcd::DEFAULT_LDPC_INTERNAL_ITERS,
        })
    }
}

/// One evaluation of `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitPoint {
    /// A-priori SNR of each other source.
    pub snr_in: Vec<f64>,
    /// Channel SNR.
    pub gamma: f64,
    /// Extrinsic SNR at the decoder output.
    pub snr_out: f64,
    /// SNR of the connection-node output fed to the decoder.
    pub apriori_snr: f64,
    /// SNR of channel plus a-priori at the information positions.
    pub systematic_snr: f64,
}

/// Evaluates `Z(snr_in, γ)` for the decoder of one source.
///
/// The other sources' messages are consistent Gaussians at `snr_in`, passed
/// through the correlation flips and the connection rule to get the a-priori
/// density. The all-zero codeword is sent over the channel at `gamma`,
/// a-priori LLRs drawn from that density are attached to the information
/// bits, and the decoder runs its fixed number of internal iterations.
/// `snr_out` is measured on the extrinsic LLRs of the information bits.
pub fn z_surface(
    code: &CodeInstance,
    rho: f64,
    gamma: f64,
    snr_in: &[f64],
    params: &ExitParams,
    seed: u64,
) -> Result<ExitPoint> {
    params.validate()?;
    let n = snr_in.len() + 1;
    if let Some(s) = snr_in.iter().find(|s| !(**s >= 0.0)) {
        return Err(invalid("snr_in", format!("must be non-negative, got {s}")));
    }
    let channel = ChannelConfig::from_gamma(gamma)?;
    let inputs = snr_in
        .iter()
        .map(|&s| gaussian_consistent_pdf(2.0 * s, params.grid))
        .collect::<Result<Vec<_>>>()?;
    let apriori_pdf = connection_output_density(&inputs, rho, n, params.mc_samples, seed)?;
    let channel_pdf = gaussian_consistent_pdf(channel.llr_mean(), params.grid)?;
    let systematic = convolve_channel(&apriori_pdf, &channel_pdf)?;

    let iters = params.iters_for(code);
    let l = code.info_len();
    let blocks = params.output_samples.div_ceil(l);
    let zeros = vec![0u8; code.code_len()];
    let sampler = apriori_pdf.sampler();
    let mut extrinsic = Vec::with_capacity(blocks * l);
    for b in 0..blocks {
        let mut r = rng::stream(seed, 1 + b as u64);
        let llr = channel.transmit(&zeros, &mut r)?;
        let apriori: LlrBlock = (0..l).map(|_| sampler.sample(&mut r)).collect();
        let out = code.decode(&llr, &apriori, iters, false)?;
        extrinsic.extend_from_slice(&out.extrinsic);
    }
    Ok(ExitPoint {
        snr_in: snr_in.to_vec(),
        gamma,
        snr_out: measure_output_snr(&extrinsic)?,
        apriori_snr: (0.5 * apriori_pdf.mean()).max(0.0),
        systematic_snr: (0.5 * systematic.mean()).max(0.0),
    })
}

/// Result of a threshold search.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    /// Capacity `½ log₂(1 + γ)` at the smallest converging channel SNR found.
    pub lambda: f64,
    pub gamma: f64,
    /// Every `Z` evaluation made by the search, in order.
    pub trace: Vec<ExitPoint>,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn step_seed(seed: u64, step: usize) -> u64 {
    rng::stream2(seed, 0x45584954, step as u32).next_u64()
}

/// Bisection in dB on `gamma` for the smallest SNR at which `converges`
/// holds. The same seeds are used at every probe.
fn bisect(
    params: &ExitParams,
    mut converges: impl FnMut(f64, &mut Vec<ExitPoint>) -> Result<bool>,
) -> Result<ThresholdResult> {
    params.validate()?;
    let mut trace = Vec::new();
    let (mut lo, mut hi) = params.bracket_db;
    if !converges(db_to_linear(hi), &mut trace)? {
        return Err(Error::Bracket(format!(
            "no convergence at the bracket top ({hi} dB)"
        )));
    }
    if converges(db_to_linear(lo), &mut trace)? {
        return Err(Error::Bracket(format!(
            "already converges at the bracket bottom ({lo} dB)"
        )));
    }
    let lambda = |db: f64| capacity_from_snr(db_to_linear(db));
    while lambda(hi)? - lambda(lo)? > params.tol {
        let mid = 0.5 * (lo + hi);
        if converges(db_to_linear(mid), &mut trace)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdResult {
        lambda: lambda(hi)?,
        gamma: db_to_linear(hi),
        trace,
    })
}

/// Confirms convergence at `snr_in`: `params.escape_run` evaluations with
/// the fixed confirmation seeds must all reach the escape SNR. Both searches
/// confirm with the same seeds, so with common random numbers a balanced
/// confirmation at `s ≤ unbalanced_snr_in` implies the unbalanced one.
fn confirm(
    code: &CodeInstance,
    rho: f64,
    gamma: f64,
    snr_in: &[f64],
    params: &ExitParams,
    trace: &mut Vec<ExitPoint>,
) -> Result<bool> {
    for run in 0..params.escape_run {
        let p = z_surface(
            code,
            rho,
            gamma,
            snr_in,
            params,
            step_seed(params.seed, run),
        )?;
        let escaped = p.snr_out >= params.escape_snr;
        trace.push(p);
        if !escaped {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Unbalanced point: the other `n − 1` sources have a-priori SNR
/// `params.unbalanced_snr_in`.
pub fn find_lambda_unb(
    code: &CodeInstance,
    n: usize,
    rho: f64,
    params: &ExitParams,
) -> Result<ThresholdResult> {
    if n < 2 {
        return Err(invalid("n", "at least two sources are required"));
    }
    let snr_in = vec![params.unbalanced_snr_in; n - 1];
    bisect(params, |gamma, trace| {
        confirm(code, rho, gamma, &snr_in, params, trace)
    })
}

/// Runs the balanced fixed-point map `s ← Z([s; n − 1], γ)` from `s = 0`
/// until it reaches the escape SNR, stalls or exhausts its budget. An escape
/// is then confirmed at the reached SNR. Every evaluation is appended to
/// `trace`.
pub fn balanced_trajectory(
    code: &CodeInstance,
    n: usize,
    rho: f64,
    gamma: f64,
    params: &ExitParams,
    trace: &mut Vec<ExitPoint>,
) -> Result<bool> {
    let mut s = 0.0;
    let mut best = f64::NEG_INFINITY;
    let mut stall = 0;
    for step in 0..params.budget {
        let seed = step_seed(params.seed, params.escape_run + step);
        let p = z_surface(code, rho, gamma, &vec![s; n - 1], params, seed)?;
        s = p.snr_out;
        trace.push(p);
        if s >= params.escape_snr {
            let s_in = s.min(params.unbalanced_snr_in);
            return confirm(code, rho, gamma, &vec![s_in; n - 1], params, trace);
        }
        if s > best + 1e-2 {
            best = s;
            stall = 0;
        } else {
            stall += 1;
            if stall >= params.stall_steps {
                return Ok(false);
            }
        }
    }
    Ok(false)
}

/// Balanced point: all channels at the same SNR, all a-priori SNRs equal.
pub fn find_lambda_bal(
    code: &CodeInstance,
    n: usize,
    rho: f64,
    params: &ExitParams,
) -> Result<ThresholdResult> {
    if n < 2 {
        return Err(invalid("n", "at least two sources are required"));
    }
    bisect(params, |gamma, trace| {
        balanced_trajectory(code, n, rho, gamma, params, trace)
    })
}

/// `gamma,snr_in,snr_out` rows; `snr_in` is the first other source's SNR.
pub fn trace_csv(trace: &[ExitPoint]) -> String {
    let mut out = String::from("gamma,snr_in,snr_out\n");
    for p in trace {
        let s = p.snr_in.first().copied().unwrap_or(0.0);
        out += &format!("{:.6},{:.6},{:.6}\n", p.gamma, s, p.snr_out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn snr_estimators() {
        let mut r = rng::seeded(1);
        let d = Normal::new(8.0, 4.0).unwrap();
        let x: Vec<f64> = (0..200_000).map(|_| d.sample(&mut r)).collect();
        let snr = measure_output_snr(&x).unwrap();
        assert!((snr - 4.0).abs() < 0.08, "{snr}");
        assert!((variance_snr(&x).unwrap() - 4.0).abs() < 0.08);
        assert_eq!(
            measure_output_snr(&vec![0.0; MIN_SNR_SAMPLES]).unwrap(),
            0.0
        );
        assert_eq!(variance_snr(&vec![0.0; MIN_SNR_SAMPLES]).unwrap(), 0.0);
        assert!(measure_output_snr(&[1.0; 10]).is_err());
    }

    #[test]
    fn snr_of_consistent_samples() {
        let g = Grid::default();
        let p = gaussian_consistent_pdf(6.0, g).unwrap();
        let s = p.sampler();
        let mut r = rng::seeded(2);
        let x: Vec<f64> = (0..100_000).map(|_| s.sample(&mut r)).collect();
        assert!((measure_output_snr(&x).unwrap() - 3.0).abs() < 0.05);
    }

    #[test]
    fn params_validation() {
        assert!(ExitParams::default().validate().is_ok());
        let bad = ExitParams {
            tol: 0.0,
            ..ExitParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExitParams {
            bracket_db: (3.0, 1.0),
            ..ExitParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExitParams {
            output_samples: 10,
            ..ExitParams::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn escape_threshold_is_reachable() {
        const _: () = assert!(ESCAPE_SNR < LLR_CLIP / 2.0);
        let p = gaussian_consistent_pdf(200.0, Grid::default()).unwrap();
        assert!(0.5 * p.mean() > ESCAPE_SNR);
    }
}
