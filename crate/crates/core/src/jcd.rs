//! Joint channel decoding of correlated sources.
//!
//! Each source has its own component decoder. Between component decoders sit
//! connection nodes: for every information position, the node for source `ℓ`
//! turns the other `n − 1` decoders' extrinsic LLRs into an a-priori LLR for
//! `x_ℓ` by marginalizing over the common bit. Decoders run one after the
//! other (serial schedule); a full pass over all `n` decoders is one external
//! iteration.

use crate::channel::{channel_llr, ChannelConfig};
use crate::conv::{sccc_decode, ScccCode};
use crate::error::{check_binary, check_len, invalid, Error, Result};
use crate::ldpc::{sum_product_decode, LdpcCode};
use crate::llr::{clip, LlrBlock};
use crate::rng;
use crate::source::{log_add, validate_rho, CorrelationModel};

/// Largest `n` for which the connection rule is evaluated exactly.
pub const MAX_CONNECTION_SOURCES: usize = 12;

/// Connection node for `n` sources with retention probability `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionNode {
    n: usize,
    rho: f64,
    /// `ln W_num(m)` where `m` counts zeros among the other `n − 1` bits.
    ln_num: Vec<f64>,
    /// `ln W_den(m)`.
    ln_den: Vec<f64>,
}

impl ConnectionNode {
    pub fn new(n: usize, rho: f64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", "a connection node needs at least two sources"));
        }
        if n > MAX_CONNECTION_SOURCES {
            return Err(Error::TooManySources {
                n,
                max: MAX_CONNECTION_SOURCES,
            });
        }
        validate_rho(rho)?;
        let q = 1.0 - rho;
        let w = |a: usize, b: usize| rho.powi(a as i32) * q.powi(b as i32);
        let ln_num = (0..n)
            .map(|m| (w(m + 1, n - 1 - m) + w(n - 1 - m, m + 1)).ln())
            .collect();
        let ln_den = (0..n).map(|m| (w(m, n - m) + w(n - m, m)).ln()).collect();
        Ok(Self {
            n,
            rho,
            ln_num,
            ln_den,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Output LLR for one bit given the other `n − 1` sources' LLRs.
    pub fn connection_llr(&self, llr_in: &[f64]) -> Result<f64> {
        check_len("connection inputs", self.n - 1, llr_in.len())?;
        let mut scratch = vec![(0.0, 0.0); self.n - 1];
        Ok(self.combine(llr_in.iter().copied(), &mut scratch))
    }

    /// Largest output magnitude the node can produce.
    pub fn saturation(&self) -> f64 {
        let max_num = self
            .ln_num
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let min_den = self.ln_den.iter().copied().fold(f64::INFINITY, f64::min);
        (max_num - min_den).min(crate::llr::LLR_CLIP)
    }

    fn combine(&self, inputs: impl Iterator<Item = f64>, scratch: &mut [(f64, f64)]) -> f64 {
        // (ln P(x' = 0), ln P(x' = 1)) per input.
        for (s, l) in scratch.iter_mut().zip(inputs) {
            let l = clip(l);
            *s = (-softplus(-l), -softplus(l));
        }
        // Configurations are visited in complementary pairs (x', ~x'). Since
        // W_den(m) = W_num(n − 1 − m), each pair contributes the same two
        // terms to numerator and denominator with the roles of x' and ~x'
        // swapped, which keeps the rule exactly antisymmetric.
        let top = self.n - 1;
        let mut num = f64::NEG_INFINITY;
        let mut den = f64::NEG_INFINITY;
        for config in 0u32..1 << (top - 1) {
            let mut ln_p = 0.0;
            let mut ln_pc = 0.0;
            let mut zeros = 0;
            for (j, &(p0, p1)) in scratch.iter().enumerate() {
                if config >> j & 1 == 0 {
                    ln_p += p0;
                    ln_pc += p1;
                    zeros += 1;
                } else {
                    ln_p += p1;
                    ln_pc += p0;
                }
            }
            let (w, wc) = (self.ln_num[zeros], self.ln_num[top - zeros]);
            num = log_add(num, log_add(ln_p + w, ln_pc + wc));
            den = log_add(den, log_add(ln_pc + w, ln_p + wc));
        }
        if num == den {
            return 0.0;
        }
        clip(num - den)
    }

    /// Applies the rule columnwise to `n − 1` rows of equal length.
    pub fn connection_block(&self, llr_in: &[&[f64]]) -> Result<LlrBlock> {
        check_len("connection input rows", self.n - 1, llr_in.len())?;
        let len = llr_in[0].len();
        for row in llr_in {
            check_len("connection input row", len, row.len())?;
        }
        let mut scratch = vec![(0.0, 0.0); self.n - 1];
        Ok((0..len)
            .map(|i| self.combine(llr_in.iter().map(|row| row[i]), &mut scratch))
            .collect())
    }

    /// A-priori LLRs for decoder `target` from all `n` decoders' extrinsics
    /// (the target's own row is skipped).
    pub fn apriori_for(&self, extrinsic: &[LlrBlock], target: usize) -> Result<LlrBlock> {
        check_len("extrinsic rows", self.n, extrinsic.len())?;
        if target >= self.n {
            return Err(invalid("target", format!("source {target} out of range")));
        }
        let others: Vec<&[f64]> = extrinsic
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != target)
            .map(|(_, row)| row.as_ref())
            .collect();
        self.connection_block(&others)
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// A component code used by every source.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeInstance {
    Sccc(ScccCode),
    Ldpc(LdpcCode),
}

/// Output of one component decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentOutput {
    pub posterior: LlrBlock,
    pub extrinsic: LlrBlock,
}

impl CodeInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Sccc(_) => "sccc",
            Self::Ldpc(_) => "ldpc",
        }
    }

    pub fn info_len(&self) -> usize {
        match self {
            Self::Sccc(c) => c.info_len(),
            Self::Ldpc(c) => c.info_len(),
        }
    }

    pub fn code_len(&self) -> usize {
        match self {
            Self::Sccc(c) => c.code_len(),
            Self::Ldpc(c) => c.code_len(),
        }
    }

    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.code_len() as f64
    }

    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        match self {
            Self::Sccc(c) => c.encode(info),
            Self::Ldpc(c) => c.encode(info),
        }
    }

    /// Runs `internal_iters` component iterations. `early_exit` lets the LDPC
    /// decoder stop on a zero syndrome; it has no effect on SCCC.
    pub fn decode(
        &self,
        channel: &[f64],
        apriori: &[f64],
        internal_iters: usize,
        early_exit: bool,
    ) -> Result<ComponentOutput> {
        match self {
            Self::Sccc(c) => {
                let out = sccc_decode(c, channel, apriori, internal_iters)?;
                Ok(ComponentOutput {
                    posterior: out.posterior,
                    extrinsic: out.extrinsic,
                })
            }
            Self::Ldpc(c) => {
                let out = sum_product_decode(c, channel, apriori, internal_iters, early_exit)?;
                Ok(ComponentOutput {
                    posterior: out.posterior,
                    extrinsic: out.extrinsic,
                })
            }
        }
    }
}

pub const DEFAULT_EXTERNAL_ITERS: usize = 5;
pub const DEFAULT_SCCC_INTERNAL_ITERS: usize = 10;
pub const DEFAULT_LDPC_INTERNAL_ITERS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct JcdConfig {
    pub n: usize,
    pub rho: f64,
    /// One channel per source.
    pub channels: Vec<ChannelConfig>,
    pub code: CodeInstance,
    pub internal_iters: usize,
    pub external_iters: usize,
    /// Stop external iterations once hard decisions repeat, and let LDPC
    /// decoders stop on a zero syndrome.
    pub early_exit: bool,
    pub max_blocks: usize,
    pub target_errors: usize,
    pub seed: u64,
}

impl JcdConfig {
    /// Configuration with default iteration counts for the code kind and all
    /// links at SNR `gamma`.
    pub fn new(n: usize, rho: f64, gamma: f64, code: CodeInstance, seed: u64) -> Result<Self> {
        let internal_iters = match code {
            CodeInstance::Sccc(_) => DEFAULT_SCCC_INTERNAL_ITERS,
            CodeInstance::Ldpc(_) => DEFAULT_LDPC_INTERNAL_ITERS,
        };
        let config = Self {
            n,
            rho,
            channels: vec![ChannelConfig::from_gamma(gamma)?; n],
            code,
            internal_iters,
            external_iters: DEFAULT_EXTERNAL_ITERS,
            early_exit: true,
            max_blocks: 100,
            target_errors: 100,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        ConnectionNode::new(self.n, self.rho)?;
        check_len("channels", self.n, self.channels.len())?;
        if self.internal_iters < 1 {
            return Err(invalid("internal_iters", "must be at least 1"));
        }
        if self.external_iters < 1 {
            return Err(invalid("external_iters", "must be at least 1"));
        }
        if self.max_blocks < 1 {
            return Err(invalid("max_blocks", "must be at least 1"));
        }
        Ok(())
    }
}

/// State after one external iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    /// Hard decisions per source.
    pub decisions: Vec<Vec<u8>>,
    /// Mean `|posterior LLR|` per source.
    pub mean_abs_llr: Vec<f64>,
    /// Decisions that changed since the previous round, per source.
    pub changed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointDecodeOutput {
    pub bits: Vec<Vec<u8>>,
    pub posterior: Vec<LlrBlock>,
    pub trace: Vec<RoundTrace>,
}

/// Joint decoding from received signals `y` (one row per source).
pub fn joint_decode(config: &JcdConfig, observations: &[Vec<f64>]) -> Result<JointDecodeOutput> {
    check_len("observation rows", config.n, observations.len())?;
    let llrs: Vec<LlrBlock> = observations
        .iter()
        .zip(&config.channels)
        .map(|(y, ch)| channel_llr(y, ch.ec(), ch.n0()))
        .collect();
    joint_decode_llr(config, &llrs)
}

/// Joint decoding from channel LLRs (one row per source).
pub fn joint_decode_llr(
    config: &JcdConfig,
    channel_llrs: &[LlrBlock],
) -> Result<JointDecodeOutput> {
    config.validate()?;
    check_len("channel LLR rows", config.n, channel_llrs.len())?;
    for row in channel_llrs {
        check_len("channel LLRs", config.code.code_len(), row.len())?;
    }
    let node = ConnectionNode::new(config.n, config.rho)?;
    let l = config.code.info_len();
    let mut extrinsic = vec![LlrBlock::zeros(l); config.n];
    let mut posterior = vec![LlrBlock::zeros(l); config.n];
    let mut trace: Vec<RoundTrace> = Vec::new();
    for _ in 0..config.external_iters {
        for k in 0..config.n {
            let apriori = node.apriori_for(&extrinsic, k)?;
            let out = config.code.decode(
                &channel_llrs[k],
                &apriori,
                config.internal_iters,
                config.early_exit,
            )?;
            extrinsic[k] = out.extrinsic;
            posterior[k] = out.posterior;
        }
        let decisions: Vec<Vec<u8>> = posterior.iter().map(LlrBlock::hard_decisions).collect();
        let changed: Vec<usize> = match trace.last() {
            Some(prev) => decisions
                .iter()
                .zip(&prev.decisions)
                .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count())
                .collect(),
            None => vec![l; config.n],
        };
        let mean_abs_llr = posterior
            .iter()
            .map(|p| p.iter().map(|x| x.abs()).sum::<f64>() / l as f64)
            .collect();
        let stable = !trace.is_empty() && changed.iter().all(|&c| c == 0);
        trace.push(RoundTrace {
            decisions,
            mean_abs_llr,
            changed,
        });
        if config.early_exit && stable {
            break;
        }
    }
    let bits = trace.last().expect("at least one round").decisions.clone();
    Ok(JointDecodeOutput {
        bits,
        posterior,
        trace,
    })
}

/// BER of one source at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRow {
    pub gammas: Vec<f64>,
    pub source: usize,
    pub ber: f64,
    /// 95 % normal-approximation half-width.
    pub ci95: f64,
    pub blocks: usize,
    pub errors: usize,
}

impl BerRow {
    pub fn csv_header(n: usize) -> String {
        let gammas: Vec<String> = (1..=n).map(|k| format!("gamma_{k}")).collect();
        format!("{},source,ber,ci95,blocks,errors", gammas.join(","))
    }

    pub fn to_csv(&self) -> String {
        let gammas: Vec<String> = self.gammas.iter().map(|g| format!("{g:.6}")).collect();
        format!(
            "{},{},{:.6e},{:.6e},{},{}",
            gammas.join(","),
            self.source + 1,
            self.ber,
            self.ci95,
            self.blocks,
            self.errors
        )
    }
}

/// Monte Carlo BER at one grid point. Block `b` of point `point` draws its
/// sources and noise from its own random stream, so results do not depend on
/// how points are scheduled. Blocks run until every source has at least
/// `target_errors` information-bit errors or `max_blocks` is reached.
pub fn simulate_point(config: &JcdConfig, point: u32, gammas: &[f64]) -> Result<Vec<BerRow>> {
    config.validate()?;
    check_len("gamma vector", config.n, gammas.len())?;
    let mut cfg = config.clone();
    cfg.channels = gammas
        .iter()
        .map(|&g| ChannelConfig::from_gamma(g))
        .collect::<Result<_>>()?;
    let model = CorrelationModel::new(cfg.n, cfg.rho)?;
    let l = cfg.code.info_len();
    let mut errors = vec![0usize; cfg.n];
    let mut blocks = 0;
    while blocks < cfg.max_blocks && errors.iter().min().copied().unwrap_or(0) < cfg.target_errors {
        let mut r = rng::stream2(cfg.seed, point, blocks as u32);
        let src = model.generate_block_with(l, &mut r)?;
        let llrs = src
            .rows()
            .iter()
            .zip(&cfg.channels)
            .map(|(bits, ch)| ch.transmit(&cfg.code.encode(bits)?, &mut r))
            .collect::<Result<Vec<_>>>()?;
        let out = joint_decode_llr(&cfg, &llrs)?;
        for (k, e) in errors.iter_mut().enumerate() {
            *e += count_errors(src.row(k), &out.bits[k])?;
        }
        blocks += 1;
    }
    let bits = (blocks * l) as f64;
    Ok(errors
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let ber = e as f64 / bits;
            BerRow {
                gammas: gammas.to_vec(),
                source: k,
                ber,
                ci95: 1.96 * (ber * (1.0 - ber) / bits).sqrt(),
                blocks,
                errors: e,
            }
        })
        .collect())
}

/// [`simulate_point`] over a grid of per-link SNR vectors, in grid order.
pub fn simulate_ber(config: &JcdConfig, grid: &[Vec<f64>]) -> Result<Vec<BerRow>> {
    let mut rows = Vec::new();
    for (p, gammas) in grid.iter().enumerate() {
        rows.extend(simulate_point(config, p as u32, gammas)?);
    }
    Ok(rows)
}

fn count_errors(truth: &[u8], decided: &[u8]) -> Result<usize> {
    check_len("decoded bits", truth.len(), decided.len())?;
    check_binary(decided)?;
    Ok(truth.iter().zip(decided).filter(|(a, b)| a != b).count())
}
