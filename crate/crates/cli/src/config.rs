//! TOML experiment configuration: one table per command.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Global seed; `--seed` overrides it.
    pub seed: Option<u64>,
    pub region: Option<RegionConfig>,
    pub ber: Option<BerConfig>,
    pub exit: Option<ExitConfig>,
    #[serde(alias = "build-code")]
    pub build_code: Option<BuildCodeConfig>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Sccc,
    Ldpc,
}

impl CodeKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sccc => "sccc",
            Self::Ldpc => "ldpc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Irregular3,
    Regular,
}

/// How a code is obtained: built from a length and seed, or loaded from a
/// file written by `build-code`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub kind: CodeKind,
    #[serde(default = "default_code_length")]
    pub length: usize,
    #[serde(default = "default_ensemble")]
    pub ensemble: Ensemble,
    /// Variable and check degree of the regular ensemble.
    #[serde(default = "default_regular")]
    pub regular: [usize; 2],
    /// Seed of the interleaver or parity-check matrix; derived from the
    /// global seed when absent.
    pub seed: Option<u64>,
    /// `.alist` or `.sccc` file to load instead of building.
    pub file: Option<String>,
}

fn default_code_length() -> usize {
    2048
}

fn default_ensemble() -> Ensemble {
    Ensemble::Irregular3
}

fn default_regular() -> [usize; 2] {
    [3, 6]
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    /// Tables cover `n = 2..=n_max`.
    pub n_max: usize,
    pub rho: Vec<f64>,
    #[serde(default = "default_rate")]
    pub rate: f64,
    #[serde(default = "default_grid_step")]
    pub grid_step: f64,
    #[serde(default)]
    pub projection: Vec<ProjectionConfig>,
}

fn default_rate() -> f64 {
    0.5
}

fn default_grid_step() -> f64 {
    corrmac_core::region::DEFAULT_GRID_STEP
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionConfig {
    pub n: usize,
    pub rho: f64,
    /// Capacities of sources 3..n, or `"unb"` / `"rate"` for all of them.
    pub fixed: FixedSpec,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum FixedSpec {
    Values(Vec<f64>),
    Named(String),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BerConfig {
    pub n: usize,
    pub rho: f64,
    pub code: CodeSpec,
    pub internal_iters: Option<usize>,
    #[serde(default = "default_external_iters")]
    pub external_iters: usize,
    #[serde(default = "default_true")]
    pub early_exit: bool,
    #[serde(default = "default_max_blocks")]
    pub max_blocks: usize,
    /// A point stops once every source has this many bit errors.
    #[serde(default = "default_target_errors")]
    pub target_errors: usize,
    /// Per-link channel SNRs in dB, one vector per grid point.
    #[serde(default)]
    pub gamma_db: Vec<Vec<f64>>,
    /// Balanced grid points in dB, expanded to `n` equal links.
    #[serde(default)]
    pub balanced_db: Vec<f64>,
}

fn default_external_iters() -> usize {
    corrmac_core::jcd::DEFAULT_EXTERNAL_ITERS
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExitConfig {
    pub codes: Vec<CodeKind>,
    #[serde(default = "default_exit_code_length")]
    pub code_length: usize,
    pub code_seed: Option<u64>,
    pub n: Vec<usize>,
    pub rho: Vec<f64>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "default_output_samples")]
    pub output_samples: usize,
    pub internal_iters: Option<usize>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_bracket_db")]
    pub bracket_db: [f64; 2],
    #[serde(default = "default_true")]
    pub traces: bool,
}

fn default_exit_code_length() -> usize {
    4096
}

fn default_mc_samples() -> usize {
    1_000_000
}

fn default_output_samples() -> usize {
    corrmac_core::exit::MIN_SNR_SAMPLES
}

fn default_tol() -> f64 {
    5e-3
}

fn default_bracket_db() -> [f64; 2] {
    [-12.0, 6.0]
}

pub type BuildCodeConfig = CodeSpec;

fn default_max_blocks() -> usize {
    100
}

fn default_target_errors() -> usize {
    100
}
