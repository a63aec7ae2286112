//! Density evolution and EXIT analysis of joint decoding.
//!
//! LLR densities live on a uniform grid ([`NumericPdf`]). The a-priori
//! density that a component decoder receives from the connection nodes is
//! obtained by Monte Carlo from the other sources' message densities; the
//! decoder itself is then run on the all-zero codeword and summarized by the
//! SNR of its extrinsic output. Iterating this map locates the balanced and
//! unbalanced operating points of a code.

mod pdf;
mod surface;

pub use pdf::{
    bsc_flip, connection_output_density, convolve_channel, gaussian_consistent_pdf, Grid,
    NumericPdf, Sampler, MASS_TOL, MAX_LEAKAGE, MIN_MC_SAMPLES,
};
pub use surface::{
    balanced_trajectory, find_lambda_bal, find_lambda_unb, measure_output_snr, trace_csv,
    variance_snr, z_surface, ExitParams, ExitPoint, ThresholdResult, ESCAPE_SNR, MIN_SNR_SAMPLES,
};
