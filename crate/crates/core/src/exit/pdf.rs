//! Numeric LLR densities on a uniform symmetric grid.

use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::jcd::ConnectionNode;
use crate::llr::LLR_CLIP;
use crate::rng::{self, Rng};

/// Fewest Monte Carlo tuples accepted by [`connection_output_density`].
pub const MIN_MC_SAMPLES: usize = 100_000;
/// Leakage beyond the grid that is still folded into the edge bins.
pub const MAX_LEAKAGE: f64 = 1e-4;
/// Tolerance on the total mass of a density.
pub const MASS_TOL: f64 = 1e-9;

/// Uniform grid of bin centers `-half·step, …, 0, …, +half·step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half: usize,
    step: f64,
}

impl Default for Grid {
    /// `[-60, 60]` with step `0.05`.
    fn default() -> Self {
        Self {
            half: 1200,
            step: 0.05,
        }
    }
}

impl Grid {
    /// Grid covering `[-max, max]`; `max` is rounded to a whole number of steps.
    pub fn new(max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(invalid(
                "grid step",
                format!("must be positive, got {step}"),
            ));
        }
        if !(max >= step && max.is_finite()) {
            return Err(invalid(
                "grid max",
                format!("must be at least one step, got {max}"),
            ));
        }
        Ok(Self {
            half: (max / step).round() as usize,
            step,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn max(&self) -> f64 {
        self.half as f64 * self.step
    }

    pub fn bins(&self) -> usize {
        2 * self.half + 1
    }

    /// Index of the zero bin.
    pub fn zero_index(&self) -> usize {
        self.half
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 - self.half as f64) * self.step
    }

    /// Bin holding `x`, clamped to the grid.
    pub fn index_of(&self, x: f64) -> usize {
        let i = (x / self.step).round() + self.half as f64;
        i.clamp(0.0, (self.bins() - 1) as f64) as usize
    }

    /// Index of the bin at `-center(i)`.
    pub fn mirror(&self, i: usize) -> usize {
        self.bins() - 1 - i
    }

    /// Largest representable LLR magnitude: the clip value, or the grid edge
    /// if the grid is narrower.
    fn saturation(&self) -> f64 {
        LLR_CLIP.min(self.max())
    }
}

/// Probability masses over the bins of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPdf {
    grid: Grid,
    mass: Vec<f64>,
}

impl NumericPdf {
    /// Wraps masses that must be non-negative and sum to one.
    pub fn new(grid: Grid, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != grid.bins() {
            return Err(Error::GridMismatch(format!(
                "{} masses for a grid of {} bins",
                mass.len(),
                grid.bins()
            )));
        }
        if let Some(m) = mass.iter().find(|m| !(**m >= 0.0)) {
            return Err(invalid("pdf", format!("negative or NaN mass {m}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(invalid("pdf", format!("total mass {total}")));
        }
        Ok(Self { grid, mass })
    }

    /// All mass in the bin holding `x`.
    pub fn delta(grid: Grid, x: f64) -> Self {
        let mut mass = vec![0.0; grid.bins()];
        mass[grid.index_of(x)] = 1.0;
        Self { grid, mass }
    }

    /// Normalized histogram of `samples`, clamped to the grid.
    pub fn from_samples(grid: Grid, samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("samples", "at least one sample is required"));
        }
        let mut mass = vec![0.0; grid.bins()];
        for &s in samples {
            mass[grid.index_of(s)] += 1.0;
        }
        let w = 1.0 / samples.len() as f64;
        mass.iter_mut().for_each(|m| *m *= w);
        Ok(Self { grid, mass })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, m)| m * self.grid.center(i))
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.mass
            .iter()
            .enumerate()
            .map(|(i, m)| m * (self.grid.center(i) - mean).powi(2))
            .sum()
    }

    /// `P(LLR < 0) + ½ P(LLR = 0)`: the bit error probability of a hard decision.
    pub fn error_probability(&self) -> f64 {
        let z = self.grid.zero_index();
        self.mass[..z].iter().sum::<f64>() + 0.5 * self.mass[z]
    }

    /// Inverse-CDF sampler returning bin centers.
    pub fn sampler(&self) -> Sampler<'_> {
        let mut acc = 0.0;
        let cdf = self
            .mass
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        Sampler { pdf: self, cdf }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        let total = self.total_mass();
        self.mass.iter_mut().for_each(|m| *m /= total);
        self
    }
}

pub struct Sampler<'a> {
    pdf: &'a NumericPdf,
    cdf: Vec<f64>,
}

impl Sampler<'_> {
    pub fn sample(&self, r: &mut Rng) -> f64 {
        let total = *self.cdf.last().expect("non-empty grid");
        let u = r.gen::<f64>() * total;
        let i = self
            .cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1);
        self.pdf.grid.center(i)
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Consistent Gaussian LLR density: mean `mu`, variance `2·mu`.
///
/// The implied channel SNR is `mu / 2`. Mass beyond the LLR clip value is
/// saturated into the clip bins; if the grid is narrower than the clip value
/// the mass beyond its edges is folded into the edge bins, provided it stays
/// below [`MAX_LEAKAGE`].
pub fn gaussian_consistent_pdf(mu: f64, grid: Grid) -> Result<NumericPdf> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(invalid(
            "mu",
            format!("must be finite and non-negative, got {mu}"),
        ));
    }
    if mu == 0.0 {
        return Ok(NumericPdf::delta(grid, 0.0));
    }
    let sigma = (2.0 * mu).sqrt();
    let sat = grid.saturation();
    let lo = grid.index_of(-sat);
    let hi = grid.index_of(sat);
    let cdf = |x: f64| normal_cdf((x - mu) / sigma);
    if grid.max() < LLR_CLIP {
        let edge = grid.max() + 0.5 * grid.step();
        let leakage = cdf(-edge) + (1.0 - cdf(edge));
        if leakage > MAX_LEAKAGE {
            return Err(Error::GridTooNarrow {
                leakage,
                min: -grid.max(),
                max: grid.max(),
            });
        }
    }
    let mut mass = vec![0.0; grid.bins()];
    let half = 0.5 * grid.step();
    let mut prev = 0.0;
    for (i, m) in mass.iter_mut().enumerate().take(hi).skip(lo) {
        let upper = cdf(grid.center(i) + half);
        *m = upper - prev;
        prev = upper;
    }
    mass[hi] = 1.0 - prev;
    Ok(NumericPdf { grid, mass }.normalized())
}

/// `a_in(z) = ρ·a(z) + (1 − ρ)·a(−z)`: the sign of the LLR is flipped with
/// probability `1 − ρ`.
pub fn bsc_flip(pdf: &NumericPdf, rho: f64) -> NumericPdf {
    let g = pdf.grid;
    let mass = (0..g.bins())
        .map(|i| rho * pdf.mass[i] + (1.0 - rho) * pdf.mass[g.mirror(i)])
        .collect();
    NumericPdf { grid: g, mass }
}

/// Density of the sum of two independent LLRs; mass beyond the grid is
/// folded into the edge bins.
pub fn convolve_channel(apriori: &NumericPdf, channel: &NumericPdf) -> Result<NumericPdf> {
    apriori.check_same_grid(channel)?;
    let g = apriori.grid;
    let bins = g.bins() as isize;
    let half = g.half as isize;
    let mut mass = vec![0.0; g.bins()];
    for (i, &a) in apriori.mass.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        for (j, &c) in channel.mass.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let k = (i as isize + j as isize - half).clamp(0, bins - 1);
            mass[k as usize] += a * c;
        }
    }
    Ok(NumericPdf { grid: g, mass }.normalized())
}

/// Monte Carlo density of the connection-node output for the decoder of
/// source `ℓ`, conditioned on `x_ℓ = 0`.
///
/// `inputs[k]` is the density of the LLR about `x_k` conditioned on `x_k = 0`.
/// Each tuple first draws the common bit relative to `x_ℓ` (a flip with
/// probability `1 − ρ`, shared by all inputs), then an independent flip per
/// input. Each input's marginal is therefore the double flip
/// `bsc_flip(bsc_flip(a, ρ), ρ)`, and for `n > 2` the inputs are correlated
/// through the common bit.
pub fn connection_output_density(
    inputs: &[NumericPdf],
    rho: f64,
    n: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<NumericPdf> {
    let node = ConnectionNode::new(n, rho)?;
    crate::error::check_len("input densities", n - 1, inputs.len())?;
    if mc_samples < MIN_MC_SAMPLES {
        return Err(invalid(
            "mc_samples",
            format!("at least {MIN_MC_SAMPLES} are required, got {mc_samples}"),
        ));
    }
    let grid = inputs[0].grid;
    for pdf in inputs {
        pdf.check_same_grid(&inputs[0])?;
    }
    let samplers: Vec<Sampler<'_>> = inputs.iter().map(NumericPdf::sampler).collect();
    let mut r = rng::seeded(seed);
    let mut mass = vec![0.0; grid.bins()];
    let mut tuple = vec![0.0; n - 1];
    for _ in 0..mc_samples {
        let common = !r.gen_bool(rho);
        for (t, s) in tuple.iter_mut().zip(&samplers) {
            let z = s.sample(&mut r);
            let own = !r.gen_bool(rho);
            *t = if common ^ own { -z } else { z };
        }
        let out = node.connection_llr(&tuple)?;
        mass[grid.index_of(out)] += 1.0;
    }
    let w = 1.0 / mc_samples as f64;
    mass.iter_mut().for_each(|m| *m *= w);
    Ok(NumericPdf { grid, mass })
}
