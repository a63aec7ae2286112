//! Feasible capacity region of `n` orthogonal links carrying correlated
//! sources at a common code rate `r`.
//!
//! A capacity vector `(λ_1..λ_n)` is feasible when, for every non-empty
//! subset of `p` links, the subset capacities add up to at least
//! `r [H(n) - H(n-p)]`, with `H(k)` the joint entropy of `k` sources.

use crate::error::{invalid, Error, Result};
use crate::source::{ln_pow, log_add, validate_rho};

/// A constraint whose slack is within this many bits is reported as tight.
pub const TIGHT_TOL: f64 = 1e-9;

/// Default abscissa spacing of [`FeasibleRegion::boundary_projection`].
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

const PROJECTION_BISECTIONS: usize = 50;

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("rho", format!("{p} is not a probability")));
    }
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(h(p) + h(1.0 - p))
}

/// Joint entropy `H(n)` in bits of `n` sources of the common-bit model.
/// `H(0) = 0`.
pub fn joint_entropy(n: usize, rho: f64) -> Result<f64> {
    validate_rho(rho)?;
    Ok(joint_entropy_unchecked(n, rho))
}

fn joint_entropy_unchecked(n: usize, rho: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    1.0 + n as f64 * binary_entropy(rho).expect("rho validated") - equivocation(n, rho)
}

/// `H(b | x_1..x_n)` in bits: what `n` sources leave unknown about the
/// common bit. Summed from positive terms so that it keeps its relative
/// precision when it is many orders below `H(n)`. `H(b) = 1` at `n = 0`.
fn equivocation(n: usize, rho: f64) -> f64 {
    let (p, q) = (rho, 1.0 - rho);
    if q == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if p == q {
        return 1.0;
    }
    let log_odds = (p / q).ln();
    let mut ln_binom = 0.0f64;
    let mut nats = 0.0;
    for zeros in 0..=n {
        if zeros > 0 {
            ln_binom += ((n - zeros + 1) as f64).ln() - (zeros as f64).ln();
        }
        let ln_pmf = log_add(
            ln_pow(p, zeros) + ln_pow(q, n - zeros),
            ln_pow(q, zeros) + ln_pow(p, n - zeros),
        ) - std::f64::consts::LN_2;
        // Posterior of the minority value is 1 / (1 + e^t).
        let t = (2.0 * zeros as f64 - n as f64).abs() * log_odds;
        let minority = 1.0 / (1.0 + t.exp());
        let h = (-t).exp().ln_1p() + minority * t;
        nats += (ln_binom + ln_pmf).exp() * h;
    }
    nats / std::f64::consts::LN_2
}

/// `λ = ½ log2(1 + γ)` bits per channel use.
pub fn capacity_from_snr(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(invalid("gamma", format!("{gamma} is negative")));
    }
    Ok(0.5 * gamma.ln_1p() / std::f64::consts::LN_2)
}

/// Inverse of [`capacity_from_snr`]: `γ = 2^(2λ) - 1`.
pub fn snr_from_capacity(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid("lambda", format!("{lambda} is negative")));
    }
    Ok((2.0 * lambda * std::f64::consts::LN_2).exp_m1())
}

/// Balanced, unbalanced and limiting capacities of the region border.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicPoints {
    /// All links equal: `r H(n) / n`.
    pub lambda_bal: f64,
    /// One link at its minimum with the others unconstrained: `r [H(n) - H(n-1)]`.
    pub lambda_unb: f64,
    /// Large-`n` limit of both: `r H_b(rho)`.
    pub lambda_lim: f64,
}

/// Characteristic points for `n >= 2` sources.
pub fn characteristic_points(n: usize, rho: f64, r: f64) -> Result<CharacteristicPoints> {
    if n < 2 {
        return Err(invalid(
            "n",
            "characteristic points need at least two sources",
        ));
    }
    Ok(FeasibleRegion::new(n, rho, r)?.characteristic_points())
}

/// One checked constraint: the `p` smallest capacities against `r [H(n) - H(n-p)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub p: usize,
    pub subset_sum: f64,
    pub bound: f64,
}

impl Constraint {
    pub fn slack(&self) -> f64 {
        self.subset_sum - self.bound
    }

    pub fn is_violated(&self) -> bool {
        self.subset_sum < self.bound
    }

    pub fn is_tight(&self) -> bool {
        self.slack().abs() <= TIGHT_TOL
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// One entry per subset size `p = 1..=n`, evaluated on the `p` smallest capacities.
    pub constraints: Vec<Constraint>,
}

impl FeasibilityReport {
    pub fn violated(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.is_violated())
    }

    pub fn tight(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.is_tight())
    }
}

/// Membership test for a capacity vector of length `n`.
pub fn is_feasible(lambdas: &[f64], rho: f64, r: f64) -> Result<FeasibilityReport> {
    FeasibleRegion::new(lambdas.len(), rho, r)?.check(lambdas)
}

/// The region for fixed `(n, rho, r)` with `H(0..=n)` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleRegion {
    n: usize,
    rho: f64,
    r: f64,
    entropies: Vec<f64>,
    equivocation: Vec<f64>,
    hb: f64,
}

impl FeasibleRegion {
    pub fn new(n: usize, rho: f64, r: f64) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n", "at least one source is required"));
        }
        validate_rho(rho)?;
        if !(r > 0.0 && r <= 1.0) {
            return Err(invalid("r", format!("code rate {r} is outside (0, 1]")));
        }
        let entropies = (0..=n).map(|k| joint_entropy_unchecked(k, rho)).collect();
        let equivocation = (0..=n).map(|k| equivocation(k, rho)).collect();
        let hb = binary_entropy(rho)?;
        Ok(Self {
            n,
            rho,
            r,
            entropies,
            equivocation,
            hb,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn rate(&self) -> f64 {
        self.r
    }

    /// `H(0..=n)` in bits.
    pub fn entropies(&self) -> &[f64] {
        &self.entropies
    }

    /// Right-hand side `r [H(n) - H(n-p)]` for subsets of size `p`.
    pub fn bound(&self, p: usize) -> f64 {
        self.r * self.entropy_gain(p)
    }

    /// `H(n) - H(n-p)`, formed without cancelling the two large entropies.
    fn entropy_gain(&self, p: usize) -> f64 {
        let c = &self.equivocation;
        p as f64 * self.hb + (c[self.n - p] - c[self.n])
    }

    pub fn characteristic_points(&self) -> CharacteristicPoints {
        let n = self.n;
        let h = &self.entropies;
        CharacteristicPoints {
            lambda_bal: self.r * h[n] / n as f64,
            lambda_unb: self.r * self.entropy_gain(1),
            lambda_lim: self.r * self.hb,
        }
    }

    /// Membership query. The bound depends only on the subset size, so the
    /// binding subset of each size is the one holding the smallest capacities.
    pub fn check(&self, lambdas: &[f64]) -> Result<FeasibilityReport> {
        if lambdas.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "capacity vector",
                expected: self.n,
                actual: lambdas.len(),
            });
        }
        if let Some(bad) = lambdas.iter().find(|&&l| !(l >= 0.0)) {
            return Err(invalid("lambda", format!("capacity {bad} is negative")));
        }
        let mut sorted = lambdas.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut subset_sum = 0.0;
        let mut constraints = Vec::with_capacity(self.n);
        for (i, &l) in sorted.iter().enumerate() {
            subset_sum += l;
            let p = i + 1;
            constraints.push(Constraint {
                p,
                subset_sum,
                bound: self.bound(p),
            });
        }
        let feasible = constraints.iter().all(|c| !c.is_violated());
        Ok(FeasibilityReport {
            feasible,
            constraints,
        })
    }

    pub fn contains(&self, lambdas: &[f64]) -> bool {
        self.check(lambdas).map(|r| r.feasible).unwrap_or(false)
    }

    /// Border of the `(λ_1, λ_2)` projection with `λ_3..λ_n` pinned to `fixed`.
    ///
    /// Abscissas run over `[0, r H(n)]` in steps of `grid_step`; abscissas for
    /// which no `λ_2` is feasible are omitted. Each ordinate is the smallest
    /// feasible `λ_2`, located by bisection.
    pub fn boundary_projection(&self, fixed: &[f64], grid_step: f64) -> Result<Vec<(f64, f64)>> {
        let n = self.n;
        if n < 2 {
            return Err(invalid("n", "projection needs at least two sources"));
        }
        if fixed.len() != n - 2 {
            return Err(Error::LengthMismatch {
                what: "fixed capacities",
                expected: n - 2,
                actual: fixed.len(),
            });
        }
        if !(grid_step > 0.0) {
            return Err(invalid("grid_step", "must be positive"));
        }
        let unb = self.characteristic_points().lambda_unb;
        if let Some(bad) = fixed.iter().find(|&&l| l < unb - TIGHT_TOL) {
            return Err(invalid(
                "fixed",
                format!("capacity {bad} is below the unbalanced point {unb}"),
            ));
        }
        let top = self.r * self.entropies[n];
        let mut point = vec![0.0; n];
        point[2..].copy_from_slice(fixed);
        point[0] = top;
        point[1] = top;
        if !self.contains(&point) {
            return Err(Error::EmptyRegion(format!("{fixed:?}")));
        }

        let steps = (top / grid_step).round() as usize;
        let mut curve = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let l1 = (i as f64 * grid_step).min(top);
            point[0] = l1;
            point[1] = top;
            if !self.contains(&point) {
                continue;
            }
            point[1] = 0.0;
            if self.contains(&point) {
                curve.push((l1, 0.0));
                continue;
            }
            let (mut lo, mut hi) = (0.0, top);
            for _ in 0..PROJECTION_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                point[1] = mid;
                if self.contains(&point) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            curve.push((l1, hi));
        }
        Ok(curve)
    }
}

/// Convenience wrapper around [`FeasibleRegion::boundary_projection`].
pub fn boundary_projection(
    n: usize,
    rho: f64,
    r: f64,
    fixed: &[f64],
    grid_step: f64,
) -> Result<Vec<(f64, f64)>> {
    FeasibleRegion::new(n, rho, r)?.boundary_projection(fixed, grid_step)
}
