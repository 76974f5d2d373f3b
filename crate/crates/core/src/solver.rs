//! Bound-state roots of the even and odd matching conditions.
//!
//! Even states satisfy `η = ς tan ς`, odd states `η = -ς cot ς`, and both
//! must sit on the constraint curve `η = (G - ς^α)^(1/α)`. Between
//! consecutive poles of `tan`/`cot` the parity curve rises monotonically
//! from 0 to +∞ while the constraint falls, so each such branch that opens
//! below `ς_max = G^(1/α)` holds exactly one root. Branches alternate
//! even/odd with lower edges at `0, π/2, π, 3π/2, ...`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::well::{pow_nonneg, DimensionlessWell, EnergyLevel, Parity};

pub const MAX_ITERATIONS: usize = 200;

/// Relative slack allowed when `constraint_eta` is asked for `ς` past `ς_max`.
const SIGMA_MAX_SLACK: f64 = 1e-12;

/// Interval of `ς` on which one parity curve is monotone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    /// Ordinal among branches of the same parity.
    pub n: usize,
    pub parity: Parity,
    pub lo: f64,
    /// Upper edge, clipped to `ς_max`. Unclipped edges are poles and open.
    pub hi: f64,
}

impl Branch {
    /// Position of this branch in the interleaved even/odd sequence.
    pub fn ordinal(&self) -> usize {
        match self.parity {
            Parity::Even => 2 * self.n,
            Parity::Odd => 2 * self.n + 1,
        }
    }

    /// Pole of the parity curve that closes this branch.
    pub fn pole(&self) -> f64 {
        pole_after(self.ordinal())
    }

    /// True when `hi` is the pole of the parity curve rather than `ς_max`.
    pub fn ends_at_pole(&self) -> bool {
        self.hi == self.pole()
    }
}

fn pole_after(ordinal: usize) -> f64 {
    (ordinal + 1) as f64 * FRAC_PI_2
}

/// `ς tan ς` (even) or `-ς cot ς` (odd).
pub fn parity_curve(parity: Parity, sigma: f64) -> f64 {
    match parity {
        Parity::Even => sigma * sigma.tan(),
        Parity::Odd => -sigma / sigma.tan(),
    }
}

/// `η = (G - ς^α)^(1/α)` on `0 <= ς <= ς_max`.
pub fn constraint_eta(well: &DimensionlessWell, sigma: f64) -> Result<f64> {
    let smax = well.sigma_max();
    if !(sigma >= 0.0) || sigma > smax * (1.0 + SIGMA_MAX_SLACK) {
        return Err(domain(format!(
            "sigma = {sigma} outside [0, sigma_max = {smax}]"
        )));
    }
    Ok(eta_unchecked(well, sigma))
}

fn eta_unchecked(well: &DimensionlessWell, sigma: f64) -> f64 {
    let rest = well.g() - pow_nonneg(sigma, well.alpha());
    if rest <= 0.0 {
        0.0
    } else {
        pow_nonneg(rest, 1.0 / well.alpha())
    }
}

/// Lazily enumerated branches of a well.
#[derive(Debug, Clone)]
pub struct Branches {
    sigma_max: f64,
    next: usize,
}

impl Iterator for Branches {
    type Item = Branch;

    fn next(&mut self) -> Option<Branch> {
        let ordinal = self.next;
        let lo = ordinal as f64 * FRAC_PI_2;
        if lo >= self.sigma_max {
            return None;
        }
        self.next += 1;
        Some(Branch {
            n: ordinal / 2,
            parity: Parity::of_index(ordinal),
            lo,
            hi: pole_after(ordinal).min(self.sigma_max),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let total = branch_count(self.sigma_max);
        let left = total.saturating_sub(self.next);
        (left, Some(left))
    }
}

impl ExactSizeIterator for Branches {}

/// Number of branch lower edges `kπ/2` strictly below `sigma_max`.
fn branch_count(sigma_max: f64) -> usize {
    let ratio = sigma_max / FRAC_PI_2;
    let floor = ratio.floor();
    // An edge landing exactly on sigma_max opens a branch whose only
    // intersection would be at η = 0 (E = U).
    let mut count = floor as usize + 1;
    if count > 0 && (count - 1) as f64 * FRAC_PI_2 >= sigma_max {
        count -= 1;
    }
    count
}

/// Branches whose lower edge lies below `ς_max`, in increasing order.
pub fn enumerate_branches(well: &DimensionlessWell) -> Branches {
    branches_below(well.sigma_max())
}

/// Branch layout for a given `ς_max`; independent of `α`.
pub fn branches_below(sigma_max: f64) -> Branches {
    Branches { sigma_max, next: 0 }
}

/// Number of bound levels: `floor(2 ς_max / π) + 1`, less one when `ς_max`
/// is an exact multiple of `π/2`.
pub fn count_levels(well: &DimensionlessWell) -> usize {
    branch_count(well.sigma_max())
}

/// Root of the matching condition on one branch, if the branch brackets one.
///
/// On the branch opening at `lo = kπ/2` both parity conditions can be
/// written without poles as `g(ς) = ς - lo - atan(η(ς)/ς) = 0`, with `g`
/// smooth and strictly increasing (`g' = 1 + (η - ς η')/(ς² + η²) > 0`).
/// The search keeps a sign-change bracket on `g` and takes Newton steps
/// when they stay inside it, bisecting otherwise. The converged value is
/// then moved to the neighbouring double that best satisfies the original
/// `η = ς tan ς` / `η = -ς cot ς` form.
pub fn solve_branch(well: &DimensionlessWell, branch: &Branch) -> Result<Option<EnergyLevel>> {
    let parity = branch.parity;
    let smax = well.sigma_max();
    if branch.lo >= smax {
        return Ok(None);
    }
    let (g, alpha) = (well.g(), well.alpha());
    let base = branch.lo;

    // g(ς) together with its slope.
    let eval = |s: f64| -> (f64, f64) {
        let sa = pow_nonneg(s, alpha);
        let rest = g - sa;
        if rest <= 0.0 {
            // Past the threshold η = 0 and atan(0) = 0.
            return (s - base, 1.0);
        }
        let eta = pow_nonneg(rest, 1.0 / alpha);
        let value = s - base - eta.atan2(s);
        if s == 0.0 {
            return (value, f64::INFINITY);
        }
        let eta_slope = -sa * eta / (s * rest);
        (value, 1.0 + (eta - s * eta_slope) / (s * s + eta * eta))
    };

    let mut lo = base;
    let (g_lo, _) = eval(lo);
    if g_lo == 0.0 && lo > 0.0 {
        return Ok(Some(level_at(branch, lo)));
    }
    if !(g_lo < 0.0) {
        return Ok(None);
    }
    // One fixed-point step from lo overshoots the root, so it bounds it.
    let eta_lo = eta_unchecked(well, lo);
    let mut hi = (base + eta_lo.atan2(lo)).min(branch.hi).min(smax);
    if !(hi > lo) {
        return Ok(None);
    }

    let matching = |s: f64| parity_curve(parity, s) - eta_unchecked(well, s);
    let mut x = hi;
    for _ in 0..MAX_ITERATIONS {
        let (gx, slope) = eval(x);
        if gx == 0.0 {
            return Ok(Some(level_at(branch, polish(&matching, x))));
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let ulp_scale = 2.0 * f64::EPSILON * x.abs();
        if hi - lo <= ulp_scale {
            return Ok(Some(level_at(branch, polish(&matching, x))));
        }
        let step = gx / slope;
        if step.abs() <= ulp_scale {
            return Ok(Some(level_at(branch, polish(&matching, x - step))));
        }
        let newton = x - step;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence {
        parity,
        branch: branch.n,
        iterations: MAX_ITERATIONS,
    })
}

/// Walks from `x` to the nearby double with the smallest `|f|`.
fn polish(f: &impl Fn(f64) -> f64, x: f64) -> f64 {
    let mut best = (x, f(x).abs());
    for _ in 0..64 {
        let (up, down) = (best.0.next_up(), best.0.next_down());
        let (f_up, f_down) = (f(up).abs(), f(down).abs());
        let candidate = if f_up < f_down { (up, f_up) } else { (down, f_down) };
        if candidate.1 < best.1 {
            best = candidate;
        } else {
            break;
        }
    }
    best.0
}

// η is taken from the parity curve, so the matching condition holds to
// rounding and the constraint carries the discretization error of ς.
fn level_at(branch: &Branch, sigma: f64) -> EnergyLevel {
    EnergyLevel {
        index: branch.ordinal(),
        parity: branch.parity,
        sigma,
        eta: parity_curve(branch.parity, sigma).max(0.0),
        energy: None,
    }
}

/// All bound levels of a dimensionless well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub well: DimensionlessWell,
    pub levels: Vec<EnergyLevel>,
    pub sigma_max: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `E_n / U` for each level.
    pub fn energy_fractions(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|l| pow_nonneg(l.sigma, self.well.alpha()) / self.well.g())
            .collect()
    }
}

pub fn solve_spectrum(well: &DimensionlessWell) -> Result<Spectrum> {
    let mut levels = Vec::with_capacity(count_levels(well));
    for branch in enumerate_branches(well) {
        if let Some(mut level) = solve_branch(well, &branch)? {
            level.index = levels.len();
            levels.push(level);
        }
    }
    Ok(Spectrum {
        well: *well,
        levels,
        sigma_max: well.sigma_max(),
    })
}

/// `G → ∞` limit of the n-th root, `(n + 1) π / 2`: the infinite well.
pub fn infinite_well_limit(_alpha: f64, n: usize) -> f64 {
    (n + 1) as f64 * FRAC_PI_2
}
