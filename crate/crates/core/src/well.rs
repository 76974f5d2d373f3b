//! Well description, unit handling and the fractional dispersion relations.
//!
//! A particle in the symmetric rectangular well `V(x) = 0` for `|x| <= a`,
//! `V(x) = U` otherwise, obeys the kinetic law `E = D_α |p|^α`. Inside the
//! well a stationary state oscillates with wavenumber `k`, outside it decays
//! with constant `κ`:
//!
//! ```text
//! k = (1/ħ) (E / D_α)^(1/α)        κ = (1/ħ) ((U - E) / D_α)^(1/α)
//! ```
//!
//! In the scaled variables `ς = k a` and `η = κ a` the two are tied by
//! `η^α + ς^α = G` with `G = a^α U / (ħ^α D_α)`, so the whole bound spectrum
//! is a function of `(G, α)` alone. The solver works in that form and
//! physical units are attached only at the edges.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `x^p` for `x >= 0`, with `0^p = 0`.
#[inline]
pub(crate) fn pow_nonneg(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(p)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "alpha must satisfy 1 < alpha <= 2, got {alpha}"
        )))
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "{name} must be strictly positive and finite, got {value}"
        )))
    }
}

/// Physical description of the well, in any consistent unit system
/// (CGS by default: cm, erg, erg·s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellParameters {
    a: f64,
    depth: f64,
    d_alpha: f64,
    hbar: f64,
    alpha: f64,
}

impl WellParameters {
    /// `a` is the half-width, `depth` the barrier height `U`, `d_alpha` the
    /// kinetic scale factor (`1/(2m)` at `alpha = 2`).
    pub fn new(a: f64, depth: f64, d_alpha: f64, hbar: f64, alpha: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("depth", depth)?;
        check_positive("d_alpha", d_alpha)?;
        check_positive("hbar", hbar)?;
        check_alpha(alpha)?;
        Ok(Self {
            a,
            depth,
            d_alpha,
            hbar,
            alpha,
        })
    }

    /// Standard quantum mechanics: `alpha = 2`, `D_2 = 1/(2m)`.
    pub fn standard(a: f64, depth: f64, mass: f64, hbar: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        Self::new(a, depth, 1.0 / (2.0 * mass), hbar, 2.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn d_alpha(&self) -> f64 {
        self.d_alpha
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Potential energy at position `x`; the closed interval `[-a, a]` is inside.
    pub fn potential(&self, x: f64) -> f64 {
        if x.abs() <= self.a {
            0.0
        } else {
            self.depth
        }
    }

    /// Exterior decay constant `κ = (1/ħ) ((U - E)/D_α)^(1/α)` for `0 <= E < U`.
    pub fn kappa_of_energy(&self, energy: f64) -> Result<f64> {
        if !(energy >= 0.0 && energy < self.depth) {
            return Err(domain(format!(
                "decay constant needs 0 <= E < U = {}, got E = {energy}",
                self.depth
            )));
        }
        Ok(pow_nonneg((self.depth - energy) / self.d_alpha, 1.0 / self.alpha) / self.hbar)
    }

    /// Interior wavenumber `k = (1/ħ) (E/D_α)^(1/α)` for `E >= 0`.
    pub fn k_of_energy(&self, energy: f64) -> Result<f64> {
        if !(energy >= 0.0 && energy.is_finite()) {
            return Err(domain(format!(
                "wavenumber needs a finite E >= 0, got E = {energy}"
            )));
        }
        Ok(pow_nonneg(energy / self.d_alpha, 1.0 / self.alpha) / self.hbar)
    }

    /// Inverse of `ς = k a`: `E = D_α (ħ ς / a)^α`.
    pub fn energy_of_sigma(&self, sigma: f64) -> Result<f64> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(domain(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        Ok(self.d_alpha * pow_nonneg(self.hbar * sigma / self.a, self.alpha))
    }

    /// Collapse to the dimensionless strength `G = a^α U / (ħ^α D_α)`.
    pub fn nondimensionalize(&self) -> Result<DimensionlessWell> {
        let ratio = pow_nonneg(self.a / self.hbar, self.alpha);
        let g = ratio * (self.depth / self.d_alpha);
        if !g.is_finite() {
            return Err(Error::Overflow(format!(
                "well strength a^alpha U / (hbar^alpha D_alpha) is not finite for {self:?}"
            )));
        }
        DimensionlessWell::new(g, self.alpha)
    }
}

/// The pair `(G, α)` that fixes the dimensionless spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessWell {
    g: f64,
    alpha: f64,
}

impl DimensionlessWell {
    pub fn new(g: f64, alpha: f64) -> Result<Self> {
        check_positive("g", g)?;
        check_alpha(alpha)?;
        Ok(Self { g, alpha })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ς_max = G^(1/α)`, the interior wavenumber at the continuum threshold.
    pub fn sigma_max(&self) -> f64 {
        pow_nonneg(self.g, 1.0 / self.alpha)
    }

    /// `E / U = ς^α / G`.
    pub fn energy_fraction(&self, sigma: f64) -> Result<f64> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(domain(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        Ok(pow_nonneg(sigma, self.alpha) / self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(index: usize) -> Self {
        if index % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// One bound state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub index: usize,
    pub parity: Parity,
    /// `ς = k a`
    pub sigma: f64,
    /// `η = κ a`
    pub eta: f64,
    /// Energy in the caller's units; `None` for purely dimensionless solves.
    pub energy: Option<f64>,
}

impl EnergyLevel {
    /// Attach the physical energy `E = D_α (ħ ς / a)^α`.
    pub fn with_energy(mut self, well: &WellParameters) -> Result<Self> {
        self.energy = Some(well.energy_of_sigma(self.sigma)?);
        Ok(self)
    }

    /// `η - ς tan ς` for even levels, `η + ς cot ς` for odd ones.
    pub fn parity_residual(&self) -> f64 {
        match self.parity {
            Parity::Even => self.eta - self.sigma * self.sigma.tan(),
            Parity::Odd => self.eta + self.sigma / self.sigma.tan(),
        }
    }

    /// `η^α + ς^α - G`.
    pub fn constraint_residual(&self, well: &DimensionlessWell) -> f64 {
        pow_nonneg(self.eta, well.alpha()) + pow_nonneg(self.sigma, well.alpha()) - well.g()
    }
}

/// A stationary state's energy and the time at which its phase is wanted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPhase {
    pub energy: f64,
    pub time: f64,
}

impl StationaryPhase {
    /// `exp(-i E t / ħ)`.
    pub fn factor(&self, hbar: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.energy * self.time / hbar)
    }
}

pub fn stationary_phase(s: StationaryPhase, hbar: f64) -> Complex64 {
    s.factor(hbar)
}
