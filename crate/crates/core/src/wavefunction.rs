//! Piecewise eigenfunctions of a solved level.
//!
//! Inside the well an even state is `C cos kx` and an odd one `D sin kx`;
//! outside, only the decaying exponential survives. Matching the value at
//! `x = ±a` fixes the exterior amplitudes; the derivative match is then
//! equivalent to the level's transcendental equation and is exposed as a
//! residual rather than imposed.

use serde::{Deserialize, Serialize};

use crate::error::{argument, domain, Result};
use crate::well::{EnergyLevel, Parity};

/// Largest parity-equation residual accepted by [`match_constants`].
pub const MATCH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenfunction {
    pub level: EnergyLevel,
    /// Half-width `a`; coordinates are in the same unit. Use 1 for the
    /// dimensionless form, where `k = ς` and `κ = η`.
    pub half_width: f64,
    /// `C` for even levels, `D` for odd ones.
    pub c_inside: f64,
}

/// Builds the unnormalized eigenfunction with `c_inside = 1`.
pub fn match_constants(level: EnergyLevel, half_width: f64) -> Result<Eigenfunction> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(domain(format!("half-width must be positive, got {half_width}")));
    }
    let residual = level.parity_residual();
    if !(residual.abs() <= MATCH_TOLERANCE) {
        return Err(domain(format!(
            "level {} is not converged: parity residual {residual:e}",
            level.index
        )));
    }
    if !(level.eta > 0.0 && level.sigma > 0.0) {
        return Err(domain(format!(
            "level {} is not a bound state (sigma = {}, eta = {})",
            level.index, level.sigma, level.eta
        )));
    }
    Ok(Eigenfunction {
        level,
        half_width,
        c_inside: 1.0,
    })
}

impl Eigenfunction {
    pub fn parity(&self) -> Parity {
        self.level.parity
    }

    /// Interior wavenumber `k = ς / a`.
    pub fn k(&self) -> f64 {
        self.level.sigma / self.half_width
    }

    /// Exterior decay constant `κ = η / a`.
    pub fn kappa(&self) -> f64 {
        self.level.eta / self.half_width
    }

    fn parity_sign(&self) -> f64 {
        match self.parity() {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// `φ(a)`, shared by the interior and exterior expressions.
    pub fn edge_value(&self) -> f64 {
        let s = self.level.sigma;
        match self.parity() {
            Parity::Even => self.c_inside * s.cos(),
            Parity::Odd => self.c_inside * s.sin(),
        }
    }

    /// Amplitude `B` of `e^(-κx)` for `x > a`. Overflows to infinity for
    /// very deep levels (`κa > ~709`); evaluation never goes through it.
    pub fn b_right(&self) -> f64 {
        self.edge_value() * self.level.eta.exp()
    }

    /// Amplitude `A` of `e^(κx)` for `x < -a`.
    pub fn a_left(&self) -> f64 {
        self.parity_sign() * self.b_right()
    }

    /// Interior expression, valid for `|x| <= a`.
    pub fn interior(&self, x: f64) -> f64 {
        let phase = self.level.sigma * (x / self.half_width);
        match self.parity() {
            Parity::Even => self.c_inside * phase.cos(),
            Parity::Odd => self.c_inside * phase.sin(),
        }
    }

    /// Exterior expression, valid for `|x| >= a`.
    pub fn exterior(&self, x: f64) -> f64 {
        let depth = x.abs() / self.half_width - 1.0;
        let value = self.edge_value() * (-self.level.eta * depth).exp();
        if x < 0.0 {
            self.parity_sign() * value
        } else {
            value
        }
    }

    /// `φ(x)`; the edge points `x = ±a` use the interior expression.
    pub fn evaluate(&self, x: f64) -> f64 {
        if x.abs() <= self.half_width {
            self.interior(x)
        } else {
            self.exterior(x)
        }
    }

    /// `∫ |φ|² dx` over the real line, in closed form.
    pub fn norm_squared(&self) -> f64 {
        let a = self.half_width;
        let s = self.level.sigma;
        let c2 = self.c_inside * self.c_inside;
        // ∫_{-a}^{a} cos²(kx) dx = a + sin(2ka)/(2k), sin² with a minus sign
        let oscillating = a * (2.0 * s).sin() / (2.0 * s);
        let interior = match self.parity() {
            Parity::Even => c2 * (a + oscillating),
            Parity::Odd => c2 * (a - oscillating),
        };
        let edge = self.edge_value();
        interior + edge * edge / self.kappa()
    }

    /// Fraction of the probability that sits outside the well.
    pub fn exterior_fraction(&self) -> f64 {
        let edge = self.edge_value();
        edge * edge / self.kappa() / self.norm_squared()
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.c_inside *= factor;
        self
    }

    pub fn normalize(self) -> Self {
        let norm = self.norm_squared().sqrt();
        Eigenfunction {
            c_inside: self.c_inside / norm,
            ..self
        }
    }

    /// `|φ'(a⁻) - φ'(a⁺)|` scaled by the largest slope either piece can reach.
    pub fn derivative_residual(&self) -> f64 {
        let s = self.level.sigma;
        let k = self.k();
        let inside = match self.parity() {
            Parity::Even => -self.c_inside * k * s.sin(),
            Parity::Odd => self.c_inside * k * s.cos(),
        };
        let outside = -self.kappa() * self.edge_value();
        let scale = (self.c_inside.abs() * k).max(outside.abs());
        (inside - outside).abs() / scale
    }

    /// `n_points` uniform samples over `[x_min, x_max]`, endpoints included.
    /// The grid is mirror-exact when `x_min = -x_max`.
    pub fn sample(&self, x_min: f64, x_max: f64, n_points: usize) -> Result<Vec<(f64, f64)>> {
        let xs = uniform_grid(x_min, x_max, n_points)?;
        Ok(xs.into_iter().map(|x| (x, self.evaluate(x))).collect())
    }
}

pub(crate) fn uniform_grid(x_min: f64, x_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if n_points < 2 {
        return Err(argument(format!("need at least 2 sample points, got {n_points}")));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(argument(format!(
            "sample range must satisfy x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    let last = (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            let (l, r) = ((n_points - 1 - i) as f64, i as f64);
            (l * x_min + r * x_max) / last
        })
        .collect())
}
