//! Fourier-grid diagonalization of the fractional Hamiltonian.
//!
//! The kinetic operator `D_α |p|^α` is diagonal in momentum space, so on a
//! periodic grid it is exact in the discrete Fourier basis. Mapped back to
//! position space it becomes a dense circulant matrix; adding the diagonal
//! step potential gives a real symmetric `N × N` Hamiltonian whose
//! eigenvalues below `U` approximate the bound spectrum. This path shares
//! nothing with the transcendental solver and serves as its cross-check.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{argument, domain, Error, Result};
use crate::solver::solve_spectrum;
use crate::well::{pow_nonneg, Parity, WellParameters};

/// Eigenvalues closer than this fraction of `U` to the threshold are dropped.
pub const EDGE_MARGIN: f64 = 1e-6;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 0; // no cap

/// Periodic grid on `[-L, L)`.
///
/// Nodes sit at cell centres, `x_i = -L + (i + 1/2) Δx`, so the grid is
/// exactly mirror-symmetric (`x_{N-1-i} = -x_i`) and no node falls on the well
/// edge when `L - a` is a whole number of cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    box_half_length: f64,
    n_points: usize,
}

impl SpectralGrid {
    pub fn new(box_half_length: f64, n_points: usize) -> Result<Self> {
        if !(box_half_length > 0.0 && box_half_length.is_finite()) {
            return Err(argument(format!(
                "grid half-length must be positive, got {box_half_length}"
            )));
        }
        if n_points < 16 || n_points % 2 != 0 {
            return Err(argument(format!(
                "grid point count must be even and >= 16, got {n_points}"
            )));
        }
        Ok(Self {
            box_half_length,
            n_points,
        })
    }

    pub fn box_half_length(&self) -> f64 {
        self.box_half_length
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.box_half_length / self.n_points as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let dx = self.spacing();
        let centre = self.n_points as f64 / 2.0;
        (0..self.n_points)
            .map(|i| (i as f64 + 0.5 - centre) * dx)
            .collect()
    }

    /// Signed mode numbers `-N/2, ..., N/2 - 1`.
    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let half = (self.n_points / 2) as i64;
        -half..half
    }

    /// Momentum nodes `p_j = (π ħ / L) j`.
    pub fn momenta(&self, hbar: f64) -> Vec<f64> {
        let step = PI * hbar / self.box_half_length;
        self.modes().map(|j| step * j as f64).collect()
    }
}

/// Well as seen by the oracle. Unlike [`WellParameters`] the depth may be
/// zero, which turns the problem into a free particle on the ring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleWell {
    pub a: f64,
    pub depth: f64,
    pub d_alpha: f64,
    pub hbar: f64,
    pub alpha: f64,
}

impl OracleWell {
    pub fn new(a: f64, depth: f64, d_alpha: f64, hbar: f64, alpha: f64) -> Result<Self> {
        if !(depth >= 0.0 && depth.is_finite()) {
            return Err(domain(format!("depth must be finite and >= 0, got {depth}")));
        }
        // Reuse the physical checks on everything but the depth.
        WellParameters::new(a, 1.0, d_alpha, hbar, alpha)?;
        Ok(Self {
            a,
            depth,
            d_alpha,
            hbar,
            alpha,
        })
    }

    pub fn physical(&self) -> Option<WellParameters> {
        WellParameters::new(self.a, self.depth, self.d_alpha, self.hbar, self.alpha).ok()
    }

    fn potential(&self, x: f64) -> f64 {
        if x.abs() <= self.a {
            0.0
        } else {
            self.depth
        }
    }
}

impl From<WellParameters> for OracleWell {
    fn from(p: WellParameters) -> Self {
        Self {
            a: p.a(),
            depth: p.depth(),
            d_alpha: p.d_alpha(),
            hbar: p.hbar(),
            alpha: p.alpha(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    pub grid: SpectralGrid,
    pub well: OracleWell,
    pub matrix: DMatrix<f64>,
    /// `D_α |p_j|^α` in mode order `-N/2, ..., N/2 - 1`.
    pub kinetic: Vec<f64>,
    pub potential: Vec<f64>,
}

pub fn build_hamiltonian(well: &OracleWell, grid: &SpectralGrid) -> Result<DiscreteHamiltonian> {
    if grid.box_half_length() < 4.0 * well.a {
        return Err(argument(format!(
            "grid half-length {} must be at least 4a = {}",
            grid.box_half_length(),
            4.0 * well.a
        )));
    }
    let n = grid.n_points();
    let kinetic: Vec<f64> = grid
        .momenta(well.hbar)
        .into_iter()
        .map(|p| well.d_alpha * pow_nonneg(p.abs(), well.alpha))
        .collect();

    // cos(2π m / N), mirrored so that entries m and N - m are bit-identical.
    let mut cosines: Vec<f64> = (0..n)
        .map(|m| (2.0 * PI * m as f64 / n as f64).cos())
        .collect();
    for m in n / 2 + 1..n {
        cosines[m] = cosines[n - m];
    }

    // First row of the circulant T = F⁻¹ diag(K) F.
    let n_i = n as i64;
    let row: Vec<f64> = (0..n_i)
        .map(|d| {
            let sum: f64 = grid
                .modes()
                .zip(&kinetic)
                .map(|(j, &kj)| kj * cosines[(j * d).rem_euclid(n_i) as usize])
                .sum();
            sum / n as f64
        })
        .collect();

    let potential: Vec<f64> = grid.nodes().into_iter().map(|x| well.potential(x)).collect();
    let mut matrix = DMatrix::from_fn(n, n, |i, l| {
        let d = (i as i64 - l as i64).rem_euclid(n_i) as usize;
        row[d]
    });
    for (i, v) in potential.iter().enumerate() {
        matrix[(i, i)] += v;
    }
    let transpose = matrix.transpose();
    matrix = (matrix + transpose) * 0.5;

    Ok(DiscreteHamiltonian {
        grid: *grid,
        well: *well,
        matrix,
        kinetic,
        potential,
    })
}

/// A bound eigenpair of the discrete Hamiltonian.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub energy: f64,
    pub vector: DVector<f64>,
}

impl BoundState {
    /// Parity of the eigenvector about `x = 0`, if it has one within `tol`
    /// (relative to the largest component).
    pub fn parity(&self, tol: f64) -> Option<Parity> {
        let v = &self.vector;
        let n = v.len();
        let scale = v.amax();
        let (mut even, mut odd) = (0.0f64, 0.0f64);
        for i in 0..n / 2 {
            let (x, y) = (v[i], v[n - 1 - i]);
            even = even.max((x - y).abs());
            odd = odd.max((x + y).abs());
        }
        if even <= tol * scale {
            Some(Parity::Even)
        } else if odd <= tol * scale {
            Some(Parity::Odd)
        } else {
            None
        }
    }
}

impl DiscreteHamiltonian {
    pub fn eigen(&self) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = self.grid.n_points();
        let eig = SymmetricEigen::try_new(self.matrix.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or(Error::EigenSolve(n))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((values, vectors))
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.grid.n_points();
        let mut values: Vec<f64> = self.matrix.symmetric_eigenvalues().iter().copied().collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::EigenSolve(n));
        }
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    fn threshold(&self) -> f64 {
        self.well.depth * (1.0 - EDGE_MARGIN)
    }

    /// Bound eigenpairs (`E < U (1 - 1e-6)`), ascending in energy.
    pub fn bound_states(&self) -> Result<Vec<BoundState>> {
        if self.well.depth == 0.0 {
            return Ok(Vec::new());
        }
        let (values, vectors) = self.eigen()?;
        let cut = self.threshold();
        Ok(values
            .into_iter()
            .enumerate()
            .take_while(|&(_, e)| e < cut)
            .map(|(i, energy)| BoundState {
                energy,
                vector: vectors.column(i).into_owned(),
            })
            .collect())
    }
}

/// Bound eigenvalues, ascending; empty for a zero-depth well.
pub fn bound_spectrum(h: &DiscreteHamiltonian) -> Result<Vec<f64>> {
    if h.well.depth == 0.0 {
        return Ok(Vec::new());
    }
    let cut = h.threshold();
    Ok(h.eigenvalues()?.into_iter().take_while(|&e| e < cut).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub box_half_length: f64,
    pub n_points: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelGap {
    pub index: usize,
    pub parity: Parity,
    pub sigma: f64,
    pub transcendental_energy: f64,
    pub oracle_energy: Option<f64>,
    pub abs_gap: Option<f64>,
    pub rel_gap: Option<f64>,
}

/// Side-by-side account of the two spectra. Gaps are measurements; nothing
/// here decides whether they are acceptable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub depth: f64,
    pub g: Option<f64>,
    pub grid: GridInfo,
    pub transcendental_count: usize,
    pub oracle_count: usize,
    pub oracle_energies: Vec<f64>,
    pub levels: Vec<LevelGap>,
    pub max_abs_gap: Option<f64>,
    pub max_rel_gap: Option<f64>,
}

pub fn compare(well: &OracleWell, grid: &SpectralGrid) -> Result<ComparisonReport> {
    let h = build_hamiltonian(well, grid)?;
    let oracle = bound_spectrum(&h)?;

    let (g, transcendental) = match well.physical() {
        Some(p) => {
            let dimless = p.nondimensionalize()?;
            let spectrum = solve_spectrum(&dimless)?;
            let levels = spectrum
                .levels
                .into_iter()
                .map(|l| l.with_energy(&p))
                .collect::<Result<Vec<_>>>()?;
            (Some(dimless.g()), levels)
        }
        None => (None, Vec::new()),
    };

    let levels: Vec<LevelGap> = transcendental
        .iter()
        .map(|l| {
            let e = l.energy.expect("energy attached above");
            let nearest = oracle
                .iter()
                .copied()
                .min_by(|x, y| (x - e).abs().total_cmp(&(y - e).abs()));
            let abs_gap = nearest.map(|o| (o - e).abs());
            LevelGap {
                index: l.index,
                parity: l.parity,
                sigma: l.sigma,
                transcendental_energy: e,
                oracle_energy: nearest,
                abs_gap,
                rel_gap: abs_gap.map(|d| d / e.abs()),
            }
        })
        .collect();

    let max_of = |it: &mut dyn Iterator<Item = f64>| it.reduce(f64::max);
    Ok(ComparisonReport {
        alpha: well.alpha,
        depth: well.depth,
        g,
        grid: GridInfo {
            box_half_length: grid.box_half_length(),
            n_points: grid.n_points(),
            spacing: grid.spacing(),
        },
        transcendental_count: transcendental.len(),
        oracle_count: oracle.len(),
        max_abs_gap: max_of(&mut levels.iter().filter_map(|l| l.abs_gap)),
        max_rel_gap: max_of(&mut levels.iter().filter_map(|l| l.rel_gap)),
        oracle_energies: oracle,
        levels,
    })
}
