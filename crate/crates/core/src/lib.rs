//! Bound states of a particle in a symmetric finite square well under the
//! fractional kinetic law `E = D_α |p|^α`, `1 < α <= 2`.
//!
//! The spectrum comes from the even/odd matching conditions
//! `η = ς tan ς`, `η = -ς cot ς` intersected with `η^α + ς^α = G`
//! ([`solver`]). [`wavefunction`] rebuilds the piecewise eigenfunctions and
//! [`oracle`] diagonalizes the same Hamiltonian on a Fourier grid as an
//! independent check.

pub mod error;
pub mod oracle;
pub mod solver;
pub mod wavefunction;
pub mod well;

pub use error::{Error, Result};
pub use oracle::{
    bound_spectrum, build_hamiltonian, compare, ComparisonReport, DiscreteHamiltonian,
    OracleWell, SpectralGrid,
};
pub use solver::{
    constraint_eta, count_levels, enumerate_branches, infinite_well_limit, solve_branch,
    solve_spectrum, Branch, Spectrum,
};
pub use wavefunction::{match_constants, Eigenfunction};
pub use well::{
    stationary_phase, DimensionlessWell, EnergyLevel, Parity, StationaryPhase, WellParameters,
};
