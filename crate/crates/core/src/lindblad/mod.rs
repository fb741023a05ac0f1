//! Master equation on a discretised elastic momentum shell.
//!
//! The neutron state is a density matrix over a grid of propagation
//! directions at fixed |p| = p0. Coherent forward propagation enters as a
//! uniform optical-potential level shift; diffuse scattering enters through
//! jump operators between directions weighted by the static structure
//! function.

mod density;
mod evolve;
mod grid;
mod jumps;
pub mod snapshot;

pub use density::{DensityMatrix, EIGEN_TOLERANCE, STATE_TOLERANCE};
pub use evolve::{
    coherent_survival, evolve, evolve_with, optical_theorem_relative, optical_theorem_residual,
    EvolveOptions, Generator, StepDiagnostics, SurvivalFit, Trajectory, STABILITY_LIMIT,
};
pub use grid::{build_capped_direction_grid, build_direction_grid, gauss_legendre, DirectionGrid};
pub use jumps::{build_jump_operators, JumpOperatorSet};
