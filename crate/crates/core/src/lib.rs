//! Eigenvalues, eigenfunctions and position moments of one-dimensional
//! quantum systems confined between impenetrable walls.
//!
//! The workhorse is imaginary-time propagation of the diffusion equation
//! obtained from the time-dependent Schrodinger equation, discretized with a
//! five-point stencil inside a symmetric implicit time step and solved as a
//! pentadiagonal system each iteration. Excited states come from
//! Gram-Schmidt deflation against the converged lower states. An
//! independent direct-diagonalization oracle cross-validates every result.

pub mod compensated;
pub mod engine;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod pentasolve;
pub mod potential;
pub mod quadrature;
pub mod stencil;

pub use engine::{
    deflate, propagate_step, solve_spectrum, solve_state, trial_function,
    trial_function_with_width, ItpConfig, Propagator, SolveResult, TrialKind,
};
pub use error::{Error, Result};
pub use grid::{make_asymmetric_grid, make_symmetric_grid, BoxDomain, Grid};
pub use oracle::{build_hamiltonian, lowest_eigenpairs, lowest_eigenvalues, DiscreteHamiltonian, StencilOrder};
pub use pentasolve::{solve_penta, PentaFactor, PentaSystem};
pub use potential::{eval_potential, sample_potential, PotentialSpec};
pub use quadrature::{
    energy_expectation, integrate, norm, normalize, overlap, position_moments, weights,
    WaveFunction, QUADRATURE_ORDER,
};
pub use stencil::{
    apply_hamiltonian, apply_laplacian_5pt, assemble_coefficients, assemble_rhs,
    assemble_rhs_into, left_system, PropagatorCoefficients,
};
