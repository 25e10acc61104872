//! Diagnostics: energy statistics, shadow Hamiltonians, linear stability,
//! and convergence-order measurement.

pub mod convergence;
pub mod energy;
pub mod shadow;
pub mod stability;

pub use convergence::{
    convergence_study, final_error, fit_loglog_slope, ConvergenceError, ConvergenceReport,
    Coordinate,
};
pub use energy::{energy_stats, energy_stats_of, EnergyStats};
pub use shadow::{
    bracket_sign_check, double_bracket_h1, double_bracket_h2, poisson_bracket_fd,
    shadow_hamiltonian, BracketCheckReport, ShadowMethod,
};
pub use stability::{
    propagation_matrix, stability_sweep, uniform_grid, Mat2, StabilityReport,
};
