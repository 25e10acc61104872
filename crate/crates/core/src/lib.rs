//! Generalized impulse (multiple time-stepping) integrators for ODEs with
//! fast and slow forces, together with the symbolic machinery that explains
//! them.
//!
//! The crate has two halves. The symbolic half ([`algebra`], [`schemes`])
//! expands the splitting error of a fractional-step method as an exact
//! truncated series over words of noncommuting operator symbols, projects
//! it onto the reference commutator combinations, and tracks how each term
//! scales with the fast/slow separation parameter; this is what singles out
//! the cataloged impulse methods. The numerical half ([`problems`],
//! [`integrators`], [`analysis`]) runs those methods on benchmark systems
//! and measures energy conservation, shadow-Hamiltonian behavior, linear
//! resonance, and convergence order.

pub mod algebra;
pub mod analysis;
pub mod integrators;
pub mod problems;
pub mod scalar;
pub mod schemes;

pub use algebra::{remainder, EpsilonOrder, WordSeries};
pub use analysis::{Coordinate, EnergyStats, ShadowMethod};
pub use integrators::{integrate, reference_verlet, step, ExecutionOrder, StepConfig, Trajectory};
pub use problems::{CoupledOscillator, LinearResonance, PhaseState, Problem};
pub use scalar::{ratio, Scalar};
pub use schemes::{
    catalog, impulse_i, impulse_ii, impulse_iii, impulse_iv, parse_scheme, parse_selector,
    solve_k4_equations, SchemeSelector, SplittingScheme,
};
