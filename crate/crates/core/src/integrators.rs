//! Execution of a splitting scheme on a problem.
//!
//! One outer step of size `dt` interleaves exact slow-force kicks over
//! `c_i * dt` with velocity-Verlet integration of the fast subsystem
//! (`x' = v`, `v' = g(x)/eps^2`) over `d_i * dt`, using enough inner
//! substeps that the realized inner step is as close as possible to the
//! requested target. A full-force velocity-Verlet integrator with a small
//! step serves as the reference when no closed-form solution exists.

use crate::problems::{PhaseState, Problem, ProblemError};
use crate::schemes::SplittingScheme;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error(transparent)]
    Force(#[from] ProblemError),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("state diverged at step {step}")]
    Diverged { step: usize },
}

/// Whether the fractional-step pairs are executed first-to-last (kick
/// `c_1` first, the default) or in the adjoint, last-to-first order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecutionOrder {
    #[default]
    LeftToRight,
    RightToLeft,
}

/// Step sizes of one outer step.
#[derive(Debug, Clone, Copy)]
pub struct StepConfig {
    /// Outer step size.
    pub dt: f64,
    /// Requested inner step; each fractional flow over `tau` uses
    /// `m = max(1, round(|tau| / dt_inner_target))` Verlet substeps.
    pub dt_inner_target: f64,
    pub order: ExecutionOrder,
}

impl StepConfig {
    pub fn new(dt: f64, dt_inner_target: f64) -> Self {
        assert!(dt > 0.0 && dt_inner_target > 0.0, "step sizes must be positive");
        StepConfig {
            dt,
            dt_inner_target,
            order: ExecutionOrder::LeftToRight,
        }
    }

    /// Inner target `dt / 24`, the conventional inner/outer ratio.
    pub fn with_default_inner(dt: f64) -> Self {
        StepConfig::new(dt, dt / 24.0)
    }

    pub fn execution_order(mut self, order: ExecutionOrder) -> Self {
        self.order = order;
        self
    }
}

/// Number of inner Verlet substeps for a fractional flow over `tau`: the
/// realized substep `tau / m` is as close as possible to the target.
pub fn substep_count(tau: f64, dt_inner_target: f64) -> usize {
    ((tau.abs() / dt_inner_target).round() as usize).max(1)
}

/// Slow-force kick: `v += tau * f(x)`; positions and time are unchanged.
pub fn kick(state: &mut PhaseState, problem: &dyn Problem, tau: f64) -> Result<(), ProblemError> {
    let f = problem.slow_force(&state.x)?;
    for (v, fi) in state.v.iter_mut().zip(&f) {
        *v += tau * fi;
    }
    Ok(())
}

/// Fast-subsystem flow over `tau` (which may be negative): `m` velocity-
/// Verlet substeps of size `tau / m` on `x' = v`, `v' = g(x)/eps^2`.
/// Advances time by `tau`.
pub fn fast_flow(
    state: &mut PhaseState,
    problem: &dyn Problem,
    tau: f64,
    dt_inner_target: f64,
) -> Result<(), ProblemError> {
    let m = substep_count(tau, dt_inner_target);
    let h = tau / m as f64;
    let inv_eps2 = 1.0 / (problem.epsilon() * problem.epsilon());

    let mut g = problem.fast_force(&state.x)?;
    for _ in 0..m {
        for (v, gi) in state.v.iter_mut().zip(&g) {
            *v += 0.5 * h * inv_eps2 * gi;
        }
        for (x, v) in state.x.iter_mut().zip(&state.v) {
            *x += h * v;
        }
        g = problem.fast_force(&state.x)?;
        for (v, gi) in state.v.iter_mut().zip(&g) {
            *v += 0.5 * h * inv_eps2 * gi;
        }
    }
    state.t += tau;
    Ok(())
}

/// One outer step of the scheme. Zero-coefficient kicks and flows are
/// skipped exactly; time advances by `dt` in total.
pub fn step(
    state: &mut PhaseState,
    problem: &dyn Problem,
    scheme: &SplittingScheme<f64>,
    config: &StepConfig,
) -> Result<(), IntegrateError> {
    let violations = scheme.validate();
    if let Some(v) = violations.first() {
        return Err(IntegrateError::InvalidScheme(v.to_string()));
    }
    let c = scheme.kick_coefficients();
    let d = scheme.flow_coefficients();
    let mut flowed = 0.0;
    match config.order {
        ExecutionOrder::LeftToRight => {
            for (&ci, &di) in c.iter().zip(d) {
                if ci != 0.0 {
                    kick(state, problem, ci * config.dt)?;
                }
                if di != 0.0 {
                    fast_flow(state, problem, di * config.dt, config.dt_inner_target)?;
                    flowed += di * config.dt;
                }
            }
        }
        ExecutionOrder::RightToLeft => {
            for (&ci, &di) in c.iter().zip(d).rev() {
                if di != 0.0 {
                    fast_flow(state, problem, di * config.dt, config.dt_inner_target)?;
                    flowed += di * config.dt;
                }
                if ci != 0.0 {
                    kick(state, problem, ci * config.dt)?;
                }
            }
        }
    }
    // Kicks do not advance time; absorb the roundoff between sum(d_i dt)
    // and dt so outer steps land on multiples of dt.
    state.t += config.dt - flowed;
    Ok(())
}

/// One trajectory sample at outer-step resolution.
#[derive(Debug, Clone)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn final_state(&self) -> PhaseState {
        let last = self.samples.last().expect("empty trajectory");
        PhaseState::new(last.t, last.x.clone(), last.v.clone())
    }

    pub fn energies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.energy).collect()
    }
}

fn record(
    samples: &mut Vec<Sample>,
    problem: &dyn Problem,
    state: &PhaseState,
) -> Result<(), ProblemError> {
    samples.push(Sample {
        t: state.t,
        x: state.x.clone(),
        v: state.v.clone(),
        energy: problem.energy(state)?,
    });
    Ok(())
}

/// Runs `n_steps` outer steps, sampling state and energy after each one
/// (and at the initial time). Aborts with [`IntegrateError::Diverged`] if
/// the state leaves the finite range, which is the expected outcome inside
/// resonance windows.
pub fn integrate(
    initial: &PhaseState,
    problem: &dyn Problem,
    scheme: &SplittingScheme<f64>,
    config: &StepConfig,
    n_steps: usize,
) -> Result<Trajectory, IntegrateError> {
    let mut state = initial.clone();
    let mut samples = Vec::with_capacity(n_steps + 1);
    record(&mut samples, problem, &state)?;
    for k in 1..=n_steps {
        step(&mut state, problem, scheme, config)?;
        if !state.is_finite() {
            return Err(IntegrateError::Diverged { step: k });
        }
        record(&mut samples, problem, &state)?;
    }
    Ok(Trajectory { samples })
}

/// Velocity Verlet on the full force `f + g/eps^2` with step `dt_ref`,
/// sampling every `sample_stride` steps (plus the final state): the error
/// oracle for the splitting methods.
pub fn reference_verlet(
    initial: &PhaseState,
    problem: &dyn Problem,
    dt_ref: f64,
    n_steps: usize,
    sample_stride: usize,
) -> Result<Trajectory, IntegrateError> {
    assert!(dt_ref > 0.0, "reference step must be positive");
    let stride = sample_stride.max(1);
    let inv_eps2 = 1.0 / (problem.epsilon() * problem.epsilon());
    let total_force = |x: &[f64]| -> Result<Vec<f64>, ProblemError> {
        let f = problem.slow_force(x)?;
        let g = problem.fast_force(x)?;
        Ok(f.iter().zip(&g).map(|(fi, gi)| fi + inv_eps2 * gi).collect())
    };

    let mut state = initial.clone();
    let mut samples = Vec::with_capacity(n_steps / stride + 2);
    record(&mut samples, problem, &state)?;
    let mut force = total_force(&state.x)?;
    for k in 1..=n_steps {
        for (v, fi) in state.v.iter_mut().zip(&force) {
            *v += 0.5 * dt_ref * fi;
        }
        for (x, v) in state.x.iter_mut().zip(&state.v) {
            *x += dt_ref * v;
        }
        force = total_force(&state.x)?;
        for (v, fi) in state.v.iter_mut().zip(&force) {
            *v += 0.5 * dt_ref * fi;
        }
        state.t += dt_ref;
        if !state.is_finite() {
            return Err(IntegrateError::Diverged { step: k });
        }
        if k % stride == 0 || k == n_steps {
            record(&mut samples, problem, &state)?;
        }
    }
    Ok(Trajectory { samples })
}
