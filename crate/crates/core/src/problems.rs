//! Test systems: second-order ODEs `x'' = f(x) + g(x)/eps^2` with a slow
//! force `f = -grad W` and a fast force `g = -grad V`.
//!
//! Problems expose `g` without the 1/eps^2 factor; the integrator (and the
//! fast-subsystem Hamiltonian) apply it exactly once. The mass matrix is
//! the identity throughout, so momenta and velocities coincide.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("singular configuration: |q| = 0")]
    SingularConfiguration,
    #[error("state dimension {found} does not match problem dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Positions and velocities of the ODE system at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl PhaseState {
    pub fn new(t: f64, x: Vec<f64>, v: Vec<f64>) -> Self {
        assert_eq!(x.len(), v.len(), "position/velocity length mismatch");
        PhaseState { t, x, v }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(self.v.iter()).all(|c| c.is_finite())
    }
}

pub trait Problem {
    fn dim(&self) -> usize;

    /// Scale-separation parameter; the fast force enters the dynamics as
    /// `g / eps^2`.
    fn epsilon(&self) -> f64;

    /// Slow force `f(x) = -grad W(x)`.
    fn slow_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError>;

    /// Fast force `g(x) = -grad V(x)`, without the 1/eps^2 factor.
    fn fast_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError>;

    /// Slow potential `W(x)`.
    fn slow_potential(&self, x: &[f64]) -> Result<f64, ProblemError>;

    /// Fast potential `V(x)`, without the 1/eps^2 factor.
    fn fast_potential(&self, x: &[f64]) -> Result<f64, ProblemError>;

    /// Total energy `H = |v|^2/2 + W(x) + V(x)/eps^2`.
    fn energy(&self, state: &PhaseState) -> Result<f64, ProblemError> {
        let kinetic: f64 = state.v.iter().map(|v| 0.5 * v * v).sum();
        let eps = self.epsilon();
        Ok(kinetic
            + self.slow_potential(&state.x)?
            + self.fast_potential(&state.x)? / (eps * eps))
    }
}

/// Two planar unit-mass particles `q` and `theta`, coupled by a stiff
/// harmonic spring and a soft quartic term, with `q` additionally tied to
/// the unit circle:
///
/// ```text
/// W(q, theta) = beta/4 |theta - q|^4 + (|q| - 1)^2 / 2
/// V(q, theta) = |theta - q|^2 / 2        (spring weight 1/eps^2 applied outside)
/// ```
///
/// The slow force on `q` is singular at `q = 0`; that configuration is a
/// hard error rather than something to regularize, since trajectories of
/// interest never approach it.
#[derive(Debug, Clone)]
pub struct CoupledOscillator {
    pub epsilon: f64,
    pub beta: f64,
}

impl CoupledOscillator {
    pub fn new(epsilon: f64, beta: f64) -> Self {
        assert!(epsilon > 0.0, "epsilon must be positive");
        CoupledOscillator { epsilon, beta }
    }

    /// The benchmark configuration: eps = 0.1, beta = 0.1.
    pub fn benchmark() -> Self {
        CoupledOscillator::new(0.1, 0.1)
    }

    /// Benchmark initial condition: q = (1, 0), theta = (1.01, 0),
    /// q' = (0, 1), theta' = (0, 0.05).
    pub fn benchmark_initial_state() -> PhaseState {
        PhaseState::new(
            0.0,
            vec![1.0, 0.0, 1.01, 0.0],
            vec![0.0, 1.0, 0.0, 0.05],
        )
    }

    fn split(x: &[f64]) -> ([f64; 2], [f64; 2]) {
        ([x[0], x[1]], [x[2], x[3]])
    }

    fn check_dim(&self, x: &[f64]) -> Result<(), ProblemError> {
        if x.len() != 4 {
            return Err(ProblemError::DimensionMismatch {
                expected: 4,
                found: x.len(),
            });
        }
        Ok(())
    }
}

impl Problem for CoupledOscillator {
    fn dim(&self) -> usize {
        4
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn slow_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        self.check_dim(x)?;
        let (q, theta) = Self::split(x);
        let r = [theta[0] - q[0], theta[1] - q[1]];
        let r2 = r[0] * r[0] + r[1] * r[1];
        let qn = (q[0] * q[0] + q[1] * q[1]).sqrt();
        if qn == 0.0 {
            return Err(ProblemError::SingularConfiguration);
        }
        let radial = (1.0 - qn) / qn;
        let quartic = self.beta * r2;
        Ok(vec![
            radial * q[0] + quartic * r[0],
            radial * q[1] + quartic * r[1],
            -quartic * r[0],
            -quartic * r[1],
        ])
    }

    fn fast_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        self.check_dim(x)?;
        let (q, theta) = Self::split(x);
        let r = [theta[0] - q[0], theta[1] - q[1]];
        Ok(vec![r[0], r[1], -r[0], -r[1]])
    }

    fn slow_potential(&self, x: &[f64]) -> Result<f64, ProblemError> {
        self.check_dim(x)?;
        let (q, theta) = Self::split(x);
        let r2 = (theta[0] - q[0]).powi(2) + (theta[1] - q[1]).powi(2);
        let qn = (q[0] * q[0] + q[1] * q[1]).sqrt();
        Ok(0.25 * self.beta * r2 * r2 + 0.5 * (qn - 1.0).powi(2))
    }

    fn fast_potential(&self, x: &[f64]) -> Result<f64, ProblemError> {
        self.check_dim(x)?;
        let (q, theta) = Self::split(x);
        Ok(0.5 * ((theta[0] - q[0]).powi(2) + (theta[1] - q[1]).powi(2)))
    }
}

/// Scalar resonance model: slow stiffness `-(pi/5)^2`, fast stiffness
/// `-pi^2`, with the scale factor absorbed (eps = 1). The fast period is 2,
/// so the first instability window of impulse-type methods sits near step
/// size 1.
#[derive(Debug, Clone, Default)]
pub struct LinearResonance;

impl LinearResonance {
    pub const SLOW_STIFFNESS: f64 = -(std::f64::consts::PI * std::f64::consts::PI) / 25.0;
    pub const FAST_STIFFNESS: f64 = -(std::f64::consts::PI * std::f64::consts::PI);

    /// Angular frequency of the exact solution, `pi sqrt(1 + 1/25)`.
    pub fn total_frequency() -> f64 {
        (-Self::SLOW_STIFFNESS - Self::FAST_STIFFNESS).sqrt()
    }

    /// Exact solution at time `t` from `(x0, v0)`.
    pub fn exact_solution(x0: f64, v0: f64, t: f64) -> (f64, f64) {
        let w = Self::total_frequency();
        (
            x0 * (w * t).cos() + v0 / w * (w * t).sin(),
            -x0 * w * (w * t).sin() + v0 * (w * t).cos(),
        )
    }
}

impl Problem for LinearResonance {
    fn dim(&self) -> usize {
        1
    }

    fn epsilon(&self) -> f64 {
        1.0
    }

    fn slow_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        Ok(vec![Self::SLOW_STIFFNESS * x[0]])
    }

    fn fast_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        Ok(vec![Self::FAST_STIFFNESS * x[0]])
    }

    fn slow_potential(&self, x: &[f64]) -> Result<f64, ProblemError> {
        Ok(-0.5 * Self::SLOW_STIFFNESS * x[0] * x[0])
    }

    fn fast_potential(&self, x: &[f64]) -> Result<f64, ProblemError> {
        Ok(-0.5 * Self::FAST_STIFFNESS * x[0] * x[0])
    }
}
