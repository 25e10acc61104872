//! Global-error measurement against a fine reference trajectory.

use crate::integrators::{self, IntegrateError, StepConfig, Trajectory};
use crate::problems::{PhaseState, Problem};
use crate::schemes::SplittingScheme;
use thiserror::Error;

/// Which scalar of the state the error is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    Position(usize),
    Velocity(usize),
}

impl Coordinate {
    pub fn of_state(&self, state: &PhaseState) -> f64 {
        match *self {
            Coordinate::Position(i) => state.x[i],
            Coordinate::Velocity(i) => state.v[i],
        }
    }

    /// Parses `q1..qN` as positions and `p1..pN` as velocities (unit mass),
    /// 1-based as in the usual component notation.
    pub fn parse(text: &str) -> Option<Coordinate> {
        if text.len() < 2 {
            return None;
        }
        let (kind, index) = text.split_at(1);
        let index: usize = index.parse().ok()?;
        if index == 0 {
            return None;
        }
        match kind {
            "q" => Some(Coordinate::Position(index - 1)),
            "p" => Some(Coordinate::Velocity(index - 1)),
            _ => None,
        }
    }
}

impl std::fmt::Display for Coordinate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Coordinate::Position(i) => write!(f, "q{}", i + 1),
            Coordinate::Velocity(i) => write!(f, "p{}", i + 1),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error("need at least {needed} grid points for a slope fit, got {got}")]
    GridTooCoarse { needed: usize, got: usize },
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub dt_grid: Vec<f64>,
    /// One (scheme label, final-time errors) pair per scheme.
    pub errors: Vec<(String, Vec<f64>)>,
    /// Log-log slope fitted per scheme over the pre-saturation points.
    pub slopes: Vec<(String, f64)>,
    /// Nominal reference step size.
    pub dt_ref: f64,
}

/// Ordinary least-squares slope of `log err` against `log dt`, restricted
/// to points with `err < saturation`. Returns `None` when fewer than two
/// points survive.
pub fn fit_loglog_slope(dts: &[f64], errors: &[f64], saturation: f64) -> Option<f64> {
    let points: Vec<(f64, f64)> = dts
        .iter()
        .zip(errors)
        .filter(|&(_, &e)| e > 0.0 && e < saturation)
        .map(|(&dt, &e)| (dt.ln(), e.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Some(sxy / sxx)
}

/// Runs each scheme over the step grid and reports the final-time error in
/// `coordinate` against a reference Verlet run.
///
/// The horizon is realized per grid point as `n dt` with
/// `n = round(t_final / dt)`, and the reference is integrated to exactly
/// that time (its step is adjusted to divide the horizon), so no spurious
/// end-time offset enters the error.
///
/// `dt_ref`, when `None`, defaults to `min(dt) / 100`. Slopes are fitted
/// over points whose error stays below 10% of the coordinate's magnitude
/// along the reference trajectory, since long-horizon errors saturate.
#[allow(clippy::too_many_arguments)]
pub fn convergence_study(
    problem: &dyn Problem,
    schemes: &[SplittingScheme<f64>],
    initial: &PhaseState,
    dt_grid: &[f64],
    dt_inner_target: f64,
    t_final: f64,
    coordinate: Coordinate,
    dt_ref: Option<f64>,
) -> Result<ConvergenceReport, ConvergenceError> {
    if dt_grid.len() < 3 {
        return Err(ConvergenceError::GridTooCoarse {
            needed: 3,
            got: dt_grid.len(),
        });
    }
    let min_dt = dt_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let dt_ref = dt_ref.unwrap_or(min_dt / 100.0);

    // One reference per grid point, at that point's realized horizon.
    let mut reference_values = Vec::with_capacity(dt_grid.len());
    let mut steps_per_point = Vec::with_capacity(dt_grid.len());
    let mut magnitude = 0.0f64;
    for &dt in dt_grid {
        let n_steps = ((t_final / dt).round() as usize).max(1);
        let horizon = n_steps as f64 * dt;
        let n_ref = ((horizon / dt_ref).round() as usize).max(1);
        let dt_ref_realized = horizon / n_ref as f64;
        let reference = integrators::reference_verlet(
            initial,
            problem,
            dt_ref_realized,
            n_ref,
            (n_ref / 200).max(1),
        )?;
        magnitude = reference
            .samples
            .iter()
            .map(|s| {
                coordinate
                    .of_state(&PhaseState::new(s.t, s.x.clone(), s.v.clone()))
                    .abs()
            })
            .fold(magnitude, f64::max);
        reference_values.push(coordinate.of_state(&reference.final_state()));
        steps_per_point.push(n_steps);
    }
    let saturation = 0.1 * magnitude.max(f64::MIN_POSITIVE);

    let mut errors = Vec::with_capacity(schemes.len());
    let mut slopes = Vec::with_capacity(schemes.len());
    for (index, scheme) in schemes.iter().enumerate() {
        let label = scheme
            .name()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("scheme{}", index + 1));
        let mut errs = Vec::with_capacity(dt_grid.len());
        for ((&dt, &n_steps), &reference_value) in dt_grid
            .iter()
            .zip(&steps_per_point)
            .zip(&reference_values)
        {
            let config = StepConfig::new(dt, dt_inner_target.min(dt));
            let trajectory = integrators::integrate(initial, problem, scheme, &config, n_steps)?;
            let value = coordinate.of_state(&trajectory.final_state());
            errs.push((value - reference_value).abs());
        }
        let slope = fit_loglog_slope(dt_grid, &errs, saturation).unwrap_or(f64::NAN);
        errors.push((label.clone(), errs));
        slopes.push((label, slope));
    }
    Ok(ConvergenceReport {
        dt_grid: dt_grid.to_vec(),
        errors,
        slopes,
        dt_ref,
    })
}

/// Final-time error of one trajectory in one coordinate, for spot checks.
pub fn final_error(trajectory: &Trajectory, reference: &Trajectory, coordinate: Coordinate) -> f64 {
    (coordinate.of_state(&trajectory.final_state())
        - coordinate.of_state(&reference.final_state()))
    .abs()
}
