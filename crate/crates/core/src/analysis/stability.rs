//! Linear stability of the splitting methods on the scalar resonance model.
//!
//! On a linear problem (`f = k_f x`, `g = k_g x`, eps = 1) every fractional
//! map is a 2x2 matrix acting on `(x, v)`; one outer step is their product
//! in execution order. The method is stable at a given outer step exactly
//! when the spectral radius of that propagation matrix is 1, which for a
//! determinant-1 matrix happens iff |trace| <= 2; resonance shows up as
//! spectral radius above 1 near integer multiples of half the fast period.

use crate::integrators::{ExecutionOrder, StepConfig};
use crate::schemes::SplittingScheme;

/// Row-major 2x2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }

    pub fn apply(&self, x: f64, v: f64) -> (f64, f64) {
        (
            self.0[0][0] * x + self.0[0][1] * v,
            self.0[1][0] * x + self.0[1][1] * v,
        )
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Largest eigenvalue magnitude. Complex pairs have magnitude
    /// `sqrt(det)`.
    pub fn spectral_radius(&self) -> f64 {
        let tr = self.trace();
        let det = self.det();
        let disc = tr * tr - 4.0 * det;
        if disc >= 0.0 {
            let root = disc.sqrt();
            ((tr + root) / 2.0).abs().max(((tr - root) / 2.0).abs())
        } else {
            det.sqrt()
        }
    }
}

fn kick_matrix(tau: f64, k_f: f64) -> Mat2 {
    Mat2([[1.0, 0.0], [tau * k_f, 1.0]])
}

fn verlet_substep_matrix(h: f64, k_g: f64) -> Mat2 {
    let half_kick = Mat2([[1.0, 0.0], [0.5 * h * k_g, 1.0]]);
    let drift = Mat2([[1.0, h], [0.0, 1.0]]);
    half_kick.mul(&drift).mul(&half_kick)
}

fn flow_matrix(tau: f64, k_g: f64, dt_inner_target: f64) -> Mat2 {
    let m = crate::integrators::substep_count(tau, dt_inner_target);
    let sub = verlet_substep_matrix(tau / m as f64, k_g);
    let mut out = Mat2::IDENTITY;
    for _ in 0..m {
        out = sub.mul(&out);
    }
    out
}

/// Propagation matrix of one outer step on the linear problem with
/// stiffnesses `k_f` (slow) and `k_g` (fast), in the integrator's execution
/// order. Matches `integrators::step` applied to `(x, v)` arithmetically.
pub fn propagation_matrix(
    scheme: &SplittingScheme<f64>,
    config: &StepConfig,
    k_f: f64,
    k_g: f64,
) -> Mat2 {
    let c = scheme.kick_coefficients();
    let d = scheme.flow_coefficients();
    let mut matrix = Mat2::IDENTITY;
    let mut apply = |m: Mat2| matrix = m.mul(&matrix);
    match config.order {
        ExecutionOrder::LeftToRight => {
            for (&ci, &di) in c.iter().zip(d) {
                if ci != 0.0 {
                    apply(kick_matrix(ci * config.dt, k_f));
                }
                if di != 0.0 {
                    apply(flow_matrix(di * config.dt, k_g, config.dt_inner_target));
                }
            }
        }
        ExecutionOrder::RightToLeft => {
            for (&ci, &di) in c.iter().zip(d).rev() {
                if di != 0.0 {
                    apply(flow_matrix(di * config.dt, k_g, config.dt_inner_target));
                }
                if ci != 0.0 {
                    apply(kick_matrix(ci * config.dt, k_f));
                }
            }
        }
    }
    matrix
}

/// Spectral radii over a grid of outer steps, per scheme.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub dt_grid: Vec<f64>,
    /// One (scheme label, spectral radii) pair per scheme, radii indexed
    /// like `dt_grid`.
    pub radii: Vec<(String, Vec<f64>)>,
    /// Worst determinant defect |det - 1| seen anywhere in the sweep.
    pub max_det_defect: f64,
}

/// Sweeps the outer step over `dt_grid`. When `dt_inner_target` is `None`,
/// each grid point uses the conventional inner step `dt / 24`.
pub fn stability_sweep(
    schemes: &[SplittingScheme<f64>],
    dt_grid: &[f64],
    dt_inner_target: Option<f64>,
    k_f: f64,
    k_g: f64,
) -> StabilityReport {
    let mut radii = Vec::with_capacity(schemes.len());
    let mut max_det_defect = 0.0f64;
    for (index, scheme) in schemes.iter().enumerate() {
        let label = scheme
            .name()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("scheme{}", index + 1));
        let mut rho = Vec::with_capacity(dt_grid.len());
        for &dt in dt_grid {
            let config = match dt_inner_target {
                Some(inner) => StepConfig::new(dt, inner),
                None => StepConfig::with_default_inner(dt),
            };
            let matrix = propagation_matrix(scheme, &config, k_f, k_g);
            max_det_defect = max_det_defect.max((matrix.det() - 1.0).abs());
            rho.push(matrix.spectral_radius());
        }
        radii.push((label, rho));
    }
    StabilityReport {
        dt_grid: dt_grid.to_vec(),
        radii,
        max_det_defect,
    }
}

/// Uniform grid `[lo, hi]` with the given spacing, inclusive of both ends.
pub fn uniform_grid(lo: f64, hi: f64, spacing: f64) -> Vec<f64> {
    assert!(spacing > 0.0 && hi >= lo, "bad grid bounds");
    let n = ((hi - lo) / spacing).round() as usize;
    (0..=n).map(|i| lo + i as f64 * spacing).collect()
}
