//! Shadow Hamiltonians of the two-pair impulse methods, by backward error
//! analysis.
//!
//! With the split `H2 = W(x)` and `H1 = V(x)/eps^2 + |p|^2/2` (unit mass),
//! the modified Hamiltonian conserved by the classical impulse method
//! through second order in the outer step is
//!
//! ```text
//! H_S = H + dt^2/12 {{H2,H1},H1} - dt^2/24 {H2,{H2,H1}}
//! ```
//!
//! where, in canonical variables,
//!
//! ```text
//! {H2,H1}       = -p' grad W
//! {{H2,H1},H1}  = p' hess W p - grad W' grad V / eps^2
//! {H2,{H2,H1}}  = grad W' grad W
//! ```
//!
//! (The last two right-hand sides are sometimes quoted with their labels
//! interchanged; the assignment above is the one a direct finite-difference
//! bracket evaluation confirms, and [`bracket_sign_check`] re-verifies it on
//! demand.) The Hessian contraction is evaluated as a central difference of
//! the slow force along `p`, avoiding hand-coded Hessians.
//!
//! For the non-symmetric two-pair method the same analysis leaves only the
//! slow-gradient-squared bracket, scaled by its leading remainder
//! coefficient 1/48:
//!
//! ```text
//! H_S = H + dt^2/48 {H2,{H2,H1}}
//! ```

use crate::problems::{PhaseState, Problem, ProblemError};

/// Which method's shadow Hamiltonian to evaluate; the derivation covers
/// only the two two-pair methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowMethod {
    ImpulseI,
    ImpulseII,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `p' hess W p`, via a central difference of the slow force along `p`
/// with step `h = 1e-5 * (1 + |x|)`.
pub fn hessian_quadratic_form(
    problem: &dyn Problem,
    x: &[f64],
    p: &[f64],
) -> Result<f64, ProblemError> {
    let xn = dot(x, x).sqrt();
    let h = 1e-5 * (1.0 + xn);
    let shift = |sign: f64| -> Vec<f64> {
        x.iter().zip(p).map(|(xi, pi)| xi + sign * h * pi).collect()
    };
    let f_plus = problem.slow_force(&shift(1.0))?;
    let f_minus = problem.slow_force(&shift(-1.0))?;
    // grad W = -f, so p' hess W p = -p' (f(x+hp) - f(x-hp)) / 2h.
    Ok(-(dot(p, &f_plus) - dot(p, &f_minus)) / (2.0 * h))
}

/// Value of `{{H2,H1},H1} = p' hess W p - grad W' grad V / eps^2`.
pub fn double_bracket_h1(problem: &dyn Problem, state: &PhaseState) -> Result<f64, ProblemError> {
    let f = problem.slow_force(&state.x)?;
    let g = problem.fast_force(&state.x)?;
    let eps = problem.epsilon();
    // grad W' grad V = (-f)'(-g) = f'g.
    Ok(hessian_quadratic_form(problem, &state.x, &state.v)? - dot(&f, &g) / (eps * eps))
}

/// Value of `{H2,{H2,H1}} = grad W' grad W`.
pub fn double_bracket_h2(problem: &dyn Problem, state: &PhaseState) -> Result<f64, ProblemError> {
    let f = problem.slow_force(&state.x)?;
    Ok(dot(&f, &f))
}

/// Shadow Hamiltonian of the selected method at the given state.
pub fn shadow_hamiltonian(
    problem: &dyn Problem,
    state: &PhaseState,
    dt: f64,
    method: ShadowMethod,
) -> Result<f64, ProblemError> {
    let h = problem.energy(state)?;
    let dt2 = dt * dt;
    match method {
        ShadowMethod::ImpulseI => Ok(h + dt2 / 12.0 * double_bracket_h1(problem, state)?
            - dt2 / 24.0 * double_bracket_h2(problem, state)?),
        ShadowMethod::ImpulseII => {
            Ok(h + dt2 / 48.0 * double_bracket_h2(problem, state)?)
        }
    }
}

/// Worst relative errors of the displayed bracket formulas against direct
/// finite-difference Poisson brackets, over a set of states.
#[derive(Debug, Clone, Copy)]
pub struct BracketCheckReport {
    /// `{H2,H1} = -p' grad W` vs finite differences.
    pub first_bracket: f64,
    /// `{{H2,H1},H1}` formula vs finite differences.
    pub double_h1: f64,
    /// `{H2,{H2,H1}}` formula vs finite differences.
    pub double_h2: f64,
    /// `{H1,H2} + {H2,H1}` antisymmetry defect.
    pub antisymmetry: f64,
}

impl BracketCheckReport {
    pub fn max_error(&self) -> f64 {
        self.first_bracket
            .max(self.double_h1)
            .max(self.double_h2)
            .max(self.antisymmetry)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_error() < tol
    }
}

/// Poisson bracket `{F,G} = dF/dp . dG/dx - dF/dx . dG/dp` of two phase-
/// space functions, by central differences in every canonical variable.
pub fn poisson_bracket_fd(
    f: &dyn Fn(&PhaseState) -> f64,
    g: &dyn Fn(&PhaseState) -> f64,
    state: &PhaseState,
    h: f64,
) -> f64 {
    let n = state.dim();
    let mut grad_f_x = vec![0.0; n];
    let mut grad_f_p = vec![0.0; n];
    let mut grad_g_x = vec![0.0; n];
    let mut grad_g_p = vec![0.0; n];
    for i in 0..n {
        let mut plus = state.clone();
        let mut minus = state.clone();
        plus.x[i] += h;
        minus.x[i] -= h;
        grad_f_x[i] = (f(&plus) - f(&minus)) / (2.0 * h);
        grad_g_x[i] = (g(&plus) - g(&minus)) / (2.0 * h);
        let mut plus = state.clone();
        let mut minus = state.clone();
        plus.v[i] += h;
        minus.v[i] -= h;
        grad_f_p[i] = (f(&plus) - f(&minus)) / (2.0 * h);
        grad_g_p[i] = (g(&plus) - g(&minus)) / (2.0 * h);
    }
    dot(&grad_f_p, &grad_g_x) - dot(&grad_f_x, &grad_g_p)
}

fn relative_error(formula: f64, reference: f64, scale: f64) -> f64 {
    (formula - reference).abs() / scale.max(1e-8)
}

/// Verifies the three displayed bracket formulas against direct finite-
/// difference Poisson brackets of `H1` and `H2` at each supplied state.
pub fn bracket_sign_check(
    problem: &dyn Problem,
    states: &[PhaseState],
) -> Result<BracketCheckReport, ProblemError> {
    let eps2 = problem.epsilon() * problem.epsilon();
    let h2 = |s: &PhaseState| problem.slow_potential(&s.x).unwrap();
    let h1 = |s: &PhaseState| {
        problem.fast_potential(&s.x).unwrap() / eps2
            + 0.5 * s.v.iter().map(|v| v * v).sum::<f64>()
    };
    let fd_step = 1e-5;

    let mut report = BracketCheckReport {
        first_bracket: 0.0,
        double_h1: 0.0,
        double_h2: 0.0,
        antisymmetry: 0.0,
    };
    for state in states {
        let scale = 1.0 + problem.energy(state)?.abs();

        // {H2,H1} = -p' grad W = p' f.
        let f = problem.slow_force(&state.x)?;
        let first_formula = dot(&state.v, &f);
        let first_fd = poisson_bracket_fd(&h2, &h1, state, fd_step);
        report.first_bracket = report
            .first_bracket
            .max(relative_error(first_formula, first_fd, scale));

        // Antisymmetry: {H1,H2} = -{H2,H1}.
        let reversed_fd = poisson_bracket_fd(&h1, &h2, state, fd_step);
        report.antisymmetry = report
            .antisymmetry
            .max(relative_error(reversed_fd, -first_fd, scale));

        // Inner bracket as a function, for the outer finite difference.
        let inner = |s: &PhaseState| {
            let f = problem.slow_force(&s.x).unwrap();
            dot(&s.v, &f)
        };
        let double_h1_fd = poisson_bracket_fd(&inner, &h1, state, fd_step);
        report.double_h1 = report.double_h1.max(relative_error(
            double_bracket_h1(problem, state)?,
            double_h1_fd,
            scale.max(double_h1_fd.abs()),
        ));

        let double_h2_fd = poisson_bracket_fd(&h2, &inner, state, fd_step);
        report.double_h2 = report.double_h2.max(relative_error(
            double_bracket_h2(problem, state)?,
            double_h2_fd,
            scale.max(double_h2_fd.abs()),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{CoupledOscillator, LinearResonance};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_oscillator_states(n: usize, seed: u64) -> Vec<PhaseState> {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                PhaseState::new(
                    0.0,
                    (0..4).map(|_| rng.gen_range(0.6..1.4)).collect(),
                    (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn zero_step_shadow_equals_energy_exactly() {
        let p = CoupledOscillator::benchmark();
        for state in random_oscillator_states(100, 42) {
            let h = p.energy(&state).unwrap();
            let hs = shadow_hamiltonian(&p, &state, 0.0, ShadowMethod::ImpulseI).unwrap();
            assert_eq!(h, hs);
            let hs2 = shadow_hamiltonian(&p, &state, 0.0, ShadowMethod::ImpulseII).unwrap();
            assert_eq!(h, hs2);
        }
    }

    #[test]
    fn gradient_squared_bracket_at_the_benchmark_state() {
        let p = CoupledOscillator::benchmark();
        let state = CoupledOscillator::benchmark_initial_state();
        let f = p.slow_force(&state.x).unwrap();
        let expected: f64 = f.iter().map(|fi| fi * fi).sum();
        assert_eq!(double_bracket_h2(&p, &state).unwrap(), expected);
        // The benchmark state has |f| = sqrt(2) * 1e-7.
        assert!((expected - 2e-14).abs() < 1e-20);
    }

    #[test]
    fn quadratic_problem_brackets_in_closed_form() {
        // W = V = x^2/2 on the scalar problem with eps = 1:
        // {{H2,H1},H1} = p^2 - x^2 and {H2,{H2,H1}} = x^2.
        struct Quadratic;
        impl Problem for Quadratic {
            fn dim(&self) -> usize {
                1
            }
            fn epsilon(&self) -> f64 {
                1.0
            }
            fn slow_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
                Ok(vec![-x[0]])
            }
            fn fast_force(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
                Ok(vec![-x[0]])
            }
            fn slow_potential(&self, x: &[f64]) -> Result<f64, ProblemError> {
                Ok(0.5 * x[0] * x[0])
            }
            fn fast_potential(&self, x: &[f64]) -> Result<f64, ProblemError> {
                Ok(0.5 * x[0] * x[0])
            }
        }
        let state = PhaseState::new(0.0, vec![1.3], vec![0.7]);
        let k1 = double_bracket_h1(&Quadratic, &state).unwrap();
        assert!((k1 - (0.7f64.powi(2) - 1.3f64.powi(2))).abs() < 1e-9);
        let k2 = double_bracket_h2(&Quadratic, &state).unwrap();
        assert!((k2 - 1.3f64.powi(2)).abs() < 1e-12);
        // With p = 0 only the potential coupling survives.
        let rest = PhaseState::new(0.0, vec![1.3], vec![0.0]);
        let k1_rest = double_bracket_h1(&Quadratic, &rest).unwrap();
        assert!((k1_rest + 1.3f64.powi(2)).abs() < 1e-9);
    }

    #[test]
    fn bracket_formulas_match_finite_differences() {
        let p = CoupledOscillator::benchmark();
        let report = bracket_sign_check(&p, &random_oscillator_states(5, 3)).unwrap();
        assert!(report.passes(1e-5), "oscillator report: {report:?}");

        let lin = LinearResonance;
        let states: Vec<PhaseState> = (0..5)
            .map(|i| PhaseState::new(0.0, vec![0.3 + 0.2 * i as f64], vec![0.5 - 0.1 * i as f64]))
            .collect();
        let report = bracket_sign_check(&lin, &states).unwrap();
        assert!(report.passes(1e-5), "linear report: {report:?}");
    }
}
