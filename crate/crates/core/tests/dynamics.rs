//! Integration-level behavior of the executed methods: convergence order,
//! reversibility, execution-order semantics, and stability continuity.

use mtsplit::analysis::{
    convergence_study, energy_stats_of, propagation_matrix, stability_sweep, uniform_grid,
    Coordinate,
};
use mtsplit::integrators::{self, ExecutionOrder, StepConfig};
use mtsplit::problems::{CoupledOscillator, LinearResonance, PhaseState};
use mtsplit::schemes::catalog;

const K_F: f64 = LinearResonance::SLOW_STIFFNESS;
const K_G: f64 = LinearResonance::FAST_STIFFNESS;

#[test]
fn oscillator_measured_order_is_at_least_1_8() {
    let problem = CoupledOscillator::benchmark();
    let initial = CoupledOscillator::benchmark_initial_state();
    let report = convergence_study(
        &problem,
        &catalog(),
        &initial,
        &[0.24, 0.12, 0.06, 0.03],
        1e-3,
        10.0,
        Coordinate::Position(0),
        Some(1e-4),
    )
    .unwrap();
    for (label, slope) in &report.slopes {
        assert!(
            *slope >= 1.8,
            "{label}: measured slope {slope} below second order"
        );
    }
    // Accuracy improves from the classical method to the others at every
    // step size on this horizon.
    let impulse1_errs = &report.errors[0].1;
    for (label, errs) in &report.errors[1..] {
        for (e, e1) in errs.iter().zip(impulse1_errs) {
            assert!(e < e1, "{label} not below impulse1: {e} vs {e1}");
        }
    }
}

#[test]
fn linear_problem_all_schemes_second_order() {
    // Endpoint error against the closed-form solution, with the inner step
    // small enough that the splitting error dominates across the grid.
    let problem = LinearResonance;
    let initial = PhaseState::new(0.0, vec![1.0], vec![0.0]);
    let grid = [0.1, 0.05, 0.025, 0.0125];
    for scheme in catalog() {
        let mut errs = Vec::new();
        for &dt in &grid {
            let n = (10.0f64 / dt).round() as usize;
            let config = StepConfig::new(dt, 1e-4);
            let traj = integrators::integrate(&initial, &problem, &scheme, &config, n).unwrap();
            let (x_exact, _) = LinearResonance::exact_solution(1.0, 0.0, n as f64 * dt);
            errs.push((traj.final_state().x[0] - x_exact).abs());
        }
        let slope =
            mtsplit::analysis::fit_loglog_slope(&grid, &errs, f64::INFINITY).unwrap();
        assert!(
            slope >= 1.8,
            "{:?}: slope {slope} from errors {errs:?}",
            scheme.name()
        );
    }
}

#[test]
fn symmetric_integration_reverses_to_the_initial_state() {
    let problem = CoupledOscillator::benchmark();
    let initial = CoupledOscillator::benchmark_initial_state();
    let config = StepConfig::new(0.12, 0.01);
    for scheme in [&catalog()[0], &catalog()[2]] {
        let forward = integrators::integrate(&initial, &problem, scheme, &config, 100).unwrap();
        let mut turned = forward.final_state();
        for v in turned.v.iter_mut() {
            *v = -*v;
        }
        let back = integrators::integrate(&turned, &problem, scheme, &config, 100).unwrap();
        let end = back.final_state();
        for (a, b) in end.x.iter().zip(&initial.x) {
            assert!(
                (a - b).abs() < 1e-6,
                "{:?} did not return: {a} vs {b}",
                scheme.name()
            );
        }
    }
}

#[test]
fn execution_order_flag_only_changes_non_symmetric_schemes() {
    for (index, scheme) in catalog().iter().enumerate() {
        let forward = StepConfig::new(0.3, 0.0125);
        let adjoint = forward.execution_order(ExecutionOrder::RightToLeft);
        let m_fwd = propagation_matrix(scheme, &forward, K_F, K_G);
        let m_adj = propagation_matrix(scheme, &adjoint, K_F, K_G);
        let diff = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (m_fwd.0[i][j] - m_adj.0[i][j]).abs())
            .fold(0.0, f64::max);
        if index == 1 {
            assert!(diff > 1e-6, "impulse2 adjoint should differ, diff = {diff}");
        } else {
            assert!(
                diff < 1e-13,
                "{:?} is symmetric, orderings must agree, diff = {diff}",
                scheme.name()
            );
        }
    }

    // Both orderings of the non-symmetric method remain consistent
    // one-step maps: determinant one.
    let adjoint = StepConfig::new(0.3, 0.0125).execution_order(ExecutionOrder::RightToLeft);
    let m = propagation_matrix(&catalog()[1], &adjoint, K_F, K_G);
    assert!((m.det() - 1.0).abs() < 1e-12);
}

#[test]
fn adjoint_step_matches_adjoint_matrix_on_states() {
    let problem = LinearResonance;
    let config = StepConfig::new(0.21, 0.01).execution_order(ExecutionOrder::RightToLeft);
    for scheme in catalog() {
        let m = propagation_matrix(&scheme, &config, K_F, K_G);
        let mut state = PhaseState::new(0.0, vec![0.4], vec![-0.9]);
        integrators::step(&mut state, &problem, &scheme, &config).unwrap();
        let (x, v) = m.apply(0.4, -0.9);
        assert!((state.x[0] - x).abs() < 1e-12);
        assert!((state.v[0] - v).abs() < 1e-12);
    }
}

#[test]
fn spectral_radius_is_continuous_outside_blowup() {
    let grid = uniform_grid(0.9, 2.2, 1e-3);
    let report = stability_sweep(&catalog(), &grid, None, K_F, K_G);
    for (label, radii) in &report.radii {
        for pair in radii.windows(2) {
            assert!(
                (pair[1] - pair[0]).abs() < 0.5,
                "{label}: jump {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }
    assert!(report.max_det_defect < 1e-12);
}

#[test]
fn energy_std_growth_with_outer_step_is_floored_by_the_inner_step() {
    // With the inner step pinned at 0.01 the classical method's energy
    // fluctuation grows sub-quadratically between dt = 0.06 and 0.12: the
    // inner Verlet error contributes a dt-independent floor. The measured
    // exponent is about 1.53.
    let problem = CoupledOscillator::benchmark();
    let initial = CoupledOscillator::benchmark_initial_state();
    let mut stds = Vec::new();
    for dt in [0.12, 0.06] {
        let config = StepConfig::new(dt, 0.01);
        let n = (50.0 / dt).round() as usize;
        let traj =
            integrators::integrate(&initial, &problem, &catalog()[0], &config, n).unwrap();
        stds.push(energy_stats_of(&traj.energies()).std);
    }
    let slope = (stds[0] / stds[1]).ln() / 2f64.ln();
    assert!(
        (1.3..1.8).contains(&slope),
        "measured fluctuation exponent {slope}"
    );
}

#[test]
fn reference_verlet_conserves_energy_over_the_benchmark_horizon() {
    // Quality gate on the error oracle itself: at dt_ref = 1e-4 the
    // full-force Verlet keeps |H(t) - H(0)| below 1e-6 over t in [0, 50].
    let problem = CoupledOscillator::benchmark();
    let initial = CoupledOscillator::benchmark_initial_state();
    let traj =
        integrators::reference_verlet(&initial, &problem, 1e-4, 500_000, 100).unwrap();
    let drift = energy_stats_of(&traj.energies()).max_drift;
    assert!(drift < 1e-6, "reference drift {drift:e}");
}

#[test]
fn momentum_errors_stay_in_a_narrow_band() {
    // The four methods show almost identical momentum accuracy; the spread
    // of their windowed rms errors stays well within a factor 3.
    let problem = CoupledOscillator::benchmark();
    let initial = CoupledOscillator::benchmark_initial_state();
    let n_outer = 417;
    let per_outer = 1200;
    let reference = integrators::reference_verlet(
        &initial,
        &problem,
        1e-4,
        n_outer * per_outer,
        per_outer,
    )
    .unwrap();
    let config = StepConfig::new(0.12, 0.01);
    let mut rms_errors = Vec::new();
    for scheme in catalog() {
        let traj = integrators::integrate(&initial, &problem, &scheme, &config, n_outer).unwrap();
        assert_eq!(traj.samples.len(), reference.samples.len());
        let rms = (traj
            .samples
            .iter()
            .zip(&reference.samples)
            .map(|(a, b)| (a.v[0] - b.v[0]).powi(2))
            .sum::<f64>()
            / traj.samples.len() as f64)
            .sqrt();
        rms_errors.push(rms);
    }
    let max = rms_errors.iter().cloned().fold(0.0f64, f64::max);
    let min = rms_errors.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(
        max / min < 3.0,
        "momentum error spread {max}/{min} exceeds the expected band"
    );
}
