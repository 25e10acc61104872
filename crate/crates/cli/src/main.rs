//! Command-line front end: expansion reports, trajectory runs, stability
//! and convergence sweeps, shadow-Hamiltonian traces. All outputs are CSV
//! or plain text with `#`-prefixed comment lines, and every run is
//! deterministic for fixed flags.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mtsplit::analysis::{
    self, energy_stats_of, shadow_hamiltonian, stability_sweep, uniform_grid, Coordinate,
    ShadowMethod,
};
use mtsplit::integrators::{self, StepConfig, Trajectory};
use mtsplit::problems::{CoupledOscillator, LinearResonance, PhaseState, Problem};
use mtsplit::schemes::{self, SchemeSelector, SplittingScheme};

#[derive(Parser)]
#[command(
    name = "mtsplit",
    about = "Generalized impulse (multiple time-stepping) integrators: \
             error expansions, trajectories, stability and convergence reports",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArg {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem name: `oscillator` or `linear`.
    #[arg(long, default_value = "oscillator")]
    problem: String,
    /// Scale-separation parameter of the oscillator.
    #[arg(long)]
    eps: Option<f64>,
    /// Quartic coupling strength of the oscillator.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the splitting remainder of a scheme and project it onto the
    /// D-basis.
    Expand {
        /// Scheme name (`impulse1`..`impulse4`) or inline `k;c=...;d=...`.
        #[arg(long, default_value = "impulse1")]
        scheme: String,
        /// Truncation order (word length), between 2 and 8.
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Integrate a problem with a scheme and write the trajectory CSV.
    Integrate {
        #[arg(long, default_value = "impulse1")]
        scheme: String,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Outer step size.
        #[arg(long, default_value_t = 0.12)]
        dt: f64,
        /// Inner (fast subsystem) step target.
        #[arg(long, default_value_t = 0.01)]
        ddt: f64,
        /// Final time; the run uses round(tfinal/dt) outer steps.
        #[arg(long, default_value_t = 50.0)]
        tfinal: f64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Spectral radius of the one-step propagation matrix over a step grid
    /// on the linear resonance model.
    Stability {
        #[arg(long = "dt-min", default_value_t = 0.05)]
        dt_min: f64,
        #[arg(long = "dt-max", default_value_t = 3.0)]
        dt_max: f64,
        #[arg(long = "dt-step", default_value_t = 0.001)]
        dt_step: f64,
        /// Fixed inner step; default is dt/24 per grid point.
        #[arg(long)]
        ddt: Option<f64>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Final-time error of each cataloged scheme against a fine reference,
    /// over a step grid, with fitted log-log slopes.
    Converge {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Comma-separated outer step grid.
        #[arg(long = "dt-grid", default_value = "0.03,0.06,0.12")]
        dt_grid: String,
        #[arg(long, default_value_t = 0.01)]
        ddt: f64,
        #[arg(long, default_value_t = 50.0)]
        tfinal: f64,
        /// Error coordinate: `q1..qN` positions, `p1..pN` momenta.
        #[arg(long, default_value = "q1")]
        coordinate: String,
        /// Reference step; defaults to min(dt)/100 (noted in the header).
        #[arg(long = "ref-ddt")]
        ref_ddt: Option<f64>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Energy and shadow energy along a trajectory of the two-pair methods.
    Shadow {
        /// `impulse1` or `impulse2`; the shadow form exists only for these.
        #[arg(long, default_value = "impulse1")]
        scheme: String,
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = 0.12)]
        dt: f64,
        #[arg(long, default_value_t = 0.01)]
        ddt: f64,
        #[arg(long, default_value_t = 50.0)]
        tfinal: f64,
        /// Step size used inside the shadow formula; defaults to --dt.
        /// Zero reduces the shadow energy to the plain energy.
        #[arg(long = "shadow-dt")]
        shadow_dt: Option<f64>,
        #[command(flatten)]
        output: OutputArg,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Expand {
            scheme,
            order,
            output,
        } => {
            if !(2..=8).contains(&order) {
                bail!("expansion order must be between 2 and 8, got {order}");
            }
            let report = match schemes::parse_selector(&scheme)? {
                SchemeSelector::Exact(s) => mtsplit::algebra::expansion_report(&s, order)?,
                SchemeSelector::Real(s) => mtsplit::algebra::expansion_report(&s, order)?,
            };
            write_output(&output, &report)
        }
        Command::Integrate {
            scheme,
            problem,
            dt,
            ddt,
            tfinal,
            output,
        } => {
            let parsed = parse_run_scheme(&scheme)?;
            let (problem, initial) = resolve_problem(&problem)?;
            let (config, n_steps) = run_grid(dt, ddt, tfinal)?;
            let trajectory =
                integrators::integrate(&initial, problem.as_ref(), &parsed, &config, n_steps)?;
            write_output(&output, &trajectory_csv(&scheme, dt, ddt, &trajectory))
        }
        Command::Stability {
            dt_min,
            dt_max,
            dt_step,
            ddt,
            output,
        } => {
            if dt_step <= 0.0 || !dt_step.is_finite() {
                bail!("dt-step must be positive and finite");
            }
            if dt_max < dt_min || dt_min <= 0.0 {
                bail!("empty grid: need 0 < dt-min <= dt-max");
            }
            let grid = uniform_grid(dt_min, dt_max, dt_step);
            let report = stability_sweep(
                &schemes::catalog(),
                &grid,
                ddt,
                LinearResonance::SLOW_STIFFNESS,
                LinearResonance::FAST_STIFFNESS,
            );
            let mut out = String::new();
            let _ = writeln!(
                out,
                "# stability sweep on the linear model; inner step {}",
                match ddt {
                    Some(v) => format!("{v}"),
                    None => "dt/24".to_string(),
                }
            );
            let labels: Vec<String> = report
                .radii
                .iter()
                .map(|(label, _)| format!("rho_{label}"))
                .collect();
            let _ = writeln!(out, "dt,{}", labels.join(","));
            for (i, dt) in report.dt_grid.iter().enumerate() {
                let row: Vec<String> = report
                    .radii
                    .iter()
                    .map(|(_, radii)| format!("{}", radii[i]))
                    .collect();
                let _ = writeln!(out, "{dt},{}", row.join(","));
            }
            let _ = writeln!(out, "# max |det - 1| = {:e}", report.max_det_defect);
            write_output(&output, &out)
        }
        Command::Converge {
            problem,
            dt_grid,
            ddt,
            tfinal,
            coordinate,
            ref_ddt,
            output,
        } => {
            let (problem, initial) = resolve_problem(&problem)?;
            let grid: Vec<f64> = dt_grid
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| anyhow!("bad dt value {s:?} in grid"))
                })
                .collect::<Result<_>>()?;
            if grid.iter().any(|&dt| dt <= 0.0 || !dt.is_finite()) {
                bail!("dt grid entries must be positive and finite");
            }
            let coordinate = Coordinate::parse(&coordinate)
                .ok_or_else(|| anyhow!("bad coordinate {coordinate:?}; use q<i> or p<i>"))?;
            let report = analysis::convergence_study(
                problem.as_ref(),
                &schemes::catalog(),
                &initial,
                &grid,
                ddt,
                tfinal,
                coordinate,
                ref_ddt,
            )?;
            let mut out = String::new();
            let _ = writeln!(
                out,
                "# convergence of {coordinate} at tfinal = {tfinal}, inner step {ddt}"
            );
            let _ = writeln!(
                out,
                "# reference: velocity Verlet at dt_ref = {}{}",
                report.dt_ref,
                if ref_ddt.is_none() {
                    " (default: min(dt)/100)"
                } else {
                    ""
                }
            );
            let labels: Vec<String> = report
                .errors
                .iter()
                .map(|(label, _)| format!("err_{label}"))
                .collect();
            let _ = writeln!(out, "dt,{}", labels.join(","));
            for (i, dt) in report.dt_grid.iter().enumerate() {
                let row: Vec<String> = report
                    .errors
                    .iter()
                    .map(|(_, errs)| format!("{}", errs[i]))
                    .collect();
                let _ = writeln!(out, "{dt},{}", row.join(","));
            }
            for (label, slope) in &report.slopes {
                let _ = writeln!(out, "# slope_{label} = {slope}");
            }
            write_output(&output, &out)
        }
        Command::Shadow {
            scheme,
            problem,
            dt,
            ddt,
            tfinal,
            shadow_dt,
            output,
        } => {
            let method = match scheme.as_str() {
                "impulse1" => ShadowMethod::ImpulseI,
                "impulse2" => ShadowMethod::ImpulseII,
                other => bail!(
                    "shadow form available for impulse1 and impulse2 only, got {other:?}"
                ),
            };
            let scheme = parse_run_scheme(&scheme)?;
            let (problem, initial) = resolve_problem(&problem)?;
            let (config, n_steps) = run_grid(dt, ddt, tfinal)?;
            let trajectory =
                integrators::integrate(&initial, problem.as_ref(), &scheme, &config, n_steps)?;
            let shadow_dt = shadow_dt.unwrap_or(dt);
            if shadow_dt < 0.0 || !shadow_dt.is_finite() {
                bail!("shadow-dt must be nonnegative and finite");
            }
            let mut h = Vec::with_capacity(trajectory.samples.len());
            let mut h_shadow = Vec::with_capacity(trajectory.samples.len());
            let mut out = String::new();
            let _ = writeln!(
                out,
                "# shadow energy, scheme {} at dt = {dt}, shadow dt = {shadow_dt}",
                scheme.name().unwrap_or("custom")
            );
            let _ = writeln!(out, "t,H,H_shadow");
            for sample in &trajectory.samples {
                let state = PhaseState::new(sample.t, sample.x.clone(), sample.v.clone());
                let hs = shadow_hamiltonian(problem.as_ref(), &state, shadow_dt, method)?;
                let _ = writeln!(out, "{},{},{}", sample.t, sample.energy, hs);
                h.push(sample.energy);
                h_shadow.push(hs);
            }
            let _ = writeln!(out, "# std_H = {:e}", energy_stats_of(&h).std);
            let _ = writeln!(out, "# std_H_shadow = {:e}", energy_stats_of(&h_shadow).std);
            write_output(&output, &out)
        }
    }
}

/// Scheme for an integration run, always in double precision.
fn parse_run_scheme(text: &str) -> Result<SplittingScheme<f64>> {
    let scheme = schemes::parse_scheme(text)?;
    let violations = scheme.validate();
    if let Some(v) = violations.first() {
        bail!("invalid scheme {text:?}: {v}");
    }
    Ok(scheme)
}

fn resolve_problem(args: &ProblemArgs) -> Result<(Box<dyn Problem>, PhaseState)> {
    match args.problem.as_str() {
        "oscillator" => {
            let eps = args.eps.unwrap_or(0.1);
            let beta = args.beta.unwrap_or(0.1);
            if eps <= 0.0 || !eps.is_finite() {
                bail!("eps must be positive and finite");
            }
            if !beta.is_finite() {
                bail!("beta must be finite");
            }
            Ok((
                Box::new(CoupledOscillator::new(eps, beta)),
                CoupledOscillator::benchmark_initial_state(),
            ))
        }
        "linear" => {
            if args.eps.is_some() || args.beta.is_some() {
                bail!("flags --eps and --beta apply to the oscillator problem only");
            }
            Ok((
                Box::new(LinearResonance),
                PhaseState::new(0.0, vec![1.0], vec![0.0]),
            ))
        }
        other => bail!("unknown problem {other:?}; use `oscillator` or `linear`"),
    }
}

fn run_grid(dt: f64, ddt: f64, tfinal: f64) -> Result<(StepConfig, usize)> {
    if dt <= 0.0 || !dt.is_finite() {
        bail!("dt must be positive and finite");
    }
    if ddt <= 0.0 || !ddt.is_finite() {
        bail!("ddt must be positive and finite");
    }
    if tfinal < dt || !tfinal.is_finite() {
        bail!("tfinal must be finite and at least dt");
    }
    let n_steps = ((tfinal / dt).round() as usize).max(1);
    Ok((StepConfig::new(dt, ddt), n_steps))
}

fn trajectory_csv(scheme: &str, dt: f64, ddt: f64, trajectory: &Trajectory) -> String {
    let dim = trajectory.samples[0].x.len();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# trajectory, scheme {scheme}, dt = {dt}, ddt = {ddt}, steps = {}",
        trajectory.samples.len() - 1
    );
    let x_cols: Vec<String> = (0..dim).map(|i| format!("x_{i}")).collect();
    let v_cols: Vec<String> = (0..dim).map(|i| format!("v_{i}")).collect();
    let _ = writeln!(out, "t,{},{},H", x_cols.join(","), v_cols.join(","));
    for s in &trajectory.samples {
        let xs: Vec<String> = s.x.iter().map(|v| format!("{v}")).collect();
        let vs: Vec<String> = s.v.iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{},{},{},{}", s.t, xs.join(","), vs.join(","), s.energy);
    }
    out
}

fn write_output(output: &OutputArg, content: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
