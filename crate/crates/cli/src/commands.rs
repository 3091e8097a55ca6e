//! One function per command. Each validates its parameters first (failures
//! there are [`CliError::Invalid`]) and then runs the solvers (failures there
//! are [`CliError::Solver`]).

use crate::config::{
    CollideConfig, ConvergenceConfig, CurvesConfig, GodunovConfig, LimitConfig, PressureConfig,
    RiemannConfig, RunConfig, StateConfig,
};
use crate::output::{json_document, write_atomic, Table};
use crate::CliError;
use congestion::cluster_dynamics::{simulate, ClusterSystem};
use congestion::godunov::{self, CellState, Grid1D, SimConfig};
use congestion::pressure_law::{check_angle, PressureLaw, ScaledPressure};
use congestion::riemann_exact::{self, RiemannSolution};
use congestion::riemann_limit::{self, SweepConfig};
use congestion::wave_structure::EpsState;
use congestion::Error;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Writes the files of one run into `out_dir` and returns their paths.
pub fn execute(
    config: &RunConfig,
    hash: &str,
    seed: u64,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let sink = Sink { dir: out_dir, hash };
    match config {
        RunConfig::Curves(c) => curves(c, &sink),
        RunConfig::Pressure(c) => pressure(c, &sink),
        RunConfig::Riemann(c) => riemann(c, &sink),
        RunConfig::Limit(c) => limit(c, &sink),
        RunConfig::Collide(c) => collide(c, &sink),
        RunConfig::Godunov(c) => run_godunov(c, &sink),
        RunConfig::Convergence(c) => convergence(c, &sink),
        RunConfig::Verify(_) => verify(seed, &sink),
    }
}

struct Sink<'a> {
    dir: &'a Path,
    hash: &'a str,
}

impl Sink<'_> {
    fn csv(&self, name: &str, table: &Table) -> Result<PathBuf, CliError> {
        Ok(write_atomic(
            self.dir,
            name,
            table.render(self.hash).as_bytes(),
        )?)
    }

    fn json<T: Serialize>(&self, name: &str, body: &T) -> Result<PathBuf, CliError> {
        Ok(write_atomic(
            self.dir,
            name,
            &json_document(self.hash, body),
        )?)
    }
}

fn invalid(message: String) -> CliError {
    CliError::Invalid(Error::InvalidParameter(message))
}

fn scaled_list(law: &PressureLaw, eps_list: &[f64]) -> Result<Vec<ScaledPressure>, CliError> {
    if eps_list.is_empty() {
        return Err(invalid("the list of epsilon values is empty".into()));
    }
    eps_list
        .iter()
        .map(|&eps| law.scaled(eps).map_err(CliError::Invalid))
        .collect()
}

fn eps_state(state: &StateConfig, law: &PressureLaw) -> Result<EpsState, CliError> {
    EpsState::new(state.rho, state.theta, law).map_err(CliError::Invalid)
}

/// Validates a finite-ε end state whose angle may be negative (reflected branch).
fn signed_state(state: &StateConfig, law: &PressureLaw) -> Result<(), CliError> {
    law.gap(state.rho).map_err(CliError::Invalid)?;
    check_angle(state.theta.abs()).map_err(CliError::Invalid)
}

fn xi_grid(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>, CliError> {
    if !(lo < hi && lo.is_finite() && hi.is_finite()) || samples < 2 {
        return Err(invalid(format!(
            "sampling window needs xi_min < xi_max and at least two samples, got [{lo}, {hi}] with {samples}"
        )));
    }
    Ok((0..samples)
        .map(|k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
        .collect())
}

fn curves(config: &CurvesConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    let scaled = scaled_list(&law, &config.eps_list)?;
    let left = eps_state(&config.left, &law)?;
    let right = eps_state(&config.right, &law)?;
    law.gap(config.rho_min).map_err(CliError::Invalid)?;
    law.gap(config.rho_max).map_err(CliError::Invalid)?;
    if !(config.rho_min < config.rho_max) || config.points < 2 {
        return Err(invalid(
            "curves need rho_min < rho_max and at least two points".into(),
        ));
    }
    let mut written = Vec::new();
    for (i, scaled) in scaled.iter().enumerate() {
        let points = riemann_exact::trace_wave_curves(
            &left,
            &right,
            scaled,
            config.rho_min,
            config.rho_max,
            config.points,
        )
        .map_err(CliError::Solver)?;
        let mut table = Table::new(&[
            "eps",
            "branch",
            "rho",
            "theta",
            "lambda_minus",
            "lambda_plus",
        ]);
        for p in points {
            table.push(vec![
                scaled.epsilon.into(),
                p.branch.label().into(),
                p.rho.into(),
                p.theta.into(),
                p.lambda_minus.into(),
                p.lambda_plus.into(),
            ]);
        }
        written.push(sink.csv(&format!("wave_curves_{i}.csv"), &table)?);
    }
    Ok(written)
}

fn pressure(config: &PressureConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    let scaled = scaled_list(&law, &config.eps_list)?;
    if config.points < 2 {
        return Err(invalid("pressure profile needs at least two points".into()));
    }
    let top = law.rho_star * (1.0 - 1e-6);
    let mut table = Table::new(&["eps", "rho", "p", "eps_p"]);
    for scaled in &scaled {
        for k in 1..=config.points {
            let rho = top * k as f64 / config.points as f64;
            let p = law.p(rho).map_err(CliError::Solver)?;
            table.push(vec![
                scaled.epsilon.into(),
                rho.into(),
                p.into(),
                (scaled.epsilon * p).into(),
            ]);
        }
    }
    Ok(vec![sink.csv("pressure_profile.csv", &table)?])
}

fn riemann(config: &RiemannConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    let scaled = law.scaled(config.eps).map_err(CliError::Invalid)?;
    signed_state(&config.left, &law)?;
    signed_state(&config.right, &law)?;
    let xis = xi_grid(config.xi_min, config.xi_max, config.samples)?;
    let solution = riemann_exact::solve(&config.left.signed(), &config.right.signed(), &scaled)
        .map_err(CliError::Solver)?;
    let diagnostics = riemann_exact::check_solution(&solution, &scaled);

    #[derive(Serialize)]
    struct Body<'a> {
        solution: &'a RiemannSolution,
        diagnostics: &'a riemann_exact::SolutionDiagnostics,
    }
    let mut table = Table::new(&["xi", "rho", "theta"]);
    for xi in xis {
        let s = riemann_exact::sample(&solution, xi);
        table.push(vec![xi.into(), s.rho.into(), s.theta.into()]);
    }
    Ok(vec![
        sink.json(
            "riemann_solution.json",
            &Body {
                solution: &solution,
                diagnostics: &diagnostics,
            },
        )?,
        sink.csv("riemann_profile.csv", &table)?,
    ])
}

fn limit(config: &LimitConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    let left = config.left.state(&law).map_err(CliError::Invalid)?;
    let right = config.right.state(&law).map_err(CliError::Invalid)?;
    let xis = xi_grid(config.xi_min, config.xi_max, config.samples)?;
    let solution = riemann_limit::solve_limit(&left, &right, &law).map_err(CliError::Solver)?;
    let interfaces = riemann_limit::interface_conditions(&solution).map_err(CliError::Solver)?;
    let jump_checks = riemann_limit::rh_partiel_check(&solution);
    let complementarity = riemann_limit::complementarity_holds(&solution);

    #[derive(Serialize)]
    struct Body<'a> {
        solution: &'a riemann_limit::LimitSolution,
        interfaces: &'a riemann_limit::InterfaceReport,
        jump_checks: &'a [riemann_limit::PartialJumpCheck],
        complementarity: bool,
    }
    let mut table = Table::new(&["xi", "rho", "theta", "pbar"]);
    for xi in xis {
        let s = riemann_limit::sample_limit(&solution, xi);
        table.push(vec![xi.into(), s.rho.into(), s.theta.into(), s.pbar.into()]);
    }
    Ok(vec![
        sink.json(
            "limit_solution.json",
            &Body {
                solution: &solution,
                interfaces: &interfaces,
                jump_checks: &jump_checks,
                complementarity,
            },
        )?,
        sink.csv("limit_profile.csv", &table)?,
    ])
}

fn collide(config: &CollideConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    for c in &config.clusters {
        congestion::cluster_dynamics::Cluster::new(c.a, c.b, c.theta).map_err(CliError::Invalid)?;
    }
    if !(config.horizon >= 0.0 && config.horizon.is_finite()) {
        return Err(invalid(format!(
            "horizon must be finite and non-negative, got {}",
            config.horizon
        )));
    }
    let system =
        ClusterSystem::new(config.clusters.clone(), law, 0.0).map_err(CliError::Invalid)?;
    let simulation = simulate(&system, config.horizon).map_err(CliError::Solver)?;

    let mut table = Table::new(&["t", "cluster_id", "a", "b", "theta"]);
    for snapshot in &simulation.snapshots {
        for (id, cluster) in &snapshot.clusters {
            table.push(vec![
                snapshot.t.into(),
                (*id).into(),
                cluster.a.into(),
                cluster.b.into(),
                cluster.theta.into(),
            ]);
        }
    }

    #[derive(Serialize)]
    struct Body<'a> {
        events: &'a [congestion::cluster_dynamics::CollisionEvent],
        final_clusters: &'a [congestion::cluster_dynamics::Cluster],
        total_length: f64,
        psi_moment_initial: f64,
        psi_moment_final: f64,
    }
    Ok(vec![
        sink.csv("cluster_trajectory.csv", &table)?,
        sink.json(
            "cluster_events.json",
            &Body {
                events: &simulation.events,
                final_clusters: &simulation.final_system.clusters,
                total_length: simulation.final_system.total_length(),
                psi_moment_initial: system.psi_moment(),
                psi_moment_final: simulation.final_system.psi_moment(),
            },
        )?,
    ])
}

fn run_godunov(config: &GodunovConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    let scaled = law.scaled(config.eps).map_err(CliError::Invalid)?;
    let sim = SimConfig::new(scaled, config.cfl, config.t_end, config.boundary)
        .map_err(CliError::Invalid)?;
    let grid = Grid1D::new(config.x_lo, config.x_hi, config.cells).map_err(CliError::Invalid)?;
    let left = eps_state(&config.left, &law)?;
    let right = eps_state(&config.right, &law)?;
    let left_cell = CellState::from_angle(left.rho, left.theta).map_err(CliError::Invalid)?;
    let right_cell = CellState::from_angle(right.rho, right.theta).map_err(CliError::Invalid)?;
    let initial = godunov::initialize(
        &grid,
        |x| if x < config.x0 { left_cell } else { right_cell },
    );
    let mass_initial = godunov::total_mass(&grid, &initial);
    let snapshots =
        godunov::run(&sim, &grid, initial, &config.snapshot_times).map_err(CliError::Solver)?;

    let mut table = Table::new(&["t", "x_center", "rho", "theta", "eps_pressure"]);
    for snapshot in &snapshots {
        for (i, cell) in snapshot.states.iter().enumerate() {
            let eps_pressure = if cell.rho > godunov::RHO_FLOOR {
                Some(scaled.pressure(cell.rho).map_err(CliError::Solver)?)
            } else {
                None
            };
            table.push(vec![
                snapshot.t.into(),
                grid.center(i).into(),
                cell.rho.into(),
                cell.theta().into(),
                eps_pressure.into(),
            ]);
        }
    }

    let last = snapshots.last().expect("run returns the final state");
    let reference = riemann_exact::solve(&config.left.signed(), &config.right.signed(), &scaled)
        .ok()
        .filter(|_| last.t > 0.0)
        .map(|solution| godunov::exact_cell_averages(&grid, &solution, config.x0, last.t));

    #[derive(Serialize)]
    struct Body {
        t_end: f64,
        cells: usize,
        mass_initial: f64,
        mass_final: f64,
        /// L¹ distance in `(ρ, Ψ)` to the exact Riemann solution, when it exists.
        l1_error_vs_exact: Option<f64>,
    }
    let body = Body {
        t_end: last.t,
        cells: grid.n,
        mass_initial,
        mass_final: godunov::total_mass(&grid, &last.states),
        l1_error_vs_exact: reference.map(|r| godunov::l1_error(&grid, &last.states, &r)),
    };
    Ok(vec![
        sink.csv("godunov_snapshots.csv", &table)?,
        sink.json("godunov_summary.json", &body)?,
    ])
}

fn convergence(config: &ConvergenceConfig, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let law = config.law.law().map_err(CliError::Invalid)?;
    scaled_list(&law, &config.eps_grid)?;
    let left = config.left.state(&law).map_err(CliError::Invalid)?;
    let right = config.right.state(&law).map_err(CliError::Invalid)?;
    let (lo, hi) = config.xi_window;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(invalid(format!(
            "xi_window must satisfy lo < hi, got ({lo}, {hi})"
        )));
    }
    let report = riemann_limit::converge_from_eps(&SweepConfig {
        law,
        left,
        right,
        eps_grid: config.eps_grid.clone(),
        xi_window: config.xi_window,
    })
    .map_err(CliError::Solver)?;
    let mut table = Table::new(&["eps", "l1_error", "rho_gap", "theta_gap"]);
    for row in &report.rows {
        table.push(vec![
            row.eps.into(),
            row.l1_error.into(),
            row.rho_gap.into(),
            row.theta_gap.into(),
        ]);
    }
    Ok(vec![
        sink.csv("convergence.csv", &table)?,
        sink.json("convergence.json", &report)?,
    ])
}

fn verify(seed: u64, sink: &Sink) -> Result<Vec<PathBuf>, CliError> {
    let report = congestion::verify::run_suite(seed);
    let path = sink.json("verify_report.json", &report)?;
    if report.passed {
        Ok(vec![path])
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Err(CliError::VerifyFailed(failed.join(", ")))
    }
}
