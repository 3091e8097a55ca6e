//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit when any
//! criterion fails. Inputs are drawn from a fixed ChaCha seed so every run
//! sees the same problems.

use congestion::cluster_dynamics::{collide, simulate, Cluster, ClusterSystem};
use congestion::godunov::{
    cfl_dt, exact_cell_averages, initialize, l1_error, restrict_to_coarse, run, step, total_mass,
    Boundary, CellState, Grid1D, SimConfig,
};
use congestion::numerics::fit_log_log;
use congestion::pressure_law::{f_u, PressureLaw};
use congestion::riemann_exact::{classify, solve, RiemannCase, SignedState, Wave};
use congestion::riemann_limit::{
    converge_from_eps, interface_conditions, LimitCase, LimitSolution, LimitState, LimitWave,
    SweepConfig,
};
use congestion::verify::run_suite;
use congestion::wave_structure::{
    conservative_pair_residual, linearly_degenerate_theta, vacuum_endpoint, ConservativePair,
    EpsState, WaveFamily,
};
use congestion::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

const SEED: u64 = 20_240_917;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: String) -> Self {
        Self { passed, detail }
    }
}

fn unit() -> PressureLaw {
    PressureLaw::new(1.0, 2.0).unwrap()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// `p(ρ) = (1/ρ − 1)^(−2)` for `ρ* = 1`, `γ = 2`.
fn pressure_oracle(rho: f64) -> f64 {
    (1.0 / rho - 1.0).powi(-2)
}

/// `p′(ρ) = 2(1/ρ − 1)^(−3)/ρ²`.
fn pressure_prime_oracle(rho: f64) -> f64 {
    2.0 * (1.0 / rho - 1.0).powi(-3) / (rho * rho)
}

fn psi_oracle(theta: f64) -> f64 {
    -(theta / 2.0).tan().ln()
}

fn phi_oracle(theta: f64) -> f64 {
    -theta.sin().ln()
}

/// `λ∓ = cosθ ∓ √(εp′ρ)·sinθ`.
fn eigenvalue_oracle(family: WaveFamily, rho: f64, theta: f64, eps: f64) -> f64 {
    let chi = (eps * pressure_prime_oracle(rho) * rho).sqrt();
    theta.cos() + family.sign() * chi * theta.sin()
}

fn criterion_1() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut counts = [0usize; 4];
    let slot = |case: RiemannCase| match case {
        RiemannCase::EqualAngles => 0,
        RiemannCase::VacuumOpening => 1,
        RiemannCase::TwoShocks => 2,
        RiemannCase::MixedShockRarefaction => 3,
    };
    let (mut worst_rh, mut lax_failures, mut order_failures, mut errors, mut skipped) =
        (0.0f64, 0, 0, 0, 0);
    let mut draws = 0;
    while counts.iter().any(|&c| c < 50) && draws < 200_000 {
        draws += 1;
        let eps = log_uniform(&mut rng, 1e-4, 1e-1);
        let scaled = unit().scaled(eps).unwrap();
        let rho_l = rng.gen_range(0.05..0.95);
        let rho_r = rng.gen_range(0.05..0.95);
        let theta_l = rng.gen_range(0.2..2.9);
        let theta_r = if counts[0] < 50 && rng.gen_bool(0.2) {
            theta_l
        } else {
            rng.gen_range(0.2..2.9)
        };
        let (left, right) = (
            SignedState::new(rho_l, theta_l),
            SignedState::new(rho_r, theta_r),
        );
        let case = match classify(&left, &right, &scaled) {
            Ok(case) => case,
            Err(Error::EpsilonTooLarge { .. }) => {
                skipped += 1;
                continue;
            }
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        if counts[slot(case)] >= 50 {
            continue;
        }
        let solution = match solve(&left, &right, &scaled) {
            Ok(s) => s,
            Err(Error::EpsilonTooLarge { .. }) => {
                skipped += 1;
                continue;
            }
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        counts[slot(case)] += 1;
        let ranges: Vec<(f64, f64)> = solution.waves.iter().map(Wave::speed_range).collect();
        if !ranges.windows(2).all(|w| w[0].1 <= w[1].0 + 1e-10) {
            order_failures += 1;
        }
        for (i, wave) in solution.waves.iter().enumerate() {
            let Wave::Shock { speed, family } = *wave else {
                continue;
            };
            let (a, b) = (solution.states[i], solution.states[i + 1]);
            let (ta, tb) = (a.theta.abs(), b.theta.abs());
            let mass = -speed * (b.rho - a.rho) + (b.rho * tb.cos() - a.rho * ta.cos());
            let potential = -speed * (psi_oracle(tb) - psi_oracle(ta))
                + (phi_oracle(tb) + eps * pressure_oracle(b.rho))
                - (phi_oracle(ta) + eps * pressure_oracle(a.rho));
            worst_rh = worst_rh.max(mass.abs()).max(potential.abs());
            let lambda_a = eigenvalue_oracle(family, a.rho, ta, eps);
            let lambda_b = eigenvalue_oracle(family, b.rho, tb, eps);
            if !(lambda_b <= speed + 1e-10 && speed <= lambda_a + 1e-10) {
                lax_failures += 1;
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let passed = counts.iter().all(|&c| c == 50)
        && worst_rh <= 1e-10
        && lax_failures == 0
        && order_failures == 0
        && errors == 0
        && elapsed < 10.0;
    Verdict::new(
        passed,
        format!(
            "cases [equal, vacuum, two-shock, mixed] = {counts:?}; max jump residual {worst_rh:.2e} \
             (tol 1e-10); Lax violations {lax_failures}; unordered {order_failures}; errors {errors}; \
             eps-too-large skips {skipped}; {elapsed:.2}s"
        ),
    )
}

#[derive(Clone, Copy, Debug)]
enum Pair {
    Uu,
    Uc,
    Cu,
    Cc,
}

fn random_limit_pair(
    rng: &mut ChaCha8Rng,
    pair: Pair,
    law: &PressureLaw,
) -> (LimitState, LimitState) {
    let free = |rng: &mut ChaCha8Rng| {
        LimitState::uncongested(rng.gen_range(0.05..0.95), rng.gen_range(0.2..2.9), law).unwrap()
    };
    let packed = |rng: &mut ChaCha8Rng, theta: f64| {
        LimitState::congested(theta, rng.gen_range(0.1..2.0), law).unwrap()
    };
    match pair {
        Pair::Uu => (free(rng), free(rng)),
        Pair::Uc => {
            let left = free(rng);
            let theta = rng.gen_range(0.2..2.9);
            (left, packed(rng, theta))
        }
        Pair::Cu => {
            let theta = rng.gen_range(0.2..2.9);
            let left = packed(rng, theta);
            (left, free(rng))
        }
        Pair::Cc => {
            let theta_l = rng.gen_range(0.2..2.9);
            // Equal angles occur with probability zero otherwise.
            let theta_r = if rng.gen_bool(0.3) {
                theta_l
            } else {
                rng.gen_range(0.2..2.9)
            };
            (packed(rng, theta_l), packed(rng, theta_r))
        }
    }
}

struct LimitSweeps {
    solutions: Vec<LimitSolution>,
    verdict: Verdict,
}

fn criterion_2() -> LimitSweeps {
    let law = unit();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let eps_grid: Vec<f64> = (2..=6).map(|k| 10f64.powi(-k)).collect();
    let mut solutions = Vec::new();
    let mut lines = Vec::new();
    let mut passed = true;
    for pair in [Pair::Uu, Pair::Uc, Pair::Cu, Pair::Cc] {
        let (mut monotone, mut small, mut pressure_ok, mut pressure_cases, mut errors) =
            (0, 0, 0, 0, 0);
        let mut worst_finest = 0.0f64;
        let mut shortened = 0;
        let mut failing_cases: Vec<LimitCase> = Vec::new();
        for _ in 0..50 {
            let (left, right) = random_limit_pair(&mut rng, pair, &law);
            // Start at the largest ε the finite-ε solver accepts for this data.
            let mut outcome = Err(Error::EmptyGrid);
            for start in 0..3 {
                outcome = converge_from_eps(&SweepConfig {
                    law,
                    left,
                    right,
                    eps_grid: eps_grid[start..].to_vec(),
                    xi_window: (-2.0, 2.0),
                });
                match outcome {
                    Err(Error::EpsilonTooLarge { .. }) => continue,
                    _ => {
                        shortened += usize::from(start > 0);
                        break;
                    }
                }
            }
            let report = match outcome {
                Ok(r) => r,
                Err(_) => {
                    errors += 1;
                    continue;
                }
            };
            let errors_l1: Vec<f64> = report.rows.iter().map(|r| r.l1_error).collect();
            let is_monotone = errors_l1.windows(2).all(|w| w[1] < w[0]);
            let finest = *errors_l1.last().unwrap();
            worst_finest = worst_finest.max(finest);
            monotone += usize::from(is_monotone);
            small += usize::from(finest < 1e-2);
            let mut ok = is_monotone && finest < 1e-2;
            if let (Some(limit), Some(extrapolated)) = (report.limit_pbar, report.extrapolated_pbar)
            {
                pressure_cases += 1;
                let close = (limit - extrapolated).abs() < 1e-2;
                pressure_ok += usize::from(close);
                ok &= close;
            }
            if !ok && !failing_cases.contains(&report.limit.case) {
                failing_cases.push(report.limit.case);
            }
            solutions.push(report.limit);
        }
        let pair_passed =
            errors == 0 && monotone == 50 && small == 50 && pressure_ok == pressure_cases;
        passed &= pair_passed;
        lines.push(format!(
            "{pair:?}: monotone {monotone}/50, finest L1 < 1e-2 {small}/50 (worst {worst_finest:.2e}), \
             pressure within 1e-2 {pressure_ok}/{pressure_cases}, sweeps started below 1e-2 {shortened}, \
             errors {errors}, failing sub-cases {failing_cases:?}"
        ));
    }
    LimitSweeps {
        solutions,
        verdict: Verdict::new(passed, lines.join("; ")),
    }
}

/// Density where the linearly degenerate curve of `family` crosses `theta`,
/// by bisection in `y = −ln(1 − ρ)`.
fn degenerate_density(theta: f64, family: WaveFamily, eps: f64) -> f64 {
    let scaled = unit().scaled(eps).unwrap();
    let f = |y: f64| linearly_degenerate_theta(1.0 - (-y).exp(), family, &scaled).unwrap() - theta;
    let (mut lo, mut hi) = (0.7, 27.0);
    let f_lo = f(lo);
    assert!(
        f_lo.signum() != f(hi).signum(),
        "degenerate curve not bracketed"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    1.0 - (-0.5 * (lo + hi)).exp()
}

fn criterion_3() -> Verdict {
    let started = Instant::now();
    let law = unit();
    let decades = |lo: i32, hi: i32| -> Vec<f64> { (lo..=hi).map(|k| 10f64.powi(-k)).collect() };
    // Gap of the congested intermediate state: ε^(1/γ).
    let sweep = converge_from_eps(&SweepConfig {
        law,
        left: LimitState::uncongested(0.6, 1.0, &law).unwrap(),
        right: LimitState::uncongested(0.5, 2.0, &law).unwrap(),
        eps_grid: decades(2, 7),
        xi_window: (-2.0, 2.0),
    })
    .unwrap();
    let gap_fit = sweep.rho_gap_fit.unwrap();
    // Vacuum endpoint of a near-congested state at fixed scaled pressure: ε^(1/(2γ)).
    let vacuum_points: Vec<(f64, f64)> = decades(3, 8)
        .into_iter()
        .map(|eps| {
            let scaled = law.scaled(eps).unwrap();
            let state = EpsState::new(scaled.p_inverse(0.5).unwrap(), 1.5, &law).unwrap();
            let edge = vacuum_endpoint(&state, WaveFamily::Minus, &scaled).unwrap();
            (eps, (edge - 1.5).abs())
        })
        .collect();
    let vacuum_fit = fit_log_log(&vacuum_points).unwrap();
    // Linearly degenerate density: ρ* − ρ ~ ε^(1/(γ−1)).
    let degenerate_points: Vec<(f64, f64)> = decades(3, 7)
        .into_iter()
        .map(|eps| (eps, 1.0 - degenerate_density(2.0, WaveFamily::Minus, eps)))
        .collect();
    let degenerate_fit = fit_log_log(&degenerate_points).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    let checks = [
        (gap_fit.slope, 0.5, 0.1, gap_fit.decades),
        (vacuum_fit.slope, 0.25, 0.1, vacuum_fit.decades),
        (degenerate_fit.slope, 1.0, 0.15, degenerate_fit.decades),
    ];
    let passed = checks
        .iter()
        .all(|&(slope, target, tol, decades)| (slope - target).abs() <= tol && decades >= 4.0)
        && elapsed < 60.0;
    Verdict::new(
        passed,
        format!(
            "congestion gap slope {:.4} (target 0.5 ± 0.1, {:.0} decades); vacuum edge slope {:.4} \
             (target 0.25 ± 0.1, {:.0} decades); degenerate density slope {:.4} (target 1 ± 0.15, \
             {:.0} decades); {elapsed:.2}s",
            gap_fit.slope,
            gap_fit.decades,
            vacuum_fit.slope,
            vacuum_fit.decades,
            degenerate_fit.slope,
            degenerate_fit.decades
        ),
    )
}

fn criterion_4(solutions: &[LimitSolution]) -> Verdict {
    let mut worst = 0.0f64;
    let (mut failures, mut missing_exclusions) = (0, 0);
    for solution in solutions {
        match interface_conditions(solution) {
            Ok(report) => {
                worst = worst.max(report.max_residual());
                let infinite = solution
                    .waves
                    .iter()
                    .filter(|w| {
                        matches!(
                            w,
                            LimitWave::Declustering { .. } | LimitWave::InfiniteSpeedJump { .. }
                        )
                    })
                    .count();
                if report.excluded.len() != infinite {
                    missing_exclusions += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    let law = unit();
    let synthetic = LimitSolution {
        states: vec![
            LimitState::congested(1.0, 0.2, &law).unwrap(),
            LimitState::congested(1.0, 0.4, &law).unwrap(),
        ],
        waves: vec![LimitWave::Contact { speed: 1f64.cos() }],
        case: LimitCase::CcUniform,
        law,
        infinite_pressure: false,
        advisory: None,
    };
    let flagged = matches!(
        interface_conditions(&synthetic),
        Err(Error::UnclassifiedInterface { .. })
    );
    let passed = !solutions.is_empty()
        && failures == 0
        && missing_exclusions == 0
        && worst <= 1e-9
        && flagged;
    Verdict::new(
        passed,
        format!(
            "{} limit solutions, max residual {worst:.2e} (tol 1e-9), errors {failures}, \
             infinite-speed waves not excluded in {missing_exclusions}, finite C-C jump rejected: {flagged}",
            solutions.len()
        ),
    )
}

fn random_clusters(rng: &mut ChaCha8Rng) -> Vec<Cluster> {
    let count = rng.gen_range(2..=8);
    let mut x = rng.gen_range(-5.0..0.0);
    (0..count)
        .map(|_| {
            let a = x + rng.gen_range(0.05..1.5);
            let b = a + rng.gen_range(0.1..2.0);
            x = b;
            Cluster::new(a, b, rng.gen_range(0.1..PI - 0.1)).unwrap()
        })
        .collect()
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let law = unit();
    let (mut worst_length, mut worst_balance, mut bad_profiles, mut unmatched, mut events) =
        (0.0f64, 0.0f64, 0, 0, 0);
    for _ in 0..100 {
        let clusters = random_clusters(&mut rng);
        let length: f64 = clusters.iter().map(|c| c.b - c.a).sum();
        let system = ClusterSystem::new(clusters, law, 0.0).unwrap();
        let simulation = simulate(&system, 100.0).unwrap();
        let final_length: f64 = simulation
            .final_system
            .clusters
            .iter()
            .map(|c| c.b - c.a)
            .sum();
        worst_length = worst_length.max((final_length - length).abs());
        for (k, event) in simulation.events.iter().enumerate() {
            events += 1;
            let [(a, start), (m, peak), (b, end)] = event.pi_profile.breakpoints;
            if start != 0.0 || end != 0.0 || peak < 0.0 || !(a < m && m < b) {
                bad_profiles += 1;
            }
            // The pair that merged, moved to the collision time.
            let before = &simulation.snapshots[k];
            let moved: Vec<Cluster> = before
                .clusters
                .iter()
                .map(|(_, c)| c.translated(event.t_c - before.t))
                .collect();
            let left = moved
                .iter()
                .find(|c| (c.b - m).abs() <= 1e-9 && (c.a - a).abs() <= 1e-9);
            let right = moved
                .iter()
                .find(|c| (c.a - m).abs() <= 1e-9 && (c.b - b).abs() <= 1e-9);
            match (left, right) {
                (Some(l), Some(r)) => {
                    let (ll, lr) = (l.b - l.a, r.b - r.a);
                    let balance = (ll + lr) * psi_oracle(event.theta_tilde)
                        - (ll * psi_oracle(l.theta) + lr * psi_oracle(r.theta));
                    worst_balance = worst_balance.max(balance.abs());
                }
                _ => unmatched += 1,
            }
        }
    }
    let head_on = collide(
        &Cluster::new(-1.5, 0.0, 0.8).unwrap(),
        &Cluster::new(0.0, 1.5, PI - 0.8).unwrap(),
        0.0,
    )
    .unwrap()
    .0;
    let symmetric_gap = (head_on.theta - PI / 2.0).abs();
    let passed = worst_length <= 1e-12
        && worst_balance <= 1e-12
        && bad_profiles == 0
        && unmatched == 0
        && events > 0
        && symmetric_gap <= 1e-12;
    Verdict::new(
        passed,
        format!(
            "100 systems, {events} merges; length drift {worst_length:.2e}; potential balance \
             {worst_balance:.2e} (tol 1e-12); bad profiles {bad_profiles}; unmatched merges \
             {unmatched}; head-on |θ̃ − π/2| = {symmetric_gap:.2e}"
        ),
    )
}

fn godunov_config(eps: f64, t_end: f64, boundary: Boundary) -> SimConfig {
    SimConfig::new(unit().scaled(eps).unwrap(), 0.9, t_end, boundary).unwrap()
}

fn smooth_periodic(x: f64) -> CellState {
    CellState::from_angle(
        0.5 + 0.1 * (2.0 * PI * x).sin(),
        PI / 2.0 + 0.3 * (2.0 * PI * x).cos(),
    )
    .unwrap()
}

fn criterion_6() -> Verdict {
    let started = Instant::now();
    let mut notes = Vec::new();
    // Constant states.
    let mut constant_ok = true;
    for (rho, theta) in [(0.3, 0.5), (0.7, 1.6), (0.95, 2.7)] {
        for boundary in [Boundary::Outflow, Boundary::Periodic] {
            let grid = Grid1D::new(0.0, 1.0, 64).unwrap();
            let initial = initialize(&grid, |_| CellState::from_angle(rho, theta).unwrap());
            let snapshots = run(
                &godunov_config(1e-2, 0.5, boundary),
                &grid,
                initial.clone(),
                &[],
            )
            .unwrap();
            constant_ok &= snapshots.last().unwrap().states == initial;
        }
    }
    notes.push(format!("constant states preserved: {constant_ok}"));
    // Mass per step on periodic data.
    let grid = Grid1D::new(0.0, 1.0, 200).unwrap();
    let config = godunov_config(1e-2, 1.0, Boundary::Periodic);
    let mut states = initialize(&grid, smooth_periodic);
    let mut worst_mass = 0.0f64;
    for _ in 0..200 {
        let before = total_mass(&grid, &states);
        let dt = cfl_dt(&grid, &states, &config).unwrap();
        states = step(&grid, &states, dt, &config).unwrap();
        worst_mass = worst_mass.max((total_mass(&grid, &states) - before).abs() / before);
    }
    notes.push(format!(
        "relative mass change per step {worst_mass:.2e} (tol 1e-13)"
    ));
    // Self-convergence on smooth periodic data.
    let config = godunov_config(1e-2, 0.1, Boundary::Periodic);
    let solutions: Vec<(Grid1D, Vec<CellState>)> = [200, 400, 800, 1600]
        .into_iter()
        .map(|n| {
            let grid = Grid1D::new(0.0, 1.0, n).unwrap();
            let initial = initialize(&grid, smooth_periodic);
            let last = run(&config, &grid, initial, &[])
                .unwrap()
                .pop()
                .unwrap()
                .states;
            (grid, last)
        })
        .collect();
    let differences: Vec<f64> = solutions
        .windows(2)
        .map(|w| l1_error(&w[0].0, &w[0].1, &restrict_to_coarse(&w[1].1)))
        .collect();
    let rates: Vec<f64> = differences
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    let rates_ok = rates.iter().all(|r| (r - 1.0).abs() <= 0.3);
    notes.push(format!(
        "self-convergence rates {rates:.3?} (target 1 ± 0.3)"
    ));
    // Riemann data against exact solutions.
    let scaled = unit().scaled(1e-2).unwrap();
    let mut bound_failures = Vec::new();
    for (k, (left, right)) in [
        ((0.5, 1.2), (0.6, 1.8)),
        ((0.7, 1.5), (0.3, 1.6)),
        ((0.4, 1.2), (0.6, 1.2)),
        ((0.5, 1.3), (0.4, 1.2)),
    ]
    .into_iter()
    .enumerate()
    {
        let exact = solve(
            &SignedState::new(left.0, left.1),
            &SignedState::new(right.0, right.1),
            &scaled,
        )
        .unwrap();
        let (l, r) = (
            CellState::from_angle(left.0, left.1).unwrap(),
            CellState::from_angle(right.0, right.1).unwrap(),
        );
        let total_variation = (r.rho - l.rho).abs() + (r.w - l.w).abs();
        for n in [200, 400, 800] {
            let grid = Grid1D::new(-1.0, 1.0, n).unwrap();
            let initial = initialize(&grid, |x| if x < 0.0 { l } else { r });
            let last = run(
                &godunov_config(1e-2, 0.3, Boundary::Outflow),
                &grid,
                initial,
                &[],
            )
            .unwrap()
            .pop()
            .unwrap()
            .states;
            let error = l1_error(&grid, &last, &exact_cell_averages(&grid, &exact, 0.0, 0.3));
            let bound = 2.0 * grid.dx() * total_variation;
            if error >= bound {
                bound_failures.push(format!("data {} n={n}: {error:.2e} ≥ {bound:.2e}", k + 1));
            }
        }
    }
    notes.push(format!("Riemann runs above 2·Δx·TV: {bound_failures:?}"));
    let elapsed = started.elapsed().as_secs_f64();
    notes.push(format!("{elapsed:.1}s"));
    let passed = constant_ok
        && worst_mass <= 1e-13
        && rates_ok
        && bound_failures.is_empty()
        && elapsed < 120.0;
    Verdict::new(passed, notes.join("; "))
}

fn criterion_7() -> Verdict {
    let law = unit();
    let mut worst = 0.0f64;
    let mut errors = 0;
    for eps in [1.0, 1e-2, 1e-4] {
        let scaled = law.scaled(eps).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let state = EpsState {
                    rho: 0.05 + 0.9 * i as f64 / 19.0,
                    theta: 0.2 + (PI - 0.4) * j as f64 / 19.0,
                };
                for pair in ConservativePair::ALL {
                    match conservative_pair_residual(pair, &state, &scaled) {
                        Ok((a, b)) => worst = worst.max(a).max(b),
                        Err(_) => errors += 1,
                    }
                }
            }
        }
    }
    Verdict::new(
        worst <= 1e-6 && errors == 0,
        format!("3 pairs × 400 states × 3 ε: max residual {worst:.2e} (tol 1e-6), errors {errors}"),
    )
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let spacing = 1e-3;
    let grid: Vec<f64> = (0..=1998).map(|k| -0.999 + k as f64 * spacing).collect();
    let (mut worst_argmin, mut worst_curvature) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let u = rng.gen_range(-0.99..0.99);
        let values: Vec<f64> = grid.iter().map(|&v| f_u(u, v).unwrap()).collect();
        let argmin = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, _)| grid[k])
            .unwrap();
        worst_argmin = worst_argmin.max((argmin - u).abs());
        let most_negative = values
            .windows(3)
            .map(|w| w[0] - 2.0 * w[1] + w[2])
            .fold(0.0f64, f64::min);
        worst_curvature = worst_curvature.min(most_negative);
    }
    Verdict::new(
        worst_argmin <= spacing && worst_curvature >= -1e-12,
        format!(
            "50 draws: max |argmin − u| {worst_argmin:.2e} (grid {spacing:e}); most negative second \
             difference {worst_curvature:.2e}"
        ),
    )
}

fn criterion_9() -> Verdict {
    let report = run_suite(SEED);
    let first = serde_json::to_string_pretty(&report).unwrap();
    let second = serde_json::to_string_pretty(&run_suite(SEED)).unwrap();
    Verdict::new(
        first == second && report.passed,
        format!(
            "two runs with seed {SEED}: identical {}, suite passed {}",
            first == second,
            report.passed
        ),
    )
}

fn main() -> ExitCode {
    let sweeps = criterion_2();
    let verdicts = [
        criterion_1(),
        sweeps.verdict,
        criterion_3(),
        criterion_4(&sweeps.solutions),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let mut all = true;
    for (k, verdict) in verdicts.iter().enumerate() {
        let label = if verdict.passed { "PASS" } else { "FAIL" };
        println!("{label} criterion {}: {}", k + 1, verdict.detail);
        all &= verdict.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
