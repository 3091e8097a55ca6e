//! Exact solution of the Riemann problem for the finite-ε conservative system.
//!
//! The intermediate state is the intersection of the forward Minus wave curve
//! through the left state (rarefaction below the left density, Hugoniot branch
//! above it) with the backward Plus wave curve through the right state. Along
//! the density, the forward curve's angle increases and the backward curve's
//! angle decreases, so their difference is monotone and a single bracketed
//! root search in `y = ln(1/ρ − 1/ρ*)` locates the intersection. When the
//! two rarefaction curves reach vacuum before meeting, the solution contains a
//! vacuum interval instead.
//!
//! The conservative system only sees `|θ|`. Signed angles are solved on
//! `|θ|`; if the two end states have opposite signs, a sign contact moving at
//! `cos θ̃` is inserted inside the intermediate state, unless a vacuum
//! interval already separates them.

use crate::error::{Error, Result};
use crate::numerics::{brent, expand_bracket, Bracket};
use crate::pressure_law::{check_angle, ScaledPressure, ANGLE_GUARD};
use crate::wave_structure::{
    eigenvalue, hugoniot_solve_rho, hugoniot_solve_theta, in_genuinely_nonlinear_band,
    jump_residuals, lax_admissible, log_gap, rarefaction_theta, rho_of_log_gap, shock_speed,
    vacuum_endpoint, EpsState, WaveFamily, DEGENERATE_JUMP,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Angles whose moduli differ by less than this are treated as equal.
pub const EQUAL_ANGLE_TOLERANCE: f64 = 1e-12;

/// Pass/fail threshold of [`check_solution`].
pub const CHECK_TOLERANCE: f64 = 1e-8;

/// Absolute tolerance of the intersection search in the log-gap variable.
const INTERSECTION_TOLERANCE: f64 = 1e-14;

/// A state with a signed angle `θ ∈ (−π, π)`; `ρ = 0` denotes vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedState {
    pub rho: f64,
    pub theta: f64,
}

impl SignedState {
    pub fn new(rho: f64, theta: f64) -> Self {
        Self { rho, theta }
    }

    /// The state seen by the conservative system, with angle `|θ|`.
    pub fn unsigned(&self) -> EpsState {
        EpsState {
            rho: self.rho,
            theta: self.theta.abs(),
        }
    }

    fn sign(&self) -> f64 {
        if self.theta < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Mirror image under `x ↦ −x`, `θ ↦ π − θ` (applied to `|θ|`, keeping the sign).
    pub fn reflected(&self) -> Self {
        Self {
            rho: self.rho,
            theta: self.sign() * (PI - self.theta.abs()),
        }
    }
}

impl From<EpsState> for SignedState {
    fn from(s: EpsState) -> Self {
        Self {
            rho: s.rho,
            theta: s.theta,
        }
    }
}

/// An elementary wave of a Riemann solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Wave {
    Shock {
        speed: f64,
        family: WaveFamily,
    },
    RarefactionFan {
        speed_lo: f64,
        speed_hi: f64,
        family: WaveFamily,
    },
    SignContact {
        speed: f64,
    },
    VacuumInterval {
        speed_lo: f64,
        speed_hi: f64,
    },
}

impl Wave {
    /// Slowest and fastest speed occupied by the wave.
    pub fn speed_range(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { speed, .. } | Wave::SignContact { speed } => (speed, speed),
            Wave::RarefactionFan {
                speed_lo, speed_hi, ..
            }
            | Wave::VacuumInterval { speed_lo, speed_hi } => (speed_lo, speed_hi),
        }
    }
}

/// The four structural cases of the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiemannCase {
    /// `|θℓ| = |θr|`: a Minus wave and a Plus wave of opposite natures.
    EqualAngles,
    /// `|θℓ| > |θr|`: two rarefactions, possibly separated by vacuum.
    VacuumOpening,
    /// `|θℓ| < |θr|` with two shocks.
    TwoShocks,
    /// `|θℓ| < |θr|` with one shock and one rarefaction.
    MixedShockRarefaction,
}

/// Ordered constant states separated by waves (`waves.len() == states.len() − 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannSolution {
    pub states: Vec<SignedState>,
    pub waves: Vec<Wave>,
    pub case: RiemannCase,
    pub scaled: ScaledPressure,
}

/// Value returned by [`sample`]: `theta` is `None` inside a vacuum region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledState {
    pub rho: f64,
    pub theta: Option<f64>,
}

fn validate_end_state(state: &SignedState, scaled: &ScaledPressure) -> Result<EpsState> {
    if state.rho == 0.0 {
        return Err(Error::VacuumInput);
    }
    let unsigned = state.unsigned();
    EpsState::new(unsigned.rho, unsigned.theta, &scaled.law)
}

/// Angle of the forward (Minus) wave curve through `left` at density `rho`:
/// rarefaction branch for `ρ ≤ ρℓ`, Hugoniot branch above.
pub fn forward_curve_theta(left: &EpsState, rho: f64, scaled: &ScaledPressure) -> Result<f64> {
    if rho <= left.rho {
        rarefaction_theta(left, rho, WaveFamily::Minus, scaled)
    } else {
        hugoniot_solve_theta(left, rho, WaveFamily::Minus, scaled)
    }
}

/// Angle of the backward (Plus) wave curve through `right` at density `rho`.
pub fn backward_curve_theta(right: &EpsState, rho: f64, scaled: &ScaledPressure) -> Result<f64> {
    if rho <= right.rho {
        rarefaction_theta(right, rho, WaveFamily::Plus, scaled)
    } else {
        hugoniot_solve_theta(right, rho, WaveFamily::Plus, scaled)
    }
}

/// Structural case of the Riemann problem between two non-vacuum states.
///
/// For `|θℓ| < |θr|` the problem has two shocks exactly when `ρr` lies below
/// the Minus Hugoniot branch of the left state at `θr` and `ρℓ` lies below
/// the Plus Hugoniot branch of the right state at `θℓ`.
pub fn classify(
    left: &SignedState,
    right: &SignedState,
    scaled: &ScaledPressure,
) -> Result<RiemannCase> {
    let l = validate_end_state(left, scaled)?;
    let r = validate_end_state(right, scaled)?;
    if (l.theta - r.theta).abs() <= EQUAL_ANGLE_TOLERANCE {
        return Ok(RiemannCase::EqualAngles);
    }
    if l.theta > r.theta {
        return Ok(RiemannCase::VacuumOpening);
    }
    let right_below_left_branch = r.rho < hugoniot_solve_rho(&l, r.theta, scaled)?;
    let left_below_right_branch = l.rho < hugoniot_solve_rho(&r, l.theta, scaled)?;
    Ok(if right_below_left_branch && left_below_right_branch {
        RiemannCase::TwoShocks
    } else {
        RiemannCase::MixedShockRarefaction
    })
}

fn check_band(state: &EpsState, scaled: &ScaledPressure, which: &str) -> Result<()> {
    if in_genuinely_nonlinear_band(state, scaled)? {
        Ok(())
    } else {
        Err(Error::EpsilonTooLarge {
            epsilon: scaled.epsilon,
            reason: format!(
                "{which} state (rho = {}, theta = {}) lies beyond a linearly degenerate curve",
                state.rho, state.theta
            ),
        })
    }
}

/// Solves the Riemann problem between two non-vacuum signed states.
pub fn solve(
    left: &SignedState,
    right: &SignedState,
    scaled: &ScaledPressure,
) -> Result<RiemannSolution> {
    let l = validate_end_state(left, scaled)?;
    let r = validate_end_state(right, scaled)?;
    check_band(&l, scaled, "left")?;
    check_band(&r, scaled, "right")?;
    let equal_angles = (l.theta - r.theta).abs() <= EQUAL_ANGLE_TOLERANCE;

    let edge_left = vacuum_endpoint(&l, WaveFamily::Minus, scaled)?;
    let edge_right = vacuum_endpoint(&r, WaveFamily::Plus, scaled)?;
    if !equal_angles && edge_left >= edge_right {
        return vacuum_solution(left, right, &l, &r, edge_left, edge_right, scaled);
    }

    let law = scaled.law;
    let mut gap_fn = |y: f64| -> Result<f64> {
        let rho = rho_of_log_gap(&law, y);
        Ok(forward_curve_theta(&l, rho, scaled)? - backward_curve_theta(&r, rho, scaled)?)
    };
    // The difference increases with ρ, hence decreases with y.
    let y_dense = log_gap(&law, l.rho.max(r.rho));
    let g_dense = gap_fn(y_dense)?;
    let step = if g_dense < 0.0 { -1.0 } else { 1.0 };
    let bracket = if g_dense == 0.0 {
        Bracket {
            a: y_dense,
            fa: 0.0,
            b: y_dense,
            fb: 0.0,
        }
    } else {
        expand_bracket(
            &mut gap_fn,
            y_dense,
            g_dense,
            step,
            80,
            "wave-curve intersection",
        )
        .map_err(|_| Error::NoIntersection {
            reason: "forward and backward wave curves do not cross".into(),
        })?
    };
    let y = brent(
        gap_fn,
        bracket,
        INTERSECTION_TOLERANCE,
        "wave-curve intersection",
    )?;
    let rho_mid = rho_of_log_gap(&law, y);
    if !(rho_mid > 0.0) {
        return Err(Error::NoIntersection {
            reason: "intermediate density underflows to vacuum".into(),
        });
    }

    let minus_is_shock = rho_mid > l.rho * (1.0 + DEGENERATE_JUMP);
    let plus_is_shock = rho_mid > r.rho * (1.0 + DEGENERATE_JUMP);
    let theta_f = forward_curve_theta(&l, rho_mid, scaled)?;
    let theta_b = backward_curve_theta(&r, rho_mid, scaled)?;
    let theta_mid = match (minus_is_shock, plus_is_shock) {
        (true, false) => theta_f,
        (false, true) => theta_b,
        (true, true) => theta_f,
        (false, false) => 0.5 * (theta_f + theta_b),
    };
    if check_angle(theta_mid).is_err() {
        return Err(Error::EpsilonTooLarge {
            epsilon: scaled.epsilon,
            reason: format!("intermediate angle {theta_mid} leaves (0, pi)"),
        });
    }
    let mid = EpsState {
        rho: rho_mid,
        theta: theta_mid,
    };
    check_band(&mid, scaled, "intermediate")?;

    let minus_wave = if minus_is_shock {
        Wave::Shock {
            speed: shock_speed(&l, &mid)?,
            family: WaveFamily::Minus,
        }
    } else {
        Wave::RarefactionFan {
            speed_lo: eigenvalue(WaveFamily::Minus, &l, scaled)?,
            speed_hi: eigenvalue(WaveFamily::Minus, &mid, scaled)?,
            family: WaveFamily::Minus,
        }
    };
    let plus_wave = if plus_is_shock {
        Wave::Shock {
            speed: shock_speed(&mid, &r)?,
            family: WaveFamily::Plus,
        }
    } else {
        Wave::RarefactionFan {
            speed_lo: eigenvalue(WaveFamily::Plus, &mid, scaled)?,
            speed_hi: eigenvalue(WaveFamily::Plus, &r, scaled)?,
            family: WaveFamily::Plus,
        }
    };
    let case = if equal_angles {
        RiemannCase::EqualAngles
    } else if l.theta > r.theta {
        RiemannCase::VacuumOpening
    } else if minus_is_shock && plus_is_shock {
        RiemannCase::TwoShocks
    } else {
        RiemannCase::MixedShockRarefaction
    };

    let (sl, sr) = (left.sign(), right.sign());
    let mut states = vec![*left, SignedState::new(rho_mid, sl * theta_mid)];
    let mut waves = vec![minus_wave];
    if sl != sr {
        waves.push(Wave::SignContact {
            speed: theta_mid.cos(),
        });
        states.push(SignedState::new(rho_mid, sr * theta_mid));
    }
    waves.push(plus_wave);
    states.push(*right);
    Ok(RiemannSolution {
        states,
        waves,
        case,
        scaled: *scaled,
    })
}

fn vacuum_solution(
    left: &SignedState,
    right: &SignedState,
    l: &EpsState,
    r: &EpsState,
    edge_left: f64,
    edge_right: f64,
    scaled: &ScaledPressure,
) -> Result<RiemannSolution> {
    let speed_left_edge = edge_left.cos();
    let speed_right_edge = edge_right.cos();
    let waves = vec![
        Wave::RarefactionFan {
            speed_lo: eigenvalue(WaveFamily::Minus, l, scaled)?,
            speed_hi: speed_left_edge,
            family: WaveFamily::Minus,
        },
        Wave::VacuumInterval {
            speed_lo: speed_left_edge,
            speed_hi: speed_right_edge,
        },
        Wave::RarefactionFan {
            speed_lo: speed_right_edge,
            speed_hi: eigenvalue(WaveFamily::Plus, r, scaled)?,
            family: WaveFamily::Plus,
        },
    ];
    let states = vec![
        *left,
        SignedState::new(0.0, left.sign() * edge_left),
        SignedState::new(0.0, right.sign() * edge_right),
        *right,
    ];
    Ok(RiemannSolution {
        states,
        waves,
        case: RiemannCase::VacuumOpening,
        scaled: *scaled,
    })
}

/// Evaluates the self-similar solution at `xi = x/t`.
///
/// Exactly at a discontinuity speed the right limit is returned. Inside a
/// rarefaction fan the density solves `λ(ρ, θ(ρ)) = ξ` along the integral
/// curve; inside a vacuum interval the angle is undefined.
pub fn sample(solution: &RiemannSolution, xi: f64) -> SampledState {
    let scaled = &solution.scaled;
    for (k, wave) in solution.waves.iter().enumerate() {
        let before = solution.states[k];
        let after = solution.states[k + 1];
        match *wave {
            Wave::Shock { speed, .. } | Wave::SignContact { speed } => {
                if xi < speed {
                    return constant(before);
                }
            }
            Wave::VacuumInterval { speed_lo, speed_hi } => {
                if xi < speed_lo {
                    return constant(before);
                }
                if xi < speed_hi {
                    return SampledState {
                        rho: 0.0,
                        theta: None,
                    };
                }
            }
            Wave::RarefactionFan {
                speed_lo,
                speed_hi,
                family,
            } => {
                if xi < speed_lo {
                    return constant(before);
                }
                if xi < speed_hi {
                    return sample_fan(before, after, family, xi, scaled);
                }
            }
        }
    }
    constant(*solution.states.last().expect("solution has states"))
}

fn constant(state: SignedState) -> SampledState {
    SampledState {
        rho: state.rho,
        theta: if state.rho > 0.0 {
            Some(state.theta)
        } else {
            None
        },
    }
}

/// Point inside a fan between `before` and `after`.
fn sample_fan(
    before: SignedState,
    after: SignedState,
    family: WaveFamily,
    xi: f64,
    scaled: &ScaledPressure,
) -> SampledState {
    // The fan is parametrized from its non-vacuum side.
    let reference = match family {
        WaveFamily::Minus => before,
        WaveFamily::Plus => after,
    };
    let other = match family {
        WaveFamily::Minus => after,
        WaveFamily::Plus => before,
    };
    let sign = reference.sign();
    let reference = reference.unsigned();
    let law = scaled.law;
    let mut residual = |y: f64| -> Result<f64> {
        let rho = rho_of_log_gap(&law, y);
        let theta = rarefaction_theta(&reference, rho, family, scaled)?;
        Ok(eigenvalue(family, &EpsState { rho, theta }, scaled)? - xi)
    };
    // Vacuum sits at y = +∞; a density of 1e-100 stands in for it (smaller
    // values underflow the derivative of the pressure).
    let y_ref = log_gap(&law, reference.rho);
    let y_other = log_gap(&law, other.rho.max(1e-100));
    let located = Bracket::evaluate(&mut residual, y_ref, y_other)
        .and_then(|bracket| brent(&mut residual, bracket, 0.0, "rarefaction fan sampling"));
    match located {
        Ok(y) => {
            let rho = rho_of_log_gap(&law, y);
            let theta = rarefaction_theta(&reference, rho, family, scaled).unwrap_or(f64::NAN);
            SampledState {
                rho,
                theta: Some(sign * theta),
            }
        }
        // Only reachable when ξ is within rounding of a fan edge.
        Err(_) => {
            let lo_edge = match family {
                WaveFamily::Minus => eigenvalue(family, &reference, scaled).unwrap_or(xi),
                WaveFamily::Plus => other.unsigned().theta.cos(),
            };
            let near_before = (xi - lo_edge).abs() < f64::EPSILON.sqrt();
            constant(if near_before { before } else { after })
        }
    }
}

/// Diagnostics for one wave of a solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveDiagnostic {
    pub index: usize,
    pub wave: Wave,
    /// Mass jump relation residual (shocks only).
    pub mass_residual: f64,
    /// Ψ-flux jump relation residual (shocks only).
    pub psi_residual: f64,
    /// Lax entropy condition (shocks only; `true` otherwise).
    pub lax_admissible: bool,
    /// Mismatch between fan or contact speeds and the characteristic speeds
    /// of the flanking states.
    pub speed_mismatch: f64,
}

/// Aggregate diagnostics of a solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionDiagnostics {
    pub waves: Vec<WaveDiagnostic>,
    pub speeds_ordered: bool,
    pub max_residual: f64,
    pub passed: bool,
}

/// Checks every wave of a solution: jump relations and the Lax condition for
/// shocks, edge speeds for fans and contacts, and the ordering of all waves.
/// Passes when every residual is below [`CHECK_TOLERANCE`].
pub fn check_solution(solution: &RiemannSolution, scaled: &ScaledPressure) -> SolutionDiagnostics {
    let mut diagnostics = Vec::with_capacity(solution.waves.len());
    let mut max_residual: f64 = 0.0;
    let mut all_admissible = true;
    for (index, wave) in solution.waves.iter().enumerate() {
        let a = solution.states[index].unsigned();
        let b = solution.states[index + 1].unsigned();
        let mut diag = WaveDiagnostic {
            index,
            wave: *wave,
            mass_residual: 0.0,
            psi_residual: 0.0,
            lax_admissible: true,
            speed_mismatch: 0.0,
        };
        match *wave {
            Wave::Shock { speed, family } => {
                match jump_residuals(&a, &b, speed, scaled) {
                    Ok((mass, psi)) => {
                        diag.mass_residual = mass.abs();
                        diag.psi_residual = psi.abs();
                    }
                    Err(_) => {
                        diag.mass_residual = f64::INFINITY;
                        diag.psi_residual = f64::INFINITY;
                    }
                }
                let lambda_left = eigenvalue(family, &a, scaled).unwrap_or(f64::NAN);
                let lambda_right = eigenvalue(family, &b, scaled).unwrap_or(f64::NAN);
                diag.lax_admissible = lambda_right <= speed + CHECK_TOLERANCE
                    && speed <= lambda_left + CHECK_TOLERANCE;
            }
            Wave::RarefactionFan {
                speed_lo,
                speed_hi,
                family,
            } => {
                let lo = eigenvalue(family, &a, scaled).unwrap_or(f64::NAN);
                let hi = eigenvalue(family, &b, scaled).unwrap_or(f64::NAN);
                diag.speed_mismatch = (speed_lo - lo).abs().max((speed_hi - hi).abs());
                if speed_lo > speed_hi {
                    diag.speed_mismatch = diag.speed_mismatch.max(speed_lo - speed_hi);
                }
            }
            Wave::SignContact { speed } => {
                diag.speed_mismatch = (a.theta - b.theta)
                    .abs()
                    .max((a.rho - b.rho).abs())
                    .max((speed - a.theta.cos()).abs());
            }
            Wave::VacuumInterval { speed_lo, speed_hi } => {
                diag.speed_mismatch = a
                    .rho
                    .max(b.rho)
                    .max((speed_lo - a.theta.cos()).abs())
                    .max((speed_hi - b.theta.cos()).abs());
            }
        }
        let worst = diag
            .mass_residual
            .max(diag.psi_residual)
            .max(diag.speed_mismatch);
        max_residual = if worst.is_nan() {
            f64::INFINITY
        } else {
            max_residual.max(worst)
        };
        all_admissible &= diag.lax_admissible;
        diagnostics.push(diag);
    }
    let speeds_ordered = solution.waves.windows(2).all(|pair| {
        let (_, hi) = pair[0].speed_range();
        let (lo, _) = pair[1].speed_range();
        hi <= lo + CHECK_TOLERANCE
    });
    SolutionDiagnostics {
        passed: max_residual <= CHECK_TOLERANCE && all_admissible && speeds_ordered,
        waves: diagnostics,
        speeds_ordered,
        max_residual,
    }
}

/// Lax test of every shock of a solution through
/// [`lax_admissible`], reporting jump-relation failures as errors.
pub fn shocks_admissible(solution: &RiemannSolution) -> Result<bool> {
    let mut ok = true;
    for (k, wave) in solution.waves.iter().enumerate() {
        if let Wave::Shock { family, .. } = wave {
            let a = solution.states[k].unsigned();
            let b = solution.states[k + 1].unsigned();
            ok &= lax_admissible(&a, &b, *family, &solution.scaled)?;
        }
    }
    Ok(ok)
}

/// Branch label of a traced wave-curve point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveBranch {
    ForwardRarefaction,
    ForwardShock,
    BackwardRarefaction,
    BackwardShock,
}

impl CurveBranch {
    pub fn label(self) -> &'static str {
        match self {
            CurveBranch::ForwardRarefaction => "forward_rarefaction",
            CurveBranch::ForwardShock => "forward_shock",
            CurveBranch::BackwardRarefaction => "backward_rarefaction",
            CurveBranch::BackwardShock => "backward_shock",
        }
    }
}

/// A point of a traced wave curve with the eigenvalues at that point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub theta: f64,
    pub rho: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub branch: CurveBranch,
}

/// Samples the forward wave curve of `left` and the backward wave curve of
/// `right` on `points` densities spread uniformly in `(0, ρ*)` in the log-gap
/// variable between `rho_min` and `rho_max`. Points whose angle leaves
/// (0, π) are skipped.
pub fn trace_wave_curves(
    left: &EpsState,
    right: &EpsState,
    scaled: &ScaledPressure,
    rho_min: f64,
    rho_max: f64,
    points: usize,
) -> Result<Vec<CurvePoint>> {
    let law = scaled.law;
    let (y_hi, y_lo) = (log_gap(&law, rho_min), log_gap(&law, rho_max));
    let mut out = Vec::with_capacity(2 * points);
    for (reference, forward) in [(left, true), (right, false)] {
        for k in 0..points {
            let t = k as f64 / (points.max(2) - 1) as f64;
            let rho = rho_of_log_gap(&law, y_hi + t * (y_lo - y_hi));
            let theta = if forward {
                forward_curve_theta(reference, rho, scaled)?
            } else {
                backward_curve_theta(reference, rho, scaled)?
            };
            if !(ANGLE_GUARD..=PI - ANGLE_GUARD).contains(&theta) {
                continue;
            }
            let state = EpsState { rho, theta };
            let branch = match (forward, rho <= reference.rho) {
                (true, true) => CurveBranch::ForwardRarefaction,
                (true, false) => CurveBranch::ForwardShock,
                (false, true) => CurveBranch::BackwardRarefaction,
                (false, false) => CurveBranch::BackwardShock,
            };
            out.push(CurvePoint {
                theta,
                rho,
                lambda_minus: eigenvalue(WaveFamily::Minus, &state, scaled)?,
                lambda_plus: eigenvalue(WaveFamily::Plus, &state, scaled)?,
                branch,
            });
        }
    }
    Ok(out)
}
