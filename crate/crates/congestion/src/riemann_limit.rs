//! Riemann problems for the singular limit ε → 0.
//!
//! In the limit the density is capped by ρ*, the pressure `p̄` is a Lagrange
//! multiplier of the constraint (`(ρ* − ρ)·p̄ = 0`), and the flow splits into
//! uncongested regions (UC, `ρ < ρ*`, pressureless), congested regions
//! (C, `ρ = ρ*`) and vacuum (V). Uncongested/uncongested data produce a
//! contact, two contacts around vacuum, or two shocks around a congested
//! state. Congested end states release their pressure through waves of
//! infinite speed, which are represented structurally: each carries the side
//! (`−∞` or `+∞`) it travels to and is invisible at every finite `ξ`.
//!
//! Besides the solvers the module checks the interface conditions between
//! regions, the jump relations across finite-speed discontinuities, and
//! measures how finite-ε exact solutions approach the limit.

use crate::error::{Error, Result};
use crate::numerics::{brent, fit_log_log, gauss_legendre, Bracket, LogLogFit};
use crate::pressure_law::{check_angle, phi_of_angle, psi_of_angle, PressureLaw};
use crate::riemann_exact::{sample, solve, RiemannSolution, SignedState, Wave};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Angles closer than this are treated as equal.
pub const EQUAL_ANGLE_TOLERANCE: f64 = 1e-12;

/// Tolerance of the internal consistency assertions (pressure agreement,
/// interface relations).
pub const INTERFACE_TOLERANCE: f64 = 1e-9;

/// A state of the limit system. Vacuum states (`ρ = 0`) keep the angle of
/// the adjacent flow edge; `pbar` is `+∞` only for the intermediate state of
/// colliding congested data, flagged on the solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitState {
    pub rho: f64,
    pub theta: f64,
    pub pbar: f64,
}

/// Region type of a limit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Uncongested,
    Congested,
    Vacuum,
}

impl Region {
    fn label(self) -> &'static str {
        match self {
            Region::Uncongested => "uncongested",
            Region::Congested => "congested",
            Region::Vacuum => "vacuum",
        }
    }
}

impl LimitState {
    /// Uncongested state `0 < ρ < ρ*`, zero pressure.
    pub fn uncongested(rho: f64, theta: f64, law: &PressureLaw) -> Result<Self> {
        if !(rho > 0.0 && rho < law.rho_star) {
            return Err(Error::Domain {
                quantity: "rho",
                value: rho,
                detail: "uncongested density must lie in (0, rho_star)",
            });
        }
        check_angle(theta)?;
        Ok(Self {
            rho,
            theta,
            pbar: 0.0,
        })
    }

    /// Congested state `ρ = ρ*` with pressure `pbar ≥ 0`.
    pub fn congested(theta: f64, pbar: f64, law: &PressureLaw) -> Result<Self> {
        check_angle(theta)?;
        if !(pbar >= 0.0 && pbar.is_finite()) {
            return Err(Error::Domain {
                quantity: "pbar",
                value: pbar,
                detail: "congested pressure must be finite and non-negative",
            });
        }
        Ok(Self {
            rho: law.rho_star,
            theta,
            pbar,
        })
    }

    fn vacuum(theta: f64) -> Self {
        Self {
            rho: 0.0,
            theta,
            pbar: 0.0,
        }
    }

    fn congested_unchecked(theta: f64, pbar: f64, law: &PressureLaw) -> Self {
        Self {
            rho: law.rho_star,
            theta,
            pbar,
        }
    }

    pub fn region(&self, law: &PressureLaw) -> Region {
        if self.rho <= 0.0 {
            Region::Vacuum
        } else if self.rho >= law.rho_star {
            Region::Congested
        } else {
            Region::Uncongested
        }
    }

    fn reflected(&self) -> Self {
        Self {
            theta: PI - self.theta,
            ..*self
        }
    }
}

/// Direction toward which an infinite-speed wave escapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn flipped(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Waves of limit solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitWave {
    /// Discontinuity of finite speed with continuous normal velocity.
    Contact { speed: f64 },
    /// Finite-speed discontinuity between uncongested and congested states.
    LimitShock { speed: f64 },
    /// Infinite-speed wave that cancels the pressure of a congested end state.
    Declustering { side: Side },
    /// Infinite-speed wave between two congested states of different
    /// (non-zero) pressures.
    InfiniteSpeedJump { side: Side },
    /// Vacuum between two contacts.
    VacuumInterval { speed_lo: f64, speed_hi: f64 },
}

impl LimitWave {
    fn finite_speed(&self) -> Option<f64> {
        match *self {
            LimitWave::Contact { speed } | LimitWave::LimitShock { speed } => Some(speed),
            _ => None,
        }
    }

    fn reflected(&self) -> Self {
        match *self {
            LimitWave::Contact { speed } => LimitWave::Contact { speed: -speed },
            LimitWave::LimitShock { speed } => LimitWave::LimitShock { speed: -speed },
            LimitWave::Declustering { side } => LimitWave::Declustering {
                side: side.flipped(),
            },
            LimitWave::InfiniteSpeedJump { side } => LimitWave::InfiniteSpeedJump {
                side: side.flipped(),
            },
            LimitWave::VacuumInterval { speed_lo, speed_hi } => LimitWave::VacuumInterval {
                speed_lo: -speed_hi,
                speed_hi: -speed_lo,
            },
        }
    }
}

/// Structural case of a limit solution. The first two letters give the end
/// state regions (U: uncongested, C: congested).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitCase {
    UuContact,
    UuVacuum,
    UuShocks,
    UcContact,
    UcVacuum,
    UcShock,
    CuContact,
    CuVacuum,
    CuShock,
    CcUniform,
    CcVacuum,
    CcInfinitePressure,
}

/// Limit Riemann solution: ordered states and waves
/// (`waves.len() == states.len() − 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSolution {
    pub states: Vec<LimitState>,
    pub waves: Vec<LimitWave>,
    pub case: LimitCase,
    pub law: PressureLaw,
    /// Set when the intermediate pressure is infinite (colliding congested states).
    pub infinite_pressure: bool,
    /// Caveat attached to solutions that are not physically meaningful.
    pub advisory: Option<String>,
}

/// Sampled value of a limit solution; `theta` is `None` in vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSample {
    pub rho: f64,
    pub theta: Option<f64>,
    pub pbar: f64,
}

fn mirror(solution: LimitSolution) -> LimitSolution {
    LimitSolution {
        states: solution
            .states
            .iter()
            .rev()
            .map(LimitState::reflected)
            .collect(),
        waves: solution
            .waves
            .iter()
            .rev()
            .map(LimitWave::reflected)
            .collect(),
        ..solution
    }
}

/// Speed `[ρ cosθ]/[ρ]` of the discontinuity between `side` and a congested
/// state of angle `theta_mid`.
fn congested_jump_speed(side: &LimitState, theta_mid: f64, rho_star: f64) -> f64 {
    (rho_star * theta_mid.cos() - side.rho * side.theta.cos()) / (rho_star - side.rho)
}

/// Pressure of a congested state of angle `theta_mid` reached from an
/// uncongested `side` by a shock: `p̄ = σ[Ψ] − [Φ]` with brackets
/// `f(θ̃) − f(θ_side)`.
fn pressure_behind_shock(side: &LimitState, theta_mid: f64, rho_star: f64) -> f64 {
    let sigma = congested_jump_speed(side, theta_mid, rho_star);
    sigma * (psi_of_angle(theta_mid) - psi_of_angle(side.theta))
        - (phi_of_angle(theta_mid) - phi_of_angle(side.theta))
}

fn require_uncongested(state: &LimitState, law: &PressureLaw, which: &str) -> Result<()> {
    if state.region(law) != Region::Uncongested || state.pbar != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{which} state must be uncongested with zero pressure"
        )));
    }
    check_angle(state.theta)
}

fn require_congested(state: &LimitState, law: &PressureLaw, which: &str) -> Result<()> {
    if state.region(law) != Region::Congested || !(state.pbar >= 0.0 && state.pbar.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{which} state must be congested with finite non-negative pressure"
        )));
    }
    check_angle(state.theta)
}

/// Both end states uncongested.
///
/// Equal angles give a single contact; `θℓ > θr` opens a vacuum between two
/// contacts; `θℓ < θr` produces two shocks around a congested state whose
/// angle equates the pressures obtained from either side.
pub fn solve_uu(left: &LimitState, right: &LimitState, law: &PressureLaw) -> Result<LimitSolution> {
    require_uncongested(left, law, "left")?;
    require_uncongested(right, law, "right")?;
    let base = |states, waves, case| LimitSolution {
        states,
        waves,
        case,
        law: *law,
        infinite_pressure: false,
        advisory: None,
    };
    if (left.theta - right.theta).abs() <= EQUAL_ANGLE_TOLERANCE {
        return Ok(base(
            vec![*left, *right],
            vec![LimitWave::Contact {
                speed: left.theta.cos(),
            }],
            LimitCase::UuContact,
        ));
    }
    if left.theta > right.theta {
        let (lo, hi) = (left.theta.cos(), right.theta.cos());
        return Ok(base(
            vec![
                *left,
                LimitState::vacuum(left.theta),
                LimitState::vacuum(right.theta),
                *right,
            ],
            vec![
                LimitWave::Contact { speed: lo },
                LimitWave::VacuumInterval {
                    speed_lo: lo,
                    speed_hi: hi,
                },
                LimitWave::Contact { speed: hi },
            ],
            LimitCase::UuVacuum,
        ));
    }
    let rho_star = law.rho_star;
    let mismatch = |theta: f64| -> Result<f64> {
        Ok(pressure_behind_shock(left, theta, rho_star)
            - pressure_behind_shock(right, theta, rho_star))
    };
    let mut f = mismatch;
    let bracket = Bracket::evaluate(&mut f, left.theta, right.theta)?;
    let theta_mid = brent(f, bracket, 0.0, "congested intermediate angle")?;
    let pbar_left = pressure_behind_shock(left, theta_mid, rho_star);
    let pbar_right = pressure_behind_shock(right, theta_mid, rho_star);
    if (pbar_left - pbar_right).abs() > INTERFACE_TOLERANCE * 1f64.max(pbar_left.abs()) {
        return Err(Error::Convergence {
            what: "agreement of the two intermediate pressures",
            iterations: 0,
            residual: pbar_left - pbar_right,
        });
    }
    let mid = LimitState::congested_unchecked(theta_mid, 0.5 * (pbar_left + pbar_right), law);
    Ok(base(
        vec![*left, mid, *right],
        vec![
            LimitWave::LimitShock {
                speed: congested_jump_speed(left, theta_mid, rho_star),
            },
            LimitWave::LimitShock {
                speed: congested_jump_speed(right, theta_mid, rho_star),
            },
        ],
        LimitCase::UuShocks,
    ))
}

/// Uncongested left state, congested right state with pressure `p̄r ≥ 0`.
///
/// Equal angles: a contact to `(ρ*, θr, 0)`, then declustering to `p̄r`.
/// `θℓ > θr`: contact, vacuum, contact, declustering. `θℓ < θr`: a shock to
/// `(ρ*, θr, p̄̄)` followed by an infinite-speed pressure jump to `p̄r`.
pub fn solve_uc(left: &LimitState, right: &LimitState, law: &PressureLaw) -> Result<LimitSolution> {
    require_uncongested(left, law, "left")?;
    require_congested(right, law, "right")?;
    let rho_star = law.rho_star;
    let mut states = vec![*left];
    let mut waves = Vec::new();
    let case;
    // Pressure of the congested state reached at finite speed.
    let reached_pbar;
    if (left.theta - right.theta).abs() <= EQUAL_ANGLE_TOLERANCE {
        waves.push(LimitWave::Contact {
            speed: right.theta.cos(),
        });
        reached_pbar = 0.0;
        case = LimitCase::UcContact;
    } else if left.theta > right.theta {
        let (lo, hi) = (left.theta.cos(), right.theta.cos());
        states.push(LimitState::vacuum(left.theta));
        states.push(LimitState::vacuum(right.theta));
        waves.push(LimitWave::Contact { speed: lo });
        waves.push(LimitWave::VacuumInterval {
            speed_lo: lo,
            speed_hi: hi,
        });
        waves.push(LimitWave::Contact { speed: hi });
        reached_pbar = 0.0;
        case = LimitCase::UcVacuum;
    } else {
        waves.push(LimitWave::LimitShock {
            speed: congested_jump_speed(left, right.theta, rho_star),
        });
        reached_pbar = pressure_behind_shock(left, right.theta, rho_star);
        case = LimitCase::UcShock;
    }
    if reached_pbar != right.pbar {
        states.push(LimitState::congested_unchecked(
            right.theta,
            reached_pbar,
            law,
        ));
        waves.push(if right.pbar == 0.0 || reached_pbar == 0.0 {
            LimitWave::Declustering { side: Side::Right }
        } else {
            LimitWave::InfiniteSpeedJump { side: Side::Right }
        });
    }
    states.push(*right);
    Ok(LimitSolution {
        states,
        waves,
        case,
        law: *law,
        infinite_pressure: false,
        advisory: None,
    })
}

/// Congested left state, uncongested right state: mirror image of [`solve_uc`].
pub fn solve_cu(left: &LimitState, right: &LimitState, law: &PressureLaw) -> Result<LimitSolution> {
    let mirrored = solve_uc(&right.reflected(), &left.reflected(), law)?;
    let case = match mirrored.case {
        LimitCase::UcContact => LimitCase::CuContact,
        LimitCase::UcVacuum => LimitCase::CuVacuum,
        _ => LimitCase::CuShock,
    };
    let mut solution = LimitSolution {
        case,
        ..mirror(mirrored)
    };
    // Reflecting twice is not exact in floating point; restore the data.
    let last = solution.states.len() - 1;
    solution.states[0] = *left;
    solution.states[last] = *right;
    Ok(solution)
}

/// Residual of the intermediate-angle relation for colliding congested states:
/// `ln([Ψ]r[cos]r) − ln([Ψ]ℓ[cos]ℓ) − ln(p̄ℓ/p̄r)/γ`.
fn cluster_contact_log_residual(
    left: &LimitState,
    right: &LimitState,
    theta: f64,
    gamma: f64,
) -> f64 {
    let product = |s: &LimitState| {
        (psi_of_angle(theta) - psi_of_angle(s.theta)) * (theta.cos() - s.theta.cos())
    };
    product(right).ln() - product(left).ln() - (left.pbar / right.pbar).ln() / gamma
}

/// Residual `[Ψ]r[cos]r/([Ψ]ℓ[cos]ℓ) − (p̄ℓ/p̄r)^{1/γ}` of the intermediate
/// angle of colliding congested states.
pub fn cluster_contact_residual(
    left: &LimitState,
    right: &LimitState,
    theta: f64,
    gamma: f64,
) -> f64 {
    let product = |s: &LimitState| {
        (psi_of_angle(theta) - psi_of_angle(s.theta)) * (theta.cos() - s.theta.cos())
    };
    product(right) / product(left) - (left.pbar / right.pbar).powf(1.0 / gamma)
}

/// Scaled angle change `lim ε^(−1/(2γ))·Δθ` across a near-congested
/// rarefaction between scaled pressures `low < high`.
fn congested_fan_angle(low: f64, high: f64, law: &PressureLaw) -> f64 {
    let g = law.gamma;
    let amplitude = (g * law.rho_star).sqrt();
    if (g - 1.0).abs() < 1e-12 {
        amplitude * (high / low).ln()
    } else {
        let a = (g - 1.0) / (2.0 * g);
        amplitude * 2.0 / (g - 1.0) * (high.powf(a) - low.powf(a))
    }
}

/// Pressure of the finite-ξ region between two congested states of equal
/// angle and pressures `pbar_left ≠ pbar_right`.
///
/// At finite ε the solution is a shock from the lower-pressure side and a
/// rarefaction toward the higher-pressure side, both of diverging speed. The
/// rarefaction turns the angle by `Δθ ≈ ε^(1/(2γ))·J(P, P_high)` and the shock
/// compresses by `Δρ ≈ ρ*²·ε^(1/γ)·(P_low^(−1/γ) − P^(−1/γ))`; its Ψ-jump
/// relation reduces to `P − P_low = ρ*·Δθ²/Δρ`, which no longer involves ε.
/// The root `P ∈ (P_low, P_high)` of that balance is returned.
pub fn uniform_cluster_pressure(pbar_left: f64, pbar_right: f64, law: &PressureLaw) -> Result<f64> {
    let (low, high) = if pbar_left < pbar_right {
        (pbar_left, pbar_right)
    } else {
        (pbar_right, pbar_left)
    };
    if low == high {
        return Ok(low);
    }
    let inv = -1.0 / law.gamma;
    let balance = |p: f64| -> Result<f64> {
        let compression = law.rho_star * (low.powf(inv) - p.powf(inv));
        Ok((p - low) * compression - congested_fan_angle(p, high, law).powi(2))
    };
    let mut f = balance;
    let bracket = Bracket::evaluate(&mut f, low, high)?;
    brent(f, bracket, 0.0, "pressure of a uniform cluster")
}

/// Both end states congested with positive pressures.
///
/// Equal angles give a uniform congested flow; when the end pressures differ,
/// the finite-ξ region carries the pressure of [`uniform_cluster_pressure`]
/// and both end pressures are restored by infinite-speed jumps. `θℓ > θr` releases both pressures and opens a vacuum;
/// `θℓ < θr` yields an intermediate state of infinite pressure, returned with
/// a flag and an advisory because it is not physically meaningful.
pub fn solve_cc(left: &LimitState, right: &LimitState, law: &PressureLaw) -> Result<LimitSolution> {
    require_congested(left, law, "left")?;
    require_congested(right, law, "right")?;
    if !(left.pbar > 0.0 && right.pbar > 0.0) {
        return Err(Error::InvalidParameter(
            "congested end states must carry positive pressures".into(),
        ));
    }
    let mut solution = LimitSolution {
        states: vec![*left],
        waves: Vec::new(),
        case: LimitCase::CcUniform,
        law: *law,
        infinite_pressure: false,
        advisory: None,
    };
    if (left.theta - right.theta).abs() <= EQUAL_ANGLE_TOLERANCE {
        if left.pbar != right.pbar {
            let mid = uniform_cluster_pressure(left.pbar, right.pbar, law)?;
            solution.states.extend([
                LimitState::congested_unchecked(left.theta, mid, law),
                *right,
            ]);
            solution.waves.extend([
                LimitWave::InfiniteSpeedJump { side: Side::Left },
                LimitWave::InfiniteSpeedJump { side: Side::Right },
            ]);
        }
        return Ok(solution);
    }
    if left.theta > right.theta {
        let (lo, hi) = (left.theta.cos(), right.theta.cos());
        solution.case = LimitCase::CcVacuum;
        solution.states.extend([
            LimitState::congested_unchecked(left.theta, 0.0, law),
            LimitState::vacuum(left.theta),
            LimitState::vacuum(right.theta),
            LimitState::congested_unchecked(right.theta, 0.0, law),
            *right,
        ]);
        solution.waves.extend([
            LimitWave::Declustering { side: Side::Left },
            LimitWave::Contact { speed: lo },
            LimitWave::VacuumInterval {
                speed_lo: lo,
                speed_hi: hi,
            },
            LimitWave::Contact { speed: hi },
            LimitWave::Declustering { side: Side::Right },
        ]);
        return Ok(solution);
    }
    // The ratio decreases from +∞ at θℓ to 0 at θr; shrink toward each end
    // until the log-residual changes sign.
    let gamma = law.gamma;
    let f = |theta: f64| Ok(cluster_contact_log_residual(left, right, theta, gamma));
    let width = right.theta - left.theta;
    let mut lo = left.theta + 0.5 * width;
    let mut hi = lo;
    let mut f_lo = f(lo)?;
    let mut f_hi = f_lo;
    let mut shrink = 0.5;
    while f_lo <= 0.0 && shrink > 1e-300 {
        shrink *= 0.5;
        lo = left.theta + shrink * width;
        f_lo = f(lo)?;
    }
    shrink = 0.5;
    while f_hi >= 0.0 && shrink > 1e-300 {
        shrink *= 0.5;
        hi = right.theta - shrink * width;
        f_hi = f(hi)?;
    }
    let theta_mid = brent(
        f,
        Bracket {
            a: lo,
            fa: f_lo,
            b: hi,
            fb: f_hi,
        },
        0.0,
        "intermediate angle of colliding clusters",
    )?;
    solution.case = LimitCase::CcInfinitePressure;
    solution.infinite_pressure = true;
    solution.advisory = Some(
        "the intermediate pressure is infinite; the Riemann problem cannot represent the \
         impulsive pressure of colliding clusters, use the cluster collision model instead"
            .into(),
    );
    solution.states.extend([
        LimitState {
            rho: law.rho_star,
            theta: theta_mid,
            pbar: f64::INFINITY,
        },
        *right,
    ]);
    solution.waves.extend([
        LimitWave::InfiniteSpeedJump { side: Side::Left },
        LimitWave::InfiniteSpeedJump { side: Side::Right },
    ]);
    Ok(solution)
}

/// Dispatches on the end-state regions.
pub fn solve_limit(
    left: &LimitState,
    right: &LimitState,
    law: &PressureLaw,
) -> Result<LimitSolution> {
    match (left.region(law), right.region(law)) {
        (Region::Uncongested, Region::Uncongested) => solve_uu(left, right, law),
        (Region::Uncongested, Region::Congested) => solve_uc(left, right, law),
        (Region::Congested, Region::Uncongested) => solve_cu(left, right, law),
        (Region::Congested, Region::Congested) => solve_cc(left, right, law),
        _ => Err(Error::VacuumInput),
    }
}

/// Evaluates a limit solution at `xi = x/t` (right limit at discontinuities).
/// Infinite-speed waves are invisible at finite `ξ`.
pub fn sample_limit(solution: &LimitSolution, xi: f64) -> LimitSample {
    let point = |s: &LimitState| LimitSample {
        rho: s.rho,
        theta: if s.rho > 0.0 { Some(s.theta) } else { None },
        pbar: s.pbar,
    };
    for (k, wave) in solution.waves.iter().enumerate() {
        let before = &solution.states[k];
        match *wave {
            LimitWave::Contact { speed } | LimitWave::LimitShock { speed } => {
                if xi < speed {
                    return point(before);
                }
            }
            LimitWave::VacuumInterval { speed_lo, speed_hi } => {
                if xi < speed_lo {
                    return point(before);
                }
                if xi < speed_hi {
                    return LimitSample {
                        rho: 0.0,
                        theta: None,
                        pbar: 0.0,
                    };
                }
            }
            LimitWave::Declustering { side } | LimitWave::InfiniteSpeedJump { side } => {
                if side == Side::Right {
                    return point(before);
                }
            }
        }
    }
    point(solution.states.last().expect("solution has states"))
}

/// Interface patterns between regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum InterfaceKind {
    /// Congested / uncongested.
    C_UC,
    /// Uncongested / vacuum.
    UC_V,
    /// Congested / vacuum.
    C_V,
    /// Uncongested / uncongested.
    UC_UC,
}

/// A finite-speed discontinuity checked against its interface relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterfaceRecord {
    pub index: usize,
    pub kind: InterfaceKind,
    pub speed: f64,
    /// `p̄(right) − p̄(left)`.
    pub pressure_jump: f64,
    /// Largest violation of the relations of this pattern.
    pub residual: f64,
}

/// A wave left out of the interface check, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedInterface {
    pub index: usize,
    pub reason: String,
}

/// Interface records plus the waves the interface relations do not cover.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterfaceReport {
    pub records: Vec<InterfaceRecord>,
    pub excluded: Vec<ExcludedInterface>,
}

impl InterfaceReport {
    pub fn max_residual(&self) -> f64 {
        self.records.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Classifies every discontinuity of a limit solution by the regions on its
/// two sides and evaluates the matching relation:
///
/// * C/UC: `[p̄] = [Ψ][ρ cosθ]/[ρ] − [Φ]` and `σ = [ρ cosθ]/[ρ]`;
/// * UC/V: `σ = cosθ` of the uncongested side;
/// * C/V: `σ = cosθ` of the congested side and `p̄ = 0` there;
/// * UC/UC: `[cosθ] = 0` and `σ = cosθ`.
///
/// Infinite-speed waves between congested states are reported as excluded.
/// A finite-speed discontinuity matching none of the patterns is an error.
pub fn interface_conditions(solution: &LimitSolution) -> Result<InterfaceReport> {
    let law = &solution.law;
    let mut report = InterfaceReport {
        records: Vec::new(),
        excluded: Vec::new(),
    };
    for (index, wave) in solution.waves.iter().enumerate() {
        let a = &solution.states[index];
        let b = &solution.states[index + 1];
        let Some(speed) = wave.finite_speed() else {
            if !matches!(wave, LimitWave::VacuumInterval { .. }) {
                report.excluded.push(ExcludedInterface {
                    index,
                    reason: "congested/congested wave of infinite speed".into(),
                });
            }
            continue;
        };
        let (ra, rb) = (a.region(law), b.region(law));
        let pressure_jump = b.pbar - a.pbar;
        let (kind, residual) = match (ra, rb) {
            (Region::Uncongested, Region::Uncongested) => {
                let continuity = (a.theta.cos() - b.theta.cos()).abs();
                (
                    InterfaceKind::UC_UC,
                    continuity.max((speed - a.theta.cos()).abs()),
                )
            }
            (Region::Uncongested, Region::Vacuum) => {
                (InterfaceKind::UC_V, (speed - a.theta.cos()).abs())
            }
            (Region::Vacuum, Region::Uncongested) => {
                (InterfaceKind::UC_V, (speed - b.theta.cos()).abs())
            }
            (Region::Congested, Region::Vacuum) => (
                InterfaceKind::C_V,
                (speed - a.theta.cos()).abs().max(a.pbar.abs()),
            ),
            (Region::Vacuum, Region::Congested) => (
                InterfaceKind::C_V,
                (speed - b.theta.cos()).abs().max(b.pbar.abs()),
            ),
            (Region::Congested, Region::Uncongested) | (Region::Uncongested, Region::Congested) => {
                let jump_rho = b.rho - a.rho;
                let jump_mass = b.rho * b.theta.cos() - a.rho * a.theta.cos();
                let sigma = jump_mass / jump_rho;
                let predicted = (psi_of_angle(b.theta) - psi_of_angle(a.theta)) * sigma
                    - (phi_of_angle(b.theta) - phi_of_angle(a.theta));
                let pressure_error = (pressure_jump - predicted).abs() / 1f64.max(predicted.abs());
                (
                    InterfaceKind::C_UC,
                    pressure_error.max((speed - sigma).abs()),
                )
            }
            _ => {
                return Err(Error::UnclassifiedInterface {
                    index,
                    left: ra.label(),
                    right: rb.label(),
                })
            }
        };
        report.records.push(InterfaceRecord {
            index,
            kind,
            speed,
            pressure_jump,
            residual,
        });
    }
    Ok(report)
}

/// Jump-relation check for one finite-speed discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialJumpCheck {
    pub index: usize,
    /// `[ρ(cosθ − σ)]`.
    pub mass_residual: f64,
    /// `[p̄]`, evaluated only where `cosθ` is continuous.
    pub pressure_residual: Option<f64>,
}

/// Across every finite-speed discontinuity verifies `[ρ(cosθ − σ)] = 0`, and
/// `[p̄] = 0` where `cosθ` is continuous. Infinite-speed waves are skipped.
pub fn rh_partiel_check(solution: &LimitSolution) -> Vec<PartialJumpCheck> {
    let mut out = Vec::new();
    for (index, wave) in solution.waves.iter().enumerate() {
        let Some(sigma) = wave.finite_speed() else {
            continue;
        };
        let a = &solution.states[index];
        let b = &solution.states[index + 1];
        let flux = |s: &LimitState| s.rho * (s.theta.cos() - sigma);
        let continuous = (a.theta.cos() - b.theta.cos()).abs() <= EQUAL_ANGLE_TOLERANCE;
        out.push(PartialJumpCheck {
            index,
            mass_residual: (flux(b) - flux(a)).abs(),
            pressure_residual: continuous.then(|| (b.pbar - a.pbar).abs()),
        });
    }
    out
}

/// Checks `(ρ* − ρ)·p̄ = 0` on every state.
pub fn complementarity_holds(solution: &LimitSolution) -> bool {
    solution
        .states
        .iter()
        .all(|s| s.pbar == 0.0 || s.rho == solution.law.rho_star)
}

/// Finite-ε realization of a limit state: uncongested states are kept,
/// congested states get the density whose scaled pressure is `p̄`.
pub fn realize_at_epsilon(
    state: &LimitState,
    law: &PressureLaw,
    epsilon: f64,
) -> Result<SignedState> {
    match state.region(law) {
        Region::Uncongested => Ok(SignedState::new(state.rho, state.theta)),
        Region::Congested => {
            let scaled = law.scaled(epsilon)?;
            Ok(SignedState::new(scaled.p_inverse(state.pbar)?, state.theta))
        }
        Region::Vacuum => Err(Error::VacuumInput),
    }
}

/// One row of an ε-sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    /// L¹ distance on the ξ-window between the sampled finite-ε and limit
    /// profiles of `ρ` and `θ` (angles compared where both are defined).
    pub l1_error: f64,
    /// `ρ* − ρ̃` for the finite-ε intermediate state, when there is one.
    pub rho_gap: Option<f64>,
    /// Vacuum-edge angle gap `θℓ − θ_edge` when the finite-ε solution has a
    /// vacuum, otherwise `|θ̃^ε − θ̃|` against the limit intermediate angle.
    pub theta_gap: Option<f64>,
    /// `εp(ρ̃)` of the finite-ε intermediate state, when there is one.
    pub pbar_eps: Option<f64>,
}

/// Result of an ε-sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub limit: LimitSolution,
    pub rows: Vec<SweepRow>,
    pub rho_gap_fit: Option<LogLogFit>,
    pub theta_gap_fit: Option<LogLogFit>,
    /// Finite pressure of the limit intermediate state, when there is one.
    pub limit_pbar: Option<f64>,
    /// `εp(ρ̃)` extrapolated to ε = 0 from the last three rows.
    pub extrapolated_pbar: Option<f64>,
}

/// Aitken Δ² extrapolation of the last three values of a sequence; falls back
/// to the last value when the differences do not contract.
pub fn aitken_extrapolate(values: &[f64]) -> Option<f64> {
    let n = values.len();
    let last = *values.last()?;
    if n < 3 {
        return Some(last);
    }
    let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
    let d1 = b - a;
    let d2 = c - b;
    let denominator = d2 - d1;
    if denominator == 0.0 || d1 == 0.0 || (d2 / d1) <= 0.0 || (d2 / d1) >= 1.0 {
        return Some(last);
    }
    Some(c - d2 * d2 / denominator)
}

/// Parameters of an ε-sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub law: PressureLaw,
    pub left: LimitState,
    pub right: LimitState,
    pub eps_grid: Vec<f64>,
    /// ξ-window of the L¹ comparison.
    pub xi_window: (f64, f64),
}

/// Speeds at which a sampled profile may jump or kink.
fn breakpoints_exact(solution: &RiemannSolution) -> Vec<f64> {
    solution
        .waves
        .iter()
        .flat_map(|w| {
            let (lo, hi) = w.speed_range();
            [lo, hi]
        })
        .collect()
}

fn breakpoints_limit(solution: &LimitSolution) -> Vec<f64> {
    solution
        .waves
        .iter()
        .flat_map(|w| match *w {
            LimitWave::Contact { speed } | LimitWave::LimitShock { speed } => vec![speed],
            LimitWave::VacuumInterval { speed_lo, speed_hi } => vec![speed_lo, speed_hi],
            _ => vec![],
        })
        .collect()
}

/// L¹ distance on `window` between the `ρ` and `θ` profiles of a finite-ε
/// solution and a limit solution, integrated piecewise between all wave
/// speeds of both so that discontinuities are located exactly.
pub fn l1_distance(exact: &RiemannSolution, limit: &LimitSolution, window: (f64, f64)) -> f64 {
    let mut cuts: Vec<f64> = breakpoints_exact(exact)
        .into_iter()
        .chain(breakpoints_limit(limit))
        .filter(|x| x.is_finite() && *x > window.0 && *x < window.1)
        .collect();
    cuts.push(window.0);
    cuts.push(window.1);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let integrand = |xi: f64| {
        let e = sample(exact, xi);
        let l = sample_limit(limit, xi);
        let angle = match (e.theta, l.theta) {
            (Some(a), Some(b)) => (a.abs() - b).abs(),
            _ => 0.0,
        };
        (e.rho - l.rho).abs() + angle
    };
    cuts.windows(2)
        .map(|w| gauss_legendre(integrand, w[0], w[1], 4))
        .sum()
}

/// Solves the finite-ε problems along `eps_grid` and compares them with the
/// limit solution.
pub fn converge_from_eps(config: &SweepConfig) -> Result<ConvergenceReport> {
    let law = &config.law;
    let limit = solve_limit(&config.left, &config.right, law)?;
    let limit_mid = limit
        .states
        .iter()
        .skip(1)
        .take(limit.states.len().saturating_sub(2))
        .find(|s| s.rho > 0.0 && s.region(law) == Region::Congested && s.pbar > 0.0)
        .copied();
    let mut rows = Vec::with_capacity(config.eps_grid.len());
    for &eps in &config.eps_grid {
        let scaled = law.scaled(eps)?;
        let left = realize_at_epsilon(&config.left, law, eps)?;
        let right = realize_at_epsilon(&config.right, law, eps)?;
        let exact = solve(&left, &right, &scaled)?;
        let l1_error = l1_distance(&exact, &limit, config.xi_window);
        let vacuum = exact
            .waves
            .iter()
            .any(|w| matches!(w, Wave::VacuumInterval { .. }));
        let (rho_gap, theta_gap, pbar_eps) = if vacuum {
            let edge = exact.states[1].theta.abs();
            (None, Some(left.theta.abs() - edge), None)
        } else {
            let mid = exact.states[1];
            let theta_gap = limit_mid.map(|m| (mid.theta.abs() - m.theta).abs());
            (
                Some(law.rho_star - mid.rho),
                theta_gap,
                Some(scaled.pressure(mid.rho)?),
            )
        };
        rows.push(SweepRow {
            eps,
            l1_error,
            rho_gap,
            theta_gap,
            pbar_eps,
        });
    }
    let fit = |select: fn(&SweepRow) -> Option<f64>| {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| select(r).filter(|v| *v > 0.0).map(|v| (r.eps, v)))
            .collect();
        (points.len() >= 2)
            .then(|| fit_log_log(&points).ok())
            .flatten()
    };
    let rho_gap_fit = fit(|r| r.rho_gap);
    let theta_gap_fit = fit(|r| r.theta_gap);
    let pressures: Vec<f64> = rows.iter().filter_map(|r| r.pbar_eps).collect();
    let extrapolated_pbar = if pressures.len() == rows.len() {
        aitken_extrapolate(&pressures)
    } else {
        None
    };
    Ok(ConvergenceReport {
        extrapolated_pbar,
        limit_pbar: limit_mid.map(|m| m.pbar).filter(|p| p.is_finite()),
        limit,
        rows,
        rho_gap_fit,
        theta_gap_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn law() -> PressureLaw {
        PressureLaw::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn equal_angles_single_contact() {
        let law = law();
        let theta = 1.1;
        let l = LimitState::uncongested(0.3, theta, &law).unwrap();
        let r = LimitState::uncongested(0.7, theta, &law).unwrap();
        let sol = solve_uu(&l, &r, &law).unwrap();
        assert_eq!(sol.waves, vec![LimitWave::Contact { speed: theta.cos() }]);
    }

    #[test]
    fn symmetric_shocks_meet_at_right_angle() {
        let law = law();
        let l = LimitState::uncongested(0.5, 1.0, &law).unwrap();
        let r = LimitState::uncongested(0.5, PI - 1.0, &law).unwrap();
        let sol = solve_uu(&l, &r, &law).unwrap();
        assert_eq!(sol.case, LimitCase::UuShocks);
        assert!((sol.states[1].theta - PI / 2.0).abs() < 1e-12);
        assert!(sol.states[1].pbar > 0.0);
    }

    #[test]
    fn zero_pressure_contact_has_no_declustering() {
        let law = law();
        let l = LimitState::uncongested(0.4, 1.2, &law).unwrap();
        let r = LimitState::congested(1.2, 0.0, &law).unwrap();
        let sol = solve_uc(&l, &r, &law).unwrap();
        assert_eq!(sol.waves.len(), 1);
        assert!(matches!(sol.waves[0], LimitWave::Contact { .. }));
    }

    #[test]
    fn infinite_pressure_case_is_flagged() {
        let law = law();
        let l = LimitState::congested(1.0, 2.0, &law).unwrap();
        let r = LimitState::congested(PI - 1.0, 2.0, &law).unwrap();
        let sol = solve_cc(&l, &r, &law).unwrap();
        assert!(sol.infinite_pressure && sol.advisory.is_some());
        assert!((sol.states[1].theta - PI / 2.0).abs() < 1e-10);
        let report = interface_conditions(&sol).unwrap();
        assert!(report.records.is_empty());
        assert_eq!(report.excluded.len(), 2);
    }
}
