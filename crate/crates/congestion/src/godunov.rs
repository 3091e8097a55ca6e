//! First-order Godunov finite-volume scheme for the finite-ε system in the
//! conservative variables `(ρ, w)` with `w = Ψ(cosθ)`.
//!
//! Fluxes are `(ρ cosθ, Φ(cosθ) + εp(ρ))`; in terms of `w`, `cosθ = tanh w`
//! and `Φ = ln cosh w`. The numerical flux at each interface is the physical
//! flux of the exact Riemann solution sampled at `ξ = 0`. Angles stay in
//! `(0, π)`: the conservative pair cannot represent the sign of θ, and vacuum
//! is reported as an error rather than regularized.

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::pressure_law::{angle_of_psi, check_angle, psi_of_angle, ScaledPressure};
use crate::riemann_exact::{sample, solve, RiemannSolution, SignedState};
use crate::wave_structure::{eigenvalues, phi_of_psi, EpsState};
use serde::{Deserialize, Serialize};

/// Relative distance to ρ* at which an updated cell counts as congested.
pub const CONGESTION_MARGIN: f64 = 1e-12;

/// Densities at or below this count as vacuum.
pub const RHO_FLOOR: f64 = 1e-12;

/// Uniform grid of `n` cells on `[x_lo, x_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n: usize,
}

impl Grid1D {
    /// Validates `n ≥ 2` and `x_lo < x_hi`.
    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least two cells, got {n}"
            )));
        }
        if !(x_lo < x_hi && x_lo.is_finite() && x_hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must satisfy x_lo < x_hi, got [{x_lo}, {x_hi}]"
            )));
        }
        Ok(Self { x_lo, x_hi, n })
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx()
    }
}

/// Cell average of the conserved pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellState {
    pub rho: f64,
    /// `Ψ(cosθ)`.
    pub w: f64,
}

impl CellState {
    /// Cell state from density and angle.
    pub fn from_angle(rho: f64, theta: f64) -> Result<Self> {
        check_angle(theta)?;
        Ok(Self {
            rho,
            w: psi_of_angle(theta),
        })
    }

    /// `θ ∈ (0, π)` with `Ψ(cosθ) = w`.
    pub fn theta(&self) -> f64 {
        angle_of_psi(self.w)
    }
}

/// Boundary treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Zero-gradient ghost cells.
    Outflow,
    Periodic,
}

/// Run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scaled: ScaledPressure,
    /// Courant number in (0, 1].
    pub cfl: f64,
    pub t_end: f64,
    pub boundary: Boundary,
}

impl SimConfig {
    /// Validates the Courant number and the final time.
    pub fn new(scaled: ScaledPressure, cfl: f64, t_end: f64, boundary: Boundary) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {cfl}"
            )));
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be finite and non-negative, got {t_end}"
            )));
        }
        Ok(Self {
            scaled,
            cfl,
            t_end,
            boundary,
        })
    }
}

/// Physical flux `(ρ tanh w, ln cosh w + εp(ρ))`.
pub fn physical_flux(state: &CellState, scaled: &ScaledPressure) -> Result<(f64, f64)> {
    Ok((
        state.rho * state.w.tanh(),
        phi_of_psi(state.w) + scaled.pressure(state.rho)?,
    ))
}

/// Godunov flux between two cells.
pub fn interface_flux(
    left: &CellState,
    right: &CellState,
    scaled: &ScaledPressure,
    interface: usize,
) -> Result<(f64, f64)> {
    if left == right {
        return physical_flux(left, scaled);
    }
    let solution = solve(
        &SignedState::new(left.rho, left.theta()),
        &SignedState::new(right.rho, right.theta()),
        scaled,
    )?;
    let at_interface = sample(&solution, 0.0);
    match at_interface.theta {
        Some(theta) if at_interface.rho > 0.0 => physical_flux(
            &CellState {
                rho: at_interface.rho,
                w: psi_of_angle(theta.abs()),
            },
            scaled,
        ),
        _ => Err(Error::VacuumBreach {
            cell: interface,
            rho: at_interface.rho,
        }),
    }
}

/// `cfl·Δx / max |λ±|` over all cells.
pub fn cfl_dt(grid: &Grid1D, states: &[CellState], config: &SimConfig) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut fastest: f64 = 0.0;
    for state in states {
        let (minus, plus) = eigenvalues(
            &EpsState {
                rho: state.rho,
                theta: state.theta(),
            },
            &config.scaled,
        )?;
        fastest = fastest.max(minus.abs()).max(plus.abs());
    }
    if fastest == 0.0 {
        return Err(Error::InvalidParameter(
            "all characteristic speeds vanish; no CFL time step".into(),
        ));
    }
    Ok(config.cfl * grid.dx() / fastest)
}

/// One conservative update with time step `dt`.
pub fn step(
    grid: &Grid1D,
    states: &[CellState],
    dt: f64,
    config: &SimConfig,
) -> Result<Vec<CellState>> {
    let n = states.len();
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    if n != grid.n {
        return Err(Error::InvalidParameter(format!(
            "grid has {} cells but {n} states were given",
            grid.n
        )));
    }
    // Interface k separates cell k−1 and cell k (k = 0..=n).
    let neighbor = |k: isize| -> &CellState {
        let index = match config.boundary {
            Boundary::Outflow => k.clamp(0, n as isize - 1),
            Boundary::Periodic => k.rem_euclid(n as isize),
        };
        &states[index as usize]
    };
    let mut fluxes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let k = k as isize;
        fluxes.push(interface_flux(
            neighbor(k - 1),
            neighbor(k),
            &config.scaled,
            k as usize,
        )?);
    }
    if config.boundary == Boundary::Periodic {
        // Both ends see the same Riemann problem; share the flux so the mass
        // telescopes exactly.
        fluxes[n] = fluxes[0];
    }
    let ratio = dt / grid.dx();
    let rho_max = config.scaled.law.rho_star * (1.0 - CONGESTION_MARGIN);
    let mut next = Vec::with_capacity(n);
    for (i, state) in states.iter().enumerate() {
        let rho = state.rho - ratio * (fluxes[i + 1].0 - fluxes[i].0);
        let w = state.w - ratio * (fluxes[i + 1].1 - fluxes[i].1);
        if rho >= rho_max {
            return Err(Error::CongestionBreach { cell: i, rho });
        }
        if rho <= RHO_FLOOR || !rho.is_finite() {
            return Err(Error::VacuumBreach { cell: i, rho });
        }
        if !w.is_finite() {
            return Err(Error::Domain {
                quantity: "w",
                value: w,
                detail: "conservative angle variable became non-finite",
            });
        }
        next.push(CellState { rho, w });
    }
    Ok(next)
}

/// Cell values at requested times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSnapshot {
    pub t: f64,
    pub states: Vec<CellState>,
}

/// Initial cell values from point values at the cell centers.
pub fn initialize<F>(grid: &Grid1D, mut initial: F) -> Vec<CellState>
where
    F: FnMut(f64) -> CellState,
{
    (0..grid.n).map(|i| initial(grid.center(i))).collect()
}

/// Advances `initial` to `config.t_end` with CFL-limited steps, stopping
/// exactly at every requested snapshot time (times beyond `t_end` are
/// ignored). The initial state is always the first snapshot and the state at
/// `t_end` the last.
pub fn run(
    config: &SimConfig,
    grid: &Grid1D,
    initial: Vec<CellState>,
    snapshot_times: &[f64],
) -> Result<Vec<SimSnapshot>> {
    let mut targets: Vec<f64> = snapshot_times
        .iter()
        .copied()
        .filter(|t| *t > 0.0 && *t < config.t_end)
        .collect();
    targets.push(config.t_end);
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    let mut states = initial;
    let mut t = 0.0;
    let mut snapshots = vec![SimSnapshot {
        t,
        states: states.clone(),
    }];
    for target in targets {
        while t < target {
            let dt = cfl_dt(grid, &states, config)?.min(target - t);
            states = step(grid, &states, dt, config)?;
            t = if target - t - dt <= 0.0 {
                target
            } else {
                t + dt
            };
        }
        if target > 0.0 {
            snapshots.push(SimSnapshot {
                t,
                states: states.clone(),
            });
        }
    }
    Ok(snapshots)
}

/// Total mass `Σ ρ Δx`.
pub fn total_mass(grid: &Grid1D, states: &[CellState]) -> f64 {
    states.iter().map(|s| s.rho).sum::<f64>() * grid.dx()
}

/// Cell averages of the conserved pair `(ρ, Ψ(cosθ))` of an exact Riemann
/// solution centered at `x0`, at time `t > 0`. Vacuum contributes zero.
pub fn exact_cell_averages(
    grid: &Grid1D,
    solution: &RiemannSolution,
    x0: f64,
    t: f64,
) -> Vec<CellState> {
    let dx = grid.dx();
    (0..grid.n)
        .map(|i| {
            let lo = grid.x_lo + i as f64 * dx;
            let rho = gauss_legendre(|x| sample(solution, (x - x0) / t).rho, lo, lo + dx, 4) / dx;
            let w = gauss_legendre(
                |x| {
                    sample(solution, (x - x0) / t)
                        .theta
                        .map_or(0.0, |theta| psi_of_angle(theta.abs()))
                },
                lo,
                lo + dx,
                4,
            ) / dx;
            CellState { rho, w }
        })
        .collect()
}

/// Discrete L¹ distance `Σ (|Δρ| + |Δw|) Δx` in the conserved variables.
pub fn l1_error(grid: &Grid1D, states: &[CellState], reference: &[CellState]) -> f64 {
    states
        .iter()
        .zip(reference)
        .map(|(s, r)| (s.rho - r.rho).abs() + (s.w - r.w).abs())
        .sum::<f64>()
        * grid.dx()
}

/// Averages pairs of neighboring cells onto the grid with half as many cells.
pub fn restrict_to_coarse(fine: &[CellState]) -> Vec<CellState> {
    fine.chunks_exact(2)
        .map(|pair| CellState {
            rho: 0.5 * (pair[0].rho + pair[1].rho),
            w: 0.5 * (pair[0].w + pair[1].w),
        })
        .collect()
}
