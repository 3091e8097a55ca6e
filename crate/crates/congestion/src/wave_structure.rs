//! Characteristic structure of the one-dimensional conservative system
//!
//! ```text
//! ∂t ρ       + ∂x (ρ cosθ)          = 0
//! ∂t Ψ(cosθ) + ∂x (Φ(cosθ) + εp(ρ)) = 0
//! ```
//!
//! on `0 < ρ < ρ*`, `0 < θ < π`: eigenvalues, eigenvectors, Hugoniot loci,
//! rarefaction (integral) curves, the sets where a field fails to be
//! genuinely nonlinear, the Lax entropy test, and a finite-difference check of
//! the pairs `(g, f)` of conserved quantity and flux admitted by the system.
//!
//! In the `(ρ, θ)` variables the system reads `∂t U + A ∂x U = 0` with
//! `A = [[cosθ, −ρ sinθ], [−ε p′ sinθ, cosθ]]`. With the spread
//! `χ = √(ε p′ ρ)` the eigenvalues are `cosθ ∓ χ sinθ` and the right
//! eigenvectors point along `(1, ±χ/ρ)` for the Minus / Plus family
//! respectively (Minus: `+χ/ρ`, Plus: `−χ/ρ`).

use crate::error::{Error, Result};
use crate::numerics::{brent, expand_bracket, integrate};
use crate::pressure_law::{
    angle_of_psi, check_angle, phi_of_angle, psi_of_angle, PressureLaw, ScaledPressure,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative tolerance of the rarefaction-curve quadrature.
pub const QUADRATURE_REL_TOL: f64 = 1e-12;

/// Tolerance of the Lax entropy inequalities and of the jump-relation test
/// that precedes them.
pub const LAX_TOLERANCE: f64 = 1e-8;

/// A state `(ρ, θ)` of the finite-ε conservative system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsState {
    pub rho: f64,
    pub theta: f64,
}

impl EpsState {
    /// Builds a state and checks `0 < ρ < ρ*` and `θ ∈ (0, π)` away from the
    /// singular endpoints.
    pub fn new(rho: f64, theta: f64, law: &PressureLaw) -> Result<Self> {
        law.gap(rho)?;
        check_angle(theta)?;
        Ok(Self { rho, theta })
    }

    /// Conserved angle variable `Ψ(cosθ)`.
    pub fn psi(&self) -> f64 {
        psi_of_angle(self.theta)
    }

    /// Mirror image under `x ↦ −x`, `θ ↦ π − θ`.
    pub fn reflected(&self) -> Self {
        Self {
            rho: self.rho,
            theta: PI - self.theta,
        }
    }
}

/// The two characteristic fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveFamily {
    /// Slow field, eigenvalue `cosθ − χ sinθ`.
    Minus,
    /// Fast field, eigenvalue `cosθ + χ sinθ`.
    Plus,
}

impl WaveFamily {
    /// `−1` for Minus, `+1` for Plus.
    pub fn sign(self) -> f64 {
        match self {
            WaveFamily::Minus => -1.0,
            WaveFamily::Plus => 1.0,
        }
    }
}

/// `(λ−, λ+) = cosθ ∓ √(εp′ρ)·|sinθ|`.
pub fn eigenvalues(state: &EpsState, scaled: &ScaledPressure) -> Result<(f64, f64)> {
    let chi = scaled.spread(state.rho)?;
    let c = state.theta.cos();
    let s = state.theta.sin().abs();
    Ok((c - chi * s, c + chi * s))
}

/// Eigenvalue of one family. At vacuum (`ρ = 0`) both equal `cosθ`.
pub fn eigenvalue(family: WaveFamily, state: &EpsState, scaled: &ScaledPressure) -> Result<f64> {
    let chi = scaled.spread(state.rho)?;
    Ok(state.theta.cos() + family.sign() * chi * state.theta.sin().abs())
}

/// Right eigenvector in the `(ρ, Ψ)` plane: `(±ρ|sinθ|, √(εp′ρ))`, not normalized.
pub fn eigenvector(
    family: WaveFamily,
    state: &EpsState,
    scaled: &ScaledPressure,
) -> Result<[f64; 2]> {
    let chi = scaled.spread(state.rho)?;
    Ok([family.sign() * state.rho * state.theta.sin().abs(), chi])
}

/// Directional derivative `∇λ·r` of a family's eigenvalue along its
/// eigenvector from [`eigenvector`], evaluated in closed form.
///
/// It vanishes exactly on the curve returned by
/// [`linearly_degenerate_theta`].
pub fn nonlinearity(family: WaveFamily, state: &EpsState, scaled: &ScaledPressure) -> Result<f64> {
    let rho = state.rho;
    let (sin, cos) = state.theta.sin_cos();
    let chi = scaled.spread(rho)?;
    let dchi =
        scaled.epsilon * (scaled.law.p_second(rho)? * rho + scaled.law.p_prime(rho)?) / (2.0 * chi);
    // Derivative along (1, ∓χ/ρ) in the (ρ, θ) variables.
    let along = match family {
        WaveFamily::Minus => -sin * (dchi + chi / rho) - chi * chi / rho * cos,
        WaveFamily::Plus => sin * (dchi + chi / rho) - chi * chi / rho * cos,
    };
    // The (ρ, Ψ) eigenvector equals ±ρ·sinθ times (1, ∓χ/ρ) in (ρ, θ).
    Ok(family.sign() * rho * sin * along)
}

/// Angle at which a family is linearly degenerate at density `rho`.
///
/// The zero set of `∇λ·r` is `cotθ = ±½·G(ρ)` with
/// `G(ρ) = (p″ρ + 3p′)ρ / (√ε (p′ρ)^{3/2})`: the Plus family degenerates at
/// `θ ∈ (0, π/2)` and the Minus family at `θ ∈ (π/2, π)`.
pub fn linearly_degenerate_theta(
    rho: f64,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<f64> {
    let law = &scaled.law;
    let p1 = law.p_prime(rho)?;
    let p2 = law.p_second(rho)?;
    let g = (p2 * rho + 3.0 * p1) * rho / (scaled.epsilon.sqrt() * (p1 * rho).powf(1.5));
    let acute = (2.0 / g).atan();
    Ok(match family {
        WaveFamily::Plus => acute,
        WaveFamily::Minus => PI - acute,
    })
}

/// True when both fields are genuinely nonlinear at `state` with the
/// orientation used by the wave-curve construction, i.e. the angle lies
/// strictly between the Plus and Minus degenerate angles.
pub fn in_genuinely_nonlinear_band(state: &EpsState, scaled: &ScaledPressure) -> Result<bool> {
    let lo = linearly_degenerate_theta(state.rho, WaveFamily::Plus, scaled)?;
    let hi = linearly_degenerate_theta(state.rho, WaveFamily::Minus, scaled)?;
    Ok(state.theta > lo && state.theta < hi)
}

/// `Φ` written in terms of `w = Ψ(cosθ)`: `ln cosh w`, evaluated without overflow.
pub(crate) fn phi_of_psi(w: f64) -> f64 {
    let a = w.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Hugoniot function
/// `H = [Φ(cosθ) + εp(ρ)]·[ρ] − [Ψ(cosθ)]·[ρ cosθ]` with `[f] = f_b − f_a`.
///
/// Zero exactly when the two states can be joined by a discontinuity
/// satisfying both jump relations; symmetric in its arguments.
pub fn hugoniot_residual(a: &EpsState, b: &EpsState, scaled: &ScaledPressure) -> Result<f64> {
    let jump_rho = b.rho - a.rho;
    let jump_flux = (phi_of_angle(b.theta) + scaled.pressure(b.rho)?)
        - (phi_of_angle(a.theta) + scaled.pressure(a.rho)?);
    let jump_psi = b.psi() - a.psi();
    let jump_mass_flux = b.rho * b.theta.cos() - a.rho * a.theta.cos();
    Ok(jump_flux * jump_rho - jump_psi * jump_mass_flux)
}

/// Densities closer than this (relative to the larger one) cannot define a
/// shock speed.
pub const DEGENERATE_JUMP: f64 = 1e-13;

/// Speed `σ = [ρ cosθ]/[ρ]` from the mass jump relation.
pub fn shock_speed(left: &EpsState, right: &EpsState) -> Result<f64> {
    let jump = right.rho - left.rho;
    if jump.abs() <= DEGENERATE_JUMP * left.rho.max(right.rho) {
        return Err(Error::DegenerateJump {
            rho_left: left.rho,
            rho_right: right.rho,
        });
    }
    Ok((right.rho * right.theta.cos() - left.rho * left.theta.cos()) / jump)
}

/// Residuals of the two jump relations `[ρcosθ] − σ[ρ]` and
/// `[Φ + εp] − σ[Ψ]` across a discontinuity of speed `speed`.
pub fn jump_residuals(
    left: &EpsState,
    right: &EpsState,
    speed: f64,
    scaled: &ScaledPressure,
) -> Result<(f64, f64)> {
    let mass = (right.rho * right.theta.cos() - left.rho * left.theta.cos())
        - speed * (right.rho - left.rho);
    let flux = (phi_of_angle(right.theta) + scaled.pressure(right.rho)?)
        - (phi_of_angle(left.theta) + scaled.pressure(left.rho)?);
    let psi = speed * (right.psi() - left.psi());
    Ok((mass, flux - psi))
}

/// Maps the gap variable `y = ln(1/ρ − 1/ρ*)` to a density.
pub(crate) fn rho_of_log_gap(law: &PressureLaw, y: f64) -> f64 {
    law.rho_from_gap(y.exp())
}

/// `y = ln(1/ρ − 1/ρ*)`; it is `+∞` at vacuum and decreases to `−∞` at ρ*.
pub(crate) fn log_gap(law: &PressureLaw, rho: f64) -> f64 {
    (1.0 / rho - 1.0 / law.rho_star).ln()
}

/// The density on the Hugoniot locus through `reference` at angle `theta`,
/// restricted to densities above the reference.
///
/// `ρ ↦ H(reference, (ρ, θ))` is strictly convex, negative at the reference
/// density and unbounded near ρ*, so the root above the reference density is
/// unique. It lies on the Minus branch when `θ > θ_ref` and on the Plus
/// branch when `θ < θ_ref`; there is no root when the angles coincide.
pub fn hugoniot_solve_rho(left: &EpsState, theta_r: f64, scaled: &ScaledPressure) -> Result<f64> {
    check_angle(theta_r)?;
    let law = scaled.law;
    let mut h = |y: f64| {
        let right = EpsState {
            rho: rho_of_log_gap(&law, y),
            theta: theta_r,
        };
        hugoniot_residual(left, &right, scaled)
    };
    let y0 = log_gap(&law, left.rho);
    let h0 = h(y0)?;
    if !(h0 < 0.0) {
        return Err(Error::NoRoot {
            what: "Hugoniot locus in density",
            lo: left.rho,
            hi: law.rho_star,
        });
    }
    // Each unit step in y shrinks the distance to ρ* by about a factor e.
    let bracket = expand_bracket(&mut h, y0, h0, -1.0, 12, "Hugoniot locus in density")?;
    let y = brent(h, bracket, 0.0, "Hugoniot locus in density")?;
    Ok(rho_of_log_gap(&law, y))
}

/// The angle on one branch of the Hugoniot locus through `reference` at a
/// density `rho ≠ ρ_ref`.
///
/// On the Minus branch the angle increases with the density, on the Plus
/// branch it decreases. At fixed density the Hugoniot function is strictly
/// monotone in the angle on the relevant side of `θ_ref`, so the root is
/// unique; it is located in the variable `w = Ψ(cosθ)`, in which the search
/// interval is the whole real line.
pub fn hugoniot_solve_theta(
    reference: &EpsState,
    rho: f64,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<f64> {
    Ok(angle_of_psi(hugoniot_solve_psi(
        reference, rho, family, scaled,
    )?))
}

/// As [`hugoniot_solve_theta`] but returns `w = Ψ(cosθ)`.
pub(crate) fn hugoniot_solve_psi(
    reference: &EpsState,
    rho: f64,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<f64> {
    let p_ref = scaled.pressure(reference.rho)?;
    let p = scaled.pressure(rho)?;
    let w_ref = reference.psi();
    // Evaluated through w so that H(w_ref) = ε[p][ρ] holds to rounding.
    let phi_ref = phi_of_psi(w_ref);
    let mass_ref = reference.rho * reference.theta.cos();
    let jump_rho = rho - reference.rho;
    if jump_rho.abs() <= DEGENERATE_JUMP * rho.max(reference.rho) {
        return Ok(w_ref);
    }
    let mut h = |w: f64| -> Result<f64> {
        Ok((phi_of_psi(w) + p - phi_ref - p_ref) * jump_rho
            - (w - w_ref) * (rho * w.tanh() - mass_ref))
    };
    // H(w_ref) = ε[p][ρ] > 0. Larger θ means smaller w: the Minus branch
    // above the reference density lies at w < w_ref.
    let downward = (family == WaveFamily::Minus) == (jump_rho > 0.0);
    let step = if downward { -1.0 } else { 1.0 };
    let h0 = h(w_ref)?;
    let bracket = expand_bracket(&mut h, w_ref, h0, step, 1100, "Hugoniot locus in angle")?;
    brent(h, bracket, 0.0, "Hugoniot locus in angle")
}

/// `∫_a^b √(p′(u)/u) du` for `0 ≤ a, b < ρ*` (signed: negative when `a > b`).
///
/// Below `ρ*/2` the substitution `u = v²` gives the smooth integrand
/// `2√γ v^{γ−1} (1 − v²/ρ*)^{−(γ+1)/2}`; above it the gap variable
/// `y = ln(1/u − 1/ρ*)` turns the endpoint singularity at ρ* into the
/// exponentially varying `√γ e^{y(1−γ)/2} (e^y + 1/ρ*)^{−1/2}`.
pub fn rarefaction_integral(law: &PressureLaw, a: f64, b: f64) -> Result<f64> {
    if a > b {
        return Ok(-rarefaction_integral(law, b, a)?);
    }
    if a < 0.0 {
        return Err(Error::Domain {
            quantity: "rho",
            value: a,
            detail: "density must be non-negative",
        });
    }
    law.gap(b.max(f64::MIN_POSITIVE))?;
    if a == b {
        return Ok(0.0);
    }
    let gamma = law.gamma;
    let c = 1.0 / law.rho_star;
    let root_gamma = gamma.sqrt();
    let split = 0.5 * law.rho_star;
    let mut total = 0.0;
    if a < split {
        let upper = b.min(split);
        let integrand = |v: f64| {
            2.0 * root_gamma * v.powf(gamma - 1.0) * (1.0 - c * v * v).powf(-0.5 * (gamma + 1.0))
        };
        total += integrate(integrand, a.sqrt(), upper.sqrt(), 0.0, QUADRATURE_REL_TOL)?;
    }
    if b > split {
        let y_lo = log_gap(law, b);
        let y_hi = log_gap(law, a.max(split));
        let integrand =
            |y: f64| root_gamma * (0.5 * (1.0 - gamma) * y).exp() / (y.exp() + c).sqrt();
        total += integrate(integrand, y_lo, y_hi, 0.0, QUADRATURE_REL_TOL)?;
    }
    Ok(total)
}

/// Angle on the rarefaction curve of `family` through `reference` at density `rho`:
/// `θ = θ_ref ± √ε ∫_{ρ_ref}^{ρ} √(p′(u)/u) du` (`+` for Minus, `−` for Plus).
///
/// Decreasing the density lowers θ on the Minus curve and raises it on the
/// Plus curve. The returned value is not clipped to (0, π): a curve that
/// leaves the angle domain before reaching vacuum reports it that way.
pub fn rarefaction_theta(
    reference: &EpsState,
    rho: f64,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<f64> {
    let integral = rarefaction_integral(&scaled.law, reference.rho, rho)?;
    Ok(reference.theta - family.sign() * scaled.epsilon.sqrt() * integral)
}

/// Angle where the rarefaction curve of `family` through `reference` reaches vacuum.
pub fn vacuum_endpoint(
    reference: &EpsState,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<f64> {
    rarefaction_theta(reference, 0.0, family, scaled)
}

/// Inverse of [`rarefaction_theta`]: the density on the rarefaction curve of
/// `family` through `reference` at angle `theta`.
///
/// Returns `0` at the vacuum endpoint and an out-of-range error beyond it.
pub fn rarefaction_rho(
    reference: &EpsState,
    theta: f64,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<f64> {
    let law = scaled.law;
    // Target value of ∫_{ρ_ref}^{ρ} √(p′/u) du.
    let target = -family.sign() * (theta - reference.theta) / scaled.epsilon.sqrt();
    if target == 0.0 {
        return Ok(reference.rho);
    }
    let mut g = |y: f64| -> Result<f64> {
        Ok(rarefaction_integral(&law, reference.rho, rho_of_log_gap(&law, y))? - target)
    };
    let y0 = log_gap(&law, reference.rho);
    if target < 0.0 {
        let floor = -rarefaction_integral(&law, 0.0, reference.rho)?;
        if target < floor {
            return Err(Error::Domain {
                quantity: "theta",
                value: theta,
                detail: "angle lies beyond the vacuum endpoint of the rarefaction curve",
            });
        }
        if target == floor {
            return Ok(0.0);
        }
    }
    let step = if target > 0.0 { -1.0 } else { 1.0 };
    let bracket = expand_bracket(&mut g, y0, -target, step, 64, "rarefaction curve inversion")?;
    let y = brent(g, bracket, 0.0, "rarefaction curve inversion")?;
    Ok(rho_of_log_gap(&law, y))
}

/// Lax entropy test for a discontinuity of `family` from `left` to `right`:
/// `λ(right) ≤ σ ≤ λ(left)` within [`LAX_TOLERANCE`].
///
/// Identical states count as an admissible (trivial) shock. States that do
/// not satisfy the jump relations are rejected with [`Error::NotAShock`].
pub fn lax_admissible(
    left: &EpsState,
    right: &EpsState,
    family: WaveFamily,
    scaled: &ScaledPressure,
) -> Result<bool> {
    if left == right {
        return Ok(true);
    }
    let sigma = shock_speed(left, right)?;
    let (mass, flux) = jump_residuals(left, right, sigma, scaled)?;
    let residual = mass.abs().max(flux.abs());
    if residual > LAX_TOLERANCE {
        return Err(Error::NotAShock { residual });
    }
    let lambda_left = eigenvalue(family, left, scaled)?;
    let lambda_right = eigenvalue(family, right, scaled)?;
    Ok(lambda_right <= sigma + LAX_TOLERANCE && sigma <= lambda_left + LAX_TOLERANCE)
}

/// The three pairs `(g, f)` of conserved density and flux checked against
/// the compatibility relations of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConservativePair {
    /// `(ρ, ρ cosθ)`.
    Mass,
    /// `(Ψ(cosθ), Φ(cosθ) + εp(ρ))`.
    Psi,
    /// `(ρΨ(cosθ), ρ cosθ Ψ(cosθ) + εP(ρ))` with `P′(ρ) = ρ p′(ρ)`.
    RhoPsi,
}

impl ConservativePair {
    pub const ALL: [ConservativePair; 3] = [Self::Mass, Self::Psi, Self::RhoPsi];
}

/// Residuals of the compatibility relations
///
/// ```text
/// ∂f/∂ρ = ∂g/∂ρ cosθ − ∂g/∂θ sinθ εp′(ρ)
/// ∂f/∂θ = ∂g/∂θ cosθ − ∂g/∂ρ ρ sinθ
/// ```
///
/// with all partial derivatives taken by central finite differences. Each
/// residual is scaled by `max(1, |lhs|, |rhs|)`.
pub fn conservative_pair_residual(
    pair: ConservativePair,
    state: &EpsState,
    scaled: &ScaledPressure,
) -> Result<(f64, f64)> {
    let (rho, theta) = (state.rho, state.theta);
    let h_rho = 1e-5 * rho.min(scaled.law.rho_star - rho);
    let h_theta = 1e-5;
    scaled.law.gap(rho + h_rho)?;
    let g = |r: f64, t: f64| -> f64 {
        match pair {
            ConservativePair::Mass => r,
            ConservativePair::Psi => psi_of_angle(t),
            ConservativePair::RhoPsi => r * psi_of_angle(t),
        }
    };
    // Flux without the pressure potential, which is differenced separately.
    let f_angle = |r: f64, t: f64| -> f64 {
        match pair {
            ConservativePair::Mass => r * t.cos(),
            ConservativePair::Psi => phi_of_angle(t),
            ConservativePair::RhoPsi => r * t.cos() * psi_of_angle(t),
        }
    };
    // Difference of the pressure part of f between ρ − h and ρ + h.
    let pressure_increment = match pair {
        ConservativePair::Mass => 0.0,
        ConservativePair::Psi => scaled.pressure(rho + h_rho)? - scaled.pressure(rho - h_rho)?,
        ConservativePair::RhoPsi => {
            let law = scaled.law;
            scaled.epsilon
                * integrate(
                    |u| u * law.p_prime(u).unwrap_or(f64::NAN),
                    rho - h_rho,
                    rho + h_rho,
                    0.0,
                    1e-14,
                )?
        }
    };
    let g_rho = (g(rho + h_rho, theta) - g(rho - h_rho, theta)) / (2.0 * h_rho);
    let g_theta = (g(rho, theta + h_theta) - g(rho, theta - h_theta)) / (2.0 * h_theta);
    let f_rho = (f_angle(rho + h_rho, theta) - f_angle(rho - h_rho, theta) + pressure_increment)
        / (2.0 * h_rho);
    let f_theta = (f_angle(rho, theta + h_theta) - f_angle(rho, theta - h_theta)) / (2.0 * h_theta);
    let (sin, cos) = theta.sin_cos();
    let eps_p1 = scaled.pressure_prime(rho)?;
    let rhs_rho = g_rho * cos - g_theta * sin * eps_p1;
    let rhs_theta = g_theta * cos - g_rho * rho * sin;
    let scaled_residual =
        |lhs: f64, rhs: f64| (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs());
    Ok((
        scaled_residual(f_rho, rhs_rho),
        scaled_residual(f_theta, rhs_theta),
    ))
}

/// Derivative `dθ/dρ = ±χ/ρ` of a rarefaction curve (`+` for Minus).
pub fn rarefaction_slope(
    family: WaveFamily,
    state: &EpsState,
    scaled: &ScaledPressure,
) -> Result<f64> {
    Ok(-family.sign() * scaled.spread(state.rho)? / state.rho)
}
