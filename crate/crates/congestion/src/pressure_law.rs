//! The singular congestion pressure, its ε-scaling, and the angle potentials
//! that appear in the conservative form of the orientation equation.
//!
//! The pressure is `p(ρ) = (1/ρ − 1/ρ*)^(−γ)`. Writing `s = 1/ρ − 1/ρ*` for
//! the *gap* variable, `p = s^(−γ)` and all derivatives follow from
//! `ds/dρ = −1/ρ²`.
//!
//! The potentials are `Ψ(u) = atanh(u)` and `Φ(u) = −½·ln(1 − u²)` for
//! `u = cosθ`; as functions of the angle they equal `−ln tan(θ/2)` and
//! `−ln sinθ`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative distance to the maximal density below which the pressure is
/// treated as singular.
pub const SINGULARITY_GUARD: f64 = 1e-13;

/// Power-law congestion pressure `p(ρ) = (1/ρ − 1/ρ*)^(−γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureLaw {
    /// Maximal (congestion) density.
    pub rho_star: f64,
    /// Exponent of the singularity.
    pub gamma: f64,
}

impl PressureLaw {
    /// Validates `rho_star > 0` and `gamma ≥ 1`.
    pub fn new(rho_star: f64, gamma: f64) -> Result<Self> {
        if !(rho_star > 0.0 && rho_star.is_finite()) {
            return Err(Error::Domain {
                quantity: "rho_star",
                value: rho_star,
                detail: "must be positive and finite",
            });
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::Domain {
                quantity: "gamma",
                value: gamma,
                detail: "must be at least 1",
            });
        }
        Ok(Self { rho_star, gamma })
    }

    /// Checks `0 < rho < rho_star·(1 − 10⁻¹³)` and returns the gap `1/ρ − 1/ρ*`.
    pub fn gap(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain {
                quantity: "rho",
                value: rho,
                detail: "density must be positive",
            });
        }
        if !(rho < self.rho_star * (1.0 - SINGULARITY_GUARD)) {
            return Err(Error::Domain {
                quantity: "rho",
                value: rho,
                detail: "density must stay below the maximal density",
            });
        }
        Ok(1.0 / rho - 1.0 / self.rho_star)
    }

    /// Density corresponding to a gap value `s > 0`.
    pub fn rho_from_gap(&self, gap: f64) -> f64 {
        1.0 / (gap + 1.0 / self.rho_star)
    }

    /// `p(ρ)`.
    pub fn p(&self, rho: f64) -> Result<f64> {
        Ok(self.gap(rho)?.powf(-self.gamma))
    }

    /// `p′(ρ) = γ·s^(−γ−1)/ρ²`.
    pub fn p_prime(&self, rho: f64) -> Result<f64> {
        let s = self.gap(rho)?;
        Ok(self.gamma * s.powf(-self.gamma - 1.0) / (rho * rho))
    }

    /// `p″(ρ) = γ·s^(−γ−2)·ρ^(−4)·((γ + 1) − 2sρ)`.
    pub fn p_second(&self, rho: f64) -> Result<f64> {
        let s = self.gap(rho)?;
        let g = self.gamma;
        Ok(g * s.powf(-g - 2.0) * ((g + 1.0) - 2.0 * s * rho) / rho.powi(4))
    }

    /// Attaches a perturbation parameter ε > 0.
    pub fn scaled(self, epsilon: f64) -> Result<ScaledPressure> {
        ScaledPressure::new(self, epsilon)
    }
}

/// The ε-scaled pressure `ε·p(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPressure {
    pub law: PressureLaw,
    pub epsilon: f64,
}

impl ScaledPressure {
    /// Validates `epsilon > 0`.
    pub fn new(law: PressureLaw, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain {
                quantity: "epsilon",
                value: epsilon,
                detail: "perturbation parameter must be positive",
            });
        }
        Ok(Self { law, epsilon })
    }

    /// `ε·p(ρ)`.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        Ok(self.epsilon * self.law.p(rho)?)
    }

    /// `ε·p′(ρ)`.
    pub fn pressure_prime(&self, rho: f64) -> Result<f64> {
        Ok(self.epsilon * self.law.p_prime(rho)?)
    }

    /// `ε·p″(ρ)`.
    pub fn pressure_second(&self, rho: f64) -> Result<f64> {
        Ok(self.epsilon * self.law.p_second(rho)?)
    }

    /// Characteristic spread `√(ε·p′(ρ)·ρ)`, zero at vacuum.
    pub fn spread(&self, rho: f64) -> Result<f64> {
        if rho == 0.0 {
            return Ok(0.0);
        }
        Ok((self.pressure_prime(rho)? * rho).sqrt())
    }

    /// The unique density with `ε·p(ρ) = pbar`:
    /// `1/ρ = 1/ρ* + (ε/pbar)^(1/γ)`.
    pub fn p_inverse(&self, pbar: f64) -> Result<f64> {
        if !(pbar > 0.0 && pbar.is_finite()) {
            return Err(Error::Domain {
                quantity: "pbar",
                value: pbar,
                detail: "pressure must be positive and finite",
            });
        }
        let gap = (self.epsilon / pbar).powf(1.0 / self.law.gamma);
        Ok(self.law.rho_from_gap(gap))
    }
}

fn check_open_unit(u: f64) -> Result<()> {
    if u > -1.0 && u < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity: "cosine",
            value: u,
            detail: "potentials are singular at ±1",
        })
    }
}

/// `Ψ(u) = ½·ln((1 + u)/(1 − u))` for `u ∈ (−1, 1)`.
pub fn psi(u: f64) -> Result<f64> {
    check_open_unit(u)?;
    Ok(u.atanh())
}

/// `Φ(u) = −½·ln(1 − u²)` for `u ∈ (−1, 1)`.
pub fn phi(u: f64) -> Result<f64> {
    check_open_unit(u)?;
    Ok(-0.5 * (-u * u).ln_1p())
}

/// Exact inverse of [`psi`]: `tanh(v)`.
pub fn psi_inverse(v: f64) -> f64 {
    v.tanh()
}

/// `f_u(v) = Φ(v) − u·Ψ(v)`, a convex function of `v` minimized at `v = u`.
pub fn f_u(u: f64, v: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            quantity: "u",
            value: u,
            detail: "must lie in [-1, 1]",
        });
    }
    Ok(phi(v)? - u * psi(v)?)
}

/// Smallest admissible distance of an angle from 0 and π.
pub const ANGLE_GUARD: f64 = 1e-9;

/// Rejects angles within [`ANGLE_GUARD`] of 0 or π (or outside (0, π)).
pub fn check_angle(theta: f64) -> Result<()> {
    if (ANGLE_GUARD..=std::f64::consts::PI - ANGLE_GUARD).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Domain {
            quantity: "theta",
            value: theta,
            detail: "angle must lie in (0, pi) away from the endpoints",
        })
    }
}

/// `Ψ(cosθ) = −ln tan(θ/2)`, accurate near θ = 0 and θ = π.
pub fn psi_of_angle(theta: f64) -> f64 {
    -(0.5 * theta).tan().ln()
}

/// `Φ(cosθ) = −ln sinθ`.
pub fn phi_of_angle(theta: f64) -> f64 {
    -theta.sin().ln()
}

/// Angle in (0, π) whose `Ψ(cosθ)` equals `w`: `θ = 2·atan(e^(−w))`.
pub fn angle_of_psi(w: f64) -> f64 {
    2.0 * (-w).exp().atan()
}

/// `d/dθ Ψ(cosθ) = −1/sinθ`.
pub fn dpsi_dtheta(theta: f64) -> f64 {
    -1.0 / theta.sin()
}

/// `d/dθ Φ(cosθ) = −cosθ/sinθ`.
pub fn dphi_dtheta(theta: f64) -> f64 {
    -theta.cos() / theta.sin()
}
