//! JSON configuration schema. Every command reads an optional JSON object;
//! missing fields take the defaults below, unknown fields are rejected, and
//! angles are in radians.

use congestion::cluster_dynamics::Cluster;
use congestion::godunov::Boundary;
use congestion::pressure_law::{PressureLaw, ScaledPressure};
use congestion::riemann_exact::SignedState;
use congestion::riemann_limit::LimitState;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Pipelines the binary can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Forward and backward wave curves for a list of ε values.
    Curves,
    /// Pressure and scaled pressure on a density grid.
    Pressure,
    /// Exact Riemann solution at finite ε.
    Riemann,
    /// Riemann solution of the ε → 0 limit with interface checks.
    Limit,
    /// Sticky cluster collisions.
    Collide,
    /// Godunov simulation of Riemann initial data.
    Godunov,
    /// ε-sweep comparing finite-ε and limit solutions.
    Convergence,
    /// Seeded invariant suite.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Curves => "curves",
            Command::Pressure => "pressure",
            Command::Riemann => "riemann",
            Command::Limit => "limit",
            Command::Collide => "collide",
            Command::Godunov => "godunov",
            Command::Convergence => "convergence",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LawConfig {
    pub rho_star: f64,
    pub gamma: f64,
}

impl Default for LawConfig {
    fn default() -> Self {
        Self {
            rho_star: 1.0,
            gamma: 2.0,
        }
    }
}

impl LawConfig {
    pub fn law(&self) -> congestion::Result<PressureLaw> {
        PressureLaw::new(self.rho_star, self.gamma)
    }

    pub fn scaled(&self, eps: f64) -> congestion::Result<ScaledPressure> {
        self.law()?.scaled(eps)
    }
}

/// A finite-ε state `(ρ, θ)`; negative angles select the reflected branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub rho: f64,
    pub theta: f64,
}

impl StateConfig {
    pub fn signed(&self) -> SignedState {
        SignedState::new(self.rho, self.theta)
    }
}

/// A limit state; `rho` equal to `rho_star` marks a congested state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitStateConfig {
    pub rho: f64,
    pub theta: f64,
    #[serde(default)]
    pub pbar: f64,
}

impl LimitStateConfig {
    pub fn state(&self, law: &PressureLaw) -> congestion::Result<LimitState> {
        if self.rho == law.rho_star {
            LimitState::congested(self.theta, self.pbar, law)
        } else if self.pbar != 0.0 {
            Err(congestion::Error::InvalidParameter(
                "only congested states (rho = rho_star) may carry a pressure".into(),
            ))
        } else {
            LimitState::uncongested(self.rho, self.theta, law)
        }
    }
}

fn figure_left() -> StateConfig {
    StateConfig {
        rho: 0.8,
        theta: PI / 2.0,
    }
}

fn figure_right() -> StateConfig {
    StateConfig {
        rho: 0.6,
        theta: 2.0 * PI / 3.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurvesConfig {
    pub law: LawConfig,
    pub left: StateConfig,
    pub right: StateConfig,
    pub eps_list: Vec<f64>,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
}

impl Default for CurvesConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            left: figure_left(),
            right: figure_right(),
            eps_list: vec![1.0, 1e-1, 1e-2, 1e-4],
            rho_min: 1e-3,
            rho_max: 0.999,
            points: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PressureConfig {
    pub law: LawConfig,
    pub eps_list: Vec<f64>,
    /// Number of densities; the grid ends at `rho_star·(1 − 10⁻⁶)`.
    pub points: usize,
}

impl Default for PressureConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            eps_list: vec![1.0, 1e-2],
            points: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RiemannConfig {
    pub law: LawConfig,
    pub left: StateConfig,
    pub right: StateConfig,
    pub eps: f64,
    pub xi_min: f64,
    pub xi_max: f64,
    pub samples: usize,
}

impl Default for RiemannConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            left: figure_left(),
            right: figure_right(),
            eps: 1e-2,
            xi_min: -3.0,
            xi_max: 3.0,
            samples: 601,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitConfig {
    pub law: LawConfig,
    pub left: LimitStateConfig,
    pub right: LimitStateConfig,
    pub xi_min: f64,
    pub xi_max: f64,
    pub samples: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            left: LimitStateConfig {
                rho: 0.8,
                theta: PI / 2.0,
                pbar: 0.0,
            },
            right: LimitStateConfig {
                rho: 0.6,
                theta: 2.0 * PI / 3.0,
                pbar: 0.0,
            },
            xi_min: -2.0,
            xi_max: 2.0,
            samples: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub law: LawConfig,
    pub left: LimitStateConfig,
    pub right: LimitStateConfig,
    pub eps_grid: Vec<f64>,
    pub xi_window: (f64, f64),
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        let limit = LimitConfig::default();
        Self {
            law: limit.law,
            left: limit.left,
            right: limit.right,
            eps_grid: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            xi_window: (-2.0, 2.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollideConfig {
    pub law: LawConfig,
    pub clusters: Vec<Cluster>,
    pub horizon: f64,
}

impl Default for CollideConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            clusters: vec![
                Cluster {
                    a: -3.0,
                    b: -1.0,
                    theta: 1.0,
                },
                Cluster {
                    a: 1.0,
                    b: 2.0,
                    theta: PI - 1.0,
                },
                Cluster {
                    a: 4.0,
                    b: 5.0,
                    theta: 2.5,
                },
            ],
            horizon: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GodunovConfig {
    pub law: LawConfig,
    pub eps: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub boundary: Boundary,
    pub x_lo: f64,
    pub x_hi: f64,
    pub cells: usize,
    /// Riemann initial data: `left` for `x < x0`, `right` otherwise.
    pub left: StateConfig,
    pub right: StateConfig,
    pub x0: f64,
    pub snapshot_times: Vec<f64>,
}

impl Default for GodunovConfig {
    fn default() -> Self {
        Self {
            law: LawConfig::default(),
            eps: 1e-2,
            cfl: 0.9,
            t_end: 0.3,
            boundary: Boundary::Outflow,
            x_lo: -1.0,
            x_hi: 1.0,
            cells: 400,
            left: StateConfig {
                rho: 0.5,
                theta: 1.2,
            },
            right: StateConfig {
                rho: 0.6,
                theta: 1.8,
            },
            x0: 0.0,
            snapshot_times: vec![0.1, 0.2],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {}

/// Parameters of one run, after defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", content = "parameters", rename_all = "snake_case")]
pub enum RunConfig {
    Curves(CurvesConfig),
    Pressure(PressureConfig),
    Riemann(RiemannConfig),
    Limit(LimitConfig),
    Collide(CollideConfig),
    Godunov(GodunovConfig),
    Convergence(ConvergenceConfig),
    Verify(VerifyConfig),
}

/// Rejection of a configuration before any solver runs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed configuration JSON: {0}")]
    Parse(String),
    #[error("configuration is for command '{found}' but '{expected}' was requested")]
    CommandMismatch { expected: String, found: String },
}

fn parse_params<T: serde::de::DeserializeOwned + Default>(
    value: Option<serde_json::Value>,
) -> Result<T, ConfigError> {
    match value {
        None => Ok(T::default()),
        Some(v) => serde_json::from_value(v).map_err(|e| ConfigError::Parse(e.to_string())),
    }
}

impl RunConfig {
    /// Builds the configuration of `command` from optional JSON text. The
    /// text must be an object; an optional `"command"` field must match.
    pub fn parse(command: Command, text: Option<&str>) -> Result<Self, ConfigError> {
        let value = match text {
            None => None,
            Some(text) => {
                let mut value: serde_json::Value =
                    serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
                let object = value
                    .as_object_mut()
                    .ok_or_else(|| ConfigError::Parse("top level must be a JSON object".into()))?;
                if let Some(found) = object.remove("command") {
                    let found = found.as_str().unwrap_or_default().to_string();
                    if found != command.name() {
                        return Err(ConfigError::CommandMismatch {
                            expected: command.name().into(),
                            found,
                        });
                    }
                }
                Some(value)
            }
        };
        Ok(match command {
            Command::Curves => RunConfig::Curves(parse_params(value)?),
            Command::Pressure => RunConfig::Pressure(parse_params(value)?),
            Command::Riemann => RunConfig::Riemann(parse_params(value)?),
            Command::Limit => RunConfig::Limit(parse_params(value)?),
            Command::Collide => RunConfig::Collide(parse_params(value)?),
            Command::Godunov => RunConfig::Godunov(parse_params(value)?),
            Command::Convergence => RunConfig::Convergence(parse_params(value)?),
            Command::Verify => RunConfig::Verify(parse_params(value)?),
        })
    }
}
