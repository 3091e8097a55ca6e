//! Error type shared by every solver in the crate.

use thiserror::Error;

/// Failures reported by the constitutive functions, wave-curve machinery,
/// Riemann solvers, cluster dynamics and the finite-volume scheme.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("{quantity} = {value} is outside the admissible domain ({detail})")]
    Domain {
        quantity: &'static str,
        value: f64,
        detail: &'static str,
    },

    /// A bracketed root search found no sign change.
    #[error("no root of {what} in the bracket [{lo}, {hi}]")]
    NoRoot {
        what: &'static str,
        lo: f64,
        hi: f64,
    },

    /// An iterative method exhausted its budget before meeting tolerance.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature failed to reach tolerance: estimated error {estimate:e} after {intervals} subintervals")]
    Quadrature { estimate: f64, intervals: usize },

    /// A shock speed was requested for two states of (numerically) equal density.
    #[error("densities {rho_left} and {rho_right} are too close to define a shock speed")]
    DegenerateJump { rho_left: f64, rho_right: f64 },

    /// Two states claimed to form a shock violate the jump relations.
    #[error("states are not connected by a shock: jump-relation residual {residual:e}")]
    NotAShock { residual: f64 },

    /// A Riemann problem was posed with a vacuum end state.
    #[error("Riemann data must be non-vacuum states")]
    VacuumInput,

    /// The wave curves could not be intersected inside the physical domain.
    #[error("wave curves do not intersect in the admissible domain: {reason}")]
    NoIntersection { reason: String },

    /// The perturbation parameter is too large for the wave-curve construction.
    #[error("perturbation parameter {epsilon} too large: {reason}")]
    EpsilonTooLarge { epsilon: f64, reason: String },

    /// Clusters asked to merge do not touch.
    #[error("clusters do not touch at the collision time: gap {gap:e}")]
    Geometry { gap: f64 },

    /// A finite-volume update pushed a cell to the maximal density.
    #[error("cell {cell} reached congestion (rho = {rho})")]
    CongestionBreach { cell: usize, rho: f64 },

    /// A finite-volume update emptied a cell.
    #[error("cell {cell} reached vacuum (rho = {rho})")]
    VacuumBreach { cell: usize, rho: f64 },

    /// A grid or state list was empty or too small.
    #[error("grid must contain at least two cells")]
    EmptyGrid,

    /// A limit discontinuity matches none of the admissible interface patterns.
    #[error("discontinuity {index} between {left} and {right} matches no interface pattern")]
    UnclassifiedInterface {
        index: usize,
        left: &'static str,
        right: &'static str,
    },

    /// Invalid user-supplied parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable snake_case tag of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::NoRoot { .. } => "no_root",
            Error::Convergence { .. } => "convergence",
            Error::Quadrature { .. } => "quadrature",
            Error::DegenerateJump { .. } => "degenerate_jump",
            Error::NotAShock { .. } => "not_a_shock",
            Error::VacuumInput => "vacuum_input",
            Error::NoIntersection { .. } => "no_intersection",
            Error::EpsilonTooLarge { .. } => "epsilon_too_large",
            Error::Geometry { .. } => "geometry",
            Error::CongestionBreach { .. } => "congestion_breach",
            Error::VacuumBreach { .. } => "vacuum_breach",
            Error::EmptyGrid => "empty_grid",
            Error::UnclassifiedInterface { .. } => "unclassified_interface",
            Error::InvalidParameter(_) => "invalid_parameter",
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
