use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("boost speed {0} is not strictly between -1 and 1")]
    UnphysicalSpeed(f64),
    #[error("boost direction is not a unit vector (norm {0})")]
    NotUnitDirection(f64),
    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("|k| = {norm} does not clear the mass shell m = {mass} by the required margin")]
    BelowMassShell { norm: f64, mass: f64 },
    #[error("boost carries the mode to (near) zero energy: (Λk)⁰ = {energy:e}")]
    DegenerateBoost { energy: f64 },
    #[error("wave vector component {component} = {value} is not a multiple of 2π/L")]
    IncommensurateMode { component: usize, value: f64 },
    #[error("grid of {grid_points} points per axis cannot resolve mode index {max_index}")]
    InsufficientGrid { grid_points: usize, max_index: i64 },
    #[error("wave packet must contain at least one term")]
    EmptyPacket,
    #[error("creation would exceed the truncation N_max = {n_max}")]
    TruncationOverflow { n_max: u32 },
    #[error("propagator is singular at t = {t}, r = {r}")]
    SingularPoint { t: f64, r: f64 },
    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    NonConvergent { estimate: f64, tolerance: f64 },
    #[error("leg {index} is off shell: p·p = {virtuality}, expected {expected}")]
    OffShellLeg { index: usize, virtuality: f64, expected: f64 },
    #[error("invalid process: {0}")]
    InvalidProcess(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
