use thiserror::Error;

/// Errors raised by the boundary-condition calculus.
///
/// Residuals are carried as `f64` regardless of the scalar type so that the
/// error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("invalid quaternion form (residual {residual:e})")]
    InvalidForm { residual: f64 },
    #[error("parameters are not in the transmitting class (max residual {residual:e})")]
    NotInClass { residual: f64 },
    #[error("invalid four-parameter form (|b1 b4 + b2 b3 - 1| = {residual:e})")]
    InvalidBd { residual: f64 },
    #[error("parameter `{0}` must be nonzero")]
    ZeroParameter(&'static str),
    #[error("value is not unimodular (||z| - 1| = {residual:e})")]
    NotUnimodular { residual: f64 },
    #[error("diagonal unitary has no transmitting boundary condition (|gamma2| = {gamma2:e})")]
    DiagonalInput { gamma2: f64 },
    #[error("boundary-value system is singular")]
    SingularSystem,
    #[error("internal inconsistency: {what} (residual {residual:e})")]
    InternalInconsistency { what: &'static str, residual: f64 },
    #[error("point {x} with step {h} is not strictly inside the island")]
    OutsideIsland { x: f64, h: f64 },
    #[error("quadrature error estimate {estimate:e} exceeds tolerance")]
    QuadratureFailure { estimate: f64 },
    #[error("energy {energy} is not above the mass gap {mass}")]
    BelowGap { energy: f64, mass: f64 },
    #[error("scattering system is singular at E = {energy}")]
    ResonanceSingular { energy: f64 },
    #[error("invalid energy grid: {0}")]
    InvalidGrid(String),
    #[error("mass must be finite and non-negative, got {0}")]
    InvalidMass(f64),
    #[error("non-finite input")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
