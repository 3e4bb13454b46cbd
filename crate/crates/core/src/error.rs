use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("eigenvalue selection resolved to an empty set")]
    EmptyLambda,
    #[error("dimension {dim} is below the required minimum {min}")]
    DimensionTooSmall { dim: u32, min: u32 },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("negative input for {name}: {value}")]
    NegativeInput { name: &'static str, value: f64 },
    #[error("invalid cap angle {0}: must lie strictly inside (0, pi)")]
    InvalidAngle(f64),
    #[error("solver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("value {0} is not an eigenvalue of the resolved spectrum")]
    NotInSpectrum(f64),
    #[error("quadrature failed to reach tolerance: {0}")]
    QuadratureFailure(String),
    #[error("weighted moment requested on a support touching or crossing t = 0")]
    UnsupportedWeight,
    #[error("zero denominator in quotient")]
    ZeroDenominator,
    #[error("negative radicand {0} in R functional (quadrature accuracy loss)")]
    NegativeRadicand(f64),
    #[error("mode outside the selected eigenvalue set: {0}")]
    SelectionViolation(String),
    #[error("profile does not belong to the boundary class: {0}")]
    BoundaryClassViolation(String),
    #[error("generalized eigensolve failed: {0}")]
    EigensolveFailure(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
