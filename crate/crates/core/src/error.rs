use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The Weierstrass model has zero discriminant.
    #[error("singular model: discriminant is zero")]
    SingularModel,
    /// The computation would need a larger field or degree than supported.
    #[error("capability exceeded: {0}")]
    Capability(String),
    /// A series was not computed to enough precision.
    #[error("insufficient precision: {0}")]
    Precision(String),
    /// A documented precondition was not met by the caller.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Caller-supplied data failed validation.
    #[error("invalid input: {0}")]
    Input(String),
    /// Inconsistent tabulated data (e.g. a Kodaira type / Tamagawa pair).
    #[error("data error: {0}")]
    Data(String),
    /// The requested case is deliberately not handled.
    #[error("out of scope: {0}")]
    OutOfScope(String),
    /// An internal invariant failed; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
