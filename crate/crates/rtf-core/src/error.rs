//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RtfError {
    #[error("inversion of an element that is zero up to precision")]
    InversionOfZero,
    #[error("result has no certain coefficients")]
    PrecisionUnderflow,
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("valuation is not certain")]
    UncertainValuation,
    #[error("elements live over different fields")]
    FieldMismatch,
    #[error("singular element: {0}")]
    SingularElement(String),
    #[error("point lies on the boundary F")]
    PointOnBoundary,
    #[error("unsupported character: {0}")]
    UnsupportedCharacter(String),
    #[error("x must be regular (x != 0, 1)")]
    NonRegularX,
    #[error("support bound violated: {0}")]
    SupportBoundViolated(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("axiom ({0}) fails: {1}")]
    AxiomFailure(char, String),
    #[error("grid is empty")]
    GridEmpty,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, RtfError>;
