use thiserror::Error;

/// Failures raised while parsing or evaluating an [`Expression`](crate::Expression).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error in `{node}` at t = {at}: {reason}")]
    Domain {
        node: String,
        at: f64,
        reason: String,
    },
}

/// Errors surfaced by the fractional operators and the analyses built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("assumption violated: f(a) must be 0, found f({a}) = {value:e}")]
    NonzeroBase { a: f64, value: f64 },
    #[error("no fractional mean value found: {0}")]
    EmptyLambda(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("quadrature did not reach tolerance: {0}")]
    Quadrature(String),
    #[error("root solver failed: {0}")]
    Solver(String),
    #[error("function does not provide a derivative")]
    NoDerivative,
}

pub type Result<T, E = FracError> = std::result::Result<T, E>;
