use thiserror::Error;

/// Errors produced by solvers, oracles and the benchmark harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("query budget of {budget} evaluations exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("expected a point of dimension {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("no queries have been served yet")]
    NoQueriesYet,
    #[error("gradient vector is zero")]
    ZeroGradient,
    #[error("matrix is singular or not positive definite")]
    SingularH,
    #[error("invalid constants: {0}")]
    InvalidConstants(String),
    #[error("nonpositive curvature estimate h_r = {0}")]
    NonpositiveCurvature(f64),
    #[error("curvature estimate is zero")]
    ZeroCurvature,
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("invalid targets: f0 = {f0} must exceed f_star = {f_star}")]
    InvalidTargets { f0: f64, f_star: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
