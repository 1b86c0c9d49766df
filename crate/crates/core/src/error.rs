use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("AX = C has no solution: R(C) is not contained in R(A) (residual {residual:e})")]
    NotSolvable { residual: f64 },

    #[error("X does not solve AX = C (residual {residual:e})")]
    NotASolution { residual: f64 },

    #[error("AX = C has no Hermitian solution: {failed_condition}")]
    NotSolvableHermitian { failed_condition: String },

    #[error("AX = C has no positive solution: {failed_condition}")]
    NotSolvablePositive { failed_condition: String },

    #[error("parameter Y must be Hermitian (defect {defect:e})")]
    ParameterNotHermitian { defect: f64 },

    #[error("parameter Z must be positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    ParameterNotPsd { min_eigenvalue: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("P(t) + Q(t) is singular at t = 0")]
    SingularAtZero,

    #[error("t = {0} lies outside [0, 1]")]
    OutOfDomain(f64),

    #[error("epsilon must lie strictly inside (0, 1), got {0}")]
    BadEpsilon(f64),

    #[error("grid needs at least {min} points, got {got}")]
    BadGridSize { got: usize, min: usize },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid trial spec: {0}")]
    InvalidTrialSpec(String),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}
