use thiserror::Error;

/// Errors produced by the norm, bound and criterion routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A result dimension would exceed the configured size cap.
    #[error("size error: {0}")]
    Size(String),

    /// A parameter (usually `k`) is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The input is degenerate for the requested operation (zero vector, empty spectrum).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An input precondition does not hold (non-Hermitian, not a density matrix, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An iterative kernel (SVD, eigensolver, LP) failed.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The decomposition LP has no feasible point with the sampled generators.
    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    /// True for failures of the numerical kernels, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_) | Error::Infeasible(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
