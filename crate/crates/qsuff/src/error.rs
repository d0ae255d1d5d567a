use thiserror::Error;

/// Failure modes shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed request: mismatched dimensions, out-of-range parameters.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix fails the structural requirements of the operation
    /// (not Hermitian, not a density matrix, not a valid test operator).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A scalar function was evaluated at an eigenvalue outside its domain.
    #[error("scalar function undefined at eigenvalue {eigenvalue}")]
    Domain { eigenvalue: f64 },

    /// A requested object would exceed the configured dimension cap.
    #[error("resource limit: requested dimension {requested} exceeds cap {cap}")]
    ResourceLimit { requested: usize, cap: usize },

    /// The *-algebra closure failed to stabilize. The linear dimension grows
    /// strictly every round and is bounded by dim^2, so hitting this means a
    /// numerical rank decision oscillated.
    #[error("algebra closure did not stabilize after {iterations} iterations")]
    ClosureDiverged { iterations: usize },

    /// A derived quantity (typically a restricted state) lost enough
    /// precision that continuing would be dishonest.
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// Two computations that are provably equivalent disagreed at the working
    /// tolerance. Never resolved silently.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// A problem file could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end: 2 for parse
    /// errors, 3 for invalid states or algebra failures, 4 for resource
    /// limits, 5 for internal inconsistencies.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::InvalidInput(_)
            | Error::InvalidState(_)
            | Error::Domain { .. }
            | Error::ClosureDiverged { .. }
            | Error::NumericalDegeneracy(_) => 3,
            Error::ResourceLimit { .. } => 4,
            Error::InternalInconsistency(_) => 5,
        }
    }
}
