use thiserror::Error;

/// Errors surfaced by the computational kernel.
///
/// `TheoremViolation` is special: it means a statement that is a theorem for
/// the inputs at hand failed to verify, which indicates an implementation bug
/// rather than bad input.  The harness maps it to a distinct exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("group too large: closure exceeded bound of {bound} elements")]
    GroupTooLarge { bound: usize },

    #[error("lattice too large: subgroup order {order} exceeds bound {bound}")]
    LatticeTooLarge { order: u64, bound: u64 },

    #[error("complex too large: {count} strings in degree {degree} exceeds bound {bound}")]
    ComplexTooLarge {
        degree: usize,
        count: usize,
        bound: usize,
    },

    #[error("S too large for Aut enumeration: |S| = {order} exceeds bound {bound}")]
    AutBoundExceeded { order: u64, bound: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not a complex: composite of consecutive maps is nonzero")]
    NotAComplex,

    #[error("not an interval: {0}")]
    NotAnInterval(String),

    #[error("THEOREM VIOLATION: {0}")]
    TheoremViolation(String),

    #[error("unknown experiment id: {0}")]
    UnknownExperiment(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn violation(msg: impl Into<String>) -> Self {
        Error::TheoremViolation(msg.into())
    }

    /// Exit code the CLI reports for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TheoremViolation(_) => 2,
            Error::GroupTooLarge { .. }
            | Error::LatticeTooLarge { .. }
            | Error::ComplexTooLarge { .. }
            | Error::AutBoundExceeded { .. } => 3,
            _ => 1,
        }
    }
}
