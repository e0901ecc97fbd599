use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for a group of order {order}")]
    InvalidElement { index: usize, order: usize },

    #[error("invalid group spec: {0}")]
    InvalidGroup(String),

    #[error("modulus {modulus:?} is not irreducible over Z_{p}")]
    NotIrreducible { p: usize, modulus: Vec<usize> },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("duplicate codeword at rows {first} and {second}")]
    DuplicateCodeword { first: usize, second: usize },

    #[error("multiplier {0} is not admissible: both it and it minus one must be invertible")]
    MultiplierNotAdmissible(String),

    #[error("code file line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} needs {work} units of work, above the cap of {cap}")]
    Infeasible {
        what: String,
        work: String,
        cap: String,
    },

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn infeasible(
        what: impl Into<String>,
        work: impl std::fmt::Display,
        cap: impl std::fmt::Display,
    ) -> Self {
        Error::Infeasible {
            what: what.into(),
            work: work.to_string(),
            cap: cap.to_string(),
        }
    }

    /// Whether the error is a refusal because a configured work cap was exceeded.
    pub fn is_feasibility(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}
