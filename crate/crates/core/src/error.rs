use thiserror::Error;

/// Errors reported by every fallible operation of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("operation `{op}` takes {expected} arguments, got {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("variable x{0} is not assigned")]
    UnassignedVariable(usize),
    #[error("element {elem} is out of range for a universe of size {size}")]
    OutOfRange { elem: u64, size: usize },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("empty subset")]
    EmptySubset,
    #[error("unbound placeholder `{0}`")]
    UnboundPlaceholder(String),
    #[error("unbound atom `{0}`")]
    UnboundAtom(String),
    #[error("relation size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}
