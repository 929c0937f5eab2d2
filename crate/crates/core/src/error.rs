use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("binary operation `{0}` needs a second operand")]
    MissingOperand(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no rational function of degree <= {max_deg} matches the coefficient table")]
    FitFailed { max_deg: usize },

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("letter `{0}` is not in the alphabet")]
    AlphabetMismatch(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("affine map certification failed for pattern {pattern}: {detail}")]
    AffinenessViolation { pattern: String, detail: String },

    #[error("generators do not generate the group: {0}")]
    GenerationProbe(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

impl Error {
    /// Parse and I/O failures map to exit status 1, everything else to 2.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
