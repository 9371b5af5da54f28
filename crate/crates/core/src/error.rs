use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("admissibility failure: {0}")]
    Admissibility(String),

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("enumeration of 2^{dimension} codewords exceeds the guard of 2^{guard}")]
    TooLarge { dimension: usize, guard: usize },

    #[error("rows are not linearly independent (rank {rank} < {rows} rows)")]
    NotABasis { rank: usize, rows: usize },

    #[error("degenerate extension: the all-ones word is already in the padded code")]
    DegenerateExtension,

    #[error("Mann bound not applicable: r = {r} <= lambda = {lambda}")]
    BoundNotApplicable { r: usize, lambda: usize },

    #[error("code is not self-dual: {0}")]
    NotSelfDual(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("stage not run: {0}")]
    StageNotRun(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
