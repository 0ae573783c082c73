use thiserror::Error;

/// Errors raised across the workbench.
///
/// Mathematical failures (a claimed identity that does not hold) are reported
/// through result values; this type covers malformed input and contract
/// violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate matrix entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("composite of differentials is nonzero at degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("degree {degree} is not within or adjacent to [{lo}, {hi}]")]
    DegreeOutOfRange { degree: i64, lo: i64, hi: i64 },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("window underflow: {0}")]
    WindowUnderflow(String),
    #[error("result did not stabilize: {0}")]
    Unstable(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("symbolic only: {0}")]
    SymbolicOnly(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("infeasible integer system: {0}")]
    Infeasible(String),
    #[error("certificate failure: {0}")]
    Certificate(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("inconsistent codimension: {0}")]
    Codimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
