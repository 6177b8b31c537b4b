use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix dimension mismatch: {0}")]
    Dimension(String),
    #[error("column {column} of the target is not in the span of the basis")]
    NotInSpan { column: usize },
    #[error("singular matrix")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Failure categories when reading a PD file. Every variant carries the
/// 1-based line number it was detected on (0 when not tied to a line).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: malformed input: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: arc {arc} occurs {count} times (expected exactly 2)")]
    ArcMultiplicity { line: usize, arc: u64, count: usize },
    #[error("line {line}: inconsistent strand tracing: {msg}")]
    Tracing { line: usize, msg: String },
}

impl DiagramError {
    pub fn line(&self) -> usize {
        match self {
            DiagramError::Malformed { line, .. }
            | DiagramError::ArcMultiplicity { line, .. }
            | DiagramError::Tracing { line, .. } => *line,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("generator {0} has no image")]
    MissingGenerator(usize),
    #[error("image of generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("image of generator {generator} is {found}x{found}, expected {expected}x{expected}")]
    WrongSize { generator: usize, expected: usize, found: usize },
    #[error("relator {0} does not evaluate to the identity")]
    RelatorFailed(usize),
    #[error("representations are attached to different presentations")]
    PresentationMismatch,
    #[error("conjugating matrix is singular or has the wrong size")]
    BadConjugator,
    #[error("representation file, line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("no representation in the family has nonvanishing first polynomial")]
    NoNonvanishing,
    #[error("audit precondition failed: {0}")]
    Precondition(String),
}
