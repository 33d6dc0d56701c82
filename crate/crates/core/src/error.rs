use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational number `{0}`")]
    Scalar(String),
    #[error("malformed structure notation at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator index {digit} in entry {entry} is out of range 1..{n}")]
    DigitOutOfRange { entry: usize, digit: usize, n: usize },
    #[error("term `{term}` in entry {entry} violates the triangular form i < j < k")]
    NotTriangular { entry: usize, term: String },
    #[error("structure constants do not satisfy d^2 = 0 (fails on generator {generator})")]
    NotDifferential { generator: usize },
    #[error("dimension {0} unsupported (1..=9 generators)")]
    Dimension(usize),
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade {grade} out of range for dimension {n}")]
    GradeOutOfRange { grade: usize, n: usize },
    #[error("odd dimension {0}: no symplectic forms")]
    OddDimension(usize),
    #[error("form is degenerate (Pfaffian coefficient vanishes)")]
    Degenerate,
    #[error("form is not closed")]
    NotClosed,
    #[error("the Lie algebra admits no symplectic structure")]
    NotSymplectic,
    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
