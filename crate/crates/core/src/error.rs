use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unknown Cartan preset `{0}`")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("root closure exceeded {bound} roots; Cartan matrix is not of finite type")]
    NotFiniteType { bound: usize },
    #[error("word mismatch: {0}")]
    WordMismatch(String),
    #[error("moment graph lift failed: {0}")]
    Lift(String),
    #[error("curve class {0} is not effective")]
    NotEffective(String),
    #[error("malformed curve-neighborhood data: {0}")]
    MalformedComponents(String),
    #[error("codimension condition fails: {0}")]
    Codimension(String),
    #[error("unknown export format `{0}`")]
    UnknownFormat(String),
    #[error("quantum grading violated: {0}")]
    Grading(String),
    #[error("unknown count mismatch: expected {expected}, found {found}")]
    UnknownCount { expected: usize, found: usize },
    #[error("inconsistent constraint system: {0}")]
    Inconsistent(String),
    #[error("non-integer forced value: {0}")]
    NonInteger(String),
    #[error("constraint system leaves free parameters {0:?}")]
    MultiParameter(Vec<String>),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("mismatch against reference data: {0}")]
    ReferenceMismatch(String),
    #[error("ring identity failed: {0}")]
    RingIdentity(String),
    #[error("not Fano: {0}")]
    NotFano(String),
    #[error("undecidable at tolerance {0:e}")]
    Undecidable(f64),
}
