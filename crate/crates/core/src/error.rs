use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expected 16 atoms, got {0}")]
    WrongAtomCount(usize),

    #[error("atom {atom} is negative ({value})")]
    NegativeAtom { atom: String, value: String },

    #[error("atoms sum to {sum}, not 1")]
    NotNormalized { sum: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("point lies outside the model: {0}")]
    OutsideModel(String),

    #[error("quadratic has negative discriminant")]
    NegativeDiscriminant,

    #[error("quadratic has vanishing leading coefficient")]
    DegenerateQuadratic,

    #[error("optimizer start point lies outside the region")]
    StartOutsideRegion,

    #[error("no circuit gives a nonzero coefficient to the Ingleton column")]
    NoIngletonColumn,

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("marginal cell is not a non-negative affine form near 0: {0}")]
    NonAffineAtom(String),

    #[error("the ε = 0 limit violates assumptions: {}", .0.join(", "))]
    LimitViolatesAssumptions(Vec<String>),

    #[error("no certificate within truncation order {0}")]
    Inconclusive(usize),

    #[error("inconsistent database: {0}")]
    InconsistentDb(String),

    #[error("invalid counterexample record: {0}")]
    InvalidRecord(String),
}

pub type Result<T> = std::result::Result<T, Error>;
