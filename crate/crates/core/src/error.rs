use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate circle: radius is zero")]
    DegenerateCircle,
    #[error("line normal is not a unit vector")]
    NonUnitNormal,
    #[error("not a circle row: w1^2 + w2^2 - bbar*b = {0}, expected 1")]
    NotACircleRow(String),
    #[error("not a Descartes configuration: {0}")]
    NotDescartes(String),
    #[error("invalid orientation sum: curvatures sum to zero")]
    InvalidOrientationSum,
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("invalid curvature-center matrix: {0}")]
    InvalidCcm(String),
    #[error("tangency at infinity or parallel lines")]
    TangencyAtInfinity,
    #[error("depth {requested} exceeds cap {cap} (set APOLLONIAN_DEPTH_CAP to raise it)")]
    DepthCapExceeded { requested: usize, cap: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("numeric instability: {0}")]
    NumericInstability(String),
    #[error("dilation factor is zero")]
    ZeroDilation,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("integrality violated at word {0}")]
    IntegralityViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
