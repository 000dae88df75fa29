use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole of the gamma function at {0}")]
    Pole(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("step size underflow at r = {r}")]
    StepUnderflow { r: f64 },
    #[error("bracketing failure: {0}")]
    Bracketing(String),
    #[error("insufficient data: need at least {need}, got {got}")]
    InsufficientData { need: usize, got: usize },
    #[error("truncation sensitivity: doubling the cutoff changed the result by {change:e}")]
    CutoffSensitivity { change: f64 },
    #[error("phase unwrap ambiguity: |delta| = {0} with no tracking path")]
    PhaseAmbiguity(f64),
    #[error("spacing degeneracy at index {0}")]
    SpacingDegeneracy(usize),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
