use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),

    #[error("unknown space `{0}`")]
    UnknownSpace(String),

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("mismatched operands: {0}")]
    Mismatch(String),

    #[error("index {index} out of range for dimension {dim}")]
    Index { index: usize, dim: usize },

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("element is not unipotent")]
    NotUnipotent,

    #[error("S-degree {degree} exceeds cutoff budget {budget}")]
    CutoffExceeded { degree: usize, budget: usize },

    #[error("Hodge hypothesis violated: {check} in slice {slice}")]
    HodgeHypothesis { check: String, slice: usize },

    #[error("convention bug: {0}")]
    Convention(String),

    #[error("not a Lie homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("certificate `{check}` failed: {detail}")]
    Certificate { check: String, detail: String },

    #[error("degree {degree} outside trustworthy range 0..={top}")]
    OutOfRange { degree: usize, top: usize },

    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn certificate(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Certificate { check: check.into(), detail: detail.into() }
    }

    /// True for failures of mathematical certificates, as opposed to bad input.
    pub fn is_certificate(&self) -> bool {
        matches!(
            self,
            Error::Certificate { .. }
                | Error::Convention(_)
                | Error::HodgeHypothesis { .. }
        )
    }
}
