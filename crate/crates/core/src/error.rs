use thiserror::Error;

/// Errors raised by constructions and checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size guard: {what} would have {size} elements (limit {limit})")]
    SizeGuard { what: String, size: u128, limit: usize },

    #[error("domain mismatch: {0}")]
    Mismatch(String),

    #[error("unknown element `{token}` in set `{set}`")]
    UnknownElement { token: String, set: String },

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("law violated: {0}")]
    LawViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn law(msg: impl Into<String>) -> Self {
        Error::LawViolation(msg.into())
    }

    pub fn is_size_guard(&self) -> bool {
        matches!(self, Error::SizeGuard { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
