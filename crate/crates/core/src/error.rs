use thiserror::Error;

/// Errors reported by the library. Every variant is a domain error; usage
/// errors only exist at the CLI layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("unsupported base {0}: constructions are only available for prime bases")]
    UnsupportedBase(u64),

    #[error("no (0,{m},{d})-net in base {base} exists: a net cannot exist if m≥2 and d≥b+2")]
    NetCannotExist { base: u64, m: u32, d: usize },

    #[error("numerical precision: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
