use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition does not hold for the given parameters.
    #[error("precondition not satisfied: {0}")]
    Precondition(String),

    /// The parameters fall outside the regime in which the formula is valid.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A dense construction would exceed the configured size cap.
    #[error("resource cap exceeded: requested dimension {requested} > cap {cap}")]
    ResourceCap { requested: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Precondition(_) | Error::UnsupportedRegime(_) => 2,
            Error::ResourceCap { .. } => 3,
        }
    }
}
