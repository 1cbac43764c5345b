use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("parameter {name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("exponent n = {0} exceeds the supported maximum")]
    ExponentTooLarge(u32),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("output alphabet of size {size} exceeds the cap of {cap} symbols")]
    AlphabetCap { size: usize, cap: usize },

    #[error("observation symbol {symbol} not in the channel alphabet of size {alphabet}")]
    AlphabetMismatch { symbol: usize, alphabet: usize },

    #[error("observation symbol {symbol} has zero probability under both inputs")]
    InvalidObservation { symbol: usize },

    #[error("likelihoods vanish for both values of u_{index}; observation inconsistent with frozen values")]
    Inconsistent { index: usize },

    #[error("channel is not symmetric; Monte Carlo estimator requires a symmetric channel")]
    NotSymmetric,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed payload: {0}")]
    Payload(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
