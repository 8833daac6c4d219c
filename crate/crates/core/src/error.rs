use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ANF parse error at byte {pos}: {msg}")]
    AnfParse { pos: usize, msg: String },

    #[error("variable x_{index} out of range for a function of {n} variables")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("unsupported variable count {0} (truth tables hold at most 20 variables)")]
    TooManyVariables(usize),

    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),

    #[error("invalid register: {0}")]
    InvalidRegister(String),

    #[error("register {label} has no concrete feedback function")]
    MissingFeedback { label: usize },

    #[error("period of register {label} (length {length}) is not declared and too long to compute")]
    PeriodUnavailable { label: usize, length: u32 },

    #[error("invalid cipher spec: {0}")]
    InvalidCipher(String),

    #[error("keystream limit exceeded: requested position {requested} but the cipher allows at most {limit}")]
    KeystreamLimit { requested: u128, limit: u128 },

    #[error("key/IV length {total} is shorter than the longest register ({max_len})")]
    KeyTooShort { total: usize, max_len: u32 },

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("register {label} is in the approximation but is neither cancelled, decimated nor a target")]
    UncancelledRegister { label: usize },

    #[error("keystream exhausted: needed {needed} bits, have {available}")]
    KeystreamExhausted { needed: u128, available: u128 },

    #[error("insufficient samples: needed {needed}, have {available}")]
    InsufficientSamples { needed: u128, available: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
