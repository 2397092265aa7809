use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("{what} has size {size}, the limit is {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("operands are defined over different ground sets")]
    GroundMismatch,

    #[error("table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },

    #[error("value at subset mask {mask} is not finite")]
    NonFinite { mask: u32 },

    #[error("probability for `{label}` is {value}, expected a value in [0, 1]")]
    ProbabilityOutOfRange { label: String, value: String },

    #[error("family is not up-closed: {member} is a member but its superset {superset} is not")]
    NotUpClosed { member: String, superset: String },

    #[error("{0} is not an increasing set function")]
    NotIncreasing(String),

    #[error("{0} takes a negative value")]
    Negative(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("operation requires a symmetric game (identical payoff functions for every supplier)")]
    NotSymmetric,

    #[error("scale factor for supplier `{0}` must be strictly positive")]
    NonPositiveScale(String),

    #[error("conditioning is incomplete or inconsistent: {0}")]
    InvalidConditioning(String),

    #[error("cannot parse `{0}` as a number")]
    ParseNumber(String),

    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: u64, got: u64 },
}
