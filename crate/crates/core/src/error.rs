use thiserror::Error;

/// Errors surfaced by the exact kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("continued fraction prefix must be nonempty")]
    EmptyPrefix,
    #[error("continued fraction element must be >= 1 (got {0})")]
    BadElement(u64),
    #[error("tail element must be >= 2 (got {0})")]
    BadTail(u64),
    #[error("rational must lie in (0,1) and be reduced: {0}")]
    BadRational(String),
    #[error("orbit index {requested} exceeds horizon {horizon}")]
    Horizon { requested: u64, horizon: u64 },
    #[error("index {j} is below the first valid index {first} for this alpha")]
    BelowFirstIndex { j: u64, first: u64 },
    #[error("convergent index {requested} exceeds horizon {horizon}")]
    ConvergentHorizon { requested: usize, horizon: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("proxy denominator too large for the exact sweep engine")]
    ProxyTooLarge,
    #[error("sampler failed to stabilise a CF prefix after retry")]
    PrecisionLoss,
    #[error("invalid spec string: {0}")]
    BadSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
