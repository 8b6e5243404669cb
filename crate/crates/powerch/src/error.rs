use thiserror::Error;

/// Errors reported by validated constructors and verification entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bucket count {0} out of range 1..=2^32")]
    BucketCountOutOfRange(u64),
    #[error("{0} is not a power of two in 1..=2^32")]
    NotPowerOfTwo(u64),
    #[error("start bucket {start} must be below the bucket count {buckets}")]
    StartBucketOutOfRange { start: u64, buckets: u64 },
    #[error("bucket {bucket} outside the range of {buckets} buckets")]
    BucketOutOfRange { bucket: u64, buckets: u64 },
    #[error("{got} samples is too few for {cells} cells; need at least {required}")]
    TooFewSamples { got: u64, required: u64, cells: u64 },
    #[error("fallback set must be non-empty when buckets can be unavailable")]
    MissingFallback,
    #[error("fallback bucket {0} is marked unavailable")]
    UnavailableFallback(u64),
    #[error("probe budget exhausted and no fallback buckets are reserved")]
    NoFallback,
    #[error("shed fraction {0} must lie in [0, 1)")]
    InvalidShedFraction(f64),
    #[error("bucket count {0} is a power of two; the weighted stage is never reached")]
    WeightedStageUnreachable(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
