use thiserror::Error;

use crate::symcore::Partition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("multiplicity of {partition} is not an integer: {value}")]
    NonIntegralMultiplicity { partition: Partition, value: String },

    #[error("multiplicity of {partition} is negative: {value}")]
    NegativeMultiplicity { partition: Partition, value: String },

    #[error("cannot restrict a representation of S_0")]
    RestrictFromZero,

    #[error("cannot pad {partition} to n = {n}: need n >= |λ| + λ1 = {needed}")]
    PadTooSmall {
        partition: Partition,
        n: usize,
        needed: usize,
    },

    #[error("constituent {partition} at n = {n} lies outside Λ_{d}")]
    NotStableAtD {
        partition: Partition,
        n: usize,
        d: usize,
    },

    #[error("cannot instantiate a pattern with onset {onset} at n = {n}")]
    BelowOnset { onset: usize, n: usize },

    #[error("pattern for {ring} degree {degree} with onset {d} fails verification at n = {n}")]
    VerificationFailed {
        ring: String,
        degree: usize,
        d: usize,
        n: usize,
    },

    #[error("pattern is not a non-negative combination of free-module patterns (stuck at {partition})")]
    NotFree { partition: Partition },

    #[error("unknown ring id {0:?}")]
    UnknownRing(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("deformation samples disagree: {0:?}")]
    SampleDisagreement(Vec<(String, usize)>),

    #[error("multimodular reconstruction did not verify after {primes} primes")]
    ReconstructionFailed { primes: usize },

    #[error("malformed partition string {0:?}")]
    ParsePartition(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
