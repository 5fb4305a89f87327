use num_bigint::BigInt;
use thiserror::Error;

/// Everything that can go wrong across the library.
///
/// Input validation failures ([`Error::EvenAlpha`], [`Error::AlphaTooSmall`],
/// [`Error::NotCoprime`], [`Error::BetaOutOfRange`]) are distinguished from
/// resource ceilings and from verification failures so the CLI can map them to
/// distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expansion is empty")]
    EmptyExpansion,

    #[error("expansion entry at position {position} is zero")]
    ZeroEntry { position: usize },

    #[error("division by zero while evaluating entry at position {position}")]
    DivisionByZero { position: usize },

    #[error("entry {value} at position {position} has magnitude less than 2")]
    EntryTooSmall { position: usize, value: BigInt },

    #[error("positive expansion entry {value} at position {position} is not positive")]
    NonPositiveEntry { position: usize, value: BigInt },

    #[error("positive expansion must end with an entry of at least 2, got {value}")]
    TrailingOne { value: BigInt },

    #[error("alpha must be odd, got {alpha}")]
    EvenAlpha { alpha: BigInt },

    #[error("alpha must be at least 3, got {alpha}")]
    AlphaTooSmall { alpha: BigInt },

    #[error("beta must be nonzero and coprime to alpha, got K({alpha}, {beta})")]
    NotCoprime { alpha: BigInt, beta: BigInt },

    #[error("beta must satisfy 0 < beta < alpha/2, got K({alpha}, {beta})")]
    BetaOutOfRange { alpha: BigInt, beta: BigInt },

    #[error("sub-tuple indices must be strictly increasing and within 1..={ambient}")]
    InvalidSubTuple { ambient: usize },

    #[error("sub-tuple {subtuple} is not allowable for {expansion}")]
    NotAllowable { subtuple: String, expansion: String },

    #[error("{expansion} is not a continued-fraction expansion of K({alpha}, {beta})")]
    NotAnExpansion {
        alpha: BigInt,
        beta: BigInt,
        expansion: String,
    },

    #[error("allowable sub-tuple count {count} exceeds the enumeration ceiling {ceiling}")]
    EnumerationCeiling { count: u128, ceiling: u128 },

    #[error("sub-tuple count overflowed the 128-bit counter")]
    CountOverflow,

    #[error("expansion is too large to materialize")]
    TooLargeToMaterialize,

    #[error("quotient sum {sum} exceeds the dense signed-sum ceiling {ceiling}")]
    SumRangeTooLarge { sum: BigInt, ceiling: u64 },

    #[error("verification failed for K({alpha}, {beta}): {detail}")]
    VerificationFailed {
        alpha: BigInt,
        beta: BigInt,
        detail: String,
    },

    #[error("census spot check failed for K({alpha}, {beta}): {detail}")]
    SpotCheckFailed {
        alpha: BigInt,
        beta: BigInt,
        detail: String,
    },

    #[error("census range is empty or inverted: {min_alpha}..={max_alpha}")]
    BadCensusRange { min_alpha: u64, max_alpha: u64 },

    #[error("I/O error at census record {index}: {source}")]
    SinkIo {
        index: u64,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by malformed user input rather than by
    /// resource ceilings or internal verification.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::EvenAlpha { .. }
                | Error::AlphaTooSmall { .. }
                | Error::NotCoprime { .. }
                | Error::BetaOutOfRange { .. }
                | Error::BadCensusRange { .. }
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::SinkIo { .. } | Error::Io(_))
    }
}
