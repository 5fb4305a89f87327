//! Exact continued-fraction machinery for 2-bridge knots: every expansion
//! with quotients of magnitude at least 2, every boundary slope, and
//! repeated-slope detection, over arbitrary-precision rationals.
//!
//! The pipeline, bottom to top:
//!
//! - [`cf`]: rationals, knot normalization, the unique positive expansion
//!   (Euclid) and the unique all-even expansion.
//! - [`subtuple`]: allowable sub-tuples of the positive expansion, the
//!   `M_I` construction that realizes every expansion, its inverse, duals.
//! - [`slope`]: boundary slopes by direct sign counting and by the
//!   signed-sum shortcut; collision reports.
//! - [`oracle`]: independent brute-force enumeration used as a referee.
//! - [`census`]: range-scale runs on a counting DP with deterministic
//!   output and sampled oracle spot checks.
//! - [`verify`]: the per-knot battery tying all of the above together.
//!
//! ```
//! use num_bigint::BigInt;
//! use twobridge::{normalize_knot, knot_report, ReportMode};
//!
//! let knot = normalize_knot(&BigInt::from(31), &BigInt::from(12)).unwrap();
//! let report = knot_report(&knot, ReportMode::Fast).unwrap();
//! assert_eq!(report.entries.len(), 8);
//! assert_eq!(report.collisions.len(), 2); // slopes 0 and 4 each repeat
//! ```

pub mod census;
pub mod cf;
pub mod error;
pub mod oracle;
pub mod slope;
pub mod subtuple;
pub mod verify;

pub use census::{
    canonical_representatives, collision_dp, run_census, CensusConfig, CensusFormat,
    CensusRecord, CensusSummary, SignedSumHistogram, CSV_HEADER, DP_SUM_CEILING,
};
pub use cf::{
    euclid_expansion, evaluate, evaluate_with_shift, even_expansion, fold_knot,
    is_knot_expansion, normalize_knot, ExpansionValue, Fraction, GeneralExpansion, KnotParams,
    PositiveExpansion,
};
pub use error::Error;
pub use oracle::{enumerate_all_expansions, verify_bijection, BijectionReport, ExpansionSet};
pub use slope::{
    boundary_slope, connectedness_profile, has_repeated_slope, is_superincreasing, knot_report,
    sign_counts, signed_sum, slope_context, ConnectednessProfile, KnotSlopeReport, ReportMode,
    SignCounts, SlopeContext, SlopeEntry,
};
pub use subtuple::{
    count_allowable, dual, enumerate_allowable, enumerate_allowable_with_ceiling, expand,
    is_allowable, is_symmetric, reduce, AttributedExpansion, SubTuple,
    DEFAULT_ENUMERATION_CEILING,
};
pub use verify::{verify_knot, verify_range, VerifySummary};
