//! Boundary slopes from continued-fraction expansions.
//!
//! For an expansion `[n1, ..., nk]` with all `|ni| >= 2`, let `n+` count the
//! positions where `(-1)^(i+1) * ni > 0` and `n-` the rest. The boundary
//! slope of the surface carried by the expansion is
//!
//! ```text
//! 2 * ((n+ - n-) - (n0+ - n0-))
//! ```
//!
//! where `n0±` are the counts for the all-even expansion of the same knot.
//! The difference `n+ - n-` of `M_I` equals `delta + sum over i in I of
//! (-1)^i * m_i` with `delta = k mod 2`, which is what [`signed_sum`]
//! computes without building `M_I` at all.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::cf::{
    euclid_expansion, even_expansion, GeneralExpansion, KnotParams, PositiveExpansion,
};
use crate::census::collision_dp;
use crate::error::Error;
use crate::subtuple::{enumerate_allowable, expand, is_allowable, SubTuple};

/// Counts of alternating-sign agreements and disagreements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignCounts {
    pub n_plus: usize,
    pub n_minus: usize,
}

impl SignCounts {
    pub fn signed_diff(&self) -> BigInt {
        BigInt::from(self.n_plus as i64 - self.n_minus as i64)
    }
}

/// `n+` counts positions where `(-1)^(i+1) * ni > 0`, 1-based.
pub fn sign_counts(n: &GeneralExpansion) -> SignCounts {
    let mut n_plus = 0;
    let mut n_minus = 0;
    for (idx, value) in n.entries().iter().enumerate() {
        let odd_position = idx % 2 == 0;
        if odd_position == value.is_positive() {
            n_plus += 1;
        } else {
            n_minus += 1;
        }
    }
    SignCounts { n_plus, n_minus }
}

/// `delta + sum over chosen i of (-1)^i * m_i`; equals the signed difference
/// of `sign_counts(expand(m, i))`.
pub fn signed_sum(m: &PositiveExpansion, i: &SubTuple) -> Result<BigInt, Error> {
    if !is_allowable(m, i) {
        return Err(Error::NotAllowable {
            subtuple: i.to_string(),
            expansion: m.to_string(),
        });
    }
    let mut sum = BigInt::from((m.len() % 2) as u8);
    for &pos in i.indices() {
        let quotient = &m.entries()[pos - 1];
        if pos % 2 == 1 {
            sum -= quotient;
        } else {
            sum += quotient;
        }
    }
    Ok(sum)
}

/// Knot-level constants of the slope formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeContext {
    /// Length of the positive expansion mod 2.
    pub delta: u8,
    /// `n0+ - n0-` of the all-even expansion.
    pub n0_diff: BigInt,
}

pub fn slope_context(knot: &KnotParams) -> SlopeContext {
    let delta = (euclid_expansion(knot).len() % 2) as u8;
    let n0_diff = sign_counts(&even_expansion(knot)).signed_diff();
    SlopeContext { delta, n0_diff }
}

/// `2 * (signed_diff - n0_diff)`; always even.
pub fn boundary_slope(ctx: &SlopeContext, signed_diff: &BigInt) -> BigInt {
    (signed_diff - &ctx.n0_diff) * 2
}

/// How much work [`knot_report`] does per sub-tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportMode {
    /// Materialize each `M_I` and count signs directly.
    Full,
    /// Use the signed-sum shortcut; `expansion` stays `None`.
    Fast,
}

/// One sub-tuple's slope data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeEntry {
    pub subtuple: SubTuple,
    pub expansion: Option<GeneralExpansion>,
    pub signed_diff: BigInt,
    pub slope: BigInt,
}

/// Every sub-tuple of a knot with its slope, plus the repeated-slope groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotSlopeReport {
    pub knot: KnotParams,
    pub positive: PositiveExpansion,
    pub even: GeneralExpansion,
    pub context: SlopeContext,
    /// Sorted by sub-tuple lexicographic order.
    pub entries: Vec<SlopeEntry>,
    /// Slope -> sub-tuples sharing it, kept only when two or more collide.
    pub collisions: BTreeMap<BigInt, Vec<SubTuple>>,
}

pub fn knot_report(knot: &KnotParams, mode: ReportMode) -> Result<KnotSlopeReport, Error> {
    let positive = euclid_expansion(knot);
    let even = even_expansion(knot);
    let context = SlopeContext {
        delta: (positive.len() % 2) as u8,
        n0_diff: sign_counts(&even).signed_diff(),
    };
    let subs = enumerate_allowable(&positive)?;
    let mut entries = Vec::with_capacity(subs.len());
    let mut by_slope: BTreeMap<BigInt, Vec<SubTuple>> = BTreeMap::new();
    for subtuple in subs {
        let (expansion, signed_diff) = match mode {
            ReportMode::Full => {
                let e = expand(&positive, &subtuple)?;
                let diff = sign_counts(&e).signed_diff();
                debug_assert_eq!(
                    diff,
                    signed_sum(&positive, &subtuple)?,
                    "signed-sum shortcut diverged for {subtuple}"
                );
                (Some(e), diff)
            }
            ReportMode::Fast => (None, signed_sum(&positive, &subtuple)?),
        };
        let slope = boundary_slope(&context, &signed_diff);
        by_slope
            .entry(slope.clone())
            .or_default()
            .push(subtuple.clone());
        entries.push(SlopeEntry {
            subtuple,
            expansion,
            signed_diff,
            slope,
        });
    }
    let collisions = by_slope
        .into_iter()
        .filter(|(_, subs)| subs.len() >= 2)
        .collect();
    Ok(KnotSlopeReport {
        knot: knot.clone(),
        positive,
        even,
        context,
        entries,
        collisions,
    })
}

/// True when two distinct sub-tuples share a slope; runs on the counting DP,
/// so no sub-tuple list is materialized.
pub fn has_repeated_slope(knot: &KnotParams) -> Result<bool, Error> {
    let m = euclid_expansion(knot);
    let histogram = collision_dp(&m)?;
    Ok(histogram.values().any(|&count| count >= 2))
}

/// Every quotient strictly exceeds the sum of the quotients before it. Such
/// expansions never produce a repeated slope.
pub fn is_superincreasing(m: &PositiveExpansion) -> bool {
    let mut sum = BigInt::from(0u8);
    for value in m.entries() {
        if *value <= sum {
            return false;
        }
        sum += value;
    }
    true
}

/// Connectedness of the carried surface at each number of sheets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConnectednessProfile {
    pub odd_count: usize,
    pub connected_at_1: bool,
    pub connected_at_2: bool,
    pub connected_above_2: bool,
}

/// One sheet is always connected; two sheets need an odd quotient; more need
/// two odd quotients.
pub fn connectedness_profile(n: &GeneralExpansion) -> ConnectednessProfile {
    let odd_count = n
        .entries()
        .iter()
        .filter(|v| num_integer::Integer::is_odd(*v))
        .count();
    ConnectednessProfile {
        odd_count,
        connected_at_1: true,
        connected_at_2: odd_count >= 1,
        connected_above_2: odd_count >= 2,
    }
}
