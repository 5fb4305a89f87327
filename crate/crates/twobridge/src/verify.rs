//! Batch correctness sweeps: every invariant the library promises, checked
//! per knot against the brute-force oracle.
//!
//! [`verify_knot`] is the single-knot battery; [`verify_range`] fans it out
//! over all canonical knots up to a bound and reports the first
//! counterexample in `(alpha, beta)` order, independent of worker count.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::census::{build_pool, canonical_representatives, collision_dp, SignedSumHistogram};
use crate::cf::{euclid_expansion, evaluate_with_shift, even_expansion, KnotParams};
use crate::error::Error;
use crate::oracle::{enumerate_all_expansions, verify_bijection};
use crate::slope::{sign_counts, signed_sum};
use crate::subtuple::{enumerate_allowable, expand, reduce};

/// `fib(1) = fib(2) = 1`.
fn fib(n: usize) -> u128 {
    let (mut a, mut b) = (1u128, 1u128);
    for _ in 2..n {
        (a, b) = (b, a + b);
    }
    b
}

/// Runs the full battery on one knot and returns the number of expansions
/// checked.
///
/// Checks, in order: the sub-tuple construction hits exactly the oracle's
/// expansion set (and injectively); the oracle set contains exactly one
/// all-even member, equal to the even expansion; for every allowable `I`,
/// the signed-sum shortcut matches the sign counts of the materialized
/// `M_I`, the evaluation shift is 1 exactly when `1` is chosen, and
/// reduction inverts the construction; the count obeys the Fibonacci law
/// when no quotient is 1; and the counting DP reproduces the
/// enumeration-derived signed-sum histogram.
pub fn verify_knot(knot: &KnotParams) -> Result<u64, Error> {
    let fail = |detail: String| Error::VerificationFailed {
        alpha: knot.alpha().clone(),
        beta: knot.beta().clone(),
        detail,
    };
    let m = euclid_expansion(knot);
    let subs = enumerate_allowable(&m)?;

    let bijection = verify_bijection(knot)?;
    if !bijection.is_bijective() {
        return Err(fail(format!("expansion sets differ: {bijection}")));
    }
    if bijection.matched != subs.len() {
        return Err(fail(format!(
            "two sub-tuples produced the same expansion: {} sub-tuples, {} expansions",
            subs.len(),
            bijection.matched
        )));
    }

    let oracle = enumerate_all_expansions(knot);
    let evens = oracle.all_even_members();
    let even = even_expansion(knot);
    if evens.len() != 1 || *evens[0] != even {
        return Err(fail(format!(
            "expected exactly one all-even expansion {even}, oracle found {}",
            evens.len()
        )));
    }

    let delta = BigInt::from((m.len() % 2) as u8);
    let mut histogram = SignedSumHistogram::new();
    for i in &subs {
        let n = expand(&m, i).map_err(|e| fail(format!("expand({i}) failed: {e}")))?;
        let shortcut = signed_sum(&m, i)?;
        let direct = sign_counts(&n).signed_diff();
        if shortcut != direct {
            return Err(fail(format!(
                "signed sum {shortcut} disagrees with sign counts {direct} for I = {i}"
            )));
        }
        let value = evaluate_with_shift(knot, &n)
            .map_err(|e| fail(format!("expansion for I = {i} has a foreign value: {e}")))?;
        let expected_shift = u8::from(i.contains(1));
        if value.shift != expected_shift {
            return Err(fail(format!(
                "shift {} for I = {i}, expected {expected_shift}",
                value.shift
            )));
        }
        let (m_back, i_back) =
            reduce(&n, knot).map_err(|e| fail(format!("reduce({n}) failed: {e}")))?;
        if m_back != m || i_back != *i {
            return Err(fail(format!(
                "reduce({n}) returned ({m_back}, {i_back}), expected ({m}, {i})"
            )));
        }
        let sum = i64::try_from(&(shortcut - &delta)).map_err(|e| fail(e.to_string()))?;
        *histogram.entry(sum).or_insert(0) += 1;
    }

    if m.entries().iter().all(|v| *v >= BigInt::from(2u8)) {
        let expected = fib(m.len() + 2);
        if subs.len() as u128 != expected {
            return Err(fail(format!(
                "{} sub-tuples for quotients all >= 2, expected fib({}) = {expected}",
                subs.len(),
                m.len() + 2
            )));
        }
    }

    let dp = collision_dp(&m)?;
    if dp != histogram {
        return Err(fail(format!(
            "counting dp {dp:?} disagrees with enumeration histogram {histogram:?}"
        )));
    }

    Ok(subs.len() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifySummary {
    pub max_alpha: u64,
    pub knots: u64,
    pub expansions: u64,
}

/// Verifies every canonical knot with `3 <= alpha <= max_alpha`. On failure
/// the error describes the smallest failing `(alpha, beta)`.
pub fn verify_range(max_alpha: u64, workers: usize) -> Result<VerifySummary, Error> {
    if max_alpha < 3 {
        return Err(Error::BadCensusRange {
            min_alpha: 3,
            max_alpha,
        });
    }
    let mut knots: Vec<KnotParams> = Vec::new();
    for alpha in (3..=max_alpha).step_by(2) {
        knots.extend(canonical_representatives(alpha)?);
    }
    let pool = build_pool(workers)?;
    // Collect all outcomes and scan in order so the reported counterexample
    // does not depend on scheduling.
    let outcomes: Vec<Result<u64, Error>> =
        pool.install(|| knots.par_iter().map(verify_knot).collect());
    let mut expansions: u64 = 0;
    for outcome in outcomes {
        expansions += outcome?;
    }
    Ok(VerifySummary {
        max_alpha,
        knots: knots.len() as u64,
        expansions,
    })
}

impl VerifySummary {
    pub fn to_json_string(&self) -> String {
        format!(
            "{{\"max_alpha\":{},\"knots\":{},\"expansions\":{}}}",
            self.max_alpha, self.knots, self.expansions
        )
    }
}
