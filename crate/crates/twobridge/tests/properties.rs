//! Randomized invariants over the expansion machinery.
//!
//! Strategies draw small random knots and expansions; every property here is
//! an algebraic identity that must hold with zero exceptions, so any failure
//! proptest reports (with its shrunken counterexample) is a real bug.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use twobridge::{
    collision_dp, count_allowable, dual, enumerate_allowable, euclid_expansion, evaluate,
    evaluate_with_shift, even_expansion, expand, fold_knot, has_repeated_slope, is_superincreasing,
    knot_report, normalize_knot, reduce, sign_counts, signed_sum, KnotParams, PositiveExpansion,
    ReportMode, SubTuple,
};

fn knot_params(alpha: u64, beta: u64) -> KnotParams {
    KnotParams::new(BigInt::from(alpha), BigInt::from(beta)).unwrap()
}

/// Odd `alpha` in `3..=2001` with a coprime `beta` below `alpha / 2`.
fn arb_knot() -> impl Strategy<Value = KnotParams> {
    (1u64..=1000)
        .prop_map(|half| 2 * half + 1)
        .prop_flat_map(|alpha| (Just(alpha), 1u64..=(alpha - 1) / 2))
        .prop_filter("beta must be coprime to alpha", |&(alpha, beta)| {
            alpha.gcd(&beta) == 1
        })
        .prop_map(|(alpha, beta)| knot_params(alpha, beta))
}

/// Odd `alpha` with any coprime `beta` in `1..alpha`, before normalization.
fn arb_unnormalized() -> impl Strategy<Value = (u64, u64)> {
    (1u64..=1000)
        .prop_map(|half| 2 * half + 1)
        .prop_flat_map(|alpha| (Just(alpha), 1u64..alpha))
        .prop_filter("beta must be coprime to alpha", |&(alpha, beta)| {
            alpha.gcd(&beta) == 1
        })
}

/// Any positive expansion: entries in `1..=9`, last entry `>= 2`.
fn arb_positive_expansion() -> impl Strategy<Value = PositiveExpansion> {
    prop::collection::vec(1i64..=9, 1..=10).prop_map(|mut entries| {
        if *entries.last().unwrap() == 1 {
            *entries.last_mut().unwrap() = 2;
        }
        PositiveExpansion::new(entries.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

fn mod_inverse(beta: u64, alpha: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (alpha as i128, beta as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inputs must be coprime");
    t.rem_euclid(alpha as i128) as u64
}

/// Histogram of `signed_sum - delta` over all allowable sub-tuples.
fn enumeration_histogram(m: &PositiveExpansion) -> BTreeMap<i64, u128> {
    let delta = BigInt::from((m.len() % 2) as u8);
    let mut histogram = BTreeMap::new();
    for sub in enumerate_allowable(m).unwrap() {
        let key = (signed_sum(m, &sub).unwrap() - &delta).to_i64().unwrap();
        *histogram.entry(key).or_insert(0u128) += 1;
    }
    histogram
}

fn fibonacci(n: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// The Euclidean expansion evaluates back to beta/alpha exactly.
    #[test]
    fn euclid_expansion_evaluates_back(knot in arb_knot()) {
        let m = euclid_expansion(&knot);
        prop_assert_eq!(evaluate(m.entries()).unwrap(), knot.fraction());
        prop_assert!(*m.entries().last().unwrap() >= BigInt::from(2));
        prop_assert!(m.entries().iter().all(|e| e.is_positive()));
    }

    /// The even expansion has only even nonzero quotients and evaluates to
    /// beta/alpha (beta even) or beta/alpha - 1 (beta odd).
    #[test]
    fn even_expansion_is_even_with_parity_shift(knot in arb_knot()) {
        let e = even_expansion(&knot);
        prop_assert!(e.entries().iter().all(|n| n.is_even() && !n.is_zero()));
        let value = evaluate_with_shift(&knot, &e).unwrap();
        let beta_odd = knot.beta().is_odd();
        prop_assert_eq!(value.shift, u8::from(beta_odd));
    }

    /// Every allowable sub-tuple expands to an expansion with all quotients
    /// of magnitude >= 2 whose sign counts match the signed-sum shortcut,
    /// and reduces back to exactly (M, I).
    #[test]
    fn expand_reduce_round_trip(knot in arb_knot()) {
        let m = euclid_expansion(&knot);
        let subs = enumerate_allowable(&m).unwrap();
        prop_assert_eq!(count_allowable(&m).unwrap(), subs.len() as u128);
        for sub in subs {
            let n = expand(&m, &sub).unwrap();
            prop_assert!(n.entries().iter().all(|q| q.abs() >= BigInt::from(2)));
            prop_assert_eq!(sign_counts(&n).signed_diff(), signed_sum(&m, &sub).unwrap());
            let shift = evaluate_with_shift(&knot, &n).unwrap().shift;
            prop_assert_eq!(shift, u8::from(sub.contains(1)));
            let (back_m, back_sub) = reduce(&n, &knot).unwrap();
            prop_assert_eq!(&back_m, &m);
            prop_assert_eq!(back_sub, sub);
        }
    }

    /// Full and fast report modes agree on everything but the materialized
    /// expansions.
    #[test]
    fn report_modes_agree(knot in arb_knot()) {
        let full = knot_report(&knot, ReportMode::Full).unwrap();
        let fast = knot_report(&knot, ReportMode::Fast).unwrap();
        prop_assert_eq!(full.entries.len(), fast.entries.len());
        for (a, b) in full.entries.iter().zip(&fast.entries) {
            prop_assert_eq!(&a.subtuple, &b.subtuple);
            prop_assert_eq!(&a.signed_diff, &b.signed_diff);
            prop_assert_eq!(&a.slope, &b.slope);
            prop_assert!(a.expansion.is_some());
            prop_assert!(b.expansion.is_none());
        }
        prop_assert_eq!(full.collisions, fast.collisions);
    }

    /// Reflecting a sub-tuple twice is the identity.
    #[test]
    fn dual_is_an_involution(indices in prop::collection::btree_set(1usize..=12, 0..=6)) {
        let sub = SubTuple::new(indices.into_iter().collect(), 12).unwrap();
        prop_assert_eq!(dual(&dual(&sub)), sub);
    }

    /// The collision DP reproduces the enumeration histogram on arbitrary
    /// positive expansions, knots and links alike.
    #[test]
    fn dp_matches_enumeration(m in arb_positive_expansion()) {
        let dp = collision_dp(&m).unwrap();
        prop_assert_eq!(&dp, &enumeration_histogram(&m));
        let total: u128 = dp.values().sum();
        prop_assert_eq!(total, count_allowable(&m).unwrap());
    }

    /// With no quotient equal to 1, the sub-tuple count obeys the Fibonacci
    /// law Fib(k+2).
    #[test]
    fn gap_free_expansions_count_fibonacci(entries in prop::collection::vec(2i64..=9, 1..=10)) {
        let k = entries.len();
        let m = PositiveExpansion::new(entries.into_iter().map(BigInt::from).collect()).unwrap();
        prop_assert_eq!(count_allowable(&m).unwrap(), fibonacci(k + 2));
    }

    /// Superincreasing expansions never repeat a signed sum.
    #[test]
    fn superincreasing_sums_are_distinct(
        first in 2i64..=5,
        increments in prop::collection::vec(1i64..=5, 0..=8),
    ) {
        let mut entries = vec![BigInt::from(first)];
        let mut sum = BigInt::from(first);
        for inc in increments {
            let next = &sum + BigInt::from(inc);
            entries.push(next.clone());
            sum += next;
        }
        let m = PositiveExpansion::new(entries).unwrap();
        prop_assert!(is_superincreasing(&m));
        let dp = collision_dp(&m).unwrap();
        prop_assert!(dp.values().all(|&count| count == 1));
    }

    /// Superincreasing Euclidean expansions imply no repeated slope on the
    /// knot itself.
    #[test]
    fn superincreasing_knots_have_no_repeats(knot in arb_knot()) {
        let m = euclid_expansion(&knot);
        if is_superincreasing(&m) {
            prop_assert!(!has_repeated_slope(&knot).unwrap());
        }
    }

    /// Normalization is idempotent, invariant under inversion mod alpha, and
    /// never exceeds the plain fold.
    #[test]
    fn normalization_laws((alpha, beta) in arb_unnormalized()) {
        let a = BigInt::from(alpha);
        let normalized = normalize_knot(&a, &BigInt::from(beta)).unwrap();
        let again = normalize_knot(normalized.alpha(), normalized.beta()).unwrap();
        prop_assert_eq!(&again, &normalized);

        let inverse = mod_inverse(beta, alpha);
        let via_inverse = normalize_knot(&a, &BigInt::from(inverse)).unwrap();
        prop_assert_eq!(&via_inverse, &normalized);

        let folded = fold_knot(&a, &BigInt::from(beta)).unwrap();
        prop_assert!(normalized.beta() <= folded.beta());
        prop_assert_eq!(
            fold_knot(&a, &BigInt::from(alpha - beta)).unwrap(),
            folded.clone()
        );
        prop_assert!(folded.beta() * 2 < *folded.alpha());
    }
}
