//! Allowable sub-tuples and the expansion they index.
//!
//! Fix the positive expansion `M = [m1, ..., mk]`. A strictly increasing tuple
//! `I` of positions is *allowable* when consecutive chosen positions differ by
//! at least 2 and every position `p` with `m_p = 1` has one of `p-1`, `p`,
//! `p+1` chosen. Each allowable `I` yields an expansion `M_I` with all
//! quotients of magnitude >= 2, and `I -> M_I` is a bijection onto the set of
//! such expansions of `beta/alpha` (mod 1). [`expand`] builds `M_I`,
//! [`reduce`] inverts it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::cf::{euclid_expansion, Fraction, GeneralExpansion, KnotParams, PositiveExpansion};
use crate::error::Error;

/// Default cap on how many sub-tuples [`enumerate_allowable`] will materialize.
pub const DEFAULT_ENUMERATION_CEILING: u128 = 1 << 24;

/// Strictly increasing 1-based positions into an expansion of length
/// `ambient`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubTuple {
    indices: Vec<usize>,
    ambient: usize,
}

impl SubTuple {
    pub fn new(indices: Vec<usize>, ambient: usize) -> Result<Self, Error> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = indices.iter().all(|&i| 1 <= i && i <= ambient);
        if !increasing || !in_range {
            return Err(Error::InvalidSubTuple { ambient });
        }
        Ok(SubTuple { indices, ambient })
    }

    pub fn empty(ambient: usize) -> Self {
        SubTuple {
            indices: Vec::new(),
            ambient,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Membership test; positions outside `1..=ambient` are never members.
    pub fn contains(&self, position: usize) -> bool {
        self.indices.binary_search(&position).is_ok()
    }
}

impl fmt::Display for SubTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, i) in self.indices.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// An expansion together with the sub-tuple that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributedExpansion {
    pub subtuple: SubTuple,
    pub expansion: GeneralExpansion,
}

/// Gap and coverage test for a candidate sub-tuple.
pub fn is_allowable(m: &PositiveExpansion, i: &SubTuple) -> bool {
    if i.ambient() != m.len() {
        return false;
    }
    if !i.indices().windows(2).all(|w| w[1] - w[0] >= 2) {
        return false;
    }
    for (idx, value) in m.entries().iter().enumerate() {
        if value.is_one() {
            let p = idx + 1;
            if !(i.contains(p - 1) || i.contains(p) || i.contains(p + 1)) {
                return false;
            }
        }
    }
    true
}

/// Number of allowable sub-tuples, without materializing them.
///
/// Left-to-right DP over `(chose(p-1), chose(p))`; the coverage test for a
/// position with quotient 1 runs once all three neighboring choices are
/// known. With no quotient equal to 1 this counts independent sets in a path,
/// giving Fib(k+2).
pub fn count_allowable(m: &PositiveExpansion) -> Result<u128, Error> {
    let ones: Vec<bool> = m.entries().iter().map(|v| v.is_one()).collect();
    let k = ones.len();
    // state index: bit 0 = chose(p), bit 1 = chose(p-1)
    let mut counts = [0u128; 4];
    counts[0] = 1; // position 1 not chosen
    counts[1] = 1; // position 1 chosen
    for p in 1..k {
        let mut next = [0u128; 4];
        for (state, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let prev = state & 2 != 0;
            let cur = state & 1 != 0;
            for chose_next in [false, true] {
                if chose_next && cur {
                    continue;
                }
                if ones[p - 1] && !(prev || cur || chose_next) {
                    continue;
                }
                let idx = usize::from(cur) << 1 | usize::from(chose_next);
                next[idx] = next[idx]
                    .checked_add(count)
                    .ok_or(Error::CountOverflow)?;
            }
        }
        counts = next;
    }
    let mut total = 0u128;
    for (state, &count) in counts.iter().enumerate() {
        let prev = state & 2 != 0;
        let cur = state & 1 != 0;
        if ones[k - 1] && !(prev || cur) {
            continue;
        }
        total = total.checked_add(count).ok_or(Error::CountOverflow)?;
    }
    Ok(total)
}

/// Calls `f` with every allowable sub-tuple in lexicographic order (the empty
/// tuple first when it qualifies). Iterative so pathological inputs cannot
/// overflow the call stack.
fn for_each_allowable(m: &PositiveExpansion, mut f: impl FnMut(&[usize])) {
    let k = m.len();
    // ones_next[p] = smallest q >= p with m_q = 1, else usize::MAX.
    let mut ones_next = vec![usize::MAX; k + 3];
    for p in (1..=k).rev() {
        ones_next[p] = if m.entries()[p - 1].is_one() {
            p
        } else {
            ones_next[p + 1]
        };
    }
    let covered_up_to = |last: usize| if last == 0 { 0 } else { last + 1 };
    // Complete: every position past the covered window is free of 1s.
    let complete = |last: usize| ones_next[covered_up_to(last) + 1] > k;
    // Appending c leaves positions strictly between the covered window and
    // c-1 permanently uncovered, so none of them may hold a 1.
    let max_candidate = |last: usize| {
        let limit = ones_next[covered_up_to(last) + 1].saturating_add(1);
        limit.min(k)
    };

    if complete(0) {
        f(&[]);
    }
    let mut prefix: Vec<usize> = Vec::new();
    let mut cand = 1usize;
    loop {
        let last = prefix.last().copied().unwrap_or(0);
        if cand > max_candidate(last) {
            match prefix.pop() {
                Some(top) => {
                    cand = top + 1;
                    continue;
                }
                None => break,
            }
        }
        prefix.push(cand);
        if complete(cand) {
            f(&prefix);
        }
        cand += 2;
    }
}

pub fn enumerate_allowable(m: &PositiveExpansion) -> Result<Vec<SubTuple>, Error> {
    enumerate_allowable_with_ceiling(m, DEFAULT_ENUMERATION_CEILING)
}

/// Lexicographically ordered list of every allowable sub-tuple, refusing to
/// materialize more than `ceiling` of them.
pub fn enumerate_allowable_with_ceiling(
    m: &PositiveExpansion,
    ceiling: u128,
) -> Result<Vec<SubTuple>, Error> {
    let count = count_allowable(m)?;
    if count > ceiling {
        return Err(Error::EnumerationCeiling { count, ceiling });
    }
    let mut out = Vec::with_capacity(count as usize);
    let k = m.len();
    for_each_allowable(m, |indices| {
        out.push(SubTuple {
            indices: indices.to_vec(),
            ambient: k,
        });
    });
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

/// Builds the expansion `M_I`.
///
/// Chosen quotient `m_p` becomes the alternating block `-2, 2, ...` of length
/// `m_p - 1` (nothing when `m_p = 1`); unchosen neighbors of chosen positions
/// gain 1 per chosen neighbor; every entry descending from position `p` is
/// scaled by `(-1)^(m_q)` for each chosen `q < p`, replacement blocks
/// included.
pub fn expand(m: &PositiveExpansion, i: &SubTuple) -> Result<GeneralExpansion, Error> {
    if !is_allowable(m, i) {
        return Err(Error::NotAllowable {
            subtuple: i.to_string(),
            expansion: m.to_string(),
        });
    }
    let k = m.len();
    let mut out: Vec<BigInt> = Vec::with_capacity(k);
    let mut negate = false;
    let two = BigInt::from(2);
    for p in 1..=k {
        let quotient = &m.entries()[p - 1];
        if i.contains(p) {
            let block_len = usize::try_from(quotient - BigInt::one())
                .map_err(|_| Error::TooLargeToMaterialize)?;
            for t in 0..block_len {
                // Block alternates -2, 2, ... before the sign scaling.
                let positive = (t % 2 == 1) != negate;
                out.push(if positive { two.clone() } else { -&two });
            }
            if quotient.is_odd() {
                negate = !negate;
            }
        } else {
            let bumps = u8::from(i.contains(p - 1)) + u8::from(i.contains(p + 1));
            let adjusted = quotient + BigInt::from(bumps);
            out.push(if negate { -adjusted } else { adjusted });
        }
    }
    Ok(GeneralExpansion::from_vec_unchecked(out))
}

/// Inverts [`expand`]: recovers `(M, I)` from an expansion of `beta/alpha`
/// (mod 1) with all quotients of magnitude >= 2.
///
/// Each round finds the first negative entry, splices the alternating ±2 run
/// it starts back into a single positive quotient, undoes the neighbor bump
/// and the trailing sign scaling, and records the position. A final trailing
/// 1 folds into the previous quotient.
pub fn reduce(
    n: &GeneralExpansion,
    knot: &KnotParams,
) -> Result<(PositiveExpansion, SubTuple), Error> {
    let not_an_expansion = || Error::NotAnExpansion {
        alpha: knot.alpha().clone(),
        beta: knot.beta().clone(),
        expansion: n.to_string(),
    };
    let value = n.value();
    let target = knot.fraction();
    if value != target && value != &target - Fraction::one() {
        return Err(not_an_expansion());
    }

    let two = BigInt::from(2);
    let mut work: Vec<BigInt> = n.entries().to_vec();
    let mut indices: Vec<usize> = Vec::new();
    while let Some(first_neg) = work.iter().position(|v| v.is_negative()) {
        let i = first_neg + 1; // 1-based
        if i > 1 {
            work[i - 2] -= 1;
            if !work[i - 2].is_positive() {
                return Err(not_an_expansion());
            }
        }
        // The run of alternating ±2 entries ends where the magnitude leaves 2,
        // where two neighbors share a sign, or at the end of the expansion.
        let mut j = i;
        loop {
            let cur = &work[j - 1];
            if cur.abs() != two || j == work.len() || cur.sign() == work[j].sign() {
                break;
            }
            j += 1;
        }
        let run_len = j - i;
        let recovered = BigInt::from(run_len + 1);
        let tail_quotient = work[j - 1].abs() - BigInt::one();
        if !tail_quotient.is_positive() {
            return Err(not_an_expansion());
        }
        let flip = run_len % 2 == 0; // (-1)^(run_len + 1)
        let mut next: Vec<BigInt> = Vec::with_capacity(i + 1 + work.len() - j);
        next.extend_from_slice(&work[..i - 1]);
        next.push(recovered);
        next.push(tail_quotient);
        for v in &work[j..] {
            next.push(if flip { -v } else { v.clone() });
        }
        indices.push(i);
        work = next;
    }
    if work.len() >= 2 && work.last().unwrap().is_one() {
        work.pop();
        *work.last_mut().unwrap() += 1;
    }

    let m = euclid_expansion(knot);
    if work != m.entries() {
        return Err(not_an_expansion());
    }
    let sub = SubTuple::new(indices, m.len()).map_err(|_| not_an_expansion())?;
    if !is_allowable(&m, &sub) {
        return Err(not_an_expansion());
    }
    let back = expand(&m, &sub)?;
    if back.entries() != n.entries() {
        return Err(not_an_expansion());
    }
    Ok((m, sub))
}

/// Mirror of a sub-tuple: position `i` maps to `k + 1 - i`, reordered to stay
/// increasing.
pub fn dual(i: &SubTuple) -> SubTuple {
    let k = i.ambient();
    let indices: Vec<usize> = i.indices().iter().rev().map(|&idx| k + 1 - idx).collect();
    SubTuple {
        indices,
        ambient: k,
    }
}

/// Palindromic with odd length.
pub fn is_symmetric(m: &PositiveExpansion) -> bool {
    let entries = m.entries();
    entries.len() % 2 == 1 && entries.iter().eq(entries.iter().rev())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn pexp(values: &[u64]) -> PositiveExpansion {
        PositiveExpansion::from_u64s(values).unwrap()
    }

    fn sub(indices: &[usize], ambient: usize) -> SubTuple {
        SubTuple::new(indices.to_vec(), ambient).unwrap()
    }

    fn knot(alpha: u64, beta: u64) -> KnotParams {
        KnotParams::new(BigInt::from(alpha), BigInt::from(beta)).unwrap()
    }

    fn indices_of(subs: &[SubTuple]) -> Vec<Vec<usize>> {
        subs.iter().map(|s| s.indices().to_vec()).collect()
    }

    #[test]
    fn allowable_spec_values() {
        assert!(is_allowable(&pexp(&[2, 1, 4, 5]), &sub(&[2, 4], 4)));
        assert!(!is_allowable(&pexp(&[2, 1, 1, 2, 2]), &sub(&[4], 5)));
        assert!(is_allowable(&pexp(&[2, 2]), &sub(&[], 2)));
        assert!(!is_allowable(&pexp(&[2, 2]), &sub(&[1, 2], 2)));
        // Ambient mismatch is never allowable.
        assert!(!is_allowable(&pexp(&[2, 2]), &sub(&[1], 3)));
    }

    #[test]
    fn enumerate_spec_values() {
        assert_eq!(
            indices_of(&enumerate_allowable(&pexp(&[2, 2])).unwrap()),
            vec![vec![], vec![1], vec![2]]
        );
        assert_eq!(
            indices_of(&enumerate_allowable(&pexp(&[2, 1, 1, 2, 2])).unwrap()),
            vec![
                vec![1, 3],
                vec![1, 3, 5],
                vec![1, 4],
                vec![2],
                vec![2, 4],
                vec![2, 5],
                vec![3],
                vec![3, 5],
            ]
        );
        assert_eq!(
            indices_of(&enumerate_allowable(&pexp(&[3, 3, 3])).unwrap()),
            vec![vec![], vec![1], vec![1, 3], vec![2], vec![3]]
        );
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        // Brute-force oracle: filter all 2^k subsets through is_allowable.
        for m in [
            pexp(&[2, 1, 4, 5]),
            pexp(&[2, 1, 1, 2, 2]),
            pexp(&[1, 1, 2]),
            pexp(&[5, 1, 1, 1, 3]),
            pexp(&[2, 2, 2, 2, 2, 2]),
            pexp(&[1, 2, 1, 2]),
        ] {
            let k = m.len();
            let mut expected = Vec::new();
            for mask in 0u32..1 << k {
                let indices: Vec<usize> = (1..=k).filter(|&p| mask >> (p - 1) & 1 == 1).collect();
                let cand = SubTuple::new(indices, k).unwrap();
                if is_allowable(&m, &cand) {
                    expected.push(cand);
                }
            }
            expected.sort();
            let got = enumerate_allowable(&m).unwrap();
            assert_eq!(got, expected, "mismatch for M = {m}");
            assert_eq!(count_allowable(&m).unwrap(), got.len() as u128);
        }
    }

    #[test]
    fn count_follows_fibonacci_without_ones() {
        // Fib(k+2) with Fib(1) = Fib(2) = 1.
        let fib = |n: usize| -> u128 {
            let (mut a, mut b) = (1u128, 1u128);
            for _ in 2..n {
                let c = a + b;
                a = b;
                b = c;
            }
            b
        };
        for k in 1..=12 {
            let m = pexp(&vec![2; k]);
            assert_eq!(count_allowable(&m).unwrap(), fib(k + 2), "k = {k}");
        }
    }

    #[test]
    fn enumeration_ceiling_is_enforced() {
        let m = pexp(&vec![2; 40]);
        let err = enumerate_allowable_with_ceiling(&m, 1000).unwrap_err();
        assert!(matches!(err, Error::EnumerationCeiling { .. }));
    }

    #[test]
    fn expand_spec_values() {
        let e = |m: &PositiveExpansion, i: &SubTuple| -> Vec<i64> {
            expand(m, i)
                .unwrap()
                .entries()
                .iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect()
        };
        assert_eq!(
            e(&pexp(&[2, 1, 4, 5]), &sub(&[2, 4], 4)),
            vec![3, -6, 2, -2, 2, -2]
        );
        assert_eq!(e(&pexp(&[2, 2]), &sub(&[], 2)), vec![2, 2]);
        assert_eq!(e(&pexp(&[2, 2]), &sub(&[1], 2)), vec![-2, 3]);
        assert_eq!(e(&pexp(&[2, 1, 4, 5]), &sub(&[2], 4)), vec![3, -5, -5]);
    }

    #[test]
    fn expand_rejects_non_allowable() {
        let err = expand(&pexp(&[2, 2]), &sub(&[1, 2], 2)).unwrap_err();
        assert!(matches!(err, Error::NotAllowable { .. }));
    }

    #[test]
    fn expand_shift_tracks_position_one() {
        // M_I evaluates to beta/alpha - 1 exactly when 1 is chosen.
        let m = pexp(&[2, 2]);
        let k = knot(5, 2);
        for i in enumerate_allowable(&m).unwrap() {
            let e = expand(&m, &i).unwrap();
            let v = crate::cf::evaluate_with_shift(&k, &e).unwrap();
            assert_eq!(v.shift, u8::from(i.contains(1)), "I = {i}");
        }
    }

    #[test]
    fn reduce_spec_values() {
        let n = GeneralExpansion::from_i64s(&[3, -6, 2, -2, 2, -2]).unwrap();
        let (m, i) = reduce(&n, &knot(73, 26)).unwrap();
        assert_eq!(m, pexp(&[2, 1, 4, 5]));
        assert_eq!(i, sub(&[2, 4], 4));

        let n = GeneralExpansion::from_i64s(&[2, 2]).unwrap();
        let (m, i) = reduce(&n, &knot(5, 2)).unwrap();
        assert_eq!(m, pexp(&[2, 2]));
        assert!(i.is_empty());

        let n = GeneralExpansion::from_i64s(&[-2, 3]).unwrap();
        let (m, i) = reduce(&n, &knot(5, 2)).unwrap();
        assert_eq!(m, pexp(&[2, 2]));
        assert_eq!(i, sub(&[1], 2));
    }

    #[test]
    fn reduce_rejects_foreign_expansions() {
        let n = GeneralExpansion::from_i64s(&[2, 2]).unwrap();
        let err = reduce(&n, &knot(73, 26)).unwrap_err();
        assert!(matches!(err, Error::NotAnExpansion { .. }));
    }

    #[test]
    fn reduce_inverts_expand_for_small_knots() {
        for alpha in (3..=51u64).step_by(2) {
            for beta in 1..=alpha / 2 {
                if BigInt::from(alpha).gcd(&BigInt::from(beta)) != BigInt::one() {
                    continue;
                }
                let k = knot(alpha, beta);
                let m = euclid_expansion(&k);
                for i in enumerate_allowable(&m).unwrap() {
                    let e = expand(&m, &i).unwrap();
                    let (m2, i2) = reduce(&e, &k).unwrap_or_else(|err| {
                        panic!("reduce failed for {k}, I = {i}: {err}")
                    });
                    assert_eq!(m2, m);
                    assert_eq!(i2, i);
                }
            }
        }
    }

    #[test]
    fn dual_spec_values() {
        assert_eq!(dual(&sub(&[1, 3], 5)), sub(&[3, 5], 5));
        assert_eq!(dual(&sub(&[2, 4], 5)), sub(&[2, 4], 5));
        assert_eq!(dual(&sub(&[], 3)), sub(&[], 3));
    }

    #[test]
    fn dual_is_an_involution() {
        let i = sub(&[1, 4, 6], 9);
        assert_eq!(dual(&dual(&i)), i);
    }

    #[test]
    fn symmetry_test() {
        assert!(is_symmetric(&pexp(&[3, 3, 3])));
        assert!(is_symmetric(&pexp(&[2, 1, 5, 1, 2])));
        assert!(!is_symmetric(&pexp(&[2, 2]))); // even length
        assert!(!is_symmetric(&pexp(&[2, 1, 3])));
    }

    #[test]
    fn subtuple_validation() {
        assert!(SubTuple::new(vec![1, 1], 3).is_err());
        assert!(SubTuple::new(vec![2, 1], 3).is_err());
        assert!(SubTuple::new(vec![0], 3).is_err());
        assert!(SubTuple::new(vec![4], 3).is_err());
        assert!(SubTuple::new(vec![1, 3], 3).is_ok());
    }
}
