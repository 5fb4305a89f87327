//! Brute-force enumeration of every expansion with quotients of magnitude
//! >= 2, used to referee the sub-tuple construction.
//!
//! The search is a depth-first walk over exact rationals. For a target value
//! `x` with `0 < |x| < 1` the next quotient must lie strictly within one of
//! `1/x`, so only `floor(1/x)` and `ceil(1/x)` are candidates; a candidate
//! survives when its magnitude is at least 2 and the remaining tail lies in
//! `(-1, 1)`. Tails of magnitude exactly 1 are discarded because no expansion
//! with all `|ni| >= 2` evaluates to ±1. Denominators strictly decrease, so
//! the walk terminates; branching is at most 2 per node.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cf::{Fraction, GeneralExpansion, KnotParams};
use crate::error::Error;
use crate::subtuple::{enumerate_allowable, expand};

/// Deduplicated, lexicographically sorted set of expansions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSet {
    expansions: Vec<GeneralExpansion>,
}

impl ExpansionSet {
    pub fn expansions(&self) -> &[GeneralExpansion] {
        &self.expansions
    }

    pub fn len(&self) -> usize {
        self.expansions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.expansions.is_empty()
    }

    pub fn contains(&self, e: &GeneralExpansion) -> bool {
        self.expansions.binary_search(e).is_ok()
    }

    /// Members whose quotients are all even.
    pub fn all_even_members(&self) -> Vec<&GeneralExpansion> {
        self.expansions.iter().filter(|e| e.is_all_even()).collect()
    }
}

struct Frame {
    /// Remaining candidates `(quotient, tail)` at this depth.
    candidates: Vec<(BigInt, Fraction)>,
    next: usize,
}

fn make_frame(x: &Fraction) -> Frame {
    let y = x.recip();
    let floor = y.floor().to_integer();
    let mut candidates = Vec::with_capacity(2);
    for quotient in [floor.clone(), &floor + 1] {
        if quotient.abs() < BigInt::from(2) {
            continue;
        }
        let tail = &y - Fraction::from(quotient.clone());
        if tail.numer().abs() >= *tail.denom() {
            continue; // |tail| >= 1 cannot be completed
        }
        candidates.push((quotient, tail));
    }
    Frame {
        candidates,
        next: 0,
    }
}

fn dfs_from_root(root: Fraction, out: &mut BTreeSet<Vec<BigInt>>) {
    if root.is_zero() {
        return;
    }
    let mut denominators = vec![root.denom().clone()];
    let mut stack = vec![make_frame(&root)];
    let mut prefix: Vec<BigInt> = Vec::new();
    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.candidates.len() {
            stack.pop();
            denominators.pop();
            if !stack.is_empty() {
                prefix.pop();
            }
            continue;
        }
        let (quotient, tail) = frame.candidates[frame.next].clone();
        frame.next += 1;
        if tail.is_zero() {
            prefix.push(quotient);
            out.insert(prefix.clone());
            prefix.pop();
        } else {
            assert!(
                tail.denom() < denominators.last().unwrap(),
                "denominator failed to decrease at {tail}"
            );
            prefix.push(quotient);
            denominators.push(tail.denom().clone());
            stack.push(make_frame(&tail));
        }
    }
}

/// Every continued-fraction expansion of `beta/alpha` and of `beta/alpha - 1`
/// whose quotients all have magnitude >= 2.
pub fn enumerate_all_expansions(knot: &KnotParams) -> ExpansionSet {
    let mut raw = BTreeSet::new();
    let here = knot.fraction();
    dfs_from_root(here.clone(), &mut raw);
    dfs_from_root(here - Fraction::one(), &mut raw);
    let expansions = raw
        .into_iter()
        .map(GeneralExpansion::from_vec_unchecked)
        .collect();
    ExpansionSet { expansions }
}

/// Outcome of comparing the oracle against `{expand(M, I)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub matched: usize,
    /// Found by the oracle, not produced by any allowable sub-tuple.
    pub only_oracle: Vec<GeneralExpansion>,
    /// Produced from a sub-tuple, missed by the oracle.
    pub only_construction: Vec<GeneralExpansion>,
}

impl BijectionReport {
    pub fn is_bijective(&self) -> bool {
        self.only_oracle.is_empty() && self.only_construction.is_empty()
    }
}

impl fmt::Display for BijectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bijective() {
            return write!(f, "bijective over {} expansions", self.matched);
        }
        writeln!(f, "mismatch ({} matched)", self.matched)?;
        for e in &self.only_oracle {
            writeln!(f, "  oracle only: {e}")?;
        }
        for e in &self.only_construction {
            writeln!(f, "  construction only: {e}")?;
        }
        Ok(())
    }
}

/// Checks that `I -> M_I` over allowable sub-tuples hits exactly the oracle's
/// set of expansions.
pub fn verify_bijection(knot: &KnotParams) -> Result<BijectionReport, Error> {
    let oracle = enumerate_all_expansions(knot);
    let m = crate::cf::euclid_expansion(knot);
    let mut constructed = BTreeSet::new();
    for i in enumerate_allowable(&m)? {
        constructed.insert(expand(&m, &i)?);
    }
    let mut matched = 0;
    let mut only_oracle = Vec::new();
    for e in oracle.expansions() {
        if constructed.remove(e) {
            matched += 1;
        } else {
            only_oracle.push(e.clone());
        }
    }
    let only_construction: Vec<GeneralExpansion> = constructed.into_iter().collect();
    Ok(BijectionReport {
        matched,
        only_oracle,
        only_construction,
    })
}
