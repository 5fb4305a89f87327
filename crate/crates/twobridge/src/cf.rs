//! Exact continued-fraction arithmetic for 2-bridge knot parameters.
//!
//! A 2-bridge knot is described by a pair `(alpha, beta)` with `alpha >= 3`
//! odd, `0 < beta < alpha/2`, and `gcd(alpha, beta) = 1`. Throughout the crate
//! `[n1, ..., nk]` denotes the nested fraction
//!
//! ```text
//! 1/(n1 + 1/(n2 + ... + 1/nk))
//! ```
//!
//! with no leading integer part. The fraction `beta/alpha` has two expansions
//! singled out by this module: the unique *positive* expansion (all quotients
//! >= 1, the last >= 2, produced by the Euclidean algorithm) and the unique
//! *all-even* expansion, whose value is `beta/alpha` or `beta/alpha - 1`
//! depending on the parity of `beta`. Everything is exact: values are
//! `num_rational::BigRational` and quotients are `BigInt`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational value, always reduced, denominator always positive.
pub type Fraction = BigRational;

/// Normalized 2-bridge knot parameters: `alpha >= 3` odd, `0 < beta <
/// alpha/2`, `gcd(alpha, beta) = 1`.
///
/// Construct with [`KnotParams::new`] when the input is already in this range,
/// or with [`normalize_knot`] to fold an arbitrary equivalent `beta` into it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnotParams {
    alpha: BigInt,
    beta: BigInt,
}

impl KnotParams {
    pub fn new(alpha: BigInt, beta: BigInt) -> Result<Self, Error> {
        check_alpha(&alpha)?;
        if beta.is_positive() {
            let twice = &beta * 2;
            if twice > alpha {
                return Err(Error::BetaOutOfRange { alpha, beta });
            }
        } else {
            return Err(Error::BetaOutOfRange { alpha, beta });
        }
        if alpha.gcd(&beta) != BigInt::one() {
            return Err(Error::NotCoprime { alpha, beta });
        }
        Ok(KnotParams { alpha, beta })
    }

    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    /// The fraction `beta/alpha`, always in `(0, 1/2)`.
    pub fn fraction(&self) -> Fraction {
        Fraction::new(self.beta.clone(), self.alpha.clone())
    }
}

impl fmt::Display for KnotParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({}, {})", self.alpha, self.beta)
    }
}

fn check_alpha(alpha: &BigInt) -> Result<(), Error> {
    if alpha < &BigInt::from(3) {
        return Err(Error::AlphaTooSmall {
            alpha: alpha.clone(),
        });
    }
    if alpha.is_even() {
        return Err(Error::EvenAlpha {
            alpha: alpha.clone(),
        });
    }
    Ok(())
}

/// Folds an arbitrary `beta` into the canonical representative of its
/// equivalence class.
///
/// Two parameter pairs describe the same knot up to mirror image exactly when
/// `beta' = ±beta^(±1) (mod alpha)`. The canonical representative is the
/// smallest member of `{fold(b), fold(b^-1 mod alpha)}` where `b = beta mod
/// alpha` and `fold(x) = min(x, alpha - x)`.
pub fn normalize_knot(alpha: &BigInt, beta: &BigInt) -> Result<KnotParams, Error> {
    check_alpha(alpha)?;
    let b = beta.mod_floor(alpha);
    if b.is_zero() || alpha.gcd(&b) != BigInt::one() {
        return Err(Error::NotCoprime {
            alpha: alpha.clone(),
            beta: beta.clone(),
        });
    }
    let inv = mod_inverse(&b, alpha);
    let fold = |x: BigInt| {
        if &x * 2 < *alpha {
            x
        } else {
            alpha - x
        }
    };
    let beta_star = fold(b).min(fold(inv));
    KnotParams::new(alpha.clone(), beta_star)
}

/// Reduces `beta` mod `alpha` and mirror-folds it into `(0, alpha/2)`,
/// *without* switching to the inverse representative.
///
/// Unlike [`normalize_knot`] this keeps the knot the caller named (up to the
/// mirror fold the parameter bounds force); `normalize_knot` may land on the
/// inverse class member instead, which is what range censuses deduplicate by.
pub fn fold_knot(alpha: &BigInt, beta: &BigInt) -> Result<KnotParams, Error> {
    check_alpha(alpha)?;
    let b = beta.mod_floor(alpha);
    if b.is_zero() || alpha.gcd(&b) != BigInt::one() {
        return Err(Error::NotCoprime {
            alpha: alpha.clone(),
            beta: beta.clone(),
        });
    }
    let folded = if &b * 2 < *alpha { b } else { alpha - b };
    KnotParams::new(alpha.clone(), folded)
}

/// Inverse of `b` modulo `m`; `b` must be coprime to `m`.
fn mod_inverse(b: &BigInt, m: &BigInt) -> BigInt {
    let ext = b.extended_gcd(m);
    debug_assert!(ext.gcd.is_one());
    ext.x.mod_floor(m)
}

/// Expansion with every quotient `>= 1` and the final quotient `>= 2`; unique
/// for each value. `m1 >= 2` holds whenever the value comes from normalized
/// [`KnotParams`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositiveExpansion {
    entries: Vec<BigInt>,
}

impl PositiveExpansion {
    pub fn new(entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        for (idx, value) in entries.iter().enumerate() {
            if !value.is_positive() {
                return Err(Error::NonPositiveEntry {
                    position: idx + 1,
                    value: value.clone(),
                });
            }
        }
        let last = entries.last().unwrap();
        if last.is_one() {
            return Err(Error::TrailingOne { value: last.clone() });
        }
        Ok(PositiveExpansion { entries })
    }

    pub fn from_u64s(entries: &[u64]) -> Result<Self, Error> {
        Self::new(entries.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for PositiveExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_entries(&self.entries, f)
    }
}

/// Expansion with every quotient of magnitude `>= 2`. Every proper tail of
/// such an expansion evaluates strictly inside `(-1, 1)`, so evaluation never
/// divides by zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralExpansion {
    entries: Vec<BigInt>,
}

impl GeneralExpansion {
    pub fn new(entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        for (idx, value) in entries.iter().enumerate() {
            if value.abs() < BigInt::from(2) {
                return Err(Error::EntryTooSmall {
                    position: idx + 1,
                    value: value.clone(),
                });
            }
        }
        Ok(GeneralExpansion { entries })
    }

    pub fn from_i64s(entries: &[i64]) -> Result<Self, Error> {
        Self::new(entries.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Construction sites inside the crate that guarantee the invariant.
    pub(crate) fn from_vec_unchecked(entries: Vec<BigInt>) -> Self {
        debug_assert!(!entries.is_empty());
        debug_assert!(entries.iter().all(|v| v.abs() >= BigInt::from(2)));
        GeneralExpansion { entries }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_all_even(&self) -> bool {
        self.entries.iter().all(|v| v.is_even())
    }

    /// Exact value; total because the magnitude invariant rules out division
    /// by zero.
    pub fn value(&self) -> Fraction {
        evaluate(&self.entries).expect("entries with |n| >= 2 always evaluate")
    }
}

impl fmt::Display for GeneralExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_entries(&self.entries, f)
    }
}

fn display_entries(entries: &[BigInt], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "[")?;
    for (idx, value) in entries.iter().enumerate() {
        if idx > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{value}")?;
    }
    write!(f, "]")
}

/// Value of an expansion relative to a knot: `value = beta/alpha - shift`
/// with `shift` 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionValue {
    pub value: Fraction,
    pub shift: u8,
}

/// Evaluates `[n1, ..., nk]` right to left.
///
/// When every entry has magnitude `>= 2` the running tail is asserted to stay
/// strictly inside `(-1, 1)`; a violation would mean the fold itself is wrong.
pub fn evaluate(entries: &[BigInt]) -> Result<Fraction, Error> {
    if entries.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    if let Some(idx) = entries.iter().position(|v| v.is_zero()) {
        return Err(Error::ZeroEntry { position: idx + 1 });
    }
    let two = BigInt::from(2);
    let tails_bounded = entries.iter().all(|v| v.abs() >= two);
    let mut tail = Fraction::zero();
    for (idx, n) in entries.iter().enumerate().rev() {
        let denom = Fraction::from(n.clone()) + &tail;
        if denom.is_zero() {
            return Err(Error::DivisionByZero { position: idx + 1 });
        }
        tail = denom.recip();
        if tails_bounded {
            assert!(
                tail.numer().abs() < *tail.denom(),
                "tail {tail} escaped (-1, 1) at position {}",
                idx + 1
            );
        }
    }
    Ok(tail)
}

/// Checks that `exp` evaluates to `beta/alpha` or `beta/alpha - 1` and
/// reports which.
pub fn evaluate_with_shift(
    knot: &KnotParams,
    exp: &GeneralExpansion,
) -> Result<ExpansionValue, Error> {
    let value = evaluate(exp.entries())?;
    let target = knot.fraction();
    let shift = if value == target {
        0
    } else if value == &target - Fraction::one() {
        1
    } else {
        return Err(Error::NotAnExpansion {
            alpha: knot.alpha().clone(),
            beta: knot.beta().clone(),
            expansion: exp.to_string(),
        });
    };
    Ok(ExpansionValue { value, shift })
}

/// The positive expansion of `beta/alpha`: the quotients of the Euclidean
/// algorithm on `(alpha, beta)`.
pub fn euclid_expansion(knot: &KnotParams) -> PositiveExpansion {
    let mut a = knot.alpha().clone();
    let mut b = knot.beta().clone();
    let mut entries = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        entries.push(q);
        a = b;
        b = r;
    }
    // A trailing 1 would break the uniqueness contract; fold it into the
    // previous quotient.
    if entries.len() >= 2 && entries.last().unwrap().is_one() {
        entries.pop();
        *entries.last_mut().unwrap() += 1;
    }
    debug_assert!(entries.last().unwrap() >= &BigInt::from(2));
    PositiveExpansion { entries }
}

/// Starting value for the all-even expansion: `beta/alpha` when `beta` is
/// even, otherwise `(beta - alpha)/alpha`, so the numerator is always even
/// and the denominator odd.
fn even_seed(knot: &KnotParams) -> Fraction {
    if knot.beta().is_even() {
        knot.fraction()
    } else {
        Fraction::new(knot.beta() - knot.alpha(), knot.alpha().clone())
    }
}

/// Nearest even integer to `y`. Ties cannot occur here: a tie would need `y`
/// to be an odd integer, which the opposite-parity invariant of
/// [`even_expansion`] excludes.
fn nearest_even(y: &Fraction) -> BigInt {
    let twice_denom = y.denom() * 2;
    let low = (y.numer().div_floor(&twice_denom)) * 2;
    let high = &low + 2;
    let dist_low = y.numer() - &low * y.denom();
    let dist_high = &high * y.denom() - y.numer();
    assert!(dist_low != dist_high, "even rounding tie at {y}");
    if dist_low < dist_high {
        low
    } else {
        high
    }
}

/// The unique expansion of `beta/alpha` (mod 1) in which every quotient is
/// even.
///
/// Each step replaces `x` by `1/x - n` where `n` is the nearest even integer
/// to `1/x`. Since `|x| < 1` forces `|n| >= 2`, and numerator/denominator
/// keep opposite parities, the iteration is tie-free and the denominators
/// strictly decrease to termination.
pub fn even_expansion(knot: &KnotParams) -> GeneralExpansion {
    let mut x = even_seed(knot);
    let mut entries = Vec::new();
    while !x.is_zero() {
        let y = x.recip();
        let n = nearest_even(&y);
        let next = y - Fraction::from(n.clone());
        debug_assert!(next.denom() < x.denom(), "denominator failed to decrease");
        entries.push(n);
        x = next;
    }
    GeneralExpansion::from_vec_unchecked(entries)
}

/// An expansion describes a knot (rather than a two-component link) exactly
/// when the reduced denominator of its value is odd.
pub fn is_knot_expansion(entries: &[BigInt]) -> Result<bool, Error> {
    let value = evaluate(entries)?;
    Ok(value.denom().is_odd())
}
