//! Whole-range censuses of repeated boundary slopes.
//!
//! The per-knot workhorse is [`collision_dp`]: a left-to-right dynamic
//! program over the choice window `(chose(p-1), chose(p))` that histograms
//! the signed sums of all allowable sub-tuples without enumerating them. Two
//! sub-tuples share a boundary slope exactly when they share a signed sum, so
//! the histogram answers the repeated-slope question in `O(k * sum(m_i))`
//! counter updates per knot.
//!
//! [`run_census`] walks every canonical knot in a range in `(alpha, beta)`
//! order, computes records in parallel chunks, and writes them strictly in
//! order, so the output bytes do not depend on the worker count. Every
//! `spot_check_interval`-th knot is recomputed the slow way (full expansion
//! report plus oracle bijection) and cross-checked.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::cf::{KnotParams, PositiveExpansion};
use crate::error::Error;
use crate::oracle::verify_bijection;
use crate::slope::{is_superincreasing, knot_report, ReportMode};
use crate::subtuple::is_symmetric;

/// Largest quotient sum the dense signed-sum counters will address.
pub const DP_SUM_CEILING: u64 = 1 << 20;

/// Signed sum -> number of allowable sub-tuples attaining it. The knot-level
/// `delta` is *not* included; callers add it when converting to slopes.
pub type SignedSumHistogram = BTreeMap<i64, u128>;

/// Histograms the signed sums `sum over chosen i of (-1)^i * m_i` of every
/// allowable sub-tuple of `m`.
pub fn collision_dp(m: &PositiveExpansion) -> Result<SignedSumHistogram, Error> {
    let too_large = || Error::SumRangeTooLarge {
        sum: m.entries().iter().sum(),
        ceiling: DP_SUM_CEILING,
    };
    let quotients = m
        .entries()
        .iter()
        .map(|v| u64::try_from(v).map_err(|_| too_large()))
        .collect::<Result<Vec<u64>, Error>>()?;
    collision_dp_core(&quotients)
}

fn collision_dp_core(quotients: &[u64]) -> Result<SignedSumHistogram, Error> {
    let total = quotients
        .iter()
        .try_fold(0u64, |acc, &q| acc.checked_add(q))
        .filter(|&t| t <= DP_SUM_CEILING)
        .ok_or_else(|| Error::SumRangeTooLarge {
            sum: quotients.iter().map(|&q| u128::from(q)).sum::<u128>().into(),
            ceiling: DP_SUM_CEILING,
        })?;
    let k = quotients.len();
    let offset = total as usize;
    let width = 2 * offset + 1;

    // Four states per sum cell: bit 1 = chose(p-1), bit 0 = chose(p).
    let mut cur = vec![0u128; 4 * width];
    let mut next = vec![0u128; 4 * width];
    // Signed contribution of choosing position p (1-based): -m_p for odd p.
    let contribution = |p: usize| -> i64 {
        let q = quotients[p - 1] as i64;
        if p % 2 == 1 {
            -q
        } else {
            q
        }
    };

    cur[offset] = 1; // state 00, empty sum
    let first = (offset as i64 + contribution(1)) as usize;
    cur[width + first] = 1; // state 01: position 1 chosen
    let mut lo = first.min(offset);
    let mut hi = offset;

    for p in 1..k {
        let delta = contribution(p + 1);
        let new_lo = if delta < 0 {
            lo - delta.unsigned_abs() as usize
        } else {
            lo
        };
        let new_hi = if delta > 0 { hi + delta as usize } else { hi };
        for state in 0..4 {
            next[state * width + new_lo..state * width + new_hi + 1].fill(0);
        }
        let one_here = quotients[p - 1] == 1;
        for state in 0..4usize {
            let prev = state & 2 != 0;
            let chose = state & 1 != 0;
            for cell in lo..=hi {
                let count = cur[state * width + cell];
                if count == 0 {
                    continue;
                }
                for chose_next in [false, true] {
                    if chose_next && chose {
                        continue;
                    }
                    if one_here && !(prev || chose || chose_next) {
                        continue;
                    }
                    let new_state = usize::from(chose) << 1 | usize::from(chose_next);
                    let new_cell = if chose_next {
                        (cell as i64 + delta) as usize
                    } else {
                        cell
                    };
                    let slot = &mut next[new_state * width + new_cell];
                    *slot = slot.checked_add(count).ok_or(Error::CountOverflow)?;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        lo = new_lo;
        hi = new_hi;
    }

    let mut histogram = SignedSumHistogram::new();
    let last_is_one = quotients[k - 1] == 1;
    for state in 0..4usize {
        let prev = state & 2 != 0;
        let chose = state & 1 != 0;
        if last_is_one && !(prev || chose) {
            continue;
        }
        for cell in lo..=hi {
            let count = cur[state * width + cell];
            if count != 0 {
                let sum = cell as i64 - offset as i64;
                let slot = histogram.entry(sum).or_insert(0);
                *slot = slot.checked_add(count).ok_or(Error::CountOverflow)?;
            }
        }
    }
    Ok(histogram)
}

/// All canonical `beta` for a fixed `alpha`, ascending: coprime, below
/// `alpha/2`, and not exceeding the folded modular inverse.
pub fn canonical_representatives(alpha: u64) -> Result<Vec<KnotParams>, Error> {
    Ok(canonical_betas(alpha)?
        .into_iter()
        .map(|beta| {
            KnotParams::new(BigInt::from(alpha), BigInt::from(beta))
                .expect("canonical beta is valid")
        })
        .collect())
}

fn canonical_betas(alpha: u64) -> Result<Vec<u64>, Error> {
    if alpha < 3 {
        return Err(Error::AlphaTooSmall {
            alpha: BigInt::from(alpha),
        });
    }
    if alpha % 2 == 0 {
        return Err(Error::EvenAlpha {
            alpha: BigInt::from(alpha),
        });
    }
    let half = (alpha - 1) / 2;
    let mut out = Vec::new();
    for beta in 1..=half {
        if beta.gcd(&alpha) != 1 {
            continue;
        }
        let inv = mod_inverse_u64(beta, alpha);
        let folded_inv = if inv <= half { inv } else { alpha - inv };
        if beta <= folded_inv {
            out.push(beta);
        }
    }
    Ok(out)
}

fn mod_inverse_u64(b: u64, m: u64) -> u64 {
    // Extended Euclid in i128; b coprime to m.
    let (mut r0, mut r1) = (m as i128, b as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(m as i128) as u64
}

// Machine-integer twins of the arbitrary-precision pipeline. Census alphas
// fit in u64, so records avoid bigint allocation entirely; every 97th record
// is still recomputed through the bigint path by `spot_check`, and the unit
// tests pin exhaustive agreement on small ranges.

/// Quotients of the positive expansion of `beta/alpha`.
fn euclid_u64(alpha: u64, beta: u64) -> Vec<u64> {
    debug_assert!(0 < beta && beta < alpha);
    let mut quotients = Vec::new();
    let (mut a, mut b) = (alpha, beta);
    while b != 0 {
        quotients.push(a / b);
        (a, b) = (b, a % b);
    }
    // The final quotient of a reduced proper fraction is never 1, but keep
    // the fold so the twin matches its bigint counterpart by construction.
    if quotients.len() > 1 && quotients.last() == Some(&1) {
        quotients.pop();
        *quotients.last_mut().unwrap() += 1;
    }
    quotients
}

/// `n0+ - n0-` of the all-even expansion, without materializing it.
fn even_sign_diff(alpha: u64, beta: u64) -> i64 {
    let alpha_i = alpha as i128;
    let beta_i = beta as i128;
    // x = beta_e/alpha with beta_e the even one of beta, beta - alpha.
    let mut num = if beta % 2 == 0 { beta_i } else { beta_i - alpha_i };
    let mut den = alpha_i;
    let mut diff = 0i64;
    let mut odd_position = true;
    while num != 0 {
        // 1/x = p/q with q > 0; the nearest even integer n is 2f or 2f + 2.
        let (p, q) = if num > 0 { (den, num) } else { (-den, -num) };
        let f = p.div_euclid(2 * q);
        let r = p - 2 * f * q;
        debug_assert_ne!(r, q, "nearest-even tie for {p}/{q}");
        let n = if r < q { 2 * f } else { 2 * f + 2 };
        debug_assert!(n.abs() >= 2);
        let next = p - n * q;
        debug_assert!(next.abs() < q && q < den, "tail failed to shrink");
        diff += if odd_position == (n > 0) { 1 } else { -1 };
        (num, den) = (next, q);
        odd_position = !odd_position;
    }
    diff
}

fn is_superincreasing_u64(quotients: &[u64]) -> bool {
    let mut sum = 0u64;
    for &q in quotients {
        if q <= sum {
            return false;
        }
        sum += q;
    }
    true
}

fn is_symmetric_u64(quotients: &[u64]) -> bool {
    quotients.len() % 2 == 1 && quotients.iter().eq(quotients.iter().rev())
}

/// One row of census output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRecord {
    pub alpha: u64,
    pub beta: u64,
    pub k: usize,
    pub num_subtuples: u128,
    pub num_distinct_slopes: usize,
    pub num_repeated_slopes: usize,
    pub has_repeat: bool,
    pub is_superincreasing: bool,
    pub is_symmetric: bool,
    /// `(slope, multiplicity)` ascending by slope.
    pub slopes: Vec<(i64, u128)>,
}

fn census_record(alpha: u64, beta: u64) -> Result<CensusRecord, Error> {
    let quotients = euclid_u64(alpha, beta);
    let histogram = collision_dp_core(&quotients)?;
    let n0 = even_sign_diff(alpha, beta);
    let delta = (quotients.len() % 2) as i64;
    let mut num_subtuples: u128 = 0;
    let mut num_repeated_slopes = 0;
    // The sum -> slope map is affine increasing, so the histogram order is
    // already slope order.
    let mut slopes = Vec::with_capacity(histogram.len());
    for (sum, count) in &histogram {
        let slope = 2 * (sum + delta - n0);
        num_subtuples = num_subtuples
            .checked_add(*count)
            .ok_or(Error::CountOverflow)?;
        if *count >= 2 {
            num_repeated_slopes += 1;
        }
        slopes.push((slope, *count));
    }
    Ok(CensusRecord {
        alpha,
        beta,
        k: quotients.len(),
        num_subtuples,
        num_distinct_slopes: slopes.len(),
        num_repeated_slopes,
        has_repeat: num_repeated_slopes > 0,
        is_superincreasing: is_superincreasing_u64(&quotients),
        is_symmetric: is_symmetric_u64(&quotients),
        slopes,
    })
}

/// Recomputes a record the slow way and confronts it with the DP answer.
fn spot_check(record: &CensusRecord) -> Result<(), Error> {
    let knot = KnotParams::new(BigInt::from(record.alpha), BigInt::from(record.beta))?;
    let fail = |detail: String| Error::SpotCheckFailed {
        alpha: BigInt::from(record.alpha),
        beta: BigInt::from(record.beta),
        detail,
    };
    let report = knot_report(&knot, ReportMode::Full)?;
    let mut expected: BTreeMap<i64, u128> = BTreeMap::new();
    for entry in &report.entries {
        let slope = i64::try_from(&entry.slope)
            .map_err(|_| fail(format!("slope {} out of range", entry.slope)))?;
        *expected.entry(slope).or_insert(0) += 1;
    }
    let got: BTreeMap<i64, u128> = record.slopes.iter().copied().collect();
    if expected != got {
        return Err(fail(format!(
            "slope histogram mismatch: report {expected:?}, dp {got:?}"
        )));
    }
    if report.collisions.len() != record.num_repeated_slopes {
        return Err(fail(format!(
            "collision count mismatch: report {}, dp {}",
            report.collisions.len(),
            record.num_repeated_slopes
        )));
    }
    if record.k != report.positive.len()
        || record.num_subtuples != report.entries.len() as u128
        || record.is_superincreasing != is_superincreasing(&report.positive)
        || record.is_symmetric != is_symmetric(&report.positive)
    {
        return Err(fail(format!(
            "record fields diverge from the full report for {}",
            report.positive
        )));
    }
    let bijection = verify_bijection(&knot)?;
    if !bijection.is_bijective() {
        return Err(fail(format!("oracle bijection failed: {bijection}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFormat {
    Csv,
    Jsonl,
}

pub const CSV_HEADER: &str = "alpha,beta,k,num_subtuples,num_distinct_slopes,num_repeated_slopes,has_repeat,is_superincreasing,is_symmetric,slopes";

fn push_record(record: &CensusRecord, format: CensusFormat, line: &mut String) {
    use std::fmt::Write as _;
    match format {
        CensusFormat::Csv => {
            write!(
                line,
                "{},{},{},{},{},{},{},{},{},",
                record.alpha,
                record.beta,
                record.k,
                record.num_subtuples,
                record.num_distinct_slopes,
                record.num_repeated_slopes,
                record.has_repeat,
                record.is_superincreasing,
                record.is_symmetric
            )
            .unwrap();
            for (idx, (slope, count)) in record.slopes.iter().enumerate() {
                if idx > 0 {
                    line.push(';');
                }
                write!(line, "{slope}:{count}").unwrap();
            }
        }
        CensusFormat::Jsonl => {
            write!(
                line,
                "{{\"alpha\":{},\"beta\":{},\"k\":{},\"num_subtuples\":{},\
                 \"num_distinct_slopes\":{},\"num_repeated_slopes\":{},\
                 \"has_repeat\":{},\"is_superincreasing\":{},\"is_symmetric\":{},\"slopes\":[",
                record.alpha,
                record.beta,
                record.k,
                record.num_subtuples,
                record.num_distinct_slopes,
                record.num_repeated_slopes,
                record.has_repeat,
                record.is_superincreasing,
                record.is_symmetric
            )
            .unwrap();
            for (idx, (slope, count)) in record.slopes.iter().enumerate() {
                if idx > 0 {
                    line.push(',');
                }
                write!(line, "[{slope},{count}]").unwrap();
            }
            line.push_str("]}");
        }
    }
    line.push('\n');
}

#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub min_alpha: u64,
    pub max_alpha: u64,
    pub workers: usize,
    pub format: CensusFormat,
    /// Every n-th canonical knot is recomputed via the full report and the
    /// oracle; 0 disables spot checks.
    pub spot_check_interval: u64,
}

impl CensusConfig {
    pub fn new(min_alpha: u64, max_alpha: u64, workers: usize, format: CensusFormat) -> Self {
        CensusConfig {
            min_alpha,
            max_alpha,
            workers,
            format,
            spot_check_interval: 97,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusSummary {
    pub min_alpha: u64,
    pub max_alpha: u64,
    pub knots: u64,
    pub with_repeat: u64,
    pub superincreasing: u64,
    pub symmetric: u64,
    pub spot_checks: u64,
}

impl CensusSummary {
    /// Deterministic single-line JSON; the repeat fraction is rendered with
    /// six decimal places of integer arithmetic.
    pub fn to_json_string(&self) -> String {
        let fraction = if self.knots == 0 {
            "0".to_string()
        } else {
            let whole = self.with_repeat / self.knots;
            let rem = (self.with_repeat % self.knots) as u128;
            let scaled = rem * 1_000_000 / self.knots as u128;
            format!("{whole}.{scaled:06}")
        };
        format!(
            "{{\"min_alpha\":{},\"max_alpha\":{},\"knots\":{},\"with_repeat\":{},\
             \"repeat_fraction\":{},\"superincreasing\":{},\"symmetric\":{},\"spot_checks\":{}}}",
            self.min_alpha,
            self.max_alpha,
            self.knots,
            self.with_repeat,
            fraction,
            self.superincreasing,
            self.symmetric,
            self.spot_checks
        )
    }
}

pub(crate) fn build_pool(workers: usize) -> Result<rayon::ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        // The oracle recursion that spot checks run is as deep as the longest
        // expansion, so give workers room.
        .stack_size(32 << 20)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))
}

/// Runs the census over every canonical knot with `min_alpha <= alpha <=
/// max_alpha`, writing one record per knot to `sink` in `(alpha, beta)`
/// order. Output is byte-for-byte identical across reruns and worker counts.
pub fn run_census(cfg: &CensusConfig, sink: &mut dyn Write) -> Result<CensusSummary, Error> {
    if cfg.min_alpha > cfg.max_alpha || cfg.max_alpha < 3 {
        return Err(Error::BadCensusRange {
            min_alpha: cfg.min_alpha,
            max_alpha: cfg.max_alpha,
        });
    }
    let pool = build_pool(cfg.workers)?;
    let mut summary = CensusSummary {
        min_alpha: cfg.min_alpha,
        max_alpha: cfg.max_alpha,
        knots: 0,
        with_repeat: 0,
        superincreasing: 0,
        symmetric: 0,
        spot_checks: 0,
    };
    let mut written: u64 = 0;
    if cfg.format == CensusFormat::Csv {
        sink.write_all(CSV_HEADER.as_bytes())
            .and_then(|_| sink.write_all(b"\n"))
            .map_err(|source| Error::SinkIo { index: 0, source })?;
    }

    const CHUNK: usize = 2048;
    let mut pending: Vec<(u64, u64, bool)> = Vec::with_capacity(CHUNK);
    let mut line = String::new();
    let mut flush = |pending: &mut Vec<(u64, u64, bool)>,
                     summary: &mut CensusSummary,
                     written: &mut u64|
     -> Result<(), Error> {
        let records = pool.install(|| {
            pending
                .par_iter()
                .map(|&(alpha, beta, spot)| {
                    let record = census_record(alpha, beta)?;
                    if spot {
                        spot_check(&record)?;
                    }
                    Ok(record)
                })
                .collect::<Result<Vec<CensusRecord>, Error>>()
        })?;
        for (record, &(_, _, spot)) in records.iter().zip(pending.iter()) {
            line.clear();
            push_record(record, cfg.format, &mut line);
            sink.write_all(line.as_bytes()).map_err(|source| Error::SinkIo {
                index: *written,
                source,
            })?;
            *written += 1;
            summary.knots += 1;
            summary.with_repeat += u64::from(record.has_repeat);
            summary.superincreasing += u64::from(record.is_superincreasing);
            summary.symmetric += u64::from(record.is_symmetric);
            summary.spot_checks += u64::from(spot);
        }
        pending.clear();
        Ok(())
    };

    let mut start = cfg.min_alpha.max(3);
    if start % 2 == 0 {
        start += 1;
    }
    let mut global_index: u64 = 0;
    for alpha in (start..=cfg.max_alpha).step_by(2) {
        for beta in canonical_betas(alpha)? {
            let spot =
                cfg.spot_check_interval > 0 && global_index % cfg.spot_check_interval == 0;
            pending.push((alpha, beta, spot));
            global_index += 1;
            if pending.len() == CHUNK {
                flush(&mut pending, &mut summary, &mut written)?;
            }
        }
    }
    flush(&mut pending, &mut summary, &mut written)?;
    sink.flush()
        .map_err(|source| Error::SinkIo { index: written, source })?;
    Ok(summary)
}
