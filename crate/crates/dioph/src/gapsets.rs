//! Digit-constrained sets of integers and their gap structure.
//!
//! `A(d_1, ..., d_{m+1})` is the set of positive integers whose Ostrowski
//! expansion starts with the given digits. Members are generated by stepping
//! through digit vectors in reverse-lexicographic order (the order that
//! matches numeric order), so enumeration costs O(#members). A full-scan
//! filter over `expand_int` is kept alongside as the test oracle.
//!
//! Consecutive members differ by `q_{m+1}` or `q_{m+1} + q_m` when
//! `d_{m+1} > 0`, and by `q_{m+1}` or `q_m` when `d_{m+1} = 0`, with each
//! `q_m` gap preceded by exactly `a_{m+2}` gaps of length `q_{m+1}`;
//! `verify_gaps` checks precisely that.

use crate::contfrac::ConvergentTable;
use crate::dyadic::{ln_int, DyInterval};
use crate::error::{Error, Result};
use crate::ostrowski::{expand_int, validate_digits};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// The fixed digit prefix `d_1, ..., d_{m+1}` (dense from k = 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitPrefix {
    pub digits: Vec<BigInt>,
}

impl DigitPrefix {
    pub fn new(digits: Vec<BigInt>) -> Self {
        DigitPrefix { digits }
    }

    /// Index m of the last prefix digit.
    pub fn m(&self) -> usize {
        self.digits.len() - 1
    }

    pub fn validate(&self, table: &ConvergentTable) -> Result<()> {
        if self.digits.is_empty() {
            return Err(Error::Domain("prefix must contain at least d_1".into()));
        }
        if self.digits.len() + 1 > table.internal_depth() {
            return Err(Error::StreamDepth {
                available: table.internal_depth(),
                needed: self.digits.len() + 1,
            });
        }
        let quots: Vec<BigInt> =
            (0..=self.digits.len() + 1).map(|k| table.a(k).clone()).collect();
        let verdict = validate_digits(&self.digits, &quots);
        if !verdict.valid {
            let (k, what) = verdict.violation.unwrap();
            return Err(Error::InvalidDigits(format!("prefix constraint at k = {k}: {what}")));
        }
        Ok(())
    }

    /// The smallest candidate member `n' = sum d_{k+1} q_k` (may be zero).
    pub fn n_prime(&self, table: &ConvergentTable) -> BigInt {
        let mut n = BigInt::zero();
        for (k, d) in self.digits.iter().enumerate() {
            n += d * table.q(k);
        }
        n
    }
}

/// A member together with its digit vector (dense, positions `0..len`).
#[derive(Clone, Debug)]
pub struct Member {
    pub n: BigInt,
    pub digits: Vec<BigInt>,
}

/// All members of `A(prefix) ∩ [1, N]` in increasing order, by digit-vector
/// stepping.
pub fn enumerate_a(
    prefix: &DigitPrefix,
    table: &ConvergentTable,
    n_max: &BigInt,
) -> Result<Vec<Member>> {
    prefix.validate(table)?;
    let m = prefix.m();
    let mut digits = prefix.digits.clone();
    let mut members = Vec::new();

    let value_of = |digits: &[BigInt]| -> BigInt {
        let mut n = BigInt::zero();
        for (k, d) in digits.iter().enumerate() {
            n += d * table.q(k);
        }
        n
    };

    let n0 = value_of(&digits);
    if n0 > BigInt::zero() && n0 <= *n_max {
        members.push(Member { n: n0, digits: digits.clone() });
    } else if n0 > *n_max {
        return Ok(members);
    }

    'outer: loop {
        // Advance to the next admissible digit vector above position m.
        let mut j = m + 1;
        loop {
            if j + 2 > table.internal_depth() {
                return Err(Error::StreamDepth {
                    available: table.internal_depth(),
                    needed: j + 2,
                });
            }
            if table.q(j) > n_max {
                break 'outer; // any further member would exceed the cap
            }
            while digits.len() <= j + 1 {
                digits.push(BigInt::zero());
            }
            let cur = digits[j].clone();
            let cap = table.a(j + 1).clone();
            let below_zero = if j == m + 1 {
                prefix.digits[m].is_zero()
            } else {
                true // positions m+1..j-1 are about to be reset to zero
            };
            let next = &cur + BigInt::one();
            let admissible = next <= cap
                && (next < cap || below_zero)
                && digits[j + 1] != *table.a(j + 2);
            if admissible {
                digits[j] = next;
                for d in digits.iter_mut().take(j).skip(m + 1) {
                    *d = BigInt::zero();
                }
                break;
            }
            j += 1;
        }
        let n = value_of(&digits);
        if n > *n_max {
            break;
        }
        members.push(Member { n, digits: digits.clone() });
    }
    Ok(members)
}

/// Oracle enumeration: expand every `n <= N` and filter on the prefix.
pub fn enumerate_a_by_scan(
    prefix: &DigitPrefix,
    table: &ConvergentTable,
    n_max: &BigInt,
) -> Result<Vec<BigInt>> {
    prefix.validate(table)?;
    let mut out = Vec::new();
    let mut n = BigInt::one();
    while &n <= n_max {
        let e = expand_int(table, &n)?;
        if prefix.digits.iter().enumerate().all(|(k, d)| &e.digit(k) == d) {
            out.push(n.clone());
        }
        n += BigInt::one();
    }
    Ok(out)
}

/// Which case of the gap structure applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapCase {
    /// `d_{m+1} > 0`: gaps in `{q_{m+1}, q_{m+1} + q_m}`.
    TopDigitPositive,
    /// `d_{m+1} = 0`: gaps in `{q_{m+1}, q_m}` with the run precondition.
    TopDigitZero,
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub member_count: usize,
    pub case: GapCase,
    /// gap value -> multiplicity
    pub gap_multiset: BTreeMap<BigInt, usize>,
    pub violations: Vec<String>,
}

impl GapReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the gap alphabet and, in the top-digit-zero case, that every
/// `q_m` gap closes a run of exactly `a_{m+2}` gaps of length `q_{m+1}`
/// started by a member with `c_{m+2} = a_{m+2}` on its left endpoint.
pub fn verify_gaps(
    members: &[Member],
    prefix: &DigitPrefix,
    table: &ConvergentTable,
) -> GapReport {
    let m = prefix.m();
    let case = if prefix.digits[m].is_zero() {
        GapCase::TopDigitZero
    } else {
        GapCase::TopDigitPositive
    };
    let q_m = table.q(m).clone();
    let q_m1 = table.q(m + 1).clone();
    let sum_gap = &q_m1 + &q_m;
    let a_m2 = table.a(m + 2).clone();

    let mut gaps: BTreeMap<BigInt, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut run_of_qm1 = 0usize;

    for i in 1..members.len() {
        let gap = &members[i].n - &members[i - 1].n;
        *gaps.entry(gap.clone()).or_insert(0) += 1;
        match case {
            GapCase::TopDigitPositive => {
                if gap != q_m1 && gap != sum_gap {
                    violations.push(format!(
                        "gap {gap} at member {} outside {{q_{}, q_{} + q_{}}}",
                        members[i - 1].n,
                        m + 1,
                        m + 1,
                        m
                    ));
                }
            }
            GapCase::TopDigitZero => {
                if gap == q_m1 {
                    run_of_qm1 += 1;
                } else if gap == q_m {
                    let c_m2 = members[i - 1].digits.get(m + 1).cloned().unwrap_or_else(BigInt::zero);
                    if c_m2 != a_m2 {
                        violations.push(format!(
                            "q_m gap at member {} without c_{{m+2}} = a_{{m+2}}",
                            members[i - 1].n
                        ));
                    }
                    let need: usize = (&a_m2).try_into().unwrap_or(usize::MAX);
                    // The run may be cut short by the bottom of the set: the
                    // would-be predecessors n_i - j q_{m+1} fall below 1.
                    let reaches_list_head = run_of_qm1 == i - 1;
                    if run_of_qm1 < need && !reaches_list_head {
                        violations.push(format!(
                            "q_m gap at member {} preceded by only {run_of_qm1} gaps of q_{{m+1}}",
                            members[i - 1].n
                        ));
                    }
                    run_of_qm1 = 0;
                } else {
                    violations.push(format!(
                        "gap {gap} at member {} outside {{q_{}, q_{}}}",
                        members[i - 1].n,
                        m + 1,
                        m
                    ));
                    run_of_qm1 = 0;
                }
            }
        }
    }

    GapReport { member_count: members.len(), case, gap_multiset: gaps, violations }
}

/// Two-sided cardinality check `N/(3 q_{m+1}) <= #A_N <= 3N/q_{m+1} + 1`.
#[derive(Clone, Debug)]
pub struct GapCountReport {
    pub count: usize,
    pub lower: BigRational,
    pub upper: BigRational,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl GapCountReport {
    pub fn pass(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

pub fn count_bounds(
    members: &[Member],
    prefix: &DigitPrefix,
    table: &ConvergentTable,
    n_max: &BigInt,
) -> Result<GapCountReport> {
    if members.is_empty() {
        return Err(Error::Domain("count bounds need at least one member".into()));
    }
    let m = prefix.m();
    let q_m1 = BigRational::from(table.q(m + 1).clone());
    let n_rat = BigRational::from(n_max.clone());
    let lower = &n_rat / (&q_m1 * BigRational::from(BigInt::from(3)));
    let upper = &n_rat * BigRational::from(BigInt::from(3)) / &q_m1 + BigRational::one();
    let count_rat = BigRational::from(BigInt::from(members.len()));
    Ok(GapCountReport {
        count: members.len(),
        lower_ok: lower <= count_rat,
        upper_ok: count_rat <= upper,
        lower,
        upper,
    })
}

/// Certified check of `sum_{n in A_N, n != n'} 1/n <= 5 log N / q_{m+1}`.
#[derive(Clone, Debug)]
pub struct HarmonicReport {
    pub sum: DyInterval,
    pub bound: DyInterval,
    pub pass: bool,
}

pub fn harmonic_sum_a(
    members: &[Member],
    n_prime: &BigInt,
    n_max: &BigInt,
    prefix: &DigitPrefix,
    table: &ConvergentTable,
) -> Result<HarmonicReport> {
    if n_max < &BigInt::from(3) {
        return Err(Error::Domain("harmonic bound needs N >= 3".into()));
    }
    let prec = 160u32;
    let mut sum = DyInterval::zero();
    for mem in members {
        if &mem.n == n_prime {
            continue;
        }
        sum = sum.add(&DyInterval::from_bigint(&mem.n).recip(prec)).round_to(prec);
    }
    let m = prefix.m();
    let bound = ln_int(n_max, prec)
        .mul(&DyInterval::from_i64(5))
        .div(&DyInterval::from_bigint(table.q(m + 1)), prec);
    let pass = sum.certainly_le(&bound) || sum.hi.cmp_dy(&bound.lo) == std::cmp::Ordering::Equal;
    Ok(HarmonicReport { sum, bound, pass })
}
