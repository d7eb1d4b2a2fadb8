//! Counting solutions of `||n*alpha - gamma|| < eps` for `n <= N`, by
//! certified brute force, together with the explicit two-sided bounds the
//! count must satisfy.
//!
//! Membership of each `n` is decided by interval refinement with an exact
//! fallback for quadratic alphas — boundary cases are never guessed. Scans
//! parallelize over disjoint ranges with an associative count reduction, so
//! results are deterministic.

use crate::contfrac::ConvergentTable;
use crate::error::{Error, Result};
use crate::value::{GammaValue, NormEngine};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

/// Certified count of `{1 <= n <= N : ||n alpha - gamma|| < eps}`.
pub fn brute_force_count(
    table: &ConvergentTable,
    gamma: &GammaValue,
    eps: &BigRational,
    n_max: &BigInt,
) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let engine = NormEngine::for_table(table, gamma.clone(), 96)?;
    let n_max_u = n_max
        .to_u64()
        .ok_or_else(|| Error::Domain("N too large for a desk-scale scan".into()))?;
    let chunk = 4096u64;
    let ranges: Vec<(u64, u64)> = (1..=n_max_u)
        .step_by(chunk as usize)
        .map(|lo| (lo, (lo + chunk - 1).min(n_max_u)))
        .collect();
    let results: Vec<Result<u64>> = ranges
        .par_iter()
        .map(|(lo, hi)| {
            let mut c = 0u64;
            for n in *lo..=*hi {
                if engine.lt_eps(&BigInt::from(n), eps)? {
                    c += 1;
                }
            }
            Ok(c)
        })
        .collect();
    let mut total = 0u64;
    for r in results {
        total += r?;
    }
    Ok(total)
}

/// Report for the homogeneous count with every applicable bound checked.
#[derive(Clone, Debug)]
pub struct HomCountReport {
    pub count: u64,
    pub eps: BigRational,
    pub n_max: BigInt,
    pub k_index: usize,
    /// `2 eps < ||q_2 alpha||`
    pub hyp_eps_small: bool,
    /// some `q_l` lies in `[1/(2 eps), N]`
    pub hyp_window: bool,
    /// `1/N < 2 eps`
    pub hyp_inv_n: bool,
    pub floor_eps_n: BigInt,
    pub bound_32_eps_n: BigRational,
    /// `min(eps q_{K+1}, max(eps N, N/(2 q_K)))`
    pub m_value: Option<BigRational>,
    /// Verdict `floor(eps N) <= count <= 32 eps N` (when its hypotheses hold).
    pub verdict_eps_window: Option<bool>,
    /// Verdict `floor(M) <= count <= 32 M` (when `1/N < 2 eps < ||q_2 a||`).
    pub verdict_m: Option<bool>,
    /// Lower bound `count >= floor(eps N)` whenever `eps N >= 1`.
    pub verdict_minkowski: Option<bool>,
    /// Lower bound `count >= min(floor(eps q_{K+1}), floor(N/q_K))`.
    pub verdict_multiples: bool,
}

impl HomCountReport {
    pub fn all_pass(&self) -> bool {
        self.verdict_eps_window.unwrap_or(true)
            && self.verdict_m.unwrap_or(true)
            && self.verdict_minkowski.unwrap_or(true)
            && self.verdict_multiples
    }
}

/// Exact `||q_2 alpha||` comparison: is `2 eps < |D_2|`?
fn two_eps_below_d2(table: &ConvergentTable, eps: &BigRational) -> Result<bool> {
    let two_eps = eps * BigRational::from(BigInt::from(2));
    match table.abs_d(2) {
        crate::contfrac::AbsD::Exact(x) => {
            Ok(x.cmp_rational(&two_eps) == std::cmp::Ordering::Greater)
        }
        crate::contfrac::AbsD::Enclosure { lo, hi } => {
            if two_eps < lo {
                Ok(true)
            } else if two_eps >= hi {
                Ok(false)
            } else {
                Err(Error::PrecisionCap {
                    cap: 0,
                    context: "2 eps vs ||q_2 alpha|| undecided by the stream hull".into(),
                })
            }
        }
    }
}

pub fn count_hom(
    table: &ConvergentTable,
    eps: &BigRational,
    n_max: &BigInt,
) -> Result<HomCountReport> {
    let count = brute_force_count(table, &GammaValue::zero(), eps, n_max)?;
    let k_index = table.k_of(n_max)?;
    let eps_n = eps * BigRational::from(n_max.clone());
    let floor_eps_n = eps_n.floor().to_integer();
    let bound_32 = &eps_n * BigRational::from(BigInt::from(32));

    let hyp_eps_small = two_eps_below_d2(table, eps)?;
    let inv_two_eps = (eps * BigRational::from(BigInt::from(2))).recip();
    let hyp_window = (0..=table.internal_depth()).any(|l| {
        let q = BigRational::from(table.q(l).clone());
        q >= inv_two_eps && q <= BigRational::from(n_max.clone())
    });
    let hyp_inv_n = BigRational::from(n_max.clone()).recip()
        < eps * BigRational::from(BigInt::from(2));

    let count_rat = BigRational::from(BigInt::from(count));

    let verdict_eps_window = if hyp_eps_small && hyp_window {
        Some(BigRational::from(floor_eps_n.clone()) <= count_rat && count_rat <= bound_32)
    } else {
        None
    };

    let (m_value, verdict_m) = if hyp_inv_n && hyp_eps_small {
        let q_k = BigRational::from(table.q(k_index).clone());
        let q_k1 = BigRational::from(table.q(k_index + 1).clone());
        let half_ratio = BigRational::from(n_max.clone())
            / (&q_k * BigRational::from(BigInt::from(2)));
        let m = (eps * &q_k1).min(eps_n.clone().max(half_ratio));
        let ok = BigRational::from(m.floor().to_integer()) <= count_rat
            && count_rat <= &m * BigRational::from(BigInt::from(32));
        (Some(m), Some(ok))
    } else {
        (None, None)
    };

    let verdict_minkowski = if eps_n >= BigRational::one() {
        Some(count_rat >= BigRational::from(floor_eps_n.clone()))
    } else {
        None
    };

    let q_k = BigRational::from(table.q(k_index).clone());
    let q_k1 = BigRational::from(table.q(k_index + 1).clone());
    let lower_mult = (eps * &q_k1)
        .floor()
        .min((BigRational::from(n_max.clone()) / &q_k).floor());
    let verdict_multiples = count_rat >= lower_mult;

    Ok(HomCountReport {
        count,
        eps: eps.clone(),
        n_max: n_max.clone(),
        k_index,
        hyp_eps_small,
        hyp_window,
        hyp_inv_n,
        floor_eps_n,
        bound_32_eps_n: bound_32,
        m_value,
        verdict_eps_window,
        verdict_m,
        verdict_minkowski,
        verdict_multiples,
    })
}

/// Report for the inhomogeneous count and its transfer inequalities.
#[derive(Clone, Debug)]
pub struct InhomCountReport {
    pub count: u64,
    pub hom_double_eps: u64,
    /// `count <= hom_double_eps + 1` (always required).
    pub upper_transfer_ok: bool,
    /// Whether the half-size inhomogeneous set was nonempty.
    pub half_set_nonempty: bool,
    pub hom_half: Option<u64>,
    /// `count >= hom_half + 1` (required when the half set is nonempty).
    pub lower_transfer_ok: Option<bool>,
}

impl InhomCountReport {
    pub fn all_pass(&self) -> bool {
        self.upper_transfer_ok && self.lower_transfer_ok.unwrap_or(true)
    }
}

pub fn count_inhom(
    table: &ConvergentTable,
    gamma: &GammaValue,
    eps: &BigRational,
    n_max: &BigInt,
) -> Result<InhomCountReport> {
    let count = brute_force_count(table, gamma, eps, n_max)?;
    let two = BigRational::from(BigInt::from(2));
    let hom_double = brute_force_count(table, &GammaValue::zero(), &(eps * &two), n_max)?;
    let upper_transfer_ok = count <= hom_double + 1;

    let half_n = n_max / BigInt::from(2);
    let half_eps = eps / &two;
    let (half_set_nonempty, hom_half, lower_transfer_ok) = if half_n >= BigInt::one() {
        let inhom_half = brute_force_count(table, gamma, &half_eps, &half_n)?;
        if inhom_half >= 1 {
            let hom_half = brute_force_count(table, &GammaValue::zero(), &half_eps, &half_n)?;
            (true, Some(hom_half), Some(count >= hom_half + 1))
        } else {
            (false, None, None)
        }
    } else {
        (false, None, None)
    };

    Ok(InhomCountReport {
        count,
        hom_double_eps: hom_double,
        upper_transfer_ok,
        half_set_nonempty,
        hom_half,
        lower_transfer_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::RealSpec;
    use crate::value::resolve_gamma;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn golden_table() -> ConvergentTable {
        ConvergentTable::build_from_spec(&RealSpec::Golden, 40).unwrap()
    }

    #[test]
    fn golden_eps_twentieth() {
        let t = golden_table();
        let r = count_hom(&t, &rat(1, 20), &BigInt::from(200)).unwrap();
        assert_eq!(r.count, 20);
        assert!(r.hyp_eps_small && r.hyp_window);
        assert_eq!(r.verdict_eps_window, Some(true));
        assert!(r.all_pass());
    }

    #[test]
    fn eps_half_counts_everything() {
        let t = golden_table();
        let r = count_hom(&t, &rat(1, 2), &BigInt::from(50)).unwrap();
        assert_eq!(r.count, 50, "||x|| <= 1/2 always, so strict < 1/2 ~ everything");
        assert!(!r.hyp_eps_small);
        assert!(r.verdict_eps_window.is_none());
    }

    #[test]
    fn hypothesis_gate_large_eps() {
        let t = golden_table();
        // 2 eps >= ||q_2 alpha|| = |D_2| = 0.2360: take eps = 1/5.
        let r = count_hom(&t, &rat(1, 5), &BigInt::from(100)).unwrap();
        assert!(!r.hyp_eps_small);
        assert!(r.verdict_eps_window.is_none());
        assert!(r.verdict_m.is_none());
        assert!(r.verdict_multiples);
    }

    #[test]
    fn inhom_transfers_golden_d1() {
        let t = golden_table();
        let gamma = resolve_gamma(&crate::realnum::GammaSpec::DIndex(1), &t).unwrap();
        let r = count_inhom(&t, &gamma, &rat(1, 30), &BigInt::from(500)).unwrap();
        assert_eq!(r.count, 34);
        assert_eq!(r.hom_double_eps, 66);
        assert!(r.upper_transfer_ok);
        assert!(r.half_set_nonempty);
        assert_eq!(r.hom_half, Some(8));
        assert_eq!(r.lower_transfer_ok, Some(true));
    }

    #[test]
    fn gamma_zero_degenerates_to_hom() {
        let t = golden_table();
        let hom = count_hom(&t, &rat(1, 10), &BigInt::from(300)).unwrap();
        let inhom = count_inhom(&t, &GammaValue::zero(), &rat(1, 10), &BigInt::from(300)).unwrap();
        assert_eq!(hom.count, inhom.count);
    }

    #[test]
    fn monotone_in_eps_and_n() {
        let t = golden_table();
        let mut last = 0;
        for denom in [64i64, 32, 16, 8] {
            let r = count_hom(&t, &rat(1, denom), &BigInt::from(400)).unwrap();
            assert!(r.count >= last);
            last = r.count;
        }
        let mut last = 0;
        for n in [100u32, 200, 400, 800] {
            let r = count_hom(&t, &rat(1, 16), &BigInt::from(n)).unwrap();
            assert!(r.count >= last);
            last = r.count;
        }
    }
}
