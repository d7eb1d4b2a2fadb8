//! Continued-fraction engine: partial quotients, convergents, the signed
//! errors `D_k = q_k*alpha - p_k`, partial-quotient sums `A_k`, the index
//! `K(N)` and a finite-depth estimator for the exponent of approximation.
//!
//! Every table row is certified at build time:
//!   * recurrences `p_{k+1} = a_{k+1} p_k + p_{k-1}`, `q` likewise (exact),
//!   * `sign(D_k) = (-1)^k`,
//!   * `1/2 <= q_{k+1} |D_k| <= 1`,
//!   * `a_{k+2} |D_{k+1}| + |D_{k+2}| = |D_k|` (exact, via the recurrences),
//!   * `|D_k| > |D_{k+1}|`,
//!   * `max(2^((k-1)/2), a_1..a_k) <= q_k <= 2^(k-1) a_1..a_k`.
//!
//! For quadratic surds the checks are exact sign tests; for quotient streams
//! they are decided against the rational hull spanned by all continuations of
//! the materialized prefix.

use crate::dyadic::{ln_int, DyInterval};
use crate::error::{Error, Result};
use crate::realnum::{AlphaReal, IntervalEnclosure, RealSpec};
use crate::surd::QuadExt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Which value the virtual row `k = -1` reports for `q_{-1}`. Both seeds
/// appear in the literature; the recurrence for `k >= 1` is unaffected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QNegOne {
    Zero,
    MinusOne,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub k: usize,
    pub a: BigInt,
    pub p: BigInt,
    pub q: BigInt,
    /// A_k = a_1 + ... + a_k (zero for k = 0).
    pub cum_a: BigInt,
    /// a_1 * ... * a_k (one for k = 0).
    pub prod_a: BigInt,
}

/// Absolute value of `D_k`, exact or enclosed.
#[derive(Clone, Debug)]
pub enum AbsD {
    Exact(QuadExt),
    Enclosure { lo: BigRational, hi: BigRational },
}

impl AbsD {
    pub fn to_dyadic(&self, prec: u32) -> DyInterval {
        match self {
            AbsD::Exact(x) => x.to_interval(prec),
            AbsD::Enclosure { lo, hi } => DyInterval::from_rationals(lo, hi, prec),
        }
    }

    pub fn rational_bounds(&self, prec: u32) -> (BigRational, BigRational) {
        match self {
            AbsD::Exact(x) => {
                let iv = x.to_interval(prec);
                (iv.lo.to_rational(), iv.hi.to_rational())
            }
            AbsD::Enclosure { lo, hi } => (lo.clone(), hi.clone()),
        }
    }
}

pub struct ConvergentTable {
    alpha: Arc<AlphaReal>,
    rows: Vec<Row>,
    /// Rows `0..=depth` carry full certification.
    depth: usize,
    /// Continuation hull for stream-backed alpha.
    hull: Option<IntervalEnclosure>,
    pub q_neg1: QNegOne,
}

impl ConvergentTable {
    /// Builds and certifies a table with rows `0..=depth`.
    pub fn build(alpha: Arc<AlphaReal>, depth: usize) -> Result<ConvergentTable> {
        if let Some(v) = alpha.quad_value() {
            if v.is_rational() {
                return Err(Error::Domain("alpha is rational".into()));
            }
        }
        let avail = alpha.quotients_available();
        let is_stream = alpha.quad_value().is_none();
        let internal = if !is_stream {
            depth + 2
        } else if avail == usize::MAX {
            depth + 6
        } else {
            if avail < depth + 3 {
                return Err(Error::StreamDepth { available: avail, needed: depth + 3 });
            }
            avail - 1
        };
        let quots = alpha.quotients(internal)?;
        for (k, a) in quots.iter().enumerate().skip(1) {
            if a < &BigInt::one() {
                return Err(Error::Domain(format!("partial quotient a_{k} = {a} < 1")));
            }
        }
        let mut rows: Vec<Row> = Vec::with_capacity(internal + 1);
        for (k, a) in quots.iter().enumerate() {
            let (p, q) = match k {
                0 => (a.clone(), BigInt::one()),
                1 => (a * &rows[0].p + BigInt::one(), a.clone()),
                _ => (a * &rows[k - 1].p + &rows[k - 2].p, a * &rows[k - 1].q + &rows[k - 2].q),
            };
            let (cum_a, prod_a) = if k == 0 {
                (BigInt::zero(), BigInt::one())
            } else {
                (&rows[k - 1].cum_a + a, &rows[k - 1].prod_a * a)
            };
            rows.push(Row { k, a: a.clone(), p, q, cum_a, prod_a });
        }
        let hull = if is_stream { Some(alpha.stream_hull(internal)?) } else { None };
        let table = ConvergentTable { alpha, rows, depth, hull, q_neg1: QNegOne::Zero };
        table.certify()?;
        Ok(table)
    }

    pub fn build_from_spec(spec: &RealSpec, depth: usize) -> Result<ConvergentTable> {
        ConvergentTable::build(AlphaReal::resolve(spec)?, depth)
    }

    pub fn alpha(&self) -> &Arc<AlphaReal> {
        &self.alpha
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Highest row index materialized internally (certified rows end at
    /// `depth`, but `q`/`p` values beyond it are still exact).
    pub fn internal_depth(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, k: usize) -> &Row {
        &self.rows[k]
    }

    pub fn a(&self, k: usize) -> &BigInt {
        &self.rows[k].a
    }

    pub fn p(&self, k: usize) -> &BigInt {
        &self.rows[k].p
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.rows[k].q
    }

    /// `A_k = a_1 + ... + a_k`.
    pub fn cum_a(&self, k: usize) -> &BigInt {
        &self.rows[k].cum_a
    }

    pub fn q_neg1_value(&self) -> BigInt {
        match self.q_neg1 {
            QNegOne::Zero => BigInt::zero(),
            QNegOne::MinusOne => -BigInt::one(),
        }
    }

    pub fn sign_d(&self, k: usize) -> i8 {
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// |D_k|, exact for surds, a rational enclosure for streams.
    pub fn abs_d(&self, k: usize) -> AbsD {
        match self.alpha.quad_value() {
            Some(v) => {
                let d = v
                    .mul_rational(&BigRational::from(self.q(k).clone()))
                    .add_rational(&BigRational::from(-self.p(k).clone()));
                AbsD::Exact(d.abs())
            }
            None => {
                // Raw fraction arithmetic: avoid gcd reductions on the huge
                // hull denominators of rapidly-growing streams.
                let hull = self.hull.as_ref().expect("stream table carries a hull");
                let lo_num = self.q(k) * hull.lo.numer() - self.p(k) * hull.lo.denom();
                let hi_num = self.q(k) * hull.hi.numer() - self.p(k) * hull.hi.denom();
                let lo_s = BigRational::new_raw(lo_num, hull.lo.denom().clone());
                let hi_s = BigRational::new_raw(hi_num, hull.hi.denom().clone());
                let (lo, hi) = if self.sign_d(k) > 0 { (lo_s, hi_s) } else { (-hi_s, -lo_s) };
                AbsD::Enclosure { lo, hi }
            }
        }
    }

    pub fn abs_d_dyadic(&self, k: usize, prec: u32) -> DyInterval {
        self.abs_d(k).to_dyadic(prec)
    }

    /// Fractional part of alpha (equals |D_0|).
    pub fn alpha_fractional(&self) -> AbsD {
        self.abs_d(0)
    }

    fn certify(&self) -> Result<()> {
        let top = self.internal_depth();
        // Sign certificates for all rows we can reach, value checks to depth.
        let sign_limit = if self.hull.is_some() { top - 1 } else { top };
        for k in 0..=sign_limit.min(self.depth + 1) {
            self.certify_sign(k)?;
        }
        for k in 0..=self.depth {
            self.certify_row(k)?;
        }
        Ok(())
    }

    fn certify_sign(&self, k: usize) -> Result<()> {
        match self.abs_d(k) {
            AbsD::Exact(x) => {
                if x.sign() <= 0 {
                    return Err(Error::Consistency(format!("sign(D_{k}) violates (-1)^k")));
                }
            }
            AbsD::Enclosure { lo, .. } => {
                if !lo.is_positive() {
                    return Err(Error::Consistency(format!(
                        "sign of D_{k} undecided by the continuation hull"
                    )));
                }
            }
        }
        Ok(())
    }

    fn certify_row(&self, k: usize) -> Result<()> {
        let top = self.internal_depth();
        // Recurrence identities are exact by construction; assert anyway.
        if k + 2 <= top {
            let q_ok = self.q(k + 2) == &(self.a(k + 2) * self.q(k + 1) + self.q(k));
            let p_ok = self.p(k + 2) == &(self.a(k + 2) * self.p(k + 1) + self.p(k));
            if !q_ok || !p_ok {
                return Err(Error::Consistency(format!("recurrence broken at k = {k}")));
            }
        }
        // 1/2 <= q_{k+1} |D_k| <= 1.
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let one = BigRational::one();
        let qk1 = BigRational::from(self.q(k + 1).clone());
        match self.abs_d(k) {
            AbsD::Exact(x) => {
                let v = x.mul_rational(&qk1);
                if v.cmp_rational(&half) == std::cmp::Ordering::Less
                    || v.cmp_rational(&one) == std::cmp::Ordering::Greater
                {
                    return Err(Error::Consistency(format!("q_{{k+1}}|D_k| out of [1/2,1] at k = {k}")));
                }
            }
            AbsD::Enclosure { lo, hi } => {
                // Integer cross-multiplication; the fractions are unreduced.
                let _ = (&half, &one);
                let lo_ok = self.q(k + 1) * lo.numer() * BigInt::from(2) >= lo.denom().clone();
                let hi_ok = self.q(k + 1) * hi.numer() <= hi.denom().clone();
                if !lo_ok || !hi_ok {
                    return Err(Error::Consistency(format!(
                        "q_{{k+1}}|D_k| not certified within [1/2,1] at k = {k}"
                    )));
                }
            }
        }
        // |D_k| > |D_{k+1}| (monotone decay).
        if k + 1 <= if self.hull.is_some() { top - 1 } else { top } {
            let gt = match (self.abs_d(k), self.abs_d(k + 1)) {
                (AbsD::Exact(a), AbsD::Exact(b)) => {
                    a.sub(&b).sign() > 0
                }
                (a, b) => {
                    let (alo, _ahi) = a.rational_bounds(192);
                    let (_blo, bhi) = b.rational_bounds(192);
                    alo > bhi
                }
            };
            if !gt {
                return Err(Error::Consistency(format!("|D_k| <= |D_{{k+1}}| at k = {k}")));
            }
        }
        // q_k growth window for k >= 1.
        if k >= 1 {
            let q = self.q(k);
            let prod = &self.rows[k].prod_a;
            let two_pow = BigInt::one() << (k as u64 - 1);
            if &(q * q) < &(BigInt::one() << (k as u64).saturating_sub(1)) {
                return Err(Error::Consistency(format!("q_k^2 < 2^(k-1) at k = {k}")));
            }
            if q < prod || q > &(&two_pow * prod) {
                return Err(Error::Consistency(format!("q_k outside quotient-product window at k = {k}")));
            }
        }
        Ok(())
    }

    /// Certifies the truncated telescoping identity
    /// `sum_{i=k+1}^{T} a_{i+1}|D_i| + |D_T| + |D_{T+1}| = |D_k| + |D_{k+1}|`
    /// (with the k = 0..T full version summing to `|D_0| + 1` when `from_zero`).
    pub fn certify_telescoping(&self, k: usize, t: usize, from_zero: bool) -> Result<()> {
        if t + 1 > self.depth {
            return Err(Error::StreamDepth { available: self.depth, needed: t + 1 });
        }
        match self.alpha.quad_value() {
            Some(_) => {
                let d = match self.abs_d(0) {
                    AbsD::Exact(x) => x.d.clone(),
                    _ => unreachable!(),
                };
                let exact = |j: usize| match self.abs_d(j) {
                    AbsD::Exact(x) => x,
                    _ => unreachable!(),
                };
                let mut sum = QuadExt::from_int(0, d.clone());
                let start = if from_zero { 0 } else { k + 1 };
                for i in start..=t {
                    sum = sum.add(&exact(i).mul_rational(&BigRational::from(self.a(i + 1).clone())));
                }
                sum = sum.add(&exact(t)).add(&exact(t + 1));
                let rhs = if from_zero {
                    exact(0).add_rational(&BigRational::one())
                } else {
                    exact(k).add(&exact(k + 1))
                };
                if !sum.sub(&rhs).is_zero() {
                    return Err(Error::Consistency(format!(
                        "telescoping identity failed at k = {k}, T = {t}"
                    )));
                }
                Ok(())
            }
            None => {
                let prec = 256;
                let mut sum = DyInterval::zero();
                let start = if from_zero { 0 } else { k + 1 };
                for i in start..=t {
                    // Scale each term before adding so the running mantissa
                    // stays near `prec` bits even across huge exponent gaps.
                    let term = self
                        .abs_d_dyadic(i, prec)
                        .mul_bigint(self.a(i + 1))
                        .round_to(prec);
                    sum = sum.add(&term).round_to(prec);
                }
                sum = sum.add(&self.abs_d_dyadic(t, prec)).add(&self.abs_d_dyadic(t + 1, prec));
                let rhs = if from_zero {
                    self.abs_d_dyadic(0, prec).add(&DyInterval::from_i64(1))
                } else {
                    self.abs_d_dyadic(k, prec).add(&self.abs_d_dyadic(k + 1, prec))
                };
                if !sum.intersects(&rhs) {
                    return Err(Error::Consistency(format!(
                        "telescoping enclosures disjoint at k = {k}, T = {t}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Largest K with `q_K <= N`; requires the table to see past N.
    pub fn k_of(&self, n: &BigInt) -> Result<usize> {
        if n < &BigInt::one() {
            return Err(Error::Domain("N must be positive".into()));
        }
        let top = self.internal_depth();
        if self.q(top) <= n {
            return Err(Error::StreamDepth { available: top, needed: top + 1 });
        }
        // First index with q > N, minus adjustments for the flat q_0 = q_1 = 1 case.
        let mut lo = 0usize;
        let mut hi = top;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.q(mid) <= n {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        // lo is the first index with q > N; the largest with q <= N is lo-1.
        Ok(lo - 1)
    }

    /// Finite-depth estimator for the exponent of approximation: the maximum
    /// of `ln q_{k+1} / ln q_k` over the top half of the table, as an
    /// enclosure. The window discards the small-k noise so that the value
    /// tracks the limsup rather than the first few quotients.
    pub fn approx_exponent(&self, depth: usize) -> Result<DyInterval> {
        if depth < 2 || depth > self.depth {
            return Err(Error::Domain(format!(
                "approx_exponent needs 2 <= depth <= {}",
                self.depth
            )));
        }
        let lo_k = (depth / 2).max(2);
        let hi_k = depth.min(self.internal_depth() - 1);
        let mut best: Option<DyInterval> = None;
        for k in lo_k..=hi_k {
            if self.q(k) <= &BigInt::one() {
                continue;
            }
            let num = ln_int(self.q(k + 1), 96);
            let den = ln_int(self.q(k), 96);
            let ratio = num.div(&den, 96);
            best = Some(match best {
                None => ratio,
                Some(b) => b.max_iv(&ratio),
            });
        }
        best.ok_or_else(|| Error::Domain("no usable rows in window".into()))
    }

    /// CSV rows `(k, a_k, p_k, q_k, sign_Dk, absDk_lo, absDk_hi, A_k)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,a_k,p_k,q_k,sign_Dk,absDk_lo,absDk_hi,A_k\n");
        for k in 0..=self.depth {
            let iv = self.abs_d_dyadic(k, 140);
            let (lo, hi) = iv.to_decimal_pair(30);
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                k,
                self.a(k),
                self.p(k),
                self.q(k),
                self.sign_d(k),
                lo,
                hi,
                self.cum_a(k)
            ));
        }
        out
    }

    /// JSON rows with the same columns as the CSV export.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..=self.depth)
            .map(|k| {
                let iv = self.abs_d_dyadic(k, 140);
                let (lo, hi) = iv.to_decimal_pair(30);
                serde_json::json!({
                    "k": k,
                    "a_k": self.a(k).to_string(),
                    "p_k": self.p(k).to_string(),
                    "q_k": self.q(k).to_string(),
                    "sign_Dk": self.sign_d(k),
                    "absDk_lo": lo,
                    "absDk_hi": hi,
                    "A_k": self.cum_a(k).to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "alpha": self.alpha.spec.to_string(),
            "depth": self.depth,
            "rows": rows,
        })
    }
}

/// Partial quotients a_0..a_count of the spec's value.
pub fn partial_quotients(spec: &RealSpec, count: usize) -> Result<Vec<BigInt>> {
    let alpha = AlphaReal::resolve(spec)?;
    if let Some(v) = alpha.quad_value() {
        if v.is_rational() {
            return Err(Error::Domain("alpha is rational".into()));
        }
    }
    alpha.quotients(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::parse_real;

    fn table(spec: &str, depth: usize) -> ConvergentTable {
        ConvergentTable::build_from_spec(&parse_real(spec).unwrap(), depth).unwrap()
    }

    fn qs(t: &ConvergentTable, upto: usize) -> Vec<i64> {
        (0..=upto).map(|k| t.q(k).try_into().unwrap()).collect()
    }

    #[test]
    fn golden_table_values() {
        let t = table("golden", 6);
        assert_eq!(qs(&t, 6), vec![1, 1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn sqrt2_table_values() {
        let t = table("surd:(0+1*sqrt2)/1", 5);
        assert_eq!(qs(&t, 5), vec![1, 2, 5, 12, 29, 70]);
        let ps: Vec<i64> = (0..=5).map(|k| t.p(k).try_into().unwrap()).collect();
        assert_eq!(ps, vec![1, 3, 7, 17, 41, 99]);
    }

    #[test]
    fn e_table_values() {
        let t = table("e", 5);
        assert_eq!(qs(&t, 5), vec![1, 1, 3, 4, 7, 32]);
    }

    #[test]
    fn e_partial_quotients() {
        let a = partial_quotients(&RealSpec::EulerE, 10).unwrap();
        let want: Vec<BigInt> =
            vec![2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1].into_iter().map(BigInt::from).collect();
        assert_eq!(a, want);
    }

    #[test]
    fn rational_rejected() {
        let spec = parse_real("surd:(3+0*sqrt2)/2").unwrap();
        assert!(matches!(
            partial_quotients(&spec, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn k_of_examples() {
        let t = table("golden", 12);
        assert_eq!(t.k_of(&BigInt::from(10)).unwrap(), 5); // q_5 = 8 <= 10 < 13
        assert_eq!(t.k_of(&BigInt::from(1)).unwrap(), 1); // q_1 = 1
        let t2 = table("surd:(0+1*sqrt2)/1", 8);
        assert_eq!(t2.k_of(&BigInt::from(12)).unwrap(), 3); // q_3 = 12
    }

    #[test]
    fn telescoping_exact() {
        let t = table("golden", 24);
        t.certify_telescoping(3, 20, false).unwrap();
        t.certify_telescoping(0, 20, true).unwrap();
        let t2 = table("e", 24);
        t2.certify_telescoping(2, 18, false).unwrap();
        t2.certify_telescoping(0, 18, true).unwrap();
    }

    #[test]
    fn approx_exponent_golden_near_one() {
        let t = table("golden", 51);
        let iv = t.approx_exponent(50).unwrap();
        let (lo, hi) = iv.to_f64_pair();
        assert!(lo > 0.98 && hi < 1.05, "exponent window [{lo},{hi}]");
    }

    #[test]
    fn approx_exponent_liouville_grows() {
        // a_{k+1} = q_k^k: the frontier ratio ln q_{k+1}/ln q_k climbs by
        // one per row, so the estimator must strictly increase with depth.
        let mut tail: Vec<BigInt> = Vec::new();
        let (mut q_prev, mut q) = (BigInt::one(), BigInt::one()); // q_{-1}, q_0
        for k in 0..8u32 {
            let a = num_traits::pow::Pow::pow(&q, k);
            let q_next = &a * &q + &q_prev;
            q_prev = q;
            q = q_next;
            tail.push(a);
        }
        let spec = RealSpec::ExplicitQuotients { a0: BigInt::zero(), tail };
        let t = ConvergentTable::build_from_spec(&spec, 5).unwrap();
        let mut last = 0.0;
        for depth in 2..=5 {
            let iv = t.approx_exponent(depth).unwrap();
            let mid = (iv.to_f64_pair().0 + iv.to_f64_pair().1) / 2.0;
            assert!(mid > last, "running exponent must increase (depth {depth})");
            last = mid;
        }
        assert!(last >= 4.0, "exponent at depth 5 is {last}");
    }

    #[test]
    fn stream_depth_budget() {
        let spec = parse_real("quotients:[0;2,2,2,2]").unwrap();
        assert!(matches!(
            ConvergentTable::build_from_spec(&spec, 4),
            Err(Error::StreamDepth { .. })
        ));
        assert!(ConvergentTable::build_from_spec(&spec, 1).is_ok());
    }

    #[test]
    fn csv_export_shape() {
        let t = table("golden", 3);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("k,a_k,p_k,q_k,sign_Dk"));
    }
}
