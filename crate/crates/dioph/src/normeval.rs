//! Two routes to `||n*alpha - gamma||`: a direct certified oracle and the
//! digit-level decomposition through the Ostrowski difference digits.
//!
//! The decomposition route computes `Sigma = sum_{k>=m} delta_{k+1} D_k`,
//! identifies which of `|Sigma|` / `1 - |Sigma|` realizes the norm, and
//! re-derives the value through explicit three-term identities whose
//! remainders are range-checked. Every identity is verified on every call;
//! a failed check raises a consistency error rather than returning a value,
//! so digit-logic bugs cannot slip through silently.

use crate::contfrac::ConvergentTable;
use crate::dyadic::DyInterval;
use crate::error::{Error, Result};
use crate::ostrowski::{delta_of, DeltaDigits, OstrowskiInt, OstrowskiReal};
use crate::value::{sign_linear, GammaValue, NormEngine};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which of the two candidate values realizes the distance to the nearest
/// integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `||n alpha - gamma|| = |Sigma|`
    AbsSigma,
    /// `||n alpha - gamma|| = 1 - |Sigma|`
    OneMinusAbsSigma,
}

/// The decomposition certificate attached to a digit-route evaluation.
#[derive(Clone, Debug)]
pub struct SigmaDecomposition {
    pub m: usize,
    /// Enclosure of `Sigma` (signed).
    pub sigma: DyInterval,
    /// Enclosure of `|Sigma|`.
    pub abs_sigma: DyInterval,
    pub branch: Branch,
    /// Pattern length of the `|Sigma|` identity.
    pub ell: usize,
    /// Pattern length of the `1 - |Sigma|` identity.
    pub big_l: usize,
    /// The three certified summands of the `|Sigma|` identity.
    pub terms: [DyInterval; 3],
    /// Remainder of the `|Sigma|` identity, certified in `[0, 4|D_{m+1+ell}|)`.
    pub delta_term: DyInterval,
    /// Remainder of the `1 - |Sigma|` identity, certified in `[0, 4|D_L|)`.
    pub tilde_delta_term: DyInterval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    Direct,
    Ostrowski,
}

#[derive(Clone, Debug)]
pub struct NormResult {
    pub value: DyInterval,
    pub method: NormMethod,
    pub degenerate: bool,
    pub decomposition: Option<SigmaDecomposition>,
}

/// Direct interval oracle for `||n*alpha - gamma||`.
pub fn norm_direct(
    table: &ConvergentTable,
    n: &BigInt,
    gamma: &GammaValue,
    precision_bits: u32,
) -> Result<NormResult> {
    let engine = NormEngine::for_table(table, gamma.clone(), precision_bits)?;
    let out = engine.dist(n)?;
    Ok(NormResult {
        value: out.dist,
        method: NormMethod::Direct,
        degenerate: out.zero,
        decomposition: None,
    })
}

/// A linear form `u*alpha + v` with an optional symmetric tail slack,
/// evaluated against a fixed table's alpha.
struct Form {
    u: BigRational,
    v: BigRational,
    /// Indices (j, j+1) whose |D| values bound the unknown tail, if any.
    tail_at: Option<usize>,
}

impl Form {
    fn exact(u: BigRational, v: BigRational) -> Self {
        Form { u, v, tail_at: None }
    }

    fn enclosure(&self, table: &ConvergentTable, prec: u32) -> DyInterval {
        let base = crate::value::linear_enclosure(table.alpha(), &self.u, &self.v, prec);
        match self.tail_at {
            None => base,
            Some(j) => {
                let slack = table.abs_d_dyadic(j, prec).add(&table.abs_d_dyadic(j + 1, prec));
                DyInterval::new(base.lo.sub(&slack.hi), base.hi.add(&slack.hi))
            }
        }
    }

    /// Certified sign; exact when no tail and alpha is decidable.
    fn sign(&self, table: &ConvergentTable, prec: u32) -> Result<i8> {
        match self.tail_at {
            None => sign_linear(table.alpha(), &self.u, &self.v, crate::error::precision_cap()),
            Some(_) => self
                .enclosure(table, prec)
                .sign()
                .ok_or_else(|| Error::PrecisionCap { cap: prec, context: "tail-bounded sign".into() }),
        }
    }
}

/// `|D_j|` as an exact linear form.
fn abs_d_form(table: &ConvergentTable, j: usize) -> (BigRational, BigRational) {
    if j % 2 == 0 {
        (BigRational::from(table.q(j).clone()), BigRational::from(-table.p(j).clone()))
    } else {
        (BigRational::from(-table.q(j).clone()), BigRational::from(table.p(j).clone()))
    }
}

fn sgn_bigint(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Digit-route evaluation of `||n alpha - gamma||` with a full certificate.
///
/// `c` and `b` must come from the same table; the difference digits must not
/// vanish identically (that would mean gamma coincides with `n*alpha` mod 1).
pub fn norm_via_ostrowski(
    table: &ConvergentTable,
    c: &OstrowskiInt,
    b: &OstrowskiReal,
) -> Result<NormResult> {
    let delta = delta_of(c, b)?;
    norm_from_delta(table, c.top, &delta, b.complete)
}

/// Core of the digit route, shared with callers that already hold the
/// difference digits.
pub fn norm_from_delta(
    table: &ConvergentTable,
    cap_k: usize,
    delta: &DeltaDigits,
    complete: bool,
) -> Result<NormResult> {
    let m = delta.m.ok_or(Error::DegenerateGamma { n: "(digit match)".into() })?;
    let len = delta.deltas.len();
    if len < (m + 5).max(cap_k + 4) && !complete {
        return Err(Error::StreamDepth { available: len, needed: (m + 5).max(cap_k + 4) });
    }
    let prec = 192u32;

    // Sigma = sum_{k >= m} delta_{k+1} D_k as a linear form; unknown digits
    // past the expansion depth contribute at most |D_{len-1}| + |D_len|.
    let mut su = BigInt::zero();
    let mut sv = BigInt::zero();
    for (k, d) in delta.deltas.iter().enumerate().skip(m) {
        su += d * table.q(k);
        sv -= d * table.p(k);
    }
    let sigma_form = Form {
        u: BigRational::from(su),
        v: BigRational::from(sv),
        tail_at: if complete { None } else { Some(len - 1) },
    };
    let sigma_iv = sigma_form.enclosure(table, prec);

    // Sign consistency: sign(Sigma) must equal sgn(delta_{m+1}) * (-1)^m.
    let want_sign = sgn_bigint(&delta.delta(m)) * table.sign_d(m);
    let got_sign = sigma_form.sign(table, prec)?;
    if got_sign != want_sign {
        return Err(Error::Consistency(format!(
            "sign of Sigma is {got_sign}, digit pattern demands {want_sign}"
        )));
    }
    let abs_form = Form {
        u: sigma_form.u.clone() * BigRational::from(BigInt::from(want_sign)),
        v: sigma_form.v.clone() * BigRational::from(BigInt::from(want_sign)),
        tail_at: sigma_form.tail_at,
    };
    let abs_iv = abs_form.enclosure(table, prec);

    // |Sigma| <= 1.
    let minus_one_check = Form {
        u: abs_form.u.clone(),
        v: &abs_form.v - BigRational::one(),
        tail_at: abs_form.tail_at,
    };
    if minus_one_check.sign(table, prec).unwrap_or(1) > 0 {
        return Err(Error::Consistency("|Sigma| > 1".into()));
    }

    // Branch on |Sigma| vs 1/2.
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let half_check = Form {
        u: abs_form.u.clone(),
        v: &abs_form.v - &half,
        tail_at: abs_form.tail_at,
    };
    let branch = match half_check.sign(table, prec) {
        Ok(s) if s <= 0 => Branch::AbsSigma,
        Ok(_) => Branch::OneMinusAbsSigma,
        Err(e) => return Err(e),
    };

    let sgn_delta = sgn_bigint(&delta.delta(m));

    // Pattern length ell: the smallest l >= 1 breaking
    // delta_{m+2+l} = (-1)^l sgn(delta_{m+1}) a_{m+2+l}.
    // In dense indexing delta_{m+2+l} sits at position m+1+l.
    let scan_limit = if complete { len + 8 } else { len };
    let mut ell = None;
    for l in 1.. {
        let pos = m + 1 + l;
        if pos >= scan_limit || m + 2 + l + 1 > table.internal_depth() {
            break;
        }
        let pat = if l % 2 == 0 { 1 } else { -1 } * sgn_delta;
        let expect = table.a(m + 2 + l) * BigInt::from(pat);
        if delta.delta(pos) != expect {
            ell = Some(l);
            break;
        }
    }
    let ell = ell.ok_or_else(|| {
        Error::Consistency("no pattern break found for the |Sigma| identity".into())
    })?;
    if ell > 2.max(cap_k.saturating_sub(m) + 1) {
        return Err(Error::Consistency(format!(
            "pattern length ell = {ell} exceeds max(2, K - m + 1)"
        )));
    }

    // Pattern length L: the smallest l >= 1 breaking
    // delta_{l+1} = (-1)^(l+m) sgn(delta_{m+1}) a_{l+1} (dense position l).
    let mut big_l = None;
    for l in 1.. {
        if l >= scan_limit || l + 2 > table.internal_depth() {
            break;
        }
        let pat = if (l + m) % 2 == 0 { 1 } else { -1 } * sgn_delta;
        let expect = table.a(l + 1) * BigInt::from(pat);
        if delta.delta(l) != expect {
            big_l = Some(l);
            break;
        }
    }
    let big_l = big_l.ok_or_else(|| {
        Error::Consistency("no pattern break found for the 1 - |Sigma| identity".into())
    })?;
    if big_l > cap_k + 2 {
        return Err(Error::Consistency(format!("pattern length L = {big_l} exceeds K + 2")));
    }

    // Coefficients of the |Sigma| identity and their admissible ranges.
    let coeff1 = delta.delta(m).abs() - BigInt::one();
    let range1_hi = if m == 0 { table.a(1) - BigInt::from(2) } else { table.a(m + 1) - BigInt::one() };
    if coeff1.is_negative() || coeff1 > range1_hi {
        return Err(Error::Consistency(format!("|delta_{{m+1}}| - 1 = {coeff1} out of range")));
    }
    let coeff2 = table.a(m + 2) - BigInt::one() - BigInt::from(sgn_delta) * delta.delta(m + 1);
    if coeff2.is_negative() || coeff2 > table.a(m + 2) * BigInt::from(2) - BigInt::one() {
        return Err(Error::Consistency(format!("second identity coefficient {coeff2} out of range")));
    }
    let pat_l = if ell % 2 == 0 { 1 } else { -1 } * sgn_delta;
    // delta_{m+2+ell} sits at dense position m+1+ell.
    let coeff3 = table.a(m + 2 + ell) - BigInt::from(pat_l) * delta.delta(m + 1 + ell);
    if coeff3 < BigInt::one() || coeff3 > table.a(m + 2 + ell) * BigInt::from(2) {
        return Err(Error::Consistency(format!("third identity coefficient {coeff3} out of range")));
    }

    // Term values and the identity remainder Delta.
    let term_form = |coeff: &BigInt, j: usize| -> Form {
        let (du, dv) = abs_d_form(table, j);
        Form::exact(du * BigRational::from(coeff.clone()), dv * BigRational::from(coeff.clone()))
    };
    let t1 = term_form(&coeff1, m);
    let t2 = term_form(&coeff2, m + 1);
    let t3 = term_form(&coeff3, m + 1 + ell);
    let delta_rem = Form {
        u: &abs_form.u - &t1.u - &t2.u - &t3.u,
        v: &abs_form.v - &t1.v - &t2.v - &t3.v,
        tail_at: abs_form.tail_at,
    };
    let delta_iv = delta_rem.enclosure(table, prec);
    // 0 <= Delta <= 2|D_{m+1+ell}| + 2|D_{m+2+ell}| (< 4|D_{m+1+ell}|).
    {
        let (bu1, bv1) = abs_d_form(table, m + 1 + ell);
        let (bu2, bv2) = abs_d_form(table, m + 2 + ell);
        let two = BigRational::from(BigInt::from(2));
        let upper = Form {
            u: (&bu1 + &bu2) * &two - &delta_rem.u,
            v: (&bv1 + &bv2) * &two - &delta_rem.v,
            tail_at: delta_rem.tail_at,
        };
        let lo_ok = match delta_rem.sign(table, prec) {
            Ok(s) => s >= 0,
            Err(_) => delta_iv.lo.sign() >= 0,
        };
        let hi_ok = match upper.sign(table, prec) {
            Ok(s) => s >= 0,
            Err(_) => false,
        };
        if !lo_ok || !hi_ok {
            return Err(Error::Consistency(
                "identity remainder Delta escaped its certified range".into(),
            ));
        }
    }

    // 1 - |Sigma| identity: coefficients and remainder.
    let pat0 = if m % 2 == 0 { 1 } else { -1 } * sgn_delta;
    let coeff_z1 = table.a(1) - BigInt::one() - BigInt::from(pat0) * delta.delta(0);
    if coeff_z1.is_negative() {
        return Err(Error::Consistency("first coefficient of the complement identity negative".into()));
    }
    let pat_bl = if (big_l + m) % 2 == 0 { 1 } else { -1 } * sgn_delta;
    let coeff_z2 = table.a(big_l + 1) - BigInt::from(pat_bl) * delta.delta(big_l);
    if coeff_z2.is_negative() {
        return Err(Error::Consistency("second coefficient of the complement identity negative".into()));
    }
    let z1 = term_form(&coeff_z1, 0);
    let z2 = term_form(&coeff_z2, big_l);
    let tilde_rem = Form {
        // 1 - |Sigma| - z1 - z2
        u: -&abs_form.u - &z1.u - &z2.u,
        v: BigRational::one() - &abs_form.v - &z1.v - &z2.v,
        tail_at: abs_form.tail_at,
    };
    let tilde_iv = tilde_rem.enclosure(table, prec);
    {
        let (bu, bv) = abs_d_form(table, big_l);
        let (bu1, bv1) = abs_d_form(table, big_l + 1);
        let two = BigRational::from(BigInt::from(2));
        let upper = Form {
            u: (&bu + &bu1) * &two - &tilde_rem.u,
            v: (&bv + &bv1) * &two - &tilde_rem.v,
            tail_at: tilde_rem.tail_at,
        };
        let lo_ok = match tilde_rem.sign(table, prec) {
            Ok(s) => s >= 0,
            Err(_) => tilde_iv.lo.sign() >= 0,
        };
        let hi_ok = match upper.sign(table, prec) {
            Ok(s) => s >= 0,
            Err(_) => false,
        };
        if !lo_ok || !hi_ok {
            return Err(Error::Consistency(
                "complement identity remainder escaped its certified range".into(),
            ));
        }
    }

    let value = match branch {
        Branch::AbsSigma => abs_iv.clone(),
        Branch::OneMinusAbsSigma => DyInterval::from_i64(1).sub(&abs_iv),
    };
    Ok(NormResult {
        value,
        method: NormMethod::Ostrowski,
        degenerate: false,
        decomposition: Some(SigmaDecomposition {
            m,
            sigma: sigma_iv,
            abs_sigma: abs_iv,
            branch,
            ell,
            big_l,
            terms: [
                t1.enclosure(table, prec),
                t2.enclosure(table, prec),
                t3.enclosure(table, prec),
            ],
            delta_term: delta_iv,
            tilde_delta_term: tilde_iv,
        }),
    })
}

/// Outcome of the homogeneous two-sided bracket.
#[derive(Clone, Debug)]
pub enum HomBounds {
    Bracket { lower: DyInterval, upper: DyInterval, m: usize },
    /// The digit route does not apply (first nonzero digit too early).
    HypothesisNotMet { m: usize },
}

/// Two-sided estimate for `||n alpha||` from the digits of n:
/// `(c_{m+1}-1)|D_m| + (a_{m+2}-c_{m+2})|D_{m+1}| <= ||n alpha|| <= (c_{m+1}+1)|D_m|`,
/// valid when the first nonzero digit index m is at least 2.
pub fn hom_bounds(c: &OstrowskiInt, table: &ConvergentTable) -> Result<HomBounds> {
    let m = c.first_nonzero().ok_or_else(|| Error::Domain("zero digit vector".into()))?;
    if m < 2 {
        return Ok(HomBounds::HypothesisNotMet { m });
    }
    let prec = 160u32;
    let dm = table.abs_d_dyadic(m, prec);
    let dm1 = table.abs_d_dyadic(m + 1, prec);
    let cm1 = c.digit(m);
    let cm2 = c.digit(m + 1);
    let lower = dm
        .mul_bigint(&(&cm1 - BigInt::one()))
        .add(&dm1.mul_bigint(&(table.a(m + 2) - &cm2)));
    let upper = dm.mul_bigint(&(&cm1 + BigInt::one()));
    Ok(HomBounds::Bracket { lower, upper, m })
}

/// Inhomogeneous upper bound `||n alpha - gamma|| < (|delta_{m+1}| + 2)|D_m|`.
pub fn inhom_upper(delta: &DeltaDigits, table: &ConvergentTable) -> Result<DyInterval> {
    let m = delta.m.ok_or(Error::DegenerateGamma { n: "(digit match)".into() })?;
    let coeff = delta.delta(m).abs() + BigInt::from(2);
    Ok(table.abs_d_dyadic(m, 160).mul_bigint(&coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ostrowski::{expand_int, expand_real, real_from_digits};
    use crate::realnum::RealSpec;

    fn golden_table(depth: usize) -> ConvergentTable {
        ConvergentTable::build_from_spec(&RealSpec::Golden, depth).unwrap()
    }

    #[test]
    fn single_digit_gives_abs_d() {
        let t = golden_table(40);
        for k in 2..10usize {
            let n = t.q(k).clone();
            let c = expand_int(&t, &n).unwrap();
            let b = real_from_digits(&t, vec![], BigInt::zero()).unwrap();
            let r = norm_via_ostrowski(&t, &c, &b).unwrap();
            let truth = t.abs_d_dyadic(k, 160);
            assert!(r.value.intersects(&truth), "||q_k alpha|| must be |D_k| at k = {k}");
            let d = r.decomposition.unwrap();
            assert_eq!(d.m, k);
            assert_eq!(d.branch, Branch::AbsSigma);
        }
    }

    #[test]
    fn oracle_cross_check_small_sweep() {
        let t = golden_table(60);
        let b = expand_real(
            &t,
            &GammaValue::Linear {
                u: BigRational::from(t.q(1).clone()),
                v: BigRational::from(-t.p(1).clone()),
            },
            45,
        )
        .unwrap();
        let gamma = GammaValue::Linear {
            u: BigRational::from(t.q(1).clone()),
            v: BigRational::from(-t.p(1).clone()),
        };
        for n in 1..300u32 {
            let n = BigInt::from(n);
            let c = expand_int(&t, &n).unwrap();
            let direct = norm_direct(&t, &n, &gamma, 120).unwrap();
            if direct.degenerate {
                // gamma = D_1 is hit exactly at n = q_1: both routes must agree.
                assert!(matches!(
                    norm_via_ostrowski(&t, &c, &b),
                    Err(Error::DegenerateGamma { .. })
                ));
                continue;
            }
            let via = norm_via_ostrowski(&t, &c, &b).unwrap();
            assert!(
                via.value.intersects(&direct.value),
                "routes disagree at n = {n}: {:?} vs {:?}",
                via.value.to_f64_pair(),
                direct.value.to_f64_pair()
            );
        }
    }

    #[test]
    fn hom_bounds_bracket() {
        let t = golden_table(60);
        let gamma = GammaValue::zero();
        let mut checked = 0;
        for n in 1..1000u32 {
            let n = BigInt::from(n);
            let c = expand_int(&t, &n).unwrap();
            match hom_bounds(&c, &t).unwrap() {
                HomBounds::Bracket { lower, upper, .. } => {
                    let direct = norm_direct(&t, &n, &gamma, 120).unwrap();
                    assert!(
                        !direct.value.certainly_lt(&lower) && !direct.value.certainly_gt(&upper),
                        "bracket failed at n = {n}"
                    );
                    checked += 1;
                }
                HomBounds::HypothesisNotMet { .. } => {
                    // ||n alpha|| >= |D_2| must hold in this case.
                    let direct = norm_direct(&t, &n, &gamma, 120).unwrap();
                    let d2 = t.abs_d_dyadic(2, 120);
                    assert!(!direct.value.certainly_lt(&d2), "||n a|| < |D_2| with m < 2 at {n}");
                }
            }
        }
        assert!(checked > 300);
    }

    #[test]
    fn inhom_upper_dominates() {
        let t = golden_table(60);
        let gamma_form = GammaValue::Linear {
            u: BigRational::from(t.q(1).clone()),
            v: BigRational::from(-t.p(1).clone()),
        };
        let b = expand_real(&t, &gamma_form, 45).unwrap();
        for n in [17u32, 29, 100, 250, 613] {
            let n = BigInt::from(n);
            let c = expand_int(&t, &n).unwrap();
            let d = delta_of(&c, &b).unwrap();
            let bound = inhom_upper(&d, &t).unwrap();
            let direct = norm_direct(&t, &n, &gamma_form, 120).unwrap();
            assert!(
                direct.value.lo.cmp_dy(&bound.hi) == std::cmp::Ordering::Less,
                "upper bound must dominate at n = {n}"
            );
        }
    }

    #[test]
    fn degenerate_gamma_detected() {
        let t = golden_table(40);
        let c = expand_int(&t, &BigInt::from(17)).unwrap();
        let digits: Vec<BigInt> = (0..20).map(|k| c.digit(k)).collect();
        let b = real_from_digits(&t, digits, BigInt::zero()).unwrap();
        assert!(matches!(
            norm_via_ostrowski(&t, &c, &b),
            Err(Error::DegenerateGamma { .. })
        ));
    }

    #[test]
    fn sqrt2_norm_direct_value() {
        let spec = crate::realnum::parse_real("surd:(0+1*sqrt2)/1").unwrap();
        let t = ConvergentTable::build_from_spec(&spec, 30).unwrap();
        let r = norm_direct(&t, &BigInt::from(12), &GammaValue::zero(), 100).unwrap();
        let truth = t.abs_d_dyadic(3, 120); // ||12 sqrt2|| = |D_3|
        assert!(r.value.intersects(&truth));
        assert!(!r.degenerate);
    }
}
