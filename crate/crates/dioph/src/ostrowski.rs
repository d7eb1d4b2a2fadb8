//! Ostrowski numeration: expansion of positive integers over the base
//! `(q_k)` and of reals over the signed base `(D_k)`, digit validation,
//! reconstruction, and the difference digits that drive the norm
//! decomposition.
//!
//! Integer digits come from the classical greedy algorithm. Real digits are
//! chosen step by step so the remainder stays inside the interval spanned by
//! the remaining tail; every choice is decided by exact sign tests (or
//! refinable enclosures for stream alphas), and the finished expansion is
//! certified against the admissibility constraints and the resummation
//! defect bound `|gamma - sum b_{k+1} D_k| <= |D_{depth-1}| + |D_depth|`.

use crate::contfrac::ConvergentTable;
use crate::error::{precision_cap, Error, Result};
use crate::realnum::AlphaReal;
use crate::value::{floor_linear, sign_linear, GammaValue};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Ostrowski expansion of a positive integer: sparse digits `k -> c_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiInt {
    pub digits: BTreeMap<usize, BigInt>,
    /// Index of the highest nonzero digit.
    pub top: usize,
}

impl OstrowskiInt {
    pub fn digit(&self, k: usize) -> BigInt {
        self.digits.get(&k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn dense(&self, len: usize) -> Vec<BigInt> {
        (0..len).map(|k| self.digit(k)).collect()
    }

    /// Smallest k with `c_{k+1} != 0`.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.digits.iter().find(|(_, v)| !v.is_zero()).map(|(k, _)| *k)
    }

    pub fn to_json(&self, table: &ConvergentTable, n: &BigInt) -> serde_json::Value {
        let digits: Vec<serde_json::Value> = self
            .digits
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| serde_json::json!([k, c.to_string()]))
            .collect();
        serde_json::json!({
            "schema": 1,
            "alpha": table.alpha().spec.to_string(),
            "n": n.to_string(),
            "digits": digits,
        })
    }
}

/// Ostrowski expansion of a real `gamma` in `[-{alpha}, 1-{alpha})`:
/// dense digits `b_{k+1}` for `k = 0..depth`, plus the integer translation
/// applied to bring gamma into range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiReal {
    pub digits: Vec<BigInt>,
    pub shift: BigInt,
    /// True when the stored digits are the whole expansion (all later digits
    /// are zero); the tail bound is then not needed downstream.
    pub complete: bool,
}

impl OstrowskiReal {
    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digit(&self, k: usize) -> BigInt {
        self.digits.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The normalized value as a linear form `u*alpha + v`.
    pub fn value_linear(&self, table: &ConvergentTable) -> (BigRational, BigRational) {
        let mut u = BigInt::zero();
        let mut v = BigInt::zero();
        for (k, b) in self.digits.iter().enumerate() {
            u += b * table.q(k);
            v -= b * table.p(k);
        }
        (BigRational::from(u), BigRational::from(v))
    }

    pub fn to_json(&self, table: &ConvergentTable) -> serde_json::Value {
        let digits: Vec<serde_json::Value> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
            .map(|(k, b)| serde_json::json!([k, b.to_string()]))
            .collect();
        serde_json::json!({
            "schema": 1,
            "alpha": table.alpha().spec.to_string(),
            "shift": self.shift.to_string(),
            "depth": self.depth(),
            "digits": digits,
        })
    }
}

/// Difference digits `delta_{k+1} = c_{k+1} - b_{k+1}` and the first index
/// `m` where they differ.
#[derive(Clone, Debug)]
pub struct DeltaDigits {
    pub deltas: Vec<BigInt>,
    pub m: Option<usize>,
}

impl DeltaDigits {
    pub fn delta(&self, k: usize) -> BigInt {
        self.deltas.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_degenerate(&self) -> bool {
        self.m.is_none()
    }
}

/// Digit-admissibility verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVerdict {
    pub valid: bool,
    /// `(index, description)` of the first violated constraint.
    pub violation: Option<(usize, String)>,
}

impl DigitVerdict {
    fn ok() -> Self {
        DigitVerdict { valid: true, violation: None }
    }

    fn bad(k: usize, what: &str) -> Self {
        DigitVerdict { valid: false, violation: Some((k, what.to_string())) }
    }
}

/// Checks the admissibility constraint families over dense digits
/// (`digits[k]` is the coefficient of `q_k`, bounded by `a_{k+1}`):
/// ranges, the adjacency rule, and non-triviality of the top digit.
pub fn validate_digits(digits: &[BigInt], quotients: &[BigInt]) -> DigitVerdict {
    if digits.len() + 1 > quotients.len() {
        return DigitVerdict::bad(digits.len(), "not enough quotients to validate");
    }
    for (k, c) in digits.iter().enumerate() {
        if c.is_negative() {
            return DigitVerdict::bad(k, "digit is negative");
        }
        let cap = &quotients[k + 1];
        if k == 0 {
            if c >= cap {
                return DigitVerdict::bad(0, "first digit must satisfy c_1 < a_1");
            }
        } else if c > cap {
            return DigitVerdict::bad(k, "digit exceeds a_{k+1}");
        }
        if k >= 1 && c == cap && !digits[k - 1].is_zero() {
            return DigitVerdict::bad(k, "digit at cap requires the previous digit to be zero");
        }
    }
    DigitVerdict::ok()
}

/// Greedy Ostrowski expansion of a positive integer.
pub fn expand_int(table: &ConvergentTable, n: &BigInt) -> Result<OstrowskiInt> {
    if n < &BigInt::one() {
        return Err(Error::Domain(format!("n = {n} must be a positive integer")));
    }
    let top = table.k_of(n)?;
    let mut digits = BTreeMap::new();
    let mut rem = n.clone();
    for k in (0..=top).rev() {
        let c = &rem / table.q(k);
        if !c.is_zero() {
            rem -= &c * table.q(k);
            digits.insert(k, c);
        }
    }
    debug_assert!(rem.is_zero());
    let out = OstrowskiInt { digits, top };
    // The greedy output must validate and reconstruct; anything else is a bug.
    let quots: Vec<BigInt> = (0..=top + 1).map(|k| table.a(k).clone()).collect();
    let dense = out.dense(top + 1);
    let verdict = validate_digits(&dense, &quots);
    if !verdict.valid {
        return Err(Error::Consistency(format!(
            "greedy expansion of {n} violated {:?}",
            verdict.violation
        )));
    }
    Ok(out)
}

/// Exact inverse of `expand_int`: `sum c_{k+1} q_k`, after validation.
pub fn reconstruct_int(digits: &OstrowskiInt, table: &ConvergentTable) -> Result<BigInt> {
    let top = digits.digits.keys().next_back().copied().unwrap_or(0);
    if top + 1 > table.internal_depth() {
        return Err(Error::StreamDepth { available: table.internal_depth(), needed: top + 1 });
    }
    let quots: Vec<BigInt> = (0..=top + 1).map(|k| table.a(k).clone()).collect();
    let dense = digits.dense(top + 1);
    let verdict = validate_digits(&dense, &quots);
    if !verdict.valid {
        let (k, what) = verdict.violation.unwrap();
        return Err(Error::InvalidDigits(format!("constraint at k = {k}: {what}")));
    }
    let mut n = BigInt::zero();
    for (k, c) in &digits.digits {
        n += c * table.q(*k);
    }
    if n < BigInt::one() {
        return Err(Error::InvalidDigits("all-zero digit vector".into()));
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// Real expansions
// ---------------------------------------------------------------------------

/// Remainder of a real expansion: `(+-ext) + u*alpha + v` where `ext` is an
/// optional external real known through enclosures.
struct Remainder {
    ext: Option<Arc<AlphaReal>>,
    ext_neg: bool,
    u: BigRational,
    v: BigRational,
}

impl Remainder {
    /// Sign of `self + (du*alpha + dv)`, exact where possible.
    fn sign_plus(&self, alpha: &Arc<AlphaReal>, du: &BigRational, dv: &BigRational) -> Result<i8> {
        let u = &self.u + du;
        let v = &self.v + dv;
        match &self.ext {
            None => sign_linear(alpha, &u, &v, precision_cap()),
            Some(g) => {
                let cap = precision_cap();
                let mut prec = 64u32;
                loop {
                    let lin = crate::value::linear_enclosure(alpha, &u, &v, prec);
                    let (giv, gtight) = g.enclosure(prec);
                    let giv = if self.ext_neg { giv.neg() } else { giv };
                    let total = lin.add(&giv);
                    if let Some(s) = total.sign() {
                        return Ok(s);
                    }
                    if prec >= cap || !gtight {
                        return Err(Error::PrecisionCap {
                            cap: prec,
                            context: "digit window sign undecided".into(),
                        });
                    }
                    prec = (prec * 2).min(cap);
                }
            }
        }
    }

    fn is_structural_zero(&self) -> bool {
        self.ext.is_none() && self.u.is_zero() && self.v.is_zero()
    }

    fn midpoint_estimate(&self, alpha: &Arc<AlphaReal>, prec: u32) -> BigRational {
        let mut iv = crate::value::linear_enclosure(alpha, &self.u, &self.v, prec);
        if let Some(g) = &self.ext {
            let giv = g.enclosure(prec).0;
            iv = iv.add(&(if self.ext_neg { giv.neg() } else { giv }));
        }
        (iv.lo.to_rational() + iv.hi.to_rational())
            / BigRational::from(BigInt::from(2))
    }
}

/// Ostrowski digits of `gamma` to the requested depth.
///
/// `gamma` is first translated by an integer (recorded in the output) into
/// the canonical range `[-{alpha}, 1-{alpha})`. Digits are chosen as the
/// smallest admissible value keeping the remainder inside the span of the
/// remaining tail; the result is certified by re-validating the constraints
/// and the resummation defect bound.
pub fn expand_real(
    table: &ConvergentTable,
    gamma: &GammaValue,
    depth: usize,
) -> Result<OstrowskiReal> {
    if depth + 2 > table.internal_depth() {
        return Err(Error::StreamDepth { available: table.internal_depth(), needed: depth + 2 });
    }
    let alpha = table.alpha();
    // shift = floor(gamma + {alpha}) with {alpha} = alpha - a_0.
    let a0 = table.p(0).clone(); // p_0 = a_0
    let shift = match gamma {
        GammaValue::Linear { u, v } => floor_linear(
            alpha,
            &(u + BigRational::one()),
            &(v - BigRational::from(a0.clone())),
            precision_cap(),
        )?,
        GammaValue::External(g) => {
            // floor(gamma + alpha - a0) by enclosure refinement.
            let cap = precision_cap();
            let mut prec = 64u32;
            loop {
                let (giv, gtight) = g.enclosure(prec);
                let (aiv, atight) = alpha.enclosure(prec);
                let x = giv.add(&aiv).sub(&crate::dyadic::DyInterval::from_bigint(&a0));
                let lo = x.lo.floor_int();
                let hi = x.hi.floor_int();
                if lo == hi {
                    break lo;
                }
                if prec >= cap || !gtight || !atight {
                    return Err(Error::PrecisionCap {
                        cap: prec,
                        context: "gamma normalization shift undecided".into(),
                    });
                }
                prec = (prec * 2).min(cap);
            }
        }
    };

    let mut rem = match gamma {
        GammaValue::Linear { u, v } => Remainder {
            ext: None,
            ext_neg: false,
            u: u.clone(),
            v: v - BigRational::from(shift.clone()),
        },
        GammaValue::External(g) => Remainder {
            ext: Some(g.clone()),
            ext_neg: false,
            u: BigRational::zero(),
            v: -BigRational::from(shift.clone()),
        },
    };

    let mut digits: Vec<BigInt> = Vec::with_capacity(depth);
    for k in 0..depth {
        if rem.is_structural_zero() {
            digits.push(BigInt::zero());
            continue;
        }
        let b = choose_digit(table, &rem, k, digits.last())?;
        // rem <- rem - b * D_k, i.e. u -= b q_k, v += b p_k.
        rem.u -= BigRational::from(&b * table.q(k));
        rem.v += BigRational::from(&b * table.p(k));
        digits.push(b);
    }

    let out = OstrowskiReal { digits, shift, complete: rem.is_structural_zero() };
    certify_real_expansion(table, &out, &rem, depth)?;
    Ok(out)
}

/// Builds an `OstrowskiReal` from given digits (validating them).
pub fn real_from_digits(
    table: &ConvergentTable,
    digits: Vec<BigInt>,
    shift: BigInt,
) -> Result<OstrowskiReal> {
    if digits.len() + 1 > table.internal_depth() {
        return Err(Error::StreamDepth {
            available: table.internal_depth(),
            needed: digits.len() + 1,
        });
    }
    let quots: Vec<BigInt> = (0..=digits.len() + 1).map(|k| table.a(k).clone()).collect();
    let verdict = validate_digits(&digits, &quots);
    if !verdict.valid {
        let (k, what) = verdict.violation.unwrap();
        return Err(Error::InvalidDigits(format!("constraint at k = {k}: {what}")));
    }
    Ok(OstrowskiReal { digits, shift, complete: true })
}

/// Picks the smallest digit `b` in `[0, cap]` under the adjacency rule such
/// that `rem - b*D_k` lies in the span of the remaining tail,
/// `[-|D_k|, |D_{k+1}|]` for even k and `[-|D_{k+1}|, |D_k|]` for odd k.
fn choose_digit(
    table: &ConvergentTable,
    rem: &Remainder,
    k: usize,
    prev: Option<&BigInt>,
) -> Result<BigInt> {
    let alpha = table.alpha();
    let cap = if k == 0 { table.a(1) - BigInt::one() } else { table.a(k + 1).clone() };
    // D_k = q_k alpha - p_k. Candidate window centre from an enclosure of
    // rem / |D_k|; the window is under two integers wide so +-2 suffices.
    let est = {
        let mid = rem.midpoint_estimate(alpha, 160);
        let dk = table.abs_d_dyadic(k, 160);
        let dk_mid = (dk.lo.to_rational() + dk.hi.to_rational())
            / BigRational::from(BigInt::from(2));
        if dk_mid.is_zero() {
            BigRational::zero()
        } else {
            let t = mid / dk_mid;
            // For odd k the digit multiplies -|D_k|.
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        }
    };
    let centre = est.round().to_integer();

    // Tail-span endpoints as linear forms (s = sign convention handled by
    // parity): bottom and top are -|D_k| / |D_{k+1}| rearranged so that both
    // conditions read as sign checks on rem - b*D_k plus a linear form.
    let qk = table.q(k).clone();
    let pk = table.p(k).clone();
    let qk1 = table.q(k + 1).clone();
    let pk1 = table.p(k + 1).clone();

    let feasible = |b: &BigInt| -> Result<bool> {
        if b.is_negative() || b > &cap {
            return Ok(false);
        }
        if k >= 1 && b == table.a(k + 1) {
            if let Some(p) = prev {
                if !p.is_zero() {
                    return Ok(false);
                }
            }
        }
        // r' = rem - b D_k as an offset (du, dv) on top of rem.
        let du_base = BigRational::from(-(b * &qk));
        let dv_base = BigRational::from(b * &pk);
        // Conditions r' >= bottom and r' <= top, written as sign(r' - bound) checks.
        // k even: bottom = -|D_k| = -(q_k a - p_k); top = |D_{k+1}| = p_{k+1} - q_{k+1} a.
        // k odd:  bottom = -|D_{k+1}| = -(q_{k+1} a - p_{k+1}); top = |D_k| = p_k - q_k a.
        let (bot_u, bot_v, top_u, top_v) = if k % 2 == 0 {
            (
                BigRational::from(-qk.clone()),
                BigRational::from(pk.clone()),
                BigRational::from(-qk1.clone()),
                BigRational::from(pk1.clone()),
            )
        } else {
            (
                BigRational::from(-qk1.clone()),
                BigRational::from(pk1.clone()),
                BigRational::from(-qk.clone()),
                BigRational::from(pk.clone()),
            )
        };
        // sign(r' - bottom) >= 0
        let s1 = rem.sign_plus(alpha, &(&du_base - &bot_u), &(&dv_base - &bot_v))?;
        if s1 < 0 {
            return Ok(false);
        }
        // sign(r' - top) <= 0
        let s2 = rem.sign_plus(alpha, &(&du_base - &top_u), &(&dv_base - &top_v))?;
        Ok(s2 <= 0)
    };

    for delta in -3i64..=3 {
        let b = &centre + BigInt::from(delta);
        if feasible(&b)? {
            return Ok(b);
        }
    }
    Err(Error::Consistency(format!("no admissible digit at k = {k}")))
}

fn certify_real_expansion(
    table: &ConvergentTable,
    out: &OstrowskiReal,
    rem: &Remainder,
    depth: usize,
) -> Result<()> {
    let quots: Vec<BigInt> = (0..=depth + 1).map(|k| table.a(k).clone()).collect();
    let verdict = validate_digits(&out.digits, &quots);
    if !verdict.valid {
        return Err(Error::Consistency(format!(
            "real expansion produced inadmissible digits: {:?}",
            verdict.violation
        )));
    }
    if depth == 0 {
        return Ok(());
    }
    // |rem| <= |D_{depth-1}| + |D_depth|, i.e. both
    // rem + (|D_{depth-1}| + |D_depth|) >= 0 and (|..| + |..|) - rem >= 0.
    let alpha = table.alpha();
    let bound_lin = |j: usize| -> (BigRational, BigRational) {
        // |D_j| = (-1)^j (q_j alpha - p_j)
        if j % 2 == 0 {
            (BigRational::from(table.q(j).clone()), BigRational::from(-table.p(j).clone()))
        } else {
            (BigRational::from(-table.q(j).clone()), BigRational::from(table.p(j).clone()))
        }
    };
    let (u1, v1) = bound_lin(depth - 1);
    let (u2, v2) = bound_lin(depth);
    let bu = &u1 + &u2;
    let bv = &v1 + &v2;
    let s1 = rem.sign_plus(alpha, &bu, &bv)?; // rem + bound >= 0
    let s2 = Remainder {
        ext: rem.ext.clone(),
        ext_neg: !rem.ext_neg,
        u: -rem.u.clone(),
        v: -rem.v.clone(),
    }
    .sign_plus(alpha, &bu, &bv)?; // bound - rem >= 0
    if s1 < 0 || s2 < 0 {
        return Err(Error::Consistency(
            "resummation defect exceeds the tail bound".into(),
        ));
    }
    Ok(())
}

/// Difference digits of an integer expansion against a real expansion over
/// the same table.
pub fn delta_of(c: &OstrowskiInt, b: &OstrowskiReal) -> Result<DeltaDigits> {
    if !b.complete && b.depth() < c.top + 5 {
        return Err(Error::StreamDepth { available: b.depth(), needed: c.top + 5 });
    }
    // For complete expansions later digits are zero, so the vector can be
    // padded out to cover the pattern scans of the norm identities.
    let len = b.depth().max(c.top + 8);
    let mut deltas = Vec::with_capacity(len);
    let mut m = None;
    for k in 0..len {
        let d = c.digit(k) - b.digit(k);
        if m.is_none() && !d.is_zero() {
            m = Some(k);
        }
        deltas.push(d);
    }
    Ok(DeltaDigits { deltas, m })
}
