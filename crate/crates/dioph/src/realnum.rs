//! Exact descriptions of real numbers and certified enclosures.
//!
//! A [`RealSpec`] says how a number is defined: a named constant, a quadratic
//! surd `(a + b*sqrt(d))/c`, an explicit (truncated) list of partial
//! quotients, an eventually periodic quotient pattern, or a literal interval.
//! [`AlphaReal`] is the resolved form used by the continued-fraction engine:
//! either an exact element of a quadratic field (all comparisons decidable)
//! or a quotient stream refined on demand.
//!
//! An explicit quotient list denotes a *truncated* expansion: downstream
//! consumers treat it as an unknown irrational between the last two
//! admissible continuations, while [`enclose`] reports its exact rational
//! value as a point interval.

use crate::dyadic::DyInterval;
use crate::error::{Error, Result};
use crate::surd::{is_perfect_square, QuadExt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::{Arc, Mutex};

/// Parsed description of a real number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealSpec {
    /// (1 + sqrt 5)/2
    Golden,
    /// Base of the natural logarithm, via its classical quotient pattern.
    EulerE,
    /// (a + b*sqrt(d))/c with b >= 0, c >= 1, d a positive nonsquare.
    QuadraticSurd { a: BigInt, b: BigInt, d: BigInt, c: BigInt },
    /// a0 followed by a finite list of positive partial quotients.
    ExplicitQuotients { a0: BigInt, tail: Vec<BigInt> },
    /// a0, a finite preamble and a repeating period of positive quotients.
    PeriodicQuotients { a0: BigInt, pre: Vec<BigInt>, period: Vec<BigInt> },
    /// A literal rational interval known to contain the number.
    LiteralEnclosure { lo: BigRational, hi: BigRational },
}

/// A certified enclosure with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IntervalEnclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn subset_of(&self, o: &IntervalEnclosure) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Golden => write!(f, "golden"),
            RealSpec::EulerE => write!(f, "e"),
            RealSpec::QuadraticSurd { a, b, d, c } => {
                write!(f, "surd:({a}+{b}*sqrt{d})/{c}")
            }
            RealSpec::ExplicitQuotients { a0, tail } => {
                let parts: Vec<String> = tail.iter().map(|x| x.to_string()).collect();
                write!(f, "quotients:[{a0};{}]", parts.join(","))
            }
            RealSpec::PeriodicQuotients { a0, pre, period } => {
                let p: Vec<String> = pre.iter().map(|x| x.to_string()).collect();
                let q: Vec<String> = period.iter().map(|x| x.to_string()).collect();
                write!(f, "periodic:[{a0};{}|{}]", p.join(","), q.join(","))
            }
            RealSpec::LiteralEnclosure { lo, hi } => write!(f, "interval:{lo},{hi}"),
        }
    }
}

fn parse_err(token: &str, reason: &str) -> Error {
    Error::Parse { token: token.to_string(), reason: reason.to_string() }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| parse_err(s, "expected an integer"))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_bigint(n)?;
        let den = parse_bigint(d)?;
        if den.is_zero() {
            return Err(parse_err(s, "zero denominator"));
        }
        Ok(BigRational::new(num, den))
    } else {
        Ok(BigRational::from(parse_bigint(s)?))
    }
}

fn parse_quotient_list(s: &str) -> Result<Vec<BigInt>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let v = parse_bigint(t)?;
            if v < BigInt::one() {
                Err(parse_err(t, "partial quotients must be >= 1"))
            } else {
                Ok(v)
            }
        })
        .collect()
}

/// Parses the spec-string grammar:
/// `golden | e | surd:(A+B*sqrtD)/C | quotients:[a0;a1,...] | periodic:[a0;pre|period] | interval:LO,HI`.
pub fn parse_real(spec: &str) -> Result<RealSpec> {
    let s = spec.trim();
    match s {
        "golden" => return Ok(RealSpec::Golden),
        "e" => return Ok(RealSpec::EulerE),
        _ => {}
    }
    if let Some(body) = s.strip_prefix("surd:") {
        // (A+B*sqrtD)/C
        let body = body.trim();
        let inner = body
            .strip_prefix('(')
            .ok_or_else(|| parse_err(body, "expected `(`"))?;
        let (num, den) = inner
            .split_once(")/")
            .ok_or_else(|| parse_err(body, "expected `)/C`"))?;
        let (a_str, rest) = num
            .split_once('+')
            .ok_or_else(|| parse_err(num, "expected `A+B*sqrtD`"))?;
        let (b_str, d_str) = rest
            .split_once("*sqrt")
            .ok_or_else(|| parse_err(rest, "expected `B*sqrtD`"))?;
        let a = parse_bigint(a_str)?;
        let b = parse_bigint(b_str)?;
        let d = parse_bigint(d_str)?;
        let c = parse_bigint(den)?;
        if b.is_negative() {
            return Err(parse_err(b_str, "B must be non-negative"));
        }
        if c.is_zero() {
            return Err(Error::Domain("c must be nonzero".into()));
        }
        if d <= BigInt::one() || is_perfect_square(&d) {
            return Err(Error::Domain(format!("d = {d} must be a nonsquare integer > 1")));
        }
        let (a, b, c) = if c.is_negative() { (-a, -b, -c) } else { (a, b, c) };
        if b.is_negative() {
            return Err(parse_err(spec, "a negative irrational part is not supported"));
        }
        return Ok(RealSpec::QuadraticSurd { a, b, d, c });
    }
    if let Some(body) = s.strip_prefix("quotients:") {
        let inner = body
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| parse_err(body, "expected `[a0;a1,...]`"))?;
        let (a0_str, tail_str) = match inner.split_once(';') {
            Some((h, t)) => (h, t),
            None => (inner, ""),
        };
        return Ok(RealSpec::ExplicitQuotients {
            a0: parse_bigint(a0_str)?,
            tail: parse_quotient_list(tail_str)?,
        });
    }
    if let Some(body) = s.strip_prefix("periodic:") {
        let inner = body
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| parse_err(body, "expected `[a0;pre|period]`"))?;
        let (a0_str, rest) = inner
            .split_once(';')
            .ok_or_else(|| parse_err(inner, "expected `a0;`"))?;
        let (pre_str, per_str) = rest
            .split_once('|')
            .ok_or_else(|| parse_err(rest, "expected `pre|period`"))?;
        let period = parse_quotient_list(per_str)?;
        if period.is_empty() {
            return Err(parse_err(per_str, "period must be nonempty"));
        }
        return Ok(RealSpec::PeriodicQuotients {
            a0: parse_bigint(a0_str)?,
            pre: parse_quotient_list(pre_str)?,
            period,
        });
    }
    if let Some(body) = s.strip_prefix("interval:") {
        let (lo_str, hi_str) = body
            .split_once(',')
            .ok_or_else(|| parse_err(body, "expected `LO,HI`"))?;
        let lo = parse_rational(lo_str)?;
        let hi = parse_rational(hi_str)?;
        if lo > hi {
            return Err(Error::Domain("interval endpoints out of order".into()));
        }
        return Ok(RealSpec::LiteralEnclosure { lo, hi });
    }
    Err(parse_err(s, "unrecognised spec string"))
}

/// How a gamma (shift) parameter is specified on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaSpec {
    /// An exact rational.
    Rational(BigRational),
    /// `D:k` — the signed quantity `q_k*alpha - p_k` of the alpha in use.
    DIndex(usize),
    /// `digits:[b1,b2,...]` — Ostrowski digits b_{k+1} from k = 0.
    Digits(Vec<BigInt>),
    /// A general real, evaluated by enclosure only.
    Real(RealSpec),
}

pub fn parse_gamma(s: &str) -> Result<GammaSpec> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("D:") {
        let k: usize = k.trim().parse().map_err(|_| parse_err(s, "expected D:<index>"))?;
        return Ok(GammaSpec::DIndex(k));
    }
    if let Some(body) = s.strip_prefix("digits:") {
        let inner = body
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| parse_err(body, "expected digits:[b1,b2,...]"))?;
        let digits = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| {
                    let v = parse_bigint(t)?;
                    if v.is_negative() {
                        Err(parse_err(t, "digits must be non-negative"))
                    } else {
                        Ok(v)
                    }
                })
                .collect::<Result<Vec<_>>>()?
        };
        return Ok(GammaSpec::Digits(digits));
    }
    if let Some(body) = s.strip_prefix("spec:") {
        return Ok(GammaSpec::Real(parse_real(body)?));
    }
    Ok(GammaSpec::Rational(parse_rational(s)?))
}

impl fmt::Display for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSpec::Rational(r) => write!(f, "{r}"),
            GammaSpec::DIndex(k) => write!(f, "D:{k}"),
            GammaSpec::Digits(ds) => {
                let parts: Vec<String> = ds.iter().map(|x| x.to_string()).collect();
                write!(f, "digits:[{}]", parts.join(","))
            }
            GammaSpec::Real(r) => write!(f, "spec:{r}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Resolved alpha values
// ---------------------------------------------------------------------------

/// State of the continued-fraction (Gauss map) iteration over a surd.
struct SurdCfState {
    quotients: Vec<BigInt>,
    /// Current complete quotient; the next partial quotient is floor of it.
    x: QuadExt,
}

/// Memoized quotient prefix for stream-defined numbers. Extension is
/// serialized behind the mutex; readers always see a consistent prefix.
struct StreamState {
    quotients: Vec<BigInt>,
    rule: StreamTail,
}

enum StreamTail {
    /// No further quotients are available.
    Exhausted,
    /// Quotient pattern of e: a_0 = 2 and a_k = 2(k+1)/3 when k = 2 mod 3.
    EulerE,
}

enum AlphaKind {
    Quad { value: QuadExt, cf: Mutex<SurdCfState> },
    Stream(Mutex<StreamState>),
}

/// Deepest continuation hull computed so far (streams only).
type HullCache = Mutex<Option<(usize, IntervalEnclosure)>>;

/// A resolved real number: quotients plus certified enclosures on demand.
pub struct AlphaReal {
    pub spec: RealSpec,
    kind: AlphaKind,
    hull_cache: HullCache,
}

impl fmt::Debug for AlphaReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlphaReal({})", self.spec)
    }
}

/// Folds `a0 + 1/(w1 + 1/(... + 1/x))` over the quadratic field.
fn fold_cf(a0: &BigInt, words: &[BigInt], x: QuadExt) -> QuadExt {
    let mut cur = x;
    for w in words.iter().rev() {
        cur = cur.recip().add_rational(&BigRational::from(w.clone()));
    }
    // After folding all of `words`, cur = [w1; w2, ..., x]; combine with a0.
    cur = cur.recip().add_rational(&BigRational::from(a0.clone()));
    cur
}

/// Value of the purely periodic continued fraction `[w1; w2, ..., wm, w1, ...]`.
fn periodic_value(word: &[BigInt]) -> Result<QuadExt> {
    // Convergent matrix for the word: [[p, p_prev], [q, q_prev]].
    let (mut p, mut p_prev) = (word[0].clone(), BigInt::one());
    let (mut q, mut q_prev) = (BigInt::one(), BigInt::zero());
    for w in &word[1..] {
        let np = w * &p + &p_prev;
        let nq = w * &q + &q_prev;
        p_prev = p;
        q_prev = q;
        p = np;
        q = nq;
    }
    // y = (p y + p_prev)/(q y + q_prev)  =>  q y^2 + (q_prev - p) y - p_prev = 0
    let disc = {
        let t = &q_prev - &p;
        &t * &t + BigInt::from(4) * &q * &p_prev
    };
    if disc <= BigInt::zero() || is_perfect_square(&disc) {
        return Err(Error::Domain(format!(
            "period {word:?} does not define an irrational"
        )));
    }
    let two_q = BigRational::from(BigInt::from(2) * &q);
    Ok(QuadExt::new(
        BigRational::from(&p - &q_prev) / &two_q,
        BigRational::one() / &two_q,
        disc,
    ))
}

impl AlphaReal {
    pub fn resolve(spec: &RealSpec) -> Result<Arc<AlphaReal>> {
        let kind = match spec {
            RealSpec::Golden => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                AlphaKind::new_quad(QuadExt::new(half.clone(), half, BigInt::from(5)))
            }
            RealSpec::QuadraticSurd { a, b, d, c } => {
                if d <= &BigInt::one() || is_perfect_square(d) {
                    return Err(Error::Domain(format!("d = {d} must be a nonsquare > 1")));
                }
                let c_rat = BigRational::from(c.clone());
                AlphaKind::new_quad(QuadExt::new(
                    BigRational::from(a.clone()) / &c_rat,
                    BigRational::from(b.clone()) / &c_rat,
                    d.clone(),
                ))
            }
            RealSpec::PeriodicQuotients { a0, pre, period } => {
                let y = periodic_value(period)?;
                AlphaKind::new_quad(fold_cf(a0, pre, y))
            }
            RealSpec::ExplicitQuotients { a0, tail } => {
                let mut quotients = Vec::with_capacity(tail.len() + 1);
                quotients.push(a0.clone());
                quotients.extend(tail.iter().cloned());
                AlphaKind::Stream(Mutex::new(StreamState {
                    quotients,
                    rule: StreamTail::Exhausted,
                }))
            }
            RealSpec::EulerE => AlphaKind::Stream(Mutex::new(StreamState {
                quotients: vec![BigInt::from(2)],
                rule: StreamTail::EulerE,
            })),
            RealSpec::LiteralEnclosure { .. } => {
                return Err(Error::Domain(
                    "literal intervals carry no quotient stream; use enclose() only".into(),
                ))
            }
        };
        Ok(Arc::new(AlphaReal { spec: spec.clone(), kind, hull_cache: Mutex::new(None) }))
    }

    /// Exact surd value, when this number lives in a quadratic field.
    pub fn quad_value(&self) -> Option<&QuadExt> {
        match &self.kind {
            AlphaKind::Quad { value, .. } => Some(value),
            AlphaKind::Stream(_) => None,
        }
    }

    /// Number of partial quotients currently obtainable (usize::MAX when the
    /// source is a rule or a surd).
    pub fn quotients_available(&self) -> usize {
        match &self.kind {
            AlphaKind::Quad { .. } => usize::MAX,
            AlphaKind::Stream(st) => {
                let st = st.lock().unwrap();
                match st.rule {
                    StreamTail::Exhausted => st.quotients.len(),
                    StreamTail::EulerE => usize::MAX,
                }
            }
        }
    }

    /// Partial quotients a_0..a_count inclusive.
    pub fn quotients(&self, count: usize) -> Result<Vec<BigInt>> {
        match &self.kind {
            AlphaKind::Quad { cf, .. } => {
                let mut st = cf.lock().unwrap();
                while st.quotients.len() <= count {
                    let a = st.x.floor();
                    let rem = st.x.sub(&QuadExt::from_rational(
                        BigRational::from(a.clone()),
                        st.x.d.clone(),
                    ));
                    if rem.is_zero() {
                        return Err(Error::Domain("alpha is rational".into()));
                    }
                    st.x = rem.recip();
                    st.quotients.push(a);
                }
                Ok(st.quotients[..=count].to_vec())
            }
            AlphaKind::Stream(stm) => {
                let mut st = stm.lock().unwrap();
                while st.quotients.len() <= count {
                    match st.rule {
                        StreamTail::Exhausted => {
                            return Err(Error::StreamDepth {
                                available: st.quotients.len(),
                                needed: count + 1,
                            })
                        }
                        StreamTail::EulerE => {
                            let k = st.quotients.len(); // index of the quotient being produced
                            let a = if k % 3 == 2 {
                                BigInt::from(2 * (k as u64 + 1) / 3)
                            } else {
                                BigInt::one()
                            };
                            st.quotients.push(a);
                        }
                    }
                }
                Ok(st.quotients[..=count].to_vec())
            }
        }
    }

    /// A certified enclosure of width <= 2^-prec when reachable. The bool is
    /// false when a finite stream ran out first (interval still valid).
    pub fn enclosure(&self, prec: u32) -> (DyInterval, bool) {
        match &self.kind {
            AlphaKind::Quad { value, .. } => (value.to_interval(prec), true),
            AlphaKind::Stream(_) => {
                let mut depth = 8usize;
                loop {
                    let avail = self.quotients_available();
                    let d = depth.min(avail.saturating_sub(1));
                    let (reached, hull) = self.hull_at_least(d).expect("hull within available depth");
                    let iv = DyInterval::from_rationals(&hull.lo, &hull.hi, prec + 8);
                    if iv.width_within(prec) {
                        return (iv, true);
                    }
                    if reached + 1 >= avail || depth > (1 << 24) {
                        return (iv, false);
                    }
                    depth = (reached * 2).max(depth * 2);
                }
            }
        }
    }

    /// Exact rational hull spanned by all continuations of the quotient
    /// prefix a_0..a_depth. Only meaningful for stream-backed numbers.
    pub fn stream_hull(&self, depth: usize) -> Result<IntervalEnclosure> {
        let qs = self.quotients(depth)?;
        let (mut p, mut p_prev) = (qs[0].clone(), BigInt::one());
        let (mut q, mut q_prev) = (BigInt::one(), BigInt::zero());
        for a in &qs[1..] {
            let np = a * &p + &p_prev;
            let nq = a * &q + &q_prev;
            p_prev = p;
            q_prev = q;
            p = np;
            q = nq;
        }
        // Continuations lie strictly between p/q and (p + p_prev)/(q + q_prev);
        // both endpoints are already in lowest terms (consecutive convergents
        // and their mediant-like combination satisfy |p q' - p' q| = 1).
        let end1 = BigRational::new_raw(p.clone(), q.clone());
        let end2 = BigRational::new_raw(&p + &p_prev, &q + &q_prev);
        let (lo, hi) = if end1 <= end2 { (end1, end2) } else { (end2, end1) };
        Ok(IntervalEnclosure { lo, hi })
    }

    /// The deepest continuation hull computed so far, extending it to at
    /// least `depth` rows. Deeper hulls are subsets, so any cached deeper
    /// hull is a valid (tighter) answer.
    pub fn hull_at_least(&self, depth: usize) -> Result<(usize, IntervalEnclosure)> {
        {
            let cache = self.hull_cache.lock().unwrap();
            if let Some((d, hull)) = cache.as_ref() {
                if *d >= depth {
                    return Ok((*d, hull.clone()));
                }
            }
        }
        let hull = self.stream_hull(depth)?;
        let mut cache = self.hull_cache.lock().unwrap();
        match cache.as_ref() {
            Some((d, _)) if *d >= depth => {}
            _ => *cache = Some((depth, hull.clone())),
        }
        Ok((depth, hull))
    }

    /// Exact rational value of a finite quotient list (used by `enclose`).
    fn rational_value(&self) -> Option<BigRational> {
        if let RealSpec::ExplicitQuotients { a0, tail } = &self.spec {
            let mut val = BigRational::from(a0.clone());
            if !tail.is_empty() {
                let mut x = BigRational::from(tail[tail.len() - 1].clone());
                for w in tail[..tail.len() - 1].iter().rev() {
                    x = BigRational::from(w.clone()) + x.recip();
                }
                val = val + x.recip();
            }
            Some(val)
        } else {
            None
        }
    }
}

impl AlphaKind {
    fn new_quad(value: QuadExt) -> Self {
        let x = value.clone();
        AlphaKind::Quad { value, cf: Mutex::new(SurdCfState { quotients: Vec::new(), x }) }
    }
}

/// Certified enclosure of the spec's value with width <= 2^-precision_bits.
///
/// Endpoints are snapped to the dyadic grid 2^-(precision_bits+2) computed by
/// exact floor, so enclosures at increasing precision are nested.
pub fn enclose(spec: &RealSpec, precision_bits: u32) -> Result<IntervalEnclosure> {
    let grid = precision_bits + 2;
    match spec {
        RealSpec::LiteralEnclosure { lo, hi } => {
            let width = hi - lo;
            let target = BigRational::new(BigInt::one(), BigInt::one() << precision_bits as u64);
            if width <= target {
                Ok(IntervalEnclosure { lo: lo.clone(), hi: hi.clone() })
            } else {
                Err(Error::StreamDepth { available: 0, needed: precision_bits as usize })
            }
        }
        RealSpec::ExplicitQuotients { .. } => {
            let alpha = AlphaReal::resolve(spec)?;
            let v = alpha.rational_value().expect("explicit quotients are rational");
            Ok(IntervalEnclosure { lo: v.clone(), hi: v })
        }
        _ => {
            let alpha = AlphaReal::resolve(spec)?;
            match alpha.quad_value() {
                Some(q) => {
                    let scale = BigInt::one() << grid as u64;
                    let scaled = q.mul_rational(&BigRational::from(scale.clone()));
                    let fl = scaled.floor();
                    let lo = BigRational::new(fl.clone(), scale.clone());
                    let hi = BigRational::new(fl + BigInt::one(), scale);
                    Ok(IntervalEnclosure { lo, hi })
                }
                None => {
                    // Stream: deepen until the scaled floor is decided.
                    let scale = BigInt::one() << grid as u64;
                    let mut depth = 8usize;
                    loop {
                        let avail = alpha.quotients_available();
                        let d = depth.min(avail.saturating_sub(1));
                        let hull = alpha.stream_hull(d)?;
                        let flo = (&hull.lo * BigRational::from(scale.clone())).floor();
                        let fhi = (&hull.hi * BigRational::from(scale.clone())).floor();
                        if flo == fhi {
                            let fl = flo.to_integer();
                            return Ok(IntervalEnclosure {
                                lo: BigRational::new(fl.clone(), scale.clone()),
                                hi: BigRational::new(fl + BigInt::one(), scale),
                            });
                        }
                        if d + 1 >= avail {
                            return Err(Error::StreamDepth { available: avail, needed: d + 2 });
                        }
                        depth *= 2;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_named() {
        assert_eq!(parse_real("golden").unwrap(), RealSpec::Golden);
        assert_eq!(parse_real("e").unwrap(), RealSpec::EulerE);
    }

    #[test]
    fn parse_surd_spec() {
        let s = parse_real("surd:(0+1*sqrt2)/1").unwrap();
        assert_eq!(
            s,
            RealSpec::QuadraticSurd {
                a: BigInt::zero(),
                b: BigInt::one(),
                d: BigInt::from(2),
                c: BigInt::one()
            }
        );
        assert!(parse_real("surd:(0+1*sqrt4)/1").is_err()); // perfect square
        assert!(parse_real("surd:(1+1*sqrt5)/0").is_err()); // zero denominator
    }

    #[test]
    fn parse_quotients_spec() {
        let s = parse_real("quotients:[2;1,2,1,1,4]").unwrap();
        assert_eq!(
            s,
            RealSpec::ExplicitQuotients {
                a0: BigInt::from(2),
                tail: vec![1, 2, 1, 1, 4].into_iter().map(BigInt::from).collect()
            }
        );
        assert!(parse_real("quotients:[2;1,0,3]").is_err());
    }

    #[test]
    fn parse_periodic_and_value() {
        // [1; 2, 2, 2, ...] = sqrt 2
        let s = parse_real("periodic:[1;|2]").unwrap();
        let a = AlphaReal::resolve(&s).unwrap();
        let v = a.quad_value().unwrap();
        // v^2 should be 2
        let sq = v.mul(v);
        assert!(sq.sub(&QuadExt::from_int(2, sq.d.clone())).is_zero());
    }

    #[test]
    fn golden_quotients_all_ones() {
        let a = AlphaReal::resolve(&RealSpec::Golden).unwrap();
        let qs = a.quotients(6).unwrap();
        assert_eq!(qs, vec![1u8; 7].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn e_quotients_pattern() {
        let a = AlphaReal::resolve(&RealSpec::EulerE).unwrap();
        let qs = a.quotients(10).unwrap();
        let expect: Vec<BigInt> =
            vec![2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1].into_iter().map(BigInt::from).collect();
        assert_eq!(qs, expect);
    }

    #[test]
    fn enclose_golden_nested() {
        let e10 = enclose(&RealSpec::Golden, 10).unwrap();
        let e20 = enclose(&RealSpec::Golden, 20).unwrap();
        let phi_lo = BigRational::new(BigInt::from(1618033), BigInt::from(1000000));
        let phi_hi = BigRational::new(BigInt::from(1618034), BigInt::from(1000000));
        assert!(e10.lo <= phi_lo && phi_hi <= e10.hi || e10.contains(&phi_lo));
        assert!(e20.subset_of(&e10));
        assert!(e10.width() <= BigRational::new(BigInt::one(), BigInt::from(1024)));
    }

    #[test]
    fn enclose_rational_point() {
        let spec = RealSpec::ExplicitQuotients { a0: BigInt::one(), tail: vec![] };
        let e = enclose(&spec, 77).unwrap();
        assert_eq!(e.lo, BigRational::one());
        assert_eq!(e.hi, BigRational::one());
    }

    #[test]
    fn enclose_sqrt2_precision() {
        let e = enclose(&parse_real("surd:(0+1*sqrt2)/1").unwrap(), 20).unwrap();
        let s_lo = BigRational::new(BigInt::from(14142135), BigInt::from(10000000));
        let s_hi = BigRational::new(BigInt::from(14142136), BigInt::from(10000000));
        assert!(e.lo <= s_lo && s_hi >= e.lo);
        assert!(e.contains(&BigRational::new(
            BigInt::from(141421356237u64),
            BigInt::from(100000000000u64)
        )));
        assert!(e.width() <= BigRational::new(BigInt::one(), BigInt::from(1 << 20)));
    }

    #[test]
    fn enclose_e_stream() {
        let e = enclose(&RealSpec::EulerE, 40).unwrap();
        let truth = BigRational::new(BigInt::from(271828182845904523u64), BigInt::from(100000000000000000u64));
        assert!(e.contains(&truth));
    }

    #[test]
    fn explicit_stream_depth_error() {
        let spec = RealSpec::ExplicitQuotients {
            a0: BigInt::zero(),
            tail: vec![BigInt::from(2); 3],
        };
        let a = AlphaReal::resolve(&spec).unwrap();
        assert!(a.quotients(3).is_ok());
        assert!(matches!(a.quotients(4), Err(Error::StreamDepth { .. })));
    }

    #[test]
    fn gamma_spec_parse() {
        assert!(matches!(parse_gamma("0").unwrap(), GammaSpec::Rational(r) if r.is_zero()));
        assert!(matches!(parse_gamma("D:1").unwrap(), GammaSpec::DIndex(1)));
        match parse_gamma("digits:[0,1,0,2]").unwrap() {
            GammaSpec::Digits(d) => assert_eq!(d.len(), 4),
            _ => panic!(),
        }
    }
}
