//! Dyadic numbers and outward-rounded interval arithmetic.
//!
//! All certified numeric verdicts in this crate are computed over
//! [`DyInterval`]s whose endpoints are exact dyadic rationals `m * 2^e`.
//! Addition and multiplication of endpoints are exact; division, roots and
//! logarithms round outward at an explicit precision, so every interval is a
//! true enclosure of the real value it stands for. No floating point is used
//! anywhere on a verdict path.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

/// An exact dyadic rational `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub mant: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Dyadic { mant: n.clone(), exp: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic { mant: BigInt::from(n), exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Strips trailing zero bits so equal values share a representation.
    pub fn normalize(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact addition.
    pub fn add(&self, other: &Self) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic { mant: a + b, exp: e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact multiplication.
    pub fn mul(&self, other: &Self) -> Self {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        Dyadic { mant: &self.mant * n, exp: self.exp }
    }

    pub fn shl(&self, k: i64) -> Self {
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn cmp_dy(&self, other: &Self) -> Ordering {
        // Compare without allocating when exponents match.
        if self.exp == other.exp {
            return self.mant.cmp(&other.mant);
        }
        let d = self.sub(other);
        d.mant.cmp(&BigInt::zero())
    }

    /// Rounds down (towards -inf) to `prec` fractional bits.
    pub fn round_down(&self, prec: u32) -> Self {
        let target = -(prec as i64);
        if self.exp >= target || self.mant.is_zero() {
            return self.clone();
        }
        let shift = (target - self.exp) as u64;
        Dyadic { mant: floor_shr(&self.mant, shift), exp: target }
    }

    /// Rounds up (towards +inf) to `prec` fractional bits.
    pub fn round_up(&self, prec: u32) -> Self {
        let target = -(prec as i64);
        if self.exp >= target || self.mant.is_zero() {
            return self.clone();
        }
        let shift = (target - self.exp) as u64;
        Dyadic { mant: ceil_shr(&self.mant, shift), exp: target }
    }

    /// Floor of the value as a big integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            floor_shr(&self.mant, (-self.exp) as u64)
        }
    }

    /// Ceiling of the value as a big integer.
    pub fn ceil_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            ceil_shr(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // mant * 2^exp  vs  num/den  <=>  mant * den * 2^exp vs num
        let lhs_base = &self.mant * r.denom();
        if self.exp >= 0 {
            (lhs_base << self.exp as u64).cmp(r.numer())
        } else {
            lhs_base.cmp(&(r.numer() << (-self.exp) as u64))
        }
    }

    /// Directed conversion from a rational: result <= x when rounding down.
    pub fn from_rational(x: &BigRational, prec: u32, up: bool) -> Self {
        // x * 2^prec rounded in the requested direction; BigRational keeps
        // denominators positive, so div_floor gives the downward quotient.
        let num = x.numer() << prec as u64;
        let q = num.div_floor(x.denom());
        let exact = num.is_multiple_of(x.denom());
        let m = if exact || !up { q } else { q + 1 };
        Dyadic { mant: m, exp: -(prec as i64) }
    }

    pub fn to_f64(&self) -> f64 {
        // Only for human-facing display; never for verdicts.
        let bits = self.mant.bits() as i64;
        if bits <= 53 {
            self.mant.to_f64().unwrap_or(f64::NAN) * 2f64.powi(self.exp as i32)
        } else {
            let shift = bits - 54;
            let top = &self.mant >> shift as u64;
            // round-to-nearest on the dropped bits
            let rounded = (top + BigInt::one()) >> 1u64;
            rounded.to_f64().unwrap_or(f64::NAN) * 2f64.powi((self.exp + shift + 1) as i32)
        }
    }

    /// Decimal string with `digits` fractional digits, rounded in `dir`
    /// (-1 down, +1 up). Deterministic, used for report output.
    pub fn to_decimal(&self, digits: u32, dir: i8) -> String {
        let pow10 = BigInt::from(10u32).pow(digits);
        let scaled = {
            let v = self.mul_bigint(&pow10);
            if dir <= 0 {
                v.floor_int()
            } else {
                v.ceil_int()
            }
        };
        let neg = scaled.is_negative();
        let abs = scaled.magnitude().to_string();
        let s = if abs.len() <= digits as usize {
            format!("0.{}{}", "0".repeat(digits as usize - abs.len()), abs)
        } else {
            let (int, frac) = abs.split_at(abs.len() - digits as usize);
            format!("{int}.{frac}")
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

fn floor_shr(m: &BigInt, shift: u64) -> BigInt {
    // BigInt >> rounds towards negative infinity already.
    m >> shift
}

fn ceil_shr(m: &BigInt, shift: u64) -> BigInt {
    -((-m) >> shift)
}

/// A closed interval with dyadic endpoints, `lo <= hi`.
#[derive(Clone, Debug)]
pub struct DyInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_dy(&hi) != Ordering::Greater, "interval endpoints out of order");
        DyInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::point(Dyadic::from_bigint(n))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::point(Dyadic::from_i64(n))
    }

    /// Encloses a rational exactly up to `prec` outward rounding.
    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        DyInterval {
            lo: Dyadic::from_rational(x, prec, false),
            hi: Dyadic::from_rational(x, prec, true),
        }
    }

    pub fn from_rationals(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        DyInterval {
            lo: Dyadic::from_rational(lo, prec, false),
            hi: Dyadic::from_rational(hi, prec, true),
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// True when the interval width is at most `2^-bits`.
    pub fn width_within(&self, bits: u32) -> bool {
        let w = self.width();
        w.cmp_dy(&Dyadic::new(BigInt::one(), -(bits as i64))) != Ordering::Greater
    }

    pub fn add(&self, o: &Self) -> Self {
        DyInterval { lo: self.lo.add(&o.lo), hi: self.hi.add(&o.hi) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        DyInterval { lo: self.lo.sub(&o.hi), hi: self.hi.sub(&o.lo) }
    }

    pub fn neg(&self) -> Self {
        DyInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let cands = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if c.cmp_dy(&lo) == Ordering::Less {
                lo = c.clone();
            }
            if c.cmp_dy(&hi) == Ordering::Greater {
                hi = c.clone();
            }
        }
        DyInterval { lo, hi }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        if n.is_negative() {
            DyInterval { lo: self.hi.mul_bigint(n), hi: self.lo.mul_bigint(n) }
        } else {
            DyInterval { lo: self.lo.mul_bigint(n), hi: self.hi.mul_bigint(n) }
        }
    }

    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> Self {
        self.mul(&DyInterval::from_rational(r, prec))
    }

    pub fn abs(&self) -> Self {
        if self.lo.sign() >= 0 {
            self.clone()
        } else if self.hi.sign() <= 0 {
            self.neg()
        } else {
            let hi = if self.lo.neg().cmp_dy(&self.hi) == Ordering::Greater {
                self.lo.neg()
            } else {
                self.hi.clone()
            };
            DyInterval { lo: Dyadic::zero(), hi }
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() <= 0 && self.hi.sign() >= 0
    }

    /// Certified sign: Some(-1|0|1) when decidable (0 only for exact zero point).
    pub fn sign(&self) -> Option<i8> {
        if self.lo.sign() > 0 {
            Some(1)
        } else if self.hi.sign() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// 1/x with outward rounding; requires the interval to exclude zero.
    pub fn recip(&self, prec: u32) -> Self {
        assert!(!self.contains_zero(), "recip of interval containing zero");
        let lo = dy_recip(&self.hi, prec, false);
        let hi = dy_recip(&self.lo, prec, true);
        DyInterval { lo, hi }
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        self.mul(&o.recip(prec))
    }

    /// Outward rounding of both endpoints to `prec` fractional bits.
    pub fn round_to(&self, prec: u32) -> Self {
        DyInterval { lo: self.lo.round_down(prec), hi: self.hi.round_up(prec) }
    }

    /// sqrt with outward rounding; requires lo >= 0.
    pub fn sqrt(&self, prec: u32) -> Self {
        self.nth_root(2, prec)
    }

    /// n-th root with outward rounding; requires lo >= 0.
    pub fn nth_root(&self, n: u32, prec: u32) -> Self {
        assert!(self.lo.sign() >= 0, "nth_root of negative interval");
        DyInterval {
            lo: dy_nth_root(&self.lo, n, prec, false),
            hi: dy_nth_root(&self.hi, n, prec, true),
        }
    }

    /// Natural logarithm with outward rounding; requires lo > 0.
    pub fn ln(&self, prec: u32) -> Self {
        assert!(self.lo.sign() > 0, "ln of non-positive interval");
        DyInterval { lo: dy_ln(&self.lo, prec, false), hi: dy_ln(&self.hi, prec, true) }
    }

    pub fn pow_u32(&self, k: u32, _prec: u32) -> Self {
        let mut r = DyInterval::from_i64(1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn min_iv(&self, o: &Self) -> Self {
        DyInterval {
            lo: if self.lo.cmp_dy(&o.lo) == Ordering::Less { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi.cmp_dy(&o.hi) == Ordering::Less { self.hi.clone() } else { o.hi.clone() },
        }
    }

    pub fn max_iv(&self, o: &Self) -> Self {
        DyInterval {
            lo: if self.lo.cmp_dy(&o.lo) == Ordering::Greater { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi.cmp_dy(&o.hi) == Ordering::Greater { self.hi.clone() } else { o.hi.clone() },
        }
    }

    /// Certified strict less-than: true only if hi < o.lo.
    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.hi.cmp_dy(&o.lo) == Ordering::Less
    }

    /// Certified less-or-equal: true only if hi <= o.lo.
    pub fn certainly_le(&self, o: &Self) -> bool {
        self.hi.cmp_dy(&o.lo) != Ordering::Greater
    }

    pub fn certainly_gt(&self, o: &Self) -> bool {
        o.certainly_lt(self)
    }

    pub fn certainly_ge(&self, o: &Self) -> bool {
        o.certainly_le(self)
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.lo.cmp_dy(&o.hi) != Ordering::Greater && o.lo.cmp_dy(&self.hi) != Ordering::Greater
    }

    /// True if `self` is contained in `o`.
    pub fn subset_of(&self, o: &Self) -> bool {
        o.lo.cmp_dy(&self.lo) != Ordering::Greater && self.hi.cmp_dy(&o.hi) != Ordering::Greater
    }

    /// Distance to the nearest integer, as a certified enclosure in [0, 1/2].
    pub fn nearest_int_dist(&self) -> Self {
        // Work with the fractional position y = x - floor(x_lo).
        let f = self.lo.floor_int();
        let shifted = self.sub(&DyInterval::from_bigint(&f));
        // shifted.lo in [0,1); shifted.hi may exceed 1 when the interval
        // straddles an integer. If the width is >= 1/2 the answer is [0,1/2].
        let half = Dyadic::new(BigInt::one(), -1);
        if shifted.width().cmp_dy(&half) != Ordering::Less {
            return DyInterval { lo: Dyadic::zero(), hi: half };
        }
        let one = Dyadic::one();
        // Candidate distances to 0, 1, 2 for both endpoints; the enclosure of
        // ||x|| over the interval is [min over x of dist, max over x of dist],
        // where dist is piecewise linear with kinks at integers and
        // half-integers. With width < 1/2 at most one kink of each type lies
        // inside, so evaluating at endpoints and kinks suffices.
        let dist = |p: &Dyadic| -> Dyadic {
            // p in [0, 2): distance to {0,1,2}
            let d0 = p.abs();
            let d1 = p.sub(&one).abs();
            let d2 = p.sub(&Dyadic::from_i64(2)).abs();
            let mut m = d0;
            if d1.cmp_dy(&m) == Ordering::Less {
                m = d1;
            }
            if d2.cmp_dy(&m) == Ordering::Less {
                m = d2;
            }
            m
        };
        let mut lo = dist(&shifted.lo);
        let mut hi = dist(&shifted.hi);
        if hi.cmp_dy(&lo) == Ordering::Less {
            std::mem::swap(&mut lo, &mut hi);
        }
        // Interior extrema: integers give min 0, half-integers give max 1/2.
        for kink_num in 0..=4u32 {
            // kinks at k/2 for k = 0..4 over [0,2)
            let kink = Dyadic::new(BigInt::from(kink_num), -1);
            if shifted.lo.cmp_dy(&kink) == Ordering::Less
                && kink.cmp_dy(&shifted.hi) == Ordering::Less
            {
                let v = dist(&kink);
                if v.cmp_dy(&lo) == Ordering::Less {
                    lo = v.clone();
                }
                if v.cmp_dy(&hi) == Ordering::Greater {
                    hi = v;
                }
            }
        }
        if hi.cmp_dy(&half) == Ordering::Greater {
            hi = half;
        }
        if lo.sign() < 0 {
            lo = Dyadic::zero();
        }
        DyInterval { lo, hi }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    /// Deterministic decimal rendering `[lo, hi]` with outward rounding.
    pub fn to_decimal_pair(&self, digits: u32) -> (String, String) {
        (self.lo.to_decimal(digits, -1), self.hi.to_decimal(digits, 1))
    }
}

fn dy_recip(x: &Dyadic, prec: u32, up: bool) -> Dyadic {
    assert!(!x.is_zero());
    // 1/(m*2^e) = (2^s/m) * 2^(-s-e); choose s so the quotient has prec
    // significant bits past the needed scale.
    let s = prec as i64 + x.mant.bits() as i64 + 2;
    let num = BigInt::one() << s as u64;
    let (q, r) = num.div_rem(&x.mant);
    // BigInt div_rem truncates toward zero; fix direction explicitly.
    let exact = r.is_zero();
    let mut q = q;
    if !exact {
        let res_positive = x.mant.is_positive();
        match (up, res_positive) {
            (true, true) => q += 1,
            (false, true) => {}
            (true, false) => {} // trunc toward zero is already an upper bound
            (false, false) => q -= 1,
        }
    }
    Dyadic { mant: q, exp: -s - x.exp }
}

fn dy_nth_root(x: &Dyadic, n: u32, prec: u32, up: bool) -> Dyadic {
    #[allow(unused_imports)]
    use num_integer::Roots;
    if x.is_zero() {
        return Dyadic::zero();
    }
    assert!(x.sign() > 0);
    // value^(1/n) * 2^prec = (m * 2^(e + n*prec))^(1/n)
    let t = x.exp + (n as i64) * (prec as i64);
    let (scaled, extra) = if t >= 0 {
        (&x.mant << t as u64, 0i64)
    } else {
        // Bump by a multiple of n to keep the exponent expressible.
        let bump = (-t + n as i64 - 1) / n as i64;
        (&x.mant << (t + bump * n as i64) as u64, bump)
    };
    let root = scaled.nth_root(n);
    let exact = num_traits::pow::Pow::pow(&root, n) == scaled;
    let m = if up && !exact { root + 1 } else { root };
    Dyadic { mant: m, exp: -(prec as i64) - extra }
}

/// ln(2) enclosure at the requested precision, cached.
fn ln2_interval(prec: u32) -> DyInterval {
    static CACHE: Mutex<Option<(u32, (BigInt, BigInt, i64))>> = Mutex::new(None);
    {
        let guard = CACHE.lock().unwrap();
        if let Some((p, (lo, hi, exp))) = guard.as_ref() {
            if *p >= prec {
                return DyInterval {
                    lo: Dyadic::new(lo.clone(), *exp),
                    hi: Dyadic::new(hi.clone(), *exp),
                };
            }
        }
    }
    // ln 2 = 2 atanh(1/3) = 2 * sum z^(2i+1)/(2i+1), z = 1/3.
    let iv = atanh_recip_int(3, prec + 8).mul(&DyInterval::from_i64(2)).round_to(prec + 4);
    let mut guard = CACHE.lock().unwrap();
    let lo = iv.lo.round_down(prec + 4);
    let hi = iv.hi.round_up(prec + 4);
    debug_assert_eq!(lo.exp, hi.exp);
    *guard = Some((prec, (lo.mant.clone(), hi.mant.clone(), lo.exp)));
    DyInterval { lo, hi }
}

/// atanh(1/k) for integer k >= 2, outward-rounded enclosure.
fn atanh_recip_int(k: u32, prec: u32) -> DyInterval {
    // sum_{i>=0} (1/k)^(2i+1) / (2i+1); tail after I terms is bounded by
    // (1/k)^(2I+1) / (1 - 1/k^2).
    let work = prec + 16;
    let kk = BigInt::from(k);
    let k2 = &kk * &kk;
    let mut term_den = kk.clone(); // k^(2i+1)
    let mut sum = DyInterval::zero();
    let mut i = 0u32;
    loop {
        let denom = &term_den * BigInt::from(2 * i + 1);
        let t = DyInterval::from_rational(&BigRational::new(BigInt::one(), denom), work);
        sum = sum.add(&t).round_to(work);
        // Stop when the next term is below 2^-(work) comfortably.
        let next_den = &term_den * &k2;
        if next_den.bits() as i64 > work as i64 + 4 {
            // tail bound: first omitted term * k^2/(k^2-1)
            let tail_num = &k2 * BigInt::from(1u32);
            let tail_den = (&next_den * (2 * i + 3)) * (&k2 - BigInt::one());
            let tail = BigRational::new(tail_num, tail_den);
            let tail_iv = DyInterval::from_rational(&tail, work);
            sum = DyInterval { lo: sum.lo, hi: sum.hi.add(&tail_iv.hi) };
            return sum;
        }
        term_den = next_den;
        i += 1;
    }
}

fn dy_ln(x: &Dyadic, prec: u32, up: bool) -> Dyadic {
    assert!(x.sign() > 0);
    let iv = ln_interval_point(x, prec + 4);
    if up {
        iv.hi.round_up(prec)
    } else {
        iv.lo.round_down(prec)
    }
}

/// Enclosure of ln(x) for an exact dyadic x > 0.
fn ln_interval_point(x: &Dyadic, prec: u32) -> DyInterval {
    // Normalize x = y * 2^j with y in [1, 2).
    let bits = x.mant.bits() as i64;
    let j = x.exp + bits - 1;
    let y = Dyadic { mant: x.mant.clone(), exp: -(bits - 1) };
    // ln y = 2 atanh(z), z = (y-1)/(y+1) in [0, 1/3].
    let work = prec + 16;
    let one = DyInterval::from_i64(1);
    let y_iv = DyInterval::point(y);
    let z = y_iv.sub(&one).div(&y_iv.add(&one), work);
    let lny = atanh_iv(&z, work).mul(&DyInterval::from_i64(2));
    let j_ln2 = ln2_interval(work).mul(&DyInterval::from_i64(j));
    lny.add(&j_ln2).round_to(prec)
}

/// atanh on an interval inside [0, 0.34], outward rounded.
fn atanh_iv(z: &DyInterval, prec: u32) -> DyInterval {
    debug_assert!(z.lo.sign() >= 0);
    let third_plus = Dyadic::from_rational(&BigRational::new(BigInt::from(35), BigInt::from(100)), prec, true);
    debug_assert!(z.hi.cmp_dy(&third_plus) != Ordering::Greater, "atanh argument out of range");
    let work = prec + 8;
    let z2 = z.mul(z).round_to(work);
    let mut power = z.clone(); // z^(2i+1)
    let mut sum = DyInterval::zero();
    let mut i = 0u32;
    loop {
        let t = power.div(&DyInterval::from_i64((2 * i + 1) as i64), work);
        sum = sum.add(&t).round_to(work);
        power = power.mul(&z2).round_to(work);
        // Tail bound: power.hi/(2i+3) * 1/(1-z2.hi) <= power.hi * 9/8 / (2i+3)
        let tail_hi = power
            .hi
            .mul(&Dyadic::new(BigInt::from(9), 0))
            .round_up(work); // *9, /8 and /(2i+3) below
        let tail = Dyadic { mant: tail_hi.mant, exp: tail_hi.exp - 3 };
        // Outward rounding pins power.hi at the 2^-work grid, so exit a few
        // bits above it; the tail stays a valid remainder bound either way.
        let bound = Dyadic::new(BigInt::one(), -(work as i64) + 6);
        if tail.cmp_dy(&bound) == Ordering::Less || power.hi.is_zero() {
            return DyInterval { lo: sum.lo, hi: sum.hi.add(&tail) };
        }
        i += 1;
        if i > 4 * work {
            // Unreachable for arguments in range.
            panic!("atanh series failed to converge");
        }
    }
}

/// Enclosure of ln(n) for a positive integer.
pub fn ln_int(n: &BigInt, prec: u32) -> DyInterval {
    assert!(n.is_positive());
    DyInterval::from_bigint(n).ln(prec)
}

/// Enclosure of ln of a positive rational.
pub fn ln_rational(x: &BigRational, prec: u32) -> DyInterval {
    assert!(x.is_positive());
    DyInterval::from_rational(x, prec + x.denom().bits() as u32 + x.numer().bits() as u32 + 4)
        .ln(prec)
}
