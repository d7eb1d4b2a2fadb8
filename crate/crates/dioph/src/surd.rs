//! Exact arithmetic in a real quadratic extension `Q(sqrt(d))`.
//!
//! Values are kept as `a + b*sqrt(d)` with rational `a`, `b` and a fixed
//! nonsquare `d > 1`. Sign queries are decided exactly by comparing `a^2`
//! against `b^2 d`, so no comparison ever comes back "unknown".

use crate::dyadic::DyInterval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
    /// The radicand; must be a positive nonsquare. A value with `b == 0` is
    /// rational and `d` is just carried along.
    pub d: BigInt,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        QuadExt { a, b, d }
    }

    pub fn from_rational(a: BigRational, d: BigInt) -> Self {
        QuadExt { a, b: BigRational::zero(), d }
    }

    pub fn from_int(n: i64, d: BigInt) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)), d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.is_rational() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        QuadExt { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        QuadExt { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d.clone() }
    }

    pub fn neg(&self) -> Self {
        QuadExt { a: -self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.d, o.d);
        let d = BigRational::from(self.d.clone());
        QuadExt {
            a: &self.a * &o.a + &self.b * &o.b * &d,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d.clone(),
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        QuadExt { a: &self.a * r, b: &self.b * r, d: self.d.clone() }
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        QuadExt { a: &self.a + r, b: self.b.clone(), d: self.d.clone() }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero surd");
        // 1/(a + b sqrt d) = (a - b sqrt d)/(a^2 - b^2 d)
        let d = BigRational::from(self.d.clone());
        let norm = &self.a * &self.a - &self.b * &self.b * &d;
        assert!(!norm.is_zero(), "d must be nonsquare");
        QuadExt { a: &self.a / &norm, b: -(&self.b / &norm), d: self.d.clone() }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact sign of `a + b*sqrt(d)`.
    pub fn sign(&self) -> i8 {
        let sa = rational_sign(&self.a);
        let sb = rational_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare a^2 with b^2 d.
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigRational::from(self.d.clone());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // impossible for nonsquare d with b != 0
        }
    }

    pub fn cmp_ext(&self, o: &Self) -> Ordering {
        match self.sub(o).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self.sub(&QuadExt::from_rational(r.clone(), self.d.clone())).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // Bracket with intervals, then fix up exactly.
        let mut prec = 32;
        loop {
            let iv = self.to_interval(prec);
            let lo = iv.lo.floor_int();
            let hi = iv.hi.floor_int();
            if lo == hi {
                return lo;
            }
            // The value is irrational, so it cannot sit on an integer; the
            // enclosure will eventually separate from the integer between.
            prec *= 2;
            if prec > 1 << 20 {
                unreachable!("floor of quadratic surd did not converge");
            }
        }
    }

    /// Distance to the nearest integer together with that integer.
    pub fn nearest_int(&self) -> (BigInt, QuadExt) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let shifted = self.add_rational(&half);
        let n = shifted.floor();
        let diff = self.sub(&QuadExt::from_rational(
            BigRational::from(n.clone()),
            self.d.clone(),
        ));
        (n, diff.abs())
    }

    /// Outward-rounded dyadic enclosure of width <= 2^-prec.
    pub fn to_interval(&self, prec: u32) -> DyInterval {
        // sqrt(d) to enough bits that b * err stays under 2^-(prec+1).
        let slack = 4 + bits_of_rational(&self.b);
        let sq = DyInterval::from_bigint(&self.d).sqrt(prec + slack);
        let b_iv = DyInterval::from_rational(&self.b, prec + slack);
        let a_iv = DyInterval::from_rational(&self.a, prec + slack);
        a_iv.add(&b_iv.mul(&sq)).round_to(prec + 1)
    }
}

fn bits_of_rational(r: &BigRational) -> u32 {
    (r.numer().bits() + r.denom().bits()) as u32
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

/// True when `n` is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = num_integer::Roots::sqrt(n);
    &r * &r == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn golden() -> QuadExt {
        // (1 + sqrt 5)/2
        QuadExt::new(rat(1, 2), rat(1, 2), BigInt::from(5))
    }

    #[test]
    fn golden_identities() {
        let phi = golden();
        // phi^2 = phi + 1
        let sq = phi.mul(&phi);
        let rhs = phi.add_rational(&rat(1, 1));
        assert_eq!(sq, rhs);
        assert_eq!(phi.floor(), BigInt::from(1));
        assert_eq!(phi.sign(), 1);
    }

    #[test]
    fn sign_mixed() {
        // 7 - 5 sqrt2 < 0 since 49 < 50
        let x = QuadExt::new(rat(7, 1), rat(-5, 1), BigInt::from(2));
        assert_eq!(x.sign(), -1);
        // 8 - 5 sqrt2 > 0 since 64 > 50
        let y = QuadExt::new(rat(8, 1), rat(-5, 1), BigInt::from(2));
        assert_eq!(y.sign(), 1);
    }

    #[test]
    fn nearest_and_interval() {
        // 5*phi = 8.09016994...; nearest integer 8, distance 0.09016994
        let phi = golden();
        let x = phi.mul_rational(&rat(5, 1));
        let (n, dist) = x.nearest_int();
        assert_eq!(n, BigInt::from(8));
        let iv = dist.to_interval(64);
        let (lo, hi) = iv.to_f64_pair();
        assert!(lo <= 0.09016994374947424 && 0.09016994374947424 <= hi);
    }

    #[test]
    fn recip_roundtrip() {
        let x = QuadExt::new(rat(3, 7), rat(-2, 9), BigInt::from(3));
        let r = x.recip();
        let prod = x.mul(&r);
        assert!(prod.sub(&QuadExt::from_int(1, BigInt::from(3))).is_zero());
    }
}
