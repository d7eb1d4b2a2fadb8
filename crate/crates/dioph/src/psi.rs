//! Symbolic approximating functions `psi` with certified evaluation.
//!
//! Three shapes cover everything the sums and scans need:
//! `c/n`, `1/(n*log^a(n+s)*loglog^b(n+s2))` and `n^-tau`.

use crate::dyadic::{ln_int, DyInterval};
use crate::error::{Error, Result};
use crate::realnum::parse_rational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiSpec {
    /// `c/n`
    ConstOverN { c: BigRational },
    /// `1/(n * log^a(n+s1) * loglog^b(n+s2))`; `b = 0` drops the loglog factor.
    LogPower { a: u32, s1: u64, b: u32, s2: u64 },
    /// `n^-tau` for rational `tau > 0`.
    PowerLaw { tau: BigRational },
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiSpec::ConstOverN { c } => write!(f, "{c}/n"),
            PsiSpec::LogPower { a, s1, b, s2 } => {
                if *b == 0 {
                    write!(f, "1/(n*log^{a}(n+{s1}))")
                } else {
                    write!(f, "1/(n*log^{a}(n+{s1})*loglog^{b}(n+{s2}))")
                }
            }
            PsiSpec::PowerLaw { tau } => write!(f, "n^-{tau}"),
        }
    }
}

fn parse_log_factor(tok: &str) -> Result<(u32, u64, bool)> {
    // log^A(n+S) | log(n+S) | loglog^B(n+S) | loglog(n+S)
    let (is_loglog, rest) = if let Some(r) = tok.strip_prefix("loglog") {
        (true, r)
    } else if let Some(r) = tok.strip_prefix("log") {
        (false, r)
    } else {
        return Err(Error::Parse { token: tok.into(), reason: "expected log/loglog factor".into() });
    };
    let (pow, arg) = if let Some(r) = rest.strip_prefix('^') {
        let (p, a) = r
            .split_once('(')
            .ok_or_else(|| Error::Parse { token: tok.into(), reason: "expected (n+S)".into() })?;
        (
            p.parse::<u32>()
                .map_err(|_| Error::Parse { token: tok.into(), reason: "bad exponent".into() })?,
            a,
        )
    } else {
        let a = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse { token: tok.into(), reason: "expected (n+S)".into() })?;
        (1, a)
    };
    let arg = arg
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse { token: tok.into(), reason: "unterminated (n+S)".into() })?;
    let shift = arg
        .strip_prefix("n+")
        .ok_or_else(|| Error::Parse { token: tok.into(), reason: "expected n+S".into() })?
        .parse::<u64>()
        .map_err(|_| Error::Parse { token: tok.into(), reason: "bad shift".into() })?;
    Ok((pow, shift, is_loglog))
}

pub fn parse_psi(s: &str) -> Result<PsiSpec> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(tau) = s.strip_prefix("n^-") {
        let tau = parse_rational(tau)?;
        if !tau.is_positive() {
            return Err(Error::Domain("tau must be positive".into()));
        }
        return Ok(PsiSpec::PowerLaw { tau });
    }
    if let Some(body) = s.strip_prefix("1/(n*").and_then(|b| b.strip_suffix(')')) {
        let mut a = 0u32;
        let mut s1 = 0u64;
        let mut b = 0u32;
        let mut s2 = 0u64;
        for tok in body.split('*') {
            let (pow, shift, is_loglog) = parse_log_factor(tok)?;
            if is_loglog {
                b = pow;
                s2 = shift;
                if shift < 2 {
                    return Err(Error::Domain("loglog shift must be >= 2".into()));
                }
            } else {
                a = pow;
                s1 = shift;
                if shift < 1 {
                    return Err(Error::Domain("log shift must be >= 1".into()));
                }
            }
        }
        if a == 0 {
            return Err(Error::Parse { token: s.clone(), reason: "missing log factor".into() });
        }
        return Ok(PsiSpec::LogPower { a, s1, b, s2 });
    }
    if let Some(c) = s.strip_suffix("/n") {
        let c = parse_rational(c)?;
        if !c.is_positive() {
            return Err(Error::Domain("c must be positive".into()));
        }
        return Ok(PsiSpec::ConstOverN { c });
    }
    Err(Error::Parse { token: s, reason: "unrecognised psi spec".into() })
}

impl PsiSpec {
    /// Certified enclosure of `psi(n)`.
    pub fn eval(&self, n: u64, prec: u32) -> DyInterval {
        match self {
            PsiSpec::ConstOverN { c } => {
                DyInterval::from_rational(c, prec + 8)
                    .div(&DyInterval::from_i64(n as i64), prec)
            }
            PsiSpec::LogPower { a, s1, b, s2 } => {
                let mut denom = DyInterval::from_i64(n as i64);
                let l1 = ln_int(&BigInt::from(n + s1), prec + 8);
                denom = denom.mul(&l1.pow_u32(*a, prec));
                if *b > 0 {
                    let l2 = ln_int(&BigInt::from(n + s2), prec + 8).ln(prec + 8);
                    denom = denom.mul(&l2.pow_u32(*b, prec));
                }
                denom.recip(prec)
            }
            PsiSpec::PowerLaw { tau } => {
                // n^(-p/q) = 1 / (n^p)^(1/q)
                let p = tau.numer().to_u32().unwrap_or(u32::MAX).min(256);
                let q = tau.denom().to_u32().unwrap_or(1).max(1);
                let np = num_traits::pow::Pow::pow(&BigInt::from(n), p);
                DyInterval::from_bigint(&np).nth_root(q, prec + 8).recip(prec)
            }
        }
    }

    /// All supported shapes have decreasing `psi`.
    pub fn is_decreasing(&self) -> bool {
        true
    }

    /// Whether `n -> n*psi(n)` is nonincreasing.
    pub fn n_psi_decreasing(&self) -> bool {
        match self {
            PsiSpec::ConstOverN { .. } => true,
            PsiSpec::LogPower { .. } => true,
            PsiSpec::PowerLaw { tau } => tau >= &BigRational::one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shapes() {
        assert_eq!(
            parse_psi("1/n").unwrap(),
            PsiSpec::ConstOverN { c: BigRational::one() }
        );
        assert_eq!(
            parse_psi("1/(n*log^2(n+2)*loglog(n+16))").unwrap(),
            PsiSpec::LogPower { a: 2, s1: 2, b: 1, s2: 16 }
        );
        assert_eq!(
            parse_psi("1/(n*log(n+2))").unwrap(),
            PsiSpec::LogPower { a: 1, s1: 2, b: 0, s2: 0 }
        );
        assert!(matches!(parse_psi("n^-3/2").unwrap(), PsiSpec::PowerLaw { .. }));
        assert!(parse_psi("garbage").is_err());
    }

    #[test]
    fn eval_values() {
        // psi(100) for 1/(n log^2(n+2) loglog(n+16)) = 2.998909288589662e-4...
        let psi = parse_psi("1/(n*log^2(n+2)*loglog(n+16))").unwrap();
        let iv = psi.eval(100, 96);
        let bracket = |lo_digits: u128, hi_digits: u128| {
            let scale = BigInt::from(10u8).pow(20);
            (
                BigRational::new(BigInt::from(lo_digits), scale.clone()),
                BigRational::new(BigInt::from(hi_digits), scale),
            )
        };
        let (blo, bhi) = bracket(29989092885896610, 29989092885896630);
        assert!(iv.lo.to_rational() >= blo && iv.hi.to_rational() <= bhi);

        let pl = parse_psi("n^-3/2").unwrap();
        let iv = pl.eval(4, 96);
        let truth = 0.125; // 4^(-1.5)
        let (lo, hi) = iv.to_f64_pair();
        assert!(lo <= truth && truth <= hi);
    }
}
