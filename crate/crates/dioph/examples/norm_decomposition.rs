//! Two certified routes to ||n*alpha - gamma||: the direct interval oracle
//! and the digit-level decomposition, which also certifies the three-term
//! identities behind the explicit estimates.
//!
//! Run with: cargo run --release -p dioph --example norm_decomposition

use dioph::contfrac::ConvergentTable;
use dioph::normeval::{hom_bounds, norm_direct, norm_via_ostrowski, Branch, HomBounds};
use dioph::ostrowski::{expand_int, expand_real};
use dioph::realnum::{parse_gamma, RealSpec};
use dioph::value::{resolve_gamma, GammaValue};
use num_bigint::BigInt;

fn main() -> dioph::Result<()> {
    let table = ConvergentTable::build_from_spec(&RealSpec::Golden, 60)?;
    let gamma_spec = parse_gamma("D:1")?;
    let gamma = resolve_gamma(&gamma_spec, &table)?;
    let b = expand_real(&table, &gamma, 45)?;

    for n in [17u32, 100, 2584, 9999] {
        let n = BigInt::from(n);
        let direct = norm_direct(&table, &n, &gamma, 100)?;
        let c = expand_int(&table, &n)?;
        let via = norm_via_ostrowski(&table, &c, &b)?;
        let d = via.decomposition.as_ref().unwrap();
        println!(
            "n = {n}: direct [{}, {}], digit route m = {}, branch = {:?}, ell = {}, agree = {}",
            direct.value.to_decimal_pair(12).0,
            direct.value.to_decimal_pair(12).1,
            d.m,
            match d.branch {
                Branch::AbsSigma => "|Sigma|",
                Branch::OneMinusAbsSigma => "1-|Sigma|",
            },
            d.ell,
            via.value.intersects(&direct.value),
        );
    }

    // Homogeneous two-sided bracket from the digits alone.
    for n in [12u32, 29, 70] {
        let n = BigInt::from(n);
        let c = expand_int(&table, &n)?;
        match hom_bounds(&c, &table)? {
            HomBounds::Bracket { lower, upper, m } => {
                let direct = norm_direct(&table, &n, &GammaValue::zero(), 100)?;
                println!(
                    "||{n} alpha||: bracket [{:.6}, {:.6}] around {:.6} (m = {m})",
                    lower.to_f64_pair().0,
                    upper.to_f64_pair().1,
                    direct.value.to_f64_pair().0,
                );
            }
            HomBounds::HypothesisNotMet { m } => {
                println!("||{n} alpha||: first digit too early (m = {m}), bracket not applicable");
            }
        }
    }
    Ok(())
}
