//! Convergent tables: partial quotients, p/q recurrences, the signed errors
//! D_k, and the finite-depth exponent-of-approximation estimator.
//!
//! Run with: cargo run --release -p dioph --example convergents

use dioph::contfrac::{partial_quotients, ConvergentTable};
use dioph::realnum::parse_real;
use num_bigint::BigInt;

fn main() -> dioph::Result<()> {
    for spec in ["golden", "surd:(0+1*sqrt2)/1", "e"] {
        let parsed = parse_real(spec)?;
        let quots = partial_quotients(&parsed, 10)?;
        println!("{spec}: a_0..a_10 = {quots:?}");
        let table = ConvergentTable::build_from_spec(&parsed, 12)?;
        print!("  q_k: ");
        for k in 0..=10 {
            print!("{} ", table.q(k));
        }
        println!();
        let k = table.k_of(&BigInt::from(1000))?;
        println!("  K(1000) = {k} with q_K = {}", table.q(k));
        let w = table.approx_exponent(12)?;
        let (lo, hi) = w.to_f64_pair();
        println!("  exponent estimate at depth 12: [{lo:.4}, {hi:.4}]");
    }

    // A rapidly-approximable stream: watch the estimator climb.
    let spec = parse_real("quotients:[0;1,1,4,729,6563,1,1,1,1]")?;
    let table = ConvergentTable::build_from_spec(&spec, 5)?;
    for depth in 2..=5 {
        let w = table.approx_exponent(depth)?;
        println!("stream exponent at depth {depth}: [{:.3}, {:.3}]", w.to_f64_pair().0, w.to_f64_pair().1);
    }
    Ok(())
}
