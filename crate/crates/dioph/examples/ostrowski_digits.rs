//! Ostrowski numeration: greedy integer expansion, digit validation, and the
//! canonical digit expansion of a real shift.
//!
//! Run with: cargo run --release -p dioph --example ostrowski_digits

use dioph::contfrac::ConvergentTable;
use dioph::ostrowski::{delta_of, expand_int, expand_real, reconstruct_int};
use dioph::realnum::{parse_gamma, RealSpec};
use dioph::value::resolve_gamma;
use num_bigint::BigInt;

fn main() -> dioph::Result<()> {
    let table = ConvergentTable::build_from_spec(&RealSpec::Golden, 40)?;

    // 17 = 13 + 3 + 1 over the Fibonacci denominators.
    let n = BigInt::from(17);
    let c = expand_int(&table, &n)?;
    println!("digits of 17: {}", serde_json::to_string(&c.to_json(&table, &n))?.to_string());
    assert_eq!(reconstruct_int(&c, &table)?, n);

    // gamma = D_1 has the single digit b_2 = 1.
    let gamma = resolve_gamma(&parse_gamma("D:1")?, &table)?;
    let b = expand_real(&table, &gamma, 25)?;
    println!("digits of D_1: {}", b.to_json(&table));

    // The difference digits drive the norm decomposition: first mismatch at
    // index m = 3 here.
    let d = delta_of(&c, &b)?;
    println!("delta digits of (n = 17, gamma = D_1): m = {:?}", d.m);

    // A rational shift gets a canonical expansion with a recorded integer
    // translation into [-alpha, 1-alpha).
    let gamma = resolve_gamma(&parse_gamma("5/2")?, &table)?;
    let b = expand_real(&table, &gamma, 30)?;
    println!("digits of 5/2: shift = {}, {}", b.shift, b.to_json(&table)["digits"]);
    Ok(())
}
