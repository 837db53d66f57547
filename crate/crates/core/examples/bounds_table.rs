//! The reduced bound next to the reference table.
//!
//! cargo run --example bounds_table

use lcfib::bounds::{compare_bounds_table, h_exponent, s_exponent};
use lcfib::exact::primes_upto;

fn main() {
    println!(
        "{:>3} {:>12} {:>14} {:>12}  flag",
        "r", "table N", "reduced", "r*reduced"
    );
    for row in compare_bounds_table() {
        println!(
            "{:>3} {:>12} {:>14} {:>12}  {}",
            row.r, row.table_n, row.reduced_bound, row.formula_n, row.match_flag
        );
    }

    let r = 7;
    println!("\nexponents for r = {r}:");
    for q in primes_upto(2 * r - 1) {
        let s = s_exponent(q, r).unwrap();
        let h = h_exponent(q, r).unwrap();
        println!(
            "  q = {q:>2}: s = {s}, h = {h}, 2^h q^s = {}",
            (1u64 << h) * q.pow(s)
        );
    }
}
