//! Thresholds of a few germs, by closed form and by resolution.
//!
//! cargo run --example lct

use lcfib::blowup::{lct_at_fiber_point, Branch, LctMode, WeightedGerm};
use lcfib::exact::Rational;
use lcfib::poly::parse_poly;

fn show(branches: &[(&str, Rational)]) {
    let germ = WeightedGerm::new(
        branches
            .iter()
            .map(|(eq, b)| Branch {
                equation: parse_poly(eq).expect("valid polynomial"),
                coefficient: b.clone(),
            })
            .collect(),
    )
    .expect("valid germ");
    let names: Vec<String> = branches
        .iter()
        .map(|(eq, b)| format!("{b}*({eq})"))
        .collect();
    match lct_at_fiber_point(&germ, LctMode::CrossCheck, None) {
        Ok(res) => {
            println!("{}: gamma = {}", names.join(" + "), res.gamma);
            if let Some(chain) = res.chain {
                for rec in &chain.records {
                    println!("    {rec}");
                }
            }
        }
        Err(e) => println!("{}: {e}", names.join(" + ")),
    }
}

fn main() {
    show(&[("t - x^5 - x^9", Rational::new(2, 9))]);
    show(&[("t^2 - x^3", Rational::new(1, 2))]);
    show(&[
        ("t - x^2", Rational::new(1, 2)),
        ("t + x^3", Rational::new(1, 3)),
    ]);
    show(&[("(t^2 - 2*x^2)^2 + x^5", Rational::new(1, 2))]);
}
