//! Parsing, blow-up charts and fibre intersection profiles.
//!
//! cargo run --example polynomials

use lcfib::exact::Rational;
use lcfib::poly::{fiber_intersection_profile, parse_poly, Chart};

fn main() {
    let f = parse_poly("t^2 - x^3 + x*t").unwrap();
    println!("f = {f}, order {}", f.order().unwrap());
    for chart in [Chart::X, Chart::T] {
        let (strict, m) = f.blowup_chart(chart).unwrap();
        println!("  {chart:?} chart: exceptional multiplicity {m}, strict transform {strict}");
    }

    let g = parse_poly("t - x^5 - x^9").unwrap();
    let profile = fiber_intersection_profile(&g, &Rational::zero(), 9).unwrap();
    println!("{g} against t = 0: {profile}");
}
