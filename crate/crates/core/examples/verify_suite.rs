//! Run every built-in criterion and print one line each.
//!
//! cargo run --release --example verify_suite

fn main() {
    let results = lcfib::suite::run_suite(4);
    for c in &results {
        println!("{c}");
    }
    if results.iter().any(|c| !c.passed) {
        std::process::exit(1);
    }
}
