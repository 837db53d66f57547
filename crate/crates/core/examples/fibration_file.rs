//! Discriminant of a fibration described in a file.
//!
//! cargo run --example fibration_file [path]

use lcfib::fibration::{
    denominator_report, discriminant, parse_fibration_file, DiscriminantOptions,
};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tangency.fib").into()
    });
    let text = std::fs::read_to_string(&path).expect("readable file");
    let spec = match parse_fibration_file(&text) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    let opts = DiscriminantOptions {
        jobs: 2,
        ..DiscriminantOptions::default()
    };
    let report = denominator_report(discriminant(&spec, &opts).expect("discriminant"));
    print!("{}", report.render());
    println!();
    for line in report.porcelain() {
        println!("{line}");
    }
}
