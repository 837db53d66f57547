use std::path::PathBuf;

use lcfib::cli::{run_command, EXIT_ENGINE, EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("examples/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn temp_file(name: &str, text: &str) -> String {
    let mut p = std::env::temp_dir();
    p.push(format!("lcfib-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn lct_prints_gamma() {
    let out = run_command(["lct", "--germ", "t - x^5 - x^9", "--coeff", "2/9"]);
    assert_eq!(out.exit_code, EXIT_OK);
    assert_eq!(out.report.lines().next(), Some("gamma=44/45"));
    let out = run_command([
        "lct",
        "--germ",
        "t - x^5 - x^9",
        "--coeff",
        "2/9",
        "--porcelain",
    ]);
    assert!(out.output().contains("gamma_closed_form=44/45\n"));
    assert!(out.output().contains("chain.5=5,5,10/9\n"));
}

#[test]
fn lct_modes() {
    let fast = run_command(["lct", "--germ", "t - x^3", "--coeff", "1/2", "--fast"]);
    assert_eq!(fast.exit_code, EXIT_OK);
    assert!(fast.report.starts_with("gamma=5/6"));
    let cusp = run_command(["lct", "--germ", "t^2 - x^3", "--coeff", "1/2", "--fast"]);
    assert_eq!(cusp.exit_code, EXIT_INPUT);
    let cusp = run_command(["lct", "--germ", "t^2 - x^3", "--coeff", "1/2", "--engine"]);
    assert!(cusp.report.starts_with("gamma=2/3"));
    let two = run_command([
        "lct", "--germ", "t - x^2", "--coeff", "1/2", "--germ", "t + x^3", "--coeff", "1/3",
    ]);
    assert!(two.report.starts_with("gamma=2/3"));
    let capped = run_command([
        "lct",
        "--germ",
        "t - x^13 - x^25",
        "--coeff",
        "2/25",
        "--engine",
        "--max-steps",
        "3",
    ]);
    assert_eq!(capped.exit_code, EXIT_ENGINE);
}

#[test]
fn fibration_porcelain_is_deterministic() {
    let path = data("tangency.fib");
    let a = run_command(["fibration", path.as_str(), "--porcelain"]);
    let b = run_command(["fibration", path.as_str(), "--porcelain", "--jobs", "4"]);
    assert_eq!(a.exit_code, EXIT_OK);
    assert_eq!(a.output(), b.output());
    let text = a.output();
    for line in [
        "global.r=9",
        "point.o.gamma=44/45",
        "point.o.coeff=1/45",
        "point.o.witness_l=5",
        "point.q.coeff=1/2",
        "global.den_BZ=90",
        "global.den_MZ_divides=810",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line}");
    }
}

#[test]
fn fibration_errors() {
    assert_eq!(
        run_command(["fibration", "missing.txt"]).exit_code,
        EXIT_INPUT
    );
    let bad = temp_file("bad.fib", "component D coeff=1/3 fiber_degree=5\n");
    assert_eq!(
        run_command(["fibration", bad.as_str()]).exit_code,
        EXIT_INPUT
    );
    let engine = temp_file(
        "engine.fib",
        "component D coeff=1/4 fiber_degree=8\npoint label=o component=D germ=\"(t^2 - 2*x^2)^2 + x^5\"\n",
    );
    assert_eq!(
        run_command(["fibration", engine.as_str()]).exit_code,
        EXIT_ENGINE
    );
    let not_lc = temp_file(
        "notlc.fib",
        "component D coeff=2/9 fiber_degree=9\npoint label=o component=D tangency=5\nvertical label=o coeff=1\n",
    );
    assert_eq!(
        run_command(["fibration", not_lc.as_str()]).exit_code,
        EXIT_INPUT
    );
}

#[test]
fn emitted_spec_runs_through_fibration() {
    let out = run_command([
        "construct",
        "multipoint",
        "--d",
        "8",
        "--ls",
        "5,7",
        "--emit-spec",
    ]);
    assert_eq!(out.exit_code, EXIT_OK);
    let path = temp_file("multipoint.fib", &out.output());
    let rep = run_command(["fibration", path.as_str(), "--porcelain"]);
    assert_eq!(rep.exit_code, EXIT_OK);
    assert!(rep.output().contains("global.den_BZ=140\n"));
    assert!(rep.output().contains("point.o1.profile.D.contact=5\n"));
    assert!(rep.output().contains("point.o2.profile.D.contact=7\n"));
}

#[test]
fn construct_commands() {
    let out = run_command(["construct", "sharp", "--r", "3", "--verify"]);
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.output().contains("V=15 expected=15 pass"));
    let out = run_command([
        "construct",
        "cex",
        "--l",
        "5",
        "--d",
        "9",
        "--verify",
        "--porcelain",
    ]);
    assert!(out
        .output()
        .contains("recipe.twelve_r_coeff_integral=false\n"));
    let out = run_command([
        "construct",
        "mainteo3",
        "--r",
        "5",
        "--verify",
        "--porcelain",
    ]);
    assert!(out.output().contains("recipe.V=2520\n"));
    assert!(out.output().contains("recipe.exclusion_changes_V=false\n"));
    let out = run_command([
        "construct",
        "multipoint",
        "--d",
        "8",
        "--ls",
        "5,7",
        "--os",
        "1/2,-3",
        "--verify",
    ]);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.report);
    let out = run_command(["construct", "multipoint", "--d", "8", "--ls", "5,8"]);
    assert_eq!(out.exit_code, EXIT_INPUT);
    let out = run_command(["construct", "cex", "--l", "2", "--d", "9"]);
    assert_eq!(out.exit_code, EXIT_INPUT);
}

#[test]
fn bounds_commands() {
    let out = run_command(["bounds", "--r-max", "5", "--porcelain"]);
    assert_eq!(out.exit_code, EXIT_OK);
    let text = out.output();
    assert!(text.contains("bounds.r1.reduced_bound=2\n"));
    assert!(text.contains("bounds.r4.match=off_by_factor_2\n"));
    assert!(text.contains("bounds.r5.todorov_I=1441440\n"));
    let audit = run_command(["bounds", "--audit", "--porcelain"]);
    assert!(audit.output().contains("audit.off_by_factor_2=4,8\n"));
    assert_eq!(
        run_command(["bounds", "--r-max", "0"]).exit_code,
        EXIT_INPUT
    );
}

#[test]
fn verify_suite_command_passes() {
    let out = run_command(["verify-paper", "--porcelain"]);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.report);
    assert!(out.output().ends_with("verified=true\n"));
    assert_ne!(out.exit_code, EXIT_VERIFICATION);
}

#[test]
fn unknown_command() {
    assert_eq!(run_command(["frobnicate"]).exit_code, EXIT_INPUT);
    assert_eq!(run_command(["--version"]).exit_code, EXIT_OK);
}

#[test]
fn file_round_trip() {
    for name in ["tangency.fib", "two_components.fib"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let spec = lcfib::fibration::parse_fibration_file(&text).unwrap();
        let again = lcfib::fibration::parse_fibration_file(&spec.to_file_text()).unwrap();
        assert_eq!(spec, again);
    }
}
