//! Command-line front end. [`run_command`] never prints; it returns the text
//! and porcelain lines for the caller to emit.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::blowup::{lct_at_fiber_point, Branch, LctMode, WeightedGerm};
use crate::bounds::{compare_bounds_table, formula_n, reduced_bound, BoundTableRow, MatchFlag};
use crate::constructions::{
    cex_family, mainteo3_recipe, multipoint_recipe, sharp_family, verify_recipe, ConstructionError,
    Recipe,
};
use crate::exact::Rational;
use crate::fibration::{
    denominator_report, discriminant, parse_fibration_file, DiscriminantOptions, FibrationError,
};
use crate::poly::parse_poly;
use crate::suite::run_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ENGINE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: String,
    pub porcelain: Vec<String>,
    /// Print porcelain lines instead of the report.
    pub prefer_porcelain: bool,
}

impl CommandOutcome {
    fn text(exit_code: i32, report: String) -> Self {
        CommandOutcome {
            exit_code,
            report,
            porcelain: Vec::new(),
            prefer_porcelain: false,
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        CommandOutcome::text(EXIT_INPUT, format!("error: {msg}\n"))
    }

    /// What the binary writes to stdout.
    pub fn output(&self) -> String {
        if self.prefer_porcelain {
            let mut s = self.porcelain.join("\n");
            s.push('\n');
            s
        } else {
            self.report.clone()
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lcfib",
    version,
    about = "Exact thresholds and denominators for lc-trivial fibrations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Log canonical threshold of the fibre against a weighted germ.
    Lct {
        /// Branch equation in x and t; repeat for several branches.
        #[arg(long, required = true)]
        germ: Vec<String>,
        /// Coefficient of each branch, in the same order.
        #[arg(long, required = true)]
        coeff: Vec<String>,
        #[arg(long, conflicts_with_all = ["fast", "engine"])]
        cross_check: bool,
        /// Closed form only.
        #[arg(long, conflicts_with = "engine")]
        fast: bool,
        /// Resolution only.
        #[arg(long)]
        engine: bool,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        porcelain: bool,
    },
    /// Discriminant and denominators of a fibration file.
    Fibration {
        file: PathBuf,
        #[arg(long)]
        porcelain: bool,
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Reduced bound, closed formula and reference table.
    Bounds {
        #[arg(long, default_value_t = 10)]
        r_max: u64,
        #[arg(long)]
        porcelain: bool,
        /// Compare the closed formula with the reference table.
        #[arg(long)]
        audit: bool,
    },
    /// Generate, and optionally verify, an explicit family.
    Construct {
        #[command(subcommand)]
        family: Family,
    },
    /// Run the built-in verification suite.
    VerifyPaper {
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        porcelain: bool,
    },
}

#[derive(Debug, Args)]
struct ConstructFlags {
    #[arg(long)]
    verify: bool,
    /// Print the generated fibration file.
    #[arg(long)]
    emit_spec: bool,
    #[arg(long)]
    porcelain: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Tangency family t - x^l - x^d.
    Cex {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        flags: ConstructFlags,
    },
    /// Family with minimal multiplier 2r^2 - r.
    Sharp {
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        flags: ConstructFlags,
    },
    /// Several tangency points on one component.
    Multipoint {
        #[arg(long)]
        d: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        ls: Vec<u64>,
        /// Base points; defaults to 1, 2, ..., N.
        #[arg(long, value_delimiter = ',')]
        os: Option<Vec<String>>,
        #[command(flatten)]
        flags: ConstructFlags,
    },
    /// Tangency orders 2^h q^s over primes q < 2r.
    Mainteo3 {
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        flags: ConstructFlags,
    },
}

/// Parse `argv` (without the program name) and run the subcommand.
pub fn run_command<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args =
        std::iter::once(std::ffi::OsString::from("lcfib")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return CommandOutcome::text(code, e.render().to_string());
        }
    };
    match cli.command {
        Command::Lct {
            germ,
            coeff,
            cross_check: _,
            fast,
            engine,
            max_steps,
            porcelain,
        } => {
            let mode = if fast {
                LctMode::ClosedForm
            } else if engine {
                LctMode::Engine
            } else {
                LctMode::CrossCheck
            };
            run_lct(&germ, &coeff, mode, max_steps, porcelain)
        }
        Command::Fibration {
            file,
            porcelain,
            fast,
            jobs,
            max_steps,
        } => run_fibration(&file, porcelain, fast, jobs, max_steps),
        Command::Bounds {
            r_max,
            porcelain,
            audit,
        } => run_bounds(r_max, porcelain, audit),
        Command::Construct { family } => run_construct(family),
        Command::VerifyPaper { jobs, porcelain } => run_verify_paper(jobs, porcelain),
    }
}

fn run_lct(
    germs: &[String],
    coeffs: &[String],
    mode: LctMode,
    max_steps: Option<usize>,
    porcelain: bool,
) -> CommandOutcome {
    if germs.len() != coeffs.len() {
        return CommandOutcome::input_error("give one --coeff per --germ");
    }
    let mut branches = Vec::new();
    for (g, c) in germs.iter().zip(coeffs) {
        let equation = match parse_poly(g) {
            Ok(e) => e,
            Err(e) => return CommandOutcome::input_error(format!("germ {g:?}: {e}")),
        };
        let coefficient: Rational = match c.parse() {
            Ok(c) => c,
            Err(e) => return CommandOutcome::input_error(e),
        };
        branches.push(Branch {
            equation,
            coefficient,
        });
    }
    let result = WeightedGerm::new(branches).and_then(|g| lct_at_fiber_point(&g, mode, max_steps));
    let res = match result {
        Ok(r) => r,
        Err(e) if e.is_engine_limitation() => {
            return CommandOutcome::text(EXIT_ENGINE, format!("engine limitation: {e}\n"))
        }
        Err(e @ crate::blowup::BlowupError::CrossCheckMismatch { .. }) => {
            return CommandOutcome::text(EXIT_VERIFICATION, format!("error: {e}\n"))
        }
        Err(e) => return CommandOutcome::input_error(e),
    };

    let mut lines = vec![format!("gamma={}", res.gamma)];
    if let Some(c) = &res.closed_form {
        lines.push(format!("gamma_closed_form={c}"));
    }
    if let Some(chain) = &res.chain {
        lines.push(format!("chain_length={}", chain.len()));
        for rec in &chain.records {
            lines.push(format!(
                "chain.{}={},{},{}",
                rec.index, rec.e, rec.a, rec.alpha
            ));
        }
    }
    let mut report = format!("gamma={}\n", res.gamma);
    if let Some(chain) = &res.chain {
        for rec in &chain.records {
            writeln!(report, "  {rec}").unwrap();
        }
    }
    CommandOutcome {
        exit_code: EXIT_OK,
        report,
        porcelain: lines,
        prefer_porcelain: porcelain,
    }
}

fn fibration_exit(e: &FibrationError) -> i32 {
    if e.is_engine_limitation() {
        EXIT_ENGINE
    } else {
        EXIT_INPUT
    }
}

fn run_fibration(
    file: &PathBuf,
    porcelain: bool,
    fast: bool,
    jobs: usize,
    max_steps: Option<usize>,
) -> CommandOutcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return CommandOutcome::input_error(format!("{}: {e}", file.display())),
    };
    let spec = match parse_fibration_file(&text) {
        Ok(s) => s,
        Err(e) => return CommandOutcome::input_error(e),
    };
    let mode = if fast {
        LctMode::ClosedForm
    } else {
        LctMode::CrossCheck
    };
    let opts = DiscriminantOptions {
        mode,
        max_steps,
        jobs: jobs.max(1),
    };
    let report = match discriminant(&spec, &opts) {
        Ok(r) => denominator_report(r),
        Err(e) => {
            let code = fibration_exit(&e);
            return CommandOutcome::text(code, format!("error: {e}\n"));
        }
    };
    CommandOutcome {
        exit_code: if report.verified() {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        },
        report: report.render(),
        porcelain: report.porcelain(),
        prefer_porcelain: porcelain,
    }
}

fn run_bounds(r_max: u64, porcelain: bool, audit: bool) -> CommandOutcome {
    if audit {
        return bounds_audit(porcelain);
    }
    if r_max == 0 {
        return CommandOutcome::input_error("--r-max must be positive");
    }
    let mut report = String::from("r  reduced_bound  formula_N  table_N  match\n");
    let mut lines = Vec::new();
    for r in 1..=r_max {
        match BoundTableRow::for_r(r) {
            Ok(row) => {
                writeln!(
                    report,
                    "{}  {}  {}  {}  {}",
                    r, row.reduced_bound, row.formula_n, row.table_n, row.match_flag
                )
                .unwrap();
                lines.extend(row.porcelain());
            }
            Err(_) => {
                let reduced = reduced_bound(r).expect("r positive");
                let formula = formula_n(r).expect("r positive");
                writeln!(report, "{r}  {reduced}  {formula}  -  -").unwrap();
                lines.push(format!("bounds.r{r}.reduced_bound={reduced}"));
                lines.push(format!("bounds.r{r}.formula_N={formula}"));
            }
        }
    }
    CommandOutcome {
        exit_code: EXIT_OK,
        report,
        porcelain: lines,
        prefer_porcelain: porcelain,
    }
}

fn bounds_audit(porcelain: bool) -> CommandOutcome {
    let rows = compare_bounds_table();
    let mut report = String::new();
    let mut lines = Vec::new();
    for row in &rows {
        let i_divisible = (&row.todorov_i % &row.table_n) == num_bigint::BigUint::from(0u32);
        writeln!(
            report,
            "r={}: table N = {}, reduced bound = {} ({}), r * reduced bound = {}, I divisible by N: {}",
            row.r, row.table_n, row.reduced_bound, row.match_flag, row.formula_n, i_divisible
        )
        .unwrap();
        lines.extend(row.porcelain());
        lines.push(format!("bounds.r{}.I_divisible_by_N={i_divisible}", row.r));
    }
    let matches = rows
        .iter()
        .filter(|r| r.match_flag == MatchFlag::MatchesReduced)
        .count();
    let halves: Vec<String> = rows
        .iter()
        .filter(|r| r.match_flag == MatchFlag::OffByFactor2)
        .map(|r| r.r.to_string())
        .collect();
    let formula_matches = rows.iter().filter(|r| r.formula_n == r.table_n).count();
    writeln!(
        report,
        "reduced bound equals the table in {matches} of {} rows; table is half of it for r = {}",
        rows.len(),
        halves.join(", ")
    )
    .unwrap();
    writeln!(
        report,
        "r * reduced bound equals the table in {formula_matches} rows"
    )
    .unwrap();
    lines.push(format!("audit.matches_reduced={matches}"));
    lines.push(format!("audit.off_by_factor_2={}", halves.join(",")));
    lines.push(format!("audit.formula_matches={formula_matches}"));
    CommandOutcome {
        exit_code: EXIT_OK,
        report,
        porcelain: lines,
        prefer_porcelain: porcelain,
    }
}

fn construction_failure(e: ConstructionError) -> CommandOutcome {
    let code = if e.is_engine_limitation() {
        EXIT_ENGINE
    } else if matches!(e, ConstructionError::ProfileFailure { .. }) {
        EXIT_VERIFICATION
    } else {
        EXIT_INPUT
    };
    CommandOutcome::text(code, format!("error: {e}\n"))
}

fn describe_recipe(recipe: &Recipe) -> (String, Vec<String>) {
    let mut report = format!("recipe {}\n", recipe.kind);
    let mut lines = vec![format!("recipe.kind={}", recipe.kind)];
    for f in &recipe.flags {
        writeln!(report, "  flag: {f}").unwrap();
    }
    for p in &recipe.predictions {
        writeln!(
            report,
            "  {}: contact {}, predicted gamma {}",
            p.label, p.contact, p.gamma
        )
        .unwrap();
        lines.push(format!("recipe.point.{}.contact={}", p.label, p.contact));
        lines.push(format!("recipe.point.{}.predicted={}", p.label, p.gamma));
    }
    writeln!(
        report,
        "  predicted V = {}, check {}",
        recipe.predicted_v, recipe.expectation
    )
    .unwrap();
    lines.push(format!("recipe.predicted_V={}", recipe.predicted_v));
    (report, lines)
}

fn run_construct(family: Family) -> CommandOutcome {
    let (recipe, flags) = match family {
        Family::Cex { l, d, flags } => (cex_family(l, d), flags),
        Family::Sharp { r, flags } => (sharp_family(r), flags),
        Family::Multipoint { d, ls, os, flags } => {
            let os = match os
                .map(|v| {
                    v.iter()
                        .map(|s| s.parse::<Rational>())
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()
            {
                Ok(os) => os,
                Err(e) => return CommandOutcome::input_error(e),
            };
            (multipoint_recipe(d, &ls, os), flags)
        }
        Family::Mainteo3 { r, flags } => (mainteo3_recipe(r), flags),
    };
    let recipe = match recipe {
        Ok(r) => r,
        Err(e) => return construction_failure(e),
    };

    let mut report = String::new();
    if flags.emit_spec {
        report.push_str(&recipe.generated.to_file_text());
    }
    let mut exit_code = EXIT_OK;
    let lines = if flags.verify {
        match verify_recipe(&recipe, flags.jobs) {
            Ok(rep) => {
                if flags.emit_spec {
                    writeln!(report, "# {}", rep.verdict_line()).unwrap();
                } else {
                    report.push_str(&rep.render());
                }
                if !rep.passed() {
                    exit_code = EXIT_VERIFICATION;
                }
                rep.porcelain()
            }
            Err(e) => return construction_failure(e),
        }
    } else {
        let (text, lines) = describe_recipe(&recipe);
        if !flags.emit_spec {
            report.push_str(&text);
        }
        lines
    };
    CommandOutcome {
        exit_code,
        report,
        porcelain: lines,
        prefer_porcelain: flags.porcelain && !flags.emit_spec,
    }
}

fn run_verify_paper(jobs: usize, porcelain: bool) -> CommandOutcome {
    let results = run_suite(jobs.max(1));
    let mut report = String::new();
    let mut lines = Vec::new();
    for c in &results {
        writeln!(report, "{c}").unwrap();
        lines.push(format!(
            "criterion.{}={}",
            c.number,
            if c.passed { "pass" } else { "fail" }
        ));
    }
    let all = results.iter().all(|c| c.passed);
    writeln!(
        report,
        "{} of {} criteria pass",
        results.iter().filter(|c| c.passed).count(),
        results.len()
    )
    .unwrap();
    lines.push(format!("verified={all}"));
    CommandOutcome {
        exit_code: if all { EXIT_OK } else { EXIT_VERIFICATION },
        report,
        porcelain: lines,
        prefer_porcelain: porcelain,
    }
}
