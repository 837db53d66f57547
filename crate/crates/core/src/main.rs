use std::process::ExitCode;

use lcfib::cli::{run_command, EXIT_ENGINE, EXIT_INPUT};

fn main() -> ExitCode {
    let outcome = run_command(std::env::args_os().skip(1));
    match outcome.exit_code {
        EXIT_INPUT | EXIT_ENGINE => eprint!("{}", outcome.output()),
        _ => print!("{}", outcome.output()),
    }
    ExitCode::from(outcome.exit_code as u8)
}
