use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let output = fair_election::cli::run_cli(std::env::args_os());
    print!("{}", output.stdout);
    eprint!("{}", output.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(output.status as u8)
}
