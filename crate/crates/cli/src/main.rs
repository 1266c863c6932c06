use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = mfsing_cli::run(std::env::args_os());
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{out}");
    ExitCode::from(code as u8)
}
