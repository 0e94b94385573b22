use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = ford_cli::run(std::env::args_os());
    // Broken pipes and similar are not worth a second error message.
    let _ = std::io::stdout().write_all(&result.stdout);
    let _ = std::io::stderr().write_all(&result.stderr);
    ExitCode::from(result.exit_code as u8)
}
