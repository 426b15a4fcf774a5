use std::process::ExitCode;

use peirce_lie_cli::report::EXIT_INPUT;

fn main() -> ExitCode {
    if let Err(msg) = peirce_lie_cli::configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let outcome = match peirce_lie_cli::run(std::env::args_os()) {
        Ok(o) => o,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    if let Err(e) = peirce_lie_cli::emit(&outcome) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    if let Some(err) = outcome.document["report"]["error"].as_str() {
        eprintln!("error: {err}");
    }
    ExitCode::from(outcome.exit_status as u8)
}
