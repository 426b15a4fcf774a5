//! The `peirce-lie` command-line tool: argument parsing, run reports and
//! the shipped fixture set.

pub mod commands;
pub mod fixtures;
pub mod report;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;
use peirce_lie::json::to_canonical_string;
use serde_json::Value;

use crate::commands::Cli;
use crate::report::{RunReport, EXIT_INPUT};

/// What a run produced: the report document and where it should go.
pub struct RunOutcome {
    pub document: Value,
    pub exit_status: i32,
    pub json_out: Option<std::path::PathBuf>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns `Err` with clap's rendered message when parsing fails.
pub fn run<I, T>(args: I) -> Result<RunOutcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args)?;
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = RunReport::new(echo);
    let start = Instant::now();
    commands::execute(&cli.command, &mut report);
    Ok(RunOutcome {
        document: report.document(start.elapsed()),
        exit_status: report.exit_status,
        json_out: cli.json_out,
    })
}

/// Configures the global thread pool from `PEIRCE_LIE_THREADS`.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("PEIRCE_LIE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("PEIRCE_LIE_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// Renders the outcome: the document goes to `--json-out` or stdout.
pub fn emit(outcome: &RunOutcome) -> std::io::Result<()> {
    let text = to_canonical_string(&outcome.document);
    match &outcome.json_out {
        Some(path) => {
            std::fs::write(path, text)?;
            let status = match outcome.exit_status {
                0 => "pass",
                EXIT_INPUT => "input error",
                _ => "fail",
            };
            println!("{status} (exit {}), report written to {}", outcome.exit_status, path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}
