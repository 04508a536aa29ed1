//! `rtf-lab`: runs the verification suites and single orbital-integral
//! evaluations, printing a table or a JSON report.
//!
//! Exit status: 0 when every case passes, 2 on an exact mismatch, 1 on a
//! configuration or engine error. `RTF_LAB_THREADS` caps the worker pool.

mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::{run, EXIT_ERROR};

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("RTF_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("RTF_LAB_THREADS = {v:?} is not a thread count"))?;
    if n == 0 {
        return Err("RTF_LAB_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR);
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    let text = outcome.render(cli.common.format);
    match &cli.common.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_ERROR);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.exit_code())
}
