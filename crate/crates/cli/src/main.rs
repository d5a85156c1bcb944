//! `pairy`: command-line access to the moment toolkit.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numeric failure
//! (pole, no convergence), 4 failed check.

mod args;
mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pairy::Error;

use args::{Cli, Command, Format};

fn exit_code(e: &Error) -> u8 {
    if e.is_mismatch() {
        4
    } else if e.is_numeric() {
        3
    } else {
        2
    }
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::HalfPoint => Some("hint: run `pairy limit-half` for the moments at p = 1/2"),
        Error::CapExceeded { .. } => Some("hint: lower the size or order; the caps bound memory and run time"),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec = cli.precision();
    if !(32..=1 << 16).contains(&prec) {
        eprintln!("error: --precision must lie in 32..=65536 bits, got {prec}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Moments(a) => commands::moments(a, prec),
        Command::Alpha(a) => commands::alpha(a, prec),
        Command::FiniteN(a) => commands::finite_n(a, prec),
        Command::Sample(a) => commands::sample(a, prec, cli.threads),
        Command::TreeCheck(a) => commands::tree_check(a, prec),
        Command::Bounds(a) => commands::bounds(a, prec),
        Command::LimitHalf(a) => commands::limit_half(a, prec),
        Command::LogCase(a) => commands::log_case(a, prec),
        Command::Airy(a) => commands::airy(a, prec),
        Command::VerifyAll(a) => commands::verify_all(a, prec, cli.threads),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = hint(&e) {
                eprintln!("{h}");
            }
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => report.csv,
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if let Some(f) = report.failure {
        eprintln!("{f}");
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}
