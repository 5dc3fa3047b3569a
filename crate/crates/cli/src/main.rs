//! `desitter`: canal paths in de Sitter space and conformal invariants of
//! closed space curves.
//!
//! Exit codes: 0 success, 1 internal error, 2 precondition or parse error,
//! 3 verification failure.

mod commands;
mod config;
mod error;
mod generators;
mod report;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match cli.command {
        Command::Schema => {
            print!("{}", report::SCHEMA);
            return ExitCode::SUCCESS;
        }
        Command::AnalyzeCurve(o) => ("analyze-curve", o),
        Command::AnalyzeCanal(o) => ("analyze-canal", o),
        Command::Mesh(o) => ("mesh", o),
        Command::VerifySuite(o) => ("verify-suite", o),
        Command::Sweep(o) => ("sweep", o),
    };
    let out_json = opts.out_json.clone();
    let result = opts.resolve().and_then(|opts| match name {
        "analyze-curve" => commands::curve::run(&opts),
        "analyze-canal" => commands::canal::run(&opts),
        "mesh" => commands::mesh::run(&opts),
        "verify-suite" => commands::suite::run(&opts),
        _ => commands::sweep::run(&opts),
    });
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            let block = report::to_pretty(&e.block(name));
            if let Some(path) = &out_json {
                let _ = std::fs::write(path, &block);
            }
            report::print_stdout(&block);
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code)
        }
    }
}
