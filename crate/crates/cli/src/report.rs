//! JSON report envelope, toleranced values and file output.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Options;
use crate::error::CliError;

pub const SCHEMA_ID: &str = "desitter-report/1";
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

/// A computed value with the tolerance it was computed or tested at.
///
/// `pass` is present when the value was checked: `value ≤ tol` for
/// residuals, `value ≥ bound − tol` for lower bounds.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Measure {
    pub value: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Measure {
    pub fn info(value: f64, tol: f64) -> Self {
        Self {
            value,
            tol,
            bound: None,
            pass: None,
        }
    }

    pub fn at_most(value: f64, tol: f64) -> Self {
        Self {
            value,
            tol,
            bound: None,
            pass: Some(value <= tol),
        }
    }

    pub fn at_least(value: f64, bound: f64, tol: f64) -> Self {
        Self {
            value,
            tol,
            bound: Some(bound),
            pass: Some(value >= bound - tol),
        }
    }

    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
}

pub struct Outcome {
    pub status: Status,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self.status {
            Status::Ok => 0,
            Status::VerificationFailed => crate::error::EXIT_VERIFICATION,
        }
    }
}

pub fn envelope(command: &str, status: Status, opts: &Options, result: Value) -> Value {
    json!({
        "schema": SCHEMA_ID,
        "command": command,
        "status": status,
        "options": opts,
        "result": result,
    })
}

pub fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn to_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

/// Prints the report and writes it to `--out-json` when given.
pub fn emit(report: &Value, opts: &Options) -> Result<(), CliError> {
    let text = to_pretty(report);
    if let Some(path) = &opts.out_json {
        write_file(path, &text)?;
    }
    print_stdout(&text);
    Ok(())
}

/// Prints a line to stdout, ignoring a closed pipe.
pub fn print_stdout(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// Writes serializable rows as CSV with a header line.
pub fn write_csv<T: Serialize>(path: &PathBuf, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::internal(format!("{}: {e}", path.display())))?;
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::internal(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}
