//! Command-line front end: reads a registry model or a JSON description,
//! runs one subcommand, and reports one JSON object per line with the
//! fields `subcommand`, `inputs`, `result`, `assumptions` and `seconds`.
//!
//! Exit codes: 0 computed, 2 refuted or inadmissible, 3 budget exhausted,
//! 4 input error, 1 internal failure.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

pub use args::Cli;
pub use commands::{run, Outcome, Status};
pub use error::CliError;

/// One output line.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subcommand: String,
    pub inputs: Value,
    pub result: Value,
    pub assumptions: Vec<String>,
    pub seconds: f64,
}

/// The recorded inputs: the argument vector, which reproduces the run,
/// and its parsed form.
pub fn inputs(cli: &Cli, argv: &[String]) -> Value {
    let parsed = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    let parsed = match parsed {
        Value::Object(m) if m.len() == 1 => m.into_iter().next().map(|(_, v)| v).unwrap_or(Value::Null),
        other => other,
    };
    json!({ "argv": argv, "seed": cli.seed, "args": parsed })
}

/// Runs the parsed command and returns its report and exit code. CSV
/// output, when requested, is written here.
pub fn execute(cli: &Cli, argv: &[String]) -> (Report, i32) {
    let start = Instant::now();
    let outcome = (|| {
        if cli.csv.is_some() && !cli.command.has_series() {
            return Err(CliError::input(format!("--csv applies to entropy-bounds, pressure and ssm-profile, not {}", cli.command.name())));
        }
        let out = run(cli)?;
        if let (Some(path), Some(text)) = (&cli.csv, &out.csv) {
            std::fs::write(path, text)?;
        }
        Ok(out)
    })();
    let (result, assumptions, code) = match outcome {
        Ok(o) => (o.result, o.assumptions, o.status.exit_code()),
        Err(e) => (json!({ "error": e.to_string() }), Vec::new(), e.exit_code()),
    };
    let report = Report {
        subcommand: cli.command.name().to_string(),
        inputs: inputs(cli, argv),
        result,
        assumptions,
        seconds: start.elapsed().as_secs_f64(),
    };
    (report, code)
}

/// Human-readable rendering of a report.
pub fn table(report: &Report) -> String {
    let mut out = format!("subcommand   {}\n", report.subcommand);
    if let Value::Object(m) = &report.result {
        for (k, v) in m {
            out.push_str(&format!("{k:<12} {v}\n"));
        }
    }
    for a in &report.assumptions {
        out.push_str(&format!("assumes      {a}\n"));
    }
    out.push_str(&format!("seconds      {:.3}\n", report.seconds));
    out
}
