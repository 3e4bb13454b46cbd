//! Command-line surface of the hrcone toolkit: argument grammar, presets and report rendering.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use args::Cli;
use clap::Parser;
use config::Resolved;
use report::Report;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hrcone::Error),
}

impl CliError {
    /// 2 for malformed or out-of-domain input, 1 when a computation could not be completed.
    pub fn exit_code(&self) -> i32 {
        use hrcone::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                E::ConvergenceFailure(_)
                | E::QuadratureFailure(_)
                | E::EigensolveFailure(_)
                | E::NegativeRadicand(_)
                | E::ZeroDenominator => 1,
                _ => 2,
            },
        }
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr, report: None };
        }
    };
    let fail = |e: CliError| Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n"), report: None };
    let rc = match Resolved::from_cli(&cli) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let start = Instant::now();
    let (name, out) = match commands::execute(&cli.command, &rc) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let (report, table) = Report::new(&name, out, start.elapsed().as_millis() as u64);
    let code = if report.all_pass() { 0 } else { 1 };
    Outcome { code, stdout: report.render(&table, rc.format), stderr: String::new(), report: Some(report) }
}
