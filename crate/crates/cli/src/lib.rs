//! Command line front end: argument parsing, subcommands and run reports.

pub mod args;
pub mod commands;
pub mod report;
pub mod table;

use std::fmt;

use anyhow::Result;

pub use args::{Cli, Command};
use report::RunReport;

/// An invalid invocation; reported with exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn dispatch(command: &Command) -> Result<commands::Outcome> {
    match command {
        Command::Extract(a) => commands::extract(a),
        Command::Split(a) => commands::split(a),
        Command::Stress(a) => commands::stress(a),
        Command::TrainBaseline(a) => commands::train_baseline(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Validate(a) => commands::validate(a),
        Command::Stats(a) => commands::stats(a),
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Extract(_) => "extract",
        Command::Split(_) => "split",
        Command::Stress(_) => "stress",
        Command::TrainBaseline(_) => "train-baseline",
        Command::Evaluate(_) => "evaluate",
        Command::Validate(_) => "validate",
        Command::Stats(_) => "stats",
    }
}

/// Where a failed run leaves its report, if the command names one.
fn failure_report_path(command: &Command) -> Option<std::path::PathBuf> {
    match command {
        Command::Extract(a) => a.report.clone(),
        Command::Split(a) => Some(a.report.clone().unwrap_or_else(|| a.out_dir.join("split_report.json"))),
        Command::Stress(a) => Some(a.report.clone().unwrap_or_else(|| a.out_dir.join("stress_report.json"))),
        Command::TrainBaseline(a) => a.report.clone(),
        Command::Evaluate(a) => a.report.clone(),
        Command::Validate(a) => a.report.clone(),
        Command::Stats(a) => a.report.clone(),
    }
}

/// Runs one invocation and writes its run report.
pub fn run(cli: &Cli) -> Result<()> {
    if cli.threads == Some(0) {
        return Err(ConfigError("--threads must be at least 1".into()).into());
    }
    let result = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()?
            .install(|| dispatch(&cli.command)),
        None => dispatch(&cli.command),
    };
    match result {
        Ok(outcome) => {
            nlimine_core::io::write_json(&outcome.report_path, &outcome.report)?;
            Ok(())
        }
        Err(e) => {
            if !e.is::<ConfigError>() {
                if let Some(path) = failure_report_path(&cli.command) {
                    let mut report = RunReport::new(name(&cli.command), None);
                    report.status = "error".into();
                    report.error = Some(format!("{e:#}"));
                    if let Err(w) = nlimine_core::io::write_json(&path, &report) {
                        log::warn!("could not write run report: {w}");
                    }
                }
            }
            Err(e)
        }
    }
}

/// Exit status for an error returned by [`run`].
pub fn exit_code(e: &anyhow::Error) -> u8 {
    if e.is::<ConfigError>() {
        2
    } else {
        1
    }
}
