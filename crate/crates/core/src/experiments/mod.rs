//! Experiment configuration, orchestration and report files.
//!
//! A run reads an [`ExperimentConfig`] (TOML), computes a [`Report`] and
//! writes `<experiment>.csv` with the columns
//! `experiment,params,measured,predicted,tolerance,pass,seed` plus
//! `<experiment>.summary.json` holding the config, the raw series and a
//! timestamp. The CSV is a pure function of the config and seed.

mod config;
mod report;
mod run;

pub use config::{ExperimentConfig, ExperimentKind, LawSpec, Output, RuleSpec, Sweep, Tolerance};
pub use report::{
    csv_string, emit_tables, format_float, summary_json, write_csv, EmittedFiles, Report, ReportRow, CSV_HEADER,
};
pub use run::run;

use crate::error::Error;

/// Process exit status: 0 all rows pass, 1 some row fails or an unexpected
/// error, 2 invalid configuration, 3 mode budget exceeded.
pub fn exit_code(outcome: &Result<Report, Error>) -> i32 {
    match outcome {
        Ok(r) if r.all_pass() => 0,
        Ok(_) => 1,
        Err(Error::Config(_) | Error::Domain(_)) => 2,
        Err(Error::BudgetExceeded { .. }) => 3,
        Err(_) => 1,
    }
}
