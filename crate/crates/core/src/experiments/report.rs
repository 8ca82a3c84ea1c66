use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use super::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};

/// CSV header row.
pub const CSV_HEADER: [&str; 7] = ["experiment", "params", "measured", "predicted", "tolerance", "pass", "seed"];

/// One line of a result table.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub experiment: ExperimentKind,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub measured: f64,
    /// NaN when there is no prediction.
    pub predicted: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Master seed of the run.
    pub seed: u64,
}

impl ReportRow {
    /// The pass flag as written: a NaN measurement never passes.
    pub fn passed(&self) -> bool {
        self.pass && !self.measured.is_nan()
    }
}

/// Rows plus experiment-specific raw data for the summary document.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
    pub details: Value,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(ReportRow::passed)
    }
}

/// Shortest round-trip decimal; NaN as `nan`, infinities as `inf`/`-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x}")
    }
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.experiment.name().to_string(),
            r.params.clone(),
            format_float(r.measured),
            format_float(r.predicted),
            format_float(r.tolerance),
            r.passed().to_string(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ReportRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// The summary document; `timestamp` (Unix seconds) is its only
/// non-deterministic field.
pub fn summary_json(report: &Report) -> Value {
    let failed = report.rows.iter().filter(|r| !r.passed()).count();
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    json!({
        "experiment": report.config.experiment.name(),
        "seed": report.config.seed,
        "rows": report.rows.len(),
        "failed": failed,
        "all_pass": failed == 0,
        "config": report.config,
        "details": report.details,
        "timestamp": timestamp,
    })
}

/// Paths written by [`emit_tables`].
#[derive(Clone, Debug, PartialEq)]
pub struct EmittedFiles {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

/// Writes `<experiment>.csv` and `<experiment>.summary.json` into `dir`.
pub fn emit_tables(report: &Report, dir: &Path) -> Result<EmittedFiles> {
    std::fs::create_dir_all(dir)?;
    let name = report.config.experiment.name();
    let csv = dir.join(format!("{name}.csv"));
    let summary = dir.join(format!("{name}.summary.json"));
    write_csv(&report.rows, std::io::BufWriter::new(std::fs::File::create(&csv)?))?;
    let text = serde_json::to_string_pretty(&summary_json(report)).map_err(|e| Error::Io(e.into()))?;
    std::fs::write(&summary, text + "\n")?;
    Ok(EmittedFiles { csv, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(measured: f64) -> ReportRow {
        ReportRow {
            experiment: ExperimentKind::Modulus,
            params: "mu=0.5;trial=0".into(),
            measured,
            predicted: 0.5,
            tolerance: 0.1,
            pass: true,
            seed: 3,
        }
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(csv_string(&[]).unwrap(), "experiment,params,measured,predicted,tolerance,pass,seed\n");
    }

    #[test]
    fn one_row_two_lines() {
        let s = csv_string(&[row(0.52)]).unwrap();
        assert_eq!(s.lines().count(), 2);
        assert_eq!(s.lines().nth(1).unwrap(), "modulus,mu=0.5;trial=0,0.52,0.5,0.1,true,3");
    }

    #[test]
    fn nan_is_flagged_fail() {
        let s = csv_string(&[row(f64::NAN)]).unwrap();
        assert!(s.ends_with("nan,0.5,0.1,false,3\n"));
    }
}
