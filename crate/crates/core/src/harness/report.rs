use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One experiment cell. Columns that do not apply to a method are empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub tau: Option<usize>,
    pub method: String,
    pub coverage: Option<f64>,
    pub avg_width: Option<f64>,
    pub oracle_width: Option<f64>,
    pub wall_time_s: f64,
    pub comm_rounds: Option<u64>,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    /// Same report with every `wall_time_s` zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| ReportRow {
                wall_time_s: 0.0,
                ..r.clone()
            })
            .collect();
        Self { rows }
    }

    pub fn row(&self, k: usize, tau: Option<usize>, method: &str) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.k == k && r.tau == tau && r.method == method)
    }
}

pub const CSV_COLUMNS: [&str; 11] = [
    "d",
    "k",
    "n",
    "tau",
    "method",
    "coverage",
    "avg_width",
    "oracle_width",
    "wall_time_s",
    "comm_rounds",
    "failures",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::invalid(format!("unknown report format {other:?}"))),
        }
    }
}

pub fn write_report<W: Write>(report: &ExperimentReport, format: ReportFormat, out: W) -> Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for row in &report.rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_report(report, format, file)
}

pub fn read_report(path: impl AsRef<Path>, format: ReportFormat) -> Result<ExperimentReport> {
    let file = BufReader::new(File::open(path)?);
    match format {
        ReportFormat::Csv => {
            let mut r = csv::Reader::from_reader(file);
            let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
            if header != CSV_COLUMNS {
                return Err(Error::invalid(format!("unexpected CSV header {header:?}")));
            }
            let rows = r.deserialize().collect::<std::result::Result<Vec<ReportRow>, _>>()?;
            Ok(ExperimentReport { rows })
        }
        ReportFormat::Json => Ok(serde_json::from_reader(file)?),
    }
}
