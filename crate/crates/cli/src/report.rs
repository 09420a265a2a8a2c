//! Report rows and their CSV and JSON encodings.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::args::Format;

/// One output line. Columns that do not apply to a subcommand stay empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub model: String,
    pub family: String,
    pub n: Option<usize>,
    pub d: usize,
    pub k: usize,
    pub t: Option<f64>,
    pub b: Option<f64>,
    pub value: f64,
    pub stderr: f64,
    pub method: String,
    /// Formula value a simulated row is compared with.
    pub reference: Option<f64>,
    pub z_score: Option<f64>,
    /// Strict increase over the previous row of the same table.
    pub strict_increase: Option<bool>,
    pub wall_time_ms: Option<f64>,
    pub t_functional: Option<f64>,
}

#[derive(Debug)]
pub enum ReportError {
    Csv(csv::Error),
    Json(serde_json::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for ReportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReportError::Csv(e) => write!(f, "csv: {e}"),
            ReportError::Json(e) => write!(f, "json: {e}"),
            ReportError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ReportError {}

pub fn write_report<W: Write>(rows: &[ReportRow], format: Format, mut out: W) -> Result<(), ReportError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(ReportError::Csv)?;
            }
            if rows.is_empty() {
                w.write_record(HEADER).map_err(ReportError::Csv)?;
            }
            w.flush().map_err(ReportError::Io)
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(ReportError::Json)?;
            writeln!(out).map_err(ReportError::Io)
        }
    }
}

pub fn read_report<R: Read>(format: Format, input: R) -> Result<Vec<ReportRow>, ReportError> {
    match format {
        Format::Csv => csv::Reader::from_reader(input)
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(ReportError::Csv),
        Format::Json => serde_json::from_reader(input).map_err(ReportError::Json),
    }
}

/// Column order of the CSV encoding.
pub const HEADER: [&str; 15] = [
    "model",
    "family",
    "n",
    "d",
    "k",
    "t",
    "b",
    "value",
    "stderr",
    "method",
    "reference",
    "z_score",
    "strict_increase",
    "wall_time_ms",
    "t_functional",
];
