//! CSV and JSON writers for result rows.

use std::io::Write;

use serde::Serialize;

use crate::runner::Row;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const CSV_HEADER: [&str; 7] = [
    "task",
    "labels",
    "beta",
    "value",
    "oracle_value",
    "abs_err",
    "ms",
];

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Serialize)]
struct JsonRow<'a> {
    task: &'a str,
    labels: &'a str,
    beta: f64,
    value: f64,
    oracle_value: Option<f64>,
    abs_err: Option<f64>,
    ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

fn io_error(e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: "output".into(),
        source: std::io::Error::other(e.to_string()),
    }
}

/// Writes `rows`; in CSV mode notes go to `notes` instead of the table.
pub fn write_rows<W: Write, N: Write>(
    rows: &[Row],
    format: Format,
    out: W,
    mut notes: N,
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER).map_err(io_error)?;
            for r in rows {
                w.write_record([
                    r.task.clone(),
                    r.labels.clone(),
                    num(r.beta),
                    num(r.value),
                    opt(r.oracle_value),
                    opt(r.abs_err),
                    opt(r.ms),
                ])
                .map_err(io_error)?;
                if let Some(note) = &r.note {
                    writeln!(notes, "{} [{}] beta={}: {note}", r.task, r.labels, r.beta)
                        .map_err(io_error)?;
                }
            }
            w.flush().map_err(io_error)
        }
        Format::Json => {
            let json: Vec<JsonRow> = rows
                .iter()
                .map(|r| JsonRow {
                    task: &r.task,
                    labels: &r.labels,
                    beta: r.beta,
                    value: r.value,
                    oracle_value: r.oracle_value,
                    abs_err: r.abs_err,
                    ms: r.ms,
                    note: r.note.as_deref(),
                })
                .collect();
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &json).map_err(io_error)?;
            writeln!(out).map_err(io_error)
        }
    }
}
