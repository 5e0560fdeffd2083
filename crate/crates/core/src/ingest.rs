//! Parsing of event-timestamp files and streams, and the stable text
//! documents the tools emit.
//!
//! Three input formats are supported: plain lines (one decimal per line,
//! `#` comments and blank lines skipped), a CSV column addressed by header
//! name or zero-based index, and JSON lines with a numeric field. Errors
//! carry 1-based line numbers of the source.
//!
//! The default sort policy rejects unsorted input: the clustering pass is
//! linear only because the input arrives ordered, and silently sorting would
//! mask upstream bugs. An explicit opt-in sorts at the usual `O(N log N)`
//! cost and records a warning.

use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster::ClusteringResult;
use crate::series::EventSeries;

/// How to pull timestamps out of the source bytes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    PlainLines,
    CsvColumn(ColumnSelector),
    /// JSON object per line; the string names the numeric field.
    JsonLines(String),
}

/// CSV column addressed by header name or zero-based index. An all-digit
/// selector is read as an index; index addressing expects a headerless file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

/// Default field name for JSON-lines input.
pub const DEFAULT_JSON_FIELD: &str = "t";

impl FromStr for InputFormat {
    type Err = String;

    /// `plain`, `csv:<column>`, `jsonl` or `jsonl:<field>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "plain" {
            return Ok(InputFormat::PlainLines);
        }
        if s == "jsonl" {
            return Ok(InputFormat::JsonLines(DEFAULT_JSON_FIELD.to_string()));
        }
        if let Some(field) = s.strip_prefix("jsonl:") {
            if field.is_empty() {
                return Err("jsonl field name must be non-empty".into());
            }
            return Ok(InputFormat::JsonLines(field.to_string()));
        }
        if let Some(col) = s.strip_prefix("csv:") {
            if col.is_empty() {
                return Err("csv column selector must be non-empty".into());
            }
            let selector = match col.parse::<usize>() {
                Ok(index) => ColumnSelector::Index(index),
                Err(_) => ColumnSelector::Name(col.to_string()),
            };
            return Ok(InputFormat::CsvColumn(selector));
        }
        Err(format!(
            "unknown format {s:?}; expected plain, csv:<column> or jsonl[:<field>]"
        ))
    }
}

/// What to do when parsed timestamps are not non-decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortPolicy {
    /// Fail with the line of the first inversion.
    #[default]
    RejectUnsorted,
    /// Sort ascending and record a warning.
    SortWithWarning,
}

/// Emitted when [`SortPolicy::SortWithWarning`] had to reorder the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SortWarning {
    /// Source line of the first out-of-order value.
    pub first_inversion_line: u64,
}

/// A parsed series plus any warning the policy produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEvents {
    pub series: EventSeries,
    pub sort_warning: Option<SortWarning>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("line {line}: timestamp out of order")]
    OutOfOrder { line: u64 },
    #[error("line {line}: non-finite timestamp")]
    NonFinite { line: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads timestamps from `source` in the given format and applies the sort
/// policy.
pub fn parse_events<R: Read>(
    source: R,
    format: &InputFormat,
    sort_policy: SortPolicy,
) -> Result<ParsedEvents, IngestError> {
    let values = match format {
        InputFormat::PlainLines => parse_plain_lines(source)?,
        InputFormat::CsvColumn(selector) => parse_csv(source, selector)?,
        InputFormat::JsonLines(field) => parse_json_lines(source, field)?,
    };

    let inversion = values
        .windows(2)
        .position(|w| w[1].1 < w[0].1)
        .map(|i| values[i + 1].0);

    let mut sort_warning = None;
    let mut events: Vec<f64> = values.iter().map(|&(_, v)| v).collect();
    if let Some(line) = inversion {
        match sort_policy {
            SortPolicy::RejectUnsorted => return Err(IngestError::OutOfOrder { line }),
            SortPolicy::SortWithWarning => {
                events.sort_unstable_by(f64::total_cmp);
                sort_warning = Some(SortWarning { first_inversion_line: line });
            }
        }
    }

    let series = EventSeries::new(events).expect("values validated finite and ordered");
    Ok(ParsedEvents { series, sort_warning })
}

fn parse_plain_lines<R: Read>(source: R) -> Result<Vec<(u64, f64)>, IngestError> {
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(source).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        values.push((line_no, parse_value(text, line_no)?));
    }
    Ok(values)
}

fn parse_csv<R: Read>(source: R, selector: &ColumnSelector) -> Result<Vec<(u64, f64)>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(matches!(selector, ColumnSelector::Name(_)))
        .flexible(true)
        .from_reader(source);

    let index = match selector {
        ColumnSelector::Index(i) => *i,
        ColumnSelector::Name(name) => {
            let headers = reader.headers().map_err(csv_error)?;
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| IngestError::Parse {
                    line: 1,
                    reason: format!("no column named {name:?} in header"),
                })?
        }
    };

    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line_no = record.position().map_or(0, |p| p.line());
        let field = record.get(index).ok_or_else(|| IngestError::Parse {
            line: line_no,
            reason: format!("row has {} fields, column {index} missing", record.len()),
        })?;
        values.push((line_no, parse_value(field.trim(), line_no)?));
    }
    Ok(values)
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line());
    IngestError::Parse { line, reason: err.to_string() }
}

fn parse_json_lines<R: Read>(source: R, field: &str) -> Result<Vec<(u64, f64)>, IngestError> {
    let mut values = Vec::new();
    for (idx, line) in BufReader::new(source).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let object: serde_json::Value =
            serde_json::from_str(text).map_err(|e| IngestError::Parse {
                line: line_no,
                reason: format!("invalid JSON: {e}"),
            })?;
        let value = object.get(field).ok_or_else(|| IngestError::Parse {
            line: line_no,
            reason: format!("missing field {field:?}"),
        })?;
        let number = value.as_f64().ok_or_else(|| IngestError::Parse {
            line: line_no,
            reason: format!("field {field:?} is not a number"),
        })?;
        if !number.is_finite() {
            return Err(IngestError::NonFinite { line: line_no });
        }
        values.push((line_no, number));
    }
    Ok(values)
}

fn parse_value(text: &str, line: u64) -> Result<f64, IngestError> {
    let value = f64::from_str(text).map_err(|_| IngestError::Parse {
        line,
        reason: format!("not a number: {text:?}"),
    })?;
    if !value.is_finite() {
        return Err(IngestError::NonFinite { line });
    }
    Ok(value)
}

/// Stable JSON shape of a clustering result (format version 1): threshold,
/// counts, clusters as `[lo, hi]` pairs and isolated timestamps, in series
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub delta_t: f64,
    pub cluster_count: usize,
    pub isolated_count: usize,
    pub clusters: Vec<[f64; 2]>,
    pub isolated: Vec<f64>,
}

impl From<&ClusteringResult> for ResultDocument {
    fn from(result: &ClusteringResult) -> Self {
        ResultDocument {
            delta_t: result.delta_t,
            cluster_count: result.cluster_count(),
            isolated_count: result.isolated_count(),
            clusters: result.clusters.iter().map(|c| [c.lo, c.hi]).collect(),
            isolated: result.isolated.clone(),
        }
    }
}

/// Writes the pretty-printed [`ResultDocument`] for `result`, followed by a
/// newline.
pub fn write_result<W: Write>(result: &ClusteringResult, mut sink: W) -> Result<(), IngestError> {
    let document = ResultDocument::from(result);
    serde_json::to_writer_pretty(&mut sink, &document)
        .map_err(|e| IngestError::Io(std::io::Error::other(e)))?;
    writeln!(sink)?;
    Ok(())
}

/// Writes one timestamp per line using the shortest decimal representation
/// that round-trips, so serialize-then-parse is bit-identical.
pub fn write_series_plain<W: Write>(series: &EventSeries, mut sink: W) -> Result<(), IngestError> {
    for t in series.events() {
        writeln!(sink, "{t}")?;
    }
    Ok(())
}
