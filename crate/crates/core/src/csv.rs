//! Table serialization: outcome tables and joint tables as CSV with fixed
//! headers, event logs as line-delimited JSON records.

use crate::error::CsvError;
use crate::reorder::{JointRow, JointTable};
use crate::run::TrialEventLog;
use crate::table::{Octuple, OutcomeTable, TrialRow};
use crate::value::{OutcomeValue, Setting};
use std::fmt::Write as _;

pub const TABLE_HEADER: &str = "trial,A1,B1,A2,Bp2,Ap3,B3,Ap4,Bp4,S";
pub const JOINT_HEADER: &str = "trial,A,B,Bp,Ap";

const TABLE_COLUMNS: [&str; 10] = [
    "trial", "A1", "B1", "A2", "Bp2", "Ap3", "B3", "Ap4", "Bp4", "S",
];

/// Render an outcome table. Dichotomic values print as integers −1/1,
/// bounded values as shortest round-trip decimals.
pub fn table_to_csv(table: &OutcomeTable) -> String {
    let mut out = String::with_capacity(16 + table.len() * 24);
    out.push_str(TABLE_HEADER);
    out.push('\n');
    for row in table.rows() {
        let _ = write!(out, "{}", row.trial_index);
        for v in row.outcomes.values() {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{}", row.setting);
    }
    out
}

/// Parse an outcome table, reporting the row and column of the first defect.
/// Rows are numbered from 1 (the header is row 1).
pub fn table_from_csv(text: &str) -> Result<OutcomeTable, CsvError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CsvError::new(1, "trial", "empty input"))?;
    let names: Vec<&str> = header.split(',').collect();
    if names.len() != TABLE_COLUMNS.len() {
        return Err(CsvError::new(
            1,
            format!("{}", names.len()),
            format!("expected {} columns, found {}", TABLE_COLUMNS.len(), names.len()),
        ));
    }
    for (expected, found) in TABLE_COLUMNS.iter().zip(&names) {
        if expected != found {
            return Err(CsvError::new(
                1,
                *found,
                format!("expected column \"{expected}\""),
            ));
        }
    }

    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row_number = i + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != TABLE_COLUMNS.len() {
            return Err(CsvError::new(
                row_number,
                format!("{}", fields.len()),
                format!("expected {} fields, found {}", TABLE_COLUMNS.len(), fields.len()),
            ));
        }

        let trial_index: usize = fields[0]
            .parse()
            .map_err(|_| CsvError::new(row_number, "trial", "not a non-negative integer"))?;

        let mut values = [OutcomeValue::PLUS; 8];
        for (slot, value) in values.iter_mut().enumerate() {
            let column = TABLE_COLUMNS[slot + 1];
            let raw: f64 = fields[slot + 1]
                .parse()
                .map_err(|_| CsvError::new(row_number, column, "not a number"))?;
            *value = OutcomeValue::new(raw)
                .map_err(|e| CsvError::new(row_number, column, e.to_string()))?;
        }

        let s_raw: u8 = fields[9]
            .parse()
            .map_err(|_| CsvError::new(row_number, "S", "not an integer"))?;
        let setting = Setting::from_index(s_raw)
            .map_err(|e| CsvError::new(row_number, "S", e.to_string()))?;

        rows.push(TrialRow {
            outcomes: Octuple {
                a1: values[0],
                b1: values[1],
                a2: values[2],
                bp2: values[3],
                ap3: values[4],
                b3: values[5],
                ap4: values[6],
                bp4: values[7],
            },
            setting,
            trial_index,
        });
    }

    OutcomeTable::new(rows).map_err(|e| CsvError::new(0, "trial", e.to_string()))
}

pub fn joint_to_csv(joint: &JointTable) -> String {
    let mut out = String::with_capacity(16 + joint.len() * 12);
    out.push_str(JOINT_HEADER);
    out.push('\n');
    for (i, row) in joint.rows().iter().enumerate() {
        let _ = writeln!(out, "{i},{},{},{},{}", row.a, row.b, row.bp, row.ap);
    }
    out
}

pub fn joint_from_csv(text: &str) -> Result<JointTable, CsvError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CsvError::new(1, "trial", "empty input"))?;
    if header != JOINT_HEADER {
        return Err(CsvError::new(1, header, format!("expected \"{JOINT_HEADER}\"")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row_number = i + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CsvError::new(row_number, "trial", "expected 5 fields"));
        }
        let names = ["A", "B", "Bp", "Ap"];
        let mut values = [OutcomeValue::PLUS; 4];
        for (slot, value) in values.iter_mut().enumerate() {
            let raw: f64 = fields[slot + 1]
                .parse()
                .map_err(|_| CsvError::new(row_number, names[slot], "not a number"))?;
            *value = OutcomeValue::new(raw)
                .map_err(|e| CsvError::new(row_number, names[slot], e.to_string()))?;
        }
        rows.push(JointRow {
            a: values[0],
            b: values[1],
            bp: values[2],
            ap: values[3],
        });
    }
    Ok(JointTable::new(rows))
}

/// Event logs as line-delimited JSON records with fields (trial, seq, kind).
pub fn event_logs_to_jsonl(logs: &[TrialEventLog]) -> String {
    let mut out = String::new();
    for log in logs {
        for event in &log.events {
            let record = serde_json::json!({
                "trial": log.trial_index,
                "seq": event.sequence_number,
                "kind": event.kind,
            });
            let _ = writeln!(out, "{record}");
        }
    }
    out
}
