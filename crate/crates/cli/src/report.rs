use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// One evaluated inequality. `pass` holds exactly when
/// `margin ≥ −tol · max(|lhs|, |rhs|)`; rows whose hypotheses fail are
/// reported with `asserted = false` and never fail a run.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictRow {
    pub instance: String,
    pub theorem: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub asserted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
}

impl VerdictRow {
    /// `lhs ≤ rhs`.
    pub fn bound(instance: &str, theorem: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::with_margin(instance, theorem, lhs, rhs, rhs - lhs, tol)
    }

    pub fn with_margin(instance: &str, theorem: &str, lhs: f64, rhs: f64, margin: f64, tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        Self {
            instance: instance.to_string(),
            theorem: theorem.to_string(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            margin,
            pass: margin >= -tol * scale,
            asserted: true,
            runtime_ms: None,
            extra: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn extra(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }

    pub fn asserted(mut self, asserted: bool) -> Self {
        self.asserted = asserted;
        self
    }

    pub fn failed(&self) -> bool {
        self.asserted && !self.pass
    }
}

/// A CSV view: header and string cells.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

fn params_cell(params: &BTreeMap<String, Value>) -> String {
    params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn verdict_table(rows: &[VerdictRow]) -> Table {
    let timing = rows.iter().any(|r| r.runtime_ms.is_some());
    let mut header = vec!["instance", "theorem", "params", "lhs", "rhs", "margin", "pass", "asserted"];
    if timing {
        header.push("runtime_ms");
    }
    let mut t = Table::new(&header);
    for r in rows {
        let mut cells = vec![
            r.instance.clone(),
            r.theorem.clone(),
            params_cell(&r.params),
            num(r.lhs),
            num(r.rhs),
            num(r.margin),
            r.pass.to_string(),
            r.asserted.to_string(),
        ];
        if timing {
            cells.push(r.runtime_ms.map(num).unwrap_or_default());
        }
        t.push(cells);
    }
    t
}

/// Everything a subcommand produces, emitted at once after all work is done.
pub struct Report {
    pub command: &'static str,
    pub rows: Vec<VerdictRow>,
    pub data: Value,
    pub table: Option<Table>,
    pub default_format: Format,
}

impl Report {
    pub fn verdicts(command: &'static str, rows: Vec<VerdictRow>) -> Self {
        Self {
            command,
            rows,
            data: Value::Null,
            table: None,
            default_format: Format::Json,
        }
    }

    pub fn data(command: &'static str, data: Value, table: Table, default_format: Format) -> Self {
        Self {
            command,
            rows: Vec::new(),
            data,
            table: Some(table),
            default_format,
        }
    }

    pub fn failed(&self) -> bool {
        self.rows.iter().any(VerdictRow::failed)
    }

    pub fn write(&self, format: Option<Format>, out: &mut dyn Write) -> Result<(), CliError> {
        match format.unwrap_or(self.default_format) {
            Format::Json => {
                let mut doc = json!({ "schema": SCHEMA, "command": self.command });
                if !self.rows.is_empty() || self.data.is_null() {
                    doc["rows"] = serde_json::to_value(&self.rows).map_err(CliError::io)?;
                    doc["pass"] = Value::Bool(!self.failed());
                }
                if !self.data.is_null() {
                    doc["data"] = self.data.clone();
                }
                serde_json::to_writer_pretty(&mut *out, &doc).map_err(CliError::io)?;
                writeln!(out).map_err(CliError::io)?;
            }
            Format::Csv => {
                let table = self.table.clone().unwrap_or_else(|| verdict_table(&self.rows));
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&table.header).map_err(CliError::io)?;
                for row in &table.rows {
                    w.write_record(row).map_err(CliError::io)?;
                }
                w.flush().map_err(CliError::io)?;
            }
        }
        Ok(())
    }
}
