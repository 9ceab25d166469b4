//! Table serialization: CSV with 9-significant-digit floats and an integer
//! flag column, or JSON with a columns/rows layout. UTF-8, LF newlines,
//! deterministic byte-for-byte.

use std::io::Write as _;

use anyhow::{Context, Result};

use crate::config::OutputFormat;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    /// Numeric value, printed in scientific notation with 9 significant
    /// digits. Non-finite values print as `inf`/`NaN` in CSV and `null` in
    /// JSON.
    Num(f64),
    /// Verbatim label (state names and the like).
    Text(String),
    /// Diagnostic bitmask, printed as a plain integer.
    Flags(u32),
}

/// One output row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row(pub Vec<Field>);

/// A rectangular output table with one header per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

fn csv_field(field: &Field) -> String {
    match field {
        Field::Num(v) => format!("{v:.8e}"),
        Field::Text(s) => s.clone(),
        Field::Flags(f) => f.to_string(),
    }
}

fn json_field(field: &Field) -> serde_json::Value {
    match field {
        Field::Num(v) => serde_json::Number::from_f64(*v)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null),
        Field::Text(s) => serde_json::Value::String(s.clone()),
        Field::Flags(f) => serde_json::Value::Number((*f).into()),
    }
}

impl Table {
    /// Render the table in the requested format, trailing newline included.
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let fields: Vec<String> = row.0.iter().map(csv_field).collect();
                    out.push_str(&fields.join(","));
                    out.push('\n');
                }
                Ok(out)
            }
            OutputFormat::Json => {
                let value = serde_json::json!({
                    "columns": self.columns,
                    "rows": self.rows.iter()
                        .map(|r| r.0.iter().map(json_field).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                });
                let mut text =
                    serde_json::to_string_pretty(&value).context("serializing JSON output")?;
                text.push('\n');
                Ok(text)
            }
        }
    }
}

/// Write the rendered table to the given path, or stdout when `None`.
pub fn write(table: &Table, format: OutputFormat, out_path: Option<&str>) -> Result<()> {
    let text = table.render(format)?;
    match out_path {
        Some(path) => std::fs::write(path, text.as_bytes())
            .with_context(|| format!("writing output file {path}")),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).context("writing to stdout")
        }
    }
}
