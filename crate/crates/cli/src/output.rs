//! Table serialization. CSV carries the metadata as leading `# key = value`
//! lines; JSON puts it in a `metadata` object ahead of the rows.

use std::io::{self, Write};

use loopsense::scan::{Table, Value};
use serde_json::{Map, Number, Value as Json};

use crate::config::Format;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Float(x) => format_float(*x),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
        Value::Missing => String::new(),
    }
}

fn cell_json(v: &Value) -> Json {
    match v {
        Value::Float(x) => Number::from_f64(*x).map_or_else(|| Json::String(format_float(*x)), Json::Number),
        Value::Bool(b) => Json::Bool(*b),
        Value::Text(s) => Json::String(s.clone()),
        Value::Missing => Json::Null,
    }
}

pub fn write_csv<W: Write>(table: &Table, mut out: W) -> io::Result<()> {
    for (k, v) in &table.metadata {
        writeln!(out, "# {k} = {v}")?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(cell_text))?;
    }
    w.flush()
}

pub fn write_json<W: Write>(table: &Table, mut out: W) -> io::Result<()> {
    let metadata: Map<String, Json> = table
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), Json::String(v.clone())))
        .collect();
    let rows: Vec<Json> = table
        .rows
        .iter()
        .map(|row| {
            Json::Object(
                table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), cell_json(v)))
                    .collect(),
            )
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("metadata".into(), Json::Object(metadata));
    doc.insert(
        "columns".into(),
        Json::Array(table.columns.iter().cloned().map(Json::String).collect()),
    );
    doc.insert("rows".into(), Json::Array(rows));
    serde_json::to_writer_pretty(&mut out, &Json::Object(doc))?;
    writeln!(out)
}

pub fn emit_table<W: Write>(table: &Table, format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Json => write_json(table, out),
    }
}
