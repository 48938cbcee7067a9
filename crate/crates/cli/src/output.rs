use std::io::Write;
use std::path::Path;

use amdkit::stats::GENERATOR_ID;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Wraps a report with the tool version, command, seed, generator and the
/// parameters that produced it.
pub fn envelope(command: &str, seed: Option<u64>, params: Value, pass: bool, report: impl Serialize) -> Value {
    json!({
        "tool": "amdkit",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "generator": GENERATOR_ID,
        "params": params,
        "pass": pass,
        "report": report,
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(scalar_text).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, inner, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

/// One header row and one row per record; nested objects become dotted
/// columns. Records are the `rows` array when present, else the report.
pub fn to_csv(doc: &Value) -> Result<String, String> {
    let records: Vec<Value> = match doc.get("rows") {
        Some(Value::Array(rows)) => rows.clone(),
        _ => {
            let mut top = Map::new();
            for key in ["tool", "version", "command", "seed", "generator", "pass"] {
                if let Some(v) = doc.get(key) {
                    top.insert(key.to_string(), v.clone());
                }
            }
            if let Some(Value::Object(report)) = doc.get("report") {
                for (k, v) in report {
                    top.insert(k.clone(), v.clone());
                }
            }
            vec![Value::Object(top)]
        }
    };
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Option<Vec<String>> = None;
    for record in &records {
        let mut cells = Vec::new();
        flatten("", record, &mut cells);
        if header.is_none() {
            let names: Vec<String> = cells.iter().map(|(k, _)| k.clone()).collect();
            writer.write_record(&names).map_err(|e| e.to_string())?;
            header = Some(names);
        }
        writer
            .write_record(cells.iter().map(|(_, v)| v))
            .map_err(|e| e.to_string())?;
    }
    let bytes = writer.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

pub fn emit(doc: &Value, format: Format, out: Option<&Path>) -> Result<(), String> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(doc).map_err(|e| e.to_string())? + "\n",
        Format::Csv => to_csv(doc)?,
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}
