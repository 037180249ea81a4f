use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub problem: String,
    pub options: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub section: String,
    pub subject: String,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    /// sha256 of the problem file.
    pub problem_digest: String,
    pub problem: Value,
    pub results: Vec<Value>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

/// Serializes a report. Keys are sorted and all exact values are strings.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    let value = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&value).expect("values serialize");
            out.push(b'\n');
            out
        }
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", &value, &mut lines);
            let mut out = lines.join("\n").into_bytes();
            out.push(b'\n');
            out
        }
    }
}

fn flatten(path: &str, value: &Value, out: &mut Vec<String>) {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match value {
        Value::Object(m) if !m.is_empty() => {
            for (k, v) in m {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), v, out);
            }
        }
        Value::String(s) => out.push(format!("{path}: {s}")),
        other => out.push(format!("{path}: {other}")),
    }
}
