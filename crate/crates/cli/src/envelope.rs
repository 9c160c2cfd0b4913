//! Result envelopes and the three output formats.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: String,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub config: Value,
    pub config_hash: String,
    pub verdict: Verdict,
    pub payload: Value,
}

impl Envelope {
    pub fn new(command: &str, config: Value, verdict: Verdict, payload: Value) -> Self {
        let config_hash = config_hash(command, &config);
        Envelope {
            schema_version: SCHEMA_VERSION.to_string(),
            tool: "klim".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            config_hash,
            verdict,
            payload,
        }
    }
}

/// Hash of `(schema version, command, canonical config)`; the cache key.
pub fn config_hash(command: &str, config: &Value) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(SCHEMA_VERSION.as_bytes());
    hasher.update([0]);
    hasher.update(command.as_bytes());
    hasher.update([0]);
    hasher.update(serde_json::to_string(config).expect("config serializes").as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Renders the envelope in the chosen format. All formats are functions of
/// the envelope alone, so identical configs give byte-identical output.
pub fn render(envelope: &Envelope, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out =
                serde_json::to_string_pretty(envelope).expect("envelope serializes");
            out.push('\n');
            out
        }
        Format::Table => render_table(envelope),
        Format::Csv => render_csv(envelope),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn render_table(envelope: &Envelope) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "klim {} | command: {} | verdict: {}\n",
        envelope.tool_version,
        envelope.command,
        verdict_str(envelope.verdict)
    ));
    out.push_str(&format!("config: {}\n", compact(&envelope.config)));
    out.push_str(&format!("config hash: {}\n", envelope.config_hash));
    table_value(&mut out, &envelope.payload, 0, None);
    out
}

fn compact(value: &Value) -> String {
    serde_json::to_string(value).expect("value serializes")
}

/// Renders scalars inline, objects as indented key blocks, and arrays of
/// uniform objects as aligned column tables.
fn table_value(out: &mut String, value: &Value, indent: usize, key: Option<&str>) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            for (k, v) in map {
                table_value(out, v, indent + usize::from(key.is_some()), Some(k));
            }
        }
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            let rows: Vec<&serde_json::Map<String, Value>> =
                items.iter().filter_map(Value::as_object).collect();
            let mut columns: Vec<String> = Vec::new();
            for row in &rows {
                for k in row.keys() {
                    if !columns.contains(k) {
                        columns.push(k.clone());
                    }
                }
            }
            let cell = |row: &serde_json::Map<String, Value>, col: &str| -> String {
                row.get(col).map(compact).unwrap_or_default()
            };
            let widths: Vec<usize> = columns
                .iter()
                .map(|c| {
                    rows.iter()
                        .map(|r| cell(r, c).len())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let inner = "  ".repeat(indent + 1);
            let header: Vec<String> = columns
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            out.push_str(&format!("{inner}{}\n", header.join("  ")));
            for row in rows {
                let line: Vec<String> = columns
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{:<w$}", cell(row, c)))
                    .collect();
                out.push_str(&format!("{inner}{}\n", line.join("  ").trim_end()));
            }
        }
        other => {
            let rendered = match other {
                Value::String(s) => s.clone(),
                v => compact(v),
            };
            match key {
                Some(k) => out.push_str(&format!("{pad}{k}: {rendered}\n")),
                None => out.push_str(&format!("{pad}{rendered}\n")),
            }
        }
    }
}

fn render_csv(envelope: &Envelope) -> String {
    let mut rows = vec![
        ("schema_version".to_string(), envelope.schema_version.clone()),
        ("command".to_string(), envelope.command.clone()),
        ("verdict".to_string(), verdict_str(envelope.verdict).to_string()),
        ("config".to_string(), compact(&envelope.config)),
        ("config_hash".to_string(), envelope.config_hash.clone()),
    ];
    flatten_csv(&envelope.payload, "payload", &mut rows);
    let mut out = String::from("key,value\n");
    for (key, value) in rows {
        out.push_str(&format!("{},{}\n", csv_escape(&key), csv_escape(&value)));
    }
    out
}

fn flatten_csv(value: &Value, path: &str, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_csv(v, &format!("{path}.{k}"), rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_csv(v, &format!("{path}[{i}]"), rows);
            }
        }
        Value::String(s) => rows.push((path.to_string(), s.clone())),
        other => rows.push((path.to_string(), compact(other))),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
