//! Run reports. Both renderings are produced from one JSON tree, so they
//! carry the same data; only the layout differs.

use serde_json::{Map, Value};

use crate::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// argv without the program name.
    pub command: Vec<String>,
    pub config: Map<String, Value>,
    pub status: String,
    pub exit_code: i32,
    pub result: Value,
    pub notes: Vec<String>,
    /// Wall-clock milliseconds; only recorded with `--timing`.
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, config: Map<String, Value>) -> Self {
        Self {
            command,
            config,
            status: String::new(),
            exit_code: 0,
            result: Value::Null,
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool".into(), Value::from(format!("braidmono {}", env!("CARGO_PKG_VERSION"))));
        m.insert("command".into(), Value::from(self.command.clone()));
        m.insert("config".into(), Value::Object(self.config.clone()));
        m.insert("status".into(), Value::from(self.status.clone()));
        m.insert("exit_code".into(), Value::from(self.exit_code));
        if !self.notes.is_empty() {
            m.insert("notes".into(), Value::from(self.notes.clone()));
        }
        m.insert("result".into(), self.result.clone());
        if let Some(t) = self.timing_ms {
            m.insert("timing_ms".into(), Value::from(t));
        }
        Value::Object(m)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Machine => json::to_pretty(&self.to_value()) + "\n",
            OutputFormat::Text => render_text(&self.to_value()),
        }
    }
}

/// Indented `key: value` layout; matrices print one row per line.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => write_object(m, 0, &mut out),
        other => write_entry(None, other, 0, &mut out),
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => json::inline(other).unwrap_or_else(|| other.to_string()),
    }
}

fn is_matrix(v: &Value) -> bool {
    match v {
        Value::Array(rows) => {
            !rows.is_empty() && rows.iter().all(|r| matches!(r, Value::Array(_)) && json::inline(r).is_some())
        }
        _ => false,
    }
}

fn write_object(m: &Map<String, Value>, indent: usize, out: &mut String) {
    for (k, v) in m {
        write_entry(Some(k), v, indent, out);
    }
}

fn write_entry(key: Option<&str>, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let head = match key {
        Some(k) => format!("{pad}{k}:"),
        None => format!("{pad}-"),
    };
    let short = json::inline(v).filter(|s| (s.len() + head.len() < 100 && !is_matrix(v)) || s.len() < 40);
    match v {
        // list item: first field shares the dash line
        Value::Object(m) if !m.is_empty() && key.is_none() => {
            let mut body = String::new();
            write_object(m, indent + 2, &mut body);
            out.push_str(&head);
            out.push(' ');
            out.push_str(&body[indent + 2..]);
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str(&head);
            out.push('\n');
            write_object(m, indent + 2, out);
        }
        Value::Array(items) if short.is_none() => {
            out.push_str(&head);
            out.push('\n');
            if is_matrix(v) {
                for row in items {
                    out.push_str(&format!("{pad}  {}\n", scalar(row)));
                }
            } else {
                for item in items {
                    write_entry(None, item, indent + 2, out);
                }
            }
        }
        other => {
            out.push_str(&format!("{head} {}\n", scalar(other)));
        }
    }
}
