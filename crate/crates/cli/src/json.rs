//! Compact pretty-printing: arrays without objects stay on one line when
//! short, everything else is indented. Numbers use serde_json's shortest
//! round-trip formatting.

use serde_json::Value;

const INLINE_WIDTH: usize = 96;

pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out
}

/// Single-line rendering, or `None` if the value contains an object.
pub(crate) fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Object(m) if !m.is_empty() => None,
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            Some(format!("[{}]", parts?.join(", ")))
        }
        other => Some(other.to_string()),
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    if let Some(s) = inline(v).filter(|s| s.len() + indent <= INLINE_WIDTH) {
        out.push_str(&s);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match v {
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
        // long strings
        other => out.push_str(&other.to_string()),
    }
}
