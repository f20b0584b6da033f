//! JSON and text rendering of command results.

use num_bigint::BigInt;
use serde_json::Value;

/// A JSON number holding an arbitrary-size integer.
pub fn big(v: &BigInt) -> Value {
    Value::Number(
        v.to_string()
            .parse()
            .expect("integer literal is a JSON number"),
    )
}

pub fn bigs(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big).collect())
}

/// Object keys come out sorted because `serde_json::Map` is ordered by key.
pub fn json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

/// One `key: value` line per field; arrays put one element per indented line.
pub fn text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Array(items) => {
                        out.push_str(&format!("{k}:\n"));
                        for item in items {
                            out.push_str(&format!("  {}\n", scalar(item)));
                        }
                    }
                    _ => out.push_str(&format!("{k}: {}\n", scalar(v))),
                }
            }
        }
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
