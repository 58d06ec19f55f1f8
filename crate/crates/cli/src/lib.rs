//! Library half of the `flagpoly` command: model specs, the memo cache,
//! command bodies and the verification suites.

pub mod commands;
pub mod models;
pub mod verify;

use std::fmt;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A command failure, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input (exit 2).
    Input(anyhow::Error),
    /// The input is not a simple polytope of its declared dimension (exit 3).
    Structural(anyhow::Error),
    /// A search ran out of time (exit 4).
    Budget(String),
    /// A checked claim did not hold (exit 5).
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Structural(_) => 3,
            Failure::Budget(_) => 4,
            Failure::Verification(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "error: {e:#}"),
            Failure::Structural(e) => write!(f, "structural violation: {e:#}"),
            Failure::Budget(s) => write!(f, "budget exhausted: {s}"),
            Failure::Verification(s) => write!(f, "verification failed: {s}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<flagpoly::Error>() {
            Some(flagpoly::Error::SimplicityViolation { .. }) => Failure::Structural(e),
            Some(flagpoly::Error::BudgetExhausted { nodes }) => Failure::Budget(format!("{nodes} search nodes explored")),
            _ => Failure::Input(e),
        }
    }
}

impl From<flagpoly::Error> for Failure {
    fn from(e: flagpoly::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

/// Indented JSON with a trailing newline. Arrays of scalars stay on one
/// line; `serde_json` maps keep keys sorted.
pub fn render(value: &serde_json::Value) -> String {
    let mut s = String::new();
    write_value(value, 0, &mut s);
    s.push('\n');
    s
}

fn write_value(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| " ".repeat(n);
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            let parts: Vec<String> = items.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                write_value(v, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 2), Value::String(k.clone())));
                write_value(v, indent + 2, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_round_trips() {
        let v = serde_json::json!({"b": [[0, 1], [1, 2]], "a": {"x": "q\"", "y": []}, "c": [], "d": {}});
        let text = render(&v);
        assert_eq!(serde_json::from_str::<serde_json::Value>(&text).unwrap(), v);
        assert!(text.contains("[0, 1]"));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
    }
}
