//! The structured run report.
//!
//! Exact values are strings: integers in decimal, rationals as
//! `{"num", "den", "approx"}` where `approx` is for display only.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "linext-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    /// SHA-256 of the poset file bytes; absent for `gen`.
    pub input_digest: Option<String>,
    pub workers: usize,
    /// Rows in the compressed ideal lattice of the input poset.
    pub rows: Option<usize>,
    /// Largest level table held by any pass of this run.
    pub peak_level_size: Option<usize>,
    pub results: Value,
    /// Omitted with `--no-timings`; the only field that varies between
    /// identical runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub passes: Vec<PassTiming>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassTiming {
    pub algebra: String,
    pub resumed_from: Option<usize>,
    pub levels: Vec<LevelTiming>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelTiming {
    pub level: usize,
    pub size: usize,
    pub seconds: f64,
}

impl RunReport {
    /// Everything except timings, for comparing runs.
    pub fn without_timings(&self) -> RunReport {
        RunReport {
            timings: None,
            ..self.clone()
        }
    }

    /// Plain-text rendering of the results.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(map) = &self.results {
            for (key, value) in map {
                render(&mut out, key, value, 0);
            }
        }
        if let Some(rows) = self.rows {
            out.push_str(&format!("rows: {rows}\n"));
        }
        if let Some(peak) = self.peak_level_size {
            out.push_str(&format!("peak level size: {peak}\n"));
        }
        out
    }
}

fn rational(v: &Value) -> Option<String> {
    let obj = v.as_object()?;
    let (num, den, approx) = (obj.get("num")?.as_str()?, obj.get("den")?.as_str()?, obj.get("approx")?.as_str()?);
    Some(if den == "1" {
        num.to_string()
    } else {
        format!("{num}/{den} (~{approx})")
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Null => Some("none".into()),
        _ => rational(v),
    }
}

fn render(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(value) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match value {
        Value::Array(items) if items.iter().all(|i| i.as_str().is_some_and(|s| !s.contains(' '))) => {
            let parts: Vec<&str> = items.iter().filter_map(|i| i.as_str()).collect();
            out.push_str(&format!("{pad}{key}: {}\n", parts.join(" ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                match item.as_str() {
                    Some(line) => out.push_str(&format!("{pad}  {line}\n")),
                    None => render(out, &(i + 1).to_string(), item, depth + 1),
                }
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render(out, k, v, depth + 1);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}
