use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Only a symbolic verdict was available.
    Symbolic,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass | Outcome::Symbolic => 0,
            Outcome::Fail => 1,
        }
    }
}

/// One command's result. Keys inside `parameters` and `payload` objects
/// are emitted in sorted order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub outcome: Outcome,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Map<String, Value>, outcome: Outcome, payload: Value) -> Self {
        RunReport {
            command: command.to_string(),
            parameters,
            seed: None,
            outcome,
            payload,
            wall_time_ms: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// Plain text rendering of the JSON report.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let outcome = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Symbolic => "SYMBOLIC",
        };
        let _ = writeln!(out, "{outcome}  {}", self.command);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  {k} = {}", scalar(v));
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "  seed = {seed}");
        }
        if let Some(checks) = self.payload.get("checks").and_then(Value::as_array) {
            for c in checks {
                let mark = if c["passed"].as_bool() == Some(true) {
                    "ok  "
                } else {
                    "FAIL"
                };
                let _ = writeln!(out, "  [{mark}] {}", c["name"].as_str().unwrap_or("?"));
            }
        } else {
            let pretty = serde_json::to_string_pretty(&self.payload).expect("values serialize");
            for line in pretty.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(out, "  wall time = {ms} ms");
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn params<const N: usize>(pairs: [(&str, Value); N]) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_shape() {
        let r = RunReport::new(
            "snf",
            params([("matrix", json!("[[2]]"))]),
            Outcome::Pass,
            json!({"rank": 1}),
        );
        assert_eq!(
            r.to_json(),
            r#"{"command":"snf","parameters":{"matrix":"[[2]]"},"seed":null,"outcome":"pass","payload":{"rank":1}}"#
        );
        assert!(r.render().starts_with("PASS  snf\n  matrix = [[2]]\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Outcome::Symbolic.exit_code(), 0);
        assert_eq!(Outcome::from_bool(false).exit_code(), 1);
    }
}
