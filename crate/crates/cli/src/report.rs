use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// One verified statement. `anchor` names the identity being checked.
#[derive(Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub verdict: bool,
    pub witness: Value,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: &'static str, verdict: bool, witness: impl Serialize) -> Self {
        Check {
            id: id.into(),
            anchor,
            verdict,
            witness: serde_json::to_value(witness).unwrap_or(Value::Null),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub group: String,
    pub suite: String,
    pub checks: Vec<Check>,
    /// Seconds; only filled with `--timing` so that reports stay
    /// reproducible byte for byte.
    pub wall_time: Option<f64>,
}

impl RunReport {
    pub fn new(group: &str, suite: &str, checks: Vec<Check>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            group: group.to_string(),
            suite: suite.to_string(),
            checks,
            wall_time: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict)
    }

    pub fn print(&self) {
        for c in &self.checks {
            println!("{:<4} {:<28} {}", if c.verdict { "ok" } else { "FAIL" }, c.id, c.anchor);
        }
        let failed = self.checks.iter().filter(|c| !c.verdict).count();
        println!("{}: {} checks, {} failed", self.group, self.checks.len(), failed);
    }
}
