//! Run reports: a human-readable table on stdout and an optional
//! machine-readable JSON document with stable field order. The machine
//! report carries no timing information so identical inputs produce
//! byte-identical output.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObjectSummary {
    pub name: String,
    pub generators: usize,
    pub relations: usize,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct RunReport {
    pub command: String,
    pub objects: Vec<ObjectSummary>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage_log: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Value>,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        RunReport {
            command,
            ..Default::default()
        }
    }

    pub fn check(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: &str, detail: impl Into<String>) {
        self.check(name, Status::Pass, detail);
    }

    pub fn check_bool(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.check(
            name,
            if ok { Status::Pass } else { Status::Fail },
            detail,
        );
    }

    /// Exit code contract: 0 iff every check passes and none is
    /// inconclusive (unless allowed); 1 otherwise.
    pub fn exit_code(&self, allow_flags: bool) -> i32 {
        let failed = self.checks.iter().any(|c| c.status == Status::Fail);
        let inconclusive = self
            .checks
            .iter()
            .any(|c| c.status == Status::Inconclusive);
        if failed || (inconclusive && !allow_flags) {
            1
        } else {
            0
        }
    }

    pub fn render_human(&self, elapsed_ms: u128) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {}\n", self.command));
        for o in &self.objects {
            out.push_str(&format!(
                "object {}: {} generators, {} relations\n",
                o.name, o.generators, o.relations
            ));
        }
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            if c.detail.is_empty() {
                out.push_str(&format!("check {}: {}\n", c.name, status));
            } else {
                out.push_str(&format!("check {}: {} ({})\n", c.name, status, c.detail));
            }
        }
        if let Some(h) = &self.homology {
            out.push_str("homology (degree: ker im H):\n");
            if let Value::Object(map) = h {
                for (deg, entry) in map {
                    let flagged = entry["flagged"].as_bool().unwrap_or(false);
                    if flagged {
                        out.push_str(&format!(
                            "  {}: {} {} ?\n",
                            deg, entry["ker"], entry["im"]
                        ));
                    } else {
                        out.push_str(&format!(
                            "  {}: {} {} {}\n",
                            deg, entry["ker"], entry["im"], entry["h"]
                        ));
                    }
                }
            }
        }
        if let Some(c) = &self.comparison {
            out.push_str(&format!("quotient comparison: {}\n", c));
        }
        if let Some(s) = &self.stage_log {
            out.push_str(&format!("stage log: {}\n", s));
        }
        out.push_str(&format!("elapsed: {} ms\n", elapsed_ms));
        out
    }

    pub fn to_machine_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
