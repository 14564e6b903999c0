//! Check reports: one named pass/fail/unsupported entry per verified fact,
//! rendered as text and as JSON carrying identical information.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Witness, certificate, or counterexample text; empty when silent.
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub checks: Vec<Check>,
    /// Wall-clock time; excluded from determinism comparisons.
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            version: crate::VERSION.to_string(),
            checks: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Pass, detail);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Fail, detail);
    }

    pub fn unsupported(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Unsupported, detail);
    }

    /// Record a check from a `Result`: `Ok` detail on success, the error
    /// text on failure.
    pub fn record<T: std::fmt::Display>(
        &mut self,
        name: impl Into<String>,
        outcome: crate::error::Result<T>,
    ) {
        match outcome {
            Ok(detail) => self.pass(name, detail.to_string()),
            Err(crate::error::Error::Unsupported(msg)) => self.unsupported(name, msg),
            Err(e) => self.fail(name, e.to_string()),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::Unsupported) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} (gca-lab {})\n", self.command, self.version));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Unsupported => "UNSUPPORTED",
            };
            if c.detail.is_empty() {
                out.push_str(&format!("{tag} {}\n", c.name));
            } else {
                out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
            }
        }
        out.push_str(&format!(
            "{} checks, {} passed ({} ms)\n",
            self.checks.len(),
            self.checks
                .iter()
                .filter(|c| c.status == Status::Pass)
                .count(),
            self.elapsed_ms
        ));
        out
    }
}
