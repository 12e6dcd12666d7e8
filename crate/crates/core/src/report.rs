//! Structured results for verification runs, serializable by downstream
//! consumers (the command-line front end renders them as JSON).

use std::collections::BTreeMap;

use serde::Serialize;

/// One named tolerance check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when the measured figure is at or below the tolerance.
    pub fn below(name: impl Into<String>, measured: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            pass: measured.is_finite() && measured <= tolerance,
            measured,
            tolerance,
        }
    }
}

/// Free-form result entry.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Numbers(Vec<f64>),
    Text(String),
}

/// Outcome of one command or verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            parameters: BTreeMap::new(),
            results: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn parameter(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn result(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.results.insert(key.into(), value);
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
