//! Pass/fail reports shared by norm and surface validation.

use alloc::string::String;
use alloc::vec::Vec;

/// One named check with its worst offender.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Largest measured violation (0 when nothing was measured).
    pub worst: f64,
    pub detail: String,
}

/// Ordered list of checks; order is the order in which checks ran.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, worst: f64, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            worst,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Appends another report, prefixing its check names.
    pub fn extend_prefixed(&mut self, prefix: &str, other: ValidationReport) {
        for mut c in other.checks {
            let mut name = String::from(prefix);
            name.push_str(&c.name);
            c.name = name;
            self.checks.push(c);
        }
    }
}
