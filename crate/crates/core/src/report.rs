use std::fmt::Display;

use serde::Serialize;

/// One compared quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub ok: bool,
    /// Set when the check confirms that a printed value differs from the derived one;
    /// `ok` then means the discrepancy was reproduced.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub misprint: bool,
}

/// A list of checks produced by a verification routine. Failures are data, not errors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report { name: name.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, lhs: impl Display, rhs: impl Display, ok: bool) {
        self.checks.push(Check { label: label.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), ok, misprint: false });
    }

    /// Records that a printed value differs from the derived one. `lhs` is derived, `rhs` printed.
    pub fn misprint(&mut self, label: impl Into<String>, derived: impl Display, printed: impl Display, differs: bool) {
        let label = format!("misprint: {}", label.into());
        self.checks.push(Check { label, lhs: derived.to_string(), rhs: printed.to_string(), ok: differs, misprint: true });
    }

    pub fn misprints(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.misprint).collect()
    }

    /// Records `lhs == rhs`.
    pub fn check_eq<T: Display + PartialEq>(&mut self, label: impl Into<String>, lhs: T, rhs: T) {
        let ok = lhs == rhs;
        self.push(label, lhs, rhs, ok);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}
