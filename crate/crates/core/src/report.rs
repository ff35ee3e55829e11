use std::fmt;

use serde::Serialize;

/// A counterexample found by a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub detail: String,
}

impl Witness {
    pub fn new(label: impl Into<String>, detail: impl Into<String>) -> Self {
        Witness {
            label: label.into(),
            detail: detail.into(),
        }
    }
}

/// Outcome of a property check. Witnesses are recorded in the deterministic
/// order in which cases are enumerated; the first one is the reported witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            checked: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(&mut self, w: Witness) {
        self.passed = false;
        self.witnesses.push(w);
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    /// Folds per-case outcomes (already in enumeration order) into the report.
    pub fn absorb(&mut self, outcomes: Vec<Option<Witness>>, keep: usize) {
        self.checked += outcomes.len();
        for w in outcomes.into_iter().flatten() {
            self.passed = false;
            if self.witnesses.len() < keep {
                self.witnesses.push(w);
            }
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{}: {} ({} cases)", self.name, status, self.checked)?;
        for w in &self.witnesses {
            write!(f, "\n  witness {}: {}", w.label, w.detail)?;
        }
        Ok(())
    }
}
