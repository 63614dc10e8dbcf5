//! Pass/fail reports produced by the verification pipelines.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), ..Default::default() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into(), residual: None });
    }

    /// Records `residual <= tol` as a check.
    pub fn check_residual(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed: residual.is_finite() && residual <= tol,
            detail: format!("tolerance {tol:e}"),
            residual: Some(residual),
        });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.warnings.extend(other.warnings);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.checks.iter().filter_map(|c| c.residual).reduce(f64::max)
    }

    /// Human-readable summary block.
    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        let mut s = format!("suite {}: {} checks, {} failed", self.suite, self.checks.len(), failed);
        if let Some(r) = self.max_residual() {
            let _ = write!(s, ", max residual {r:.3e}");
        }
        for c in self.failures().take(10) {
            let _ = write!(s, "\n  FAIL {}: {}", c.name, c.detail);
        }
        for w in &self.warnings {
            let _ = write!(s, "\n  warning: {w}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracks_failures_and_residuals() {
        let mut r = Report::new("demo");
        r.check("a", true, "");
        r.check_residual("b", 1e-3, 1e-6);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.max_residual(), Some(1e-3));
        assert!(r.summary().contains("FAIL b"));
        let mut outer = Report::new("outer");
        outer.absorb("x/", r);
        assert_eq!(outer.checks[1].name, "x/b");
    }

    #[test]
    fn nan_residual_fails() {
        let mut r = Report::new("demo");
        r.check_residual("nan", f64::NAN, 1.0);
        assert!(!r.passed());
    }
}
