//! JSON run configuration shared by the suites and the command-line driver.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::combinatorics::Partition;
use crate::error::{domain, Error, Result};
use crate::gaudin::GaudinInstance;
use crate::scalar::{int, Rational};
use crate::spectral::{SpectralRun, Tolerances};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

/// Every field is optional in the file. Defaults: the instance `N = 2`,
/// `n = 2`, `h = (1, 2)`, `z = (1, 3)` at `t = 0`, bound 4, seed 0,
/// exact backend, five random samples per randomized suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub instance: GaudinInstance,
    #[serde(with = "crate::scalar::rational_string")]
    pub t: Rational,
    /// Partition bound `B`.
    pub bound: usize,
    /// Series truncation order `D`; derived from the instance when absent.
    pub truncation: Option<usize>,
    /// Partition for `build`.
    pub lambda: Partition,
    /// Number of traced factors for the partial-trace route; `|λ|` when absent.
    pub m: Option<usize>,
    /// Random instances or spaces per randomized suite.
    pub samples: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub backend: Backend,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            instance: GaudinInstance::new(vec![int(1), int(2)], vec![int(1), int(3)]).expect("valid"),
            t: int(0),
            bound: 4,
            truncation: None,
            lambda: Partition::row(1),
            m: None,
            samples: 5,
            tolerances: Tolerances::default(),
            seed: 0,
            backend: Backend::Exact,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.instance.validate()?;
        if let Some(m) = self.m {
            if m < self.lambda.size() {
                return domain(format!("m = {m} is below |λ| = {}", self.lambda.size()));
            }
        }
        let tol = &self.tolerances;
        if [tol.cluster, tol.eigenvalue, tol.reconstruction, tol.sign].iter().any(|x| !x.is_finite() || *x < 0.0) {
            return domain("tolerances must be finite and nonnegative");
        }
        Ok(())
    }

    pub fn spectral_run(&self) -> SpectralRun {
        SpectralRun { bound: self.bound, truncation: self.truncation, tol: self.tolerances.clone(), seed: self.seed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn parses_rational_strings() {
        let cfg = RunConfig::from_json(
            r#"{"instance": {"N": 1, "n": 2, "h": ["1/2"], "z": ["-1", "3/4"]}, "t": "5/2",
                "lambda": [2, 1], "tolerances": {"sign": 1e-6}, "backend": "float"}"#,
        )
        .unwrap();
        assert_eq!(cfg.instance.z[1], crate::scalar::rat(3, 4));
        assert_eq!(cfg.t, crate::scalar::rat(5, 2));
        assert_eq!(cfg.lambda.parts(), &[2, 1]);
        assert_eq!(cfg.tolerances.sign, 1e-6);
        assert_eq!(cfg.tolerances.cluster, 1e-7);
        assert_eq!(cfg.backend, Backend::Float);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"instance": {"N": 2, "n": 1, "h": ["1"], "z": ["0"]}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"t": "1/0"}"#).is_err());
        assert!(RunConfig::from_json(r#"{"lambda": [1, 2]}"#).is_err());
    }
}
