//! JSON system definition files.
//!
//! A config names the matrix and, optionally, explicit digit sets for either
//! side; omitted digit sets are generated canonically on load. Digits are
//! arrays of integer arrays so that the format stays trivially parseable
//! from any language.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::MSystem;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemConfig {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_digits: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SystemConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn from_path(path: &Path) -> std::io::Result<std::result::Result<Self, serde_json::Error>> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_json(&text))
    }

    /// Validate the config into a working system.
    pub fn build(&self) -> Result<MSystem> {
        if self.matrix.is_empty() {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        MSystem::with_digits(
            &self.matrix,
            self.digits.as_deref(),
            self.dual_digits.as_deref(),
            self.label.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_and_builds() {
        let text = r#"{
            "matrix": [[1, 1], [1, -1]],
            "digits": [[0, 0], [1, 0]],
            "label": "twindragon"
        }"#;
        let cfg = SystemConfig::from_json(text).unwrap();
        let sys = cfg.build().unwrap();
        assert_eq!(sys.m(), 2);
        assert_eq!(sys.label(), Some("twindragon"));
        let serialized = serde_json::to_string(&cfg).unwrap();
        let reparsed = SystemConfig::from_json(&serialized).unwrap();
        assert_eq!(reparsed.matrix, cfg.matrix);
    }

    #[test]
    fn rejects_bad_systems() {
        let cfg = SystemConfig::from_json(r#"{"matrix": [[1, 0], [0, 2]]}"#).unwrap();
        assert!(matches!(cfg.build().unwrap_err(), Error::NotExpanding { .. }));
        let cfg =
            SystemConfig::from_json(r#"{"matrix": [[2]], "digits": [[0], [2]]}"#).unwrap();
        assert_eq!(cfg.build().unwrap_err(), Error::NotAResidueSystem { i: 0, j: 1 });
    }
}
