//! Tunable verification parameters, overridable from a key=value text file.

use crate::error::{Error, Result};
use serde::Serialize;
use std::path::Path;

/// Knobs of the randomized verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Multiplier C in the pass threshold claimed_q * (1 + ratio_tol) + C * h,
    /// where h is the largest cell width of the working grid. Covers the gap
    /// between a sampled profile and the continuous one it stands in for,
    /// which shrinks linearly with the grid; calibrated against profiles
    /// whose optimal constant is known exactly.
    pub allowance_c: f64,
    /// Relative tolerance applied to the claimed constant itself.
    pub ratio_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            allowance_c: 5.0,
            ratio_tol: 1e-9,
        }
    }
}

impl OracleConfig {
    /// Parse overrides from `key = value` lines. Blank lines and lines
    /// starting with '#' are ignored; unknown keys are rejected so that a
    /// typo cannot silently leave a tolerance at its default.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = OracleConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
            })?;
            let key = key.trim();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::config(format!("line {}: {key} needs a numeric value", lineno + 1))
            })?;
            if !value.is_finite() || value < 0.0 {
                return Err(Error::config(format!(
                    "line {}: {key} must be finite and nonnegative, got {value}",
                    lineno + 1
                )));
            }
            match key {
                "allowance_c" => cfg.allowance_c = value,
                "ratio_tol" => cfg.ratio_tol = value,
                _ => {
                    return Err(Error::config(format!(
                        "line {}: unknown key {key:?} (known: allowance_c, ratio_tol)",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        OracleConfig::parse(&text)
    }
}
