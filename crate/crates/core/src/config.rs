//! TOML configuration shared by the command-line tools.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{ArfRow, ScoreScale};
use crate::tqe::{EvaluationPolicy, SuspectConfig, DEFAULT_CONFIDENCE};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "SCARCEVAL_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub scale: ScoreScale,
    pub confidence: f64,
    pub threshold: Option<f64>,
    pub history_file: Option<PathBuf>,
    pub arf_row: ArfRow,
    pub iqr_multiplier: f64,
    /// `[min, max]` evaluated-text size.
    pub sample_size_bounds: Option<[u64; 2]>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scale: ScoreScale::default(),
            confidence: DEFAULT_CONFIDENCE,
            threshold: None,
            history_file: None,
            arf_row: ArfRow::Normal,
            iqr_multiplier: 1.5,
            sample_size_bounds: None,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::parse(None, e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Loads `explicit` if given, else the file named by [`CONFIG_ENV`],
    /// else the defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ScoreScale::new(self.scale.min, self.scale.max)?;
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::domain(format!(
                "config confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        if let Some(t) = self.threshold {
            self.scale.check("config threshold", t)?;
        }
        if let Some([lo, hi]) = self.sample_size_bounds {
            if lo > hi {
                return Err(Error::domain("sample_size_bounds must be [min, max]"));
            }
        }
        Ok(())
    }

    pub fn policy(&self) -> EvaluationPolicy {
        EvaluationPolicy {
            scale: self.scale,
            confidence: self.confidence,
            pass_threshold: self.threshold,
            arf_row: self.arf_row,
        }
    }

    pub fn suspect_config(&self) -> SuspectConfig {
        SuspectConfig {
            iqr_multiplier: self.iqr_multiplier,
            sample_size_bounds: self.sample_size_bounds.map(|[a, b]| (a, b)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_config() {
        let cfg = Config::from_toml(
            "threshold = 80\nhistory_file = \"h.jsonl\"\nsample_size_bounds = [100, 10000]\n[scale]\nmin = 0\nmax = 100\n",
        )
        .unwrap();
        assert_eq!(cfg.threshold, Some(80.0));
        assert_eq!(cfg.confidence, 0.8);
        assert_eq!(cfg.suspect_config().sample_size_bounds, Some((100, 10_000)));
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Config::from_toml("confidence = 1.5").is_err());
        assert!(Config::from_toml("threshold = 180").is_err());
        assert!(Config::from_toml("colour = 1").is_err());
        assert!(Config::from_toml("[scale]\nmin = 5\nmax = 1\n").is_err());
    }
}
