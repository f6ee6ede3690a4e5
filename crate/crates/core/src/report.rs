//! Evaluation reports: the record produced by `evaluate`, rendered either
//! as 2-decimal text or as full-precision JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{ArfSource, ConfidenceInterval, ScoreScale, Warning};
use crate::irr::PairwiseAgreement;
use crate::tqe::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    /// Single observation against a fixed prior.
    Arf,
    /// Student's t over two or more observations.
    T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationInputs {
    pub scores: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_mean: Option<f64>,
    pub confidence: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub scale: ScoreScale,
}

/// The multiplier applied to the spread: ARF `k` or Student's `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CriticalConstant {
    K { value: f64, alpha: f64, source: ArfSource },
    T { value: f64, df: u64 },
}

impl CriticalConstant {
    pub fn value(&self) -> f64 {
        match *self {
            CriticalConstant::K { value, .. } | CriticalConstant::T { value, .. } => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: Method,
    pub inputs: EvaluationInputs,
    /// Sample mean (t) or midpoint estimate (ARF).
    pub mean: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stddev: Option<f64>,
    pub critical: CriticalConstant,
    pub margin: f64,
    pub interval: ConfidenceInterval,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<PairwiseAgreement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default)]
    pub warnings: Vec<Warning>,
}

fn join_2dp(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| format!("{x:.2}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(Some(e.line()), e.to_string()))
    }

    /// Human-readable report with every number rounded to 2 decimals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let ci = &self.interval;
        match self.method {
            Method::Arf => {
                let _ = writeln!(out, "method:      ARF (single observation)");
                let _ = writeln!(out, "observation: {:.2}", self.inputs.scores[0]);
                if let Some(p) = self.inputs.prior_mean {
                    let _ = writeln!(out, "prior mean:  {p:.2}");
                }
                let _ = writeln!(out, "estimate:    {:.2}", self.mean);
            }
            Method::T => {
                let _ = writeln!(out, "method:      Student's t (n = {})", self.inputs.scores.len());
                let _ = writeln!(out, "scores:      {}", join_2dp(&self.inputs.scores));
                let _ = writeln!(out, "mean:        {:.2}", self.mean);
            }
        }
        if let Some(s) = self.stddev {
            let _ = writeln!(out, "stddev:      {s:.2}");
        }
        match self.critical {
            CriticalConstant::K { value, alpha, .. } => {
                let _ = writeln!(out, "k:           {value:.2} (alpha = {alpha:.2})");
            }
            CriticalConstant::T { value, df } => {
                let _ = writeln!(out, "t:           {value:.2} (df = {df})");
            }
        }
        let _ = writeln!(out, "margin:      {:.2}", self.margin);
        let mut clamp = Vec::new();
        if ci.clamped_lower {
            clamp.push("lower");
        }
        if ci.clamped_upper {
            clamp.push("upper");
        }
        let clamp = if clamp.is_empty() {
            String::new()
        } else {
            format!(", {} bound clamped to scale", clamp.join(" and "))
        };
        let _ = writeln!(
            out,
            "interval:    [{:.2}, {:.2}] at {:.2}% confidence{clamp}",
            ci.lower,
            ci.upper,
            ci.confidence * 100.0
        );
        if let Some(a) = &self.agreement {
            let _ = writeln!(
                out,
                "agreement:   second agrees with {:.2}% of first, first agrees with {:.2}% of second",
                a.second_of_first * 100.0,
                a.first_of_second * 100.0
            );
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(
                out,
                "verdict:     {} (threshold {:.2}): {}",
                v.kind, v.threshold, v.rationale
            );
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning:     {w}");
        }
        out
    }

    /// The formulas with this report's numbers substituted in.
    pub fn explain(&self) -> String {
        let mut out = String::new();
        match (self.method, self.critical) {
            (Method::Arf, CriticalConstant::K { value: k, .. }) => {
                let y = self.inputs.scores[0];
                let prior = self.inputs.prior_mean.unwrap_or(f64::NAN);
                let _ = writeln!(
                    out,
                    "ARF = ({prior} + {y}) / 2 ± {k} × |{prior} − {y}| = {:.2} ± {:.2}",
                    self.interval.center, self.interval.half_width
                );
            }
            (_, CriticalConstant::T { value: t, df }) => {
                let n = self.inputs.scores.len();
                let s = self.stddev.unwrap_or(f64::NAN);
                let _ = writeln!(out, "x̄ = ({}) / {n} = {:.2}", self.inputs.scores.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" + "), self.mean);
                let _ = writeln!(out, "s = sqrt(Σ(xᵢ − x̄)² / {}) = {s:.4}", n - 1);
                let _ = writeln!(
                    out,
                    "t(df = {df}, upper tail {:.4}) = {t:.3}",
                    (1.0 - self.inputs.confidence) / 2.0
                );
                let _ = writeln!(out, "E = {t:.3} × {s:.4} / √{n} = {:.2}", self.margin);
                let _ = writeln!(
                    out,
                    "CI = ({:.2} − {:.2}, {:.2} + {:.2}) = ({:.2}, {:.2})",
                    self.mean,
                    self.margin,
                    self.mean,
                    self.margin,
                    self.interval.raw_lower(),
                    self.interval.raw_upper()
                );
            }
            (Method::T, CriticalConstant::K { .. }) => {}
        }
        out
    }
}
