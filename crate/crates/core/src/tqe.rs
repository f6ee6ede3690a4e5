//! Translation-quality decisions on top of the interval math: verdicts
//! against a PASS threshold, single- and multi-score evaluation, data
//! quality flags, and the append-only measurement history.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{
    arf_interval, mean, t_interval, ArfCoefficient, ArfRow, ConfidenceInterval, ScoreSample,
    ScoreScale, SingleObservation,
};
use crate::irr::pairwise_agreement;
use crate::report::{CriticalConstant, EvaluationInputs, EvaluationReport, Method};

pub const DEFAULT_CONFIDENCE: f64 = 0.80;

/// One stored quality score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityMeasurement {
    pub project_id: String,
    pub rater_id: String,
    pub score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size_of_evaluated_text: Option<u64>,
    pub timestamp: DateTime<Utc>,
}

impl QualityMeasurement {
    pub fn validate(&self, scale: &ScoreScale) -> Result<()> {
        scale.check("score", self.score)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy {
    pub pass_threshold: f64,
    pub confidence: f64,
}

impl ThresholdPolicy {
    pub fn new(pass_threshold: f64, confidence: f64, scale: &ScoreScale) -> Result<Self> {
        scale.check("threshold", pass_threshold)?;
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::domain(format!(
                "confidence must lie in (0, 1), got {confidence}"
            )));
        }
        Ok(Self {
            pass_threshold,
            confidence,
        })
    }
}

/// Ordered from worst to best, so `a < b` means `a` is the harsher verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    Fail,
    BorderlineFail,
    BorderlinePass,
    Pass,
}

impl VerdictKind {
    /// FAIL and BORDERLINE_FAIL both count as not passing.
    pub fn is_failing(self) -> bool {
        matches!(self, VerdictKind::Fail | VerdictKind::BorderlineFail)
    }

    pub fn label(self) -> &'static str {
        match self {
            VerdictKind::Fail => "FAIL",
            VerdictKind::BorderlineFail => "BORDERLINE_FAIL",
            VerdictKind::BorderlinePass => "BORDERLINE_PASS",
            VerdictKind::Pass => "PASS",
        }
    }
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub interval: ConfidenceInterval,
    pub mean: f64,
    pub threshold: f64,
    pub rationale: String,
}

/// Midpoint between a historical average and a deviating new score.
pub fn rule_of_thumb_estimate(historical_avg: f64, new_score: f64) -> f64 {
    0.5 * (historical_avg + new_score)
}

/// Classifies a (reported) interval against the PASS threshold.
///
/// A mean exactly at the threshold is BORDERLINE_PASS: at equality no more
/// than half of the plausible values lie below the threshold.
pub fn threshold_verdict(ci: &ConfidenceInterval, mean: f64, policy: &ThresholdPolicy) -> Verdict {
    let t = policy.pass_threshold;
    let (kind, rationale) = if ci.lower >= t {
        (
            VerdictKind::Pass,
            format!("whole interval [{:.2}, {:.2}] is at or above {t:.2}", ci.lower, ci.upper),
        )
    } else if ci.upper < t {
        (
            VerdictKind::Fail,
            format!("whole interval [{:.2}, {:.2}] is below {t:.2}", ci.lower, ci.upper),
        )
    } else if mean < t {
        (
            VerdictKind::BorderlineFail,
            format!(
                "interval [{:.2}, {:.2}] straddles {t:.2} and the mean {mean:.2} is below it",
                ci.lower, ci.upper
            ),
        )
    } else {
        (
            VerdictKind::BorderlinePass,
            format!(
                "interval [{:.2}, {:.2}] straddles {t:.2} and the mean {mean:.2} is not below it",
                ci.lower, ci.upper
            ),
        )
    };
    Verdict {
        kind,
        interval: *ci,
        mean,
        threshold: t,
        rationale,
    }
}

/// Settings for [`evaluate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPolicy {
    pub scale: ScoreScale,
    pub confidence: f64,
    /// Without a threshold the report carries no verdict.
    pub pass_threshold: Option<f64>,
    /// Row of the ARF table used for single-score evaluations.
    pub arf_row: ArfRow,
}

impl Default for EvaluationPolicy {
    fn default() -> Self {
        Self {
            scale: ScoreScale::default(),
            confidence: DEFAULT_CONFIDENCE,
            pass_threshold: None,
            arf_row: ArfRow::Normal,
        }
    }
}

impl EvaluationPolicy {
    pub fn threshold_policy(&self) -> Result<Option<ThresholdPolicy>> {
        self.pass_threshold
            .map(|t| ThresholdPolicy::new(t, self.confidence, &self.scale))
            .transpose()
    }
}

/// Interval, verdict and agreement for a batch of new scores.
///
/// One score is judged against the history average with an ARF interval;
/// two or more get a t interval and the history is not consulted.
pub fn evaluate(
    history: &[QualityMeasurement],
    new_scores: &[f64],
    policy: &EvaluationPolicy,
) -> Result<EvaluationReport> {
    let threshold = policy.threshold_policy()?;
    let scale = policy.scale;
    let mut report = match new_scores {
        [] => return Err(Error::InsufficientData { needed: 1, got: 0 }),
        [y] => {
            if history.is_empty() {
                return Err(Error::NoHistory);
            }
            let past: Vec<f64> = history.iter().map(|m| m.score).collect();
            let prior = mean(&past)?;
            evaluate_single(*y, prior, policy)?
        }
        scores => {
            let sample = ScoreSample::new(scores.to_vec(), scale)?;
            let r = t_interval(&sample, policy.confidence)?;
            let agreement = match scores {
                [a, b] => Some(pairwise_agreement(*a, *b)?),
                _ => None,
            };
            EvaluationReport {
                method: Method::T,
                inputs: EvaluationInputs {
                    scores: scores.to_vec(),
                    prior_mean: None,
                    confidence: policy.confidence,
                    threshold: policy.pass_threshold,
                    scale,
                },
                mean: r.mean,
                stddev: Some(r.stddev),
                critical: CriticalConstant::T {
                    value: r.t_critical,
                    df: r.df.get(),
                },
                margin: r.margin,
                interval: r.interval,
                agreement,
                verdict: None,
                warnings: r.warnings,
            }
        }
    };
    if let Some(tp) = threshold {
        report.verdict = Some(threshold_verdict(&report.interval, report.mean, &tp));
    }
    Ok(report)
}

/// ARF evaluation of one score against a fixed prior, no verdict attached.
pub fn evaluate_single(y: f64, prior_mean: f64, policy: &EvaluationPolicy) -> Result<EvaluationReport> {
    let obs = SingleObservation::new(y, prior_mean, policy.scale)?;
    let coef = ArfCoefficient::for_confidence(policy.arf_row, policy.confidence)?;
    arf_report(&obs, &coef, policy.pass_threshold)
}

/// Builds an ARF report from an already-resolved coefficient.
pub fn arf_report(
    obs: &SingleObservation,
    coef: &ArfCoefficient,
    threshold: Option<f64>,
) -> Result<EvaluationReport> {
    let ci = arf_interval(obs, coef)?;
    let estimate = rule_of_thumb_estimate(obs.prior_mean, obs.y);
    Ok(EvaluationReport {
        method: Method::Arf,
        inputs: EvaluationInputs {
            scores: vec![obs.y],
            prior_mean: Some(obs.prior_mean),
            confidence: coef.confidence(),
            threshold,
            scale: obs.scale,
        },
        mean: estimate,
        stddev: None,
        critical: CriticalConstant::K {
            value: coef.k,
            alpha: coef.alpha,
            source: coef.source,
        },
        margin: ci.half_width,
        interval: ci,
        agreement: None,
        verdict: None,
        warnings: coef.warnings(),
    })
}

/// Bounds for the data-quality flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuspectConfig {
    pub iqr_multiplier: f64,
    /// Inclusive range of acceptable evaluated-text sizes; `None` disables
    /// the check.
    pub sample_size_bounds: Option<(u64, u64)>,
}

impl Default for SuspectConfig {
    fn default() -> Self {
        Self {
            iqr_multiplier: 1.5,
            sample_size_bounds: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SuspectFlag {
    Outlier { lower_fence: f64, upper_fence: f64 },
    SmallTextSample { size: u64, min: u64 },
    LargeTextSample { size: u64, max: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlaggedMeasurement {
    pub measurement: QualityMeasurement,
    pub flag: SuspectFlag,
}

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Flags suspicious measurements; nothing is removed.
///
/// Outliers are judged within each project's own history.
pub fn flag_suspect_measurements(
    history: &[QualityMeasurement],
    config: &SuspectConfig,
) -> Vec<FlaggedMeasurement> {
    let mut fences: Vec<(&str, f64, f64)> = Vec::new();
    let mut projects: Vec<&str> = history.iter().map(|m| m.project_id.as_str()).collect();
    projects.sort_unstable();
    projects.dedup();
    for p in projects {
        let mut scores: Vec<f64> = history
            .iter()
            .filter(|m| m.project_id == p)
            .map(|m| m.score)
            .collect();
        scores.sort_by(f64::total_cmp);
        let q1 = quantile_sorted(&scores, 0.25);
        let q3 = quantile_sorted(&scores, 0.75);
        let iqr = q3 - q1;
        fences.push((
            p,
            q1 - config.iqr_multiplier * iqr,
            q3 + config.iqr_multiplier * iqr,
        ));
    }

    let mut out = Vec::new();
    for m in history {
        let &(_, lo, hi) = fences
            .iter()
            .find(|(p, _, _)| *p == m.project_id)
            .expect("every project has fences");
        if m.score < lo || m.score > hi {
            out.push(FlaggedMeasurement {
                measurement: m.clone(),
                flag: SuspectFlag::Outlier {
                    lower_fence: lo,
                    upper_fence: hi,
                },
            });
        }
        if let (Some(size), Some((min, max))) = (m.sample_size_of_evaluated_text, config.sample_size_bounds) {
            if size < min {
                out.push(FlaggedMeasurement {
                    measurement: m.clone(),
                    flag: SuspectFlag::SmallTextSample { size, min },
                });
            } else if size > max {
                out.push(FlaggedMeasurement {
                    measurement: m.clone(),
                    flag: SuspectFlag::LargeTextSample { size, max },
                });
            }
        }
    }
    out
}

/// Append-only JSON-lines store of [`QualityMeasurement`]s.
///
/// Each append is one `write` of a complete line on a file opened in
/// append mode; appends through the same store are serialised by a lock.
#[derive(Debug)]
pub struct HistoryStore {
    path: PathBuf,
    writer: Mutex<()>,
}

impl HistoryStore {
    pub fn open(path: impl AsRef<Path>) -> Self {
        Self {
            path: path.as_ref().to_path_buf(),
            writer: Mutex::new(()),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, m: &QualityMeasurement) -> Result<()> {
        let mut line = serde_json::to_string(m).map_err(|e| Error::Io(e.to_string()))?;
        line.push('\n');
        let _guard = self.writer.lock().unwrap_or_else(|p| p.into_inner());
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(line.as_bytes())?;
        f.flush()?;
        Ok(())
    }

    /// All stored measurements in file order. A missing file is an empty
    /// history; a malformed line is an error naming its line number.
    pub fn load(&self) -> Result<Vec<QualityMeasurement>> {
        let f = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let m: QualityMeasurement = serde_json::from_str(&line)
                .map_err(|e| Error::parse(Some(i + 1), e.to_string()))?;
            out.push(m);
        }
        Ok(out)
    }

    pub fn load_project(&self, project_id: &str) -> Result<Vec<QualityMeasurement>> {
        Ok(self
            .load()?
            .into_iter()
            .filter(|m| m.project_id == project_id)
            .collect())
    }
}
