//! Confidence intervals for one observation (ARF) and for small samples
//! (Student's t), together with the descriptive statistics they need.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tdist::{t_quantile, DegreesOfFreedom, TCriticalQuery};

/// Largest sample size treated as "small" for t intervals.
pub const SMALL_SAMPLE_LIMIT: usize = 30;

/// Tolerance used when matching an alpha against the normal-row table.
const ALPHA_MATCH_TOL: f64 = 1e-9;

/// `(alpha, k)` pairs of the normal-distribution row, verbatim.
///
/// The entry at alpha = 0.5 (k = 0.05) is an order of magnitude below its
/// neighbour and below the distribution-free value 0.5; it is kept as
/// published and reported with [`Warning::SuspectTableEntry`].
const NORMAL_ROW: [(f64, f64); 7] = [
    (0.5, 0.05),
    (1.0 / 3.0, 1.26),
    (0.25, 1.8),
    (0.2, 2.31),
    (0.1, 4.79),
    (0.05, 9.66),
    (0.01, 48.39),
];

/// Closed interval of admissible scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreScale {
    pub min: f64,
    pub max: f64,
}

impl Default for ScoreScale {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 100.0,
        }
    }
}

impl ScoreScale {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::domain(format!(
                "score scale needs finite min < max, got [{min}, {max}]"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    /// Errors if `v` is non-finite or off the scale; `what` names it in the message.
    pub fn check(&self, what: &str, v: f64) -> Result<()> {
        if !v.is_finite() || !self.contains(v) {
            return Err(Error::domain(format!(
                "{what} {v} lies outside the score scale [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

/// Non-fatal conditions attached to results and reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// More observations than the small-sample regime; the t interval is
    /// still valid but a normal approximation would do.
    LargeSample { n: usize },
    /// The requested table entry looks inconsistent with the rest of the
    /// table.
    SuspectTableEntry { alpha: f64, k: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::LargeSample { n } => write!(
                f,
                "large sample (n = {n} > {SMALL_SAMPLE_LIMIT}): consider a normal approximation"
            ),
            Warning::SuspectTableEntry { alpha, k } => write!(
                f,
                "data suspect: normal-row k = {k} at alpha = {alpha} is below the distribution-free value"
            ),
        }
    }
}

/// One new measurement `y` plus a prior guess fixed before it was taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleObservation {
    pub y: f64,
    pub prior_mean: f64,
    pub scale: ScoreScale,
}

impl SingleObservation {
    /// The prior must be chosen independently of `y`; this cannot be
    /// checked here, only assumed.
    pub fn new(y: f64, prior_mean: f64, scale: ScoreScale) -> Result<Self> {
        scale.check("observation", y)?;
        scale.check("prior mean", prior_mean)?;
        Ok(Self {
            y,
            prior_mean,
            scale,
        })
    }
}

/// An ordered, non-empty list of scores on a declared scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSample {
    scores: Vec<f64>,
    scale: ScoreScale,
}

impl ScoreSample {
    pub fn new(scores: Vec<f64>, scale: ScoreScale) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        for &s in &scores {
            scale.check("score", s)?;
        }
        Ok(Self { scores, scale })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn scale(&self) -> ScoreScale {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// An interval `center ± half_width`, reported clamped to the score scale.
///
/// The raw (pre-clamp) bounds stay recoverable from `center` and
/// `half_width`; the clamp flags record whether the scale cut a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub center: f64,
    pub half_width: f64,
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
    pub clamped_lower: bool,
    pub clamped_upper: bool,
}

impl ConfidenceInterval {
    pub fn clamped_to(
        center: f64,
        half_width: f64,
        confidence: f64,
        scale: &ScoreScale,
    ) -> Result<Self> {
        if !(half_width >= 0.0 && half_width.is_finite()) {
            return Err(Error::domain(format!(
                "half-width must be finite and non-negative, got {half_width}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::domain("interval center is not finite"));
        }
        let raw_lower = center - half_width;
        let raw_upper = center + half_width;
        let lower = raw_lower.max(scale.min);
        let upper = raw_upper.min(scale.max);
        Ok(Self {
            center,
            half_width,
            lower,
            upper,
            confidence,
            clamped_lower: lower != raw_lower,
            clamped_upper: upper != raw_upper,
        })
    }

    pub fn raw_lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn raw_upper(&self) -> f64 {
        self.center + self.half_width
    }

    /// Whether `v` lies in the pre-clamp interval.
    pub fn raw_contains(&self, v: f64) -> bool {
        (v - self.center).abs() <= self.half_width
    }
}

impl fmt::Display for ConfidenceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.2} ± {:.2} -> [{:.2}, {:.2}] at {:.0}% confidence",
            self.center,
            self.half_width,
            self.lower,
            self.upper,
            self.confidence * 100.0
        )
    }
}

/// `z = (y - mu) / sigma`.
pub fn standardize(y: f64, mu: f64, sigma: f64) -> Result<f64> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::domain(format!(
            "standard deviation must be positive, got {sigma}"
        )));
    }
    Ok((y - mu) / sigma)
}

/// Which row of the `(k, alpha)` table to draw the ARF multiplier from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArfRow {
    /// Tabulated values for a normally distributed measurement.
    Normal,
    /// Distribution-free closed form.
    Unknown,
}

impl std::str::FromStr for ArfRow {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(ArfRow::Normal),
            "unknown" => Ok(ArfRow::Unknown),
            other => Err(Error::domain(format!(
                "ARF row must be `normal` or `unknown`, got `{other}`"
            ))),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::domain(format!(
            "alpha must lie in (0, 0.5], got {alpha}"
        )));
    }
    Ok(())
}

/// Distribution-free ARF multiplier `k = (1 - a + sqrt(1 - 2a)) / (2a)`.
pub fn arf_k_unknown(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((1.0 - alpha + (1.0 - 2.0 * alpha).sqrt()) / (2.0 * alpha))
}

/// Inverse of [`arf_k_unknown`]: `alpha = 4k / (2k + 1)^2` for `k >= 0.5`.
pub fn arf_alpha_unknown(k: f64) -> Result<f64> {
    if !(k >= 0.5 && k.is_finite()) {
        return Err(Error::domain(format!(
            "distribution-free ARF multiplier must be at least 0.5, got {k}"
        )));
    }
    let d = 2.0 * k + 1.0;
    Ok(4.0 * k / (d * d))
}

fn normal_row_entry(alpha: f64) -> Result<(f64, f64)> {
    NORMAL_ROW
        .iter()
        .copied()
        .find(|(a, _)| (a - alpha).abs() <= ALPHA_MATCH_TOL)
        .ok_or(Error::UnsupportedAlpha { alpha })
}

/// Normal-row ARF multiplier. Only the seven tabulated alphas are
/// accepted; there is no interpolation.
pub fn arf_k_normal(alpha: f64) -> Result<f64> {
    normal_row_entry(alpha).map(|(_, k)| k)
}

/// One column of the `(k, alpha)` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArfKAlphaRow {
    pub alpha: f64,
    pub k_normal: Option<f64>,
    pub k_unknown: f64,
}

/// The full table, with the unknown row computed from its closed form.
pub fn arf_table() -> Vec<ArfKAlphaRow> {
    NORMAL_ROW
        .iter()
        .map(|&(alpha, k)| ArfKAlphaRow {
            alpha,
            k_normal: Some(k),
            k_unknown: arf_k_unknown(alpha).expect("table alphas are in range"),
        })
        .collect()
}

/// Where an ARF multiplier came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArfSource {
    NormalTable,
    UnknownFormula,
    Explicit,
}

/// A resolved ARF multiplier with the confidence it buys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArfCoefficient {
    pub k: f64,
    pub alpha: f64,
    pub source: ArfSource,
}

impl ArfCoefficient {
    pub fn from_row(row: ArfRow, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        match row {
            ArfRow::Normal => {
                let (alpha, k) = normal_row_entry(alpha)?;
                Ok(Self {
                    k,
                    alpha,
                    source: ArfSource::NormalTable,
                })
            }
            ArfRow::Unknown => Ok(Self {
                k: arf_k_unknown(alpha)?,
                alpha,
                source: ArfSource::UnknownFormula,
            }),
        }
    }

    /// Confidence `c` resolved to `alpha = 1 - c`.
    pub fn for_confidence(row: ArfRow, confidence: f64) -> Result<Self> {
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::domain(format!(
                "confidence must lie in (0, 1), got {confidence}"
            )));
        }
        Self::from_row(row, 1.0 - confidence)
    }

    /// A caller-chosen `k`, credited with the distribution-free confidence.
    pub fn explicit(k: f64) -> Result<Self> {
        Ok(Self {
            k,
            alpha: arf_alpha_unknown(k)?,
            source: ArfSource::Explicit,
        })
    }

    pub fn confidence(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut w = Vec::new();
        if self.source == ArfSource::NormalTable && (self.alpha - 0.5).abs() <= ALPHA_MATCH_TOL {
            w.push(Warning::SuspectTableEntry {
                alpha: self.alpha,
                k: self.k,
            });
        }
        w
    }
}

/// ARF interval `(y + prior) / 2 ± k |y - prior|`, clamped to the scale.
pub fn arf_interval(obs: &SingleObservation, coef: &ArfCoefficient) -> Result<ConfidenceInterval> {
    if !(coef.k >= 0.0 && coef.k.is_finite()) {
        return Err(Error::domain(format!(
            "ARF multiplier must be non-negative, got {}",
            coef.k
        )));
    }
    let center = 0.5 * (obs.y + obs.prior_mean);
    let half_width = coef.k * (obs.y - obs.prior_mean).abs();
    ConfidenceInterval::clamped_to(center, half_width, coef.confidence(), &obs.scale)
}

pub fn sample_mean(sample: &ScoreSample) -> Result<f64> {
    mean(sample.scores())
}

pub fn sample_stddev(sample: &ScoreSample) -> Result<f64> {
    stddev(sample.scores())
}

pub(crate) fn mean(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    Ok(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation with the `n - 1` denominator.
pub(crate) fn stddev(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: xs.len(),
        });
    }
    let m = mean(xs)?;
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Ok((ss / (xs.len() - 1) as f64).sqrt())
}

/// Everything computed on the way to a t interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TIntervalResult {
    pub n: usize,
    pub df: DegreesOfFreedom,
    pub mean: f64,
    pub stddev: f64,
    pub t_critical: f64,
    /// Error bound `E = t * s / sqrt(n)`.
    pub margin: f64,
    pub interval: ConfidenceInterval,
    pub warnings: Vec<Warning>,
}

/// Two-sided Student's t interval for the mean of a small sample.
pub fn t_interval(sample: &ScoreSample, confidence: f64) -> Result<TIntervalResult> {
    let n = sample.len();
    let df = DegreesOfFreedom::for_sample_size(n)?;
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let query = TCriticalQuery::confidence(df, confidence)?;
    let t_critical = t_quantile(&query)?;
    let mean = sample_mean(sample)?;
    let stddev = sample_stddev(sample)?;
    let margin = t_critical * stddev / (n as f64).sqrt();
    let interval = ConfidenceInterval::clamped_to(mean, margin, confidence, &sample.scale())?;

    let mut warnings = Vec::new();
    if n > SMALL_SAMPLE_LIMIT {
        warnings.push(Warning::LargeSample { n });
    }
    Ok(TIntervalResult {
        n,
        df,
        mean,
        stddev,
        t_critical,
        margin,
        interval,
        warnings,
    })
}
