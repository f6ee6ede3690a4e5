//! Confidence intervals and inter-rater reliability for quality scores
//! when only one, two, or a handful of observations exist.
//!
//! - [`tdist`]: Student's t distribution (CDF, quantiles) from the
//!   regularized incomplete beta function.
//! - [`intervals`]: single-observation ARF intervals and small-sample t
//!   intervals.
//! - [`irr`]: Cohen's kappa and pairwise score agreement.
//! - [`tqe`]: PASS/FAIL verdicts, evaluation, data-quality flags, history.
//! - [`mc`]: Monte Carlo coverage checks.
//! - [`report`], [`scorefile`], [`config`]: I/O used by the CLI.

pub mod config;
pub mod error;
pub mod intervals;
pub mod irr;
pub mod mc;
pub mod report;
pub mod scorefile;
pub mod tdist;
pub mod tqe;

pub use error::{Error, Result};
pub use intervals::{
    arf_interval, arf_k_normal, arf_k_unknown, sample_mean, sample_stddev, standardize,
    t_interval, ArfCoefficient, ArfRow, ConfidenceInterval, ScoreSample, ScoreScale,
    SingleObservation, TIntervalResult, Warning,
};
pub use irr::{
    cohen_kappa_frequencies, cohen_kappa_proportions, kappa_from_matrix, pairwise_agreement,
    KappaFrequencies, KappaProportions, PairwiseAgreement, RaterLabelMatrix,
};
pub use mc::{run_coverage, width_vs_n_sweep, CoverageResult, SimulationMethod, SimulationScenario};
pub use report::{EvaluationReport, Method};
pub use tdist::{regularized_incomplete_beta, t_cdf, t_pdf, t_quantile, DegreesOfFreedom, TCriticalQuery};
pub use tqe::{
    evaluate, flag_suspect_measurements, rule_of_thumb_estimate, threshold_verdict,
    QualityMeasurement, ThresholdPolicy, Verdict, VerdictKind,
};
