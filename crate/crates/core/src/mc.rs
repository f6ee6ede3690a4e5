//! Monte Carlo check of interval coverage.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, trial)`,
//! and partial sums are combined per fixed-size chunk in index order, so a
//! scenario produces bit-identical results on any number of threads.

use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::intervals::{arf_k_normal, arf_k_unknown, SMALL_SAMPLE_LIMIT};
use crate::tdist::{t_quantile, DegreesOfFreedom, TCriticalQuery};

const CHUNK: u64 = 4096;
/// Stream reserved for scenario-level draws (the randomized prior).
const SCENARIO_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SimulationMethod {
    ArfNormal,
    ArfUnknownFormula,
    TInterval,
}

impl SimulationMethod {
    pub fn is_arf(self) -> bool {
        !matches!(self, SimulationMethod::TInterval)
    }
}

/// How the ARF prior guess relates to the true mean. In every mode the
/// prior is fixed for the whole scenario and independent of the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PriorSpec {
    /// Prior equals the true mean.
    Exact,
    /// Prior at an absolute value.
    Fixed { value: f64 },
    /// Prior at `true_mean + offset`.
    Biased { offset: f64 },
    /// Prior drawn once, uniformly within `true_mean ± spread`, from the
    /// scenario seed.
    RandomizedFixed { spread: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    #[default]
    Normal,
    /// Uniform with the same mean and standard deviation.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationScenario {
    pub true_mean: f64,
    pub true_stddev: f64,
    pub n_observations: usize,
    pub confidence: f64,
    pub trials: u64,
    pub seed: u64,
    pub method: SimulationMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<PriorSpec>,
    #[serde(default)]
    pub population: Population,
}

impl SimulationScenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if !self.true_mean.is_finite() {
            return bad(format!("true mean must be finite, got {}", self.true_mean));
        }
        if !(self.true_stddev > 0.0 && self.true_stddev.is_finite()) {
            return bad(format!("true stddev must be positive, got {}", self.true_stddev));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return bad(format!("confidence must lie in (0, 1), got {}", self.confidence));
        }
        if self.method.is_arf() {
            if self.n_observations != 1 {
                return bad(format!(
                    "ARF methods use exactly one observation, got {}",
                    self.n_observations
                ));
            }
            if self.prior.is_none() {
                return bad("ARF methods need a prior".into());
            }
        } else if self.n_observations < 2 {
            return bad(format!(
                "t intervals need at least two observations, got {}",
                self.n_observations
            ));
        }
        Ok(())
    }

    /// The multiplier (`k` or `t`) this scenario applies.
    fn multiplier(&self) -> Result<f64> {
        let alpha = 1.0 - self.confidence;
        let mapped = |e: Error| match e {
            Error::Numerical(_) => e,
            other => Error::InvalidScenario(other.to_string()),
        };
        match self.method {
            SimulationMethod::ArfNormal => arf_k_normal(alpha).map_err(mapped),
            SimulationMethod::ArfUnknownFormula => arf_k_unknown(alpha).map_err(mapped),
            SimulationMethod::TInterval => {
                let df = DegreesOfFreedom::for_sample_size(self.n_observations).map_err(mapped)?;
                t_quantile(&TCriticalQuery::confidence(df, self.confidence).map_err(mapped)?)
            }
        }
    }

    fn resolved_prior(&self) -> f64 {
        match self.prior.unwrap_or(PriorSpec::Exact) {
            PriorSpec::Exact => self.true_mean,
            PriorSpec::Fixed { value } => value,
            PriorSpec::Biased { offset } => self.true_mean + offset,
            PriorSpec::RandomizedFixed { spread } => {
                let mut rng = trial_rng(self.seed, SCENARIO_STREAM);
                self.true_mean + spread * (2.0 * open_unit(&mut rng) - 1.0)
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(Some(e.line()), e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::parse(None, e.to_string()))
    }

    /// Reads a scenario from a `.json` or `.toml` file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            Some("toml") => Self::from_toml(&text),
            _ => Self::from_toml(&text).or_else(|_| Self::from_json(&text)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageResult {
    pub empirical_coverage: f64,
    pub covered_trials: u64,
    pub mean_halfwidth: f64,
    pub trials: u64,
    /// Prior actually used (ARF only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_mean: Option<f64>,
    pub scenario: SimulationScenario,
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in the open interval (0, 1).
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

struct Sampler {
    normal: Normal,
    population: Population,
    mean: f64,
    stddev: f64,
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u = open_unit(rng);
        match self.population {
            Population::Normal => self.mean + self.stddev * self.normal.inverse_cdf(u),
            Population::Uniform => self.mean + self.stddev * 3.0_f64.sqrt() * (2.0 * u - 1.0),
        }
    }
}

/// Runs the scenario and counts how often the pre-clamp interval covers
/// the true mean.
pub fn run_coverage(scenario: &SimulationScenario) -> Result<CoverageResult> {
    scenario.validate()?;
    let mult = scenario.multiplier()?;
    let prior = scenario.method.is_arf().then(|| scenario.resolved_prior());
    let sampler = Sampler {
        normal: Normal::standard(),
        population: scenario.population,
        mean: scenario.true_mean,
        stddev: scenario.true_stddev,
    };
    let n = scenario.n_observations;
    let mu = scenario.true_mean;
    let sqrt_n = (n as f64).sqrt();

    let trial = |i: u64, buf: &mut Vec<f64>| -> (bool, f64) {
        let mut rng = trial_rng(scenario.seed, i);
        buf.clear();
        buf.extend((0..n).map(|_| sampler.draw(&mut rng)));
        match prior {
            Some(p) => {
                let y = buf[0];
                let center = 0.5 * (y + p);
                let hw = mult * (y - p).abs();
                ((mu - center).abs() <= hw, hw)
            }
            None => {
                let m = buf.iter().sum::<f64>() / n as f64;
                let ss: f64 = buf.iter().map(|x| (x - m) * (x - m)).sum();
                let s = (ss / (n - 1) as f64).sqrt();
                let hw = mult * s / sqrt_n;
                ((mu - m).abs() <= hw, hw)
            }
        }
    };

    let chunks = scenario.trials.div_ceil(CHUNK);
    let partials: Vec<(u64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(scenario.trials);
            let mut buf = Vec::with_capacity(n);
            let mut covered = 0u64;
            let mut width = 0.0;
            for i in start..end {
                let (hit, hw) = trial(i, &mut buf);
                covered += u64::from(hit);
                width += hw;
            }
            (covered, width)
        })
        .collect();

    let covered: u64 = partials.iter().map(|p| p.0).sum();
    let width: f64 = partials.iter().fold(0.0, |acc, p| acc + p.1);
    Ok(CoverageResult {
        empirical_coverage: covered as f64 / scenario.trials as f64,
        covered_trials: covered,
        mean_halfwidth: width / scenario.trials as f64,
        trials: scenario.trials,
        prior_mean: prior,
        scenario: scenario.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub method: SimulationMethod,
    pub coverage: f64,
    pub mean_halfwidth: f64,
    /// `mean_halfwidth / true_mean`.
    pub relative_margin: f64,
}

/// Coverage and mean half-width over a range of sample sizes.
///
/// Sizes of two or more use t intervals. A size of one is run as an ARF
/// scenario (normal table when the confidence is tabulated, closed form
/// otherwise) using the base scenario's prior, or the true mean if none.
pub fn width_vs_n_sweep(base: &SimulationScenario, n_values: &[usize]) -> Result<Vec<SweepRow>> {
    if n_values.is_empty() {
        return Err(Error::InvalidScenario("sweep needs at least one n".into()));
    }
    n_values
        .iter()
        .map(|&n| {
            let mut s = base.clone();
            s.n_observations = n;
            match n {
                0 => return Err(Error::InvalidScenario("n must be at least 1".into())),
                1 => {
                    s.method = if arf_k_normal(1.0 - s.confidence).is_ok() {
                        SimulationMethod::ArfNormal
                    } else {
                        SimulationMethod::ArfUnknownFormula
                    };
                    s.prior = Some(s.prior.unwrap_or(PriorSpec::Exact));
                }
                _ => s.method = SimulationMethod::TInterval,
            }
            let r = run_coverage(&s)?;
            Ok(SweepRow {
                n,
                method: s.method,
                coverage: r.empirical_coverage,
                mean_halfwidth: r.mean_halfwidth,
                relative_margin: r.mean_halfwidth / s.true_mean,
            })
        })
        .collect()
}

/// Plot-ready CSV: `n,coverage,mean_halfwidth,relative_margin`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "coverage", "mean_halfwidth", "relative_margin"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.coverage.to_string(),
            r.mean_halfwidth.to_string(),
            r.relative_margin.to_string(),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Same CSV for a single coverage run.
pub fn coverage_to_csv(r: &CoverageResult) -> Result<String> {
    sweep_to_csv(&[SweepRow {
        n: r.scenario.n_observations,
        method: r.scenario.method,
        coverage: r.empirical_coverage,
        mean_halfwidth: r.mean_halfwidth,
        relative_margin: r.mean_halfwidth / r.scenario.true_mean,
    }])
}

/// Sizes at which the small-sample t interval is normally used.
pub fn default_sweep_sizes() -> Vec<usize> {
    vec![2, 3, 5, 10, SMALL_SAMPLE_LIMIT]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_scenario(n: usize, confidence: f64, trials: u64) -> SimulationScenario {
        SimulationScenario {
            true_mean: 80.0,
            true_stddev: 5.0,
            n_observations: n,
            confidence,
            trials,
            seed: 7,
            method: SimulationMethod::TInterval,
            prior: None,
            population: Population::Normal,
        }
    }

    #[test]
    fn rejects_invalid_scenarios() {
        let mut s = t_scenario(2, 0.8, 0);
        assert!(matches!(run_coverage(&s), Err(Error::InvalidScenario(_))));
        s.trials = 10;
        s.n_observations = 1;
        assert!(run_coverage(&s).is_err());
        s.method = SimulationMethod::ArfNormal;
        assert!(run_coverage(&s).is_err(), "missing prior");
        s.prior = Some(PriorSpec::Exact);
        s.confidence = 0.7;
        assert!(matches!(run_coverage(&s), Err(Error::InvalidScenario(_))), "alpha 0.3 not tabulated");
        s.confidence = 0.75;
        assert!(run_coverage(&s).is_ok());
        s.true_stddev = 0.0;
        assert!(run_coverage(&s).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let s = t_scenario(3, 0.9, 20_000);
        let a = run_coverage(&s).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = one.install(|| run_coverage(&s).unwrap());
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let c = four.install(|| run_coverage(&s).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.mean_halfwidth.to_bits(), c.mean_halfwidth.to_bits());
        assert_eq!(a, c);
    }

    #[test]
    fn coverage_is_exact_fraction() {
        let r = run_coverage(&t_scenario(2, 0.8, 12_345)).unwrap();
        assert_eq!(r.empirical_coverage, r.covered_trials as f64 / 12_345.0);
    }

    #[test]
    fn different_seeds_differ() {
        let a = run_coverage(&t_scenario(2, 0.8, 5_000)).unwrap();
        let mut s = t_scenario(2, 0.8, 5_000);
        s.seed = 8;
        let b = run_coverage(&s).unwrap();
        assert_ne!(a.covered_trials, b.covered_trials);
    }

    #[test]
    fn randomized_prior_is_fixed_per_seed() {
        let mut s = t_scenario(1, 0.8, 1_000);
        s.method = SimulationMethod::ArfUnknownFormula;
        s.prior = Some(PriorSpec::RandomizedFixed { spread: 10.0 });
        let a = run_coverage(&s).unwrap();
        let b = run_coverage(&s).unwrap();
        let p = a.prior_mean.unwrap();
        assert_eq!(Some(p), b.prior_mean);
        assert!((p - 80.0).abs() <= 10.0);
    }

    #[test]
    fn uniform_population_sanity() {
        let mut s = t_scenario(10, 0.9, 50_000);
        s.population = Population::Uniform;
        let r = run_coverage(&s).unwrap();
        // t intervals are robust for symmetric light-tailed data at n = 10
        assert!((r.empirical_coverage - 0.9).abs() < 0.02, "{}", r.empirical_coverage);
    }

    #[test]
    fn scenario_from_toml_and_json() {
        let toml = r#"
            true_mean = 90.0
            true_stddev = 4.0
            n_observations = 1
            confidence = 0.75
            trials = 100
            seed = 1
            method = "ARF_NORMAL"
            [prior]
            mode = "biased"
            offset = 3.0
        "#;
        let s = SimulationScenario::from_toml(toml).unwrap();
        assert_eq!(s.prior, Some(PriorSpec::Biased { offset: 3.0 }));
        assert_eq!(s.population, Population::Normal);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(SimulationScenario::from_json(&json).unwrap(), s);
    }

    #[test]
    fn sweep_single_row_and_csv() {
        let rows = width_vs_n_sweep(&t_scenario(2, 0.8, 2_000), &[4]).unwrap();
        assert_eq!(rows.len(), 1);
        let csv = sweep_to_csv(&rows).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,coverage,mean_halfwidth,relative_margin"));
        assert!(lines.next().unwrap().starts_with("4,"));
        assert!(width_vs_n_sweep(&t_scenario(2, 0.8, 10), &[]).is_err());
        assert!(width_vs_n_sweep(&t_scenario(2, 0.8, 10), &[0]).is_err());
    }

    #[test]
    fn sweep_includes_arf_row_for_n_one() {
        let rows = width_vs_n_sweep(&t_scenario(2, 0.8, 2_000), &[1, 2]).unwrap();
        assert_eq!(rows[0].method, SimulationMethod::ArfNormal);
        assert_eq!(rows[1].method, SimulationMethod::TInterval);
    }
}
