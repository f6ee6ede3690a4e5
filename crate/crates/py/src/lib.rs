//! Python bindings. Reports and simulation results cross the boundary as
//! small wrapper classes or plain dicts; errors become `ScarcevalError`
//! (a `ValueError`) or `ArithmeticError` for numerical breakdowns.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use scarceval as sv;
use sv::intervals::{ArfCoefficient, ArfRow, ScoreScale, SingleObservation};
use sv::irr::{KappaFrequencies, KappaProportions, RaterLabelMatrix};
use sv::mc::{PriorSpec, SimulationMethod, SimulationScenario};
use sv::report::{CriticalConstant, Method};
use sv::tdist::{DegreesOfFreedom, TCriticalQuery};
use sv::tqe::{EvaluationPolicy, QualityMeasurement};

create_exception!(scarceval, ScarcevalError, PyValueError);

fn to_py(e: sv::Error) -> PyErr {
    if e.is_numerical() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        ScarcevalError::new_err(e.to_string())
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for sv::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn scale_of(scale: (f64, f64)) -> PyResult<ScoreScale> {
    ScoreScale::new(scale.0, scale.1).py_err()
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// Interval report from `arf` or `t_interval`.
#[pyclass(name = "EvaluationReport", module = "scarceval", frozen)]
struct PyReport(sv::EvaluationReport);

#[pymethods]
impl PyReport {
    /// "ARF" or "T".
    #[getter]
    fn method(&self) -> &'static str {
        match self.0.method {
            Method::Arf => "ARF",
            Method::T => "T",
        }
    }

    #[getter]
    fn mean(&self) -> f64 {
        self.0.mean
    }

    #[getter]
    fn stddev(&self) -> Option<f64> {
        self.0.stddev
    }

    /// The k or t multiplier.
    #[getter]
    fn critical(&self) -> f64 {
        self.0.critical.value()
    }

    #[getter]
    fn df(&self) -> Option<u64> {
        match self.0.critical {
            CriticalConstant::T { df, .. } => Some(df),
            CriticalConstant::K { .. } => None,
        }
    }

    #[getter]
    fn margin(&self) -> f64 {
        self.0.margin
    }

    #[getter]
    fn confidence(&self) -> f64 {
        self.0.interval.confidence
    }

    /// Bounds after clamping to the score scale.
    #[getter]
    fn lower(&self) -> f64 {
        self.0.interval.lower
    }

    #[getter]
    fn upper(&self) -> f64 {
        self.0.interval.upper
    }

    #[getter]
    fn raw_lower(&self) -> f64 {
        self.0.interval.raw_lower()
    }

    #[getter]
    fn raw_upper(&self) -> f64 {
        self.0.interval.raw_upper()
    }

    #[getter]
    fn clamped(&self) -> (bool, bool) {
        (self.0.interval.clamped_lower, self.0.interval.clamped_upper)
    }

    /// PASS, BORDERLINE_PASS, BORDERLINE_FAIL, FAIL, or None without a threshold.
    #[getter]
    fn verdict(&self) -> Option<&'static str> {
        self.0.verdict.as_ref().map(|v| v.kind.label())
    }

    /// `(second_of_first, first_of_second)` for two-score reports.
    #[getter]
    fn agreement(&self) -> Option<(f64, f64)> {
        self.0
            .agreement
            .map(|a| (a.second_of_first, a.first_of_second))
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.iter().map(ToString::to_string).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().py_err()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        sv::EvaluationReport::from_json(text).py_err().map(Self)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.to_json()?)
    }

    fn render_text(&self) -> String {
        self.0.render_text()
    }

    fn explain(&self) -> String {
        self.0.explain()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "EvaluationReport(method={}, interval=[{}, {}], confidence={})",
            self.method(),
            self.0.interval.lower,
            self.0.interval.upper,
            self.0.interval.confidence
        )
    }
}

fn with_verdict(
    mut report: sv::EvaluationReport,
    threshold: Option<f64>,
    scale: &ScoreScale,
) -> PyResult<PyReport> {
    if let Some(t) = threshold {
        let tp = sv::ThresholdPolicy::new(t, report.interval.confidence, scale).py_err()?;
        report.verdict = Some(sv::threshold_verdict(&report.interval, report.mean, &tp));
    }
    Ok(PyReport(report))
}

/// ARF interval from one score `y` and a fixed `prior` average.
///
/// Give `alpha` (looked up in `row`, "normal" or "unknown") or an explicit `k`.
#[pyfunction]
#[pyo3(signature = (y, prior, alpha=None, *, row="normal", k=None, threshold=None, scale=(0.0, 100.0)))]
fn arf(
    y: f64,
    prior: f64,
    alpha: Option<f64>,
    row: &str,
    k: Option<f64>,
    threshold: Option<f64>,
    scale: (f64, f64),
) -> PyResult<PyReport> {
    let scale = scale_of(scale)?;
    let obs = SingleObservation::new(y, prior, scale).py_err()?;
    let coef = match (k, alpha) {
        (Some(_), Some(_)) => return Err(ScarcevalError::new_err("give alpha or k, not both")),
        (Some(k), None) => ArfCoefficient::explicit(k),
        (None, Some(a)) => ArfCoefficient::from_row(row.parse::<ArfRow>().py_err()?, a),
        (None, None) => ArfCoefficient::for_confidence(
            row.parse::<ArfRow>().py_err()?,
            sv::tqe::DEFAULT_CONFIDENCE,
        ),
    }
    .py_err()?;
    let report = sv::tqe::arf_report(&obs, &coef, threshold).py_err()?;
    with_verdict(report, threshold, &scale)
}

/// Student's t interval for two or more scores.
#[pyfunction]
#[pyo3(signature = (scores, confidence=0.8, *, threshold=None, scale=(0.0, 100.0)))]
fn t_interval(
    scores: Vec<f64>,
    confidence: f64,
    threshold: Option<f64>,
    scale: (f64, f64),
) -> PyResult<PyReport> {
    if scores.len() < 2 {
        return Err(ScarcevalError::new_err(format!(
            "a t interval needs at least 2 scores, got {}; use arf() for a single score",
            scores.len()
        )));
    }
    let policy = EvaluationPolicy {
        scale: scale_of(scale)?,
        confidence,
        pass_threshold: threshold,
        ..Default::default()
    };
    sv::evaluate(&[], &scores, &policy).py_err().map(PyReport)
}

/// Evaluates `new_scores`; a single score is judged against the mean of `history`.
#[pyfunction]
#[pyo3(signature = (history, new_scores, confidence=0.8, *, threshold=None, row="normal", scale=(0.0, 100.0)))]
fn evaluate(
    history: Vec<f64>,
    new_scores: Vec<f64>,
    confidence: f64,
    threshold: Option<f64>,
    row: &str,
    scale: (f64, f64),
) -> PyResult<PyReport> {
    let policy = EvaluationPolicy {
        scale: scale_of(scale)?,
        confidence,
        pass_threshold: threshold,
        arf_row: row.parse().py_err()?,
    };
    let now = chrono::Utc::now();
    let history: Vec<QualityMeasurement> = history
        .into_iter()
        .map(|score| QualityMeasurement {
            project_id: String::new(),
            rater_id: String::new(),
            score,
            sample_size_of_evaluated_text: None,
            timestamp: now,
        })
        .collect();
    sv::evaluate(&history, &new_scores, &policy)
        .py_err()
        .map(PyReport)
}

/// Critical value t with the given tail semantics. Exactly one of
/// `one_tail`, `two_tail` or `confidence` must be given.
#[pyfunction]
#[pyo3(signature = (df, *, one_tail=None, two_tail=None, confidence=None))]
fn t_critical(
    df: u64,
    one_tail: Option<f64>,
    two_tail: Option<f64>,
    confidence: Option<f64>,
) -> PyResult<f64> {
    let df = DegreesOfFreedom::new(df).py_err()?;
    let query = match (one_tail, two_tail, confidence) {
        (Some(q), None, None) => TCriticalQuery::one_tail(df, q),
        (None, Some(a), None) => TCriticalQuery::two_tail(df, a),
        (None, None, Some(c)) => TCriticalQuery::confidence(df, c),
        _ => {
            return Err(ScarcevalError::new_err(
                "give exactly one of one_tail, two_tail or confidence",
            ))
        }
    }
    .py_err()?;
    sv::t_quantile(&query).py_err()
}

/// P(T <= x) for T ~ t(df).
#[pyfunction]
fn t_cdf(x: f64, df: u64) -> PyResult<f64> {
    sv::t_cdf(x, DegreesOfFreedom::new(df).py_err()?).py_err()
}

#[pyfunction]
fn t_pdf(x: f64, df: u64) -> PyResult<f64> {
    Ok(sv::t_pdf(x, DegreesOfFreedom::new(df).py_err()?))
}

/// Cohen's kappa from observed and chance agreement proportions.
#[pyfunction]
fn kappa(p_o: f64, p_e: f64) -> PyResult<f64> {
    sv::irr::cohen_kappa_proportions(&KappaProportions::new(p_o, p_e).py_err()?).py_err()
}

/// Cohen's kappa from agreement counts.
#[pyfunction]
fn kappa_counts(f_o: u64, f_e: f64, total: u64) -> PyResult<f64> {
    sv::irr::cohen_kappa_frequencies(&KappaFrequencies::new(f_o, f_e, total).py_err()?).py_err()
}

/// Cohen's kappa from a square rater-by-rater contingency table.
#[pyfunction]
fn kappa_matrix(counts: Vec<Vec<u64>>) -> PyResult<f64> {
    sv::irr::kappa_from_matrix(&RaterLabelMatrix::new(counts).py_err()?).py_err()
}

/// Cohen's kappa from two parallel label sequences.
#[pyfunction]
fn kappa_labels(a: Vec<String>, b: Vec<String>) -> PyResult<f64> {
    sv::irr::kappa_from_matrix(&RaterLabelMatrix::from_labels(&a, &b).py_err()?).py_err()
}

/// `(second_of_first, first_of_second)` relative agreement of two scores.
#[pyfunction]
fn pairwise_agreement(qs1: f64, qs2: f64) -> PyResult<(f64, f64)> {
    let a = sv::pairwise_agreement(qs1, qs2).py_err()?;
    Ok((a.second_of_first, a.first_of_second))
}

fn parse_method(s: &str) -> PyResult<SimulationMethod> {
    match s.to_ascii_uppercase().as_str() {
        "T_INTERVAL" | "T" => Ok(SimulationMethod::TInterval),
        "ARF_NORMAL" => Ok(SimulationMethod::ArfNormal),
        "ARF_UNKNOWN_FORMULA" => Ok(SimulationMethod::ArfUnknownFormula),
        other => Err(ScarcevalError::new_err(format!(
            "unknown method `{other}`; expected T_INTERVAL, ARF_NORMAL or ARF_UNKNOWN_FORMULA"
        ))),
    }
}

/// Monte Carlo coverage of one scenario, returned as a dict.
///
/// For ARF methods `prior` is an absolute prior value; it defaults to the
/// true mean.
#[pyfunction]
#[pyo3(signature = (true_mean, true_stddev, n, confidence, trials, seed, method="T_INTERVAL", *, prior=None))]
#[allow(clippy::too_many_arguments)]
fn coverage<'py>(
    py: Python<'py>,
    true_mean: f64,
    true_stddev: f64,
    n: usize,
    confidence: f64,
    trials: u64,
    seed: u64,
    method: &str,
    prior: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let scenario = SimulationScenario {
        true_mean,
        true_stddev,
        n_observations: n,
        confidence,
        trials,
        seed,
        method: parse_method(method)?,
        prior: prior.map(|value| PriorSpec::Fixed { value }),
        population: Default::default(),
    };
    let r = py.detach(|| sv::run_coverage(&scenario)).py_err()?;
    let text = serde_json::to_string(&r).map_err(|e| ScarcevalError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

/// Mean half-width and coverage for each sample size; a list of dicts.
#[pyfunction]
#[pyo3(signature = (true_mean, true_stddev, confidence, trials, seed, sizes=None))]
fn sweep<'py>(
    py: Python<'py>,
    true_mean: f64,
    true_stddev: f64,
    confidence: f64,
    trials: u64,
    seed: u64,
    sizes: Option<Vec<usize>>,
) -> PyResult<Bound<'py, PyAny>> {
    let base = SimulationScenario {
        true_mean,
        true_stddev,
        n_observations: 2,
        confidence,
        trials,
        seed,
        method: SimulationMethod::TInterval,
        prior: None,
        population: Default::default(),
    };
    let sizes = sizes.unwrap_or_else(sv::mc::default_sweep_sizes);
    let rows = py.detach(|| sv::width_vs_n_sweep(&base, &sizes)).py_err()?;
    let text = serde_json::to_string(&rows).map_err(|e| ScarcevalError::new_err(e.to_string()))?;
    json_to_py(py, &text)
}

/// The tabulated alpha values with k for both rows.
#[pyfunction]
fn arf_table<'py>(py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    sv::intervals::arf_table()
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("alpha", r.alpha)?;
            d.set_item("k_normal", r.k_normal)?;
            d.set_item("k_unknown", r.k_unknown)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "scarceval")]
fn scarceval_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ScarcevalError", m.py().get_type::<ScarcevalError>())?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(arf, m)?)?;
    m.add_function(wrap_pyfunction!(t_interval, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(t_critical, m)?)?;
    m.add_function(wrap_pyfunction!(t_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(t_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_counts, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_labels, m)?)?;
    m.add_function(wrap_pyfunction!(pairwise_agreement, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(arf_table, m)?)?;
    Ok(())
}
