//! Student's t distribution built on the regularized incomplete beta
//! function.
//!
//! Critical values are computed rather than looked up, so any confidence
//! level and any integer number of degrees of freedom is available.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BETA_CF_MAX_ITER: usize = 300;
const BETA_CF_EPS: f64 = 1e-14;
const TINY: f64 = 1e-300;

const QUANTILE_MAX_ITER: usize = 200;
const INITIAL_UPPER_BRACKET: f64 = 1e6;
const MAX_UPPER_BRACKET: f64 = 1e300;

/// Degrees of freedom of a t distribution, `n - 1` for a sample of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct DegreesOfFreedom(u64);

impl DegreesOfFreedom {
    pub fn new(df: u64) -> Result<Self> {
        if df == 0 {
            return Err(Error::domain("degrees of freedom must be at least 1"));
        }
        Ok(Self(df))
    }

    /// Degrees of freedom for a sample of `n` observations.
    pub fn for_sample_size(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        Self::new(n as u64 - 1)
    }

    /// Accepts a real value only if it is a positive integer.
    pub fn from_f64(df: f64) -> Result<Self> {
        if !df.is_finite() || df.fract() != 0.0 || df < 1.0 || df > u64::MAX as f64 {
            return Err(Error::domain(format!(
                "degrees of freedom must be a positive integer, got {df}"
            )));
        }
        Self::new(df as u64)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<u64> for DegreesOfFreedom {
    type Error = Error;
    fn try_from(v: u64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DegreesOfFreedom> for u64 {
    fn from(df: DegreesOfFreedom) -> u64 {
        df.0
    }
}

impl fmt::Display for DegreesOfFreedom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How the probability in a [`TCriticalQuery`] was originally stated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailInterpretation {
    OneTail,
    TwoTail,
    ConfidenceLevel,
}

/// A request for the critical value `t` with upper-tail area `tail_probability`.
///
/// Regardless of how the probability was specified, it is normalised to
/// the one-sided upper tail `q`:
///
/// - one-tail `q` is used as is,
/// - two-tail `alpha` becomes `q = alpha / 2`,
/// - confidence `c` becomes `q = (1 - c) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TCriticalQuery {
    pub df: DegreesOfFreedom,
    pub tail_probability: f64,
    pub interpretation: TailInterpretation,
}

impl TCriticalQuery {
    pub fn one_tail(df: DegreesOfFreedom, q: f64) -> Result<Self> {
        Self::checked(df, q, TailInterpretation::OneTail)
    }

    pub fn two_tail(df: DegreesOfFreedom, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!(
                "two-tail probability must be in (0, 1], got {alpha}"
            )));
        }
        Self::checked(df, alpha / 2.0, TailInterpretation::TwoTail)
    }

    pub fn confidence(df: DegreesOfFreedom, confidence: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&confidence) {
            return Err(Error::domain(format!(
                "confidence level must be in [0, 1), got {confidence}"
            )));
        }
        Self::checked(
            df,
            (1.0 - confidence) / 2.0,
            TailInterpretation::ConfidenceLevel,
        )
    }

    fn checked(df: DegreesOfFreedom, q: f64, interpretation: TailInterpretation) -> Result<Self> {
        if !(q > 0.0 && q <= 0.5) {
            return Err(Error::domain(format!(
                "upper-tail probability must be in (0, 0.5], got {q}"
            )));
        }
        Ok(Self {
            df,
            tail_probability: q,
            interpretation,
        })
    }

    /// Two-sided confidence level equivalent to this query.
    pub fn confidence_level(&self) -> f64 {
        1.0 - 2.0 * self.tail_probability
    }
}

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7, n = 9).
pub(crate) fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!(
            "incomplete beta needs a > 0 and b > 0, got a = {a}, b = {b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "incomplete beta argument must lie in [0, 1], got {x}"
        )));
    }
    incbeta_split(a, b, x, 1.0 - x)
}

/// `I_x(a, b)` with the complement `y = 1 - x` supplied by the caller, so
/// values of `x` close to one keep full precision in `y`.
fn incbeta_split(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if y <= 0.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let cf = beta_continued_fraction(a, b, x)?;
        Ok((ln_front.exp() * cf / a).clamp(0.0, 1.0))
    } else {
        let cf = beta_continued_fraction(b, a, y)?;
        Ok((1.0 - ln_front.exp() * cf / b).clamp(0.0, 1.0))
    }
}

/// Modified Lentz evaluation of the continued fraction for `I_x(a, b)`.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        // even step
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        // odd step
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < BETA_CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::Numerical(format!(
        "incomplete beta continued fraction did not converge for a = {a}, b = {b}, x = {x}"
    )))
}

/// Density of the t distribution.
pub fn t_pdf(x: f64, df: DegreesOfFreedom) -> f64 {
    let nu = df.as_f64();
    let ln_norm = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0) - 0.5 * (nu * PI).ln();
    (ln_norm - (nu + 1.0) / 2.0 * (x * x / nu).ln_1p()).exp()
}

/// Upper-tail area `P(T > x)` for `x >= 0`.
fn upper_tail(x: f64, df: DegreesOfFreedom) -> Result<f64> {
    let nu = df.as_f64();
    let x2 = x * x;
    // x2 may overflow for huge x; the tail is then zero for any df
    if !x2.is_finite() {
        return Ok(0.0);
    }
    let denom = nu + x2;
    let w = nu / denom;
    let wc = x2 / denom;
    Ok(0.5 * incbeta_split(nu / 2.0, 0.5, w, wc)?)
}

/// Cumulative distribution function of the t distribution.
///
/// Evaluated through the symmetric tail so that `t_cdf(-x) = 1 - t_cdf(x)`
/// holds to rounding, and `t_cdf(0) = 0.5` exactly.
pub fn t_cdf(x: f64, df: DegreesOfFreedom) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("t_cdf argument is NaN"));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let tail = upper_tail(x.abs(), df)?;
    Ok(if x > 0.0 { 1.0 - tail } else { tail })
}

/// Critical value `t > 0` whose upper-tail area equals the query's
/// tail probability.
///
/// Newton steps on the tail area, kept inside a bisection bracket that
/// starts at `[0, 1e6]` and grows geometrically when the root lies beyond.
pub fn t_quantile(query: &TCriticalQuery) -> Result<f64> {
    let q = query.tail_probability;
    let df = query.df;
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::domain(format!(
            "upper-tail probability must be in (0, 0.5], got {q}"
        )));
    }
    if q == 0.5 {
        return Ok(0.0);
    }

    // f(t) = tail(t) - q is strictly decreasing; f(lo) > 0 >= f(hi).
    let mut lo = 0.0_f64;
    let mut hi = INITIAL_UPPER_BRACKET;
    while upper_tail(hi, df)? > q {
        lo = hi;
        hi *= 10.0;
        if hi > MAX_UPPER_BRACKET {
            return Err(Error::Numerical(format!(
                "could not bracket t quantile for df = {df}, q = {q}"
            )));
        }
    }

    // Normal-approximation start, pulled back into the bracket if needed.
    let mut t = normal_upper_quantile_guess(q).clamp(lo, hi);
    if t <= lo || t >= hi {
        t = 0.5 * (lo + hi);
    }

    for _ in 0..QUANTILE_MAX_ITER {
        let f = upper_tail(t, df)? - q;
        if f == 0.0 {
            return Ok(t);
        }
        if f > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = -t_pdf(t, df);
        let newton = t - f / slope;
        let next = if slope != 0.0 && newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 4.0 * f64::EPSILON * next.abs() || hi - lo <= 4.0 * f64::EPSILON * hi
        {
            return Ok(next);
        }
        t = next;
    }
    Err(Error::Numerical(format!(
        "t quantile did not converge for df = {df}, q = {q}"
    )))
}

/// Rough upper-tail normal quantile, used only as a starting point.
fn normal_upper_quantile_guess(q: f64) -> f64 {
    // Abramowitz & Stegun 26.2.23
    let t = (-2.0 * q.ln()).sqrt();
    t - (2.515_517 + 0.802_853 * t + 0.010_328 * t * t)
        / (1.0 + 1.432_788 * t + 0.189_269 * t * t + 0.001_308 * t * t * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn df(n: u64) -> DegreesOfFreedom {
        DegreesOfFreedom::new(n).unwrap()
    }

    /// Adaptive Simpson quadrature, the independent oracle for `I_x`.
    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
            let m = 0.5 * (a + b);
            let fm = f(m);
            ((b - a) / 6.0 * (f(a) + 4.0 * fm + f(b)), fm)
        }
        fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, eps: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (left, _) = simpson(f, a, m);
            let (right, _) = simpson(f, m, b);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
                return left + right + (left + right - whole) / 15.0;
            }
            recurse(f, a, m, left, eps / 2.0, depth - 1) + recurse(f, m, b, right, eps / 2.0, depth - 1)
        }
        let (whole, _) = simpson(f, a, b);
        recurse(f, a, b, whole, eps, 50)
    }

    #[test]
    fn incbeta_boundaries() {
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            regularized_incomplete_beta(5.0, 5.0, 0.5).unwrap(),
            0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn incbeta_arcsine_matches_quadrature() {
        // u = sqrt(t) removes the endpoint singularity of Beta(0.5, 0.5).
        let integrand = |u: f64| 2.0 / (1.0 - u * u).sqrt();
        let oracle = adaptive_simpson(&integrand, 0.0, 0.5, 1e-15) / PI;
        let got = regularized_incomplete_beta(0.5, 0.5, 0.25).unwrap();
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(got, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn incbeta_matches_quadrature_on_grid() {
        for &(a, b) in &[(1.0, 1.0), (2.0, 3.0), (3.5, 1.5), (10.0, 4.0), (1.0, 20.0), (50.0, 50.0)] {
            let norm = ln_beta(a, b).exp();
            let dens = |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0) / norm;
            for &x in &[0.05, 0.2, 0.45, 0.5, 0.7, 0.93] {
                let oracle = adaptive_simpson(&dens, 0.0, x, 1e-14);
                let got = regularized_incomplete_beta(a, b, x).unwrap();
                assert_abs_diff_eq!(got, oracle, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn incbeta_domain_errors() {
        assert!(regularized_incomplete_beta(0.0, 1.0, 0.5).is_err());
        assert!(regularized_incomplete_beta(1.0, -2.0, 0.5).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, 1.5).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, -0.1).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn incbeta_large_parameters() {
        // I_x(a, a) at 0.5 stays 0.5 even for large symmetric shapes.
        assert_abs_diff_eq!(
            regularized_incomplete_beta(200.0, 200.0, 0.5).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        // I_x(a, 1) = x^a
        assert_abs_diff_eq!(
            regularized_incomplete_beta(200.0, 1.0, 0.99).unwrap(),
            0.99_f64.powi(200),
            epsilon = 1e-12
        );
        // I_x(1, b) = 1 - (1 - x)^b
        assert_abs_diff_eq!(
            regularized_incomplete_beta(1.0, 150.0, 0.01).unwrap(),
            1.0 - 0.99_f64.powi(150),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ln_gamma_known_values() {
        assert_abs_diff_eq!(ln_gamma(1.0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(0.5), PI.sqrt().ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(10.0), 362_880.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(t_cdf(0.0, df(7)).unwrap(), 0.5);
        // Cauchy: 0.5 + atan(1)/pi
        assert_abs_diff_eq!(t_cdf(1.0, df(1)).unwrap(), 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(t_cdf(3.078, df(1)).unwrap(), 0.90, epsilon = 5e-4);
    }

    #[test]
    fn cdf_infinite_arguments() {
        assert_eq!(t_cdf(f64::INFINITY, df(3)).unwrap(), 1.0);
        assert_eq!(t_cdf(f64::NEG_INFINITY, df(3)).unwrap(), 0.0);
        assert!(t_cdf(f64::NAN, df(3)).is_err());
    }

    #[test]
    fn quantile_examples() {
        let q = TCriticalQuery::one_tail(df(1), 0.10).unwrap();
        assert_abs_diff_eq!(t_quantile(&q).unwrap(), 3.078, epsilon = 1e-3);

        let q = TCriticalQuery::one_tail(df(1), 0.25).unwrap();
        assert_abs_diff_eq!(t_quantile(&q).unwrap(), 1.0, epsilon = 1e-9);

        let p: f64 = 0.95;
        let oracle = (2.0 / (4.0 * p * (1.0 - p)) - 2.0).sqrt();
        let q = TCriticalQuery::one_tail(df(2), 0.05).unwrap();
        assert_abs_diff_eq!(t_quantile(&q).unwrap(), oracle, epsilon = 1e-9);
    }

    #[test]
    fn quantile_at_half_is_zero() {
        let q = TCriticalQuery::confidence(df(4), 0.0).unwrap();
        assert_eq!(t_quantile(&q).unwrap(), 0.0);
    }

    #[test]
    fn quantile_extreme_tail_expands_bracket() {
        // df = 1: t = tan(pi (0.5 - q)) ~ 1 / (pi q) > 1e6
        let q = 1e-8;
        let query = TCriticalQuery::one_tail(df(1), q).unwrap();
        let t = t_quantile(&query).unwrap();
        let oracle = (PI * (0.5 - q)).tan();
        assert!(t > INITIAL_UPPER_BRACKET);
        assert!((t - oracle).abs() / oracle < 1e-8);
    }

    #[test]
    fn query_conversions() {
        let q = TCriticalQuery::confidence(df(1), 0.80).unwrap();
        assert_abs_diff_eq!(q.tail_probability, 0.10, epsilon = 1e-15);
        let q = TCriticalQuery::two_tail(df(1), 0.20).unwrap();
        assert_abs_diff_eq!(q.tail_probability, 0.10, epsilon = 1e-15);
        assert!(TCriticalQuery::one_tail(df(1), 0.0).is_err());
        assert!(TCriticalQuery::one_tail(df(1), 0.6).is_err());
        assert!(TCriticalQuery::confidence(df(1), 1.0).is_err());
    }

    #[test]
    fn non_integer_df_rejected() {
        assert!(DegreesOfFreedom::from_f64(2.5).is_err());
        assert!(DegreesOfFreedom::from_f64(0.0).is_err());
        assert!(DegreesOfFreedom::new(0).is_err());
        assert_eq!(DegreesOfFreedom::from_f64(3.0).unwrap().get(), 3);
    }

    #[test]
    fn pdf_integrates_to_cdf() {
        let d = df(3);
        let dens = |t: f64| t_pdf(t, d);
        let area = adaptive_simpson(&dens, 0.0, 2.0, 1e-14);
        assert_abs_diff_eq!(0.5 + area, t_cdf(2.0, d).unwrap(), epsilon = 1e-11);
    }
}
