//! Inter-rater reliability: Cohen's kappa and pairwise score agreement.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observed and chance agreement as proportions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaProportions {
    pub p_o: f64,
    pub p_e: f64,
}

impl KappaProportions {
    pub fn new(p_o: f64, p_e: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_o) {
            return Err(Error::domain(format!(
                "observed agreement must lie in [0, 1], got {p_o}"
            )));
        }
        if !(0.0..=1.0).contains(&p_e) {
            return Err(Error::domain(format!(
                "chance agreement must lie in [0, 1), got {p_e}"
            )));
        }
        if p_e == 1.0 {
            return Err(Error::DegenerateChance);
        }
        Ok(Self { p_o, p_e })
    }
}

/// Observed and chance agreement as counts out of `total`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaFrequencies {
    pub f_o: u64,
    pub f_e: f64,
    pub total: u64,
}

impl KappaFrequencies {
    pub fn new(f_o: u64, f_e: f64, total: u64) -> Result<Self> {
        if total == 0 {
            return Err(Error::domain("total count must be positive"));
        }
        if f_o > total {
            return Err(Error::domain(format!(
                "observed agreements {f_o} exceed total {total}"
            )));
        }
        if !(f_e >= 0.0 && f_e <= total as f64) {
            return Err(Error::domain(format!(
                "expected agreements must lie in [0, {total}), got {f_e}"
            )));
        }
        if f_e == total as f64 {
            return Err(Error::DegenerateChance);
        }
        Ok(Self { f_o, f_e, total })
    }
}

/// `(p_o - p_e) / (1 - p_e)`.
pub fn cohen_kappa_proportions(inp: &KappaProportions) -> Result<f64> {
    if inp.p_e >= 1.0 {
        return Err(Error::DegenerateChance);
    }
    Ok((inp.p_o - inp.p_e) / (1.0 - inp.p_e))
}

/// `(f_o - f_e) / (N - f_e)`.
pub fn cohen_kappa_frequencies(inp: &KappaFrequencies) -> Result<f64> {
    let n = inp.total as f64;
    if inp.f_e >= n {
        return Err(Error::DegenerateChance);
    }
    Ok((inp.f_o as f64 - inp.f_e) / (n - inp.f_e))
}

/// Square contingency table: `counts[i][j]` is how often rater A chose
/// category `i` while rater B chose `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaterLabelMatrix {
    counts: Vec<Vec<u64>>,
}

impl RaterLabelMatrix {
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = counts.len();
        if k == 0 {
            return Err(Error::domain("contingency matrix is empty"));
        }
        if let Some((i, row)) = counts.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Error::domain(format!(
                "contingency matrix must be square: row {i} has {} entries, expected {k}",
                row.len()
            )));
        }
        if counts.iter().flatten().all(|&c| c == 0) {
            return Err(Error::domain("contingency matrix has no observations"));
        }
        Ok(Self { counts })
    }

    /// Builds the table from two parallel label lists. Categories are
    /// indexed in order of first appearance across both lists.
    pub fn from_labels<T: PartialEq + Clone>(a: &[T], b: &[T]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::domain(format!(
                "label lists differ in length: {} vs {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::domain("no labels given"));
        }
        let mut cats: Vec<T> = Vec::new();
        let mut index = |v: &T| match cats.iter().position(|c| c == v) {
            Some(i) => i,
            None => {
                cats.push(v.clone());
                cats.len() - 1
            }
        };
        let pairs: Vec<(usize, usize)> = a.iter().zip(b).map(|(x, y)| (index(x), index(y))).collect();
        let k = cats.len();
        let mut counts = vec![vec![0u64; k]; k];
        for (i, j) in pairs {
            counts[i][j] += 1;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Observed and marginal-product chance agreement.
    pub fn agreement(&self) -> Result<KappaProportions> {
        let total = self.total() as f64;
        let k = self.counts.len();
        let trace: u64 = (0..k).map(|i| self.counts[i][i]).sum();
        let rows: Vec<f64> = self
            .counts
            .iter()
            .map(|r| r.iter().sum::<u64>() as f64)
            .collect();
        let cols: Vec<f64> = (0..k)
            .map(|j| self.counts.iter().map(|r| r[j]).sum::<u64>() as f64)
            .collect();
        let p_o = trace as f64 / total;
        let p_e = rows.iter().zip(&cols).map(|(r, c)| r * c).sum::<f64>() / (total * total);
        KappaProportions::new(p_o, p_e.min(1.0))
    }
}

pub fn kappa_from_matrix(m: &RaterLabelMatrix) -> Result<f64> {
    cohen_kappa_proportions(&m.agreement()?)
}

/// How closely each of two scores matches the other, relative to the
/// other's magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseAgreement {
    /// `1 - |qs2 - qs1| / qs1`: how much of the first score the second agrees with.
    pub second_of_first: f64,
    /// `1 - |qs2 - qs1| / qs2`: how much of the second score the first agrees with.
    pub first_of_second: f64,
}

/// Relative agreement between two positive scores. The two percentages use
/// different denominators and are reported separately.
pub fn pairwise_agreement(qs1: f64, qs2: f64) -> Result<PairwiseAgreement> {
    if !(qs1 > 0.0 && qs1.is_finite()) || !(qs2 > 0.0 && qs2.is_finite()) {
        return Err(Error::domain(format!(
            "agreement needs positive scores, got {qs1} and {qs2}"
        )));
    }
    let diff = (qs2 - qs1).abs();
    Ok(PairwiseAgreement {
        second_of_first: 1.0 - diff / qs1,
        first_of_second: 1.0 - diff / qs2,
    })
}
