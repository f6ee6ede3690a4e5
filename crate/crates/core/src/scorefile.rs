//! Score files: CSV with a header row, or a JSON array of the same rows.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::ScoreScale;
use crate::tqe::QualityMeasurement;

const COLUMNS: [&str; 5] = ["project_id", "rater_id", "score", "sample_size", "timestamp"];
const REQUIRED: [&str; 3] = ["project_id", "rater_id", "score"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRow {
    pub project_id: String,
    pub rater_id: String,
    pub score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<DateTime<Utc>>,
}

impl ScoreRow {
    /// Rows without a timestamp are stamped with `now`.
    pub fn into_measurement(self, now: DateTime<Utc>) -> QualityMeasurement {
        QualityMeasurement {
            project_id: self.project_id,
            rater_id: self.rater_id,
            score: self.score,
            sample_size_of_evaluated_text: self.sample_size,
            timestamp: self.timestamp.unwrap_or(now),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScoreFile {
    pub rows: Vec<ScoreRow>,
}

/// Dot-decimal only; `1,5`, `inf` and `NaN` are rejected.
pub fn parse_score(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim();
    let ok = !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !ok {
        return Err(format!("`{s}` is not a dot-decimal number"));
    }
    let v: f64 = t.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// Parses a comma-separated list of scores such as `76.85,81.99`.
pub fn parse_score_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .enumerate()
        .map(|(i, part)| {
            parse_score(part).map_err(|m| Error::domain(format!("score #{}: {m}", i + 1)))
        })
        .collect()
}

impl ScoreFile {
    pub fn parse_csv(text: &str, scale: &ScoreScale) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr
            .headers()
            .map_err(|e| Error::parse(Some(1), e.to_string()))?
            .clone();
        if headers.is_empty() || headers.iter().all(str::is_empty) {
            return Err(Error::parse(Some(1), "missing header row"));
        }
        for h in headers.iter() {
            if !COLUMNS.contains(&h) {
                return Err(Error::parse(Some(1), format!("unknown column `{h}`")));
            }
        }
        for r in REQUIRED {
            if !headers.iter().any(|h| h == r) {
                return Err(Error::parse(Some(1), format!("missing required column `{r}`")));
            }
        }
        let col = |name: &str| headers.iter().position(|h| h == name);
        let (pid, rid, sc, ss, ts) = (
            col("project_id").unwrap(),
            col("rater_id").unwrap(),
            col("score").unwrap(),
            col("sample_size"),
            col("timestamp"),
        );

        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize);
                Error::parse(line, e.to_string())
            })?;
            let line = rec.position().map(|p| p.line() as usize);
            let field = |i: usize| rec.get(i).unwrap_or("");
            let err = |m: String| Error::parse(line, m);

            let project_id = field(pid).to_string();
            let rater_id = field(rid).to_string();
            if project_id.is_empty() || rater_id.is_empty() {
                return Err(err("project_id and rater_id must be non-empty".into()));
            }
            let score = parse_score(field(sc)).map_err(err)?;
            if !scale.contains(score) {
                return Err(err(format!(
                    "score {score} outside scale [{}, {}]",
                    scale.min, scale.max
                )));
            }
            let sample_size = match ss.map(field).filter(|s| !s.is_empty()) {
                Some(s) => Some(
                    s.parse::<u64>()
                        .map_err(|_| err(format!("sample_size `{s}` is not a count")))?,
                ),
                None => None,
            };
            let timestamp = match ts.map(field).filter(|s| !s.is_empty()) {
                Some(s) => Some(
                    DateTime::parse_from_rfc3339(s)
                        .map_err(|e| err(format!("timestamp `{s}`: {e}")))?
                        .with_timezone(&Utc),
                ),
                None => None,
            };
            rows.push(ScoreRow {
                project_id,
                rater_id,
                score,
                sample_size,
                timestamp,
            });
        }
        Ok(Self { rows })
    }

    pub fn parse_json(text: &str, scale: &ScoreScale) -> Result<Self> {
        let rows: Vec<ScoreRow> =
            serde_json::from_str(text).map_err(|e| Error::parse(Some(e.line()), e.to_string()))?;
        for (i, r) in rows.iter().enumerate() {
            if !scale.contains(r.score) || !r.score.is_finite() {
                return Err(Error::parse(
                    None,
                    format!("row {}: score {} outside scale [{}, {}]", i + 1, r.score, scale.min, scale.max),
                ));
            }
        }
        Ok(Self { rows })
    }

    /// Chooses the parser from the extension; anything but `.json` is CSV.
    pub fn load(path: &std::path::Path, scale: &ScoreScale) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::parse_json(&text, scale)
        } else {
            Self::parse_csv(&text, scale)
        }
    }

    pub fn scores(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.score).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scale() -> ScoreScale {
        ScoreScale::default()
    }

    #[test]
    fn parses_csv() {
        let text = "project_id,rater_id,score,sample_size,timestamp\n\
                    whale,a,76.85,1200,2024-01-02T03:04:05Z\n\
                    whale,b,81.99,,\n";
        let f = ScoreFile::parse_csv(text, &scale()).unwrap();
        assert_eq!(f.scores(), vec![76.85, 81.99]);
        assert_eq!(f.rows[0].sample_size, Some(1200));
        assert!(f.rows[0].timestamp.is_some());
        assert_eq!(f.rows[1].sample_size, None);
    }

    #[test]
    fn column_order_free() {
        let text = "score,rater_id,project_id\n90,r,p\n";
        let f = ScoreFile::parse_csv(text, &scale()).unwrap();
        assert_eq!(f.rows[0].project_id, "p");
    }

    #[test]
    fn rejects_unknown_column() {
        let err = ScoreFile::parse_csv("project_id,rater_id,score,colour\np,r,1,red\n", &scale()).unwrap_err();
        assert!(err.to_string().contains("unknown column `colour`"), "{err}");
    }

    #[test]
    fn malformed_rows_report_line() {
        let text = "project_id,rater_id,score\np,r,90\np,r,9o\n";
        match ScoreFile::parse_csv(text, &scale()) {
            Err(Error::Parse { line: Some(3), .. }) => {}
            other => panic!("{other:?}"),
        }
        let text = "project_id,rater_id,score\np,r,90\np,r,120\n";
        assert!(matches!(
            ScoreFile::parse_csv(text, &scale()),
            Err(Error::Parse { line: Some(3), .. })
        ));
        let text = "project_id,rater_id,score\np,r,90,extra\n";
        assert!(matches!(
            ScoreFile::parse_csv(text, &scale()),
            Err(Error::Parse { line: Some(2), .. })
        ));
    }

    #[test]
    fn missing_required_column() {
        assert!(ScoreFile::parse_csv("project_id,score\np,1\n", &scale()).is_err());
        assert!(ScoreFile::parse_csv("", &scale()).is_err());
    }

    #[test]
    fn locale_independent_numbers() {
        assert_eq!(parse_score("81.99"), Ok(81.99));
        assert!(parse_score("81,99").is_err());
        assert!(parse_score("inf").is_err());
        assert!(parse_score("NaN").is_err());
        assert!(parse_score("").is_err());
        assert!(parse_score_list("76.85, 81.99").is_ok());
        assert!(parse_score_list("76,85;81").is_err());
    }

    #[test]
    fn parses_json_rows() {
        let text = r#"[{"project_id":"p","rater_id":"r","score":88.5}]"#;
        let f = ScoreFile::parse_json(text, &scale()).unwrap();
        assert_eq!(f.scores(), vec![88.5]);
        let bad = r#"[{"project_id":"p","rater_id":"r","score":88.5,"mood":"ok"}]"#;
        assert!(ScoreFile::parse_json(bad, &scale()).is_err());
    }
}
