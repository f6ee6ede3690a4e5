use std::path::Path;
use std::process::{Command, Output};

fn scarceval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scarceval"))
        .args(args)
        .env_remove("SCARCEVAL_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn tcrit_one_tail() {
    let o = scarceval(&["tcrit", "--df", "1", "--one-tail", "0.10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "3.078");
}

#[test]
fn tcrit_json_has_full_precision() {
    let o = scarceval(&["--json", "tcrit", "--df", "1", "--one-tail", "0.10"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = v["t"].as_f64().unwrap();
    assert!((t - 3.077_683_537_175_254).abs() < 1e-9, "{t}");
}

#[test]
fn tcrit_rejects_fractional_df() {
    let o = scarceval(&["tcrit", "--df", "2.5", "--one-tail", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--df"), "{}", stderr(&o));
}

#[test]
fn tci_worked_example() {
    let o = scarceval(&["tci", "--scores", "76.85,81.99", "--confidence", "0.80"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("[71.51, 87.33]"), "{out}");
    assert!(out.contains("margin:      7.91"), "{out}");
}

#[test]
fn tci_failing_verdict_exits_3() {
    let o = scarceval(&["tci", "--scores", "76.85,81.99", "--threshold", "80"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("BORDERLINE_FAIL"));
}

#[test]
fn tci_single_score_points_to_arf() {
    let o = scarceval(&["tci", "--scores", "80"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("arf"), "{}", stderr(&o));
}

#[test]
fn tci_rejects_comma_decimal() {
    let o = scarceval(&["tci", "--scores", "76,85;81,99"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--scores"));
}

#[test]
fn tci_explain_substitutes_numbers() {
    let o = scarceval(&["--explain", "tci", "--scores", "76.85,81.99"]);
    assert!(stdout(&o).contains("E = 3.078 × 3.6345 / √2 = 7.91"), "{}", stdout(&o));
}

#[test]
fn arf_worked_example() {
    let o = scarceval(&["arf", "--y", "85.2", "--prior", "96.3", "--alpha", "0.25"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("[70.77, 100.00]"), "{}", stdout(&o));
}

#[test]
fn arf_rows() {
    let o = scarceval(&["arf", "--y", "85.2", "--prior", "96.3", "--alpha", "0.20"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("[65.11, 100.00]"), "{}", stdout(&o));
    let o = scarceval(&[
        "arf", "--y", "85.2", "--prior", "96.3", "--alpha", "0.25", "--row", "unknown",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("margin:      32.35"), "{}", stdout(&o));
}

#[test]
fn arf_untabulated_alpha_names_flag() {
    let o = scarceval(&["arf", "--y", "85", "--prior", "90", "--alpha", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--alpha"), "{}", stderr(&o));
}

#[test]
fn arf_out_of_scale_names_flag() {
    let o = scarceval(&["arf", "--y", "120", "--prior", "90", "--alpha", "0.25"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--y"), "{}", stderr(&o));
}

#[test]
fn kappa_forms() {
    let o = scarceval(&["kappa", "--po", "0.6", "--pe", "0.46"]);
    assert_eq!(stdout(&o).trim(), "0.26");
    // p_o = 0.6, p_e = 0.6 * 0.7 + 0.4 * 0.3 = 0.54
    let o = scarceval(&["kappa", "--matrix", "45,15;25,15"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "0.13");
    let o = scarceval(&["kappa", "--po", "0.5", "--pe", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kappa_from_label_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("labels.csv");
    std::fs::write(&p, "a,b\nyes,yes\nno,no\nyes,no\nno,no\n").unwrap();
    let o = scarceval(&["--json", "kappa", "--labels", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["kappa"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn agree_percentages() {
    let o = scarceval(&["agree", "--qs1", "76.85", "--qs2", "81.99"]);
    let out = stdout(&o);
    assert!(out.contains("93.31%") && out.contains("93.73%"), "{out}");
}

fn write_config(dir: &Path) -> String {
    let cfg = dir.join("scarceval.toml");
    let hist = dir.join("history.jsonl");
    std::fs::write(
        &cfg,
        format!("threshold = 80\nhistory_file = {:?}\n", hist.to_str().unwrap()),
    )
    .unwrap();
    cfg.to_str().unwrap().to_string()
}

#[test]
fn history_and_decide() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());

    let o = scarceval(&["--config-file", &cfg, "decide", "--project", "p1", "--scores", "85.2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let o = scarceval(&[
        "--config-file", &cfg, "history", "add", "--project", "p1", "--rater", "r1", "--score",
        "96.3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let o = scarceval(&[
        "--config-file", &cfg, "decide", "--project", "p1", "--scores", "85.2", "--confidence",
        "0.75", "--record-as", "r2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("[70.77, 100.00]") && out.contains("BORDERLINE_PASS"), "{out}");

    let o = scarceval(&["--config-file", &cfg, "--json", "history", "list", "--project", "p1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn history_import_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let csv = dir.path().join("scores.csv");
    let mut body = String::from("project_id,rater_id,score\n");
    for s in [80.0, 81.0, 82.0, 80.5, 81.5, 20.0] {
        body.push_str(&format!("p,r,{s}\n"));
    }
    std::fs::write(&csv, body).unwrap();
    let o = scarceval(&["--config-file", &cfg, "history", "import", "--input", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = scarceval(&["--config-file", &cfg, "--json", "history", "flag"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let flagged = v.as_array().unwrap();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["measurement"]["score"].as_f64(), Some(20.0));
}

#[test]
fn bad_score_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scores.csv");
    std::fs::write(&csv, "project_id,rater_id,score\np,r,80\np,r,abc\n").unwrap();
    let o = scarceval(&["tci", "--input", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn coverage_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("scenario.toml");
    std::fs::write(
        &sc,
        "true_mean = 80\ntrue_stddev = 5\nn_observations = 5\nconfidence = 0.9\ntrials = 20000\nseed = 7\nmethod = \"T_INTERVAL\"\n",
    )
    .unwrap();
    let o = scarceval(&["--json", "coverage", "--config", sc.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cov = v["empirical_coverage"].as_f64().unwrap();
    assert!((cov - 0.9).abs() < 0.01, "{cov}");

    let o = scarceval(&["sweep", "--config", sc.to_str().unwrap(), "--n", "2,5,30"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,coverage,mean_halfwidth,relative_margin"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn coverage_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("scenario.json");
    std::fs::write(
        &sc,
        r#"{"true_mean":80,"true_stddev":5,"n_observations":5,"confidence":0.9,"trials":0,"seed":1,"method":"T_INTERVAL"}"#,
    )
    .unwrap();
    let o = scarceval(&["coverage", "--config", sc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
