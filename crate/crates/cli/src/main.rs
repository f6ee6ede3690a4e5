use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand};

use scarceval::config::{Config, CONFIG_ENV};
use scarceval::intervals::{ArfCoefficient, ArfRow, ScoreScale, SingleObservation};
use scarceval::irr::{
    cohen_kappa_frequencies, cohen_kappa_proportions, kappa_from_matrix, pairwise_agreement,
    KappaFrequencies, KappaProportions, RaterLabelMatrix,
};
use scarceval::mc::{
    coverage_to_csv, default_sweep_sizes, run_coverage, sweep_to_csv, width_vs_n_sweep,
    SimulationScenario,
};
use scarceval::report::EvaluationReport;
use scarceval::scorefile::{parse_score, parse_score_list, ScoreFile};
use scarceval::tdist::{t_quantile, DegreesOfFreedom, TCriticalQuery};
use scarceval::tqe::{
    arf_report, evaluate, flag_suspect_measurements, threshold_verdict, HistoryStore,
    QualityMeasurement, ThresholdPolicy,
};
use scarceval::Error;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 2;
const EXIT_VERDICT_FAIL: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// Confidence intervals and rater agreement for scarce quality scores.
#[derive(Debug, Parser)]
#[command(name = "scarceval", version)]
struct Cli {
    /// TOML settings (scale, confidence, threshold, history file).
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "PATH")]
    config_file: Option<PathBuf>,

    /// Print full-precision JSON instead of the 2-decimal text report.
    #[arg(long, global = true)]
    json: bool,

    /// Also print the formulas with the numbers substituted in.
    #[arg(long, global = true)]
    explain: bool,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interval from a single score and a fixed prior average.
    Arf(ArfArgs),
    /// Student's t interval from two or more scores.
    Tci(TciArgs),
    /// Critical value of the t distribution.
    Tcrit(TcritArgs),
    /// Cohen's kappa from proportions, frequencies, or a contingency table.
    Kappa(KappaArgs),
    /// Relative agreement between two scores.
    Agree(AgreeArgs),
    /// Evaluate new scores for a project against its stored history.
    Decide(DecideArgs),
    /// Inspect or extend the measurement history.
    History(HistoryArgs),
    /// Monte Carlo coverage of one scenario.
    Coverage(CoverageArgs),
    /// Mean half-width and coverage across sample sizes, as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct ArfArgs {
    #[arg(long)]
    y: String,
    #[arg(long = "prior")]
    prior: String,
    /// 1 - confidence; must be tabulated for the normal row.
    #[arg(long, conflicts_with = "k")]
    alpha: Option<String>,
    #[arg(long, default_value = "normal")]
    row: String,
    /// Explicit multiplier instead of a table lookup.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
}

#[derive(Debug, Args)]
struct TciArgs {
    /// Comma-separated scores, e.g. 76.85,81.99
    #[arg(long, conflicts_with = "input")]
    scores: Option<String>,
    /// CSV or JSON score file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Only use rows of this project from --input.
    #[arg(long, requires = "input")]
    project: Option<String>,
    #[arg(long)]
    confidence: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
}

#[derive(Debug, Args)]
struct TcritArgs {
    #[arg(long)]
    df: String,
    #[arg(long, group = "tail")]
    one_tail: Option<String>,
    #[arg(long, group = "tail")]
    two_tail: Option<String>,
    #[arg(long, group = "tail")]
    confidence: Option<String>,
}

#[derive(Debug, Args)]
struct KappaArgs {
    #[arg(long, requires = "pe", group = "form")]
    po: Option<String>,
    #[arg(long, requires = "po")]
    pe: Option<String>,
    #[arg(long, requires_all = ["fe", "total"], group = "form")]
    fo: Option<String>,
    #[arg(long)]
    fe: Option<String>,
    #[arg(long)]
    total: Option<String>,
    /// Rows separated by `;`, entries by `,`, e.g. "45,15;25,15".
    #[arg(long, group = "form")]
    matrix: Option<String>,
    /// CSV with a header and two label columns, one row per item.
    #[arg(long, group = "form")]
    labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AgreeArgs {
    #[arg(long)]
    qs1: String,
    #[arg(long)]
    qs2: String,
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[arg(long)]
    project: String,
    #[arg(long, conflicts_with = "input")]
    scores: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    history: Option<PathBuf>,
    #[arg(long)]
    confidence: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
    /// Append the new scores to the history under this rater id.
    #[arg(long, value_name = "RATER")]
    record_as: Option<String>,
}

#[derive(Debug, Args)]
struct HistoryArgs {
    #[arg(long)]
    history: Option<PathBuf>,
    #[command(subcommand)]
    action: HistoryAction,
}

#[derive(Debug, Subcommand)]
enum HistoryAction {
    /// Append one measurement.
    Add {
        #[arg(long)]
        project: String,
        #[arg(long)]
        rater: String,
        #[arg(long)]
        score: String,
        #[arg(long)]
        sample_size: Option<u64>,
        /// RFC 3339 timestamp; defaults to now.
        #[arg(long)]
        timestamp: Option<String>,
    },
    /// Append every row of a CSV or JSON score file.
    Import {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print stored measurements.
    List {
        #[arg(long)]
        project: Option<String>,
    },
    /// Print measurements flagged as suspect (outliers, odd sample sizes).
    Flag {
        #[arg(long)]
        project: Option<String>,
    },
}

#[derive(Debug, Args)]
struct CoverageArgs {
    /// Scenario file (.toml or .json).
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV row here as well.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated sample sizes; defaults to 2,3,5,10,30.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure tied to the flag that caused it.
struct Failure {
    flag: Option<&'static str>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { flag: None, error }
    }
}

trait FlagContext<T> {
    fn flag(self, flag: &'static str) -> Result<T, Failure>;
}

impl<T> FlagContext<T> for Result<T, Error> {
    fn flag(self, flag: &'static str) -> Result<T, Failure> {
        self.map_err(|error| Failure {
            flag: Some(flag),
            error,
        })
    }
}

fn num(flag: &'static str, s: &str) -> Result<f64, Failure> {
    parse_score(s).map_err(Error::Domain).flag(flag)
}

fn opt_num(flag: &'static str, s: &Option<String>) -> Result<Option<f64>, Failure> {
    s.as_deref().map(|v| num(flag, v)).transpose()
}

fn count(flag: &'static str, s: &str) -> Result<u64, Failure> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| Error::Domain(format!("`{s}` is not a non-negative integer")))
        .flag(flag)
}

struct Ctx {
    cfg: Config,
    json: bool,
    explain: bool,
}

impl Ctx {
    fn scale(&self) -> ScoreScale {
        self.cfg.scale
    }

    fn history_path(&self, explicit: &Option<PathBuf>) -> Result<PathBuf, Failure> {
        explicit
            .clone()
            .or_else(|| self.cfg.history_file.clone())
            .ok_or_else(|| {
                Error::Domain("no history file: pass --history or set history_file in the config".into())
            })
            .flag("--history")
    }

    fn print_report(&self, report: &EvaluationReport) -> Result<(), Failure> {
        if self.json {
            println!("{}", report.to_json()?);
        } else {
            print!("{}", report.render_text());
        }
        if self.explain {
            print!("{}", report.explain());
        }
        Ok(())
    }

    fn print_json(&self, v: &serde_json::Value) {
        println!("{}", serde_json::to_string_pretty(v).expect("values serialise"));
    }
}

fn verdict_exit(report: &EvaluationReport) -> u8 {
    match &report.verdict {
        Some(v) if v.kind.is_failing() => EXIT_VERDICT_FAIL,
        _ => EXIT_OK,
    }
}

fn cmd_arf(ctx: &Ctx, a: &ArfArgs) -> Result<u8, Failure> {
    let scale = ctx.scale();
    let y = num("--y", &a.y)?;
    let prior = num("--prior", &a.prior)?;
    scale.check("observation", y).flag("--y")?;
    scale.check("prior mean", prior).flag("--prior")?;
    let obs = SingleObservation::new(y, prior, scale)?;
    let coef = match (&a.k, &a.alpha) {
        (Some(k), _) => ArfCoefficient::explicit(num("--k", k)?).flag("--k")?,
        (None, Some(alpha)) => {
            let row: ArfRow = a.row.parse().flag("--row")?;
            ArfCoefficient::from_row(row, num("--alpha", alpha)?).flag("--alpha")?
        }
        (None, None) => {
            let row: ArfRow = a.row.parse().flag("--row")?;
            ArfCoefficient::for_confidence(row, ctx.cfg.confidence).flag("--alpha")?
        }
    };
    let threshold = opt_num("--threshold", &a.threshold)?.or(ctx.cfg.threshold);
    if let Some(t) = threshold {
        scale.check("threshold", t).flag("--threshold")?;
    }
    let mut report = arf_report(&obs, &coef, threshold)?;
    if let Some(t) = threshold {
        let policy = ThresholdPolicy::new(t, coef.confidence(), &scale).flag("--threshold")?;
        report.verdict = Some(threshold_verdict(&report.interval, report.mean, &policy));
    }
    ctx.print_report(&report)?;
    Ok(verdict_exit(&report))
}

fn load_scores(
    ctx: &Ctx,
    scores: &Option<String>,
    input: &Option<PathBuf>,
    project: Option<&str>,
) -> Result<Vec<f64>, Failure> {
    match (scores, input) {
        (Some(s), _) => {
            let v = parse_score_list(s).flag("--scores")?;
            for &x in &v {
                ctx.scale().check("score", x).flag("--scores")?;
            }
            Ok(v)
        }
        (None, Some(path)) => {
            let file = ScoreFile::load(path, &ctx.scale()).flag("--input")?;
            Ok(file
                .rows
                .iter()
                .filter(|r| project.is_none_or(|p| r.project_id == p))
                .map(|r| r.score)
                .collect())
        }
        (None, None) => Err(Error::Domain("give scores with --scores or --input".into())).flag("--scores"),
    }
}

fn cmd_tci(ctx: &Ctx, a: &TciArgs) -> Result<u8, Failure> {
    let scores = load_scores(ctx, &a.scores, &a.input, a.project.as_deref())?;
    if scores.len() < 2 {
        return Err(Error::Domain(format!(
            "a t interval needs at least 2 scores, got {}; use `arf` for a single score",
            scores.len()
        )))
        .flag("--scores");
    }
    let mut policy = ctx.cfg.policy();
    if let Some(c) = opt_num("--confidence", &a.confidence)? {
        policy.confidence = c;
    }
    if let Some(t) = opt_num("--threshold", &a.threshold)? {
        policy.pass_threshold = Some(t);
    }
    if let Err(e) = policy.threshold_policy() {
        let flag = if policy.confidence > 0.0 && policy.confidence < 1.0 {
            "--threshold"
        } else {
            "--confidence"
        };
        return Err(e).flag(flag);
    }
    let report = evaluate(&[], &scores, &policy).map_err(|e| match e {
        Error::Domain(_) => Failure {
            flag: Some("--confidence"),
            error: e,
        },
        other => other.into(),
    })?;
    ctx.print_report(&report)?;
    Ok(verdict_exit(&report))
}

fn cmd_tcrit(ctx: &Ctx, a: &TcritArgs) -> Result<u8, Failure> {
    let df = DegreesOfFreedom::from_f64(num("--df", &a.df)?).flag("--df")?;
    let query = match (&a.one_tail, &a.two_tail, &a.confidence) {
        (Some(q), _, _) => TCriticalQuery::one_tail(df, num("--one-tail", q)?).flag("--one-tail")?,
        (_, Some(q), _) => TCriticalQuery::two_tail(df, num("--two-tail", q)?).flag("--two-tail")?,
        (_, _, Some(c)) => {
            TCriticalQuery::confidence(df, num("--confidence", c)?).flag("--confidence")?
        }
        _ => {
            return Err(Error::Domain(
                "give one of --one-tail, --two-tail or --confidence".into(),
            ))
            .flag("--one-tail")
        }
    };
    let t = t_quantile(&query)?;
    if ctx.json {
        ctx.print_json(&serde_json::json!({
            "df": df.get(),
            "tail_probability": query.tail_probability,
            "interpretation": query.interpretation,
            "confidence_level": query.confidence_level(),
            "t": t,
        }));
    } else {
        println!("{t:.3}");
    }
    if ctx.explain {
        println!(
            "t such that P(T > t) = {} for T ~ t(df = {df}); full precision {t}",
            query.tail_probability
        );
    }
    Ok(EXIT_OK)
}

fn parse_matrix(s: &str) -> Result<RaterLabelMatrix, Failure> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|c| count("--matrix", c))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    RaterLabelMatrix::new(rows).flag("--matrix")
}

fn read_label_pairs(path: &Path) -> Result<RaterLabelMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(Error::from).flag("--labels")?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Domain("label file is empty".into()))
        .flag("--labels")?;
    if header.split(',').count() != 2 {
        return Err(Error::Parse {
            line: Some(1),
            message: "label file header must name exactly two rater columns".into(),
        })
        .flag("--labels");
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, line) in lines {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 || cols.iter().any(|c| c.is_empty()) {
            return Err(Error::Parse {
                line: Some(i + 1),
                message: format!("expected two labels, got `{line}`"),
            })
            .flag("--labels");
        }
        a.push(cols[0].to_string());
        b.push(cols[1].to_string());
    }
    RaterLabelMatrix::from_labels(&a, &b).flag("--labels")
}

fn cmd_kappa(ctx: &Ctx, a: &KappaArgs) -> Result<u8, Failure> {
    let (kappa, p_o, p_e) = if let (Some(po), Some(pe)) = (&a.po, &a.pe) {
        let p = KappaProportions::new(num("--po", po)?, num("--pe", pe)?).flag("--pe")?;
        (cohen_kappa_proportions(&p)?, p.p_o, p.p_e)
    } else if let (Some(fo), Some(fe), Some(total)) = (&a.fo, &a.fe, &a.total) {
        let f = KappaFrequencies::new(count("--fo", fo)?, num("--fe", fe)?, count("--total", total)?)
            .flag("--fe")?;
        let n = f.total as f64;
        (cohen_kappa_frequencies(&f)?, f.f_o as f64 / n, f.f_e / n)
    } else {
        let m = match (&a.matrix, &a.labels) {
            (Some(s), _) => parse_matrix(s)?,
            (_, Some(p)) => read_label_pairs(p)?,
            _ => {
                return Err(Error::Domain(
                    "give --po/--pe, --fo/--fe/--total, --matrix or --labels".into(),
                ))
                .flag("--matrix")
            }
        };
        let agreement = m.agreement().flag("--matrix")?;
        (kappa_from_matrix(&m).flag("--matrix")?, agreement.p_o, agreement.p_e)
    };
    if ctx.json {
        ctx.print_json(&serde_json::json!({ "kappa": kappa, "p_o": p_o, "p_e": p_e }));
    } else {
        println!("{}", trim_float(kappa));
    }
    if ctx.explain {
        println!("kappa = (p_o − p_e) / (1 − p_e) = ({p_o:.4} − {p_e:.4}) / (1 − {p_e:.4}) = {kappa:.4}");
    }
    Ok(EXIT_OK)
}

/// 2-decimal rendering without trailing zeros, e.g. `1`, `0.6`, `-0.07`.
fn trim_float(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn cmd_agree(ctx: &Ctx, a: &AgreeArgs) -> Result<u8, Failure> {
    let qs1 = num("--qs1", &a.qs1)?;
    let qs2 = num("--qs2", &a.qs2)?;
    let r = pairwise_agreement(qs1, qs2).flag("--qs1")?;
    if ctx.json {
        ctx.print_json(&serde_json::json!({ "qs1": qs1, "qs2": qs2, "agreement": r }));
    } else {
        println!(
            "QS2 agrees with {:.2}% of QS1; QS1 agrees with {:.2}% of QS2",
            r.second_of_first * 100.0,
            r.first_of_second * 100.0
        );
    }
    if ctx.explain {
        let d = (qs2 - qs1).abs();
        println!("1 − |{qs2} − {qs1}| / {qs1} = {:.4}", r.second_of_first);
        println!("1 − {d:.4} / {qs2} = {:.4}", r.first_of_second);
    }
    Ok(EXIT_OK)
}

fn cmd_decide(ctx: &Ctx, a: &DecideArgs) -> Result<u8, Failure> {
    let store = HistoryStore::open(ctx.history_path(&a.history)?);
    let history = store.load_project(&a.project).flag("--history")?;
    let scores = load_scores(ctx, &a.scores, &a.input, Some(&a.project))?;
    if scores.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 }).flag("--scores");
    }
    let mut policy = ctx.cfg.policy();
    if let Some(c) = opt_num("--confidence", &a.confidence)? {
        policy.confidence = c;
    }
    if let Some(t) = opt_num("--threshold", &a.threshold)? {
        policy.pass_threshold = Some(t);
    }
    policy.threshold_policy().flag("--threshold")?;
    let report = match evaluate(&history, &scores, &policy) {
        Err(Error::NoHistory) => return Err(Error::NoHistory).flag("--project"),
        Err(e @ (Error::UnsupportedAlpha { .. } | Error::Domain(_))) => return Err(e).flag("--confidence"),
        other => other?,
    };
    ctx.print_report(&report)?;
    if let Some(rater) = &a.record_as {
        let now = Utc::now();
        for &score in &scores {
            store.append(&QualityMeasurement {
                project_id: a.project.clone(),
                rater_id: rater.clone(),
                score,
                sample_size_of_evaluated_text: None,
                timestamp: now,
            })?;
        }
    }
    Ok(verdict_exit(&report))
}

fn cmd_history(ctx: &Ctx, a: &HistoryArgs) -> Result<u8, Failure> {
    let store = HistoryStore::open(ctx.history_path(&a.history)?);
    match &a.action {
        HistoryAction::Add {
            project,
            rater,
            score,
            sample_size,
            timestamp,
        } => {
            let score = num("--score", score)?;
            ctx.scale().check("score", score).flag("--score")?;
            let timestamp = match timestamp {
                Some(t) => DateTime::parse_from_rfc3339(t)
                    .map_err(|e| Error::Domain(format!("`{t}`: {e}")))
                    .flag("--timestamp")?
                    .with_timezone(&Utc),
                None => Utc::now(),
            };
            store.append(&QualityMeasurement {
                project_id: project.clone(),
                rater_id: rater.clone(),
                score,
                sample_size_of_evaluated_text: *sample_size,
                timestamp,
            })?;
        }
        HistoryAction::Import { input } => {
            let file = ScoreFile::load(input, &ctx.scale()).flag("--input")?;
            let now = Utc::now();
            let n = file.rows.len();
            for row in file.rows {
                store.append(&row.into_measurement(now))?;
            }
            if !ctx.json {
                println!("imported {n} measurements");
            }
        }
        HistoryAction::List { project } => {
            let all = match project {
                Some(p) => store.load_project(p),
                None => store.load(),
            }
            .flag("--history")?;
            if ctx.json {
                ctx.print_json(&serde_json::to_value(&all).expect("serialisable"));
            } else {
                for m in &all {
                    println!(
                        "{}\t{}\t{}\t{:.2}",
                        m.timestamp.to_rfc3339(),
                        m.project_id,
                        m.rater_id,
                        m.score
                    );
                }
            }
        }
        HistoryAction::Flag { project } => {
            let all = match project {
                Some(p) => store.load_project(p),
                None => store.load(),
            }
            .flag("--history")?;
            let flags = flag_suspect_measurements(&all, &ctx.cfg.suspect_config());
            if ctx.json {
                ctx.print_json(&serde_json::to_value(&flags).expect("serialisable"));
            } else {
                for f in &flags {
                    println!(
                        "{}\t{}\t{:.2}\t{}",
                        f.measurement.project_id,
                        f.measurement.rater_id,
                        f.measurement.score,
                        serde_json::to_string(&f.flag).expect("serialisable")
                    );
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_coverage(ctx: &Ctx, a: &CoverageArgs) -> Result<u8, Failure> {
    let scenario = SimulationScenario::load(&a.config).flag("--config")?;
    let r = run_coverage(&scenario).flag("--config")?;
    let csv = coverage_to_csv(&r)?;
    if let Some(path) = &a.csv {
        std::fs::write(path, &csv).map_err(Error::from).flag("--csv")?;
    }
    if ctx.json {
        ctx.print_json(&serde_json::to_value(&r).expect("serialisable"));
    } else {
        print!("{csv}");
    }
    if ctx.explain {
        println!(
            "{} of {} trials covered the true mean",
            r.covered_trials, r.trials
        );
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(ctx: &Ctx, a: &SweepArgs) -> Result<u8, Failure> {
    let base = SimulationScenario::load(&a.config).flag("--config")?;
    let sizes = match &a.n {
        Some(s) => s
            .split(',')
            .map(|v| count("--n", v).map(|n| n as usize))
            .collect::<Result<Vec<_>, _>>()?,
        None => default_sweep_sizes(),
    };
    let rows = width_vs_n_sweep(&base, &sizes).flag("--n")?;
    let csv = sweep_to_csv(&rows)?;
    if let Some(path) = &a.out {
        std::fs::write(path, &csv).map_err(Error::from).flag("--out")?;
    }
    if ctx.json {
        ctx.print_json(&serde_json::to_value(&rows).expect("serialisable"));
    } else {
        print!("{csv}");
    }
    Ok(EXIT_OK)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = Config::discover(cli.config_file.as_deref()).flag("--config-file")?;
    let ctx = Ctx {
        cfg,
        json: cli.json,
        explain: cli.explain,
    };
    match &cli.cmd {
        Command::Arf(a) => cmd_arf(&ctx, a),
        Command::Tci(a) => cmd_tci(&ctx, a),
        Command::Tcrit(a) => cmd_tcrit(&ctx, a),
        Command::Kappa(a) => cmd_kappa(&ctx, a),
        Command::Agree(a) => cmd_agree(&ctx, a),
        Command::Decide(a) => cmd_decide(&ctx, a),
        Command::History(a) => cmd_history(&ctx, a),
        Command::Coverage(a) => cmd_coverage(&ctx, a),
        Command::Sweep(a) => cmd_sweep(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { flag, error }) => {
            match flag {
                Some(f) => eprintln!("error: {f}: {error}"),
                None => eprintln!("error: {error}"),
            }
            ExitCode::from(if error.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            })
        }
    }
}
