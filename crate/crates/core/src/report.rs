//! Run configurations, manifests and the report documents written by the
//! command-line tool.
//!
//! Every report is a JSON object with a `manifest` member holding the fully
//! resolved [`RunConfig`]. Feeding that configuration back to [`execute`]
//! reproduces the report byte for byte once the `wall_time_secs` fields are
//! blanked with [`strip_timing`].

use std::fmt::Write as _;
use crate::clock::Stopwatch;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{self, CertificationTask, Certificate, CertifyError, ExcludedRegions, ProvenBox, UndecidedBox, CertStats};
use crate::inequality::{self, scale2};
use crate::interval::rounding;
use crate::search::{self, SearchConfig, SearchError, SearchMode, SearchReport};
use crate::triangle::{
    self, CevianKind, CevianTriple, GeneralCevianParams, MixedWeights, NormalizedTriangle,
    SideTriple, TriangleError,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Triangle(#[from] TriangleError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

/// Triangle given either as raw sides (any order) or as a normalized pair
/// `(x, y)` with `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleInput {
    Sides([f64; 3]),
    Normalized([f64; 2]),
}

impl TriangleInput {
    pub fn resolve(&self) -> Result<SideTriple, TriangleError> {
        match *self {
            TriangleInput::Sides([a, b, c]) => triangle::validate_sides(a, b, c),
            TriangleInput::Normalized([x, y]) => NormalizedTriangle::new(x, y)?.sides(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub triangle: TriangleInput,
    pub cevians: CevianKind,
    pub weights: Option<[f64; 3]>,
    pub feet: Option<[f64; 3]>,
    /// Relative tolerance, multiplied by the instance normalizer.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub task: CertificationTask,
    /// Include every proven box in the report.
    pub emit_proven: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub density: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "settings", rename_all = "snake_case")]
pub enum RunConfig {
    Verify(VerifyConfig),
    Certify(CertifyConfig),
    Search(SearchConfig),
    Table(TableConfig),
}

impl RunConfig {
    pub fn subcommand(&self) -> &'static str {
        match self {
            RunConfig::Verify(_) => "verify",
            RunConfig::Certify(_) => "certify",
            RunConfig::Search(_) => "search",
            RunConfig::Table(_) => "table",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            RunConfig::Search(s) => Some(s.seed),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: RunConfig,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub rounding: String,
    pub wall_time_secs: f64,
    /// Command-line arguments as given, when run from the command line.
    #[serde(default)]
    pub input: Vec<String>,
}

impl RunManifest {
    pub fn new(config: RunConfig, wall_time_secs: f64) -> Self {
        Self {
            subcommand: config.subcommand().to_owned(),
            seed: config.seed(),
            config,
            tool_version: TOOL_VERSION.to_owned(),
            rounding: rounding::ACTIVE_NAME.to_owned(),
            wall_time_secs,
            input: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedSlack {
    pub name: String,
    pub value: f64,
    /// Absolute tolerance applied to this slack.
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub manifest: RunManifest,
    pub sides: SideTriple,
    pub cevians: CevianTriple,
    /// Ordering constraints of the open question, for general Cevians.
    pub constraints_ok: Option<bool>,
    pub slacks: Vec<NamedSlack>,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub target: String,
    pub complete: bool,
    pub proven_count: usize,
    pub min_lower_bound: Option<f64>,
    pub undecided: Vec<UndecidedBox>,
    pub excluded: ExcludedRegions,
    pub stats: CertStats,
    pub proven: Option<Vec<ProvenBox>>,
}

impl CertificateSummary {
    pub fn from_certificate(c: &Certificate, emit_proven: bool) -> Self {
        Self {
            target: c.task.target.name().to_owned(),
            complete: c.is_complete(),
            proven_count: c.proven.len(),
            min_lower_bound: c.min_lower_bound(),
            undecided: c.undecided.clone(),
            excluded: c.excluded.clone(),
            stats: c.stats.clone(),
            proven: emit_proven.then(|| c.proven.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub manifest: RunManifest,
    /// `true` when the run stopped on the queue budget.
    pub budget_exceeded: bool,
    pub certificate: CertificateSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchFile {
    pub manifest: RunManifest,
    pub status: String,
    pub search: SearchReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub manifest: RunManifest,
    pub rows: usize,
    pub min_value: f64,
}

/// Outcome of [`execute`].
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Verify(VerifyReport),
    Certify(CertifyReport),
    Search(SearchFile),
    /// CSV text plus its manifest-bearing summary.
    Table(String, TableReport),
}

impl RunOutput {
    pub fn manifest(&self) -> &RunManifest {
        match self {
            RunOutput::Verify(r) => &r.manifest,
            RunOutput::Certify(r) => &r.manifest,
            RunOutput::Search(r) => &r.manifest,
            RunOutput::Table(_, r) => &r.manifest,
        }
    }

    pub fn manifest_mut(&mut self) -> &mut RunManifest {
        match self {
            RunOutput::Verify(r) => &mut r.manifest,
            RunOutput::Certify(r) => &mut r.manifest,
            RunOutput::Search(r) => &mut r.manifest,
            RunOutput::Table(_, r) => &mut r.manifest,
        }
    }

    /// Pretty JSON of the report document.
    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        match self {
            RunOutput::Verify(r) => serde_json::to_string_pretty(r),
            RunOutput::Certify(r) => serde_json::to_string_pretty(r),
            RunOutput::Search(r) => serde_json::to_string_pretty(r),
            RunOutput::Table(_, r) => serde_json::to_string_pretty(r),
        }
    }
}

fn named(name: &str, value: f64, tolerance: f64) -> NamedSlack {
    NamedSlack {
        name: name.to_owned(),
        value,
        tolerance,
        holds: value >= -tolerance,
    }
}

/// Every slack that applies to the triangle and Cevian family.
pub fn verify_slacks(t: &SideTriple, cv: &CevianTriple, rel_tol: f64) -> Vec<NamedSlack> {
    let tol2 = rel_tol * scale2(t, cv);
    let tol3 = tol2 * t.c();
    let mut out = Vec::new();
    let main = inequality::slack_main(t, cv).value;
    let quad = inequality::slack_quadratic(t, cv).value;
    if cv.kind == CevianKind::General {
        out.push(named("open_problem_1", main, tol2));
        out.push(named("open_problem_2", quad, tol3));
        return out;
    }
    out.push(named("main", main, tol2));
    out.push(named("quadratic", quad, tol3));
    match cv.kind {
        CevianKind::Median => {
            if let Ok(r) = inequality::key_system_residuals(t, cv) {
                for s in r {
                    out.push(named(&s.name, s.value, tol2));
                }
            }
            if let Ok(s) = inequality::lemma_scalene_slack(t, cv) {
                out.push(named(&s.name, s.value, tol2));
            }
            let p = inequality::ordering_products(t, cv);
            out.push(named("b_dominance", p.dominance_slack(), tol2));
        }
        CevianKind::Bisector => {
            let p = inequality::ordering_products(t, cv);
            out.push(named("b_dominance", p.dominance_slack(), tol2));
            let r = inequality::bisector_ratio_slack(t);
            out.push(named(&r.name, r.value, rel_tol));
            let ch = inequality::bisector_chain_slack(t);
            out.push(named(&ch.name, ch.value, rel_tol * t.c().sqrt() * cv.lc));
        }
        CevianKind::Altitude => {
            let r = inequality::altitude_reduced_slack(t);
            out.push(named(&r.name, r.value, rel_tol * t.c()));
            let g = inequality::altitude_am_gm_slack(t);
            out.push(named(&g.name, g.value, rel_tol));
        }
        CevianKind::Mixed | CevianKind::General => {}
    }
    out
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, RunError> {
    let start = Stopwatch::start();
    let t = cfg.triangle.resolve()?;
    let cv = match cfg.cevians {
        CevianKind::Median => triangle::medians(&t),
        CevianKind::Altitude => triangle::altitudes(&t),
        CevianKind::Bisector => triangle::bisectors(&t),
        CevianKind::Mixed => {
            let [a, b, g] = cfg
                .weights
                .ok_or_else(|| RunError::Config("mixed Cevians need --weights".into()))?;
            triangle::mixed_cevians(&t, &MixedWeights::new(a, b, g)?)
        }
        CevianKind::General => {
            let [a, b, c] = cfg
                .feet
                .ok_or_else(|| RunError::Config("general Cevians need --feet".into()))?;
            triangle::general_cevians(&t, &GeneralCevianParams::new(a, b, c)?)
        }
    };
    let slacks = verify_slacks(&t, &cv, cfg.tolerance);
    let all_hold = slacks.iter().all(|s| s.holds);
    Ok(VerifyReport {
        constraints_ok: (cv.kind == CevianKind::General).then(|| search::constraint_filter(&t, &cv)),
        sides: t,
        cevians: cv,
        slacks,
        all_hold,
        manifest: RunManifest::new(RunConfig::Verify(cfg.clone()), start.secs()),
    })
}

pub fn run_certify(cfg: &CertifyConfig) -> Result<CertifyReport, RunError> {
    let start = Stopwatch::start();
    let (cert, budget_exceeded) = match certify::certify(&cfg.task) {
        Ok(c) => (c, false),
        Err(CertifyError::BudgetExceeded { partial, .. }) => (*partial, true),
        Err(e) => return Err(e.into()),
    };
    Ok(CertifyReport {
        budget_exceeded,
        certificate: CertificateSummary::from_certificate(&cert, cfg.emit_proven),
        manifest: RunManifest::new(RunConfig::Certify(cfg.clone()), start.secs()),
    })
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchFile, RunError> {
    let start = Stopwatch::start();
    let report = search::search(cfg)?;
    let status = match (cfg.mode, report.violations.is_empty()) {
        (SearchMode::Unconstrained, false) => "violations found",
        (SearchMode::Unconstrained, true) => "no violations found",
        (SearchMode::OpenProblem, true) => "no violations (consistent with open status)",
        (SearchMode::OpenProblem, false) => "violation found — re-verified",
    };
    Ok(SearchFile {
        status: status.to_owned(),
        search: report,
        manifest: RunManifest::new(RunConfig::Search(cfg.clone()), start.secs()),
    })
}

/// Grid `{k / (density - 1)}^2` restricted to the normalized domain.
pub fn table_rows(density: usize) -> Result<Vec<(f64, f64, f64)>, RunError> {
    if density < 2 {
        return Err(RunError::Config("grid density must be at least 2".into()));
    }
    let step = |k: usize| k as f64 / (density - 1) as f64;
    let mut rows = Vec::new();
    for i in 0..density {
        for j in 0..density {
            let (x, y) = (step(i), step(j));
            if let Ok(f) = inequality::normalized_slack_xy(x, y) {
                rows.push((x, y, f));
            }
        }
    }
    Ok(rows)
}

pub fn table_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut s = String::from("x,y,F\n");
    for (x, y, f) in rows {
        let _ = writeln!(s, "{x},{y},{f}");
    }
    s
}

pub fn run_table(cfg: &TableConfig) -> Result<(String, TableReport), RunError> {
    let start = Stopwatch::start();
    let rows = table_rows(cfg.density)?;
    let min_value = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    Ok((
        table_csv(&rows),
        TableReport {
            rows: rows.len(),
            min_value,
            manifest: RunManifest::new(RunConfig::Table(cfg.clone()), start.secs()),
        },
    ))
}

pub fn execute(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    Ok(match cfg {
        RunConfig::Verify(c) => RunOutput::Verify(run_verify(c)?),
        RunConfig::Certify(c) => RunOutput::Certify(run_certify(c)?),
        RunConfig::Search(c) => RunOutput::Search(run_search(c)?),
        RunConfig::Table(c) => {
            let (csv, r) = run_table(c)?;
            RunOutput::Table(csv, r)
        }
    })
}

/// Sets every `wall_time_secs` member to zero, recursively.
pub fn strip_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map.iter_mut() {
                if k == "wall_time_secs" {
                    *val = serde_json::Value::from(0.0);
                } else {
                    strip_timing(val);
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

/// Report text with timing blanked, for byte comparison.
pub fn canonical_report(json: &str) -> Result<String, serde_json::Error> {
    let mut v: serde_json::Value = serde_json::from_str(json)?;
    strip_timing(&mut v);
    serde_json::to_string_pretty(&v)
}

pub fn read_manifest(report_json: &str) -> Result<RunManifest, RunError> {
    let v: serde_json::Value = serde_json::from_str(report_json)?;
    let m = v
        .get("manifest")
        .cloned()
        .ok_or_else(|| RunError::Config("report has no manifest".into()))?;
    Ok(serde_json::from_value(m)?)
}

/// Reads the manifest of a report document and re-runs it, keeping the
/// original input echo.
pub fn replay(report_json: &str) -> Result<RunOutput, RunError> {
    let manifest = read_manifest(report_json)?;
    let mut out = execute(&manifest.config)?;
    out.manifest_mut().input = manifest.input;
    Ok(out)
}
