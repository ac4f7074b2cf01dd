//! `cevian`: verify, certify, search and tabulate the side-weighted Cevian
//! inequalities.
//!
//! Exit codes:
//!
//! | subcommand | 0 | 1 | 2 | 3 |
//! |---|---|---|---|---|
//! | verify | all slacks hold | some slack fails | bad input | |
//! | certify | no undecided boxes | undecided boxes remain | bad input | queue budget exceeded |
//! | search (unconstrained) | violations found | none found | bad input | |
//! | search (open-problem) | always | | bad input | |
//! | table | written | | bad density | |
//! | replay | report reproduced | report differs | bad input | |

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cevian_core::certify::{CertificationTask, Target};
use cevian_core::report::{
    self, CertifyConfig, RunConfig, RunError, RunOutput, TableConfig, TriangleInput, VerifyConfig,
};
use cevian_core::search::{CevianFamily, SearchConfig, SearchMode};
use cevian_core::triangle::CevianKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cevian", version, about = "Side-weighted median and Cevian inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every applicable slack for one triangle.
    Verify(VerifyArgs),
    /// Interval branch-and-bound certification over the normalized domain.
    Certify(CertifyArgs),
    /// Seeded counterexample search over Cevian triples.
    Search(SearchArgs),
    /// CSV grid of the normalized main slack F(x, y).
    Table(TableArgs),
    /// Re-run the configuration stored in a report and compare.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Median,
    Altitude,
    Bisector,
    Mixed,
    General,
}

impl From<KindArg> for CevianKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Median => CevianKind::Median,
            KindArg::Altitude => CevianKind::Altitude,
            KindArg::Bisector => CevianKind::Bisector,
            KindArg::Mixed => CevianKind::Mixed,
            KindArg::General => CevianKind::General,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Unconstrained,
    OpenProblem,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    General,
    Median,
    Altitude,
    Bisector,
    Mixed,
}

impl From<FamilyArg> for CevianFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::General => CevianFamily::General,
            FamilyArg::Median => CevianFamily::Median,
            FamilyArg::Altitude => CevianFamily::Altitude,
            FamilyArg::Bisector => CevianFamily::Bisector,
            FamilyArg::Mixed => CevianFamily::Mixed,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TriangleArgs {
    /// Side lengths in any order.
    #[arg(long, value_name = "A,B,C", value_parser = parse_list::<3>)]
    sides: Option<[f64; 3]>,
    /// Normalized pair with 0 < x <= y <= 1, x + y > 1 (implies c = 1).
    #[arg(long, value_name = "X,Y", value_parser = parse_list::<2>)]
    normalized: Option<[f64; 2]>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    triangle: TriangleArgs,
    #[arg(long, value_enum, default_value = "median")]
    cevians: KindArg,
    /// Nonnegative mixing weights for median, altitude, bisector.
    #[arg(long, value_name = "W1,W2,W3", value_parser = parse_list::<3>)]
    weights: Option<[f64; 3]>,
    /// Foot fractions in (0, 1) for general Cevians.
    #[arg(long, value_name = "TA,TB,TC", value_parser = parse_list::<3>)]
    feet: Option<[f64; 3]>,
    /// Relative tolerance, scaled by c * l_c (and by c again for cubic slacks).
    #[arg(long, default_value_t = report::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CertifyArgs {
    /// main-median, quadratic-median, key-system, altitude-reduced or scalene-lemma.
    #[arg(long, value_parser = parse_target)]
    target: Target,
    /// Degeneracy buffer: boxes keep x >= mu and x + y >= 1 + mu.
    #[arg(long, default_value_t = CertificationTask::DEFAULT_MU)]
    mu: f64,
    /// Half-width of the excluded corner [1 - delta, 1]^2; 0 disables it.
    #[arg(long, default_value_t = CertificationTask::DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = CertificationTask::DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    #[arg(long, default_value_t = CertificationTask::DEFAULT_MIN_BOX_WIDTH)]
    min_width: f64,
    /// Largest number of boxes allowed in one level of the work queue.
    #[arg(long, default_value_t = CertificationTask::DEFAULT_MAX_QUEUE)]
    max_queue: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// List every proven box in the report.
    #[arg(long)]
    emit_proven: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "unconstrained")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "general")]
    family: FamilyArg,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, env = "CEVIAN_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    refine_steps: u32,
    #[arg(long, default_value_t = 20)]
    record_top: usize,
    /// Feet are drawn from (margin, 1 - margin).
    #[arg(long, default_value_t = 1e-4)]
    foot_margin: f64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TableArgs {
    /// Grid points per axis; coordinates are k / (density - 1).
    #[arg(long, default_value_t = 21)]
    density: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Write the JSON manifest here (default: standard error).
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Report produced by an earlier run.
    input: PathBuf,
    /// Write the regenerated report here.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

fn parse_target(s: &str) -> Result<Target, String> {
    Target::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Target::ALL.iter().map(|t| t.name()).collect();
        format!("unknown target `{s}` (expected one of: {})", names.join(", "))
    })
}

/// Parses `N` comma-separated numbers.
fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let n = v.len();
    v.try_into().map_err(|_| format!("expected {N} comma-separated numbers, got {n}"))
}

fn to_config(cmd: &Command) -> Option<RunConfig> {
    Some(match cmd {
        Command::Verify(a) => {
            let triangle = match (a.triangle.sides, a.triangle.normalized) {
                (Some(s), _) => TriangleInput::Sides(s),
                (None, Some(n)) => TriangleInput::Normalized(n),
                (None, None) => return None,
            };
            RunConfig::Verify(VerifyConfig {
                triangle,
                cevians: a.cevians.into(),
                weights: a.weights,
                feet: a.feet,
                tolerance: a.tolerance,
            })
        }
        Command::Certify(a) => RunConfig::Certify(CertifyConfig {
            task: CertificationTask {
                target: a.target,
                mu: a.mu,
                delta: a.delta,
                max_depth: a.max_depth,
                min_box_width: a.min_width,
                max_queue: a.max_queue,
                workers: a.workers,
            },
            emit_proven: a.emit_proven,
        }),
        Command::Search(a) => {
            let mode = match a.mode {
                ModeArg::Unconstrained => SearchMode::Unconstrained,
                ModeArg::OpenProblem => SearchMode::OpenProblem,
            };
            let mut cfg = SearchConfig::new(mode, a.samples, a.seed);
            cfg.family = a.family.into();
            cfg.refine_steps = a.refine_steps;
            cfg.record_top = a.record_top;
            cfg.foot_margin = a.foot_margin;
            cfg.workers = a.workers;
            RunConfig::Search(cfg)
        }
        Command::Table(a) => RunConfig::Table(TableConfig { density: a.density }),
        Command::Replay(_) => return None,
    })
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            // a closed pipe downstream is not an error
            let _ = writeln!(io::stdout(), "{text}");
            Ok(())
        }
    }
}

/// Exit code of a finished run, per the table in the crate docs.
fn exit_code(out: &RunOutput) -> u8 {
    match out {
        RunOutput::Verify(r) => u8::from(!r.all_hold),
        RunOutput::Certify(r) if r.budget_exceeded => 3,
        RunOutput::Certify(r) => u8::from(!r.certificate.complete),
        RunOutput::Search(r) => match r.search.mode {
            SearchMode::Unconstrained => u8::from(r.search.violations.is_empty()),
            SearchMode::OpenProblem => 0,
        },
        RunOutput::Table(..) => 0,
    }
}

fn summary(out: &RunOutput) -> String {
    match out {
        RunOutput::Verify(r) => {
            let failing: Vec<_> = r.slacks.iter().filter(|s| !s.holds).map(|s| s.name.as_str()).collect();
            if failing.is_empty() {
                format!("verify: all {} slacks hold", r.slacks.len())
            } else {
                format!("verify: failing slacks: {}", failing.join(", "))
            }
        }
        RunOutput::Certify(r) => format!(
            "certify {}: {} proven, {} undecided{}",
            r.certificate.target,
            r.certificate.proven_count,
            r.certificate.undecided.len(),
            if r.budget_exceeded { " (queue budget exceeded)" } else { "" }
        ),
        RunOutput::Search(r) => format!(
            "search: {}; {} sampled, {} violating",
            r.status, r.search.totals.sampled, r.search.totals.violating
        ),
        RunOutput::Table(_, r) => format!("table: {} rows, min F = {}", r.rows, r.min_value),
    }
}

fn emit(out: &RunOutput, report: Option<&Path>) -> Result<(), String> {
    let json = out.to_json().map_err(|e| e.to_string())?;
    if report.is_some() {
        write_or_print(report, &json)?;
        eprintln!("{}", summary(out));
    } else {
        write_or_print(None, &json)?;
    }
    Ok(())
}

/// Argument echo for the manifest, without output destinations so that
/// identical runs produce identical reports.
fn echo_args(argv: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut skip = false;
    for a in argv {
        if std::mem::take(&mut skip) {
            continue;
        }
        match a.as_str() {
            "--report" | "--output" => skip = true,
            s if s.starts_with("--report=") || s.starts_with("--output=") => {}
            _ => out.push(a),
        }
    }
    out
}

fn run(cli: Cli, argv: Vec<String>) -> Result<u8, (u8, String)> {
    let bad = |e: RunError| (2u8, e.to_string());
    if let Command::Replay(a) = &cli.command {
        let original = fs::read_to_string(&a.input)
            .map_err(|e| (2, format!("cannot read {}: {e}", a.input.display())))?;
        let out = report::replay(&original).map_err(bad)?;
        let json = out.to_json().map_err(|e| (2, e.to_string()))?;
        if let Some(p) = &a.report {
            fs::write(p, &json).map_err(|e| (2, format!("cannot write {}: {e}", p.display())))?;
        }
        let same = report::canonical_report(&original).map_err(|e| (2, e.to_string()))?
            == report::canonical_report(&json).map_err(|e| (2, e.to_string()))?;
        println!("replay: {}", if same { "reproduced" } else { "differs" });
        return Ok(u8::from(!same));
    }

    let cfg = to_config(&cli.command).ok_or((2, "malformed arguments".to_owned()))?;
    let mut out = report::execute(&cfg).map_err(bad)?;
    out.manifest_mut().input = echo_args(argv);
    match (&cli.command, &out) {
        (Command::Table(a), RunOutput::Table(csv, r)) => {
            match &a.output {
                Some(p) => fs::write(p, csv).map_err(|e| (2, format!("cannot write {}: {e}", p.display())))?,
                None => {
                    let _ = io::stdout().write_all(csv.as_bytes());
                }
            }
            let json = serde_json::to_string_pretty(r).map_err(|e| (2, e.to_string()))?;
            match &a.report {
                Some(p) => fs::write(p, json).map_err(|e| (2, format!("cannot write {}: {e}", p.display())))?,
                None => eprintln!("{json}"),
            }
        }
        (Command::Verify(VerifyArgs { output, .. }), _)
        | (Command::Certify(CertifyArgs { output, .. }), _)
        | (Command::Search(SearchArgs { output, .. }), _) => {
            emit(&out, output.report.as_deref()).map_err(|e| (2, e))?
        }
        _ => unreachable!("replay handled above"),
    }
    Ok(exit_code(&out))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
