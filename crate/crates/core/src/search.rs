//! Randomized search for Cevian triples that violate the main or quadratic
//! inequality, with and without the ordering constraints
//! `Ca >= Cb >= Cc`, `b Cb >= max(a Ca, c Cc)`.
//!
//! Samples are drawn in fixed-size shards. Shard `k` uses a ChaCha8 stream
//! seeded with the run seed and stream number `k`, so the report depends only
//! on `(seed, config)` and never on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::expr;
use crate::inequality;
use crate::interval::Interval;
use crate::triangle::{
    self, CevianKind, CevianTriple, GeneralCevianParams, MixedWeights, SideTriple,
};

/// Samples per shard.
pub const SHARD_SIZE: u64 = 1 << 14;
/// Refined slacks below this are re-checked before being reported.
pub const RECHECK_THRESHOLD: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Unconstrained,
    OpenProblem,
}

/// Which Cevians are attached to each sampled triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CevianFamily {
    /// Independent random feet.
    General,
    Median,
    Altitude,
    Bisector,
    /// Random nonnegative mixture weights per sample.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub samples: u64,
    pub mode: SearchMode,
    pub family: CevianFamily,
    pub refine_steps: u32,
    pub record_top: usize,
    /// Feet are drawn from `(foot_margin, 1 - foot_margin)`.
    pub foot_margin: f64,
    pub workers: usize,
}

impl SearchConfig {
    pub fn new(mode: SearchMode, samples: u64, seed: u64) -> Self {
        Self {
            seed,
            samples,
            mode,
            family: CevianFamily::General,
            refine_steps: 200,
            record_top: 20,
            foot_margin: 1e-4,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.samples < 1 {
            return Err(SearchError::InvalidConfig("samples must be at least 1".into()));
        }
        if !(self.foot_margin > 0.0 && self.foot_margin < 0.5) {
            return Err(SearchError::InvalidConfig("foot_margin must lie in (0, 1/2)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub sides: SideTriple,
    pub feet: Option<GeneralCevianParams>,
    pub weights: Option<MixedWeights>,
    pub cevians: CevianTriple,
    pub slack1: f64,
    pub slack2: f64,
    pub constraints_ok: bool,
    pub min_slack: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchTotals {
    pub sampled: u64,
    /// Samples satisfying the ordering constraints.
    pub filtered: u64,
    /// Re-verified violations among the samples (before refinement).
    pub violating: u64,
    /// Negative binary64 slacks that failed re-verification.
    pub unconfirmed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub family: CevianFamily,
    pub seed: u64,
    /// The `record_top` most negative re-verified violations, refined.
    pub violations: Vec<CandidateRecord>,
    /// The `record_top` smallest `min_slack` values among samples that count
    /// for the mode, refined.
    pub near_misses: Vec<CandidateRecord>,
    pub totals: SearchTotals,
}

/// Uniform point of `{x <= y, x + y > 1}` in the unit square, returned as
/// the side triple `(x, y, 1)` together with the number of draws it took.
pub fn sample_triangle_counted<R: Rng + ?Sized>(rng: &mut R) -> (SideTriple, u32) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let x: f64 = rng.random();
        let y: f64 = rng.random();
        if x > 0.0 && x <= y && x + y > 1.0 {
            if let Ok(t) = triangle::validate_sides(x, y, 1.0) {
                return (t, attempts);
            }
        }
    }
}

pub fn sample_triangle<R: Rng + ?Sized>(rng: &mut R) -> SideTriple {
    sample_triangle_counted(rng).0
}

/// `Ca >= Cb >= Cc` and `b Cb >= max(a Ca, c Cc)`, non-strict.
pub fn constraint_filter(t: &SideTriple, cv: &CevianTriple) -> bool {
    let p = inequality::ordering_products(t, cv);
    cv.is_monotone() && p.b_prod >= p.a_prod && p.b_prod >= p.c_prod
}

fn family_cevians(
    t: &SideTriple,
    family: CevianFamily,
    feet: Option<&GeneralCevianParams>,
    weights: Option<&MixedWeights>,
) -> CevianTriple {
    match family {
        CevianFamily::General => triangle::general_cevians(t, feet.expect("general family has feet")),
        CevianFamily::Median => triangle::medians(t),
        CevianFamily::Altitude => triangle::altitudes(t),
        CevianFamily::Bisector => triangle::bisectors(t),
        CevianFamily::Mixed => triangle::mixed_cevians(t, weights.expect("mixed family has weights")),
    }
}

/// Builds the candidate record for one configuration.
pub fn evaluate_candidate(
    t: SideTriple,
    family: CevianFamily,
    feet: Option<GeneralCevianParams>,
    weights: Option<MixedWeights>,
) -> CandidateRecord {
    let cevians = family_cevians(&t, family, feet.as_ref(), weights.as_ref());
    let (s1, s2) = inequality::open_problem_slacks(&t, &cevians);
    CandidateRecord {
        sides: t,
        feet,
        weights,
        cevians,
        slack1: s1.value,
        slack2: s2.value,
        constraints_ok: constraint_filter(&t, &cevians),
        min_slack: s1.value.min(s2.value),
    }
}

fn family_of(c: &CandidateRecord) -> CevianFamily {
    match c.cevians.kind {
        CevianKind::General => CevianFamily::General,
        CevianKind::Median => CevianFamily::Median,
        CevianKind::Altitude => CevianFamily::Altitude,
        CevianKind::Bisector => CevianFamily::Bisector,
        CevianKind::Mixed => CevianFamily::Mixed,
    }
}

/// Interval enclosures of `(slack1, slack2)` at the candidate's exact
/// binary64 inputs.
pub fn enclose_slacks(c: &CandidateRecord) -> Option<(Interval, Interval)> {
    let s = c.sides.as_array().map(Interval::point);
    let l = match family_of(c) {
        CevianFamily::General => {
            let f = c.feet?.as_array().map(Interval::point);
            expr::general_cevians(s, f).ok()?
        }
        CevianFamily::Median => expr::medians(s).ok()?,
        CevianFamily::Altitude => expr::altitudes(s).ok()?,
        CevianFamily::Bisector => expr::bisectors(s).ok()?,
        CevianFamily::Mixed => {
            let w = c.weights?;
            let (m, h, b) = (expr::medians(s).ok()?, expr::altitudes(s).ok()?, expr::bisectors(s).ok()?);
            let (wa, wb, wg) = (
                Interval::point(w.alpha()),
                Interval::point(w.beta()),
                Interval::point(w.gamma()),
            );
            [0, 1, 2].map(|i| wa * m[i] + wb * h[i] + wg * b[i])
        }
    };
    expr::open_problem_slacks(s, l).ok()
}

/// True when a rigorous enclosure of either slack lies strictly below zero.
pub fn confirm_violation(c: &CandidateRecord) -> bool {
    match enclose_slacks(c) {
        Some((s1, s2)) => s1.hi() < 0.0 || s2.hi() < 0.0,
        None => false,
    }
}

struct Refiner {
    mode: SearchMode,
    family: CevianFamily,
    margin: f64,
    c: f64,
    weights: Option<MixedWeights>,
}

impl Refiner {
    fn params(c: &CandidateRecord) -> Vec<f64> {
        let s = c.sides;
        let mut p = vec![s.a() / s.c(), s.b() / s.c()];
        if let Some(f) = c.feet {
            p.extend(f.as_array());
        }
        p
    }

    fn evaluate(&self, p: &[f64]) -> Option<CandidateRecord> {
        let (x, y) = (p[0], p[1]);
        if !triangle::in_normalized_domain(x, y) {
            return None;
        }
        let t = triangle::validate_sides(x * self.c, y * self.c, self.c).ok()?;
        let feet = if self.family == CevianFamily::General {
            let ok = |v: f64| v >= self.margin && v <= 1.0 - self.margin;
            if !(ok(p[2]) && ok(p[3]) && ok(p[4])) {
                return None;
            }
            Some(GeneralCevianParams::new(p[2], p[3], p[4]).ok()?)
        } else {
            None
        };
        let cand = evaluate_candidate(t, self.family, feet, self.weights);
        if self.mode == SearchMode::OpenProblem && !cand.constraints_ok {
            return None;
        }
        Some(cand)
    }
}

/// Coordinate-wise pattern search over `(x, y[, ta, tb, tc])` that lowers
/// `min_slack`. Moves leaving the sampling domain, or (in open-problem mode)
/// breaking the ordering constraints, are rejected; the step halves after a
/// sweep without improvement.
pub fn refine(candidate: &CandidateRecord, steps: u32, mode: SearchMode, foot_margin: f64) -> CandidateRecord {
    let refiner = Refiner {
        mode,
        family: family_of(candidate),
        margin: foot_margin,
        c: candidate.sides.c(),
        weights: candidate.weights,
    };
    let mut best = candidate.clone();
    let mut p = Refiner::params(candidate);
    let mut step = 0.05;
    for _ in 0..steps {
        let mut improved = false;
        for i in 0..p.len() {
            for dir in [1.0, -1.0] {
                let mut q = p.clone();
                q[i] += dir * step;
                if let Some(cand) = refiner.evaluate(&q) {
                    if cand.min_slack < best.min_slack {
                        best = cand;
                        p = q;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-15 {
                break;
            }
        }
    }
    best
}

#[derive(Default)]
struct ShardResult {
    totals: SearchTotals,
    violations: Vec<CandidateRecord>,
    near_misses: Vec<CandidateRecord>,
}

fn by_min_slack(a: &CandidateRecord, b: &CandidateRecord) -> std::cmp::Ordering {
    a.min_slack.total_cmp(&b.min_slack)
}

fn keep_top(v: &mut Vec<CandidateRecord>, k: usize) {
    v.sort_by(by_min_slack);
    v.truncate(k);
}

fn run_shard(cfg: &SearchConfig, shard: u64) -> ShardResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(shard);
    let start = shard * SHARD_SIZE;
    let count = SHARD_SIZE.min(cfg.samples - start);
    let mut out = ShardResult::default();
    let m = cfg.foot_margin;
    for _ in 0..count {
        let t = sample_triangle(&mut rng);
        let feet = (cfg.family == CevianFamily::General).then(|| {
            let mut f = || m + (1.0 - 2.0 * m) * rng.random::<f64>();
            GeneralCevianParams::new(f(), f(), f()).expect("feet inside (0, 1)")
        });
        let weights = (cfg.family == CevianFamily::Mixed).then(|| loop {
            let w: [f64; 3] = rng.random();
            if let Ok(w) = MixedWeights::new(w[0], w[1], w[2]) {
                break w;
            }
        });
        let cand = evaluate_candidate(t, cfg.family, feet, weights);
        out.totals.sampled += 1;
        let counts = match cfg.mode {
            SearchMode::Unconstrained => true,
            SearchMode::OpenProblem => cand.constraints_ok,
        };
        if cand.constraints_ok {
            out.totals.filtered += 1;
        }
        if !counts {
            continue;
        }
        if cand.min_slack < 0.0 {
            if confirm_violation(&cand) {
                out.totals.violating += 1;
                out.violations.push(cand.clone());
                if out.violations.len() > 4 * cfg.record_top.max(1) {
                    keep_top(&mut out.violations, cfg.record_top);
                }
            } else {
                out.totals.unconfirmed += 1;
            }
        }
        out.near_misses.push(cand);
        if out.near_misses.len() > 4 * cfg.record_top.max(1) {
            keep_top(&mut out.near_misses, cfg.record_top);
        }
    }
    keep_top(&mut out.violations, cfg.record_top);
    keep_top(&mut out.near_misses, cfg.record_top);
    out
}

#[cfg(feature = "parallel")]
fn run_shards(cfg: &SearchConfig, shards: u64) -> Result<Vec<ShardResult>, SearchError> {
    use rayon::prelude::*;
    if cfg.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
        Ok(pool.install(|| (0..shards).into_par_iter().map(|s| run_shard(cfg, s)).collect()))
    } else {
        Ok((0..shards).map(|s| run_shard(cfg, s)).collect())
    }
}

#[cfg(not(feature = "parallel"))]
fn run_shards(cfg: &SearchConfig, shards: u64) -> Result<Vec<ShardResult>, SearchError> {
    Ok((0..shards).map(|s| run_shard(cfg, s)).collect())
}

/// Samples, filters, re-verifies and refines according to `cfg`.
pub fn search(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    cfg.validate()?;
    let shards = cfg.samples.div_ceil(SHARD_SIZE);
    let results = run_shards(cfg, shards)?;

    let mut totals = SearchTotals::default();
    let mut violations = Vec::new();
    let mut near_misses = Vec::new();
    for r in results {
        totals.sampled += r.totals.sampled;
        totals.filtered += r.totals.filtered;
        totals.violating += r.totals.violating;
        totals.unconfirmed += r.totals.unconfirmed;
        violations.extend(r.violations);
        near_misses.extend(r.near_misses);
    }
    keep_top(&mut violations, cfg.record_top);
    keep_top(&mut near_misses, cfg.record_top);

    let refine_one = |c: &CandidateRecord| refine(c, cfg.refine_steps, cfg.mode, cfg.foot_margin);
    let mut violations: Vec<CandidateRecord> = violations.iter().map(refine_one).collect();
    let near_misses: Vec<CandidateRecord> = near_misses.iter().map(refine_one).collect();
    // a refined near miss that dropped below zero is a new violation only if
    // it survives the rigorous re-check
    for c in &near_misses {
        if c.min_slack < RECHECK_THRESHOLD && confirm_violation(c) && !violations.contains(c) {
            violations.push(c.clone());
        }
    }
    violations.retain(confirm_violation);
    keep_top(&mut violations, cfg.record_top);

    Ok(SearchReport {
        mode: cfg.mode,
        family: cfg.family,
        seed: cfg.seed,
        violations,
        near_misses,
        totals,
    })
}
