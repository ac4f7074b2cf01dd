//! Interval branch-and-bound certification of the normalized inequalities.
//!
//! The working domain is
//! `W(mu, delta) = {mu <= x <= y <= 1, x + y >= 1 + mu} \ [1 - delta, 1]^2`.
//! A box is proven once a rigorous lower bound of the target over
//! `box ∩ W` is strictly positive; otherwise it is bisected along its wider
//! side. The second key-system residual vanishes on the whole automedian
//! curve `2y^2 = x^2 + 1`; there it is bounded below by zero through an
//! exact factorization with a certified positive cofactor.
//!
//! Boxes are processed one depth level at a time and each level keeps its
//! input order, so the certificate does not depend on how many workers
//! process a level.

pub mod corner;
pub mod expr;
pub mod sampling;

use crate::clock::Stopwatch;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inequality;
use crate::interval::{rounding::active as rnd, Box2, Interval, IntervalError};
use crate::triangle::in_normalized_domain;
use corner::CornerReport;
use expr::{Dual, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Two-variable main median inequality.
    MainMedian,
    /// Quadratic median inequality at `c = 1`.
    QuadraticMedian,
    /// Minimum of the three key-system residuals at `c = 1`.
    KeySystem,
    /// `xy + x/y + y/x - x - y - 1`.
    AltitudeReduced,
    /// Scalene lemma slack at `c = 1`.
    ScaleneLemma,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::MainMedian,
        Target::QuadraticMedian,
        Target::KeySystem,
        Target::AltitudeReduced,
        Target::ScaleneLemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::MainMedian => "main-median",
            Target::QuadraticMedian => "quadratic-median",
            Target::KeySystem => "key-system",
            Target::AltitudeReduced => "altitude-reduced",
            Target::ScaleneLemma => "scalene-lemma",
        }
    }

    pub fn from_name(name: &str) -> Option<Target> {
        Target::ALL.into_iter().find(|t| t.name() == name)
    }

    fn components(self) -> usize {
        match self {
            Target::KeySystem => 3,
            _ => 1,
        }
    }

    fn eval_component<T: Scalar>(self, i: usize, x: T, y: T) -> Result<T, IntervalError> {
        match self {
            Target::MainMedian => expr::main_median(x, y),
            Target::QuadraticMedian => expr::quadratic_median(x, y),
            Target::KeySystem => expr::key_system_component(i, x, y),
            Target::AltitudeReduced => expr::altitude_reduced(x, y),
            Target::ScaleneLemma => expr::scalene_lemma(x, y),
        }
    }

    /// Binary64 value at a domain point, computed through the triangle
    /// kernel rather than the expressions above.
    pub fn point_value(self, x: f64, y: f64) -> Option<f64> {
        let v = match self {
            Target::MainMedian => inequality::normalized_slack_xy(x, y),
            Target::QuadraticMedian => inequality::normalized_quadratic(x, y),
            Target::KeySystem => {
                inequality::normalized_key_system(x, y).map(|r| r[0].min(r[1]).min(r[2]))
            }
            Target::AltitudeReduced => inequality::normalized_altitude(x, y),
            Target::ScaleneLemma => inequality::normalized_scalene_lemma(x, y),
        };
        v.ok()
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationTask {
    pub target: Target,
    /// Degeneracy buffer.
    pub mu: f64,
    /// Half-width of the excluded equality corner; `0` disables it.
    pub delta: f64,
    pub max_depth: u32,
    pub min_box_width: f64,
    /// Largest number of boxes allowed in one level of the work queue.
    pub max_queue: usize,
    pub workers: usize,
}

impl CertificationTask {
    pub const DEFAULT_MU: f64 = 1e-6;
    pub const DEFAULT_DELTA: f64 = 1e-3;
    pub const DEFAULT_MAX_DEPTH: u32 = 60;
    pub const DEFAULT_MIN_BOX_WIDTH: f64 = 1e-9;
    pub const DEFAULT_MAX_QUEUE: usize = 4_000_000;

    pub fn new(target: Target) -> Self {
        Self {
            target,
            mu: Self::DEFAULT_MU,
            delta: Self::DEFAULT_DELTA,
            max_depth: Self::DEFAULT_MAX_DEPTH,
            min_box_width: Self::DEFAULT_MIN_BOX_WIDTH,
            max_queue: Self::DEFAULT_MAX_QUEUE,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        let bad = |what: &str| Err(CertifyError::InvalidTask(what.to_owned()));
        if !(self.mu > 0.0 && self.mu < 0.25) {
            return bad("mu must lie in (0, 1/4)");
        }
        if !(self.delta >= 0.0 && self.delta < 0.5) {
            return bad("delta must lie in [0, 1/2)");
        }
        if self.max_depth < 1 {
            return bad("max_depth must be at least 1");
        }
        if !(self.min_box_width >= 0.0) {
            return bad("min_box_width must be nonnegative");
        }
        if self.max_queue == 0 {
            return bad("max_queue must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenBox {
    pub region: Box2,
    pub lower_bound: f64,
    /// Bound obtained from the automedian factorization; `lower_bound` may
    /// then be zero, since the residual vanishes on that curve.
    #[serde(default)]
    pub factored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UndecidedBox {
    pub region: Box2,
    pub depth: u32,
    pub enclosure: Interval,
}

/// Dense binary64 sampling of the target inside the excluded corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerSampling {
    pub grid: usize,
    pub points: usize,
    pub min_value: f64,
    pub min_at: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedRegions {
    pub mu: f64,
    pub delta: f64,
    /// `None` when `delta == 0`.
    pub corner: Option<Box2>,
    /// Isosceles-edge argument, reported for the main median target.
    pub corner_edges: Option<CornerReport>,
    pub corner_sampling: Option<CornerSampling>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertStats {
    pub boxes_processed: u64,
    pub boxes_discarded: u64,
    pub max_depth_reached: u32,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub task: CertificationTask,
    pub proven: Vec<ProvenBox>,
    pub undecided: Vec<UndecidedBox>,
    pub excluded: ExcludedRegions,
    pub stats: CertStats,
}

impl Certificate {
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }

    /// Smallest certified lower bound over all proven boxes.
    pub fn min_lower_bound(&self) -> Option<f64> {
        self.proven.iter().map(|p| p.lower_bound).reduce(f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("invalid certification task: {0}")]
    InvalidTask(String),
    #[error("work queue exceeded {limit} boxes at depth {depth}")]
    BudgetExceeded {
        limit: usize,
        depth: u32,
        partial: Box<Certificate>,
    },
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Shrinks `b` to a box that still contains `b ∩ W(mu, 0)`, or `None` if
/// the intersection is empty.
pub fn clip_to_domain(b: &Box2, mu: f64) -> Option<Box2> {
    let one_mu = rnd::add(1.0, mu).0;
    let mut xlo = b.x.lo().max(mu);
    let mut xhi = b.x.hi().min(1.0);
    let mut ylo = b.y.lo();
    let yhi = b.y.hi().min(1.0);
    for _ in 0..2 {
        xhi = xhi.min(yhi);
        ylo = ylo.max(xlo);
        ylo = ylo.max(rnd::sub(one_mu, xhi).0);
        xlo = xlo.max(rnd::sub(one_mu, yhi).0);
    }
    if xlo > xhi || ylo > yhi {
        return None;
    }
    // every point of the clipped box could still violate x + y >= 1 + mu
    if rnd::add(xhi, yhi).1 < one_mu {
        return None;
    }
    Some(Box2::new(Interval::new(xlo, xhi).ok()?, Interval::new(ylo, yhi).ok()?))
}

fn enclose_component(target: Target, i: usize, b: &Box2) -> Result<Interval, IntervalError> {
    let d = target.eval_component(i, Dual::var_x(b.x), Dual::var_y(b.y))?;
    let natural = d.value;
    let Some([gx, gy]) = d.grad else {
        return Ok(natural);
    };
    if !(gx.is_finite() && gy.is_finite()) {
        return Ok(natural);
    }
    // mean-value form around the box centre
    let (cx, cy) = (b.x.mid(), b.y.mid());
    let centre = target.eval_component(i, Interval::point(cx), Interval::point(cy))?;
    let mv = centre + gx * (b.x - Interval::point(cx)) + gy * (b.y - Interval::point(cy));
    Ok(natural.intersect(&mv).unwrap_or(natural))
}

/// Lower bound of the automedian residual from its factored form, valid on
/// `b ∩ W(mu, 0)`; `None` when the cofactor is not provably positive.
fn automedian_bound(b: &Box2, mu: f64) -> Option<f64> {
    let s = b.x + b.y - Interval::point(1.0);
    let s = Interval::new(s.lo().max(mu), s.hi().max(mu)).ok()?;
    let t = expr::automedian_cofactor(b.x, b.y, s).ok()?;
    if !(t.lo() > 0.0) {
        return None;
    }
    let u2 = expr::automedian_defect(b.x, b.y).square();
    Some(if u2.lo() > 0.0 { rnd::mul(u2.lo(), t.lo()).0.max(0.0) } else { 0.0 })
}

/// Enclosure of the target over a clipped box, and whether the box is
/// proven. A box is proven when every component has a positive lower bound,
/// except that the automedian key-system residual may instead be bounded
/// below by zero through its factored form.
fn bound_box(target: Target, clipped: &Box2, mu: f64) -> Result<(Interval, bool, bool), IntervalError> {
    let mut acc: Option<Interval> = None;
    let mut proven = true;
    let mut factored = false;
    for i in 0..target.components() {
        let mut e = enclose_component(target, i, clipped)?;
        let mut ok = e.lo() > 0.0;
        if !ok && target == Target::KeySystem && i == expr::AUTOMEDIAN_COMPONENT {
            if let Some(lb) = automedian_bound(clipped, mu) {
                e = Interval::new(e.lo().max(lb), e.hi().max(lb))?;
                ok = true;
                factored = true;
            }
        }
        proven &= ok;
        acc = Some(acc.map_or(e, |a| a.min(e)));
    }
    Ok((acc.expect("at least one component"), proven, factored))
}

/// Rigorous enclosure of the target over `b ∩ W(mu, 0)`: the natural
/// interval extension intersected with the mean-value form.
pub fn eval_target_interval(target: Target, b: &Box2, mu: f64) -> Result<Interval, IntervalError> {
    let clipped = clip_to_domain(b, mu).ok_or(IntervalError::EmptyIntersection)?;
    Ok(bound_box(target, &clipped, mu)?.0)
}

/// Natural interval extension only; inclusion isotone.
pub fn eval_target_natural(target: Target, b: &Box2, mu: f64) -> Result<Interval, IntervalError> {
    let clipped = clip_to_domain(b, mu).ok_or(IntervalError::EmptyIntersection)?;
    let mut acc: Option<Interval> = None;
    for i in 0..target.components() {
        let e = target.eval_component(i, clipped.x, clipped.y)?;
        acc = Some(acc.map_or(e, |a| a.min(e)));
    }
    Ok(acc.expect("at least one component"))
}

enum Outcome {
    Proven(ProvenBox),
    Discarded,
    Split(Box2, Box2),
    Undecided(UndecidedBox),
}

fn process(task: &CertificationTask, b: &Box2, depth: u32) -> Result<Outcome, IntervalError> {
    let Some(clipped) = clip_to_domain(b, task.mu) else {
        return Ok(Outcome::Discarded);
    };
    let (enclosure, proven, factored) = bound_box(task.target, &clipped, task.mu)?;
    if proven {
        return Ok(Outcome::Proven(ProvenBox {
            region: *b,
            lower_bound: enclosure.lo(),
            factored,
        }));
    }
    if depth >= task.max_depth || b.width() < task.min_box_width {
        return Ok(Outcome::Undecided(UndecidedBox {
            region: *b,
            depth,
            enclosure,
        }));
    }
    let (l, r) = b.bisect();
    Ok(Outcome::Split(l, r))
}

/// Initial cover of `[mu, 1] x [1/2, 1]` whose pieces never straddle the
/// corner lines `x = 1 - delta`, `y = 1 - delta`.
fn initial_boxes(task: &CertificationTask) -> Vec<Box2> {
    let iv = |lo: f64, hi: f64| Interval::new(lo, hi).expect("ordered bounds");
    let mu = task.mu;
    if task.delta == 0.0 {
        return vec![Box2::new(iv(mu, 1.0), iv(0.5, 1.0))];
    }
    let edge = 1.0 - task.delta;
    vec![
        Box2::new(iv(mu, edge), iv(0.5, 1.0)),
        Box2::new(iv(edge, 1.0), iv(0.5, edge)),
    ]
}

fn corner_box(delta: f64) -> Option<Box2> {
    (delta > 0.0).then(|| Box2::from_bounds(1.0 - delta, 1.0, 1.0 - delta, 1.0).expect("ordered"))
}

/// Samples the target on a `grid x grid` lattice over the corner square,
/// keeping only domain points.
pub fn sample_corner(target: Target, delta: f64, grid: usize) -> Option<CornerSampling> {
    if delta <= 0.0 || grid < 2 {
        return None;
    }
    let mut out = CornerSampling {
        grid,
        points: 0,
        min_value: f64::INFINITY,
        min_at: (1.0, 1.0),
    };
    let lo = 1.0 - delta;
    for i in 0..grid {
        for j in 0..grid {
            let x = lo + delta * i as f64 / (grid - 1) as f64;
            let y = lo + delta * j as f64 / (grid - 1) as f64;
            if !in_normalized_domain(x, y) {
                continue;
            }
            if let Some(v) = target.point_value(x, y) {
                out.points += 1;
                if v < out.min_value {
                    out.min_value = v;
                    out.min_at = (x, y);
                }
            }
        }
    }
    Some(out)
}

#[cfg(feature = "parallel")]
fn process_level(
    task: &CertificationTask,
    level: &[Box2],
    depth: u32,
    pool: Option<&rayon::ThreadPool>,
) -> Result<Vec<Outcome>, IntervalError> {
    use rayon::prelude::*;
    match pool {
        Some(pool) => pool.install(|| level.par_iter().map(|b| process(task, b, depth)).collect()),
        None => level.iter().map(|b| process(task, b, depth)).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn process_level(
    task: &CertificationTask,
    level: &[Box2],
    depth: u32,
    _pool: Option<&()>,
) -> Result<Vec<Outcome>, IntervalError> {
    level.iter().map(|b| process(task, b, depth)).collect()
}

/// Runs the branch-and-bound for `task`.
pub fn certify(task: &CertificationTask) -> Result<Certificate, CertifyError> {
    task.validate()?;
    let start = Stopwatch::start();

    #[cfg(feature = "parallel")]
    let pool = if task.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(task.workers)
                .build()
                .map_err(|e| CertifyError::InvalidTask(e.to_string()))?,
        )
    } else {
        None
    };
    #[cfg(not(feature = "parallel"))]
    let pool: Option<()> = None;

    let mut proven = Vec::new();
    let mut undecided = Vec::new();
    let mut stats = CertStats {
        boxes_processed: 0,
        boxes_discarded: 0,
        max_depth_reached: 0,
        wall_time_secs: 0.0,
    };
    let mut level = initial_boxes(task);
    let mut depth = 0u32;
    let mut budget_hit = false;
    while !level.is_empty() {
        stats.max_depth_reached = depth;
        stats.boxes_processed += level.len() as u64;
        let outcomes = process_level(task, &level, depth, pool.as_ref())?;
        let mut next = Vec::new();
        for o in outcomes {
            match o {
                Outcome::Proven(p) => proven.push(p),
                Outcome::Discarded => stats.boxes_discarded += 1,
                Outcome::Undecided(u) => undecided.push(u),
                Outcome::Split(l, r) => {
                    next.push(l);
                    next.push(r);
                }
            }
        }
        if next.len() > task.max_queue {
            // leftover boxes count as undecided in the partial certificate
            undecided.extend(next.drain(..).map(|region| UndecidedBox {
                region,
                depth: depth + 1,
                enclosure: Interval::ENTIRE,
            }));
            budget_hit = true;
        }
        level = next;
        depth += 1;
    }

    proven.sort_by(|a, b| a.region.canonical_cmp(&b.region));
    undecided.sort_by(|a, b| a.region.canonical_cmp(&b.region));

    let corner_edges = if task.target == Target::MainMedian && task.delta > 0.0 {
        Some(corner::corner_argument_check(task.delta)?)
    } else {
        None
    };
    let excluded = ExcludedRegions {
        mu: task.mu,
        delta: task.delta,
        corner: corner_box(task.delta),
        corner_edges,
        corner_sampling: sample_corner(task.target, task.delta, 201),
    };
    stats.wall_time_secs = start.secs();
    let cert = Certificate {
        task: task.clone(),
        proven,
        undecided,
        excluded,
        stats,
    };
    if budget_hit {
        return Err(CertifyError::BudgetExceeded {
            limit: task.max_queue,
            depth,
            partial: Box::new(cert),
        });
    }
    Ok(cert)
}
