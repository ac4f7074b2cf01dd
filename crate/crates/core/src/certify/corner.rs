//! One-dimensional certification of the two isosceles factors near the
//! equality corner.
//!
//! On `a = b = x, c = 1` and on `a = x, b = c = 1` the main median slack
//! factors as `(1 - sqrt x) * g(x)`. Proving `g > 0` on `[1 - 2 delta, 1 - eta]`
//! shows the slack is (nonnegative) × (positive) along both isosceles edges
//! of the excluded corner. `g` itself vanishes at `x = 1`, so the last sliver
//! `[1 - eta, 1]` is reported rather than certified.

use serde::{Deserialize, Serialize};

use super::expr::{self, Dual};
use crate::interval::{Interval, IntervalError};

pub const DEFAULT_ETA: f64 = 1e-6;
const MAX_DEPTH: u32 = 80;
const MIN_WIDTH: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorCertificate {
    pub name: String,
    pub range: Interval,
    pub boxes: usize,
    pub min_lower_bound: f64,
    pub undecided: Vec<Interval>,
}

impl FactorCertificate {
    pub fn is_certified(&self) -> bool {
        self.undecided.is_empty() && self.min_lower_bound > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerReport {
    pub delta: f64,
    pub eta: f64,
    pub case1: FactorCertificate,
    pub case2: FactorCertificate,
    /// `[1 - eta, 1]`, where both factors tend to zero.
    pub sliver: Interval,
}

impl CornerReport {
    pub fn is_certified(&self) -> bool {
        self.case1.is_certified() && self.case2.is_certified()
    }
}

fn var(x: Interval) -> Dual {
    Dual::var_x(x)
}

fn enclose<F>(f: &F, x: Interval) -> Result<Interval, IntervalError>
where
    F: Fn(Dual) -> Result<Dual, IntervalError>,
{
    let d = f(var(x))?;
    let Some([g, _]) = d.grad else {
        return Ok(d.value);
    };
    if !g.is_finite() {
        return Ok(d.value);
    }
    let c = x.mid();
    let fc = f(var(Interval::point(c)))?.value;
    let mv = fc + g * (x - Interval::point(c));
    Ok(d.value.intersect(&mv).unwrap_or(d.value))
}

fn certify_factor<F>(name: &str, f: F, range: Interval) -> Result<FactorCertificate, IntervalError>
where
    F: Fn(Dual) -> Result<Dual, IntervalError>,
{
    let mut out = FactorCertificate {
        name: name.to_owned(),
        range,
        boxes: 0,
        min_lower_bound: f64::INFINITY,
        undecided: Vec::new(),
    };
    let mut stack = vec![(range, 0u32)];
    while let Some((x, depth)) = stack.pop() {
        let e = enclose(&f, x)?;
        if e.lo() > 0.0 {
            out.boxes += 1;
            out.min_lower_bound = out.min_lower_bound.min(e.lo());
        } else if depth >= MAX_DEPTH || x.width() < MIN_WIDTH {
            out.undecided.push(x);
        } else {
            let m = x.mid();
            // right half first so the pop order walks left to right
            stack.push((Interval::new(m, x.hi())?, depth + 1));
            stack.push((Interval::new(x.lo(), m)?, depth + 1));
        }
    }
    Ok(out)
}

/// Certifies both isosceles factors on `[1 - 2 delta, 1 - eta]`.
///
/// The first factor contains `sqrt(4x^2 - 1)` and is only defined for
/// `x >= 1/2`, so its range is clipped there.
pub fn corner_argument_check(delta: f64) -> Result<CornerReport, IntervalError> {
    corner_argument_check_with_eta(delta, DEFAULT_ETA)
}

pub fn corner_argument_check_with_eta(delta: f64, eta: f64) -> Result<CornerReport, IntervalError> {
    let lo = 1.0 - 2.0 * delta;
    let hi = 1.0 - eta;
    let case1 = certify_factor(
        "isosceles_case1",
        |x| expr::isosceles_factor1(x),
        Interval::new(lo.max(0.5), hi)?,
    )?;
    let case2 = certify_factor(
        "isosceles_case2",
        |x| expr::isosceles_factor2(x),
        Interval::new(lo, hi)?,
    )?;
    Ok(CornerReport {
        delta,
        eta,
        case1,
        case2,
        sliver: Interval::new(hi, 1.0)?,
    })
}

/// Point value of a factor at `x`, used for reporting.
pub fn factor_values(x: f64) -> (f64, f64) {
    let f1 = expr::isosceles_factor1(x).unwrap_or(f64::NAN);
    let f2 = expr::isosceles_factor2(x).unwrap_or(f64::NAN);
    (f1, f2)
}
