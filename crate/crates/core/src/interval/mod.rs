//! Closed intervals with outward-rounded endpoints and axis-aligned boxes.

pub mod rounding;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rounding::active as rnd;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval bounds [{0}, {1}] are NaN or reversed")]
    InvalidBounds(f64, f64),
    #[error("square root of [{0}, {1}] which lies below zero")]
    NegativeSqrtDomain(f64, f64),
    #[error("division by [{0}, {1}] which contains zero")]
    DivisionByZero(f64, f64),
    #[error("box does not meet the working domain")]
    EmptyIntersection,
}

/// `[lo, hi]` with `lo <= hi`, neither endpoint NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(IntervalError::InvalidBounds(lo, hi));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        debug_assert!(!v.is_nan());
        Self { lo: v, hi: v }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Square root; a lower endpoint below zero is clamped, an interval
    /// entirely below zero is an error.
    pub fn sqrt(self) -> Result<Interval, IntervalError> {
        if self.hi < 0.0 {
            return Err(IntervalError::NegativeSqrtDomain(self.lo, self.hi));
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { rnd::sqrt(self.lo).0 };
        Ok(Interval {
            lo,
            hi: rnd::sqrt(self.hi).1,
        })
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains(0.0) {
            return Err(IntervalError::DivisionByZero(rhs.lo, rhs.hi));
        }
        let q = [
            rnd::div(self.lo, rhs.lo),
            rnd::div(self.lo, rhs.hi),
            rnd::div(self.hi, rhs.lo),
            rnd::div(self.hi, rhs.hi),
        ];
        Ok(Self::from_candidates(&q))
    }

    pub fn square(self) -> Interval {
        if self.lo >= 0.0 {
            Interval {
                lo: rnd::mul(self.lo, self.lo).0,
                hi: rnd::mul(self.hi, self.hi).1,
            }
        } else if self.hi <= 0.0 {
            Interval {
                lo: rnd::mul(self.hi, self.hi).0,
                hi: rnd::mul(self.lo, self.lo).1,
            }
        } else {
            let m = self.lo.abs().max(self.hi);
            Interval {
                lo: 0.0,
                hi: rnd::mul(m, m).1,
            }
        }
    }

    fn from_candidates(c: &[(f64, f64); 4]) -> Interval {
        let lo = c.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl From<f64> for Interval {
    fn from(v: f64) -> Self {
        Interval::point(v)
    }
}

impl Add for Interval {
    type Output = Interval;

    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: rnd::add(self.lo, rhs.lo).0,
            hi: rnd::add(self.hi, rhs.hi).1,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;

    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: rnd::sub(self.lo, rhs.hi).0,
            hi: rnd::sub(self.hi, rhs.lo).1,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;

    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            rnd::mul(self.lo, rhs.lo),
            rnd::mul(self.lo, rhs.hi),
            rnd::mul(self.hi, rhs.lo),
            rnd::mul(self.hi, rhs.hi),
        ];
        Interval::from_candidates(&p)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

/// Axis-aligned rectangle `x × y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box2 {
    pub x: Interval,
    pub y: Interval,
}

impl Box2 {
    pub fn new(x: Interval, y: Interval) -> Self {
        Self { x, y }
    }

    pub fn from_bounds(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self, IntervalError> {
        Ok(Self {
            x: Interval::new(x0, x1)?,
            y: Interval::new(y0, y1)?,
        })
    }

    pub fn point(x: f64, y: f64) -> Self {
        Self {
            x: Interval::point(x),
            y: Interval::point(y),
        }
    }

    pub fn width(&self) -> f64 {
        self.x.width().max(self.y.width())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }

    pub fn is_subset_of(&self, other: &Box2) -> bool {
        self.x.is_subset_of(&other.x) && self.y.is_subset_of(&other.y)
    }

    /// Bisects the wider coordinate; ties split `x`.
    pub fn bisect(&self) -> (Box2, Box2) {
        if self.y.width() > self.x.width() {
            let m = self.y.mid();
            (
                Box2::new(self.x, Interval { lo: self.y.lo, hi: m }),
                Box2::new(self.x, Interval { lo: m, hi: self.y.hi }),
            )
        } else {
            let m = self.x.mid();
            (
                Box2::new(Interval { lo: self.x.lo, hi: m }, self.y),
                Box2::new(Interval { lo: m, hi: self.x.hi }, self.y),
            )
        }
    }

    /// Lexicographic order on `(x.lo, y.lo, x.hi, y.hi)`.
    pub fn canonical_cmp(&self, other: &Box2) -> std::cmp::Ordering {
        self.x
            .lo
            .total_cmp(&other.x.lo)
            .then(self.y.lo.total_cmp(&other.y.lo))
            .then(self.x.hi.total_cmp(&other.x.hi))
            .then(self.y.hi.total_cmp(&other.y.hi))
    }
}
