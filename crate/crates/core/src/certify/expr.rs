//! Target expressions written once over a generic scalar and instantiated
//! for binary64 points, intervals and interval-gradient pairs.
//!
//! All normalized targets take `c = 1`, `a = x`, `b = y` and use the doubled
//! medians `M_a = sqrt(2 + 2y^2 - x^2)` etc. so no factor `1/2` appears.

use std::ops::{Add, Mul, Sub};

use crate::interval::{Interval, IntervalError};

pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Result<Self, IntervalError>;
    fn div(self, rhs: Self) -> Result<Self, IntervalError>;
    fn sq(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }

    fn sqrt(self) -> Result<Self, IntervalError> {
        if self < 0.0 {
            return Err(IntervalError::NegativeSqrtDomain(self, self));
        }
        Ok(f64::sqrt(self))
    }

    fn div(self, rhs: Self) -> Result<Self, IntervalError> {
        if rhs == 0.0 {
            return Err(IntervalError::DivisionByZero(rhs, rhs));
        }
        Ok(self / rhs)
    }
}

impl Scalar for Interval {
    fn cst(v: f64) -> Self {
        Interval::point(v)
    }

    fn sqrt(self) -> Result<Self, IntervalError> {
        Interval::sqrt(self)
    }

    fn div(self, rhs: Self) -> Result<Self, IntervalError> {
        self.checked_div(rhs)
    }

    fn sq(self) -> Self {
        self.square()
    }
}

/// Interval value together with an enclosure of its gradient in `(x, y)`
/// over the same box. `grad == None` marks an unbounded derivative (square
/// root of an interval touching zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub value: Interval,
    pub grad: Option<[Interval; 2]>,
}

impl Dual {
    pub fn var_x(x: Interval) -> Self {
        Dual {
            value: x,
            grad: Some([Interval::point(1.0), Interval::ZERO]),
        }
    }

    pub fn var_y(y: Interval) -> Self {
        Dual {
            value: y,
            grad: Some([Interval::ZERO, Interval::point(1.0)]),
        }
    }

    fn map_grad(a: Option<[Interval; 2]>, f: impl Fn(Interval) -> Interval) -> Option<[Interval; 2]> {
        a.map(|[gx, gy]| [f(gx), f(gy)])
    }

    fn zip_grad(
        a: Option<[Interval; 2]>,
        b: Option<[Interval; 2]>,
        f: impl Fn(Interval, Interval) -> Interval,
    ) -> Option<[Interval; 2]> {
        match (a, b) {
            (Some([ax, ay]), Some([bx, by])) => Some([f(ax, bx), f(ay, by)]),
            _ => None,
        }
    }
}

impl Add for Dual {
    type Output = Dual;

    fn add(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value + rhs.value,
            grad: Dual::zip_grad(self.grad, rhs.grad, |a, b| a + b),
        }
    }
}

impl Sub for Dual {
    type Output = Dual;

    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            value: self.value - rhs.value,
            grad: Dual::zip_grad(self.grad, rhs.grad, |a, b| a - b),
        }
    }
}

impl Mul for Dual {
    type Output = Dual;

    fn mul(self, rhs: Dual) -> Dual {
        let (u, v) = (self.value, rhs.value);
        Dual {
            value: u * v,
            grad: Dual::zip_grad(self.grad, rhs.grad, |du, dv| du * v + dv * u),
        }
    }
}

impl Scalar for Dual {
    fn cst(v: f64) -> Self {
        Dual {
            value: Interval::point(v),
            grad: Some([Interval::ZERO; 2]),
        }
    }

    fn sqrt(self) -> Result<Self, IntervalError> {
        let r = self.value.sqrt()?;
        let grad = if r.lo() > 0.0 {
            let twice = r + r;
            match (self.grad, twice) {
                (Some([gx, gy]), d) => Some([gx.checked_div(d)?, gy.checked_div(d)?]),
                (None, _) => None,
            }
        } else {
            None
        };
        Ok(Dual { value: r, grad })
    }

    fn div(self, rhs: Self) -> Result<Self, IntervalError> {
        let q = self.value.checked_div(rhs.value)?;
        let grad = match Dual::zip_grad(self.grad, rhs.grad, |du, dv| du - q * dv) {
            Some([nx, ny]) => Some([nx.checked_div(rhs.value)?, ny.checked_div(rhs.value)?]),
            None => None,
        };
        Ok(Dual { value: q, grad })
    }

    fn sq(self) -> Self {
        let v = self.value;
        Dual {
            value: v.square(),
            grad: Dual::map_grad(self.grad, |g| Interval::point(2.0) * v * g),
        }
    }
}

/// Doubled medians `(M_a, M_b, M_c)` of the triangle `(x, y, 1)`.
pub fn doubled_medians<T: Scalar>(x: T, y: T) -> Result<[T; 3], IntervalError> {
    let two = T::cst(2.0);
    let (x2, y2) = (x.sq(), y.sq());
    Ok([
        (two + two * y2 - x2).sqrt()?,
        (two + two * x2 - y2).sqrt()?,
        (two * x2 + two * y2 - T::cst(1.0)).sqrt()?,
    ])
}

/// Twice the main median slack of `(x, y, 1)`.
pub fn main_median<T: Scalar>(x: T, y: T) -> Result<T, IntervalError> {
    let [ma, mb, mc] = doubled_medians(x, y)?;
    let (sx, sy) = (x.sqrt()?, y.sqrt()?);
    Ok((sy - x) * ma + (sx - y) * mb + (sx * sy - T::cst(1.0)) * mc)
}

/// Twice the quadratic median slack of `(x, y, 1)`.
pub fn quadratic_median<T: Scalar>(x: T, y: T) -> Result<T, IntervalError> {
    let [ma, mb, mc] = doubled_medians(x, y)?;
    Ok((y - x.sq()) * ma + (x - y.sq()) * mb + (x * y - T::cst(1.0)) * mc)
}

/// Twice the three key-system residuals of `(x, y, 1)`.
pub fn key_system<T: Scalar>(x: T, y: T) -> Result<[T; 3], IntervalError> {
    let [ma, mb, mc] = doubled_medians(x, y)?;
    let two = T::cst(2.0);
    Ok([
        mb + y * mc - two * x * ma,
        x * mc + ma - two * y * mb,
        x * mb + y * ma - two * mc,
    ])
}

pub fn key_system_component<T: Scalar>(i: usize, x: T, y: T) -> Result<T, IntervalError> {
    Ok(key_system(x, y)?[i])
}

/// Index of the key-system residual that vanishes on automedian triangles.
pub const AUTOMEDIAN_COMPONENT: usize = 1;

/// `2y^2 - x^2 - 1`, zero exactly on automedian triangles `a^2 + c^2 = 2b^2`.
pub fn automedian_defect<T: Scalar>(x: T, y: T) -> T {
    T::cst(2.0) * y.sq() - x.sq() - T::cst(1.0)
}

/// Cofactor `T` in `key_system(x, y)[1] = automedian_defect(x, y)^2 * T`.
///
/// Rationalizing `x M_c + M_a - 2y M_b` twice gives
/// `4 H u^2 / ((2x M_a M_c - A)(x M_c + M_a + 2y M_b))` with
/// `A = x^2 M_c^2 + M_a^2 - 4y^2 M_b^2` and
/// `H = (1 + y - x)(1 + x - y)(x + y - 1)(x + y + 1)`.
/// `s` encloses `x + y - 1`, so callers can apply the bound `x + y >= 1 + mu`.
pub fn automedian_cofactor<T: Scalar>(x: T, y: T, s: T) -> Result<T, IntervalError> {
    let [ma, mb, mc] = doubled_medians(x, y)?;
    let (one, two, three) = (T::cst(1.0), T::cst(2.0), T::cst(3.0));
    let (x2, y2) = (x.sq(), y.sq());
    let a = two * (x2.sq() - three * x2 * y2 - x2 + two * y2.sq() - three * y2 + one);
    let h = (one + y - x) * (one + x - y) * s * (x + y + one);
    (T::cst(4.0) * h).div((two * x * ma * mc - a) * (x * mc + ma + two * y * mb))
}

/// `xy + x/y + y/x - x - y - 1`.
pub fn altitude_reduced<T: Scalar>(x: T, y: T) -> Result<T, IntervalError> {
    Ok(x * y + x.div(y)? + y.div(x)? - x - y - T::cst(1.0))
}

/// Twice the scalene-lemma slack of `(x, y, 1)`.
pub fn scalene_lemma<T: Scalar>(x: T, y: T) -> Result<T, IntervalError> {
    let [ma, mb, mc] = doubled_medians(x, y)?;
    let (sx, sy) = (x.sqrt()?, y.sqrt()?);
    Ok(sy * ma + sx * mb - y * mb - mc)
}

/// Second factor of the factored slack on `a = b = x`, `c = 1`.
pub fn isosceles_factor1<T: Scalar>(x: T) -> Result<T, IntervalError> {
    let (one, two, four) = (T::cst(1.0), T::cst(2.0), T::cst(4.0));
    let sx = x.sqrt()?;
    Ok(two * (two * x + x * x.sq()).sqrt()? - (sx + one) * (four * x.sq() - one).sqrt()?)
}

/// Second factor of the factored slack on `a = x`, `b = c = 1`.
pub fn isosceles_factor2<T: Scalar>(x: T) -> Result<T, IntervalError> {
    let (one, two, four) = (T::cst(1.0), T::cst(2.0), T::cst(4.0));
    let sx = x.sqrt()?;
    Ok((one + sx) * (four - x.sq()).sqrt()? - two * (one + two * x.sq()).sqrt()?)
}

// Cevian families on arbitrary sides, used to re-check search candidates.

fn stewart<T: Scalar>(near: T, far: T, opp: T, t: T) -> Result<T, IntervalError> {
    let one = T::cst(1.0);
    (near.sq() * t + far.sq() * (one - t) - opp.sq() * t * (one - t)).sqrt()
}

pub fn general_cevians<T: Scalar>(s: [T; 3], feet: [T; 3]) -> Result<[T; 3], IntervalError> {
    let [a, b, c] = s;
    Ok([
        stewart(b, c, a, feet[0])?,
        stewart(c, a, b, feet[1])?,
        stewart(a, b, c, feet[2])?,
    ])
}

pub fn medians<T: Scalar>(s: [T; 3]) -> Result<[T; 3], IntervalError> {
    let half = T::cst(0.5);
    general_cevians(s, [half; 3])
}

pub fn altitudes<T: Scalar>(s: [T; 3]) -> Result<[T; 3], IntervalError> {
    let [a, b, c] = s;
    // 4 S = sqrt((a+b+c)(-a+b+c)(a-b+c)(a+b-c))
    let p = (a + b + c) * (b + c - a) * (a + c - b) * (a + b - c);
    let twice_area = T::cst(0.5) * p.sqrt()?;
    Ok([twice_area.div(a)?, twice_area.div(b)?, twice_area.div(c)?])
}

pub fn bisectors<T: Scalar>(s: [T; 3]) -> Result<[T; 3], IntervalError> {
    let [a, b, c] = s;
    let half = T::cst(0.5);
    let two = T::cst(2.0);
    let sp = half * (a + b + c);
    let one = |u: T, v: T, w: T| -> Result<T, IntervalError> {
        // 2 sqrt(v w s (s - u)) / (v + w)
        (two * (v * w * sp * (half * (v + w - u))).sqrt()?).div(v + w)
    };
    Ok([one(a, b, c)?, one(b, a, c)?, one(c, a, b)?])
}

/// `(main, quadratic)` slacks of an arbitrary Cevian triple.
pub fn open_problem_slacks<T: Scalar>(s: [T; 3], l: [T; 3]) -> Result<(T, T), IntervalError> {
    let [a, b, c] = s;
    let main = ((b * c).sqrt()? - a) * l[0] + ((a * c).sqrt()? - b) * l[1] + ((a * b).sqrt()? - c) * l[2];
    let quad = (b * c - a.sq()) * l[0] + (a * c - b.sq()) * l[1] + (a * b - c.sq()) * l[2];
    Ok((main, quad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality;

    #[test]
    fn automedian_factorization() {
        // 50-digit oracle values of the residual
        let cases = [
            (0.6, 0.8, 0.001_247_932_766_553_086),
            (0.3, 0.9, 0.040_311_596_176_035_844),
            (0.9, 0.95, 3.976_054_885_427_153e-6),
            (0.05, 0.99, 0.034_019_761_111_422_737),
            (0.7, 0.71, 0.048_372_497_988_232_835),
        ];
        for (x, y, want) in cases {
            let u = automedian_defect(x, y);
            let t = automedian_cofactor(x, y, x + y - 1.0).unwrap();
            assert!(t > 0.0);
            assert!((u * u * t - want).abs() <= 1e-13 * want, "{x} {y}");
            let direct = key_system_component(AUTOMEDIAN_COMPONENT, x, y).unwrap();
            assert!((direct - want).abs() <= 1e-15);
        }
        // (1, sqrt(5/8), sqrt(9/8)) scaled: a^2 + c^2 = 2 b^2
        let (x, y) = (0.5f64, 0.625f64.sqrt());
        assert!(automedian_defect(x, y).abs() < 1e-15);
        assert!(key_system_component(AUTOMEDIAN_COMPONENT, x, y).unwrap().abs() < 1e-15);
    }

    #[test]
    fn f64_instances_match_inequality_suite() {
        for (x, y) in [(0.6, 0.8), (0.3, 0.9), (0.95, 0.97), (0.5001, 0.5)] {
            if !crate::triangle::in_normalized_domain(x, y) {
                continue;
            }
            let f = main_median(x, y).unwrap();
            assert!((f - inequality::normalized_slack_xy(x, y).unwrap()).abs() < 1e-14);
            let q = quadratic_median(x, y).unwrap();
            assert!((q - inequality::normalized_quadratic(x, y).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn dual_gradient_matches_finite_difference() {
        let (x0, y0) = (0.7, 0.85);
        let h = 1e-6;
        let d = main_median(Dual::var_x(Interval::point(x0)), Dual::var_y(Interval::point(y0))).unwrap();
        let [gx, gy] = d.grad.unwrap();
        let fdx = (main_median(x0 + h, y0).unwrap() - main_median(x0 - h, y0).unwrap()) / (2.0 * h);
        let fdy = (main_median(x0, y0 + h).unwrap() - main_median(x0, y0 - h).unwrap()) / (2.0 * h);
        assert!((gx.mid() - fdx).abs() < 1e-7, "{gx} vs {fdx}");
        assert!((gy.mid() - fdy).abs() < 1e-7, "{gy} vs {fdy}");
        let d = altitude_reduced(Dual::var_x(Interval::point(x0)), Dual::var_y(Interval::point(y0))).unwrap();
        let fdx = (altitude_reduced(x0 + h, y0).unwrap() - altitude_reduced(x0 - h, y0).unwrap()) / (2.0 * h);
        assert!((d.grad.unwrap()[0].mid() - fdx).abs() < 1e-7);
    }

    #[test]
    fn sqrt_at_zero_drops_gradient() {
        let d = Dual::var_x(Interval::new(0.0, 1.0).unwrap()).sqrt().unwrap();
        assert!(d.grad.is_none());
    }

    #[test]
    fn generic_cevians_agree_with_kernel() {
        let t = crate::triangle::validate_sides(2.0, 3.0, 4.0).unwrap();
        let s = t.as_array();
        let pairs = [
            (medians(s).unwrap(), crate::triangle::medians(&t).as_array()),
            (altitudes(s).unwrap(), crate::triangle::altitudes(&t).as_array()),
            (bisectors(s).unwrap(), crate::triangle::bisectors(&t).as_array()),
        ];
        for (g, k) in pairs {
            for i in 0..3 {
                assert!((g[i] - k[i]).abs() < 1e-13 * k[i]);
            }
        }
    }
}
