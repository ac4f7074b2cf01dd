//! Outward-rounded elementary operations.
//!
//! Each function returns `(down, up)` with `down <= exact <= up` for the real
//! result of the operation on the two binary64 operands. Two strategies are
//! provided:
//!
//! * [`widen`] moves the round-to-nearest result one ulp outward in both
//!   directions. Always sound, one ulp loose.
//! * [`emulated`] recovers the exact rounding error with error-free
//!   transformations (TwoSum, FMA) and only moves the endpoint that is on the
//!   wrong side, which is what hardware directed rounding would return.
//!
//! The `emulated-rounding` feature selects which one [`active`] re-exports.

/// Rounding strategy used by [`super::Interval`].
#[cfg(not(feature = "emulated-rounding"))]
pub use widen as active;

#[cfg(feature = "emulated-rounding")]
pub use emulated as active;

pub const ACTIVE_NAME: &str = if cfg!(feature = "emulated-rounding") {
    "emulated-directed"
} else {
    "ulp-widening"
};

pub mod widen {
    #[inline]
    fn outward(r: f64) -> (f64, f64) {
        (r.next_down(), r.next_up())
    }

    #[inline]
    pub fn add(a: f64, b: f64) -> (f64, f64) {
        outward(a + b)
    }

    #[inline]
    pub fn sub(a: f64, b: f64) -> (f64, f64) {
        outward(a - b)
    }

    #[inline]
    pub fn mul(a: f64, b: f64) -> (f64, f64) {
        if a == 0.0 || b == 0.0 {
            return (0.0, 0.0);
        }
        outward(a * b)
    }

    #[inline]
    pub fn div(a: f64, b: f64) -> (f64, f64) {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        outward(a / b)
    }

    #[inline]
    pub fn sqrt(a: f64) -> (f64, f64) {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        let (lo, hi) = outward(a.sqrt());
        (lo.max(0.0), hi)
    }
}

pub mod emulated {
    /// Below this magnitude FMA residuals may not be representable.
    const TINY: f64 = 1e-290;

    #[inline]
    fn widen(r: f64) -> (f64, f64) {
        (r.next_down(), r.next_up())
    }

    /// `r` is the rounded result and `err` has the sign of `exact - r`.
    #[inline]
    fn settle(r: f64, err: f64) -> (f64, f64) {
        if err > 0.0 {
            (r, r.next_up())
        } else if err < 0.0 {
            (r.next_down(), r)
        } else {
            (r, r)
        }
    }

    #[inline]
    pub fn add(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        if !s.is_finite() {
            return widen(s);
        }
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        settle(s, err)
    }

    #[inline]
    pub fn sub(a: f64, b: f64) -> (f64, f64) {
        add(a, -b)
    }

    #[inline]
    pub fn mul(a: f64, b: f64) -> (f64, f64) {
        if a == 0.0 || b == 0.0 {
            return (0.0, 0.0);
        }
        let p = a * b;
        if !p.is_finite() || p.abs() < TINY {
            return widen(p);
        }
        settle(p, a.mul_add(b, -p))
    }

    #[inline]
    pub fn div(a: f64, b: f64) -> (f64, f64) {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        let q = a / b;
        if !q.is_finite() || q.abs() < TINY || a.abs() < TINY {
            return widen(q);
        }
        // a - q*b, exact; a/b - q has the sign of r/b
        let r = (-q).mul_add(b, a);
        settle(q, if b > 0.0 { r } else { -r })
    }

    #[inline]
    pub fn sqrt(a: f64) -> (f64, f64) {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        let r = a.sqrt();
        if a < TINY || !r.is_finite() {
            let (lo, hi) = widen(r);
            return (lo.max(0.0), hi);
        }
        // r*r - a > 0 means r overshoots sqrt(a)
        let e = r.mul_add(r, -a);
        settle(r, -e)
    }
}
