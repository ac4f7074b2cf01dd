//! Side triples, Cevian families and the normalization `(a/c, b/c)`.
//!
//! Every constructor sorts the sides so that `a <= b <= c`; all formulas in
//! this crate rely on that ordering. Cevian lengths are computed in plain
//! binary64; the rigorous counterparts live in [`crate::certify::expr`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangleError {
    #[error("side lengths must be positive and finite, got ({0}, {1}, {2})")]
    NonPositiveSide(f64, f64, f64),
    #[error("degenerate triangle: {a} + {b} <= {c}")]
    DegenerateTriangle { a: f64, b: f64, c: f64 },
    #[error("mixture weights must be nonnegative and not all zero")]
    ZeroWeights,
    #[error("mixture weight {0} is negative or not finite")]
    NegativeWeight(f64),
    #[error("foot fraction {0} is outside the open interval (0, 1)")]
    FootFraction(f64),
    #[error("triangle is not scalene (a < b < c required)")]
    NotScalene,
    #[error("({x}, {y}) is outside the normalized domain 0 < x <= y <= 1, x + y > 1")]
    NormalizedDomain { x: f64, y: f64 },
    #[error("expected {expected} Cevians, got {found}")]
    UnexpectedKind { expected: CevianKind, found: CevianKind },
    #[error("parameter {value} outside {expected}")]
    Domain { value: f64, expected: &'static str },
}

/// Three side lengths sorted so that `a <= b <= c` with `a + b > c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct SideTriple {
    a: f64,
    b: f64,
    c: f64,
}

impl SideTriple {
    /// Sorts and validates raw side lengths.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, TriangleError> {
        validate_sides(a, b, c)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Multiplies every side by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self, TriangleError> {
        validate_sides(k * self.a, k * self.b, k * self.c)
    }

    pub fn is_scalene(&self) -> bool {
        self.a < self.b && self.b < self.c
    }

    pub fn is_isosceles(&self) -> bool {
        self.a == self.b || self.b == self.c
    }
}

impl TryFrom<[f64; 3]> for SideTriple {
    type Error = TriangleError;

    fn try_from(s: [f64; 3]) -> Result<Self, Self::Error> {
        validate_sides(s[0], s[1], s[2])
    }
}

impl From<SideTriple> for [f64; 3] {
    fn from(t: SideTriple) -> Self {
        t.as_array()
    }
}

/// Sorts the inputs and checks positivity and strict non-degeneracy.
pub fn validate_sides(a: f64, b: f64, c: f64) -> Result<SideTriple, TriangleError> {
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if !(positive(a) && positive(b) && positive(c)) {
        return Err(TriangleError::NonPositiveSide(a, b, c));
    }
    let mut s = [a, b, c];
    s.sort_by(f64::total_cmp);
    let [a, b, c] = s;
    if a + b <= c {
        return Err(TriangleError::DegenerateTriangle { a, b, c });
    }
    Ok(SideTriple { a, b, c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CevianKind {
    Median,
    Altitude,
    Bisector,
    Mixed,
    General,
}

impl CevianKind {
    pub fn name(self) -> &'static str {
        match self {
            CevianKind::Median => "median",
            CevianKind::Altitude => "altitude",
            CevianKind::Bisector => "bisector",
            CevianKind::Mixed => "mixed",
            CevianKind::General => "general",
        }
    }
}

impl std::fmt::Display for CevianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Lengths of the Cevians issued from the vertices opposite `a`, `b`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CevianTriple {
    pub la: f64,
    pub lb: f64,
    pub lc: f64,
    pub kind: CevianKind,
}

impl CevianTriple {
    pub fn new(la: f64, lb: f64, lc: f64, kind: CevianKind) -> Self {
        Self { la, lb, lc, kind }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.la, self.lb, self.lc]
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(k * self.la, k * self.lb, k * self.lc, self.kind)
    }

    /// `la >= lb >= lc`.
    pub fn is_monotone(&self) -> bool {
        self.la >= self.lb && self.lb >= self.lc
    }
}

/// A triangle scaled to `c = 1`, stored as `(x, y) = (a/c, b/c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedTriangle {
    x: f64,
    y: f64,
}

impl NormalizedTriangle {
    pub fn new(x: f64, y: f64) -> Result<Self, TriangleError> {
        if in_normalized_domain(x, y) {
            Ok(Self { x, y })
        } else {
            Err(TriangleError::NormalizedDomain { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// The side triple `(x, y, 1)`.
    pub fn sides(&self) -> Result<SideTriple, TriangleError> {
        validate_sides(self.x, self.y, 1.0)
    }
}

/// `0 < x <= y <= 1` and `x + y > 1`.
pub fn in_normalized_domain(x: f64, y: f64) -> bool {
    x > 0.0 && x <= y && y <= 1.0 && x + y > 1.0
}

pub fn normalize(t: &SideTriple) -> NormalizedTriangle {
    NormalizedTriangle {
        x: t.a / t.c,
        y: t.b / t.c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleMetrics {
    /// Semiperimeter.
    pub s: f64,
    /// Area.
    pub area: f64,
}

/// Semiperimeter and area.
///
/// Heron's product is evaluated with Kahan's grouping
/// `(c+(b+a))(a-(c-b))(a+(c-b))(c+(b-a))/16`, valid for `a <= b <= c`, so
/// needle triangles keep full relative accuracy.
pub fn metrics(t: &SideTriple) -> TriangleMetrics {
    let (small, mid, large) = (t.a, t.b, t.c);
    let p = (large + (mid + small))
        * (small - (large - mid))
        * (small + (large - mid))
        * (large + (mid - small));
    TriangleMetrics {
        s: 0.5 * (t.a + t.b + t.c),
        area: 0.25 * p.max(0.0).sqrt(),
    }
}

/// `m_a = sqrt(2b^2 + 2c^2 - a^2) / 2` and cyclic.
pub fn medians(t: &SideTriple) -> CevianTriple {
    let (a2, b2, c2) = (t.a * t.a, t.b * t.b, t.c * t.c);
    CevianTriple::new(
        0.5 * (2.0 * b2 + 2.0 * c2 - a2).sqrt(),
        0.5 * (2.0 * a2 + 2.0 * c2 - b2).sqrt(),
        0.5 * (2.0 * a2 + 2.0 * b2 - c2).sqrt(),
        CevianKind::Median,
    )
}

/// `h_a = 2S / a` and cyclic.
pub fn altitudes(t: &SideTriple) -> CevianTriple {
    let twice_area = 2.0 * metrics(t).area;
    CevianTriple::new(
        twice_area / t.a,
        twice_area / t.b,
        twice_area / t.c,
        CevianKind::Altitude,
    )
}

/// Internal angle bisectors, `l_a = 2 sqrt(bc s (s-a)) / (b+c)` and cyclic.
pub fn bisectors(t: &SideTriple) -> CevianTriple {
    let (a, b, c) = (t.a, t.b, t.c);
    let s = 0.5 * (a + b + c);
    // s - a etc. grouped so the small differences are formed first.
    let sa = 0.5 * (b + (c - a));
    let sb = 0.5 * (a + (c - b));
    let sc = 0.5 * (a + (b - c));
    CevianTriple::new(
        2.0 * (b * c * s * sa).sqrt() / (b + c),
        2.0 * (a * c * s * sb).sqrt() / (a + c),
        2.0 * (a * b * s * sc).sqrt() / (a + b),
        CevianKind::Bisector,
    )
}

/// Nonnegative weights of the median/altitude/bisector mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedWeights {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl MixedWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, TriangleError> {
        for w in [alpha, beta, gamma] {
            if !(w.is_finite() && w >= 0.0) {
                return Err(TriangleError::NegativeWeight(w));
            }
        }
        if alpha == 0.0 && beta == 0.0 && gamma == 0.0 {
            return Err(TriangleError::ZeroWeights);
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `f = alpha * m + beta * h + gamma * l`, componentwise.
pub fn mixed_cevians(t: &SideTriple, w: &MixedWeights) -> CevianTriple {
    let m = medians(t).as_array();
    let h = altitudes(t).as_array();
    let l = bisectors(t).as_array();
    let f = |i: usize| w.alpha * m[i] + w.beta * h[i] + w.gamma * l[i];
    CevianTriple::new(f(0), f(1), f(2), CevianKind::Mixed)
}

/// Foot positions of three arbitrary Cevians.
///
/// The Cevian from `A` meets `BC` at distance `ta * a` from `B`; the one
/// from `B` meets `CA` at distance `tb * b` from `C`; the one from `C` meets
/// `AB` at distance `tc * c` from `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralCevianParams {
    ta: f64,
    tb: f64,
    tc: f64,
}

impl GeneralCevianParams {
    pub fn new(ta: f64, tb: f64, tc: f64) -> Result<Self, TriangleError> {
        for t in [ta, tb, tc] {
            if !(t > 0.0 && t < 1.0) {
                return Err(TriangleError::FootFraction(t));
            }
        }
        Ok(Self { ta, tb, tc })
    }

    pub const MIDPOINTS: GeneralCevianParams = GeneralCevianParams {
        ta: 0.5,
        tb: 0.5,
        tc: 0.5,
    };

    pub fn ta(&self) -> f64 {
        self.ta
    }

    pub fn tb(&self) -> f64 {
        self.tb
    }

    pub fn tc(&self) -> f64 {
        self.tc
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.ta, self.tb, self.tc]
    }
}

/// Squared Cevian length by Stewart's theorem. The foot moves along the
/// opposite side `opp`; at `t -> 0` the Cevian coincides with side `far`,
/// at `t -> 1` with side `near`.
fn stewart_sq(near: f64, far: f64, opp: f64, t: f64) -> f64 {
    near * near * t + far * far * (1.0 - t) - opp * opp * t * (1.0 - t)
}

/// Cevian lengths for arbitrary feet via Stewart's theorem.
pub fn general_cevians(t: &SideTriple, p: &GeneralCevianParams) -> CevianTriple {
    let (a, b, c) = (t.a, t.b, t.c);
    CevianTriple::new(
        stewart_sq(b, c, a, p.ta).sqrt(),
        stewart_sq(c, a, b, p.tb).sqrt(),
        stewart_sq(a, b, c, p.tc).sqrt(),
        CevianKind::General,
    )
}

/// `(sqrt a, sqrt b, sqrt c)`, again a non-degenerate triangle.
pub fn sqrt_sides(t: &SideTriple) -> Result<SideTriple, TriangleError> {
    validate_sides(t.a.sqrt(), t.b.sqrt(), t.c.sqrt())
}
