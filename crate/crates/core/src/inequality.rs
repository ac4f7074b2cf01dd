//! Signed slacks (left side minus right side) of the median/Cevian
//! inequalities and of the auxiliary forms used to prove them.
//!
//! A slack is nonnegative exactly when the corresponding `L >= R` holds, so
//! every check in the crate reduces to `slack >= -tolerance`.

use serde::{Deserialize, Serialize};

use crate::triangle::{
    self, CevianKind, CevianTriple, NormalizedTriangle, SideTriple, TriangleError,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub name: String,
    pub value: f64,
    pub sides: SideTriple,
    pub cevians: Option<CevianTriple>,
}

impl SlackReport {
    fn new(name: &str, value: f64, sides: &SideTriple, cevians: Option<&CevianTriple>) -> Self {
        Self {
            name: name.to_owned(),
            value,
            sides: *sides,
            cevians: cevians.copied(),
        }
    }

    pub fn holds(&self, tolerance: f64) -> bool {
        self.value >= -tolerance
    }
}

/// Degree-two normalizer `c * lc` used to scale absolute tolerances.
pub fn scale2(t: &SideTriple, cv: &CevianTriple) -> f64 {
    t.c() * cv.lc
}

fn require_kind(cv: &CevianTriple, kind: CevianKind) -> Result<(), TriangleError> {
    if cv.kind == kind {
        Ok(())
    } else {
        Err(TriangleError::UnexpectedKind {
            expected: kind,
            found: cv.kind,
        })
    }
}

/// `uv - w^2` with a single rounding in each product.
fn prod_gap(u: f64, v: f64, w: f64) -> f64 {
    let w2 = w * w;
    u.mul_add(v, -w2) - w.mul_add(w, -w2)
}

/// `sqrt(uv) - w` for positive arguments, as `(uv - w^2) / (sqrt(uv) + w)`
/// so nearly equal terms do not cancel.
fn root_gap(u: f64, v: f64, w: f64) -> f64 {
    prod_gap(u, v, w) / ((u * v).sqrt() + w)
}

/// `sqrt(bc) la + sqrt(ac) lb + sqrt(ab) lc - (a la + b lb + c lc)`.
pub fn slack_main(t: &SideTriple, cv: &CevianTriple) -> SlackReport {
    let (a, b, c) = (t.a(), t.b(), t.c());
    let value = root_gap(b, c, a) * cv.la + root_gap(a, c, b) * cv.lb + root_gap(a, b, c) * cv.lc;
    SlackReport::new("main", value, t, Some(cv))
}

/// `(bc - a^2) la + (ac - b^2) lb + (ab - c^2) lc`.
pub fn slack_quadratic(t: &SideTriple, cv: &CevianTriple) -> SlackReport {
    let (a, b, c) = (t.a(), t.b(), t.c());
    let value = prod_gap(b, c, a) * cv.la + prod_gap(a, c, b) * cv.lb + prod_gap(a, b, c) * cv.lc;
    SlackReport::new("quadratic", value, t, Some(cv))
}

/// The three residuals of `2a ma <= c mb + b mc` and its cyclic companions.
pub fn key_system_residuals(
    t: &SideTriple,
    med: &CevianTriple,
) -> Result<[SlackReport; 3], TriangleError> {
    require_kind(med, CevianKind::Median)?;
    let (a, b, c) = (t.a(), t.b(), t.c());
    let (ma, mb, mc) = (med.la, med.lb, med.lc);
    Ok([
        SlackReport::new("key_system_a", c * mb + b * mc - 2.0 * a * ma, t, Some(med)),
        SlackReport::new("key_system_b", a * mc + c * ma - 2.0 * b * mb, t, Some(med)),
        SlackReport::new("key_system_c", a * mb + b * ma - 2.0 * c * mc, t, Some(med)),
    ])
}

/// `sqrt(bc) ma + sqrt(ac) mb - b mb - c mc`, stated for `a < b < c`.
pub fn lemma_scalene_slack(t: &SideTriple, med: &CevianTriple) -> Result<SlackReport, TriangleError> {
    require_kind(med, CevianKind::Median)?;
    if !t.is_scalene() {
        return Err(TriangleError::NotScalene);
    }
    Ok(SlackReport::new(
        "lemma_scalene",
        scalene_lemma_value(t, med),
        t,
        Some(med),
    ))
}

fn scalene_lemma_value(t: &SideTriple, med: &CevianTriple) -> f64 {
    let (a, b, c) = (t.a(), t.b(), t.c());
    (b * c).sqrt() * med.la + (a * c).sqrt() * med.lb - b * med.lb - c * med.lc
}

/// `A = a la`, `B = b lb`, `C = c lc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingProducts {
    pub a_prod: f64,
    pub b_prod: f64,
    pub c_prod: f64,
}

impl OrderingProducts {
    /// `B - max(A, C)`.
    pub fn dominance_slack(&self) -> f64 {
        self.b_prod - self.a_prod.max(self.c_prod)
    }

    pub fn b_dominates(&self) -> bool {
        self.dominance_slack() >= 0.0
    }
}

pub fn ordering_products(t: &SideTriple, cv: &CevianTriple) -> OrderingProducts {
    OrderingProducts {
        a_prod: t.a() * cv.la,
        b_prod: t.b() * cv.lb,
        c_prod: t.c() * cv.lc,
    }
}

fn check_x(x: f64, lo: f64, lo_open: bool, expected: &'static str) -> Result<(), TriangleError> {
    let above = if lo_open { x > lo } else { x >= lo };
    if above && x <= 1.0 {
        Ok(())
    } else {
        Err(TriangleError::Domain { value: x, expected })
    }
}

/// Factored slack for `a = b = x`, `c = 1`:
/// `(1 - sqrt x)(2 sqrt(2x + x^3) - (sqrt x + 1) sqrt(4x^2 - 1))`,
/// equal to twice the main slack of the median triple.
pub fn isosceles_slack_case1(x: f64) -> Result<SlackReport, TriangleError> {
    check_x(x, 0.5, true, "(1/2, 1]")?;
    let r = x.sqrt();
    let value = (1.0 - r) * (2.0 * (2.0 * x + x * x * x).sqrt() - (r + 1.0) * (4.0 * x * x - 1.0).sqrt());
    let t = triangle::validate_sides(x, x, 1.0)?;
    Ok(SlackReport::new("isosceles_case1", value, &t, None))
}

/// Factored slack for `a = x`, `b = c = 1`:
/// `(1 - sqrt x)((1 + sqrt x) sqrt(4 - x^2) - 2 sqrt(1 + 2x^2))`.
pub fn isosceles_slack_case2(x: f64) -> Result<SlackReport, TriangleError> {
    check_x(x, 0.0, true, "(0, 1]")?;
    let r = x.sqrt();
    let value = (1.0 - r) * ((1.0 + r) * (4.0 - x * x).sqrt() - 2.0 * (1.0 + 2.0 * x * x).sqrt());
    let t = triangle::validate_sides(x, 1.0, 1.0)?;
    Ok(SlackReport::new("isosceles_case2", value, &t, None))
}

/// Two-variable form of the main median inequality on the normalized
/// domain; equals `2 slack_main / c^2`.
pub fn normalized_slack(p: &NormalizedTriangle) -> f64 {
    let (x, y) = (p.x(), p.y());
    let ra = (2.0 + 2.0 * y * y - x * x).sqrt();
    let rb = (2.0 + 2.0 * x * x - y * y).sqrt();
    let rc = (2.0 * x * x + 2.0 * y * y - 1.0).sqrt();
    root_gap(y, 1.0, x) * ra + root_gap(x, 1.0, y) * rb + root_gap(x, y, 1.0) * rc
}

/// [`normalized_slack`] on raw coordinates, rejecting points off the domain.
pub fn normalized_slack_xy(x: f64, y: f64) -> Result<f64, TriangleError> {
    Ok(normalized_slack(&NormalizedTriangle::new(x, y)?))
}

/// `l_a / l_b - (c + b - a) / c`.
pub fn bisector_ratio_slack(t: &SideTriple) -> SlackReport {
    let l = triangle::bisectors(t);
    let value = l.la / l.lb - (t.c() + t.b() - t.a()) / t.c();
    SlackReport::new("bisector_ratio", value, t, Some(&l))
}

/// `sqrt(a) l_a - sqrt(c) l_c`.
pub fn bisector_chain_slack(t: &SideTriple) -> SlackReport {
    let l = triangle::bisectors(t);
    let value = t.a().sqrt() * l.la - t.c().sqrt() * l.lc;
    SlackReport::new("bisector_chain", value, t, Some(&l))
}

/// `ab/c + ac/b + bc/a - a - b - c`; the quadratic slack of the altitudes
/// divided by `2S`.
pub fn altitude_reduced_slack(t: &SideTriple) -> SlackReport {
    let (a, b, c) = (t.a(), t.b(), t.c());
    let value = a * b / c + a * c / b + b * c / a - a - b - c;
    SlackReport::new("altitude_reduced", value, t, None)
}

/// `sqrt(bc)/a + sqrt(ac)/b + sqrt(ab)/c - 3`; the main slack of the
/// altitudes divided by `2S`.
pub fn altitude_am_gm_slack(t: &SideTriple) -> SlackReport {
    let (a, b, c) = (t.a(), t.b(), t.c());
    let value = (b * c).sqrt() / a + (a * c).sqrt() / b + (a * b).sqrt() / c - 3.0;
    SlackReport::new("altitude_am_gm", value, t, None)
}

/// Slacks of `(sqrt(bc) - a) Ca + ... >= 0` and `(bc - a^2) Ca + ... >= 0`
/// for an arbitrary Cevian triple.
pub fn open_problem_slacks(t: &SideTriple, cv: &CevianTriple) -> (SlackReport, SlackReport) {
    let mut s1 = slack_main(t, cv);
    s1.name = "open_problem_1".into();
    let mut s2 = slack_quadratic(t, cv);
    s2.name = "open_problem_2".into();
    (s1, s2)
}

// Binary64 versions of the normalized certification targets, evaluated
// through the triangle kernel. Each is a positive multiple of the
// corresponding slack of the triangle (x, y, 1).

fn unit_triangle(x: f64, y: f64) -> Result<(SideTriple, CevianTriple), TriangleError> {
    let t = NormalizedTriangle::new(x, y)?.sides()?;
    let m = triangle::medians(&t);
    Ok((t, m))
}

/// `2 slack_quadratic` of the median triple of `(x, y, 1)`.
pub fn normalized_quadratic(x: f64, y: f64) -> Result<f64, TriangleError> {
    let (t, m) = unit_triangle(x, y)?;
    Ok(2.0 * slack_quadratic(&t, &m).value)
}

/// Twice the three key-system residuals of `(x, y, 1)`.
pub fn normalized_key_system(x: f64, y: f64) -> Result<[f64; 3], TriangleError> {
    let (t, m) = unit_triangle(x, y)?;
    let r = key_system_residuals(&t, &m)?;
    Ok([2.0 * r[0].value, 2.0 * r[1].value, 2.0 * r[2].value])
}

/// `xy + x/y + y/x - x - y - 1`.
pub fn normalized_altitude(x: f64, y: f64) -> Result<f64, TriangleError> {
    let t = NormalizedTriangle::new(x, y)?.sides()?;
    Ok(altitude_reduced_slack(&t).value)
}

/// Twice the scalene-lemma slack of `(x, y, 1)`, evaluated on the closed
/// domain (isosceles points included).
pub fn normalized_scalene_lemma(x: f64, y: f64) -> Result<f64, TriangleError> {
    let (t, m) = unit_triangle(x, y)?;
    Ok(2.0 * scalene_lemma_value(&t, &m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::{
        altitudes, bisectors, general_cevians, medians, validate_sides, GeneralCevianParams,
    };
    use approx::assert_relative_eq;

    fn tri(a: f64, b: f64, c: f64) -> SideTriple {
        validate_sides(a, b, c).unwrap()
    }

    // Reference values below were computed with 50-digit arithmetic.

    #[test]
    fn main_slack_values() {
        let e = tri(1.0, 1.0, 1.0);
        assert!(slack_main(&e, &medians(&e)).value.abs() < 1e-15);
        let t = tri(3.0, 4.0, 5.0);
        assert_relative_eq!(slack_main(&t, &medians(&t)).value, 1.991_256_536_323_874, max_relative = 1e-13);
        let h = slack_main(&t, &altitudes(&t)).value;
        assert_relative_eq!(h, 1.821_337_734_951_179, max_relative = 1e-13);
        assert_relative_eq!(h, 12.0 * altitude_am_gm_slack(&t).value, max_relative = 1e-13);
        assert_relative_eq!(slack_main(&t, &bisectors(&t)).value, 2.057_463_394_794_244_6, max_relative = 1e-13);
    }

    #[test]
    fn quadratic_slack_values() {
        let e = tri(1.0, 1.0, 1.0);
        assert_eq!(slack_quadratic(&e, &medians(&e)).value, 0.0);
        let t = tri(3.0, 4.0, 5.0);
        assert_relative_eq!(slack_quadratic(&t, &medians(&t)).value, 10.886_469_323_782_432, max_relative = 1e-13);
        let h = slack_quadratic(&t, &altitudes(&t)).value;
        assert_relative_eq!(h, 9.8, max_relative = 1e-13);
        assert_relative_eq!(h, 12.0 * altitude_reduced_slack(&t).value, max_relative = 1e-13);
    }

    #[test]
    fn key_system_values() {
        let e = tri(1.0, 1.0, 1.0);
        for r in key_system_residuals(&e, &medians(&e)).unwrap() {
            assert!(r.value.abs() < 1e-15);
        }
        let t = tri(3.0, 4.0, 5.0);
        let r = key_system_residuals(&t, &medians(&t)).unwrap();
        assert_relative_eq!(r[0].value, 2.395_745_141_367_353, max_relative = 1e-13);
        assert_relative_eq!(r[1].value, 0.015_599_159_581_913_575, max_relative = 1e-11);
        assert_relative_eq!(r[2].value, 2.904_661_317_027_030, max_relative = 1e-13);
        let u = tri(2.0, 3.0, 4.0);
        assert!(key_system_residuals(&u, &medians(&u)).unwrap().iter().all(|r| r.value > 0.0));
        assert!(key_system_residuals(&u, &altitudes(&u)).is_err());
    }

    #[test]
    fn scalene_lemma_values() {
        let t = tri(3.0, 4.0, 5.0);
        let s = lemma_scalene_slack(&t, &medians(&t)).unwrap();
        assert_relative_eq!(s.value, 6.147_008_116_455_784, max_relative = 1e-13);
        let u = tri(2.0, 3.0, 4.0);
        assert_relative_eq!(lemma_scalene_slack(&u, &medians(&u)).unwrap().value, 4.945_146_133_900_75, max_relative = 1e-13);
        let iso = tri(2.0, 2.0, 3.0);
        assert_eq!(lemma_scalene_slack(&iso, &medians(&iso)), Err(TriangleError::NotScalene));
    }

    #[test]
    fn ordering_product_values() {
        let t = tri(3.0, 4.0, 5.0);
        let m = ordering_products(&t, &medians(&t));
        assert_relative_eq!(m.a_prod, 12.816_005_617_976_297, max_relative = 1e-14);
        assert_relative_eq!(m.b_prod, 14.422_205_101_855_957, max_relative = 1e-14);
        assert_eq!(m.c_prod, 12.5);
        assert!(m.dominance_slack() > 0.0);
        let l = ordering_products(&t, &bisectors(&t));
        assert_relative_eq!(l.a_prod, 12.649_110_640_673_518, max_relative = 1e-14);
        assert_relative_eq!(l.b_prod, 13.416_407_864_998_738, max_relative = 1e-14);
        assert_relative_eq!(l.c_prod, 12.121_830_534_626_529, max_relative = 1e-14);
        assert!(l.b_dominates());
        let e = tri(1.0, 1.0, 1.0);
        let q = ordering_products(&e, &medians(&e));
        assert_eq!(q.a_prod, q.b_prod);
        assert_eq!(q.b_prod, q.c_prod);
        assert!(q.b_dominates());
    }

    #[test]
    fn isosceles_forms() {
        assert_eq!(isosceles_slack_case1(1.0).unwrap().value, 0.0);
        assert_eq!(isosceles_slack_case2(1.0).unwrap().value, 0.0);
        let c1 = isosceles_slack_case1(0.8).unwrap().value;
        assert_relative_eq!(c1, 0.057_052_130_514_148_755, max_relative = 1e-12);
        let t = tri(0.8, 0.8, 1.0);
        assert_relative_eq!(c1, 2.0 * slack_main(&t, &medians(&t)).value, max_relative = 1e-10);
        assert_relative_eq!(isosceles_slack_case1(0.51).unwrap().value, 0.515_312_770_173_130_9, max_relative = 1e-12);
        let c2 = isosceles_slack_case2(0.5).unwrap().value;
        assert_relative_eq!(c2, 0.250_806_901_337_553_4, max_relative = 1e-12);
        let t = tri(0.5, 1.0, 1.0);
        assert_relative_eq!(c2, 2.0 * slack_main(&t, &medians(&t)).value, max_relative = 1e-10);
        assert_relative_eq!(isosceles_slack_case2(0.01).unwrap().value, 0.179_795_258_844_410_68, max_relative = 1e-12);
        assert!(isosceles_slack_case1(0.5).is_err());
        assert!(isosceles_slack_case1(1.1).is_err());
        assert!(isosceles_slack_case2(0.0).is_err());
    }

    #[test]
    fn normalized_slack_values() {
        assert_eq!(normalized_slack_xy(1.0, 1.0).unwrap(), 0.0);
        let f = normalized_slack_xy(0.6, 0.8).unwrap();
        assert_relative_eq!(f, 0.159_300_522_905_909_9, max_relative = 1e-12);
        let t = tri(3.0, 4.0, 5.0);
        assert_relative_eq!(f, 2.0 * slack_main(&t, &medians(&t)).value / 25.0, max_relative = 1e-12);
        assert!(normalized_slack_xy(0.5 + 1e-9, 0.5).is_err());
    }

    #[test]
    fn bisector_ratio_values() {
        assert_eq!(bisector_ratio_slack(&tri(1.0, 1.0, 1.0)).value, 0.0);
        let r = bisector_ratio_slack(&tri(3.0, 4.0, 5.0)).value;
        assert_relative_eq!(r, 0.057_078_722_109_417_82, max_relative = 1e-12);
        assert!(bisector_ratio_slack(&tri(2.0, 3.0, 4.0)).value >= 0.0);
        assert!(bisector_chain_slack(&tri(2.0, 3.0, 4.0)).value >= 0.0);
    }

    #[test]
    fn open_problem_values() {
        let t = tri(3.0, 4.0, 5.0);
        let m = medians(&t);
        let (s1, s2) = open_problem_slacks(&t, &m);
        assert_eq!(s1.value, slack_main(&t, &m).value);
        assert_eq!(s2.value, slack_quadratic(&t, &m).value);
        let e = tri(1.0, 1.0, 1.0);
        let g = general_cevians(&e, &GeneralCevianParams::new(0.1, 0.7, 0.3).unwrap());
        let (s1, s2) = open_problem_slacks(&e, &g);
        assert_eq!((s1.value, s2.value), (0.0, 0.0));
        let g = general_cevians(&t, &GeneralCevianParams::new(0.99, 0.5, 0.01).unwrap());
        let (s1, s2) = open_problem_slacks(&t, &g);
        assert_relative_eq!(s1.value, -0.651_587_760_580_378, max_relative = 1e-11);
        assert_relative_eq!(s2.value, -11.085_791_044_397_777, max_relative = 1e-12);
    }

    /// The two rearranged forms used in the main proof, expanded on sample
    /// triangles and compared with the direct slack.
    #[test]
    fn equivalent_forms_match_direct_slack() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut n = 0;
        while n < 2000 {
            let (a, b, c) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let Ok(t) = validate_sides(a, b, c) else { continue };
            n += 1;
            let m = medians(&t);
            let (a, b, c) = (t.a(), t.b(), t.c());
            let (pa, pb, pc) = (a * m.la, b * m.lb, c * m.lc);
            let direct = slack_main(&t, &m).value;
            let first = (c.sqrt() * m.la / (b.sqrt() * m.lb) - 1.0) * pb
                + (c.sqrt() * m.lb / (a.sqrt() * m.la) - 1.0) * pa
                + ((a * b).sqrt() / c - 1.0) * pc;
            let second = (c.sqrt() * m.la / (b.sqrt() * m.lb) - 1.0) * pb
                + (a.sqrt() * m.lb / (c.sqrt() * m.lc) - 1.0) * pc
                + (b.sqrt() * m.lc / (a.sqrt() * m.la) - 1.0) * pa;
            let tol = 1e-12 * scale2(&t, &m);
            assert!((first - direct).abs() <= tol, "{first} vs {direct}");
            assert!((second - direct).abs() <= tol, "{second} vs {direct}");
        }
    }

    #[test]
    fn homogeneity() {
        let t = tri(2.0, 3.0, 4.0);
        for k in [0.5, 2.0, 10.0] {
            let tk = t.scaled(k).unwrap();
            for (cv, cvk) in [
                (medians(&t), medians(&tk)),
                (altitudes(&t), altitudes(&tk)),
                (bisectors(&t), bisectors(&tk)),
            ] {
                assert_relative_eq!(slack_main(&tk, &cvk).value, k * k * slack_main(&t, &cv).value, max_relative = 1e-10);
                // quadratic slack has degree three
                assert_relative_eq!(
                    slack_quadratic(&tk, &cvk).value,
                    k * k * k * slack_quadratic(&t, &cv).value,
                    max_relative = 1e-10
                );
                let (p, pk) = (ordering_products(&t, &cv), ordering_products(&tk, &cvk));
                assert_relative_eq!(pk.b_prod, k * k * p.b_prod, max_relative = 1e-10);
            }
            let (m, mk) = (medians(&t), medians(&tk));
            let r = key_system_residuals(&t, &m).unwrap();
            let rk = key_system_residuals(&tk, &mk).unwrap();
            for i in 0..3 {
                assert_relative_eq!(rk[i].value, k * k * r[i].value, max_relative = 1e-10);
            }
            assert_relative_eq!(
                lemma_scalene_slack(&tk, &mk).unwrap().value,
                k * k * lemma_scalene_slack(&t, &m).unwrap().value,
                max_relative = 1e-10
            );
        }
    }
}
