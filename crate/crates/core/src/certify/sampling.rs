//! Uniform sampling of `box ∩ W(mu, 0)`.

use rand::Rng;

use crate::interval::Box2;

type Pt = (f64, f64);

const MAX_ATTEMPTS: usize = 64;

/// Keeps the part of `poly` where `a x + b y + c >= 0`.
fn clip_half_plane(poly: &[Pt], a: f64, b: f64, c: f64) -> Vec<Pt> {
    let side = |p: &Pt| a * p.0 + b * p.1 + c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(&p), side(&q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Convex polygon `box ∩ {mu <= x <= y <= 1, x + y >= 1 + mu}`.
pub fn domain_polygon(b: &Box2, mu: f64) -> Vec<Pt> {
    let (x0, x1, y0, y1) = (b.x.lo(), b.x.hi(), b.y.lo(), b.y.hi());
    let mut poly = vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
    for (a, bb, c) in [
        (1.0, 0.0, -mu),
        (-1.0, 1.0, 0.0),
        (0.0, -1.0, 1.0),
        (1.0, 1.0, -(1.0 + mu)),
    ] {
        if poly.is_empty() {
            break;
        }
        poly = clip_half_plane(&poly, a, bb, c);
    }
    poly
}

fn tri_area(a: Pt, b: Pt, c: Pt) -> f64 {
    0.5 * ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).abs()
}

/// A uniform point of `box ∩ W(mu, 0)`, or `None` when the intersection has
/// no area (or is too thin for binary64 points to land inside).
pub fn sample_in_domain<R: Rng + ?Sized>(b: &Box2, mu: f64, rng: &mut R) -> Option<(f64, f64)> {
    let poly = domain_polygon(b, mu);
    if poly.len() < 3 {
        return None;
    }
    let fan: Vec<(Pt, Pt, Pt, f64)> = (1..poly.len() - 1)
        .map(|i| (poly[0], poly[i], poly[i + 1], tri_area(poly[0], poly[i], poly[i + 1])))
        .collect();
    let total: f64 = fan.iter().map(|t| t.3).sum();
    if !(total > 0.0) {
        return None;
    }
    // rejection keeps the draw uniform when rounding lands a point outside
    for _ in 0..MAX_ATTEMPTS {
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = fan[fan.len() - 1];
        for t in &fan {
            if pick < t.3 {
                chosen = *t;
                break;
            }
            pick -= t.3;
        }
        let (a, bp, c, _) = chosen;
        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
        let s = r1.sqrt();
        let (u, v, w) = (1.0 - s, s * (1.0 - r2), s * r2);
        let x = (u * a.0 + v * bp.0 + w * c.0).clamp(b.x.lo(), b.x.hi()).max(mu);
        let y = (u * a.1 + v * bp.1 + w * c.1).clamp(b.y.lo(), b.y.hi()).min(1.0);
        if x <= y && x + y >= 1.0 + mu {
            return Some((x, y));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn polygon_of_straddling_box() {
        let b = Box2::from_bounds(0.4, 0.6, 0.4, 0.6).unwrap();
        let p = domain_polygon(&b, 0.0);
        // triangle (0.4, 0.6), (0.5, 0.5), (0.6, 0.6)
        let area: f64 = (1..p.len() - 1).map(|i| tri_area(p[0], p[i], p[i + 1])).sum();
        assert!((area - 0.01).abs() < 1e-12, "{area}");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (x, y) = sample_in_domain(&b, 0.0, &mut rng).unwrap();
            assert!(b.contains(x, y) && x <= y && x + y >= 1.0);
        }
    }

    #[test]
    fn empty_outside() {
        let b = Box2::from_bounds(0.1, 0.2, 0.1, 0.2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert!(sample_in_domain(&b, 1e-6, &mut rng).is_none());
    }
}
