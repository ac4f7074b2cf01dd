use approx::assert_relative_eq;
use cevian_core::certify::{self, expr, sampling, Target};
use cevian_core::inequality::{self, scale2};
use cevian_core::interval::Box2;
use cevian_core::search::sample_triangle;
use cevian_core::triangle::{self, GeneralCevianParams, MixedWeights, SideTriple};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 20_000;

fn random_triangle(rng: &mut ChaCha8Rng) -> SideTriple {
    let k = 10f64.powf(rng.random_range(-3.0..3.0));
    sample_triangle(rng).scaled(k).unwrap()
}

#[test]
fn median_ordering_and_median_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..N {
        let t = random_triangle(&mut rng);
        let m = triangle::medians(&t);
        assert!(m.la >= m.lb && m.lb >= m.lc, "{t:?}");
        assert!(m.lc + m.lb > m.la);
    }
}

#[test]
fn classic_families_satisfy_both_inequalities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..N {
        let t = random_triangle(&mut rng);
        let w = MixedWeights::new(rng.random(), rng.random(), rng.random()).unwrap();
        for cv in [
            triangle::medians(&t),
            triangle::altitudes(&t),
            triangle::bisectors(&t),
            triangle::mixed_cevians(&t, &w),
        ] {
            let tol = 1e-12 * scale2(&t, &cv);
            assert!(inequality::slack_main(&t, &cv).holds(tol), "{t:?} {cv:?}");
            assert!(inequality::slack_quadratic(&t, &cv).holds(tol * t.c()), "{t:?} {cv:?}");
        }
    }
}

#[test]
fn lemma_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..N {
        let t = random_triangle(&mut rng);
        assert!(triangle::sqrt_sides(&t).is_ok());
        let m = triangle::medians(&t);
        let tol = 1e-12 * scale2(&t, &m);
        for r in inequality::key_system_residuals(&t, &m).unwrap() {
            assert!(r.holds(tol), "{t:?} {r:?}");
        }
        if t.is_scalene() {
            assert!(inequality::lemma_scalene_slack(&t, &m).unwrap().holds(tol));
        }
        assert!(inequality::ordering_products(&t, &m).dominance_slack() >= -tol);
        let l = triangle::bisectors(&t);
        assert!(inequality::ordering_products(&t, &l).dominance_slack() >= -1e-12 * scale2(&t, &l));
        assert!(inequality::bisector_ratio_slack(&t).holds(1e-12));
        assert!(inequality::bisector_chain_slack(&t).holds(1e-12 * t.c().sqrt() * l.lc));
    }
}

#[test]
fn key_system_equality_on_equilateral() {
    for s in [1e-3, 1.0, 7.5, 1e4] {
        let t = SideTriple::new(s, s, s).unwrap();
        let m = triangle::medians(&t);
        for r in inequality::key_system_residuals(&t, &m).unwrap() {
            assert!(r.value.abs() < 1e-9 * s * s, "{r:?}");
        }
    }
}

#[test]
fn normalized_slack_matches_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..N {
        let t = random_triangle(&mut rng);
        let m = triangle::medians(&t);
        let direct = 2.0 * inequality::slack_main(&t, &m).value / (t.c() * t.c());
        let f = inequality::normalized_slack(&triangle::normalize(&t));
        assert!((f - direct).abs() <= 1e-10 * direct.abs().max(1e-300) + 1e-15, "{t:?}");
    }
}

#[test]
fn general_cevians_at_midpoints_are_medians() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..N {
        let t = random_triangle(&mut rng);
        let g = triangle::general_cevians(&t, &GeneralCevianParams::MIDPOINTS);
        let m = triangle::medians(&t);
        for (u, v) in g.as_array().into_iter().zip(m.as_array()) {
            assert_relative_eq!(u, v, max_relative = 1e-12);
        }
    }
}

#[test]
fn isosceles_factorizations() {
    for i in 1..=1000 {
        let x = 0.5 + 0.5 * i as f64 / 1000.0;
        let s = inequality::isosceles_slack_case1(x).unwrap().value;
        let f = (1.0 - x.sqrt()) * expr::isosceles_factor1(x).unwrap();
        assert!((s - f).abs() <= 1e-10 * s.abs() + 1e-16, "{x}");
        let x = i as f64 / 1000.0;
        let s = inequality::isosceles_slack_case2(x).unwrap().value;
        let f = (1.0 - x.sqrt()) * expr::isosceles_factor2(x).unwrap();
        assert!((s - f).abs() <= 1e-10 * s.abs() + 1e-16, "{x}");
    }
}

fn domain_box() -> impl Strategy<Value = (Box2, f64, f64)> {
    (0.0f64..1.0, 0.5f64..1.0, -7.0f64..-0.5, -7.0f64..-0.5, 0.0f64..1.0, 0.0f64..1.0).prop_filter_map(
        "box must meet the domain",
        |(x0, y0, lw, lh, u, v)| {
            let (w, h) = (10f64.powf(lw), 10f64.powf(lh));
            let b = Box2::from_bounds(x0, (x0 + w).min(1.0), y0, (y0 + h).min(1.0)).ok()?;
            let x = b.x.lo() + u * b.x.width();
            let y = b.y.lo() + v * b.y.width();
            (triangle::in_normalized_domain(x, y) && x >= 1e-6 && x + y >= 1.0 + 1e-6).then_some((b, x, y))
        },
    )
}

proptest! {
    #[test]
    fn enclosure_contains_point_value((b, x, y) in domain_box()) {
        for t in Target::ALL {
            let e = certify::eval_target_interval(t, &b, 1e-6).unwrap();
            let v = t.point_value(x, y).unwrap();
            prop_assert!(e.contains(v), "{t} {b:?} {x} {y} {e:?} {v}");
        }
    }

    #[test]
    fn natural_extension_is_isotone((b, x, y) in domain_box(), s in 0.0f64..1.0) {
        let inner = Box2::from_bounds(
            x - s * (x - b.x.lo()),
            x + s * (b.x.hi() - x),
            y - s * (y - b.y.lo()),
            y + s * (b.y.hi() - y),
        ).unwrap();
        for t in Target::ALL {
            let big = certify::eval_target_natural(t, &b, 1e-6).unwrap();
            let small = certify::eval_target_natural(t, &inner, 1e-6).unwrap();
            prop_assert!(small.is_subset_of(&big), "{t} {small:?} {big:?}");
        }
    }
}

#[test]
fn proven_boxes_survive_interior_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in Target::ALL {
        let task = certify::CertificationTask::new(t);
        let cert = certify::certify(&task).unwrap();
        assert!(cert.is_complete(), "{t}");
        for p in &cert.proven {
            for _ in 0..50 {
                if let Some((x, y)) = sampling::sample_in_domain(&p.region, task.mu, &mut rng) {
                    assert!(t.point_value(x, y).unwrap() > 0.0, "{t} {p:?} {x} {y}");
                }
            }
        }
    }
}

#[test]
fn certificate_is_worker_independent() {
    let mut task = certify::CertificationTask::new(Target::KeySystem);
    let one = certify::certify(&task).unwrap();
    task.workers = 4;
    let four = certify::certify(&task).unwrap();
    assert_eq!(one.proven, four.proven);
    assert_eq!(one.undecided, four.undecided);
    assert_eq!(one.excluded, four.excluded);
}

#[test]
fn delta_zero_leaves_the_equality_corner_undecided() {
    let mut task = certify::CertificationTask::new(Target::MainMedian);
    task.delta = 0.0;
    task.max_depth = 30;
    let cert = certify::certify(&task).unwrap();
    assert!(!cert.is_complete());
    assert!(cert.undecided.iter().all(|u| u.region.x.hi() > 0.99 && u.region.y.hi() > 0.99));
}
