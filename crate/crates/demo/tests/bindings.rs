use cevian_demo::{certify_cover, run_search, slack_grid, verify_triangle};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn grid_is_null_outside_the_domain() {
    let g = parse(slack_grid(5).unwrap());
    let v = g["values"].as_array().unwrap();
    assert_eq!(v.len(), 25);
    // (x, y) = (0, 0) is outside; (1, 1) is the equality corner
    assert!(v[0].is_null());
    assert_eq!(v[24].as_f64(), Some(0.0));
    assert!(slack_grid(1).is_err());
}

#[test]
fn certify_cover_completes_and_reports_factored_boxes() {
    let c = parse(certify_cover("key-system", 1e-3, 60).unwrap());
    assert_eq!(c["complete"], true);
    assert!(!c["factored"].as_array().unwrap().is_empty());
    let c = parse(certify_cover("main-median", 0.0, 12).unwrap());
    assert_eq!(c["complete"], false);
    assert!(certify_cover("nonsense", 1e-3, 60).is_err());
}

#[test]
fn verify_and_search_round_trip() {
    let v = parse(verify_triangle(3.0, 4.0, 5.0, "median").unwrap());
    assert_eq!(v["all_hold"], true);
    assert!(verify_triangle(1.0, 1.0, 2.0, "median").is_err());
    assert!(verify_triangle(3.0, 4.0, 5.0, "spline").is_err());

    let s = parse(run_search("unconstrained", "general", 5000, 3).unwrap());
    assert!(s["totals"]["violating"].as_u64().unwrap() > 0);
    let s = parse(run_search("open-problem", "median", 5000, 3).unwrap());
    assert_eq!(s["totals"]["violating"].as_u64(), Some(0));
    assert!(run_search("unconstrained", "general", 10_000_000, 3).is_err());
}
