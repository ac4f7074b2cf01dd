//! Browser bindings: a heat map of the normalized slack, interval
//! certification of one target with its box cover, single-triangle
//! verification, and a small seeded counterexample search.
//!
//! Every binding returns a JSON string; the plain functions underneath are
//! what the native tests exercise.

use cevian_core::certify::{self, CertificationTask, Target};
use cevian_core::report::{self, TriangleInput, VerifyConfig, DEFAULT_TOLERANCE};
use cevian_core::search::{self, CevianFamily, SearchConfig, SearchMode};
use cevian_core::CevianKind;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_DENSITY: usize = 400;
const MAX_SAMPLES: u64 = 200_000;

fn parse<T: serde::de::DeserializeOwned>(what: &str, name: &str) -> Result<T, String> {
    serde_json::from_value(Value::from(name)).map_err(|_| format!("unknown {what} '{name}'"))
}

/// Grid of `F(x, y)` over the normalized domain, row-major in `y` then `x`,
/// with `null` outside the domain.
pub fn slack_grid(density: usize) -> Result<String, String> {
    if !(2..=MAX_DENSITY).contains(&density) {
        return Err(format!("density must lie in 2..={MAX_DENSITY}"));
    }
    let step = 1.0 / (density - 1) as f64;
    let mut values = Vec::with_capacity(density * density);
    for j in 0..density {
        let y = j as f64 * step;
        for i in 0..density {
            let x = i as f64 * step;
            values.push(cevian_core::inequality::normalized_slack_xy(x, y).ok());
        }
    }
    Ok(json!({ "density": density, "values": values }).to_string())
}

/// Certifies `target` and returns the cover as `[x_lo, x_hi, y_lo, y_hi]`
/// boxes split into proven, factored (automedian bound) and undecided.
pub fn certify_cover(target: &str, delta: f64, max_depth: u32) -> Result<String, String> {
    let target = Target::from_name(target).ok_or_else(|| format!("unknown target '{target}'"))?;
    let mut task = CertificationTask::new(target);
    task.delta = delta;
    task.max_depth = max_depth;
    task.workers = 1;
    let (cert, budget) = match certify::certify(&task) {
        Ok(c) => (c, false),
        Err(certify::CertifyError::BudgetExceeded { partial, .. }) => (*partial, true),
        Err(e) => return Err(e.to_string()),
    };
    let corners = |b: &cevian_core::Box2| [b.x.lo(), b.x.hi(), b.y.lo(), b.y.hi()];
    let proven: Vec<_> = cert.proven.iter().filter(|p| !p.factored).map(|p| corners(&p.region)).collect();
    let factored: Vec<_> = cert.proven.iter().filter(|p| p.factored).map(|p| corners(&p.region)).collect();
    let undecided: Vec<_> = cert.undecided.iter().map(|u| corners(&u.region)).collect();
    Ok(json!({
        "target": target.name(),
        "complete": cert.is_complete() && !budget,
        "budget_exceeded": budget,
        "min_lower_bound": cert.min_lower_bound(),
        "proven": proven,
        "factored": factored,
        "undecided": undecided,
        "stats": cert.stats,
    })
    .to_string())
}

/// Every applicable slack for the triangle with sides `a, b, c`.
pub fn verify_triangle(a: f64, b: f64, c: f64, cevians: &str) -> Result<String, String> {
    let cfg = VerifyConfig {
        triangle: TriangleInput::Sides([a, b, c]),
        cevians: parse::<CevianKind>("Cevian family", cevians)?,
        weights: Some([1.0, 1.0, 1.0]),
        feet: Some([0.5, 0.5, 0.5]),
        tolerance: DEFAULT_TOLERANCE,
    };
    let r = report::run_verify(&cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

/// Seeded search; returns totals and the best few records.
pub fn run_search(mode: &str, family: &str, samples: u64, seed: u64) -> Result<String, String> {
    if samples > MAX_SAMPLES {
        return Err(format!("at most {MAX_SAMPLES} samples in the browser"));
    }
    let mut cfg = SearchConfig::new(parse::<SearchMode>("mode", mode)?, samples, seed);
    cfg.family = parse::<CevianFamily>("family", family)?;
    cfg.record_top = 5;
    cfg.workers = 1;
    let r = search::search(&cfg).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = slackGrid)]
pub fn slack_grid_js(density: usize) -> Result<String, JsValue> {
    js(slack_grid(density))
}

#[wasm_bindgen(js_name = certifyCover)]
pub fn certify_cover_js(target: &str, delta: f64, max_depth: u32) -> Result<String, JsValue> {
    js(certify_cover(target, delta, max_depth))
}

#[wasm_bindgen(js_name = verifyTriangle)]
pub fn verify_triangle_js(a: f64, b: f64, c: f64, cevians: &str) -> Result<String, JsValue> {
    js(verify_triangle(a, b, c, cevians))
}

#[wasm_bindgen(js_name = runSearch)]
pub fn run_search_js(mode: &str, family: &str, samples: u32, seed: u32) -> Result<String, JsValue> {
    js(run_search(mode, family, samples.into(), seed.into()))
}
