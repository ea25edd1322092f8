//! Browser bindings: compose two maps and draw the rectangle diagram, map one interval
//! onto another, and factor an element of G[𝒫] into a pair of subdivision codes.
//!
//! Each export has a plain Rust twin returning `Result<String, String>` so the logic
//! is testable natively; the exported functions only convert errors to `JsValue`.

use plgroup::construct::map_interval;
use plgroup::io::{code_to_json, plmap_from_json, plmap_to_json};
use plgroup::rational::parse_q;
use plgroup::ring::SlopeGroup;
use plgroup::subdivide::factor;
use plgroup::svg::render_svg;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn parse_map(text: &str) -> Result<plgroup::plmap::PLMap, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    plmap_from_json(&v).map_err(|e| e.to_string())
}

fn err(e: plgroup::Error) -> String {
    json!({"error": e.code(), "message": e.to_string()}).to_string()
}

/// Returns {"map": f∘g, "svg": diagram}.
pub fn compose_and_render(f: &str, g: &str, width: u32, height: u32) -> Result<String, String> {
    let h = parse_map(f)?.compose(&parse_map(g)?);
    let window = if h.has_bounded_support() || h.is_identity() {
        None
    } else {
        let b = h.breaks();
        match (b.first(), b.last()) {
            (Some(lo), Some(hi)) => Some((lo - plgroup::rational::one(), hi + plgroup::rational::one())),
            _ => Some((plgroup::rational::zero(), plgroup::rational::one())),
        }
    };
    let svg = render_svg(&h, window, width, height).map_err(err)?;
    Ok(json!({"map": plmap_to_json(&h), "svg": svg}).to_string())
}

/// An element of G(R;A,P) taking [a,c] onto [a2,c2]; `slopes` is a comma-separated list.
pub fn map_interval_text(slopes: &str, a: &str, c: &str, a2: &str, c2: &str) -> Result<String, String> {
    let gens = slopes.split(',').map(|s| parse_q(s.trim())).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let g = SlopeGroup::new(gens).map_err(err)?;
    let q = |s: &str| parse_q(s.trim()).map_err(err);
    let f = map_interval(&q(a)?, &q(c)?, &q(a2)?, &q(c2)?, &g).map_err(|e| {
        let mut v = json!({"error": e.code(), "message": e.to_string()});
        if let plgroup::Error::CongruenceViolated { delta } = e {
            v["delta"] = json!(delta);
        }
        v.to_string()
    })?;
    let svg = render_svg(&f, Some(window(&f)), 480, 200).map_err(err)?;
    Ok(json!({"map": plmap_to_json(&f), "svg": svg}).to_string())
}

fn window(f: &plgroup::plmap::PLMap) -> (plgroup::Q, plgroup::Q) {
    let b = f.breaks();
    let one = plgroup::rational::one();
    match (b.first(), b.last()) {
        (Some(lo), Some(hi)) if lo < hi => (lo - &one, hi + &one),
        (Some(x), _) => (x - &one, x + &one),
        _ => (plgroup::rational::zero(), one),
    }
}

/// Factor codes of f ∈ G[𝒫]; `pp` is a comma-separated list of integers.
pub fn factor_text(f: &str, pp: &str) -> Result<String, String> {
    let pp = pp
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let (d, d2) = factor(&parse_map(f)?, &pp).map_err(err)?;
    Ok(json!({"domain": code_to_json(&d), "range": code_to_json(&d2)}).to_string())
}

#[wasm_bindgen]
pub fn compose(f: &str, g: &str, width: u32, height: u32) -> Result<String, JsValue> {
    compose_and_render(f, g, width, height).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = mapInterval)]
pub fn map_interval_js(slopes: &str, a: &str, c: &str, a2: &str, c2: &str) -> Result<String, JsValue> {
    map_interval_text(slopes, a, c, a2, c2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = factorElement)]
pub fn factor_js(f: &str, pp: &str) -> Result<String, JsValue> {
    factor_text(f, pp).map_err(|e| JsValue::from_str(&e))
}
