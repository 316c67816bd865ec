//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string; errors come back as a JS string. The
//! `*_json` functions hold the logic so they can be tested natively.

use liegen::classify::{parent_formula, total_count};
use liegen::generation::{immediate_descendants, DescendantFilter};
use liegen::liering::{class, has_characteristic_p, p_class};
use liegen::presentation::{catalog_p7, instantiate, parse, Binding, P8_PARENTS};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest prime the page will classify; beyond this a browser tab stalls.
pub const MAX_DEMO_P: u32 = 13;

/// Formula values per parent at `p`, with the total.
pub fn porc_counts_json(p: u32) -> Result<String, String> {
    liegen::gfplin::check_prime(p).map_err(|e| e.to_string())?;
    if p < 5 {
        return Err(format!("p must be at least 5, got {p}"));
    }
    let parents: Vec<Value> = P8_PARENTS
        .iter()
        .map(|id| Ok(json!({ "id": id, "expected": parent_formula(id, p).map_err(|e| e.to_string())? })))
        .collect::<Result<_, String>>()?;
    Ok(json!({ "p": p, "parents": parents, "total": total_count(p) }).to_string())
}

/// Instantiates a presentation; `x`, `y`, `z` are bound when present.
pub fn build_ring_json(text: &str, p: u32, x: Option<u32>, y: Option<u32>, z: Option<u32>) -> Result<String, String> {
    let pres = parse(text).map_err(|e| e.to_string())?;
    let mut binding = Binding::new();
    for (c, v) in [('x', x), ('y', y), ('z', z)] {
        if let Some(v) = v {
            binding.set(c, v);
        }
    }
    let ring = instantiate(&pres, p, &binding).map_err(|e| e.to_string())?;
    let ring_json: Value = serde_json::from_str(&ring.to_json()).expect("ring JSON parses");
    Ok(json!({
        "presentation": pres.to_string(),
        "order": format!("{p}^{}", ring.dim()),
        "dim": ring.dim(),
        "class": class(&ring),
        "p_class": p_class(&ring),
        "characteristic_p": has_characteristic_p(&ring),
        "ring": ring_json,
    })
    .to_string())
}

/// Generated maximal-class descendant counts of order `p^8` per parent,
/// next to the formula values.
pub fn descendant_counts_json(p: u32) -> Result<String, String> {
    if p > MAX_DEMO_P {
        return Err(format!("the demo stops at p = {MAX_DEMO_P}"));
    }
    porc_counts_json(p)?;
    let parents = catalog_p7(p, None).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    let mut total = 0;
    for id in P8_PARENTS {
        let mut count = 0;
        for c in parents.iter().filter(|c| c.entry.subsection == id) {
            count +=
                immediate_descendants(&c.ring, 8, DescendantFilter::MaximalClass).map_err(|e| e.to_string())?.len();
        }
        let expected = parent_formula(id, p).map_err(|e| e.to_string())?;
        total += count;
        rows.push(json!({ "id": id, "count": count, "expected": expected, "match": count as u64 == expected }));
    }
    let expected_total = total_count(p);
    Ok(json!({
        "p": p,
        "parents": rows,
        "total": total,
        "expected_total": expected_total,
        "match": total as u64 == expected_total,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn porc_counts(p: u32) -> Result<String, JsValue> {
    porc_counts_json(p).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn build_ring(text: &str, p: u32, x: Option<u32>, y: Option<u32>, z: Option<u32>) -> Result<String, JsValue> {
    build_ring_json(text, p, x, y, z).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn descendant_counts(p: u32) -> Result<String, JsValue> {
    descendant_counts_json(p).map_err(|e| JsValue::from_str(&e))
}
