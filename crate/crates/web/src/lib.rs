//! Browser bindings: build a bundle and show its cohomology table, check an
//! anchoring subspace, and print the explicit anchoring tensor.

use bgg_bundles::anchor::{anchoring_tensor, is_anchoring, tensor_to_subspace};
use bgg_bundles::exactlin::{Field, DEFAULT_PRIME};
use bgg_bundles::pipeline::{anchor_check, construct, ConstructionParams};
use serde_json::json;
use wasm_bindgen::prelude::*;

const FIELD: Field = Field::Fp(DEFAULT_PRIME);

/// Sample cap, so a click never stalls the page.
pub const MAX_SAMPLES: u32 = 5_000;

pub fn bundle_json(
    n: usize,
    l: usize,
    r: usize,
    seed: u64,
    samples: u32,
) -> Result<String, String> {
    if n > 4 {
        return Err("the demo stops at P^4".into());
    }
    let mut params = ConstructionParams::new(n, l, r);
    params.seed = seed;
    params.policy.exhaustive_field = None;
    params.policy.random_samples = samples.min(MAX_SAMPLES) as u64;
    let rep = construct(&params).map_err(|e| e.to_string())?;
    let v = &rep.verification;
    Ok(json!({
        "p": rep.multiplicity,
        "dim_l": rep.l_dim,
        "terms": rep.resolution.terms.iter().map(|t| t.rank).collect::<Vec<_>>(),
        "rank": v.rank,
        "hom_dim": v.hom_dim,
        "hd": v.hd.hd,
        "attempt": rep.attempt + 1,
        "points_checked": v.random_scan.points_checked,
        "table_text": rep.table_text(),
        "table": v.hd.table,
    })
    .to_string())
}

pub fn anchor_json(u: usize, w: usize, d: usize, seed: u64) -> Result<String, String> {
    if u * w > 64 {
        return Err("keep u·w ≤ 64 in the browser".into());
    }
    let s = anchor_check(FIELD, u, w, d, seed).map_err(|e| e.to_string())?;
    serde_json::to_string(&s).map_err(|e| e.to_string())
}

pub fn tensor_json(u: usize, d: usize, m: usize) -> Result<String, String> {
    if u > 8 || d > 8 || m > 16 {
        return Err("keep u, d ≤ 8 and m ≤ 16 in the browser".into());
    }
    let t = anchoring_tensor(Field::Q, u, d, m).map_err(|e| e.to_string())?;
    let verdict = is_anchoring(&tensor_to_subspace(&t).map_err(|e| e.to_string())?);
    let slices: Vec<Vec<Vec<String>>> = t
        .slices()
        .iter()
        .map(|s| {
            (0..s.rows())
                .map(|i| (0..s.cols()).map(|j| s.get(i, j).to_string()).collect())
                .collect()
        })
        .collect();
    Ok(
        json!({ "u": t.u(), "d": t.d(), "slices": slices, "anchoring": verdict.anchoring })
            .to_string(),
    )
}

#[wasm_bindgen]
pub fn bundle(n: usize, l: usize, r: usize, seed: u32, samples: u32) -> Result<String, JsError> {
    bundle_json(n, l, r, seed as u64, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn anchor(u: usize, w: usize, d: usize, seed: u32) -> Result<String, JsError> {
    anchor_json(u, w, d, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tensor(u: usize, d: usize, m: usize) -> Result<String, JsError> {
    tensor_json(u, d, m).map_err(|e| JsError::new(&e))
}
