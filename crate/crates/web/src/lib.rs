//! Browser bindings: ray diagrams, patience sorting and the corner height law.
//! Every export returns a JSON string; errors become JS exceptions.

use serde_json::json;
use wasm_bindgen::prelude::*;

use tpng::patience::patience_sort;
use tpng::png::{broken_lines, corner_height, height_grid, sample_png};
use tpng::stats::{replicate, Histogram};
use tpng::symfun::{inversion_nodes, law_from_observable, png_specializations, schur_observable_rhs, ObservableMode};

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// One t-PNG sample on [0, chi] x [0, eta] with intensity theta^2: nucleations,
/// ray segments, crossings, broken lines and heights on a `grid` x `grid` mesh.
#[wasm_bindgen]
pub fn png_diagram(chi: f64, eta: f64, theta: f64, t: f64, seed: u64, grid: usize) -> Result<String, JsValue> {
    let d = sample_png(chi, eta, theta * theta, t, seed).map_err(js_err)?;
    let doc = json!({
        "diagram": d,
        "broken_lines": broken_lines(&d),
        "heights": height_grid(&d, grid.max(1), grid.max(1)),
    });
    Ok(doc.to_string())
}

/// Piles (top card first) after sorting `deck`, a permutation of 1..N.
#[wasm_bindgen]
pub fn patience(deck: Vec<u32>, t: f64, seed: u64) -> Result<String, JsValue> {
    let s = patience_sort(&deck, t, seed).map_err(js_err)?;
    Ok(json!({ "piles": s.top_first() }).to_string())
}

/// Histogram of H(1,1) over `samples` runs next to the exact law recovered from
/// the Schur measure side (for 0 < t < 1).
#[wasm_bindgen]
pub fn height_law(theta: f64, t: f64, samples: u32, seed: u64) -> Result<String, JsValue> {
    let hs = replicate(samples as u64, seed, 1, |s| {
        corner_height(1.0, 1.0, theta * theta, t, s)
    })
    .map_err(js_err)?;
    let hist = Histogram::from_values(hs.iter().map(|&h| h as i64));
    let exact = if t > 0.0 && t < 1.0 {
        let kmax = 12;
        let (r1, r2, _) = png_specializations(1.0, 1.0, theta, t, &[]).map_err(js_err)?;
        let values = inversion_nodes(t, kmax)
            .into_iter()
            .map(|z| schur_observable_rhs(&r1, &r2, z, t, ObservableMode::TruncatedExact, 30, 0).map(|e| (z, e.value)))
            .collect::<tpng::Result<Vec<_>>>()
            .map_err(js_err)?;
        law_from_observable(&values, t, kmax).ok().map(|l| l.pmf)
    } else {
        None
    };
    Ok(json!({ "counts": hist.counts, "samples": samples, "exact": exact }).to_string())
}
