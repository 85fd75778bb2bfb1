//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes the parameter overrides as a JSON object (for example
//! `{"alpha": 0.9, "m0": 1.5}`) applied on top of the base set, and returns a
//! JSON string. The plain-Rust functions in [`api`] do the work and are
//! testable off the browser.

use wasm_bindgen::prelude::*;

pub mod api;

fn js(r: Result<String, api::WebError>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// Exact, approximate and asymptotic outage of both systems along one axis.
#[wasm_bindgen]
pub fn op_curves(params: &str, axis: &str, start: f64, stop: f64, step: f64) -> Result<String, JsError> {
    js(api::op_curves(params, axis, start, stop, step))
}

/// Diversity order and coding gain of both systems.
#[wasm_bindgen]
pub fn do_cg_report(params: &str) -> Result<String, JsError> {
    js(api::do_cg_report(params))
}

/// Monte-Carlo estimate next to the exact value, at one parameter point.
#[wasm_bindgen]
pub fn monte_carlo(params: &str, trials: u32, seed: u32) -> Result<String, JsError> {
    js(api::monte_carlo(params, u64::from(trials), u64::from(seed)))
}
