//! Browser bindings: order-lifting profiles, class-number tables and
//! valuation growth, each returned as the CLI's JSON report.

use refclass::cli::{class_numbers_report, growth_report, profile_report, RunConfig};
use refclass::report::Report;
use wasm_bindgen::prelude::*;

/// Largest cyclotomic level the page will compute; keeps the tab responsive.
pub const DEMO_LEVEL_CAP: u64 = 600;

fn config(p: u32, q: u32, n_max: u32) -> Result<RunConfig, String> {
    let p = refclass::exactnum::check_odd_prime(p as i64).map_err(|e| e.to_string())?;
    if !refclass::exactnum::is_prime(q as u64) || q as u64 == p {
        return Err(format!("q = {q} must be a prime different from p"));
    }
    let mut cfg = RunConfig::new(p, n_max);
    cfg.q = q as u64;
    cfg.cap = DEMO_LEVEL_CAP;
    Ok(cfg)
}

fn render(report: refclass::Result<Report>) -> Result<String, String> {
    report.map(|r| r.to_json()).map_err(|e| e.to_string())
}

pub fn profile_json(p: u32, q: u32, n_max: u32) -> Result<String, String> {
    render(profile_report(&config(p, q, n_max)?))
}

pub fn class_numbers_json(p: u32, n_max: u32) -> Result<String, String> {
    render(class_numbers_report(&config(p, 2, n_max)?))
}

pub fn growth_json(p: u32, n_max: u32) -> Result<String, String> {
    render(growth_report(&config(p, 2, n_max)?))
}

#[wasm_bindgen]
pub fn profile(p: u32, q: u32, n_max: u32) -> Result<String, JsValue> {
    profile_json(p, q, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = classNumbers)]
pub fn class_numbers(p: u32, n_max: u32) -> Result<String, JsValue> {
    class_numbers_json(p, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn growth(p: u32, n_max: u32) -> Result<String, JsValue> {
    growth_json(p, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = levelCap)]
pub fn level_cap() -> u32 {
    DEMO_LEVEL_CAP as u32
}
