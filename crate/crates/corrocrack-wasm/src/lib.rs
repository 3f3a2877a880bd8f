use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub fn lambert_w0(f: f64) -> f64 { corrocrack::numerics::lambert_w0(f).unwrap_or(f64::NAN) }
