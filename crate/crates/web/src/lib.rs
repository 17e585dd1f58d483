//! Browser bindings for the demo page: resampling, PRDC and FD on 2-D points.

use genmetrics::analysis::SeededRng;
use genmetrics::features::{summarize, FeatureSet};
use genmetrics::metrics::{frechet_distance, prdc, ManifoldParams};
use genmetrics::pixel::{resize, FilterKind, PixelBuffer};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Resamples an RGBA canvas image (alpha is dropped and returned opaque).
#[wasm_bindgen]
pub fn resample_rgba(
    rgba: &[u8],
    width: usize,
    height: usize,
    out_width: usize,
    out_height: usize,
    filter: &str,
    antialias: bool,
) -> Result<Vec<u8>, JsError> {
    if rgba.len() != width * height * 4 {
        return Err(JsError::new("buffer length does not match width x height x 4"));
    }
    let filter: FilterKind = filter.parse().map_err(js_err)?;
    let rgb: Vec<u8> = rgba.chunks_exact(4).flat_map(|p| [p[0], p[1], p[2]]).collect();
    let src = PixelBuffer::from_u8(width, height, 3, rgb).map_err(js_err)?;
    let out = resize(&src, out_width, out_height, filter, antialias).map_err(js_err)?;
    Ok(out.as_u8().expect("u8 in, u8 out").chunks_exact(3).flat_map(|p| [p[0], p[1], p[2], 255]).collect())
}

fn points(xy: &[f64]) -> Result<FeatureSet, JsError> {
    if xy.len() % 2 != 0 {
        return Err(JsError::new("points must be x,y pairs"));
    }
    let rows: Vec<[f64; 2]> = xy.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
    FeatureSet::from_rows(&rows).map_err(js_err)
}

/// `[precision, recall, density, coverage]` of `fake` against `real`.
#[wasm_bindgen]
pub fn prdc_2d(real: &[f64], fake: &[f64], k: usize) -> Result<Vec<f64>, JsError> {
    let r = prdc(&points(real)?, &points(fake)?, ManifoldParams { k_pr: k, k_dc: k }).map_err(js_err)?;
    Ok(vec![r.precision, r.recall, r.density, r.coverage])
}

/// Fréchet distance between Gaussian fits of two point clouds.
#[wasm_bindgen]
pub fn frechet_2d(real: &[f64], fake: &[f64]) -> Result<f64, JsError> {
    let a = summarize(&points(real)?).map_err(js_err)?;
    let b = summarize(&points(fake)?).map_err(js_err)?;
    frechet_distance(&a, &b).map_err(js_err)
}

/// `n` points from an axis-aligned Gaussian, flattened as x,y pairs.
#[wasm_bindgen]
pub fn gaussian_cloud(n: usize, mx: f64, my: f64, sx: f64, sy: f64, seed: u64) -> Vec<f64> {
    let mut rng = SeededRng::new(seed, 0);
    let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut out = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let r = (-2.0 * (1.0 - unit()).ln()).sqrt();
        let t = std::f64::consts::TAU * unit();
        out.push(mx + sx * r * t.cos());
        out.push(my + sy * r * t.sin());
    }
    out
}
