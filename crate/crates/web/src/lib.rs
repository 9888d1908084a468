//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every entry point samples a named test signal on `n` points spanning
//! `[-half_width, half_width]` and returns flat `f64` arrays.

use wasm_bindgen::prelude::*;

use covariant_core::compositions::{
    default_hilbert_scales, hardy_littlewood, hardy_littlewood_centered, hilbert_pv, hilbert_via_conj_poisson,
};
use covariant_core::generators::{generate, Params};
use covariant_core::{covariant, Fiducial, FieldAxes, LogAxis, RealGrid, RepIndex, Signal};

fn err(e: covariant_core::Error) -> String {
    e.to_string()
}

fn sample(expr: &str, n: usize, half_width: f64) -> Result<Signal, String> {
    if n < 2 {
        return Err("need at least two samples".into());
    }
    let grid = RealGrid::new(-half_width, 2.0 * half_width / (n - 1) as f64, n).map_err(err)?;
    generate(expr, &Params::new(), grid).map_err(err)
}

fn re(f: &Signal) -> impl Iterator<Item = f64> + '_ {
    f.values().iter().map(|v| v.re)
}

/// Real part of the signal.
#[wasm_bindgen]
pub fn signal(expr: &str, n: usize, half_width: f64) -> Result<Vec<f64>, String> {
    Ok(re(&sample(expr, n, half_width)?).collect())
}

/// `|W f(a, b)|` for the covariant transform with `fiducial` at `p = 2`,
/// `a_count` rows from scale 1/16 to 16, row-major with the smallest scale
/// first.
#[wasm_bindgen]
pub fn scalogram(expr: &str, n: usize, half_width: f64, fiducial: &str, a_count: usize) -> Result<Vec<f64>, String> {
    let f = sample(expr, n, half_width)?;
    let fid = Fiducial::builtin(fiducial).map_err(err)?;
    let axes = FieldAxes::new(LogAxis::from_range(1.0 / 16.0, 16.0, a_count).map_err(err)?, *f.grid());
    let u = covariant(&fid, RepIndex::TWO, &f, &axes).map_err(err)?;
    Ok(u.values().iter().map(|v| v.norm()).collect())
}

/// Hilbert transform by principal value (first `n` values) and as the
/// vanishing-scale limit of the conjugate Poisson integral (last `n`).
#[wasm_bindgen]
pub fn hilbert(expr: &str, n: usize, half_width: f64) -> Result<Vec<f64>, String> {
    let f = sample(expr, n, half_width)?;
    let pv = hilbert_pv(&f);
    let cp = hilbert_via_conj_poisson(&f, &default_hilbert_scales()).map_err(err)?.value;
    Ok(re(&pv).chain(re(&cp)).collect())
}

/// `|f|`, the uncentered and the centered maximal functions, `n` values
/// each.
#[wasm_bindgen]
pub fn maximal(expr: &str, n: usize, half_width: f64) -> Result<Vec<f64>, String> {
    let f = sample(expr, n, half_width)?;
    let abs = f.values().iter().map(|v| v.norm());
    let m = hardy_littlewood(&f);
    let mc = hardy_littlewood_centered(&f);
    Ok(abs.chain(re(&m)).chain(re(&mc)).collect())
}
