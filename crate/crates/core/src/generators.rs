//! Named test signals with numeric parameters.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signal::{RealGrid, Signal};

pub type Params = BTreeMap<String, f64>;

/// Generator names and their parameters with defaults.
pub const GENERATORS: &[(&str, &[(&str, f64)])] = &[
    ("gaussian", &[("width", 1.0), ("center", 0.0), ("amplitude", 1.0)]),
    ("mexican_hat", &[("width", 1.0)]),
    ("box", &[("lo", -1.0), ("hi", 1.0), ("height", 1.0)]),
    ("cos_window", &[("omega", 1.0), ("window", 10.0)]),
    ("cauchy_kernel", &[]),
    ("hardy", &[("shift", 1.0)]),
    ("anti_hardy", &[("shift", 1.0)]),
    ("poisson_kernel", &[("scale", 1.0)]),
    ("band_limited", &[("seed", 0.0), ("terms", 8.0), ("nu_lo", 0.1), ("nu_hi", 0.5), ("window", 20.0)]),
    ("nucleus", &[("amplitude", 0.4)]),
];

fn param(name: &str, params: &Params, key: &str) -> Result<f64> {
    if let Some(&v) = params.get(key) {
        return Ok(v);
    }
    GENERATORS
        .iter()
        .find(|(n, _)| *n == name)
        .and_then(|(_, ps)| ps.iter().find(|(k, _)| *k == key))
        .map(|&(_, v)| v)
        .ok_or_else(|| Error::invalid("param", format!("`{key}` is not a parameter of `{name}`")))
}

/// Samples the named generator on `grid`.
pub fn generate(name: &str, params: &Params, grid: RealGrid) -> Result<Signal> {
    let Some((_, known)) = GENERATORS.iter().find(|(n, _)| *n == name) else {
        let names: Vec<&str> = GENERATORS.iter().map(|(n, _)| *n).collect();
        return Err(Error::invalid("expr", format!("unknown generator `{name}` (known: {})", names.join(", "))));
    };
    for key in params.keys() {
        if !known.iter().any(|(k, _)| k == key) {
            return Err(Error::invalid("param", format!("`{key}` is not a parameter of `{name}`")));
        }
    }
    let p = |k: &str| param(name, params, k);
    let s = match name {
        "gaussian" => {
            let (w, c, amp) = (p("width")?, p("center")?, p("amplitude")?);
            positive("width", w)?;
            Signal::from_real_fn(grid, |x| amp * (-((x - c) / w).powi(2)).exp())
        }
        "mexican_hat" => {
            let w = p("width")?;
            positive("width", w)?;
            Signal::from_real_fn(grid, |x| {
                let t = x / w;
                (1.0 - t * t) * (-0.5 * t * t).exp()
            })
        }
        "box" => {
            let (lo, hi, h) = (p("lo")?, p("hi")?, p("height")?);
            Signal::from_real_fn(grid, |x| if x >= lo - 1e-12 && x <= hi + 1e-12 { h } else { 0.0 })
        }
        "cos_window" => {
            let (om, w) = (p("omega")?, p("window")?);
            positive("window", w)?;
            Signal::from_real_fn(grid, |x| (om * x).cos() * (-(x / w).powi(2)).exp())
        }
        "cauchy_kernel" => Signal::from_fn(grid, |x| C64::new(0.0, -1.0 / PI) / C64::new(x, 1.0)),
        "hardy" => {
            let s = p("shift")?;
            positive("shift", s)?;
            Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, s))
        }
        "anti_hardy" => {
            let s = p("shift")?;
            positive("shift", s)?;
            Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, -s))
        }
        "poisson_kernel" => {
            let a = p("scale")?;
            positive("scale", a)?;
            Signal::from_real_fn(grid, |x| a / (PI * (x * x + a * a)))
        }
        "band_limited" => {
            let seed = p("seed")?;
            let terms = p("terms")?;
            let (lo, hi, w) = (p("nu_lo")?, p("nu_hi")?, p("window")?);
            if !(seed >= 0.0 && seed.fract() == 0.0) {
                return Err(Error::invalid("seed", "must be a nonnegative integer"));
            }
            if !(terms >= 1.0 && terms.fract() == 0.0) {
                return Err(Error::invalid("terms", "must be a positive integer"));
            }
            if !(hi > lo && lo >= 0.0) {
                return Err(Error::invalid("nu_hi", "need 0 <= nu_lo < nu_hi"));
            }
            positive("window", w)?;
            band_limited(grid, seed as u64, terms as usize, lo, hi, w)
        }
        "nucleus" => {
            let amp = p("amplitude")?;
            Signal::from_real_fn(grid, |x| if x.abs() <= 1.0 + 1e-12 { amp * x } else { 0.0 })
        }
        _ => unreachable!("checked above"),
    };
    Ok(s)
}

fn positive(key: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be positive, got {v}")))
    }
}

/// `Σ c_k cos(2πν_k x + φ_k)·e^{-(x/window)²}` with `ν_k` uniform in
/// `[nu_lo, nu_hi]`, `c_k` uniform in `[0.5, 1]` and uniform phases, drawn
/// from a ChaCha8 stream seeded with `seed`.
pub fn band_limited(grid: RealGrid, seed: u64, terms: usize, nu_lo: f64, nu_hi: f64, window: f64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64)> = (0..terms)
        .map(|_| {
            (
                rng.gen_range(0.5..1.0),
                rng.gen_range(nu_lo..nu_hi),
                rng.gen_range(0.0..2.0 * PI),
            )
        })
        .collect();
    Signal::from_real_fn(grid, |x| {
        let s: f64 = modes.iter().map(|&(c, nu, ph)| c * (2.0 * PI * nu * x + ph).cos()).sum();
        s * (-(x / window).powi(2)).exp()
    })
}
