//! Independent oracles for integration tests.

#![allow(dead_code)]

use covariant_core::{GroupElement, C64};

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0 && n > 0);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// `∫_0^∞ |ψ̂(s)|²/s ds` for the Mexican hat `(1 - x²)e^{-x²/2}`, with
/// `ψ̂(s) = ∫ ψ(x) e^{-2πixs} dx` by Simpson quadrature.
pub fn mexican_hat_constant() -> f64 {
    let psi = |x: f64| (1.0 - x * x) * (-0.5 * x * x).exp();
    let psi_hat = |s: f64| simpson(|x| psi(x) * (2.0 * std::f64::consts::PI * x * s).cos(), -12.0, 12.0, 2400);
    simpson(|s| psi_hat(s).powi(2) / s, 1e-9, 2.0, 4000)
}

/// Largest average of `|v|` (trapezoid) over index intervals `[i, j]`,
/// `i < j`, containing each index.
pub fn maximal_brute_force(v: &[C64], dx: f64) -> Vec<f64> {
    let n = v.len();
    let mut s = vec![0.0; n];
    for k in 1..n {
        s[k] = s[k - 1] + (v[k - 1].norm() + v[k].norm()) * (0.5 * dx);
    }
    (0..n)
        .map(|t| {
            let mut m = f64::NEG_INFINITY;
            for i in 0..=t {
                for j in t.max(i + 1)..n {
                    m = m.max((s[j] - s[i]) / ((j - i) as f64 * dx));
                }
            }
            m
        })
        .collect()
}

/// `Σ λ_k r((x - b_k)/a_k)/a_k`.
pub fn atom_sum(masses: &[(C64, GroupElement)], r: impl Fn(f64) -> f64, x: f64) -> C64 {
    masses.iter().map(|(l, g)| l * r((x - g.b()) / g.a()) / g.a()).sum()
}

/// Odd piecewise-linear nucleus with nodes at multiples of ½, peak 0.4.
pub fn tent_nucleus(x: f64) -> f64 {
    let t = x.abs();
    let v = if t <= 0.5 {
        0.8 * t
    } else if t <= 1.0 {
        0.8 * (1.0 - t)
    } else {
        0.0
    };
    v * x.signum()
}

/// Relative L² distance of sample vectors.
pub fn rel(a: &[C64], b: &[C64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}
