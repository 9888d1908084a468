//! Compositions of covariant and contravariant transforms: maximal
//! functions, the Hilbert transform, boundary values of Cauchy integrals
//! and the constants of operators commuting with the affine action.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::contravariant::{richardson, LimitReport};
use crate::conv::{Correlator, PrefixIntegral};
use crate::covariant::{conj_poisson_integral, FieldAxes};
use crate::error::{Error, Result};
use crate::field::LogAxis;
use crate::par::map_range;
use crate::signal::{hardy_split, Signal};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Prefix integrals `S_k = ∫_{x_0}^{x_k} |f|`, trapezoid.
fn modulus_prefix(f: &Signal) -> Vec<f64> {
    PrefixIntegral::of_modulus(f).prefix().iter().map(|v| v.re).collect()
}

#[inline]
fn average(s: &[f64], i: usize, j: usize, dx: f64) -> f64 {
    (s[j] - s[i]) / ((j - i) as f64 * dx)
}

/// Slope between prefix points `(i, S_i)` and `(j, S_j)` in index units.
#[inline]
fn slope(s: &[f64], i: usize, j: usize) -> f64 {
    (s[j] - s[i]) / (j - i) as f64
}

/// `(b - a) × (c - a)` for prefix points.
#[inline]
fn cross(s: &[f64], a: usize, b: usize, c: usize) -> f64 {
    let (ax, bx, cx) = (a as f64, b as f64, c as f64);
    (bx - ax) * (s[c] - s[a]) - (s[b] - s[a]) * (cx - ax)
}

fn lower_hull(s: &[f64], range: std::ops::Range<usize>) -> Vec<usize> {
    let mut h: Vec<usize> = Vec::new();
    for k in range {
        while h.len() >= 2 && cross(s, h[h.len() - 2], h[h.len() - 1], k) <= 0.0 {
            h.pop();
        }
        h.push(k);
    }
    h
}

fn upper_hull(s: &[f64], range: std::ops::Range<usize>) -> Vec<usize> {
    let mut h: Vec<usize> = Vec::new();
    for k in range {
        while h.len() >= 2 && cross(s, h[h.len() - 2], h[h.len() - 1], k) >= 0.0 {
            h.pop();
        }
        h.push(k);
    }
    h
}

/// Argmax over a unimodal sequence `score(h[m])`.
fn unimodal_argmax(h: &[usize], score: impl Fn(usize) -> f64) -> usize {
    let (mut lo, mut hi) = (0, h.len() - 1);
    while lo < hi {
        let m = (lo + hi) / 2;
        if score(h[m]) < score(h[m + 1]) {
            lo = m + 1;
        } else {
            hi = m;
        }
    }
    h[lo]
}

/// Best pair `(i, j)` covering each index, in slope units, stored as the
/// pair so the final average is evaluated with the brute-force formula.
fn sweep(s: &[f64], lo: usize, hi: usize, best: &mut [(f64, usize, usize)]) {
    if hi - lo < 2 {
        return;
    }
    let mid = (lo + hi) / 2;
    sweep(s, lo, mid, best);
    sweep(s, mid, hi, best);
    // Pairs i ∈ [lo, mid), j ∈ [mid, hi) cover every t ∈ [i, j].
    let lh = lower_hull(s, lo..mid);
    let mut right_best: Vec<(f64, usize, usize)> = (mid..hi)
        .map(|j| {
            let i = unimodal_argmax(&lh, |i| slope(s, i, j));
            (slope(s, i, j), i, j)
        })
        .collect();
    for k in (0..right_best.len() - 1).rev() {
        if right_best[k + 1].0 > right_best[k].0 {
            right_best[k] = right_best[k + 1];
        }
    }
    for (k, t) in (mid..hi).enumerate() {
        if right_best[k].0 > best[t].0 {
            best[t] = right_best[k];
        }
    }
    let uh = upper_hull(s, mid..hi);
    let mut left_best: Vec<(f64, usize, usize)> = (lo..mid)
        .map(|i| {
            let j = unimodal_argmax(&uh, |j| slope(s, i, j));
            (slope(s, i, j), i, j)
        })
        .collect();
    for k in 1..left_best.len() {
        if left_best[k - 1].0 > left_best[k].0 {
            left_best[k] = left_best[k - 1];
        }
    }
    for (k, t) in (lo..mid).enumerate() {
        if left_best[k].0 > best[t].0 {
            best[t] = left_best[k];
        }
    }
}

/// Uncentered maximal function: the largest average of `|f|` over grid
/// intervals `[x_i, x_j]`, `i < j`, containing each grid point. Averages
/// are exact over the piecewise-linear interpolant of `|f|`.
///
/// Candidate pairs are found by divide and conquer with convex hulls of
/// the prefix-integral points, `O(n log² n)`.
pub fn hardy_littlewood(f: &Signal) -> Signal {
    let n = f.len();
    let dx = f.grid().dx();
    let s = modulus_prefix(f);
    let mut best = vec![(f64::NEG_INFINITY, 0, 1); n];
    sweep(&s, 0, n, &mut best);
    let values = best
        .iter()
        .map(|&(_, i, j)| C64::new(average(&s, i, j, dx), 0.0))
        .collect();
    Signal::new(*f.grid(), values).expect("same grid")
}

/// Centered maximal function `sup_r (1/2r) ∫_{t-r}^{t+r} |f|` over radii
/// that are whole multiples of the step, `O(n²)`.
pub fn hardy_littlewood_centered(f: &Signal) -> Signal {
    let n = f.len();
    let dx = f.grid().dx();
    let pre = PrefixIntegral::of_modulus(f);
    let values = map_range(n, |k| {
        let t = f.grid().x(k);
        let reach = k.max(n - 1 - k).max(1);
        let m = (1..=reach)
            .map(|m| {
                let r = m as f64 * dx;
                pre.between(t - r, t + r).re / (2.0 * r)
            })
            .fold(0.0, f64::max);
        C64::new(m, 0.0)
    });
    Signal::new(*f.grid(), values).expect("same grid")
}

/// `Hf(t) = (1/π) PV ∫ f(b)/(t - b) db`: trapezoid quadrature with the
/// sample at `b = t` excluded.
pub fn hilbert_pv(f: &Signal) -> Signal {
    let corr = Correlator::trapezoid(f, *f.grid());
    let values = corr.apply(|d| if d.abs() < 0.5 * f.grid().dx() { ZERO } else { C64::new(-1.0 / (PI * d), 0.0) });
    Signal::new(*f.grid(), values).expect("same grid")
}

/// Scales at which [`hilbert_via_conj_poisson`] samples `Q_a f` by default.
pub fn default_hilbert_scales() -> LogAxis {
    LogAxis::new(0.05, 2.0, 3).expect("valid axis")
}

/// `lim_{a→0} Q_a f`, Richardson-extrapolated from the three smallest
/// scales of `scales`.
pub fn hilbert_via_conj_poisson(f: &Signal, scales: &LogAxis) -> Result<LimitReport> {
    if scales.count() < 3 {
        return Err(Error::invalid("scales", "the a → 0 limit needs at least three scales"));
    }
    let ax = LogAxis::new(scales.a_min(), scales.ratio(), 3)?;
    let q = conj_poisson_integral(f, &FieldAxes::new(ax, *f.grid()));
    let a = [ax.a(0), ax.a(1), ax.a(2)];
    let grid = *f.grid();
    let raw: [Signal; 3] = [q.row_signal(0), q.row_signal(1), q.row_signal(2)];
    let values: Vec<C64> = (0..grid.n())
        .map(|j| richardson(a, [raw[0].values()[j], raw[1].values()[j], raw[2].values()[j]]))
        .collect();
    let limsup = (0..grid.n())
        .map(|j| raw.iter().map(|r| r.values()[j].norm()).fold(0.0, f64::max))
        .collect();
    Ok(LimitReport {
        value: Signal::new(grid, values)?,
        scales: a,
        raw,
        limsup,
    })
}

/// Checks `PV ∫ f(t)/(t - x) dt = -π·Hf(x)` for `f = 1/(1+t²)` against a
/// symmetric midpoint sum around `x`.
fn pv_convention_holds() -> bool {
    let grid = crate::signal::RealGrid::span(-50.0, 50.0, 0.01).expect("valid grid");
    let f = Signal::from_real_fn(grid, |t| 1.0 / (1.0 + t * t));
    let k = grid.position(0.5).round() as usize;
    let x = grid.x(k);
    let via_h = -PI * hilbert_pv(&f).values()[k].re;
    let h = 1e-3;
    let dense: f64 = (0..50_000)
        .map(|m| {
            let d = (m as f64 + 0.5) * h;
            let g = |t: f64| 1.0 / (1.0 + t * t);
            (g(x + d) - g(x - d)) / d
        })
        .sum::<f64>()
        * h;
    (via_h - dense).abs() <= 1e-2 * dense.abs()
}

/// `½f + (1/2πi) PV ∫ f(t)/(t - x) dt = ½(f + iHf)`, the boundary value of
/// the Cauchy integral of `f`.
pub fn sokhotsky_boundary(f: &Signal) -> Signal {
    static CONVENTION: OnceLock<bool> = OnceLock::new();
    assert!(
        *CONVENTION.get_or_init(pv_convention_holds),
        "hilbert_pv disagrees with the principal value quadrature"
    );
    let h = hilbert_pv(f);
    f.combine(C64::new(0.5, 0.0), &h, C64::new(0.0, 0.5)).expect("same grid")
}

/// Least-squares constants of `T` on the two Hardy components.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurConstants {
    pub k1: C64,
    pub k2: C64,
    /// `‖Tv - k v‖/‖v‖` for each basis vector of the positive component.
    pub residuals_h: Vec<f64>,
    pub residuals_hperp: Vec<f64>,
}

fn fit(t: &dyn Fn(&Signal) -> Signal, basis: &[Signal]) -> Result<(C64, Vec<f64>)> {
    let images: Vec<Signal> = basis.iter().map(t).collect();
    let mut num = ZERO;
    let mut den = 0.0;
    for (v, tv) in basis.iter().zip(&images) {
        num += tv.inner(v)?;
        den += v.energy();
    }
    if den == 0.0 {
        return Err(Error::invalid("basis", "basis vectors vanish"));
    }
    let k = num / den;
    let res = basis
        .iter()
        .zip(&images)
        .map(|(v, tv)| Ok(tv.sub(&v.scale(k))?.l2() / v.l2()))
        .collect::<Result<_>>()?;
    Ok((k, res))
}

/// Constants `(k₁, k₂)` with `T ≈ k₁ I` on the positive-frequency
/// component and `T ≈ k₂ I` on the negative one. Basis vectors must lie
/// in their component up to `1e-3` of their energy.
pub fn schur_constants(
    t: &dyn Fn(&Signal) -> Signal,
    basis_h: &[Signal],
    basis_hperp: &[Signal],
) -> Result<SchurConstants> {
    if basis_h.is_empty() {
        return Err(Error::EmptyBasis("the positive-frequency component"));
    }
    if basis_hperp.is_empty() {
        return Err(Error::EmptyBasis("the negative-frequency component"));
    }
    for (which, basis) in [(0, basis_h), (1, basis_hperp)] {
        for v in basis {
            let (h, hp) = hardy_split(v);
            let stray = if which == 0 { hp.energy() } else { h.energy() };
            if stray > 1e-3 * v.energy() {
                return Err(Error::invalid(
                    "basis",
                    format!(
                        "a basis vector has {:.2e} of its energy in the other component",
                        stray / v.energy()
                    ),
                ));
            }
        }
    }
    let (k1, residuals_h) = fit(t, basis_h)?;
    let (k2, residuals_hperp) = fit(t, basis_hperp)?;
    Ok(SchurConstants {
        k1,
        k2,
        residuals_h,
        residuals_hperp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;
    use crate::representation::{quasi_regular, RepIndex};
    use crate::signal::RealGrid;
    use proptest::prelude::*;

    const I: C64 = C64 { re: 0.0, im: 1.0 };

    fn rel(a: &Signal, b: &Signal) -> f64 {
        a.sub(b).unwrap().l2() / b.l2()
    }

    fn brute_force(f: &Signal) -> Vec<f64> {
        let n = f.len();
        let s = modulus_prefix(f);
        let dx = f.grid().dx();
        (0..n)
            .map(|t| {
                let mut m = f64::NEG_INFINITY;
                for i in 0..=t {
                    for j in t.max(i + 1)..n {
                        m = m.max(average(&s, i, j, dx));
                    }
                }
                m
            })
            .collect()
    }

    #[test]
    fn maximal_function_of_an_indicator() {
        let grid = RealGrid::new(-8.0, 1.0 / 32.0, 512).unwrap();
        let f = Signal::from_real_fn(grid, |x| if x.abs() <= 1.0 { 1.0 } else { 0.0 });
        let m = hardy_littlewood(&f);
        let oracle = brute_force(&f);
        for (a, b) in m.values().iter().zip(&oracle) {
            assert_eq!(a.re, *b);
        }
        let k0 = grid.position(0.0).round() as usize;
        assert_eq!(m.values()[k0].re, 1.0);
        for (k, v) in m.values().iter().enumerate() {
            let t = grid.x(k);
            if t.abs() > 1.0 && t.abs() < 5.0 {
                let e = 2.0 / (1.0 + t.abs());
                assert!((v.re - e).abs() <= 0.02 * e);
            }
        }
    }

    #[test]
    fn maximal_function_of_a_constant() {
        let grid = RealGrid::new(0.0, 0.25, 100).unwrap();
        let f = Signal::from_real_fn(grid, |_| 3.0);
        for v in hardy_littlewood(&f).values() {
            assert!((v.re - 3.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn centered_is_below_uncentered() {
        let grid = RealGrid::new(-4.0, 1.0 / 16.0, 129).unwrap();
        let f = Signal::from_real_fn(grid, |x| (3.0 * x).sin() * (-x * x / 4.0).exp());
        let (u, c) = (hardy_littlewood(&f), hardy_littlewood_centered(&f));
        for (a, b) in c.values().iter().zip(u.values()) {
            assert!(a.re <= b.re + 1e-12);
        }
    }

    #[test]
    fn maximal_function_commutes_with_dilation_and_shift() {
        let grid = RealGrid::span(-40.0, 40.0, 1.0 / 64.0).unwrap();
        let f = Signal::from_real_fn(grid, |x| (-x * x).exp() * (1.0 + 0.5 * (2.0 * x).cos()));
        let g = GroupElement::new(2.0, 1.0).unwrap();
        let lhs = hardy_littlewood(&quasi_regular(RepIndex::INFINITY, g, &f));
        let rhs = quasi_regular(RepIndex::INFINITY, g, &hardy_littlewood(&f));
        let mut worst: f64 = 0.0;
        for k in 3..grid.n() - 3 {
            if grid.x(k).abs() < 30.0 {
                worst = worst.max((lhs.values()[k] - rhs.values()[k]).norm());
            }
        }
        assert!(worst <= 1e-3, "{worst}");
    }

    #[test]
    fn hilbert_eigenvalues_on_hardy_vectors() {
        let grid = RealGrid::span(-200.0, 200.0, 0.01).unwrap();
        let plus = Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, 1.0));
        let minus = plus.conj();
        assert!(rel(&hilbert_pv(&plus), &plus.scale(-I)) <= 0.05);
        assert!(rel(&hilbert_pv(&minus), &minus.scale(I)) <= 0.05);
    }

    #[test]
    fn hilbert_of_windowed_cosine_is_windowed_sine() {
        let grid = RealGrid::span(-100.0, 100.0, 0.01).unwrap();
        let w = 30.0;
        let f = Signal::from_real_fn(grid, |x| x.cos() * (-(x / w).powi(2)).exp());
        let h = hilbert_pv(&f);
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, v) in h.values().iter().enumerate() {
            let x = grid.x(k);
            if x.abs() <= 30.0 {
                let e = x.sin() * (-(x / w).powi(2)).exp();
                num += (v.re - e).powi(2);
                den += e * e;
            }
        }
        assert!((num / den).sqrt() <= 0.03, "{}", (num / den).sqrt());
    }

    #[test]
    fn hilbert_of_even_gaussian_is_odd() {
        let grid = RealGrid::centered(4001, 0.01).unwrap();
        let f = Signal::from_real_fn(grid, |x| (-x * x).exp());
        let h = hilbert_pv(&f);
        let n = grid.n();
        for k in 0..n {
            assert!((h.values()[k] + h.values()[n - 1 - k]).norm() <= 1e-8);
        }
    }

    #[test]
    fn hilbert_pv_converges_at_first_order() {
        let err = |dx: f64| {
            let grid = RealGrid::span(-60.0, 60.0, dx).unwrap();
            let f = Signal::from_real_fn(grid, |x| 1.0 / (1.0 + x * x));
            let h = hilbert_pv(&f);
            // H(1/(1+x²)) = x/(1+x²).
            let mut e: f64 = 0.0;
            for (k, v) in h.values().iter().enumerate() {
                let x = grid.x(k);
                if x.abs() <= 10.0 {
                    e = e.max((v.re - x / (1.0 + x * x)).abs());
                }
            }
            e
        };
        let (e1, e2) = (err(0.02), err(0.01));
        assert!((e1 / e2).log2() >= 0.9, "{e1} {e2}");
    }

    #[test]
    fn conjugate_poisson_route() {
        let grid = RealGrid::span(-200.0, 200.0, 0.01).unwrap();
        let plus = Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, 1.0));
        let h = hilbert_via_conj_poisson(&plus, &default_hilbert_scales()).unwrap();
        assert!(rel(&h.value, &plus.scale(-I)) <= 0.05);
        let p = Signal::from_real_fn(grid, |x| 1.0 / (PI * (1.0 + x * x)));
        let mq = Signal::from_real_fn(grid, |x| x / (PI * (1.0 + x * x)));
        let hp = hilbert_via_conj_poisson(&p, &default_hilbert_scales()).unwrap();
        assert!(rel(&hp.value, &mq) <= 0.02);
        for w in [Signal::from_real_fn(grid, |x| x.cos() * (-(x / 20.0).powi(2)).exp()), Signal::from_real_fn(grid, |x| (-x * x).exp())] {
            let a = hilbert_pv(&w);
            let b = hilbert_via_conj_poisson(&w, &default_hilbert_scales()).unwrap().value;
            assert!(a.sub(&b).unwrap().l2() / w.l2() <= 0.02);
        }
    }

    #[test]
    fn boundary_values_on_hardy_vectors() {
        let grid = RealGrid::span(-200.0, 200.0, 0.01).unwrap();
        let plus = Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, 1.0));
        let minus = plus.conj();
        let bp = sokhotsky_boundary(&plus);
        assert!(rel(&bp, &plus) <= 0.05);
        assert!(sokhotsky_boundary(&minus).l2() / minus.l2() <= 0.05);
        // Projection: applying twice changes little more than once.
        let once = rel(&bp, &plus);
        let twice = rel(&sokhotsky_boundary(&bp), &plus);
        assert!(twice <= 2.0 * once.max(1e-12), "{once} {twice}");
    }

    #[test]
    fn schur_constants_of_identity_and_hilbert() {
        let grid = RealGrid::span(-200.0, 200.0, 0.01).unwrap();
        let h: Vec<Signal> = [1.0, 2.0]
            .iter()
            .map(|&s| Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, s)))
            .collect();
        let hp: Vec<Signal> = h.iter().map(|v| v.conj()).collect();
        let id = schur_constants(&|f: &Signal| f.clone(), &h, &hp).unwrap();
        assert_eq!((id.k1, id.k2), (C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
        assert!(id.residuals_h.iter().chain(&id.residuals_hperp).all(|&r| r == 0.0));
        let hil = schur_constants(&hilbert_pv, &h, &hp).unwrap();
        assert!((hil.k1 + I).norm() <= 0.05 && (hil.k2 - I).norm() <= 0.05);
        let jhj = |f: &Signal| hilbert_pv(&f.reflect().unwrap()).reflect().unwrap();
        let sym = RealGrid::centered(40001, 0.01).unwrap();
        let h: Vec<Signal> = h.iter().map(|v| v.resample(sym)).collect();
        let hp: Vec<Signal> = hp.iter().map(|v| v.resample(sym)).collect();
        let c = schur_constants(&jhj, &h, &hp).unwrap();
        assert!((c.k1 - I).norm() <= 0.05 && (c.k2 + I).norm() <= 0.05);
        assert!(matches!(schur_constants(&hilbert_pv, &[], &hp), Err(Error::EmptyBasis(_))));
        assert!(schur_constants(&hilbert_pv, &hp, &h).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn fast_sweep_matches_brute_force(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let grid = RealGrid::new(0.0, 1.0 / 32.0, 200).unwrap();
            let vals: Vec<C64> = (0..200).map(|_| C64::new(rng.gen_range(-4..=4) as f64, 0.0)).collect();
            let f = Signal::new(grid, vals).unwrap();
            let m = hardy_littlewood(&f);
            for (a, b) in m.values().iter().zip(brute_force(&f)) {
                prop_assert_eq!(a.re, b);
            }
        }
    }
}
