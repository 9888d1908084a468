//! Actions of the affine group on signals, spectra and half-plane fields.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::HalfPlaneField;
use crate::group::GroupElement;
use crate::signal::{Signal, SpectralSignal};

/// The exponent `p ∈ [1, ∞]` of an `L^p`-isometric representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepIndex(f64);

impl RepIndex {
    pub const ONE: RepIndex = RepIndex(1.0);
    pub const TWO: RepIndex = RepIndex(2.0);
    pub const INFINITY: RepIndex = RepIndex(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 && !p.is_nan() {
            Ok(RepIndex(p))
        } else {
            Err(Error::invalid("p", format!("need p in [1, inf], got {p}")))
        }
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.0
    }

    /// `1/p`, zero for `p = ∞`.
    #[inline]
    pub fn inv(&self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// `a^{-1/p}`.
    #[inline]
    pub fn weight(&self, a: f64) -> f64 {
        let e = self.inv();
        if e == 0.0 {
            1.0
        } else {
            a.powf(-e)
        }
    }
}

impl std::str::FromStr for RepIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(RepIndex::INFINITY);
        }
        let p: f64 = t.parse().map_err(|_| Error::invalid("p", format!("not a number: {s}")))?;
        RepIndex::new(p)
    }
}

impl std::fmt::Display for RepIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// `[π_p(a,b) f](x) = a^{-1/p} f((x - b)/a)` on `f`'s grid.
pub fn quasi_regular(p: RepIndex, g: GroupElement, f: &Signal) -> Signal {
    let (a, b) = (g.a(), g.b());
    let w = p.weight(a);
    f.map(|x, _| f.interpolate((x - b) / a) * w)
}

/// `[π̂_p(a,b) F](λ) = a^{1/p} e^{-2πibλ} F(aλ)` on `F`'s lattice.
pub fn co_adjoint(p: RepIndex, g: GroupElement, spec: &SpectralSignal) -> SpectralSignal {
    let (a, b) = (g.a(), g.b());
    let w = 1.0 / p.weight(a);
    spec.map(|lam, _| spec.interpolate(a * lam) * C64::from_polar(w, -2.0 * PI * b * lam))
}

/// `[Λ(a,b) u](a', b') = u(a'/a, (b' - b)/a)` on `u`'s axes.
pub fn left_regular(g: GroupElement, u: &HalfPlaneField) -> HalfPlaneField {
    let (a, b) = (g.a(), g.b());
    let mut out = HalfPlaneField::from_fn(*u.a_axis(), *u.b_grid(), |ap, bp| u.interpolate(ap / a, (bp - b) / a));
    if let Some(p) = u.p() {
        out = out.with_p(p);
    }
    out
}

/// `[R(g) u](h) = u(h·g)` on `u`'s axes.
pub fn right_shift(g: GroupElement, u: &HalfPlaneField) -> HalfPlaneField {
    let (a, b) = (g.a(), g.b());
    HalfPlaneField::from_fn(*u.a_axis(), *u.b_grid(), |ap, bp| u.interpolate(ap * a, ap * b + bp))
}

/// Generators of the dilation and translation subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    A,
    N,
}

/// Centered differences, second-order one-sided at the ends.
pub(crate) fn derivative(values: &[C64], h: f64) -> Vec<C64> {
    let n = values.len();
    assert!(n >= 3, "need three samples for a derivative");
    (0..n)
        .map(|k| {
            if k == 0 {
                (values[0] * -3.0 + values[1] * 4.0 - values[2]) / (2.0 * h)
            } else if k + 1 == n {
                (values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) / (2.0 * h)
            } else {
                (values[k + 1] - values[k - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// Derived representation: `dπ_A f = -f - x·f'`, `dπ_N f = -f'`.
pub fn derived_rep(which: Generator, f: &Signal) -> Signal {
    let d = derivative(f.values(), f.grid().dx());
    match which {
        Generator::N => Signal::new(*f.grid(), d.into_iter().map(|v| -v).collect()).expect("same length"),
        Generator::A => {
            let g = *f.grid();
            let vals = f
                .values()
                .iter()
                .zip(d)
                .enumerate()
                .map(|(k, (&v, dv))| -v - dv * g.x(k))
                .collect();
            Signal::new(g, vals).expect("same length")
        }
    }
}

/// Left-invariant field `L_A = a∂_a = ∂_{log a}` by differences along the
/// scale axis.
pub fn left_invariant_a(u: &HalfPlaneField) -> HalfPlaneField {
    let na = u.a_axis().count();
    let nb = u.b_grid().n();
    let h = u.a_axis().log_step();
    let mut out = u.clone();
    for j in 0..nb {
        let col: Vec<C64> = (0..na).map(|i| u.get(i, j)).collect();
        for (i, v) in derivative(&col, h).into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    out
}

/// Left-invariant field `L_N = a∂_b`.
pub fn left_invariant_n(u: &HalfPlaneField) -> HalfPlaneField {
    let na = u.a_axis().count();
    let h = u.b_grid().dx();
    let mut out = u.clone();
    for i in 0..na {
        let a = u.a_axis().a(i);
        for (j, v) in derivative(u.row(i), h).into_iter().enumerate() {
            out.set(i, j, v * a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{interior, LogAxis};
    use crate::signal::{fourier, RealGrid};
    use proptest::prelude::*;

    fn g(a: f64, b: f64) -> GroupElement {
        GroupElement::new(a, b).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let grid = RealGrid::centered(501, 0.02).unwrap();
        let f = Signal::from_real_fn(grid, |x| (-x * x).exp());
        assert_eq!(quasi_regular(RepIndex::TWO, GroupElement::IDENTITY, &f), f);
        assert_eq!(quasi_regular(RepIndex::new(3.0).unwrap(), g(1.0, 0.0), &f), f);
        let spec = fourier(&f);
        let back = co_adjoint(RepIndex::TWO, GroupElement::IDENTITY, &spec);
        for (u, v) in back.values().iter().zip(spec.values()) {
            assert!((u - v).norm() <= 1e-15 * (1.0 + v.norm()));
        }
        let ax = LogAxis::new(0.25, 2f64.sqrt(), 9).unwrap();
        let u = HalfPlaneField::from_fn(ax, grid, |a, b| C64::new(a * (-b * b).exp(), b));
        assert_eq!(left_regular(GroupElement::IDENTITY, &u), u);
    }

    #[test]
    fn dilated_indicator_keeps_l2_norm() {
        let grid = RealGrid::span(-1.0, 6.0, 0.001).unwrap();
        let f = Signal::from_real_fn(grid, |x| if (0.0..=1.0).contains(&x) { 1.0 } else { 0.0 });
        let h = quasi_regular(RepIndex::TWO, g(4.0, 0.0), &f);
        assert!((h.interpolate(2.0).re - 0.5).abs() < 1e-12);
        assert!(h.interpolate(4.5).norm() < 1e-12);
        let (n0, n1) = (f.lp_norm(2.0).unwrap(), h.lp_norm(2.0).unwrap());
        assert!((n0 - n1).abs() <= 1e-3, "{n0} {n1}");
    }

    #[test]
    fn quasi_regular_is_a_homomorphism() {
        let grid = RealGrid::centered(20001, 0.001).unwrap();
        let f = Signal::from_real_fn(grid, |x| (-x * x).exp());
        let (x, y) = (g(2.0, 1.0), g(0.5, -1.0));
        let p = RepIndex::TWO;
        let lhs = quasi_regular(p, x, &quasi_regular(p, y, &f));
        let rhs = quasi_regular(p, x.compose(&y), &f);
        assert!(lhs.sub(&rhs).unwrap().sup_norm() <= 1e-6);
    }

    #[test]
    fn coadjoint_preserves_positive_support() {
        let grid = RealGrid::centered(2048, 0.02).unwrap();
        let f = Signal::from_fn(grid, |x| C64::new(0.0, -1.0 / PI) / C64::new(x, 1.0));
        let spec = fourier(&f).map(|l, v| if l > 0.0 { v } else { C64::new(0.0, 0.0) });
        for h in [g(2.0, 0.3), g(0.37, -5.0), g(1.0, 11.0)] {
            let t = co_adjoint(RepIndex::TWO, h, &spec);
            assert_eq!(t.negative_energy(), 0.0);
        }
    }

    #[test]
    fn fourier_intertwines_quasi_regular_and_coadjoint() {
        let grid = RealGrid::centered(80000, 0.001).unwrap();
        let f = Signal::from_real_fn(grid, |x| (-PI * x * x).exp());
        let h = g(2.0, 0.3);
        let lhs = fourier(&quasi_regular(RepIndex::TWO, h, &f));
        let rhs = co_adjoint(RepIndex::TWO, h, &fourier(&f));
        let err: f64 = lhs.values().iter().zip(rhs.values()).map(|(u, v)| (u - v).norm_sqr()).sum();
        let nrm: f64 = rhs.values().iter().map(|v| v.norm_sqr()).sum();
        assert!((err / nrm).sqrt() <= 1e-6, "{}", (err / nrm).sqrt());
    }

    fn bump_field() -> (HalfPlaneField, impl Fn(f64, f64) -> C64) {
        let ax = LogAxis::new((-4.0f64).exp(), 2f64.powf(0.25), 47).unwrap();
        let bg = RealGrid::span(-8.0, 8.0, 0.001).unwrap();
        let f = |a: f64, b: f64| C64::new((-(a.ln()).powi(2) - b * b).exp(), 0.0);
        (HalfPlaneField::from_fn(ax, bg, f), f)
    }

    #[test]
    fn translations_shift_the_b_axis() {
        let (u, f) = bump_field();
        let v = left_regular(g(1.0, 0.75), &u);
        let (ra, rb) = interior(&v, 3);
        for i in ra.step_by(5) {
            for j in rb.clone().step_by(97) {
                let (a, b) = (u.a_axis().a(i), u.b_grid().x(j));
                assert!((v.get(i, j) - f(a, b - 0.75)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn left_regular_is_a_homomorphism() {
        let (u, f) = bump_field();
        let (x, y) = (g(2.0, 0.5), g(0.5, -1.0));
        let lhs = left_regular(x, &left_regular(y, &u));
        let rhs = left_regular(x.compose(&y), &u);
        // Skip scales whose intermediate point a/2 falls below the axis.
        let (ra, rb) = interior(&u, 3);
        let mut worst: f64 = 0.0;
        for i in ra.filter(|&i| i >= 4) {
            for j in rb.clone() {
                worst = worst.max((lhs.get(i, j) - rhs.get(i, j)).norm());
            }
        }
        assert!(worst <= 1e-6, "{worst}");
        let _ = f;
    }

    #[test]
    fn translation_generator_of_ramp() {
        let grid = RealGrid::new(-1.0, 0.01, 201).unwrap();
        let f = Signal::from_real_fn(grid, |x| x);
        let d = derived_rep(Generator::N, &f);
        for v in &d.values()[1..200] {
            assert!((v.re + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cauchy_kernel_solves_first_order_equation() {
        let residual = |dx: f64| {
            let grid = RealGrid::span(-10.0, 10.0, dx).unwrap();
            let f = Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, 1.0));
            let da = derived_rep(Generator::A, &f);
            let dn = derived_rep(Generator::N, &f);
            let i = C64::new(0.0, 1.0);
            (3..grid.n() - 3)
                .map(|k| (-da.values()[k] - i * dn.values()[k]).norm())
                .fold(0.0, f64::max)
        };
        let (r1, r2) = (residual(0.01), residual(0.005));
        assert!(r1 <= 1e-3);
        assert!(r1 / r2 >= 3.0, "{r1} {r2}");
    }

    #[test]
    fn poisson_kernel_solves_second_order_equation() {
        let residual = |dx: f64| {
            let grid = RealGrid::span(-10.0, 10.0, dx).unwrap();
            let p = Signal::from_real_fn(grid, |x| 1.0 / (PI * (1.0 + x * x)));
            let da = derived_rep(Generator::A, &p);
            let da2 = derived_rep(Generator::A, &da);
            let dn2 = derived_rep(Generator::N, &derived_rep(Generator::N, &p));
            (6..grid.n() - 6)
                .map(|k| (da2.values()[k] - da.values()[k] + dn2.values()[k]).norm())
                .fold(0.0, f64::max)
        };
        let (r1, r2) = (residual(0.01), residual(0.005));
        assert!(r1 <= 1e-3);
        assert!(r1 / r2 >= 3.0, "{r1} {r2}");
    }

    #[test]
    fn left_invariant_fields_commute_with_left_shifts() {
        let residual = |per_octave: f64, db: f64| {
            let ax = LogAxis::new((-4.0f64).exp(), 2f64.powf(1.0 / per_octave), (8.0 * per_octave) as usize + 1).unwrap();
            let bg = RealGrid::span(-8.0, 8.0, db).unwrap();
            let u = HalfPlaneField::from_fn(ax, bg, |a, b| C64::new((-(a.ln()).powi(2) - b * b).exp(), 0.0));
            let h = g(2.0, 0.5);
            let mut out = [0.0f64; 2];
            for (slot, op) in out.iter_mut().zip([left_invariant_a as fn(&HalfPlaneField) -> HalfPlaneField, left_invariant_n]) {
                let lhs = op(&left_regular(h, &u));
                let rhs = left_regular(h, &op(&u));
                let (ra, rb) = interior(&u, 3);
                for i in ra.clone() {
                    if u.a_axis().a(i) < 2.0 * u.a_axis().a(4) {
                        continue;
                    }
                    for j in rb.clone() {
                        *slot = slot.max((lhs.get(i, j) - rhs.get(i, j)).norm());
                    }
                }
            }
            out
        };
        let coarse = residual(8.0, 0.02);
        let fine = residual(16.0, 0.01);
        // Dilations shift the scale axis by whole cells, so L_A commutes
        // with Λ(g) up to rounding.
        assert!(coarse[0] <= 1e-12, "{coarse:?}");
        assert!(coarse[1] <= 1e-3 && coarse[1] / fine[1] >= 3.0, "{coarse:?} {fine:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn quasi_regular_is_an_isometry(la in -0.7f64..0.7, b in -2.0f64..2.0, pi in 0usize..3) {
            let p = [RepIndex::ONE, RepIndex::TWO, RepIndex::INFINITY][pi];
            let grid = RealGrid::centered(8001, 0.005).unwrap();
            let f = Signal::from_real_fn(grid, |x| (-x * x).exp());
            let h = quasi_regular(p, g(la.exp(), b), &f);
            let (n0, n1) = (f.lp_norm(p.p()).unwrap(), h.lp_norm(p.p()).unwrap());
            // Linear interpolation of e^{-x²} at step dx/a ≤ 0.01 loses at
            // most 0.01²/4 of the peak.
            prop_assert!((n0 - n1).abs() <= 1e-4 * n0.max(1.0), "{} {}", n0, n1);
        }
    }
}
