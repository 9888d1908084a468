//! Norms of half-plane fields: the Hardy norm on the group, norms
//! transported by contravariant transforms, the orthogonality relation,
//! the conjugate Poisson isometry and Carleson box sums.

use num_complex::Complex64 as C64;

use crate::contravariant::{contravariant, Pairing, Vector};
use crate::conv::PrefixIntegral;
use crate::covariant::{covariant, wavelet_transform, FieldAxes};
use crate::error::{Error, Result};
use crate::fiducial::{Fiducial, Kernel};
use crate::field::HalfPlaneField;
use crate::par::map_range;
use crate::representation::RepIndex;
use crate::signal::Signal;

/// `sup_a (∫ |u(a,b)|^p db / a)^{1/p}`, trapezoid in `b`; `sup |u|` for
/// `p = ∞`.
pub fn hardy_norm_aff(u: &HalfPlaneField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid("p", format!("need p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(u.sup_abs());
    }
    let bg = u.b_grid();
    let per_level = map_range(u.a_axis().count(), |i| {
        let a = u.a_axis().a(i);
        let s: f64 = u
            .row(i)
            .iter()
            .enumerate()
            .map(|(j, v)| v.norm().powf(p) * bg.trapezoid_weight(j))
            .sum::<f64>()
            * bg.dx();
        (s / a).powf(1.0 / p)
    });
    Ok(per_level.into_iter().fold(0.0, f64::max))
}

/// `‖M_v u‖_p` for the contravariant transform of the given pairing.
pub fn transported_norm_contra(pairing: Pairing, v: &Vector, u: &HalfPlaneField, p: RepIndex) -> Result<f64> {
    contravariant(pairing, v, p, u)?.lp_norm(p.p())
}

/// Estimate of the constant `c` in
/// `∫_G ⟨v, π(g) f⟩·conj⟨v', π(g) f'⟩ dg = c·⟨v, v'⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    /// Mean of the per-pair estimates.
    pub c: C64,
    /// One estimate per usable pair, `None` where `⟨v, v'⟩ ≈ 0`.
    pub per_pair: Vec<Option<C64>>,
    /// `max_k |c_k - c| / |c|` over usable pairs.
    pub spread: f64,
    /// Share of `Σ |level contribution|` from the two end scales, a bound
    /// on what truncation of the scale axis leaves out.
    pub edge_share: f64,
}

/// `∫_G ⟨v, π_2(g) f⟩·conj⟨v', π_2(g) f'⟩ a⁻² da db`, trapezoid in `log a`
/// and `b`, with the share of the two end scales.
pub fn haar_inner(f: &Kernel, fprime: &Kernel, v: &Signal, vprime: &Signal, axes: &FieldAxes) -> Result<(C64, f64)> {
    let u = wavelet_transform(f, v, axes)?;
    let w = wavelet_transform(fprime, vprime, axes)?;
    let ax = axes.a;
    let n = ax.count();
    let h = ax.log_step();
    let bg = axes.b;
    let levels: Vec<C64> = (0..n)
        .map(|i| {
            let a = ax.a(i);
            let lw = if n == 1 { 1.0 } else if i == 0 || i == n - 1 { 0.5 * h } else { h };
            u.row(i)
                .iter()
                .zip(w.row(i))
                .enumerate()
                .map(|(j, (x, y))| x * y.conj() * bg.trapezoid_weight(j))
                .sum::<C64>()
                * (bg.dx() * lw / a)
        })
        .collect();
    let total: C64 = levels.iter().sum();
    let abs: f64 = levels.iter().map(|z| z.norm()).sum();
    let edge = if abs == 0.0 { 0.0 } else { (levels[0].norm() + levels[n - 1].norm()) / abs };
    Ok((total, edge))
}

/// The orthogonality constant from several `(v, v')` pairs. Pairs with
/// `|⟨v, v'⟩| ≤ 1e-3·‖v‖‖v'‖` are skipped.
pub fn orthogonality_constant(
    f: &Kernel,
    fprime: &Kernel,
    pairs: &[(Signal, Signal)],
    axes: &FieldAxes,
) -> Result<OrthogonalityReport> {
    let mut per_pair = Vec::with_capacity(pairs.len());
    let mut edge_share: f64 = 0.0;
    for (v, vp) in pairs {
        let ip = v.inner(vp)?;
        if ip.norm() <= 1e-3 * v.l2() * vp.l2() {
            per_pair.push(None);
            continue;
        }
        let (lhs, edge) = haar_inner(f, fprime, v, vp, axes)?;
        edge_share = edge_share.max(edge);
        per_pair.push(Some(lhs / ip));
    }
    let usable: Vec<C64> = per_pair.iter().flatten().copied().collect();
    if usable.is_empty() {
        return Err(Error::invalid("pairs", "no pair with ⟨v, v'⟩ away from zero"));
    }
    let c = usable.iter().sum::<C64>() / usable.len() as f64;
    let spread = usable.iter().map(|k| (k - c).norm()).fold(0.0, f64::max) / c.norm().max(f64::MIN_POSITIVE);
    Ok(OrthogonalityReport {
        c,
        per_pair,
        spread,
        edge_share,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryReport {
    /// Hardy norm of the conjugate Poisson field at `p = 2`.
    pub lhs: f64,
    /// `‖f‖₂`.
    pub rhs: f64,
    /// `lhs/rhs`, `1` when `f = 0`.
    pub ratio: f64,
}

/// `‖W_q f‖` (Hardy norm on the group) against `‖f‖₂` for the covariant
/// transform with the conjugate Poisson kernel at `p = 2`.
pub fn conj_poisson_isometry(f: &Signal, axes: &FieldAxes) -> Result<IsometryReport> {
    let u = covariant(&Fiducial::builtin("conj_poisson")?, RepIndex::TWO, f, axes)?;
    let lhs = hardy_norm_aff(&u, 2.0)?;
    let rhs = f.lp_norm(2.0)?;
    let ratio = if rhs == 0.0 && lhs == 0.0 { 1.0 } else { lhs / rhs };
    Ok(IsometryReport { lhs, rhs, ratio })
}

/// A nonnegative measure on the half-plane: a density with respect to
/// `dx dy` plus point masses.
///
/// The density field's scale axis is the height `y` and its translation
/// grid is `x`. Between sampled heights the density is linear in `y`;
/// below the lowest it is constant and above the highest it is zero. In
/// `x` it is the piecewise-linear interpolant, zero outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneMeasure {
    density: Option<HalfPlaneField>,
    /// `(weight, y, x)`.
    point_masses: Vec<(f64, f64, f64)>,
}

impl HalfPlaneMeasure {
    pub fn new(density: Option<HalfPlaneField>, point_masses: Vec<(f64, f64, f64)>) -> Result<Self> {
        if let Some(d) = &density {
            if d.values().iter().any(|v| !(v.re >= 0.0) || v.im != 0.0) {
                return Err(Error::invalid("density", "must be real and nonnegative"));
            }
        }
        for &(w, y, _) in &point_masses {
            if !(w > 0.0) || !(y > 0.0) {
                return Err(Error::invalid("masses", format!("need weight > 0 and height > 0, got ({w}, {y})")));
            }
        }
        Ok(HalfPlaneMeasure { density, point_masses })
    }

    pub fn density(&self) -> Option<&HalfPlaneField> {
        self.density.as_ref()
    }

    pub fn point_masses(&self) -> &[(f64, f64, f64)] {
        &self.point_masses
    }
}

/// `μ` of the box `(b, b + a) × (0, a)` from per-row prefix integrals.
fn box_mass(rows: &[PrefixIntegral], heights: &[f64], masses: &[(f64, f64, f64)], a: f64, b: f64) -> f64 {
    let mut total = 0.0;
    if !rows.is_empty() {
        let r: Vec<f64> = rows.iter().map(|p| p.between(b, b + a).re).collect();
        // Constant below the first height.
        total += r[0] * a.min(heights[0]);
        for k in 0..heights.len() - 1 {
            let (y0, y1) = (heights[k], heights[k + 1]);
            if a <= y0 {
                break;
            }
            let top = a.min(y1);
            let t = (top - y0) / (y1 - y0);
            let at_top = r[k] + (r[k + 1] - r[k]) * t;
            total += 0.5 * (r[k] + at_top) * (top - y0);
        }
    }
    for &(w, y, x) in masses {
        if y < a && x > b && x < b + a {
            total += w;
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarlesonReport {
    /// `μ(Q_{a,b})/a`.
    pub field: HalfPlaneField,
    pub sup: f64,
    /// `(a, b)` where the supremum is attained.
    pub arg_sup: (f64, f64),
    /// `sup ≤ threshold`, when a threshold is given.
    pub is_carleson: Option<bool>,
}

/// Box sums `a⁻¹·μ(Q_{a,b})`, `Q_{a,b} = (b, b + a) × (0, a)`, on `axes`.
pub fn carleson_transform(mu: &HalfPlaneMeasure, axes: &FieldAxes, threshold: Option<f64>) -> CarlesonReport {
    let (rows, heights): (Vec<PrefixIntegral>, Vec<f64>) = match &mu.density {
        Some(d) => (0..d.a_axis().count())
            .map(|i| (PrefixIntegral::new(&d.row_signal(i)), d.a_axis().a(i)))
            .unzip(),
        None => (Vec::new(), Vec::new()),
    };
    let field = HalfPlaneField::from_fn(axes.a, axes.b, |a, b| {
        C64::new(box_mass(&rows, &heights, &mu.point_masses, a, b) / a, 0.0)
    });
    let mut sup = f64::NEG_INFINITY;
    let mut arg_sup = (axes.a.a(0), axes.b.x(0));
    for i in 0..axes.a.count() {
        for j in 0..axes.b.n() {
            let v = field.get(i, j).re;
            if v > sup {
                sup = v;
                arg_sup = (axes.a.a(i), axes.b.x(j));
            }
        }
    }
    CarlesonReport {
        field,
        sup,
        arg_sup,
        is_carleson: threshold.map(|t| sup <= t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiducial::Builtin;
    use crate::field::LogAxis;
    use crate::generators::band_limited;
    use crate::signal::RealGrid;

    #[test]
    fn hardy_norm_basics() {
        let ax = LogAxis::new(0.1, 2.0, 5).unwrap();
        let bg = RealGrid::new(-1.0, 0.5, 5).unwrap();
        let zero = HalfPlaneField::zeros(ax, bg);
        assert_eq!(hardy_norm_aff(&zero, 2.0).unwrap(), 0.0);
        let u = HalfPlaneField::from_fn(ax, bg, |a, b| C64::new(a.sqrt() * (1.0 + b * b), 0.0));
        let n1 = hardy_norm_aff(&u, 2.0).unwrap();
        let n3 = hardy_norm_aff(&u.scale(C64::new(3.0, 0.0)), 2.0).unwrap();
        assert_eq!(n3, 3.0 * n1);
        assert!(hardy_norm_aff(&u, 0.5).is_err());
    }

    #[test]
    fn poisson_field_norm_peaks_at_small_scales() {
        let grid = RealGrid::span(-100.0, 100.0, 0.01).unwrap();
        let f = band_limited(grid, 3, 8, 0.1, 0.5, 20.0);
        let f = f.scale(C64::new(1.0 / f.lp_norm(2.0).unwrap(), 0.0));
        let ax = LogAxis::from_range(1.0 / 16.0, 64.0, 21).unwrap();
        let u = covariant(&Fiducial::builtin("poisson").unwrap(), RepIndex::TWO, &f, &FieldAxes::new(ax, grid)).unwrap();
        let n = hardy_norm_aff(&u, 2.0).unwrap();
        assert!(n.is_finite() && n > 0.5 && n <= 1.0 + 1e-3, "{n}");
        let first = hardy_norm_aff(&HalfPlaneField::new(LogAxis::new(ax.a(0), 2.0, 1).unwrap(), grid, u.row(0).to_vec()).unwrap(), 2.0).unwrap();
        assert_eq!(first, n);
    }

    #[test]
    fn boundary_limit_norm_is_the_signal_norm() {
        let grid = RealGrid::span(-60.0, 60.0, 0.01).unwrap();
        let f = Signal::from_real_fn(grid, |x| x.cos() * (-x * x / 100.0).exp());
        let ax = LogAxis::new(0.05, 2.0, 3).unwrap();
        let p = RepIndex::TWO;
        let u = covariant(&Fiducial::builtin("poisson").unwrap(), p, &f, &FieldAxes::new(ax, grid)).unwrap();
        let m = transported_norm_contra(Pairing::HardyInf, &Vector::Plus, &u, p).unwrap();
        let n = f.lp_norm(2.0).unwrap();
        assert!((m - n).abs() <= 0.02 * n);
        let zero = HalfPlaneField::zeros(ax, grid);
        assert_eq!(transported_norm_contra(Pairing::HardyInf, &Vector::Plus, &zero, p).unwrap(), 0.0);
        let m2 = transported_norm_contra(Pairing::HardyInf, &Vector::Plus, &u.scale(C64::new(2.0, 0.0)), p).unwrap();
        assert!((m2 - 2.0 * m).abs() <= 1e-12 * m);
    }

    #[test]
    fn sum_of_two_poisson_transforms() {
        // W₁ = Poisson, W₂ = 2·Poisson; ‖W₁v₁ + W₂v₂‖ = ‖v₁ + 2v₂‖.
        let grid = RealGrid::span(-60.0, 60.0, 0.01).unwrap();
        let v1 = Signal::from_real_fn(grid, |x| (-x * x / 8.0).exp());
        let v2 = Signal::from_real_fn(grid, |x| (2.0 * x).sin() * (-x * x / 20.0).exp());
        let axes = FieldAxes::new(LogAxis::new(0.05, 2.0, 3).unwrap(), grid);
        let p = RepIndex::TWO;
        let pois = Fiducial::builtin("poisson").unwrap();
        let w1 = covariant(&pois, p, &v1, &axes).unwrap();
        let w2 = covariant(&pois, p, &v2, &axes).unwrap().scale(C64::new(2.0, 0.0));
        let sum = w1.combine(C64::new(1.0, 0.0), &w2, C64::new(1.0, 0.0)).unwrap();
        let lhs = transported_norm_contra(Pairing::HardyInf, &Vector::Plus, &sum, p).unwrap();
        let rhs = v1.combine(C64::new(1.0, 0.0), &v2, C64::new(2.0, 0.0)).unwrap().lp_norm(2.0).unwrap();
        assert!((lhs - rhs).abs() <= 0.05 * rhs);
    }

    #[test]
    fn conjugate_poisson_isometry() {
        let grid = RealGrid::span(-400.0, 400.0, 0.02).unwrap();
        let axes = FieldAxes::new(LogAxis::from_range(1.0 / 64.0, 64.0, 25).unwrap(), grid);
        let plus = Signal::from_fn(grid, |x| C64::new(1.0, 0.0) / C64::new(x, 1.0));
        let r = conj_poisson_isometry(&plus, &axes).unwrap();
        assert!((r.ratio - 1.0).abs() <= 0.05, "{r:?}");
        // ‖Q_a f‖ = ‖f(· + ia)‖ for f = 1/(x+i).
        assert!((r.ratio - (1.0 + axes.a.a_min()).powf(-0.5)).abs() <= 5e-3);
        let gauss = Signal::from_real_fn(grid, |x| (-x * x).exp());
        let r = conj_poisson_isometry(&gauss, &axes).unwrap();
        assert!((r.ratio - 1.0).abs() <= 0.05, "{r:?}");
        let r = conj_poisson_isometry(&Signal::zeros(grid), &axes).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, 1.0));
    }

    fn ortho_setup() -> (RealGrid, FieldAxes) {
        let grid = RealGrid::span(-200.0, 200.0, 0.1).unwrap();
        let axes = FieldAxes::new(LogAxis::octaves(1.0 / 16.0, 64.0, 8).unwrap(), grid);
        (grid, axes)
    }

    #[test]
    fn orthogonality_constant_is_stable() {
        let (grid, axes) = ortho_setup();
        let mh = Kernel::Builtin(Builtin::MexicanHat);
        let pairs: Vec<(Signal, Signal)> = (0..3)
            .map(|k| {
                let v = band_limited(grid, 10 + 2 * k, 8, 0.1, 0.5, 20.0);
                let w = band_limited(grid, 11 + 2 * k, 8, 0.1, 0.5, 20.0);
                let vp = v.combine(C64::new(1.0, 0.0), &w, C64::new(0.5, 0.0)).unwrap();
                (v, vp)
            })
            .collect();
        let r = orthogonality_constant(&mh, &mh, &pairs, &axes).unwrap();
        assert!(r.spread <= 0.05, "{r:?}");
        assert!((r.c.re - std::f64::consts::PI).abs() <= 0.05 * std::f64::consts::PI, "{r:?}");
        let two = mh.clone().affine(1.0, 0.0, C64::new(2.0, 0.0));
        let r2 = orthogonality_constant(&mh, &two, &pairs, &axes).unwrap();
        assert!((r2.c.norm() / r.c.norm() - 2.0).abs() <= 0.1);
    }

    #[test]
    fn orthogonal_pairs_give_a_vanishing_integral() {
        let (grid, axes) = ortho_setup();
        let mh = Kernel::Builtin(Builtin::MexicanHat);
        let v = band_limited(grid, 21, 8, 0.1, 0.5, 20.0);
        let w = band_limited(grid, 22, 8, 0.1, 0.5, 20.0);
        let vp = w.combine(C64::new(1.0, 0.0), &v, -(w.inner(&v).unwrap() / v.energy())).unwrap();
        assert!(v.inner(&vp).unwrap().norm() <= 1e-10 * v.l2() * vp.l2());
        let (lhs, _) = haar_inner(&mh, &mh, &v, &vp, &axes).unwrap();
        let (sv, _) = haar_inner(&mh, &mh, &v, &v, &axes).unwrap();
        let (svp, _) = haar_inner(&mh, &mh, &vp, &vp, &axes).unwrap();
        assert!(lhs.norm() <= 0.02 * (sv.norm() * svp.norm()).sqrt(), "{lhs} {sv} {svp}");
        let r = orthogonality_constant(&mh, &mh, &[(v, vp)], &axes);
        assert!(r.is_err());
    }

    #[test]
    fn carleson_examples() {
        let axes = FieldAxes::new(LogAxis::from_range(0.05, 8.0, 20).unwrap(), RealGrid::span(-4.0, 4.0, 0.25).unwrap());
        let dg = RealGrid::span(-20.0, 20.0, 0.05).unwrap();
        let strip = HalfPlaneField::from_fn(LogAxis::from_range(0.01, 1.0, 30).unwrap(), dg, |_, _| C64::new(1.0, 0.0));
        let mu = HalfPlaneMeasure::new(Some(strip), vec![]).unwrap();
        let r = carleson_transform(&mu, &axes, Some(1.0 + 1e-9));
        for i in 0..axes.a.count() {
            let a = axes.a.a(i);
            for j in 0..axes.b.n() {
                assert!((r.field.get(i, j).re - a.min(1.0)).abs() <= 1e-9);
            }
        }
        assert!((r.sup - 1.0).abs() <= 1e-9 && r.is_carleson == Some(true));

        let whole = HalfPlaneField::from_fn(LogAxis::from_range(0.01, 8.0, 40).unwrap(), dg, |_, _| C64::new(1.0, 0.0));
        let r = carleson_transform(&HalfPlaneMeasure::new(Some(whole), vec![]).unwrap(), &axes, Some(1.0));
        assert!((r.sup - 8.0).abs() <= 1e-9 && r.is_carleson == Some(false));
        assert!((r.arg_sup.0 - 8.0).abs() <= 1e-9);

        let point = HalfPlaneMeasure::new(None, vec![(3.0, 0.3, 0.1)]).unwrap();
        let r = carleson_transform(&point, &axes, None);
        for i in 0..axes.a.count() {
            let a = axes.a.a(i);
            for j in 0..axes.b.n() {
                let b = axes.b.x(j);
                let inside = 0.3 < a && b < 0.1 && 0.1 < b + a;
                let e = if inside { 3.0 / a } else { 0.0 };
                assert_eq!(r.field.get(i, j).re, e);
            }
        }
        assert!(HalfPlaneMeasure::new(None, vec![(-1.0, 0.3, 0.0)]).is_err());
    }
}
