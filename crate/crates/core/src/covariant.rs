//! Covariant transforms `W_F f(g) = F(π_p(g⁻¹) f)` from signals to
//! half-plane fields.
//!
//! For a kernel functional `F(f) = ∫ f·k` the definition reduces to
//! `W_F f(a,b) = a^{1/p - 1} ∫ f(u)·k((u - b)/a) du`, evaluated level by
//! level as an FFT correlation when the translation grid is a sub-lattice
//! of the signal grid.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::conv::{Correlator, PrefixIntegral};
use crate::error::{Error, Result};
use crate::fiducial::{Fiducial, Kernel};
use crate::field::{HalfPlaneField, LogAxis};
use crate::group::GroupElement;
use crate::par::map_range;
use crate::representation::{quasi_regular, RepIndex};
use crate::signal::{RealGrid, Signal};

/// Scale axis and translation grid of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldAxes {
    pub a: LogAxis,
    pub b: RealGrid,
}

pub const DEFAULT_A_MIN: f64 = 1.0 / 64.0;
pub const DEFAULT_A_MAX: f64 = 64.0;
pub const DEFAULT_A_COUNT: usize = 64;

impl FieldAxes {
    pub fn new(a: LogAxis, b: RealGrid) -> Self {
        FieldAxes { a, b }
    }

    /// 64 scales from `2^-6` to `2^6`; translations on the signal grid.
    pub fn default_for(grid: &RealGrid) -> Self {
        FieldAxes {
            a: LogAxis::from_range(DEFAULT_A_MIN, DEFAULT_A_MAX, DEFAULT_A_COUNT).expect("valid defaults"),
            b: *grid,
        }
    }
}

/// `a^{1/p - 1}`.
#[inline]
fn kernel_weight(p: RepIndex, a: f64) -> f64 {
    1.0 / (p.weight(a) * a)
}

fn edge_warning(f: &Signal) -> Option<String> {
    let v = f.values();
    let sup = f.sup_norm();
    let edge = v[0].norm().max(v[v.len() - 1].norm());
    (sup > 0.0 && edge > 1e-6 * sup).then(|| {
        format!(
            "signal does not vanish at the grid edges (|f| = {edge:.3e} of max {sup:.3e}); \
             values outside the grid are taken as zero"
        )
    })
}

fn window_warning(support: (f64, f64), f: &Signal, axes: &FieldAxes) -> Option<String> {
    let (lo, hi) = support;
    let a = axes.a.a_max();
    let left = axes.b.x0() + a * lo.min(0.0);
    let right = axes.b.x_end() + a * hi.max(0.0);
    let g = f.grid();
    (left < g.x0() - 1e-9 || right > g.x_end() + 1e-9).then(|| {
        format!(
            "kernel windows reach [{left:.4}, {right:.4}] beyond the signal grid [{:.4}, {:.4}]; \
             values outside the grid are taken as zero",
            g.x0(),
            g.x_end()
        )
    })
}

/// Field of `a^{1/p-1} ∫ f(u)·k((u-b)/a) du` for a kernel without closed
/// piecewise form.
fn smooth_kernel_field(kernel: &Kernel, p: RepIndex, f: &Signal, axes: &FieldAxes) -> HalfPlaneField {
    let corr = Correlator::trapezoid(f, axes.b);
    let rows = map_range(axes.a.count(), |i| {
        let a = axes.a.a(i);
        let w = kernel_weight(p, a);
        corr.apply(|d| kernel.eval(d / a) * w)
    });
    HalfPlaneField::from_rows(axes.a, axes.b, rows)
}

fn pieces_at(pre: &PrefixIntegral, pieces: &[(f64, f64, C64)], w: f64, a: f64, b: f64) -> C64 {
    pieces
        .iter()
        .map(|&(lo, hi, v)| pre.between(b + a * lo, b + a * hi) * v)
        .sum::<C64>()
        * w
}

fn piecewise_kernel_field(pieces: &[(f64, f64, C64)], p: RepIndex, f: &Signal, axes: &FieldAxes) -> HalfPlaneField {
    let pre = PrefixIntegral::new(f);
    let rows = map_range(axes.a.count(), |i| {
        let a = axes.a.a(i);
        let w = kernel_weight(p, a);
        axes.b.points().map(|b| pieces_at(&pre, pieces, w, a, b)).collect()
    });
    HalfPlaneField::from_rows(axes.a, axes.b, rows)
}

/// `W_F f` on the given axes.
///
/// A warning is attached to the field when zero extension of `f` beyond
/// its grid enters the result.
pub fn covariant(fid: &Fiducial, p: RepIndex, f: &Signal, axes: &FieldAxes) -> Result<HalfPlaneField> {
    let mut field = match fid {
        Fiducial::Kernel { kernel, .. } => {
            let mut field = match kernel.pieces() {
                Some(ps) => piecewise_kernel_field(&ps, p, f, axes),
                None => smooth_kernel_field(kernel, p, f, axes),
            };
            let warning = match kernel.support() {
                Some(s) => window_warning(s, f, axes),
                None => edge_warning(f),
            };
            if let Some(w) = warning {
                field.warn(w);
            }
            field
        }
        Fiducial::PointEvaluation => {
            let rows = map_range(axes.a.count(), |i| {
                let w = 1.0 / p.weight(axes.a.a(i));
                axes.b.points().map(|b| f.interpolate(b) * w).collect()
            });
            HalfPlaneField::from_rows(axes.a, axes.b, rows)
        }
        Fiducial::ModulusAverage => average_transform(p, f, axes),
    };
    if let Fiducial::PointEvaluation = fid {
        if axes.b.x0() < f.grid().x0() - 1e-9 || axes.b.x_end() > f.grid().x_end() + 1e-9 {
            field.warn("translation grid extends past the signal grid; values outside are taken as zero");
        }
    }
    Ok(field.with_p(p.p()))
}

/// `W_F f(g)` by the definition: `F` applied to `π_p(g⁻¹) f` sampled on
/// `f`'s grid by linear interpolation.
pub fn covariant_at(fid: &Fiducial, p: RepIndex, f: &Signal, g: GroupElement) -> C64 {
    fid.evaluate(&quasi_regular(p, g.inverse(), f))
}

/// `W_F f(g)` by the same quadrature [`covariant`] uses, at a single point.
pub fn covariant_direct_at(fid: &Fiducial, p: RepIndex, f: &Signal, g: GroupElement) -> C64 {
    let (a, b) = (g.a(), g.b());
    match fid {
        Fiducial::Kernel { kernel, .. } => {
            let w = kernel_weight(p, a);
            match kernel.pieces() {
                Some(ps) => pieces_at(&PrefixIntegral::new(f), &ps, w, a, b),
                None => {
                    let grid = f.grid();
                    f.values()
                        .iter()
                        .enumerate()
                        .map(|(k, &v)| v * kernel.eval((grid.x(k) - b) / a) * grid.trapezoid_weight(k))
                        .sum::<C64>()
                        * (grid.dx() * w)
                }
            }
        }
        Fiducial::PointEvaluation => f.interpolate(b) / p.weight(a),
        Fiducial::ModulusAverage => {
            PrefixIntegral::of_modulus(f).between(b - a, b + a) * (0.5 * kernel_weight(p, a))
        }
    }
}

/// Wavelet transform `⟨f, π_2(g) v₀⟩`: the covariant transform of the
/// kernel `conj(v₀)` at `p = 2`.
pub fn wavelet_transform(v0: &Kernel, f: &Signal, axes: &FieldAxes) -> Result<HalfPlaneField> {
    covariant(&Fiducial::kernel(v0.clone().conj(), "wavelet"), RepIndex::TWO, f, axes)
}

/// `⟨f, π_2(g) v₀⟩ = ∫ f·conj(π_2(g) v₀)` with `π_2(g) v₀` sampled on
/// `f`'s grid.
pub fn wavelet_inner_at(v0: &Kernel, f: &Signal, g: GroupElement) -> C64 {
    let (a, b) = (g.a(), g.b());
    let s = a.powf(-0.5);
    let pi_v = f.map(|x, _| v0.eval((x - b) / a) * s);
    let grid = f.grid();
    f.values()
        .iter()
        .zip(pi_v.values())
        .enumerate()
        .map(|(k, (&u, &v))| u * v.conj() * grid.trapezoid_weight(k))
        .sum::<C64>()
        * grid.dx()
}

fn closed_form_field(f: &Signal, axes: &FieldAxes, kernel: impl Fn(f64, f64) -> C64 + Sync) -> HalfPlaneField {
    let corr = Correlator::trapezoid(f, axes.b);
    let rows = map_range(axes.a.count(), |i| {
        let a = axes.a.a(i);
        corr.apply(|d| kernel(a, d))
    });
    let mut field = HalfPlaneField::from_rows(axes.a, axes.b, rows);
    if let Some(w) = edge_warning(f) {
        field.warn(w);
    }
    field
}

/// Cauchy integral `[Cf](b + ia) = (1/2πi) ∫ f(t)/(t - (b + ia)) dt`.
pub fn cauchy_integral(f: &Signal, axes: &FieldAxes) -> HalfPlaneField {
    let c = C64::new(0.0, 2.0 * PI);
    closed_form_field(f, axes, |a, d| C64::new(1.0, 0.0) / (c * C64::new(d, -a)))
}

/// Poisson integral `[Pf](b, a) = (1/π) ∫ a/((t - b)² + a²) f(t) dt`.
pub fn poisson_integral(f: &Signal, axes: &FieldAxes) -> HalfPlaneField {
    closed_form_field(f, axes, |a, d| C64::new(a / (PI * (d * d + a * a)), 0.0))
}

/// Conjugate Poisson integral `[Qf](b, a) = (1/π) ∫ (b - t)/((b - t)² + a²) f(t) dt`.
pub fn conj_poisson_integral(f: &Signal, axes: &FieldAxes) -> HalfPlaneField {
    closed_form_field(f, axes, |a, d| C64::new(-d / (PI * (d * d + a * a)), 0.0))
}

/// Averaging transform `a^{-1/q}/2 ∫_{b-a}^{b+a} |f|`, `1/p + 1/q = 1`.
/// Integrals are exact over the piecewise-linear interpolant of `|f|`.
pub fn average_transform(p: RepIndex, f: &Signal, axes: &FieldAxes) -> HalfPlaneField {
    let pre = PrefixIntegral::of_modulus(f);
    let rows = map_range(axes.a.count(), |i| {
        let a = axes.a.a(i);
        let w = 0.5 * kernel_weight(p, a);
        axes.b.points().map(|b| pre.between(b - a, b + a) * w).collect()
    });
    let mut field = HalfPlaneField::from_rows(axes.a, axes.b, rows);
    if let Some(w) = window_warning((-1.0, 1.0), f, axes) {
        field.warn(w);
    }
    field.with_p(p.p())
}

/// Pointwise `sup_ω |W_{F_ω} f|` over a finite family of linear fiducials.
pub fn family_sup_transform(family: &[Fiducial], p: RepIndex, f: &Signal, axes: &FieldAxes) -> Result<HalfPlaneField> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if let Some(bad) = family.iter().find(|fid| !fid.is_linear()) {
        return Err(Error::invalid("family", format!("`{}` is not a linear fiducial", bad.label())));
    }
    let mut acc: Option<HalfPlaneField> = None;
    for fid in family {
        let u = covariant(fid, p, f, axes)?;
        acc = Some(match acc {
            None => u.map(|_, _, v| C64::new(v.norm(), 0.0)),
            Some(prev) => {
                let mut out = prev;
                for i in 0..axes.a.count() {
                    for j in 0..axes.b.n() {
                        let m = out.get(i, j).re.max(u.get(i, j).norm());
                        out.set(i, j, C64::new(m, 0.0));
                    }
                }
                out
            }
        });
    }
    Ok(acc.expect("nonempty family").with_p(p.p()))
}
