//! Contravariant transforms `M_w u(x) = ⟨u, π_p(·) w⟩` from half-plane
//! fields back to signals, for the four invariant pairings; nuclei, atoms
//! and atomic decompositions.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::conv::Correlator;
use crate::covariant::{wavelet_transform, FieldAxes};
use crate::error::{Error, Result};
use crate::fiducial::{admissibility, AdmissibilityReport, Kernel};
use crate::field::HalfPlaneField;
use crate::group::GroupElement;
use crate::par::map_range;
use crate::representation::RepIndex;
use crate::signal::{RealGrid, Signal};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pairing {
    /// `∫∫ u·v a⁻² da db`.
    Haar,
    /// `lim_{a→0} ∫ u·v db/a`.
    Hardy,
    /// `sup_{a,b} |u·v|`.
    Sup,
    /// `limsup_{a→0} sup_b u·v`.
    HardyInf,
}

impl FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(Pairing::Haar),
            "hardy" => Ok(Pairing::Hardy),
            "sup" => Ok(Pairing::Sup),
            "hardyinf" | "hardy-inf" | "hardy_inf" => Ok(Pairing::HardyInf),
            _ => Err(Error::invalid("pairing", format!("unknown pairing `{s}` (haar, hardy, sup, hardyinf)"))),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Haar => "haar",
            Pairing::Hardy => "hardy",
            Pairing::Sup => "sup",
            Pairing::HardyInf => "hardyinf",
        })
    }
}

/// The vector `w` a contravariant transform pairs against.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    /// Vertical ray above the output point.
    Plus,
    /// Cone `|b - t| ≤ a` above the output point.
    Star,
    Kernel(Kernel),
}

/// `M_w u` on the translation grid of `u`.
pub fn contravariant(pairing: Pairing, w: &Vector, p: RepIndex, u: &HalfPlaneField) -> Result<Signal> {
    match (pairing, w) {
        (Pairing::Haar, Vector::Kernel(k)) => haar_pairing(k, p, u),
        (Pairing::Hardy, Vector::Kernel(k)) => Ok(hardy_pairing(k, p, u)?.value),
        (Pairing::Sup, Vector::Plus | Vector::Star) => Ok(sup_pairing(w, p, u)?.value),
        (Pairing::HardyInf, Vector::Plus | Vector::Star) => Ok(hardy_inf_pairing(w, p, u)?.value),
        (Pairing::Haar | Pairing::Hardy, _) => Err(Error::invalid(
            "vector",
            format!("the {pairing} pairing needs a kernel vector, not vplus/vstar"),
        )),
        (Pairing::Sup | Pairing::HardyInf, Vector::Kernel(_)) => Err(Error::invalid(
            "vector",
            format!("the {pairing} pairing is defined for vplus and vstar only"),
        )),
    }
}

/// Per-level contributions `Σ_b y·w₀((x-b)/a)·scale(a)` to an output on the
/// translation grid.
fn level_correlations(w0: &Kernel, u: &HalfPlaneField, levels: &[usize], scale: impl Fn(f64) -> f64 + Sync) -> Vec<Vec<C64>> {
    let bg = *u.b_grid();
    map_range(levels.len(), |k| {
        let i = levels[k];
        let a = u.a_axis().a(i);
        let s = scale(a);
        let y: Vec<C64> = u
            .row(i)
            .iter()
            .enumerate()
            .map(|(j, &v)| v * bg.trapezoid_weight(j) * bg.dx())
            .collect();
        Correlator::new(bg, y, bg).apply(|d| w0.eval(-d / a) * s)
    })
}

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `∫∫ u(a,b)·[π_p(a,b) w₀](x) a⁻² da db`, trapezoid in `log a`.
///
/// Fails with [`Error::DivergentHaarIntegral`] when the per-level
/// contributions do not decay towards an end of the scale axis.
pub fn haar_pairing(w0: &Kernel, p: RepIndex, u: &HalfPlaneField) -> Result<Signal> {
    let ax = *u.a_axis();
    let n = ax.count();
    let h = ax.log_step();
    let levels: Vec<usize> = (0..n).collect();
    let rows = level_correlations(w0, u, &levels, |a| p.weight(a) / a);
    let weight = |i: usize| if n == 1 { 1.0 } else if i == 0 || i == n - 1 { 0.5 * h } else { h };
    let norms: Vec<f64> = rows.iter().enumerate().map(|(i, r)| l2(r) * weight(i)).collect();
    check_haar_convergence(&norms)?;
    let mut out = vec![ZERO; u.b_grid().n()];
    for (i, r) in rows.iter().enumerate() {
        let w = weight(i);
        for (o, v) in out.iter_mut().zip(r) {
            *o += v * w;
        }
    }
    Signal::new(*u.b_grid(), out)
}

/// Divergence test on the per-level contribution norms, ascending in `a`.
fn check_haar_convergence(norms: &[f64]) -> Result<()> {
    let n = norms.len();
    if n < 4 {
        return Ok(());
    }
    let total: f64 = norms.iter().sum();
    if total == 0.0 {
        return Ok(());
    }
    let small = norms[0] >= norms[1] && norms[1] >= norms[2] && norms[0] > 1e-6 * total;
    let large = norms[n - 1] >= norms[n - 2] && norms[n - 2] >= norms[n - 3] && norms[n - 1] > 1e-6 * total;
    let edge = match (small, large) {
        (true, _) => "small-scale",
        (false, true) => "large-scale",
        _ => return Ok(()),
    };
    Err(Error::DivergentHaarIntegral {
        edge,
        partial_sums: norms.to_vec(),
    })
}

/// `a → 0` limit evaluated at the three smallest scales of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    /// Richardson extrapolate to `a = 0`.
    pub value: Signal,
    pub scales: [f64; 3],
    /// The sequence at the three scales, smallest first.
    pub raw: [Signal; 3],
    /// `max_k |raw_k|`, the tail estimate of the upper limit of the modulus.
    pub limsup: Vec<f64>,
}

/// Value at `a = 0` of the quadratic through `(a_k, s_k)`.
pub fn richardson(a: [f64; 3], s: [C64; 3]) -> C64 {
    let mut acc = ZERO;
    for i in 0..3 {
        let mut l = 1.0;
        for j in 0..3 {
            if j != i {
                l *= a[j] / (a[j] - a[i]);
            }
        }
        acc += s[i] * l;
    }
    acc
}

fn limit_of(grid: RealGrid, scales: [f64; 3], raw: [Vec<C64>; 3]) -> LimitReport {
    let value: Vec<C64> = (0..grid.n())
        .map(|j| richardson(scales, [raw[0][j], raw[1][j], raw[2][j]]))
        .collect();
    let limsup = (0..grid.n())
        .map(|j| raw.iter().map(|r| r[j].norm()).fold(0.0, f64::max))
        .collect();
    let [r0, r1, r2] = raw;
    let sig = |v: Vec<C64>| Signal::new(grid, v).expect("grid length");
    LimitReport {
        value: sig(value),
        scales,
        raw: [sig(r0), sig(r1), sig(r2)],
        limsup,
    }
}

fn smallest_three(u: &HalfPlaneField) -> Result<[f64; 3]> {
    let ax = u.a_axis();
    if ax.count() < 3 {
        return Err(Error::invalid("field", "the a → 0 limit needs at least three scales"));
    }
    Ok([ax.a(0), ax.a(1), ax.a(2)])
}

/// `lim_{a→0} ∫ u(a,b)·[π_p(a,b) w₀](x) db/a`.
pub fn hardy_pairing(w0: &Kernel, p: RepIndex, u: &HalfPlaneField) -> Result<LimitReport> {
    let scales = smallest_three(u)?;
    let rows = level_correlations(w0, u, &[0, 1, 2], |a| p.weight(a) / a);
    let [r0, r1, r2]: [Vec<C64>; 3] = rows.try_into().expect("three levels");
    Ok(limit_of(*u.b_grid(), scales, [r0, r1, r2]))
}

/// Supremum over the scale axis, with the scale index attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SupReport {
    pub value: Signal,
    pub arg_level: Vec<usize>,
}

impl SupReport {
    /// True when some supremum sits on the first or last scale, so the
    /// finite axis may truncate it.
    pub fn touches_axis_end(&self, count: usize) -> bool {
        self.arg_level.iter().any(|&k| k == 0 || k + 1 == count)
    }
}

/// Sliding-window maximum of `v` over `[j - r, j + r]`.
fn window_max(v: &[f64], r: usize) -> Vec<f64> {
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0;
    for j in 0..n {
        while next < n && next <= j + r {
            while dq.back().is_some_and(|&k| v[k] <= v[next]) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&k| k + r < j) {
            dq.pop_front();
        }
        out.push(v[*dq.front().expect("window is nonempty")]);
    }
    out
}

/// Cone half-width in grid cells at scale `a`.
fn cone_cells(a: f64, db: f64) -> usize {
    (a / db + 1e-9).floor() as usize
}

/// Level-wise `a^{-1/p}·|u|` reduced by the cone window when `star`.
fn level_sup(u: &HalfPlaneField, p: RepIndex, i: usize, star: bool, part: impl Fn(C64) -> f64) -> Vec<f64> {
    let a = u.a_axis().a(i);
    let w = p.weight(a);
    let v: Vec<f64> = u.row(i).iter().map(|&z| part(z) * w).collect();
    if star {
        window_max(&v, cone_cells(a, u.b_grid().dx()))
    } else {
        v
    }
}

/// Vertical (`v⁺`) or non-tangential (`v*`) maximal function of
/// `a^{-1/p}·u` over the scale axis of the field.
pub fn sup_pairing(w: &Vector, p: RepIndex, u: &HalfPlaneField) -> Result<SupReport> {
    let star = match w {
        Vector::Plus => false,
        Vector::Star => true,
        Vector::Kernel(_) => return Err(Error::invalid("vector", "the sup pairing is defined for vplus and vstar only")),
    };
    let n = u.a_axis().count();
    let rows = map_range(n, |i| level_sup(u, p, i, star, |z| z.norm()));
    let nb = u.b_grid().n();
    let mut value = vec![0.0; nb];
    let mut arg_level = vec![0; nb];
    for (i, r) in rows.iter().enumerate() {
        for j in 0..nb {
            if r[j] > value[j] || i == 0 {
                value[j] = r[j];
                arg_level[j] = i;
            }
        }
    }
    Ok(SupReport {
        value: Signal::new(*u.b_grid(), value.into_iter().map(|x| C64::new(x, 0.0)).collect())?,
        arg_level,
    })
}

/// Normal (`v⁺`) or non-tangential (`v*`) boundary limit of
/// `a^{-1/p}·u`. The non-tangential value takes the cone supremum of the
/// real and imaginary parts separately at each of the three smallest
/// scales before extrapolating.
pub fn hardy_inf_pairing(w: &Vector, p: RepIndex, u: &HalfPlaneField) -> Result<LimitReport> {
    let scales = smallest_three(u)?;
    let grid = *u.b_grid();
    let raw: Vec<Vec<C64>> = match w {
        Vector::Plus => (0..3)
            .map(|i| {
                let s = p.weight(scales[i]);
                u.row(i).iter().map(|&z| z * s).collect()
            })
            .collect(),
        Vector::Star => (0..3)
            .map(|i| {
                let re = level_sup(u, p, i, true, |z| z.re);
                let im = level_sup(u, p, i, true, |z| z.im);
                re.into_iter().zip(im).map(|(x, y)| C64::new(x, y)).collect()
            })
            .collect(),
        Vector::Kernel(_) => {
            return Err(Error::invalid("vector", "the hardyinf pairing is defined for vplus and vstar only"))
        }
    };
    let [r0, r1, r2]: [Vec<C64>; 3] = raw.try_into().expect("three levels");
    let mut report = limit_of(grid, scales, [r0, r1, r2]);
    if let Vector::Star = w {
        // The tail estimate for the cone is the cone maximum of the modulus.
        report.limsup = (0..3)
            .map(|i| level_sup(u, p, i, true, |z| z.norm()))
            .fold(vec![0.0; grid.n()], |acc, r| acc.into_iter().zip(r).map(|(x, y)| x.max(y)).collect());
    }
    Ok(report)
}

/// Outcome of the nucleus checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NucleusReport {
    pub support_ok: bool,
    pub bound_ok: bool,
    pub mean_ok: bool,
    pub max_abs: f64,
    pub mean: f64,
    pub l1: f64,
}

impl NucleusReport {
    pub fn is_nucleus(&self) -> bool {
        self.support_ok && self.bound_ok && self.mean_ok
    }

    fn reason(&self) -> String {
        let mut r = Vec::new();
        if !self.support_ok {
            r.push("nonzero outside [-1, 1]".to_string());
        }
        if !self.bound_ok {
            r.push(format!("max |r| = {} is not below 1/2", self.max_abs));
        }
        if !self.mean_ok {
            r.push(format!("|∫r| = {:.3e} exceeds 1e-10·‖r‖₁ = {:.3e}", self.mean, 1e-10 * self.l1));
        }
        r.join("; ")
    }
}

/// Checks support in `[-1, 1]`, `|r| < ½` and `∫r = 0` within
/// `1e-10·‖r‖₁`.
pub fn is_nucleus(r: &Signal) -> NucleusReport {
    let g = r.grid();
    let support_ok = r
        .values()
        .iter()
        .enumerate()
        .all(|(k, v)| g.x(k).abs() <= 1.0 + 1e-12 || v.norm() == 0.0);
    let max_abs = r.sup_norm();
    let mean = r.integral().norm();
    let l1 = r.abs().integral().re;
    NucleusReport {
        support_ok,
        bound_ok: max_abs < 0.5,
        mean_ok: mean <= 1e-10 * l1,
        max_abs,
        mean,
        l1,
    }
}

/// `π_1(g) r = a⁻¹·r((x - b)/a)`, sampled on the image of `r`'s grid so no
/// interpolation enters.
pub fn atom(r: &Signal, g: GroupElement) -> Signal {
    let (a, b) = (g.a(), g.b());
    let rg = r.grid();
    let grid = RealGrid::new(b + a * rg.x0(), a * rg.dx(), rg.n()).expect("image of a valid grid");
    Signal::new(grid, r.values().iter().map(|v| v / a).collect()).expect("same length")
}

/// A finite sum of weighted point masses on the group.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointMassField {
    pub masses: Vec<(C64, GroupElement)>,
}

impl PointMassField {
    pub fn new(masses: Vec<(C64, GroupElement)>) -> Self {
        PointMassField { masses }
    }

    pub fn total_variation(&self) -> f64 {
        self.masses.iter().map(|(l, _)| l.norm()).sum()
    }

    /// A grid covering every atom's support `[b - a, b + a]` at step `dx`,
    /// with one spare cell at each end.
    pub fn covering_grid(&self, dx: f64) -> Result<RealGrid> {
        if self.masses.is_empty() {
            return Err(Error::invalid("masses", "no point masses"));
        }
        let lo = self.masses.iter().map(|(_, g)| g.b() - g.a()).fold(f64::INFINITY, f64::min);
        let hi = self.masses.iter().map(|(_, g)| g.b() + g.a()).fold(f64::NEG_INFINITY, f64::max);
        RealGrid::span(lo - dx, hi + dx, dx)
    }
}

/// `r` at `y`, zero outside `[-1, 1]`.
fn nucleus_at(r: &Signal, y: f64) -> C64 {
    if y.abs() > 1.0 + 1e-12 {
        ZERO
    } else {
        r.interpolate(y.clamp(-1.0, 1.0))
    }
}

/// `Σ_j λ_j·π_1(g_j) w(g_j)` sampled on `grid`. Every `w(g_j)` must be a
/// nucleus.
pub fn extended_contravariant(
    field: &PointMassField,
    w: impl Fn(GroupElement) -> Signal,
    grid: RealGrid,
) -> Result<Signal> {
    let nuclei: Vec<Signal> = field
        .masses
        .iter()
        .enumerate()
        .map(|(index, &(_, g))| {
            let r = w(g);
            let rep = is_nucleus(&r);
            if rep.is_nucleus() {
                Ok(r)
            } else {
                Err(Error::NucleusViolation {
                    index,
                    reason: rep.reason(),
                })
            }
        })
        .collect::<Result<_>>()?;
    let values = map_range(grid.n(), |k| {
        let x = grid.x(k);
        field
            .masses
            .iter()
            .zip(&nuclei)
            .map(|(&(lambda, g), r)| lambda * nucleus_at(r, (x - g.b()) / g.a()) / g.a())
            .sum()
    });
    Signal::new(grid, values)
}

/// Wavelet analysis followed by Haar-pairing synthesis.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub signal: Signal,
    /// Least-squares `k` in `M_{w₀} W_{v₀} f ≈ k·f`.
    pub k: C64,
    /// `‖M W f - k f‖₂ / ‖f‖₂`.
    pub residual: f64,
    pub v0_admissibility: AdmissibilityReport,
    pub w0_admissibility: AdmissibilityReport,
}

/// Grid the admissibility of kernel vectors is judged on.
fn kernel_samples(k: &Kernel) -> Signal {
    let grid = RealGrid::centered(8000, 0.01).expect("valid grid");
    Signal::from_fn(grid, |x| k.eval(x))
}

/// `M_{w₀} W_{v₀} f` and the constant `k` of `M W = k·I`.
pub fn reconstruct(v0: &Kernel, w0: &Kernel, f: &Signal, axes: &FieldAxes) -> Result<Reconstruction> {
    let u = wavelet_transform(v0, f, axes)?;
    let signal = haar_pairing(w0, RepIndex::TWO, &u)?.resample(*f.grid());
    let ff = f.energy();
    if ff == 0.0 {
        return Err(Error::invalid("f", "zero signal"));
    }
    let k = signal.inner(f)? / ff;
    let residual = signal.sub(&f.scale(k))?.l2() / f.l2();
    Ok(Reconstruction {
        signal,
        k,
        residual,
        v0_admissibility: admissibility(&kernel_samples(v0)),
        w0_admissibility: admissibility(&kernel_samples(w0)),
    })
}
