//! Sampled functions on a uniform grid of the real line and their Fourier
//! transforms, `f̂(λ) = ∫ e^{-2πiλx} f(x) dx`.
//!
//! The discrete transform samples `f̂` on the half-shifted lattice
//! `λ_m = (m + ½)/(n·dx)`, which has no bin at `λ = 0`. Every bin is then
//! strictly positive or strictly negative, so the Hardy splitting is an
//! exact orthogonal decomposition, and for an even sample count the lattice
//! is symmetric about zero.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The points `x0 + k·dx`, `0 ≤ k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    x0: f64,
    dx: f64,
    n: usize,
}

impl RealGrid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::invalid("dx", format!("step must be positive, got {dx}")));
        }
        if !x0.is_finite() {
            return Err(Error::invalid("x0", "left endpoint must be finite"));
        }
        if n < 2 {
            return Err(Error::invalid("n", format!("need at least 2 samples, got {n}")));
        }
        Ok(RealGrid { x0, dx, n })
    }

    /// `n` points symmetric about zero: `x0 = -(n-1)·dx/2`.
    pub fn centered(n: usize, dx: f64) -> Result<Self> {
        Self::new(-((n - 1) as f64) * dx / 2.0, dx, n)
    }

    /// Points from `lo` to `hi` inclusive with step `dx` (`hi - lo` is
    /// rounded to a whole number of steps).
    pub fn span(lo: f64, hi: f64, dx: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::invalid("hi", format!("empty range [{lo}, {hi}]")));
        }
        let n = ((hi - lo) / dx).round() as usize + 1;
        Self::new(lo, dx, n)
    }

    #[inline]
    pub fn x0(&self) -> f64 {
        self.x0
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.dx
    }

    #[inline]
    pub fn x_end(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.x(k))
    }

    /// Fractional index of `x`.
    #[inline]
    pub fn position(&self, x: f64) -> f64 {
        (x - self.x0) / self.dx
    }

    pub fn is_symmetric(&self) -> bool {
        let expected = -((self.n - 1) as f64) * self.dx / 2.0;
        (self.x0 - expected).abs() <= 1e-9 * self.dx
    }

    pub fn contains(&self, x: f64) -> bool {
        let t = self.position(x);
        t >= -1e-9 && t <= (self.n - 1) as f64 + 1e-9
    }

    /// Composite trapezoid weight of sample `k` (without the factor `dx`).
    #[inline]
    pub fn trapezoid_weight(&self, k: usize) -> f64 {
        if k == 0 || k + 1 == self.n {
            0.5
        } else {
            1.0
        }
    }

    /// Same spacing and origin up to rounding.
    pub fn same_as(&self, other: &RealGrid) -> bool {
        self.n == other.n
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
            && (self.x0 - other.x0).abs() <= 1e-9 * self.dx
    }
}

/// A complex-valued function sampled on a [`RealGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: RealGrid,
    values: Vec<C64>,
}

impl Signal {
    pub fn new(grid: RealGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n
            )));
        }
        Ok(Signal { grid, values })
    }

    pub fn from_fn(grid: RealGrid, f: impl Fn(f64) -> C64) -> Self {
        let values = grid.points().map(f).collect();
        Signal { grid, values }
    }

    pub fn from_real_fn(grid: RealGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    pub fn zeros(grid: RealGrid) -> Self {
        Signal {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.n],
        }
    }

    #[inline]
    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Signal {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(self.grid.x(k), v))
            .collect();
        Signal {
            grid: self.grid,
            values,
        }
    }

    pub fn scale(&self, t: C64) -> Signal {
        self.map(|_, v| v * t)
    }

    pub fn conj(&self) -> Signal {
        self.map(|_, v| v.conj())
    }

    pub fn abs(&self) -> Signal {
        self.map(|_, v| C64::new(v.norm(), 0.0))
    }

    fn zip(&self, other: &Signal, f: impl Fn(C64, C64) -> C64) -> Result<Signal> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("signals live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| f(u, v))
            .collect();
        Ok(Signal {
            grid: self.grid,
            values,
        })
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.zip(other, |u, v| u + v)
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.zip(other, |u, v| u - v)
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: C64, other: &Signal, beta: C64) -> Result<Signal> {
        self.zip(other, |u, v| alpha * u + beta * v)
    }

    /// Trapezoid quadrature of `f`.
    pub fn integral(&self) -> C64 {
        let g = &self.grid;
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| v * g.trapezoid_weight(k))
            .sum::<C64>()
            * g.dx
    }

    /// Trapezoid `L^p` norm; `p = ∞` gives the maximum modulus.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_infinite() && p > 0.0 {
            return Ok(self.sup_norm());
        }
        if !(p >= 1.0) {
            return Err(Error::invalid("p", format!("need p >= 1, got {p}")));
        }
        let g = &self.grid;
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v.norm().powf(p) * g.trapezoid_weight(k))
            .sum::<f64>()
            * g.dx;
        Ok(s.powf(1.0 / p))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete energy `dx·Σ|f_k|²`, the quantity preserved exactly by
    /// [`fourier`].
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    /// `sqrt(energy)`.
    pub fn l2(&self) -> f64 {
        self.energy().sqrt()
    }

    /// Discrete inner product `dx·Σ f_k·conj(g_k)`.
    pub fn inner(&self, other: &Signal) -> Result<C64> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("signals live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| u * v.conj())
            .sum::<C64>()
            * self.grid.dx)
    }

    /// Linear interpolation, zero outside `[x0, x_end]`.
    pub fn interpolate(&self, x: f64) -> C64 {
        let n = self.grid.n;
        let t = self.grid.position(x);
        if !(t >= -1e-9 && t <= (n - 1) as f64 + 1e-9) {
            return C64::new(0.0, 0.0);
        }
        let t = t.clamp(0.0, (n - 1) as f64);
        let k = (t.floor() as usize).min(n - 2);
        let s = t - k as f64;
        if s < 1e-12 {
            return self.values[k];
        }
        if s > 1.0 - 1e-12 {
            return self.values[k + 1];
        }
        self.values[k] * (1.0 - s) + self.values[k + 1] * s
    }

    /// `f(x) ↦ f(-x)` by reversing a grid symmetric about the origin.
    pub fn reflect(&self) -> Result<Signal> {
        if !self.grid.is_symmetric() {
            return Err(Error::invalid(
                "f",
                "reflection needs a grid symmetric about 0 (x0 = -(n-1)·dx/2)",
            ));
        }
        let mut values = self.values.clone();
        values.reverse();
        Ok(Signal {
            grid: self.grid,
            values,
        })
    }

    /// Values on another grid by linear interpolation.
    pub fn resample(&self, grid: RealGrid) -> Signal {
        Signal::from_fn(grid, |x| self.interpolate(x))
    }
}

/// Samples of `f̂` on the half-shifted lattice `λ_m = (m + ½)·dλ`.
///
/// `grid` is the ascending frequency axis; `origin` is the spatial left
/// endpoint of the transformed signal, needed to undo the phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSignal {
    grid: RealGrid,
    origin: f64,
    values: Vec<C64>,
}

impl SpectralSignal {
    pub fn new(grid: RealGrid, origin: f64, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} values for a frequency axis of {} points",
                values.len(),
                grid.n
            )));
        }
        let half = (grid.n + 1) / 2;
        let m_min = half as f64 - grid.n as f64;
        if ((grid.x0 / grid.dx) - (m_min + 0.5)).abs() > 1e-6 {
            return Err(Error::invalid(
                "lambda",
                "frequency axis is not the half-shifted lattice of a signal grid",
            ));
        }
        Ok(SpectralSignal {
            grid,
            origin,
            values,
        })
    }

    /// The lattice matching a spatial grid.
    pub fn lattice(spatial: &RealGrid) -> RealGrid {
        let n = spatial.n;
        let dl = 1.0 / (n as f64 * spatial.dx);
        let m_min = ((n + 1) / 2) as f64 - n as f64;
        RealGrid {
            x0: (m_min + 0.5) * dl,
            dx: dl,
            n,
        }
    }

    #[inline]
    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    #[inline]
    pub fn origin(&self) -> f64 {
        self.origin
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn lambda(&self, idx: usize) -> f64 {
        self.grid.x(idx)
    }

    /// Index of the first bin with `λ > 0`.
    pub fn first_positive(&self) -> usize {
        self.grid.n - (self.grid.n + 1) / 2
    }

    /// `dλ·Σ|F_m|²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    /// Energy carried by bins with `λ < 0`.
    pub fn negative_energy(&self) -> f64 {
        let k = self.first_positive();
        self.values[..k].iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    /// Energy carried by bins with `λ > 0`.
    pub fn positive_energy(&self) -> f64 {
        let k = self.first_positive();
        self.values[k..].iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> SpectralSignal {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(self.grid.x(k), v))
            .collect();
        SpectralSignal {
            grid: self.grid,
            origin: self.origin,
            values,
        }
    }

    /// The spatial grid this spectrum inverts onto.
    pub fn spatial_grid(&self) -> RealGrid {
        RealGrid {
            x0: self.origin,
            dx: 1.0 / (self.grid.n as f64 * self.grid.dx),
            n: self.grid.n,
        }
    }

    /// Four-point Lagrange interpolation in `λ` that never mixes bins of
    /// opposite sign, so spectral support on a half-line is preserved.
    /// Zero beyond the outermost bins.
    pub fn interpolate(&self, lambda: f64) -> C64 {
        let zero = C64::new(0.0, 0.0);
        if lambda == 0.0 || !lambda.is_finite() {
            return zero;
        }
        let n = self.grid.n;
        let first_pos = self.first_positive();
        // Half-line index range [lo, hi) and signed position within it.
        let (lo, hi) = if lambda > 0.0 {
            (first_pos, n)
        } else {
            (0, first_pos)
        };
        if hi - lo < 1 {
            return zero;
        }
        let t = self.grid.position(lambda);
        if t > (n - 1) as f64 + 1e-9 || t < -1e-9 {
            return zero;
        }
        let len = hi - lo;
        if len < 4 {
            let k = (t.round().max(lo as f64) as usize).min(hi - 1);
            return self.values[k];
        }
        let near = t.round();
        if (t - near).abs() < 1e-12 && near >= lo as f64 && near < hi as f64 {
            return self.values[near as usize];
        }
        let base = (t.floor() as isize - 1).clamp(lo as isize, (hi - 4) as isize) as usize;
        let s = t - base as f64;
        let w = lagrange4(s);
        (0..4).map(|j| self.values[base + j] * w[j]).sum()
    }
}

/// Weights of the cubic through nodes 0, 1, 2, 3 evaluated at `s`.
#[inline]
fn lagrange4(s: f64) -> [f64; 4] {
    let (a, b, c, d) = (s, s - 1.0, s - 2.0, s - 3.0);
    [
        -b * c * d / 6.0,
        a * c * d / 2.0,
        -a * b * d / 2.0,
        a * b * c / 6.0,
    ]
}

fn fft_in_place(buf: &mut [C64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(buf);
}

/// Discrete approximation of `f̂(λ) = ∫ e^{-2πiλx} f(x) dx` on the
/// half-shifted lattice. Preserves the discrete energy exactly.
pub fn fourier(f: &Signal) -> SpectralSignal {
    let g = f.grid;
    let n = g.n;
    let lattice = SpectralSignal::lattice(&g);
    let mut buf: Vec<C64> = f
        .values
        .iter()
        .enumerate()
        .map(|(j, &v)| v * C64::from_polar(1.0, -PI * j as f64 / n as f64))
        .collect();
    fft_in_place(&mut buf, false);
    let half = (n + 1) / 2;
    let m_min = half as isize - n as isize;
    let values = (0..n)
        .map(|idx| {
            let m = idx as isize + m_min;
            let k = m.rem_euclid(n as isize) as usize;
            let lam = lattice.x(idx);
            buf[k] * C64::from_polar(g.dx, -2.0 * PI * lam * g.x0)
        })
        .collect();
    SpectralSignal {
        grid: lattice,
        origin: g.x0,
        values,
    }
}

/// Two-sided inverse of [`fourier`].
pub fn inverse_fourier(spec: &SpectralSignal) -> Signal {
    let grid = spec.spatial_grid();
    let n = grid.n;
    let dl = spec.grid.dx;
    let half = (n + 1) / 2;
    let m_min = half as isize - n as isize;
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for (idx, &v) in spec.values.iter().enumerate() {
        let m = idx as isize + m_min;
        let k = m.rem_euclid(n as isize) as usize;
        let lam = spec.grid.x(idx);
        buf[k] = v * C64::from_polar(1.0, 2.0 * PI * lam * spec.origin);
    }
    fft_in_place(&mut buf, true);
    let values = buf
        .into_iter()
        .enumerate()
        .map(|(j, v)| v * C64::from_polar(dl, PI * j as f64 / n as f64))
        .collect();
    Signal { grid, values }
}

/// `(f_H, f_H⊥)`: the parts of `f` with spectrum on `λ > 0` and `λ < 0`.
/// `f_H⊥` is formed as `f - f_H`.
pub fn hardy_split(f: &Signal) -> (Signal, Signal) {
    let spec = fourier(f);
    let k = spec.first_positive();
    let pos = spec.map(|lam, v| if lam > 0.0 { v } else { C64::new(0.0, 0.0) });
    debug_assert!(pos.values[..k].iter().all(|v| v.norm() == 0.0));
    let mut f_h = inverse_fourier(&pos);
    f_h.grid = f.grid;
    let f_perp = f.sub(&f_h).expect("same grid");
    (f_h, f_perp)
}
