//! Correlation of grid samples against a kernel, and exact integrals of
//! piecewise-linear interpolants.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::signal::{RealGrid, Signal};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Computes `out[m] = Σ_j y_j·K(x_j - t_m)` for samples `y` on `src` and
/// output points `t_m` on `dst`.
///
/// When `dst` is a sub-lattice of `src` (its origin on `src` and its step a
/// whole multiple of `src.dx`) the sum is a discrete correlation evaluated
/// by FFT; the transform of `y` is computed once and reused for every
/// kernel. Otherwise every output is summed directly.
pub(crate) struct Correlator {
    src: RealGrid,
    dst: RealGrid,
    y: Vec<C64>,
    fast: Option<FastPath>,
}

struct FastPath {
    offset: isize,
    stride: usize,
    i_hi: isize,
    nd: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    y_spec: Vec<C64>,
}

/// `Some((offset, stride))` when `dst.x(m) = src.x(offset + stride·m)`.
fn lattice_alignment(src: &RealGrid, dst: &RealGrid) -> Option<(isize, usize)> {
    let ratio = dst.dx() / src.dx();
    let stride = ratio.round();
    if stride < 1.0 || (ratio - stride).abs() > 1e-9 * ratio {
        return None;
    }
    let off = (dst.x0() - src.x0()) / src.dx();
    let offset = off.round();
    if (off - offset).abs() > 1e-6 {
        return None;
    }
    Some((offset as isize, stride as usize))
}

impl Correlator {
    pub(crate) fn new(src: RealGrid, y: Vec<C64>, dst: RealGrid) -> Self {
        debug_assert_eq!(y.len(), src.n());
        let fast = lattice_alignment(&src, &dst).map(|(offset, stride)| {
            let n = src.n();
            let i_lo = offset;
            let i_hi = offset + (stride * (dst.n() - 1)) as isize;
            let m = (i_hi - i_lo + 1) as usize;
            let nd = n + m - 1;
            let len = nd.next_power_of_two();
            let mut planner = FftPlanner::new();
            let fwd = planner.plan_fft_forward(len);
            let inv = planner.plan_fft_inverse(len);
            let mut y_spec = vec![ZERO; len];
            for (k, slot) in y_spec.iter_mut().take(n).enumerate() {
                *slot = y[n - 1 - k];
            }
            fwd.process(&mut y_spec);
            FastPath {
                offset,
                stride,
                i_hi,
                nd,
                fwd,
                inv,
                y_spec,
            }
        });
        Correlator { src, dst, y, fast }
    }

    /// Samples `y_j = w_j·f_j·dx` with composite trapezoid weights.
    pub(crate) fn trapezoid(f: &Signal, dst: RealGrid) -> Self {
        let g = *f.grid();
        let y = f
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| v * g.trapezoid_weight(k) * g.dx())
            .collect();
        Self::new(g, y, dst)
    }

    pub(crate) fn apply(&self, kernel: impl Fn(f64) -> C64 + Sync) -> Vec<C64> {
        match &self.fast {
            Some(fp) => self.apply_fft(fp, kernel),
            None => self.apply_direct(kernel),
        }
    }

    fn apply_fft(&self, fp: &FastPath, kernel: impl Fn(f64) -> C64) -> Vec<C64> {
        let n = self.src.n();
        let dx = self.src.dx();
        let len = fp.y_spec.len();
        let d_min = -fp.i_hi;
        let mut h = vec![ZERO; len];
        for (t, slot) in h.iter_mut().take(fp.nd).enumerate() {
            *slot = kernel((d_min + t as isize) as f64 * dx);
        }
        fp.fwd.process(&mut h);
        for (a, b) in h.iter_mut().zip(&fp.y_spec) {
            *a *= b;
        }
        fp.inv.process(&mut h);
        let scale = 1.0 / len as f64;
        (0..self.dst.n())
            .map(|m| {
                let i = fp.offset + (fp.stride * m) as isize;
                let r = (fp.i_hi - i) as usize;
                h[n - 1 + r] * scale
            })
            .collect()
    }

    fn apply_direct(&self, kernel: impl Fn(f64) -> C64) -> Vec<C64> {
        (0..self.dst.n())
            .map(|m| {
                let t = self.dst.x(m);
                self.y
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| if v == ZERO { ZERO } else { v * kernel(self.src.x(j) - t) })
                    .sum()
            })
            .collect()
    }

    /// `Σ_j y_j·K(x_j - t)` at a single point.
    #[cfg(test)]
    pub(crate) fn at(&self, t: f64, kernel: impl Fn(f64) -> C64) -> C64 {
        self.y
            .iter()
            .enumerate()
            .map(|(j, &v)| if v == ZERO { ZERO } else { v * kernel(self.src.x(j) - t) })
            .sum()
    }
}

/// Running integral of the piecewise-linear interpolant of a signal,
/// extended by zero outside its grid.
pub(crate) struct PrefixIntegral {
    grid: RealGrid,
    values: Vec<C64>,
    prefix: Vec<C64>,
}

impl PrefixIntegral {
    pub(crate) fn new(f: &Signal) -> Self {
        Self::from_values(*f.grid(), f.values().to_vec())
    }

    pub(crate) fn of_modulus(f: &Signal) -> Self {
        Self::from_values(*f.grid(), f.values().iter().map(|v| C64::new(v.norm(), 0.0)).collect())
    }

    fn from_values(grid: RealGrid, values: Vec<C64>) -> Self {
        let half_dx = 0.5 * grid.dx();
        let mut prefix = Vec::with_capacity(values.len());
        let mut acc = ZERO;
        prefix.push(acc);
        for w in values.windows(2) {
            acc += (w[0] + w[1]) * half_dx;
            prefix.push(acc);
        }
        PrefixIntegral {
            grid,
            values,
            prefix,
        }
    }

    /// `∫_{x0}^{x} f`.
    pub(crate) fn to(&self, x: f64) -> C64 {
        let n = self.values.len();
        let t = self.grid.position(x);
        if !(t > 0.0) {
            return ZERO;
        }
        if t >= (n - 1) as f64 {
            return self.prefix[n - 1];
        }
        let k = t.floor() as usize;
        let s = (t - k as f64) * self.grid.dx();
        let (f0, f1) = (self.values[k], self.values[k + 1]);
        self.prefix[k] + f0 * s + (f1 - f0) * (s * s / (2.0 * self.grid.dx()))
    }

    /// `∫_lo^hi f`.
    #[inline]
    pub(crate) fn between(&self, lo: f64, hi: f64) -> C64 {
        self.to(hi) - self.to(lo)
    }

    pub(crate) fn prefix(&self) -> &[C64] {
        &self.prefix
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(g: RealGrid) -> Signal {
        Signal::from_fn(g, |x| C64::new((-x * x).exp(), x.sin() * (-x * x / 3.0).exp()))
    }

    #[test]
    fn fft_path_matches_direct_sum() {
        let src = RealGrid::new(-5.0, 0.05, 201).unwrap();
        let f = gauss(src);
        let kernel = |d: f64| C64::new(1.0, 0.3) / C64::new(d, 0.7);
        for dst in [
            src,
            RealGrid::new(-4.0, 0.1, 81).unwrap(),
            RealGrid::new(-9.0, 0.15, 130).unwrap(),
        ] {
            let fast = Correlator::trapezoid(&f, dst);
            assert!(fast.fast.is_some());
            let out = fast.apply(kernel);
            for (m, v) in out.iter().enumerate() {
                let direct = fast.at(dst.x(m), kernel);
                assert!((v - direct).norm() <= 1e-12 * (1.0 + direct.norm()), "{m}");
            }
        }
        let off = RealGrid::new(-4.01, 0.1, 81).unwrap();
        assert!(Correlator::trapezoid(&f, off).fast.is_none());
    }

    #[test]
    fn prefix_integral_is_exact_for_linear_pieces() {
        let g = RealGrid::new(0.0, 0.5, 5).unwrap();
        let f = Signal::from_real_fn(g, |x| 2.0 * x + 1.0);
        let p = PrefixIntegral::new(&f);
        // ∫ (2x+1) from 0.2 to 1.7 = x²+x.
        let exact = (1.7f64 * 1.7 + 1.7) - (0.2 * 0.2 + 0.2);
        assert!((p.between(0.2, 1.7).re - exact).abs() < 1e-14);
        assert_eq!(p.to(-1.0), ZERO);
        assert!((p.to(10.0).re - 6.0).abs() < 1e-14);
    }
}
