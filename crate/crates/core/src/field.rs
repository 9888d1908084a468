//! Functions on the upper half-plane sampled on a log-spaced scale axis
//! times a uniform translation grid.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::{RealGrid, Signal};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Scales `a_k = a_min·ratio^k`, `0 ≤ k < count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogAxis {
    a_min: f64,
    ratio: f64,
    count: usize,
}

impl LogAxis {
    pub fn new(a_min: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(a_min > 0.0) || !a_min.is_finite() {
            return Err(Error::invalid("a_min", format!("must be positive, got {a_min}")));
        }
        if count == 0 {
            return Err(Error::invalid("count", "need at least one scale"));
        }
        if count > 1 && (!(ratio > 1.0) || !ratio.is_finite()) {
            return Err(Error::invalid("ratio", format!("must exceed 1, got {ratio}")));
        }
        let ratio = if count == 1 { ratio.max(2.0) } else { ratio };
        Ok(LogAxis { a_min, ratio, count })
    }

    /// `count` scales from `a_min` to `a_max` inclusive.
    pub fn from_range(a_min: f64, a_max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Self::new(a_min, 2.0, count);
        }
        if !(a_max > a_min) {
            return Err(Error::invalid("a_max", format!("must exceed a_min = {a_min}, got {a_max}")));
        }
        Self::new(a_min, (a_max / a_min).powf(1.0 / (count - 1) as f64), count)
    }

    /// `a_min·2^{k/per_octave}` up to the first scale `≥ a_max`.
    pub fn octaves(a_min: f64, a_max: f64, per_octave: usize) -> Result<Self> {
        if per_octave == 0 {
            return Err(Error::invalid("per_octave", "must be positive"));
        }
        let ratio = 2f64.powf(1.0 / per_octave as f64);
        let count = ((a_max / a_min).log2() * per_octave as f64 - 1e-9).ceil() as usize + 1;
        Self::new(a_min, ratio, count.max(1))
    }

    #[inline]
    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    #[inline]
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn a(&self, k: usize) -> f64 {
        self.a_min * self.ratio.powi(k as i32)
    }

    pub fn a_max(&self) -> f64 {
        self.a(self.count - 1)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.a(k)).collect()
    }

    /// Step of the axis in `log a`.
    pub fn log_step(&self) -> f64 {
        self.ratio.ln()
    }

    /// Fractional index of the scale `a`.
    pub fn position(&self, a: f64) -> f64 {
        (a / self.a_min).ln() / self.ratio.ln()
    }
}

/// A complex function on `(scale, translation)` pairs. Rows are scales.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneField {
    a_axis: LogAxis,
    b_grid: RealGrid,
    values: Vec<C64>,
    /// Representation index the field was produced with, if any.
    p: Option<f64>,
    warnings: Vec<String>,
}

impl HalfPlaneField {
    pub fn new(a_axis: LogAxis, b_grid: RealGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != a_axis.count * b_grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} field",
                values.len(),
                a_axis.count,
                b_grid.n()
            )));
        }
        Ok(HalfPlaneField {
            a_axis,
            b_grid,
            values,
            p: None,
            warnings: Vec::new(),
        })
    }

    pub fn zeros(a_axis: LogAxis, b_grid: RealGrid) -> Self {
        HalfPlaneField {
            a_axis,
            b_grid,
            values: vec![ZERO; a_axis.count * b_grid.n()],
            p: None,
            warnings: Vec::new(),
        }
    }

    pub fn from_fn(a_axis: LogAxis, b_grid: RealGrid, f: impl Fn(f64, f64) -> C64 + Sync) -> Self {
        let nb = b_grid.n();
        let rows = crate::par::map_range(a_axis.count, |i| {
            let a = a_axis.a(i);
            (0..nb).map(|j| f(a, b_grid.x(j))).collect::<Vec<_>>()
        });
        Self::from_rows(a_axis, b_grid, rows)
    }

    pub(crate) fn from_rows(a_axis: LogAxis, b_grid: RealGrid, rows: Vec<Vec<C64>>) -> Self {
        let values = rows.into_iter().flatten().collect();
        HalfPlaneField {
            a_axis,
            b_grid,
            values,
            p: None,
            warnings: Vec::new(),
        }
    }

    #[inline]
    pub fn a_axis(&self) -> &LogAxis {
        &self.a_axis
    }

    #[inline]
    pub fn b_grid(&self) -> &RealGrid {
        &self.b_grid
    }

    #[inline]
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.b_grid.n() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        let nb = self.b_grid.n();
        self.values[i * nb + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        let nb = self.b_grid.n();
        &self.values[i * nb..(i + 1) * nb]
    }

    /// The slice at scale index `i` as a signal on the translation grid.
    pub fn row_signal(&self, i: usize) -> Signal {
        Signal::new(self.b_grid, self.row(i).to_vec()).expect("row length")
    }

    pub fn map(&self, f: impl Fn(f64, f64, C64) -> C64) -> HalfPlaneField {
        let nb = self.b_grid.n();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| f(self.a_axis.a(k / nb), self.b_grid.x(k % nb), v))
            .collect();
        HalfPlaneField {
            values,
            ..self.clone()
        }
    }

    pub fn scale(&self, t: C64) -> HalfPlaneField {
        self.map(|_, _, v| v * t)
    }

    fn check_same_axes(&self, other: &HalfPlaneField) -> Result<()> {
        let (x, y) = (&self.a_axis, &other.a_axis);
        let same_a = x.count == y.count
            && (x.a_min - y.a_min).abs() <= 1e-12 * x.a_min
            && (x.ratio - y.ratio).abs() <= 1e-12 * x.ratio;
        if !same_a || !self.b_grid.same_as(&other.b_grid) {
            return Err(Error::GridMismatch("fields live on different axes".into()));
        }
        Ok(())
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: C64, other: &HalfPlaneField, beta: C64) -> Result<HalfPlaneField> {
        self.check_same_axes(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| alpha * u + beta * v)
            .collect();
        let mut warnings = self.warnings.clone();
        warnings.extend(other.warnings.iter().cloned());
        Ok(HalfPlaneField {
            a_axis: self.a_axis,
            b_grid: self.b_grid,
            values,
            p: if self.p == other.p { self.p } else { None },
            warnings,
        })
    }

    /// Bilinear interpolation in `(log a, b)`, zero outside the sampled
    /// rectangle.
    pub fn interpolate(&self, a: f64, b: f64) -> C64 {
        if !(a > 0.0) {
            return ZERO;
        }
        let na = self.a_axis.count;
        let nb = self.b_grid.n();
        let ta = if na == 1 {
            if (a / self.a_axis.a_min - 1.0).abs() <= 1e-9 {
                0.0
            } else {
                return ZERO;
            }
        } else {
            self.a_axis.position(a)
        };
        let tb = self.b_grid.position(b);
        let eps = 1e-9;
        if !(ta >= -eps && ta <= (na - 1) as f64 + eps && tb >= -eps && tb <= (nb - 1) as f64 + eps) {
            return ZERO;
        }
        let (ia, sa) = split(ta, na);
        let (ib, sb) = split(tb, nb);
        let v = |i: usize, j: usize| self.values[i * nb + j];
        let lo = if sb == 0.0 { v(ia, ib) } else { v(ia, ib) * (1.0 - sb) + v(ia, ib + 1) * sb };
        if sa == 0.0 {
            return lo;
        }
        let hi = if sb == 0.0 {
            v(ia + 1, ib)
        } else {
            v(ia + 1, ib) * (1.0 - sb) + v(ia + 1, ib + 1) * sb
        };
        lo * (1.0 - sa) + hi * sa
    }

    /// Largest modulus over the whole field.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Cell index and offset in `[0, 1)`; the last point maps to the previous
/// cell with offset 1 so both neighbours exist.
fn split(t: f64, n: usize) -> (usize, f64) {
    if n == 1 {
        return (0, 0.0);
    }
    let t = t.clamp(0.0, (n - 1) as f64);
    let k = (t.floor() as usize).min(n - 2);
    let s = t - k as f64;
    // Snap offsets within rounding of a node.
    if s < 1e-12 {
        (k, 0.0)
    } else if s > 1.0 - 1e-12 {
        if k + 1 == n - 1 {
            (k, 1.0)
        } else {
            (k + 1, 0.0)
        }
    } else {
        (k, s)
    }
}

/// Index ranges of the interior of a field: `margin` cells are dropped at
/// every edge of both axes.
pub fn interior(field: &HalfPlaneField, margin: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let na = field.a_axis.count;
    let nb = field.b_grid.n();
    let ra = if na > 2 * margin { margin..na - margin } else { 0..0 };
    let rb = if nb > 2 * margin { margin..nb - margin } else { 0..0 };
    (ra, rb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_construction() {
        let ax = LogAxis::from_range(1.0 / 64.0, 64.0, 64).unwrap();
        assert!((ax.a_max() - 64.0).abs() < 1e-10);
        let oct = LogAxis::octaves(0.0625, 64.0, 8).unwrap();
        assert_eq!(oct.count(), 81);
        assert!((oct.a(8) - 0.125).abs() < 1e-15);
        assert!(LogAxis::new(0.0, 2.0, 3).is_err());
        assert!(LogAxis::new(1.0, 0.5, 3).is_err());
    }

    #[test]
    fn bilinear_reproduces_bilinear_functions() {
        let ax = LogAxis::new(0.5, 2f64.powf(0.25), 12).unwrap();
        let bg = RealGrid::new(-2.0, 0.1, 41).unwrap();
        let f = |a: f64, b: f64| C64::new(3.0 * a.ln() - b + 0.5 * a.ln() * b, b);
        let u = HalfPlaneField::from_fn(ax, bg, f);
        for &(a, b) in &[(0.7, 0.33), (1.9, -1.77), (0.5, 2.0), (ax.a_max(), -2.0)] {
            assert!((u.interpolate(a, b) - f(a, b)).norm() < 1e-12);
        }
        assert_eq!(u.interpolate(0.4, 0.0), ZERO);
        assert_eq!(u.interpolate(1.0, 2.2), ZERO);
    }
}
