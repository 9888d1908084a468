//! Fiducial operators: the functionals a covariant transform evaluates on
//! transformed copies of a signal.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::conv::PrefixIntegral;
use crate::error::{Error, Result};
use crate::signal::{fourier, Signal};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Kernels with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `1/(πi(i - x))`
    CauchyPlus,
    /// `1/(πi(i + x))`
    CauchyMinus,
    /// `(1/π)/(1 + x²)`
    Poisson,
    /// `-(1/π)·x/(1 + x²)`
    ConjPoisson,
    /// `e^{-x²}`
    Gaussian,
    /// `(1 - x²)e^{-x²/2}`
    MexicanHat,
}

impl Builtin {
    #[inline]
    pub fn eval(&self, x: f64) -> C64 {
        match self {
            Builtin::CauchyPlus => C64::new(1.0, 0.0) / (I * PI * C64::new(-x, 1.0)),
            Builtin::CauchyMinus => C64::new(1.0, 0.0) / (I * PI * C64::new(x, 1.0)),
            Builtin::Poisson => C64::new(1.0 / (PI * (1.0 + x * x)), 0.0),
            Builtin::ConjPoisson => C64::new(-x / (PI * (1.0 + x * x)), 0.0),
            Builtin::Gaussian => C64::new((-x * x).exp(), 0.0),
            Builtin::MexicanHat => C64::new((1.0 - x * x) * (-0.5 * x * x).exp(), 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::CauchyPlus => "cauchy_plus",
            Builtin::CauchyMinus => "cauchy_minus",
            Builtin::Poisson => "poisson",
            Builtin::ConjPoisson => "conj_poisson",
            Builtin::Gaussian => "gaussian",
            Builtin::MexicanHat => "mexican_hat",
        }
    }
}

/// The kernel `k` of a linear functional `F(f) = ∫ f(x)·k(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Builtin(Builtin),
    /// Linear interpolation of samples, zero outside their grid.
    Sampled(Signal),
    /// Piecewise constant: `values[i]` on `(edges[i], edges[i+1])`, zero
    /// outside `[edges[0], edges[last]]`.
    Steps { edges: Vec<f64>, values: Vec<C64> },
    /// `x ↦ scale·inner((x - b)/a)`.
    Affine {
        inner: Box<Kernel>,
        a: f64,
        b: f64,
        scale: C64,
    },
    Conj(Box<Kernel>),
}

impl Kernel {
    /// `½χ[-1,1]`.
    pub fn box_average() -> Kernel {
        Kernel::Steps {
            edges: vec![-1.0, 1.0],
            values: vec![C64::new(0.5, 0.0)],
        }
    }

    pub fn steps(edges: Vec<f64>, values: Vec<C64>) -> Result<Kernel> {
        if edges.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::invalid("edges", "need one more edge than step values"));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("edges", "edges must increase strictly"));
        }
        Ok(Kernel::Steps { edges, values })
    }

    pub fn affine(self, a: f64, b: f64, scale: C64) -> Kernel {
        Kernel::Affine {
            inner: Box::new(self),
            a,
            b,
            scale,
        }
    }

    pub fn conj(self) -> Kernel {
        match self {
            Kernel::Conj(k) => *k,
            k => Kernel::Conj(Box::new(k)),
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        match self {
            Kernel::Builtin(b) => b.eval(x),
            Kernel::Sampled(s) => s.interpolate(x),
            Kernel::Steps { edges, values } => {
                if x < edges[0] || x > edges[edges.len() - 1] {
                    return ZERO;
                }
                let i = edges.partition_point(|&e| e <= x).saturating_sub(1);
                values[i.min(values.len() - 1)]
            }
            Kernel::Affine { inner, a, b, scale } => inner.eval((x - b) / a) * scale,
            Kernel::Conj(k) => k.eval(x).conj(),
        }
    }

    /// `(lo, hi, value)` pieces when the kernel is piecewise constant.
    pub fn pieces(&self) -> Option<Vec<(f64, f64, C64)>> {
        match self {
            Kernel::Steps { edges, values } => Some(
                edges
                    .windows(2)
                    .zip(values)
                    .map(|(w, &v)| (w[0], w[1], v))
                    .collect(),
            ),
            Kernel::Affine { inner, a, b, scale } => inner.pieces().map(|ps| {
                ps.into_iter()
                    .map(|(lo, hi, v)| (a * lo + b, a * hi + b, v * scale))
                    .collect()
            }),
            Kernel::Conj(k) => k
                .pieces()
                .map(|ps| ps.into_iter().map(|(lo, hi, v)| (lo, hi, v.conj())).collect()),
            _ => None,
        }
    }

    /// Bounded support, when there is one.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Kernel::Builtin(_) => None,
            Kernel::Sampled(s) => Some((s.grid().x0(), s.grid().x_end())),
            Kernel::Steps { edges, .. } => Some((edges[0], edges[edges.len() - 1])),
            Kernel::Affine { inner, a, b, .. } => inner.support().map(|(lo, hi)| (a * lo + b, a * hi + b)),
            Kernel::Conj(k) => k.support(),
        }
    }

    /// `∫ f·k`: exact over the piecewise-linear interpolant of `f` for
    /// piecewise-constant kernels, trapezoid otherwise.
    pub fn pair(&self, f: &Signal) -> C64 {
        if let Some(ps) = self.pieces() {
            let pre = PrefixIntegral::new(f);
            return ps.iter().map(|&(lo, hi, v)| pre.between(lo, hi) * v).sum();
        }
        let g = f.grid();
        f.values()
            .iter()
            .enumerate()
            .map(|(k, &v)| v * self.eval(g.x(k)) * g.trapezoid_weight(k))
            .sum::<C64>()
            * g.dx()
    }
}

/// A fiducial operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Fiducial {
    /// `F(f) = ∫ f·k`.
    Kernel { kernel: Kernel, label: String },
    /// `F(f) = f(0)`.
    PointEvaluation,
    /// `F(f) = ½∫_{-1}^{1} |f|`, positively homogeneous but not linear.
    ModulusAverage,
}

/// Names accepted by [`Fiducial::builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "cauchy_plus",
    "cauchy_minus",
    "poisson",
    "conj_poisson",
    "gaussian",
    "mexican_hat",
    "box_average",
    "modulus_average",
    "delta",
];

impl Fiducial {
    pub fn builtin(name: &str) -> Result<Fiducial> {
        let k = |b: Builtin| Fiducial::Kernel {
            kernel: Kernel::Builtin(b),
            label: b.name().to_string(),
        };
        Ok(match name {
            "cauchy_plus" => k(Builtin::CauchyPlus),
            "cauchy_minus" => k(Builtin::CauchyMinus),
            "poisson" => k(Builtin::Poisson),
            "conj_poisson" => k(Builtin::ConjPoisson),
            "gaussian" => k(Builtin::Gaussian),
            "mexican_hat" => k(Builtin::MexicanHat),
            "box_average" => Fiducial::Kernel {
                kernel: Kernel::box_average(),
                label: "box_average".into(),
            },
            "modulus_average" => Fiducial::ModulusAverage,
            "delta" => Fiducial::PointEvaluation,
            other => return Err(Error::UnknownFiducial(other.to_string())),
        })
    }

    pub fn kernel(kernel: Kernel, label: impl Into<String>) -> Fiducial {
        Fiducial::Kernel {
            kernel,
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Fiducial::Kernel { label, .. } => label,
            Fiducial::PointEvaluation => "delta",
            Fiducial::ModulusAverage => "modulus_average",
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, Fiducial::ModulusAverage)
    }

    pub fn evaluate(&self, f: &Signal) -> C64 {
        match self {
            Fiducial::Kernel { kernel, .. } => kernel.pair(f),
            Fiducial::PointEvaluation => f.interpolate(0.0),
            Fiducial::ModulusAverage => PrefixIntegral::of_modulus(f).between(-1.0, 1.0) * 0.5,
        }
    }
}

/// Outcome of the admissibility test `∫_0^∞ |v̂(λ)|²/λ dλ < ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    /// The integral, `None` when the low-frequency partial sums diverge.
    pub integral: Option<f64>,
    /// `∫_{λ_min}^{Λ}` for `λ_min = 2^{-4}·Δλ, …, 2^{-12}·Δλ`.
    pub partial_sums: Vec<f64>,
    /// `∫ v dx`.
    pub zero_mean: C64,
    pub admissible: bool,
}

/// Octaves below the lattice spacing at which the partial integrals are
/// reported.
const REFINEMENTS: std::ops::RangeInclusive<i32> = 4..=12;
const SAMPLES_PER_OCTAVE: usize = 16;

/// Evaluates the admissibility integral over the positive spectral bins and
/// a refined low-frequency region.
///
/// Above the lattice spacing `Δλ` the integral is a midpoint sum over the
/// bins. Below it, `v̂` is evaluated directly on a logarithmic grid and the
/// integral `∫ |v̂|² d(log λ)` is accumulated octave by octave. The
/// integral is declared divergent when, over the last three refinements,
/// each octave contributes more than `1/1.05` of the previous one and the
/// contributions are not negligible.
pub fn admissibility(v0: &Signal) -> AdmissibilityReport {
    let spec = fourier(v0);
    let dl = spec.grid().dx();
    let first = spec.first_positive();
    // Bins m ≥ 1 cover [m·Δλ, (m+1)·Δλ]; the first positive bin is replaced
    // by the refined region.
    let upper: f64 = spec.values()[first + 1..]
        .iter()
        .enumerate()
        .map(|(m, v)| v.norm_sqr() / ((m as f64 + 1.5) * dl))
        .sum::<f64>()
        * dl;

    let g = v0.grid();
    let dtft = |lam: f64| -> f64 {
        let s: C64 = v0
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| v * C64::from_polar(1.0, -2.0 * PI * lam * g.x(k)))
            .sum();
        (s * g.dx()).norm_sqr()
    };
    // Contribution of the octave [2^{-(o+1)}Δλ, 2^{-o}Δλ], trapezoid in log λ.
    let h = std::f64::consts::LN_2 / SAMPLES_PER_OCTAVE as f64;
    let octave = |o: i32| -> f64 {
        let top = dl * 2f64.powi(-o);
        (0..=SAMPLES_PER_OCTAVE)
            .map(|j| {
                let w = if j == 0 || j == SAMPLES_PER_OCTAVE { 0.5 } else { 1.0 };
                w * dtft(top * (-(j as f64) * h).exp())
            })
            .sum::<f64>()
            * h
    };
    let octaves: Vec<f64> = crate::par::map_range(*REFINEMENTS.end() as usize, |o| octave(o as i32));
    let mut partial_sums = Vec::new();
    let mut acc = upper;
    for (o, c) in octaves.iter().enumerate() {
        acc += c;
        if REFINEMENTS.contains(&(o as i32 + 1)) {
            partial_sums.push(acc);
        }
    }
    let total = *partial_sums.last().expect("nonempty");
    let inc: Vec<f64> = partial_sums.windows(2).map(|w| w[1] - w[0]).collect();
    let tail = &inc[inc.len() - 4..];
    let growing = tail.windows(2).all(|w| w[1] > w[0] / 1.05);
    let significant = tail[tail.len() - 1] > 1e-9 * total.abs().max(f64::MIN_POSITIVE);
    let divergent = growing && significant;
    AdmissibilityReport {
        integral: if divergent { None } else { Some(total) },
        partial_sums,
        zero_mean: v0.integral(),
        admissible: !divergent,
    }
}
