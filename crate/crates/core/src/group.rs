//! The `ax+b` group, identified with the upper half-plane `{(a, b) : a > 0}`.
//!
//! Elements compose as affine maps `x ↦ a·x + b`:
//! `(a, b)·(a', b') = (a·a', a·b' + b)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(a, b)` of the affine group, `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    a: f64,
    b: f64,
}

/// Densities of the left (`a⁻² da db`) and right (`a⁻¹ da db`) invariant
/// measures at a group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarWeights {
    pub left: f64,
    pub right: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: 1.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::invalid("a", format!("scale must be positive and finite, got {a}")));
        }
        if !b.is_finite() {
            return Err(Error::invalid("b", format!("translation must be finite, got {b}")));
        }
        Ok(GroupElement { a, b })
    }

    /// Element of the dilation subgroup `A = {(a, 0)}`.
    pub fn dilation(a: f64) -> Result<Self> {
        Self::new(a, 0.0)
    }

    /// Element of the translation subgroup `N = {(1, b)}`.
    pub fn translation(b: f64) -> Result<Self> {
        Self::new(1.0, b)
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * other.a,
            b: self.a * other.b + self.b,
        }
    }

    #[inline]
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: 1.0 / self.a,
            b: -self.b / self.a,
        }
    }

    /// The affine map `x ↦ a·x + b`.
    #[inline]
    pub fn act(&self, x: f64) -> f64 {
        self.a * x + self.b
    }

    pub fn haar_weights(&self) -> HaarWeights {
        HaarWeights {
            left: self.a.powi(-2),
            right: 1.0 / self.a,
        }
    }

    pub fn in_dilations(&self) -> bool {
        self.b == 0.0
    }

    pub fn in_translations(&self) -> bool {
        self.a == 1.0
    }

    /// Componentwise comparison with a caller-chosen tolerance.
    pub fn approx_eq(&self, other: &GroupElement, eps: f64) -> bool {
        (self.a - other.a).abs() <= eps * self.a.abs().max(other.a.abs()).max(1.0)
            && (self.b - other.b).abs() <= eps * self.b.abs().max(other.b.abs()).max(1.0)
    }
}

impl Default for GroupElement {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.compose(&rhs)
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}
