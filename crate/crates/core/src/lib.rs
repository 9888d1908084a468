//! Covariant and contravariant transforms on the affine group `ax+b`.
//!
//! Signals on the real line are mapped to fields on the upper half-plane by
//! covariant transforms (wavelet, Cauchy, Poisson, averaging) and back by
//! contravariant transforms built on invariant pairings (Haar integration,
//! vanishing-scale limits, suprema). The compositions of the two recover
//! the classical operators: reconstruction, boundary values, the Hilbert
//! transform and maximal functions.

pub mod compositions;
pub mod contravariant;
pub mod covariant;
pub mod error;
pub mod fiducial;
pub mod field;
pub mod generators;
pub mod group;
pub mod io;
pub mod norms;
pub mod representation;
pub mod signal;
pub mod verify;

mod conv;
mod par;

pub use num_complex::Complex64 as C64;

pub use contravariant::{contravariant, Pairing, Vector};
pub use covariant::{covariant, FieldAxes};
pub use error::{Error, Result};
pub use fiducial::{Builtin, Fiducial, Kernel};
pub use field::{HalfPlaneField, LogAxis};
pub use group::{GroupElement, HaarWeights};
pub use representation::RepIndex;
pub use signal::{RealGrid, Signal, SpectralSignal};
