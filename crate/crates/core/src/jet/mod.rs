//! Truncated power-series (jet) arithmetic in one and two variables.
//!
//! Everything downstream computes in this ring: a `Jet1` is a univariate
//! series along the singular curve, a `Jet2` a bivariate series in `(u, v)`
//! with rectangular truncation and a separately tracked certified total
//! degree. Coefficients not stored are exactly zero; coefficients beyond the
//! certified degree are garbage produced by truncation and must not be
//! trusted.

mod jet1;
mod jet2;
mod linalg;

pub use jet1::Jet1;
pub use jet2::Jet2;
pub use linalg::{det3, JetMat3, JetVec3};

use std::fmt::Debug;

use num_traits::{Float, NumCast};

/// Default tolerance deciding whether a constant term counts as a unit.
pub const UNIT_TOL: f64 = 1e-9;

/// Relative tolerance for exact-divisibility checks (scaled by the largest
/// coefficient magnitude of the dividend).
pub const DIVISIBILITY_TOL: f64 = 1e-9;

/// Minimal numeric contract for jet coefficients.
///
/// `Float` supplies field arithmetic, square roots, comparison and absolute
/// value; the default instantiation is `f64`, but any extended-precision
/// float satisfying the bound works unchanged.
pub trait Scalar: Float + Debug + Send + Sync + 'static {
    /// Injects an `f64` literal (tolerances, small integer factors).
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("scalar convertible to f64")
    }
}

impl<T: Float + Debug + Send + Sync + 'static> Scalar for T {}
