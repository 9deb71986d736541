//! Scalar arithmetic kinds used across the crate.
//!
//! All numeric kernels are generic over [`Real`], which is implemented by
//! `f64` (the `double` precision kind) and by [`ExtFloat`] (the `extended`
//! kind, an unevaluated double-double sum giving a ~106-bit mantissa).
//! Complex scalars are `num_complex::Complex<T>` over either real kind.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::{Num, One};
use serde::{Deserialize, Serialize};

mod ext;

pub use ext::ExtFloat;

/// Complex scalar over a [`Real`] kind.
pub type Cx<T> = Complex<T>;

/// Selectable working precision.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => Err(format!("unknown precision `{other}` (expected double|extended)")),
        }
    }
}

/// Real scalar kind: the operations the numeric kernels actually need.
///
/// Transcendentals are restricted to what root-of-unity tables require:
/// sine/cosine of rational multiples of pi, reduced exactly in integer
/// arithmetic before any floating evaluation.
pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn precision() -> Precision;

    fn from_f64(x: f64) -> Self;

    fn to_f64(self) -> f64;

    fn from_int(k: i64) -> Self;

    fn abs(self) -> Self;

    fn sqrt(self) -> Self;

    fn is_finite(self) -> bool;

    /// `(sin, cos)` of `pi * num / den`, with the angle reduced modulo `2*pi`
    /// in exact integer arithmetic first. `den > 0`.
    fn sin_cos_pi_frac(num: i64, den: i64) -> (Self, Self);

    /// Base unit for scale-aware equality checks at this precision.
    fn base_tolerance() -> f64;
}

impl Real for f64 {
    #[inline]
    fn precision() -> Precision {
        Precision::Double
    }

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn from_int(k: i64) -> Self {
        k as f64
    }

    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }

    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn sin_cos_pi_frac(num: i64, den: i64) -> (Self, Self) {
        assert!(den > 0, "sin_cos_pi_frac: nonpositive denominator");
        let m = num.rem_euclid(2 * den);
        let angle = std::f64::consts::PI * (m as f64) / (den as f64);
        angle.sin_cos()
    }

    #[inline]
    fn base_tolerance() -> f64 {
        1e-9
    }
}

/// Modulus of a complex scalar.
#[inline]
pub fn cx_abs<T: Real>(z: Cx<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Modulus collapsed to `f64`, for deviation bookkeeping.
#[inline]
pub fn cx_abs_f64<T: Real>(z: Cx<T>) -> f64 {
    cx_abs(z).to_f64()
}

/// Integer power of a complex scalar by binary exponentiation
/// (negative exponents invert the result).
pub fn cx_powi<T: Real>(base: Cx<T>, exp: i64) -> Cx<T> {
    let mut e = exp.unsigned_abs();
    let mut acc = Cx::<T>::one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b;
        }
        b = b * b;
        e >>= 1;
    }
    if exp < 0 {
        Cx::<T>::one() / acc
    } else {
        acc
    }
}

/// Downgrade a complex scalar to `Complex<f64>` for reporting.
#[inline]
pub fn cx_to_f64<T: Real>(z: Cx<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// Promote an `f64` pair to a complex scalar of kind `T`.
#[inline]
pub fn cx_from_f64<T: Real>(re: f64, im: f64) -> Cx<T> {
    Cx::new(T::from_f64(re), T::from_f64(im))
}
