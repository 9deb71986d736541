//! Double-double ("extended") real scalar.
//!
//! An [`ExtFloat`] is an unevaluated sum `hi + lo` of two `f64` values with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 mantissa bits. The algorithms are
//! the classical error-free transformations (two_sum, two_prod via FMA) used
//! by the QD library family. Only the operations the crate needs are
//! provided; in particular the sole transcendental entry point is sine and
//! cosine of exact rational multiples of pi, which is all that root-of-unity
//! tables require.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{Num, One, Zero};

use super::{Precision, Real};

/// pi split into two doubles; `PI_HI + PI_LO` is accurate to ~3e-33.
const PI_HI: f64 = 3.141592653589793;
const PI_LO: f64 = 1.2246467991473532e-16;

#[derive(Copy, Clone, Debug, PartialEq, PartialOrd)]
pub struct ExtFloat {
    hi: f64,
    lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { hi: 0.0, lo: 0.0 };
    pub const ONE: ExtFloat = ExtFloat { hi: 1.0, lo: 0.0 };
    pub const PI: ExtFloat = ExtFloat { hi: PI_HI, lo: PI_LO };

    /// Builds from an unnormalized pair.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        ExtFloat { hi: h, lo: l }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let (h, l) = quick_two_sum(s1, s2 + self.lo);
        ExtFloat { hi: h, lo: l }
    }

    #[inline]
    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p1, f64::mul_add(self.lo, b, p2));
        ExtFloat { hi: h, lo: l }
    }

    fn trunc(self) -> Self {
        let t = self.hi.trunc();
        if t != self.hi {
            return ExtFloat { hi: t, lo: 0.0 };
        }
        // hi is integral: truncate lo, stepping across zero when the low
        // word carries the fractional part in the opposite direction.
        let lt = self.lo.trunc();
        if lt == self.lo {
            return self;
        }
        if self.hi > 0.0 && self.lo < 0.0 && lt == 0.0 {
            ExtFloat { hi: self.hi - 1.0, lo: 0.0 }
        } else if self.hi < 0.0 && self.lo > 0.0 && lt == 0.0 {
            ExtFloat { hi: self.hi + 1.0, lo: 0.0 }
        } else {
            ExtFloat::new(self.hi, lt)
        }
    }

    /// Taylor sine and cosine on `[0, pi/2)`; construction-time only.
    fn sin_cos_taylor(x: ExtFloat) -> (ExtFloat, ExtFloat) {
        let x2 = x * x;
        let mut sin = x;
        let mut term = x;
        let mut k = 1.0f64;
        loop {
            // term_{k+2} = -term_k * x^2 / ((k+1)(k+2))
            term = -(term * x2) / ExtFloat::from_f64((k + 1.0) * (k + 2.0));
            sin = sin + term;
            k += 2.0;
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        let mut cos = ExtFloat::ONE;
        let mut term = ExtFloat::ONE;
        let mut k = 0.0f64;
        loop {
            term = -(term * x2) / ExtFloat::from_f64((k + 1.0) * (k + 2.0));
            cos = cos + term;
            k += 2.0;
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        (sin, cos)
    }
}

impl Add for ExtFloat {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2 + t2);
        ExtFloat { hi: h, lo: l }
    }
}

impl Sub for ExtFloat {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ExtFloat {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (h, l) = quick_two_sum(p1, p2);
        ExtFloat { hi: h, lo: l }
    }
}

impl Div for ExtFloat {
    type Output = Self;

    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        ExtFloat { hi: s, lo: e }.add_f64(q3)
    }
}

impl Rem for ExtFloat {
    type Output = Self;

    fn rem(self, rhs: Self) -> Self {
        self - (self / rhs).trunc() * rhs
    }
}

impl Neg for ExtFloat {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        ExtFloat { hi: -self.hi, lo: -self.lo }
    }
}

impl Zero for ExtFloat {
    #[inline]
    fn zero() -> Self {
        Self::ZERO
    }

    #[inline]
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for ExtFloat {
    #[inline]
    fn one() -> Self {
        Self::ONE
    }
}

impl Num for ExtFloat {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;

    fn from_str_radix(str: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        <f64 as Num>::from_str_radix(str, radix).map(ExtFloat::from_f64)
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.hi + self.lo)
    }
}

impl From<f64> for ExtFloat {
    #[inline]
    fn from(x: f64) -> Self {
        ExtFloat { hi: x, lo: 0.0 }
    }
}

impl Real for ExtFloat {
    #[inline]
    fn precision() -> Precision {
        Precision::Extended
    }

    #[inline]
    fn from_f64(x: f64) -> Self {
        ExtFloat { hi: x, lo: 0.0 }
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    fn from_int(k: i64) -> Self {
        // |k| in this crate stays far below 2^53, so the cast is exact.
        ExtFloat { hi: k as f64, lo: 0.0 }
    }

    #[inline]
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        if self.hi < 0.0 {
            return ExtFloat { hi: f64::NAN, lo: 0.0 };
        }
        // One Newton step on a double seed recovers full precision.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let err = self - ExtFloat::from(ax) * ExtFloat::from(ax);
        ExtFloat::from(ax).add_f64(err.hi * (x * 0.5))
    }

    #[inline]
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn sin_cos_pi_frac(num: i64, den: i64) -> (Self, Self) {
        assert!(den > 0, "sin_cos_pi_frac: nonpositive denominator");
        let m = num.rem_euclid(2 * den);
        // quarter-turn reduction in exact integer arithmetic
        let quarter = (2 * m) / den; // in 0..=3
        let rem_num = 2 * m - quarter * den; // angle' = pi * rem_num / (2 den), in [0, pi/2)
        let angle = ExtFloat::PI * ExtFloat::from_int(rem_num) / ExtFloat::from_int(2 * den);
        let (s, c) = ExtFloat::sin_cos_taylor(angle);
        match quarter {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    #[inline]
    fn base_tolerance() -> f64 {
        1e-24
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(x: f64) -> ExtFloat {
        ExtFloat::from_f64(x)
    }

    #[test]
    fn keeps_bits_double_would_drop() {
        let tiny = ext(1e-25);
        let sum = (ExtFloat::ONE + tiny) - ExtFloat::ONE;
        assert!(((sum - tiny).abs()).to_f64() < 1e-55);
    }

    #[test]
    fn sqrt_squares_back() {
        for &v in &[2.0, 3.0, 10.0, 0.1, 12345.678] {
            let r = ext(v).sqrt();
            let back = r * r - ext(v);
            assert!(back.abs().to_f64() < v.abs().max(1.0) * 1e-31, "v={v}");
        }
    }

    #[test]
    fn division_round_trips() {
        let a = ext(3.7) + ext(1e-20);
        let b = ext(-1.9) + ext(3e-21);
        let q = a / b;
        assert!(((q * b - a).abs()).to_f64() < 1e-30);
    }

    #[test]
    fn sin_cos_exact_anchors() {
        let (s, c) = ExtFloat::sin_cos_pi_frac(1, 2);
        assert!((s - ExtFloat::ONE).abs().to_f64() < 1e-31);
        assert!(c.abs().to_f64() < 1e-31);

        let (s, _) = ExtFloat::sin_cos_pi_frac(1, 6);
        assert!((s - ext(0.5)).abs().to_f64() < 1e-31);

        // sin(pi/4)^2 = 1/2 exactly
        let (s, c) = ExtFloat::sin_cos_pi_frac(1, 4);
        assert!((s * s - ext(0.5)).abs().to_f64() < 1e-31);
        assert!((c * c - ext(0.5)).abs().to_f64() < 1e-31);
    }

    #[test]
    fn sin_cos_pythagoras_and_f64_agreement() {
        for den in 1..=40i64 {
            for num in -80..=80i64 {
                let (s, c) = ExtFloat::sin_cos_pi_frac(num, den);
                let unit = s * s + c * c - ExtFloat::ONE;
                assert!(unit.abs().to_f64() < 1e-30, "num={num} den={den}");
                let (sf, cf) = f64::sin_cos_pi_frac(num, den);
                assert!((s.to_f64() - sf).abs() < 1e-14, "num={num} den={den}");
                assert!((c.to_f64() - cf).abs() < 1e-14, "num={num} den={den}");
            }
        }
    }

    #[test]
    fn comparisons_follow_values() {
        let a = ExtFloat::ONE + ext(1e-25);
        let b = ExtFloat::ONE;
        assert!(a > b);
        assert!(-a < -b);
        assert!(ext(2.0) > ext(-3.0));
    }

    #[test]
    fn trunc_handles_negative_low_word() {
        let x = ext(4.0) + ext(-1e-20);
        assert_eq!(x.trunc().to_f64(), 3.0);
        let y = ext(4.0) + ext(1e-20);
        assert_eq!(y.trunc().to_f64(), 4.0);
        assert_eq!(ext(3.75).trunc().to_f64(), 3.0);
        assert_eq!(ext(-3.75).trunc().to_f64(), -3.0);
    }
}
