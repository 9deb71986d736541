//! Exact-index q-combinatorics and root-of-unity arithmetic.
//!
//! Everything here is anchored at the primitive `2N`-th root `s = exp(pi*i/N)`
//! with `q = s^2`. Powers of `s` are taken from a cached table indexed by
//! *doubled* exponents, so every half-integer power that appears in the
//! R-matrix prefactors is a single table lookup with no branch-cut ambiguity.
//!
//! q-integers `[k] = (s^k - s^{-k})/(s - s^{-1})` are computed as the real
//! sine ratio `sin(k*pi/N)/sin(pi/N)`, which keeps them exactly real and
//! positive for `1 <= k <= N-1`.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{cx_abs_f64, cx_powi, Cx, Real};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QArithError {
    #[error("root order N must be at least 2, got {0}")]
    BadOrder(usize),
    #[error("q-factorial of negative integer {0}")]
    NegativeFactorial(i64),
    #[error("q-binomial arguments out of range: x={x}, y={y} (need 0 <= y <= x < {n})")]
    BinomialRange { x: i64, y: i64, n: usize },
    #[error("sum parameter alpha={alpha} outside [0, {max}]")]
    AlphaRange { alpha: i64, max: i64 },
}

/// Evaluation route for the appendix sums: literal summation or the
/// telescoped product form.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SumMode {
    Brute,
    Closed,
}

/// Scale-aware equality tolerance: deviations up to
/// `base * max(1, scale) * dim` pass, where `base` depends on the precision.
pub fn tolerance<T: Real>(scale: f64, dim: usize) -> f64 {
    T::base_tolerance() * scale.max(1.0) * dim as f64
}

/// The primitive `2N`-th root of unity with its cached combinatorics.
#[derive(Clone, Debug)]
pub struct RootSystem<T: Real> {
    n: usize,
    /// `half_powers[k] = s^{k/2} = exp(i pi k / (2N))`, period `4N`.
    half_powers: Vec<Cx<T>>,
    /// `[k]` for `0 <= k <= N`.
    qints: Vec<T>,
    /// `[k]!` for `0 <= k <= N-1`.
    qfacts: Vec<T>,
}

impl<T: Real> RootSystem<T> {
    pub fn new(n: usize) -> Result<Self, QArithError> {
        if n < 2 {
            return Err(QArithError::BadOrder(n));
        }
        let den = 2 * n as i64;
        let half_powers = (0..4 * n as i64)
            .map(|k| {
                let (sin, cos) = T::sin_cos_pi_frac(k, den);
                Cx::new(cos, sin)
            })
            .collect();
        let sin_unit = T::sin_cos_pi_frac(1, n as i64).0;
        let qints: Vec<T> = (0..=n as i64)
            .map(|k| T::sin_cos_pi_frac(k, n as i64).0 / sin_unit)
            .collect();
        let mut qfacts = Vec::with_capacity(n);
        let mut acc = T::one();
        qfacts.push(acc);
        for k in 1..n {
            acc = acc * qints[k];
            qfacts.push(acc);
        }
        Ok(RootSystem { n, half_powers, qints, qfacts })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `s = exp(pi i / N)`.
    #[inline]
    pub fn s(&self) -> Cx<T> {
        self.half_powers[2]
    }

    /// `q = s^2`.
    #[inline]
    pub fn q(&self) -> Cx<T> {
        self.half_powers[4 % (4 * self.n)]
    }

    /// `s^e` for any integer `e`.
    #[inline]
    pub fn s_pow(&self, e: i64) -> Cx<T> {
        self.s_pow_half(2 * e)
    }

    /// `s^{twice/2}`: half-integer powers addressed by doubled exponent.
    #[inline]
    pub fn s_pow_half(&self, twice: i64) -> Cx<T> {
        let m = twice.rem_euclid(4 * self.n as i64) as usize;
        self.half_powers[m]
    }

    /// `q^e = s^{2e}`.
    #[inline]
    pub fn q_pow(&self, e: i64) -> Cx<T> {
        self.s_pow_half(4 * e)
    }

    /// `s - s^{-1} = 2i sin(pi/N)`.
    #[inline]
    pub fn s_minus_s_inv(&self) -> Cx<T> {
        self.s_pow(1) - self.s_pow(-1)
    }

    /// `(s - s^{-1})^e`, any integer `e`.
    pub fn s_minus_s_inv_pow(&self, e: i64) -> Cx<T> {
        cx_powi(self.s_minus_s_inv(), e)
    }

    /// q-integer `[k]` as a real scalar; any integer `k`.
    #[inline]
    pub fn qint_real(&self, k: i64) -> T {
        if (0..=self.n as i64).contains(&k) {
            self.qints[k as usize]
        } else {
            let sin_unit = T::sin_cos_pi_frac(1, self.n as i64).0;
            T::sin_cos_pi_frac(k, self.n as i64).0 / sin_unit
        }
    }

    /// q-integer `[k]` as a complex scalar.
    #[inline]
    pub fn qint(&self, k: i64) -> Cx<T> {
        Cx::new(self.qint_real(k), T::zero())
    }

    /// `[m]! = [m][m-1]...[1]`; `1` for `m = 0`, exactly `0` for `m >= N`
    /// (the factor `[N]` vanishes). Negative `m` is a domain error: closed-form
    /// builders must branch before calling.
    pub fn qfact(&self, m: i64) -> Result<T, QArithError> {
        if m < 0 {
            return Err(QArithError::NegativeFactorial(m));
        }
        if m >= self.n as i64 {
            return Ok(T::zero());
        }
        Ok(self.qfacts[m as usize])
    }

    /// Gaussian binomial `[x]! / ([y]! [x-y]!)` on the in-range grid
    /// `0 <= y <= x < N`.
    pub fn qbinom(&self, x: i64, y: i64) -> Result<T, QArithError> {
        if y < 0 || y > x || x >= self.n as i64 {
            return Err(QArithError::BinomialRange { x, y, n: self.n });
        }
        Ok(self.qfacts[x as usize] / (self.qfacts[y as usize] * self.qfacts[(x - y) as usize]))
    }

    /// `(x)_n = prod_{i=1}^{n} (1 - x^i)`; `1` for `n = 0`.
    pub fn pochhammer(&self, x: Cx<T>, n: u32) -> Cx<T> {
        let one = Cx::<T>::one();
        let mut acc = one;
        let mut xp = one;
        for _ in 0..n {
            xp = xp * x;
            acc = acc * (one - xp);
        }
        acc
    }

    /// `theta(k) = 1` iff `0 <= k < N`.
    #[inline]
    pub fn theta(&self, k: i64) -> bool {
        0 <= k && k < self.n as i64
    }

    /// Residue of `x` modulo `N` in `[0, N-1]`, also for negative `x`.
    #[inline]
    pub fn res_mod(&self, x: i64) -> i64 {
        x.rem_euclid(self.n as i64)
    }

    /// `S(alpha, beta) = sum_{i=0}^{N-1} s^{beta i} [alpha+i choose i]`,
    /// or its closed product form `prod_{j=1}^{N-alpha-1} (1 - s^{beta-alpha-2j})`.
    pub fn sum_s(&self, alpha: i64, beta: i64, mode: SumMode) -> Result<Cx<T>, QArithError> {
        let nn = self.n as i64;
        if !(0..nn).contains(&alpha) {
            return Err(QArithError::AlphaRange { alpha, max: nn - 1 });
        }
        match mode {
            SumMode::Brute => {
                let mut acc = Cx::<T>::zero();
                let fact_alpha = self.qfacts[alpha as usize];
                for i in 0..nn {
                    // [alpha+i]! vanishes once alpha+i >= N, so the sum is
                    // effectively truncated at i = N-1-alpha.
                    let num = self.qfact(alpha + i)?;
                    if num.is_zero() {
                        continue;
                    }
                    let binom = num / (self.qfacts[i as usize] * fact_alpha);
                    acc = acc + self.s_pow(beta * i).scale_real(binom);
                }
                Ok(acc)
            }
            SumMode::Closed => {
                let one = Cx::<T>::one();
                let mut acc = one;
                for j in 1..=(nn - alpha - 1) {
                    acc = acc * (one - self.s_pow(beta - alpha - 2 * j));
                }
                Ok(acc)
            }
        }
    }

    /// `T(alpha, beta) = sum_{i=0}^{alpha} (-1)^i s^{beta i} [alpha choose i]`,
    /// or `prod_{j=1}^{alpha} (1 - s^{beta+alpha+1-2j})`.
    pub fn sum_t(&self, alpha: i64, beta: i64, mode: SumMode) -> Result<Cx<T>, QArithError> {
        let nn = self.n as i64;
        if !(0..nn).contains(&alpha) {
            return Err(QArithError::AlphaRange { alpha, max: nn - 1 });
        }
        match mode {
            SumMode::Brute => {
                let mut acc = Cx::<T>::zero();
                for i in 0..=alpha {
                    let binom = self.qbinom(alpha, i)?;
                    let sign = if i % 2 == 0 { binom } else { -binom };
                    acc = acc + self.s_pow(beta * i).scale_real(sign);
                }
                Ok(acc)
            }
            SumMode::Closed => {
                let one = Cx::<T>::one();
                let mut acc = one;
                for j in 1..=alpha {
                    acc = acc * (one - self.s_pow(beta + alpha + 1 - 2 * j));
                }
                Ok(acc)
            }
        }
    }

    /// Deviations of the factorial forms of `(q)_n` and `(q^{-1})_n`
    /// over `0 <= n <= N-1`; the maximum is the reported figure.
    pub fn pochhammer_identity_deviation(&self) -> PochhammerIdentityReport {
        let mut max_dev = 0.0f64;
        for n in 0..self.n as i64 {
            let lhs_q = self.pochhammer(self.q(), n as u32);
            let rhs_q = self
                .s_pow(n * (n + 1) / 2)
                .scale_real(self.qfacts[n as usize])
                * self.s_minus_s_inv_pow(n);
            let rhs_q = if n % 2 == 0 { rhs_q } else { -rhs_q };
            max_dev = max_dev.max(cx_abs_f64(lhs_q - rhs_q));

            let lhs_qinv = self.pochhammer(self.q_pow(-1), n as u32);
            let rhs_qinv = self
                .s_pow(-n * (n + 1) / 2)
                .scale_real(self.qfacts[n as usize])
                * self.s_minus_s_inv_pow(n);
            max_dev = max_dev.max(cx_abs_f64(lhs_qinv - rhs_qinv));
        }
        PochhammerIdentityReport {
            n: self.n,
            max_deviation: max_dev,
            tolerance: tolerance::<T>(1.0, self.n),
        }
    }

    /// `|prod_{k=1}^{N-1} 2 sin(k pi / N) - N|`.
    pub fn sine_product_deviation(&self) -> f64 {
        let two = T::from_f64(2.0);
        let mut acc = T::one();
        for k in 1..self.n as i64 {
            acc = acc * two * T::sin_cos_pi_frac(k, self.n as i64).0;
        }
        (acc - T::from_int(self.n as i64)).abs().to_f64()
    }
}

/// Outcome of the Pochhammer/factorial identity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct PochhammerIdentityReport {
    pub n: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl PochhammerIdentityReport {
    pub fn pass(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Small helper: multiply a complex scalar by a real one.
trait ScaleReal<T: Real> {
    fn scale_real(self, r: T) -> Self;
}

impl<T: Real> ScaleReal<T> for Cx<T> {
    #[inline]
    fn scale_real(self, r: T) -> Self {
        Cx::new(self.re * r, self.im * r)
    }
}

/// Public variant of the real-scaling helper used by sibling modules.
#[inline]
pub(crate) fn scale_real<T: Real>(z: Cx<T>, r: T) -> Cx<T> {
    Cx::new(z.re * r, z.im * r)
}
