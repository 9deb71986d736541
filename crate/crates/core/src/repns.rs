//! The two `N`-dimensional quantum-`sl2` representation triples.
//!
//! `E` is the usual irreducible `N`-dimensional action; `F(p)` is the
//! parametrized family with square-root matrix elements. At `p = (N-1)/2`
//! the two coincide after swapping the raising and lowering operators and
//! inverting the Cartan element (the Cartan automorphism), which is the
//! representation-level content behind the invariant agreement.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::operator::Operator;
use crate::qarith::{tolerance, RootSystem};
use crate::scalar::Cx;

#[derive(Debug, Error)]
pub enum RepnsError {
    #[error("negative radicand [{0:.6}] * [{1:.6}] = {2:.6e} at basis index {3} (p = {4})")]
    NegativeRadicand(f64, f64, f64, usize, f64),
}

/// Which representation a triple holds.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub enum RepLabel {
    E,
    F { p: f64 },
}

/// Matrices of a `U_q(sl2)` action: raising/lowering pair and Cartan element.
#[derive(Clone, Debug)]
pub struct RepTriple {
    pub label: RepLabel,
    pub x: Operator<f64>,
    pub y: Operator<f64>,
    pub k: Operator<f64>,
}

/// `[x]` for a real (not necessarily integer) argument.
fn qint_real_arg(n: usize, x: f64) -> f64 {
    (PI * x / n as f64).sin() / (PI / n as f64).sin()
}

/// The `N`-dimensional irreducible action on basis `e_0..e_{N-1}`:
/// `X e_i = [i+1] e_{i+1}`, `Y e_i = [i] e_{i-1}`, `K e_i = s^{i-(N-1)/2} e_i`.
pub fn build_e(sys: &RootSystem<f64>) -> RepTriple {
    let n = sys.n();
    let mut x = Operator::new(n, 1);
    let mut y = Operator::new(n, 1);
    for i in 0..n as i64 {
        if i + 1 < n as i64 {
            x.add(i as u32 + 1, i as u32, sys.qint(i + 1));
        }
        if i > 0 {
            y.add(i as u32 - 1, i as u32, sys.qint(i));
        }
    }
    let k = Operator::diagonal(n, (0..n as i64).map(|i| sys.s_pow_half(2 * i - (n as i64 - 1))));
    RepTriple { label: RepLabel::E, x, y, k }
}

/// The parametrized action on `f_0..f_{N-1}`:
/// `X f_i = sqrt([2p-i+1][i]) f_{i-1}`, `Y f_i = sqrt([2p-i][i+1]) f_{i+1}`,
/// `K f_i = s^{p-i} f_i`. Radicands must be nonnegative (principal roots).
pub fn build_f(sys: &RootSystem<f64>, p: f64) -> Result<RepTriple, RepnsError> {
    let n = sys.n();
    let mut x = Operator::new(n, 1);
    let mut y = Operator::new(n, 1);
    for i in 0..n {
        let fi = i as f64;
        if i > 0 {
            let (a, b) = (qint_real_arg(n, 2.0 * p - fi + 1.0), qint_real_arg(n, fi));
            let rad = a * b;
            if rad < 0.0 {
                return Err(RepnsError::NegativeRadicand(a, b, rad, i, p));
            }
            x.add(i as u32 - 1, i as u32, Cx::new(rad.sqrt(), 0.0));
        }
        if i + 1 < n {
            let (a, b) = (qint_real_arg(n, 2.0 * p - fi), qint_real_arg(n, fi + 1.0));
            let rad = a * b;
            if rad < 0.0 {
                return Err(RepnsError::NegativeRadicand(a, b, rad, i, p));
            }
            y.add(i as u32 + 1, i as u32, Cx::new(rad.sqrt(), 0.0));
        }
    }
    let k = Operator::diagonal(
        n,
        (0..n).map(|i| {
            let angle = PI * (p - i as f64) / n as f64;
            Cx::new(angle.cos(), angle.sin())
        }),
    );
    Ok(RepTriple { label: RepLabel::F { p }, x, y, k })
}

/// Inverse of a diagonal operator.
fn diagonal_inverse(op: &Operator<f64>) -> Operator<f64> {
    let mut inv = Operator::new(op.dim(), op.arity());
    for (out, inp, v) in op.iter() {
        assert_eq!(out, inp, "diagonal_inverse on a non-diagonal operator");
        inv.add(out, inp, Cx::new(1.0, 0.0) / v);
    }
    inv
}

/// Deviations of the three defining relations
/// `KX = sXK`, `KY = s^{-1}YK`, `XY - YX = (K^2 - K^{-2})/(s - s^{-1})`.
#[derive(Debug, Clone, Serialize)]
pub struct RelationDeviations {
    pub kx: f64,
    pub ky: f64,
    pub commutator: f64,
}

impl RelationDeviations {
    pub fn max(&self) -> f64 {
        self.kx.max(self.ky).max(self.commutator)
    }
}

pub fn relation_deviations(sys: &RootSystem<f64>, rep: &RepTriple) -> RelationDeviations {
    let s = sys.s();
    // products in algebra order: AB applies B first
    let prod = |a: &Operator<f64>, b: &Operator<f64>| b.then(a);
    let kx = prod(&rep.k, &rep.x).max_abs_diff_scaled(&prod(&rep.x, &rep.k), s);
    let ky = prod(&rep.k, &rep.y).max_abs_diff_scaled(&prod(&rep.y, &rep.k), sys.s_pow(-1));

    let k_inv = diagonal_inverse(&rep.k);
    let k2 = prod(&rep.k, &rep.k);
    let k2_inv = prod(&k_inv, &k_inv);
    let mut rhs = Operator::new(sys.n(), 1);
    let denom = sys.s_minus_s_inv();
    for (out, inp, v) in k2.iter() {
        rhs.add(out, inp, v / denom);
    }
    for (out, inp, v) in k2_inv.iter() {
        rhs.add(out, inp, -v / denom);
    }
    let mut lhs = prod(&rep.x, &rep.y);
    for (out, inp, v) in prod(&rep.y, &rep.x).iter() {
        lhs.add(out, inp, -v);
    }
    let commutator = lhs.max_abs_diff(&rhs);
    RelationDeviations { kx, ky, commutator }
}

/// Swap raising and lowering operators and invert the Cartan element.
pub fn cartan_transform(rep: &RepTriple) -> RepTriple {
    RepTriple {
        label: rep.label,
        x: rep.y.clone(),
        y: rep.x.clone(),
        k: diagonal_inverse(&rep.k),
    }
}

/// Entrywise deviation between the Cartan transform of `F((N-1)/2)` and `E`.
pub fn cartan_deviation(sys: &RootSystem<f64>) -> f64 {
    let e = build_e(sys);
    let p = (sys.n() as f64 - 1.0) / 2.0;
    let f = build_f(sys, p).expect("radicands are perfect squares at p = (N-1)/2");
    let t = cartan_transform(&f);
    t.x.max_abs_diff(&e.x)
        .max(t.y.max_abs_diff(&e.y))
        .max(t.k.max_abs_diff(&e.k))
}

/// Relation report for both triples plus the Cartan coincidence, as the CLI
/// prints it.
#[derive(Debug, Clone, Serialize)]
pub struct RepCheckReport {
    pub n: usize,
    pub e_relations: RelationDeviations,
    pub f_relations: RelationDeviations,
    pub cartan_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn rep_check(sys: &RootSystem<f64>) -> RepCheckReport {
    let n = sys.n();
    let e = relation_deviations(sys, &build_e(sys));
    let p = (n as f64 - 1.0) / 2.0;
    let f = relation_deviations(sys, &build_f(sys, p).expect("valid at p = (N-1)/2"));
    let cartan = cartan_deviation(sys);
    let tol = tolerance::<f64>(n as f64, n);
    let pass = e.max() < tol && f.max() < tol && cartan < tol;
    RepCheckReport {
        n,
        e_relations: e,
        f_relations: f,
        cartan_deviation: cartan,
        tolerance: tol,
        pass,
    }
}
