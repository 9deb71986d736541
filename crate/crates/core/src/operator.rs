//! Sparse multilinear operators on `(C^N)^{tensor k}`.
//!
//! Entries are keyed by `(output, input)` flattened multi-indices, matching
//! the convention that lower indices of a matrix are inputs and upper indices
//! are outputs. Flattening is row-major with the *first* tensor factor most
//! significant, so for arity 2 the pair `(i, j)` flattens to `i*N + j`.
//!
//! Composition is written in diagram order: `a.then(b)` feeds the output of
//! `a` into `b`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::scalar::{cx_abs_f64, Cx, Real};

#[derive(Clone, Debug)]
pub struct Operator<T: Real> {
    dim: usize,
    arity: usize,
    entries: BTreeMap<(u32, u32), Cx<T>>,
}

impl<T: Real> Operator<T> {
    pub fn new(dim: usize, arity: usize) -> Self {
        assert!(dim >= 1 && arity >= 1);
        assert!(
            (dim as u64).pow(arity as u32) <= u32::MAX as u64,
            "operator space too large to index"
        );
        Operator { dim, arity, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize, arity: usize) -> Self {
        let mut op = Operator::new(dim, arity);
        for i in 0..op.space_dim() as u32 {
            op.entries.insert((i, i), Cx::one());
        }
        op
    }

    /// Arity-1 diagonal operator from its diagonal entries.
    pub fn diagonal(dim: usize, entries: impl IntoIterator<Item = Cx<T>>) -> Self {
        let mut op = Operator::new(dim, 1);
        for (i, v) in entries.into_iter().enumerate() {
            assert!(i < dim);
            op.add(i as u32, i as u32, v);
        }
        op
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Total dimension `N^k` of the underlying space.
    #[inline]
    pub fn space_dim(&self) -> usize {
        self.dim.pow(self.arity as u32)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Accumulate `v` into the `(output, input)` entry.
    pub fn add(&mut self, out: u32, inp: u32, v: Cx<T>) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((out, inp)).or_insert_with(Cx::zero);
        *slot = *slot + v;
    }

    pub fn get(&self, out: u32, inp: u32) -> Cx<T> {
        self.entries.get(&(out, inp)).copied().unwrap_or_else(Cx::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, Cx<T>)> + '_ {
        self.entries.iter().map(|(&(o, i), &v)| (o, i, v))
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        let entries = self.entries.iter().map(|(&k, &v)| (k, v * c)).collect();
        Operator { dim: self.dim, arity: self.arity, entries }
    }

    /// Diagram-order composition: apply `self` first, then `next`.
    pub fn then(&self, next: &Operator<T>) -> Self {
        assert_eq!(self.dim, next.dim);
        assert_eq!(self.arity, next.arity);
        let mut by_input: HashMap<u32, Vec<(u32, Cx<T>)>> = HashMap::new();
        for (&(out, inp), &v) in &next.entries {
            by_input.entry(inp).or_default().push((out, v));
        }
        let mut result = Operator::new(self.dim, self.arity);
        for (&(mid, inp), &a) in &self.entries {
            if let Some(tail) = by_input.get(&mid) {
                for &(out, b) in tail {
                    result.add(out, inp, a * b);
                }
            }
        }
        result
    }

    /// Tensor product with `self` on the leading factors.
    pub fn tensor(&self, rhs: &Operator<T>) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let rhs_space = rhs.space_dim() as u32;
        let mut result = Operator::new(self.dim, self.arity + rhs.arity);
        for (&(o1, i1), &v1) in &self.entries {
            for (&(o2, i2), &v2) in &rhs.entries {
                result.add(o1 * rhs_space + o2, i1 * rhs_space + i2, v1 * v2);
            }
        }
        result
    }

    /// Operator trace over the last tensor factor.
    pub fn sp_last(&self) -> Self {
        assert!(self.arity >= 2, "sp_last needs arity >= 2");
        let d = self.dim as u32;
        let mut result = Operator::new(self.dim, self.arity - 1);
        for (&(out, inp), &v) in &self.entries {
            if out % d == inp % d {
                result.add(out / d, inp / d, v);
            }
        }
        result
    }

    /// Full trace.
    pub fn trace(&self) -> Cx<T> {
        let mut acc = Cx::zero();
        for (&(out, inp), &v) in &self.entries {
            if out == inp {
                acc = acc + v;
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|&v| cx_abs_f64(v)).fold(0.0, f64::max)
    }

    /// `max |self - other|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Operator<T>) -> f64 {
        self.max_abs_diff_scaled(other, Cx::one())
    }

    /// `max |self - c * other|` over the union of supports.
    pub fn max_abs_diff_scaled(&self, other: &Operator<T>, c: Cx<T>) -> f64 {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.arity, other.arity);
        let mut max = 0.0f64;
        for (&k, &v) in &self.entries {
            let w = other.entries.get(&k).copied().unwrap_or_else(Cx::zero);
            max = max.max(cx_abs_f64(v - c * w));
        }
        for (&k, &w) in &other.entries {
            if !self.entries.contains_key(&k) {
                max = max.max(cx_abs_f64(c * w));
            }
        }
        max
    }

    /// `max |self - lambda * id|`.
    pub fn deviation_from_scaled_identity(&self, lambda: Cx<T>) -> f64 {
        let mut max = 0.0f64;
        let space = self.space_dim() as u32;
        for (&(out, inp), &v) in &self.entries {
            let target = if out == inp { lambda } else { Cx::zero() };
            max = max.max(cx_abs_f64(v - target));
        }
        // diagonal positions missing from the support
        for i in 0..space {
            if !self.entries.contains_key(&(i, i)) {
                max = max.max(cx_abs_f64(lambda));
                break;
            }
        }
        max
    }

    /// Entries in `(row, col, re, im)` form, sorted by `(row, col)`;
    /// row is the flattened output index, col the flattened input index.
    pub fn dense_entries(&self) -> Vec<(u32, u32, f64, f64)> {
        self.entries
            .iter()
            .map(|(&(o, i), &v)| (o, i, v.re.to_f64(), v.im.to_f64()))
            .collect()
    }

    /// Dense row-major matrix export (`space_dim x space_dim`).
    pub fn to_dense(&self) -> Vec<Cx<T>> {
        let d = self.space_dim();
        let mut m = vec![Cx::zero(); d * d];
        for (&(out, inp), &v) in &self.entries {
            m[out as usize * d + inp as usize] = m[out as usize * d + inp as usize] + v;
        }
        m
    }

    /// Dense full-matrix inverse; for small verification paths only.
    pub fn dense_inverse(&self) -> Option<Self> {
        let d = self.space_dim();
        let m = self.to_dense();
        let inv = invert_dense(&m, d)?;
        let mut op = Operator::new(self.dim, self.arity);
        for out in 0..d {
            for inp in 0..d {
                let v = inv[out * d + inp];
                if cx_abs_f64(v) > 0.0 {
                    op.add(out as u32, inp as u32, v);
                }
            }
        }
        Some(op)
    }
}

/// Gauss-Jordan inverse with partial pivoting on squared magnitude.
/// `m` is row-major `n x n`; rows index outputs, columns inputs.
pub fn invert_dense<T: Real>(m: &[Cx<T>], n: usize) -> Option<Vec<Cx<T>>> {
    assert_eq!(m.len(), n * n);
    let mut a = m.to_vec();
    let mut inv = vec![Cx::<T>::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = Cx::one();
    }
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].norm_sqr();
        for row in col + 1..n {
            let mag = a[row * n + col].norm_sqr();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best.to_f64() == 0.0 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let p = a[col * n + col];
        for j in 0..n {
            a[col * n + j] = a[col * n + j] / p;
            inv[col * n + j] = inv[col * n + j] / p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row * n + col];
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let sub = f * a[col * n + j];
                a[row * n + j] = a[row * n + j] - sub;
                let sub = f * inv[col * n + j];
                inv[row * n + j] = inv[row * n + j] - sub;
            }
        }
    }
    Some(inv)
}
