//! Braid-closure invariant evaluation by sparse state propagation.
//!
//! The `(1,1)`-tangle value of a braid word is read off the `N x N`
//! endomorphism obtained by feeding each basis state through the braid
//! operator (with the enhancement weight composed into strands `2..n`) and
//! collecting the return amplitudes at the *same* trailing indices. For the
//! Jones operator every crossing conserves the exact index sum, so each
//! initial state propagates inside one charge sector; the dilogarithm
//! operator has no such position-basis sector (it is translation invariant
//! instead), so its wavefronts run over the full state space.
//!
//! Propagation is deterministic: initial states are processed in a fixed
//! order and partial results are reduced in that order, so values are
//! bit-identical for any worker count.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::BraidWord;
use crate::rmatrix::{EnhancedYb, OperatorKind};
use crate::scalar::{cx_abs_f64, cx_powi, cx_to_f64, Cx, Real};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(
        "endomorphism is not a scalar multiple of the identity: relative deviation {deviation:.3e} > {tolerance:.3e} ({kind:?}, N={n}, word `{word}`)"
    )]
    Integrity {
        kind: OperatorKind,
        n: usize,
        word: String,
        deviation: f64,
        tolerance: f64,
    },
    #[error("state vector lives on {state_strands} strands but the word has {word_strands}")]
    StrandMismatch { state_strands: usize, word_strands: usize },
}

/// How much of the endomorphism to compute.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    /// All `N^2` matrix elements: full scalarness diagnostics.
    Full,
    /// The single input column `k = 0`: enough for the scalar and an
    /// off-diagonal probe; used for large-`N` growth runs.
    Probe,
}

/// Result of a `(1,1)`-tangle evaluation.
#[derive(Clone, Debug)]
pub struct TangleValue<T: Real> {
    pub kind: OperatorKind,
    pub n: usize,
    pub word: String,
    pub writhe: i64,
    pub components: usize,
    pub readout: Readout,
    /// Normalized invariant value.
    pub value: Cx<T>,
    /// Relative scalarness defect: max off-diagonal magnitude and diagonal
    /// spread of the endomorphism, over `|scalar|`.
    pub scalarness_deviation: f64,
}

impl<T: Real> TangleValue<T> {
    pub fn value_f64(&self) -> Cx<f64> {
        cx_to_f64(self.value)
    }

    pub fn abs(&self) -> f64 {
        cx_abs_f64(self.value)
    }
}

/// Sparse state vector on `(C^N)^{(x) n}`, keyed by flattened basis index.
pub type SparseState<T> = BTreeMap<u32, Cx<T>>;

/// Per-input-pair transition lists for one crossing sign.
struct CrossingTable<T: Real> {
    dim: u32,
    /// `fanout[a*N+b]` lists `(i, j, coeff)` with input `(a,b)`, output `(i,j)`.
    fanout: Vec<Vec<(u16, u16, Cx<T>)>>,
}

impl<T: Real> CrossingTable<T> {
    fn from_operator(r: &crate::operator::Operator<T>) -> Self {
        let dim = r.dim() as u32;
        let mut fanout = vec![Vec::new(); (dim * dim) as usize];
        for (out, inp, v) in r.iter() {
            fanout[inp as usize].push(((out / dim) as u16, (out % dim) as u16, v));
        }
        CrossingTable { dim, fanout }
    }
}

/// Applies the word's crossing operators in letter order to a sparse state.
/// No sector pruning: this is the straightforward reference path.
pub fn braid_operator_apply<T: Real>(
    eyb: &EnhancedYb<T>,
    word: &BraidWord,
    state: &SparseState<T>,
    strands: usize,
) -> Result<SparseState<T>, EvalError> {
    if strands < word.strands() {
        return Err(EvalError::StrandMismatch {
            state_strands: strands,
            word_strands: word.strands(),
        });
    }
    let pos_table = CrossingTable::from_operator(&eyb.r);
    let neg_table = CrossingTable::from_operator(&eyb.r_inv);
    let n = eyb.sys.n() as u32;
    let mut cur = state.clone();
    for &g in word.letters() {
        let table = if g > 0 { &pos_table } else { &neg_table };
        let p = g.unsigned_abs() as usize - 1;
        let stride_hi = n.pow((strands - 1 - p) as u32 - 1) * n;
        let stride_lo = stride_hi / n;
        let mut next: SparseState<T> = BTreeMap::new();
        for (&flat, &amp) in &cur {
            let a = (flat / stride_hi) % n;
            let b = (flat / stride_lo) % n;
            let base = flat - a * stride_hi - b * stride_lo;
            for &(i, j, c) in &table.fanout[(a * n + b) as usize] {
                let nf = base + i as u32 * stride_hi + j as u32 * stride_lo;
                let slot = next.entry(nf).or_insert_with(Cx::zero);
                *slot = *slot + amp * c;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Enumerated state set a wavefront lives in, with dense local addressing.
struct StateSpace {
    states: Vec<u32>,
    /// flat index -> local index (`u32::MAX` when outside the set)
    pos: Vec<u32>,
}

impl StateSpace {
    fn full(total: usize) -> Self {
        StateSpace {
            states: (0..total as u32).collect(),
            pos: (0..total as u32).collect(),
        }
    }

    /// All states of `strands` digits in `[0, dim)` with digit sum `charge`.
    fn sector(dim: usize, strands: usize, charge: usize, pos_buf: &mut Vec<u32>) -> Self {
        let total = dim.pow(strands as u32);
        pos_buf.clear();
        pos_buf.resize(total, u32::MAX);
        let mut states = Vec::new();
        let mut digits = vec![0usize; strands];
        // enumerate states with the given digit sum in lexicographic order
        fn rec(
            digits: &mut Vec<usize>,
            level: usize,
            remaining: usize,
            dim: usize,
            strands: usize,
            states: &mut Vec<u32>,
        ) {
            if level == strands {
                if remaining == 0 {
                    let mut flat = 0u32;
                    for &d in digits.iter() {
                        flat = flat * dim as u32 + d as u32;
                    }
                    states.push(flat);
                }
                return;
            }
            let tail_max = (strands - level - 1) * (dim - 1);
            for d in 0..dim {
                if d > remaining || remaining - d > tail_max {
                    continue;
                }
                digits[level] = d;
                rec(digits, level + 1, remaining - d, dim, strands, states);
            }
        }
        rec(&mut digits, 0, charge, dim, strands, &mut states);
        let mut pos = std::mem::take(pos_buf);
        for (local, &flat) in states.iter().enumerate() {
            pos[flat as usize] = local as u32;
        }
        StateSpace { states, pos }
    }
}

/// Dense in-sector propagation of one initial basis state through the word.
/// Returns the final wavefront in local addressing.
#[allow(clippy::too_many_arguments)]
fn propagate_dense<T: Real>(
    space: &StateSpace,
    tables: &(CrossingTable<T>, CrossingTable<T>),
    letters: &[i32],
    strides: &[u32],
    n: u32,
    start_flat: u32,
    start_amp: Cx<T>,
    buf_a: &mut Vec<Cx<T>>,
    buf_b: &mut Vec<Cx<T>>,
) {
    let len = space.states.len();
    buf_a.clear();
    buf_a.resize(len, Cx::zero());
    buf_b.clear();
    buf_b.resize(len, Cx::zero());
    buf_a[space.pos[start_flat as usize] as usize] = start_amp;
    for &g in letters {
        let table = if g > 0 { &tables.0 } else { &tables.1 };
        let p = g.unsigned_abs() as usize - 1;
        let stride_hi = strides[p];
        let stride_lo = strides[p + 1];
        for slot in buf_b.iter_mut() {
            *slot = Cx::zero();
        }
        for (local, &flat) in space.states.iter().enumerate() {
            let amp = buf_a[local];
            if amp.is_zero() {
                continue;
            }
            let a = (flat / stride_hi) % n;
            let b = (flat / stride_lo) % n;
            let base = flat - a * stride_hi - b * stride_lo;
            for &(i, j, c) in &table.fanout[(a * n + b) as usize] {
                let nf = base + i as u32 * stride_hi + j as u32 * stride_lo;
                let target = space.pos[nf as usize] as usize;
                buf_b[target] = buf_b[target] + amp * c;
            }
        }
        std::mem::swap(buf_a, buf_b);
    }
}

/// Initial data for one propagation: flat start index, weight, readout base.
struct InitState<T: Real> {
    column: u32,
    start_flat: u32,
    readout_base: u32,
    weight: Cx<T>,
}

/// Builds the initial state for input `(k, tail)`: the enhancement weight is
/// composed into strands `2..n` first, the readout stays at the original tail.
fn init_state<T: Real>(
    eyb: &EnhancedYb<T>,
    strides: &[u32],
    n: u32,
    k: u32,
    tail: &[u32],
) -> InitState<T> {
    let mut weight = Cx::one();
    let mut start = k * strides[0];
    let mut base = 0u32;
    for (m, &t) in tail.iter().enumerate() {
        base += t * strides[m + 1];
        match eyb.kind {
            OperatorKind::Jones => {
                weight = weight * eyb.mu.get(t, t);
                start += t * strides[m + 1];
            }
            OperatorKind::Kashaev => {
                let shifted = (t + 1) % n;
                weight = weight * eyb.mu.get(shifted, t);
                start += shifted * strides[m + 1];
            }
        }
    }
    InitState { column: k, start_flat: start, readout_base: base, weight }
}

fn strides_for(n: u32, strands: usize) -> Vec<u32> {
    (0..strands).map(|p| n.pow((strands - 1 - p) as u32)).collect()
}

/// The `(1,1)`-tangle invariant `alpha^{-w} beta^{-n} * scalar`, with
/// scalarness diagnostics of the pre-normalization endomorphism.
pub fn one_one_invariant<T: Real>(
    eyb: &EnhancedYb<T>,
    word: &BraidWord,
    readout: Readout,
) -> Result<TangleValue<T>, EvalError> {
    let n = eyb.sys.n();
    let nu = n as u32;
    let strands = word.strands();
    let strides = strides_for(nu, strands);
    let tables = (
        CrossingTable::from_operator(&eyb.r),
        CrossingTable::from_operator(&eyb.r_inv),
    );
    let tail_count = n.pow(strands as u32 - 1);
    let columns: Vec<u32> = match readout {
        Readout::Full => (0..nu).collect(),
        Readout::Probe => vec![0],
    };

    // group initial states by the sector their wavefront lives in
    let mut groups: BTreeMap<usize, Vec<InitState<T>>> = BTreeMap::new();
    let mut tail = vec![0u32; strands - 1];
    for t_flat in 0..tail_count {
        let mut rem = t_flat as u32;
        for m in (0..strands - 1).rev() {
            tail[m] = rem % nu;
            rem /= nu;
        }
        for &k in &columns {
            let init = init_state(eyb, &strides, nu, k, &tail);
            let charge = match eyb.kind {
                OperatorKind::Jones => {
                    (init.start_flat / strides[0]
                        + (0..strands - 1)
                            .map(|m| (init.start_flat / strides[m + 1]) % nu)
                            .sum::<u32>()) as usize
                }
                OperatorKind::Kashaev => 0,
            };
            groups.entry(charge).or_default().push(init);
        }
    }

    // res[out * N + col] accumulates the endomorphism
    let mut res = vec![Cx::<T>::zero(); n * n];
    let mut pos_buf: Vec<u32> = Vec::new();
    for (charge, inits) in groups {
        let space = match eyb.kind {
            OperatorKind::Jones => StateSpace::sector(n, strands, charge, &mut pos_buf),
            OperatorKind::Kashaev => StateSpace::full(n.pow(strands as u32)),
        };
        // contributions per initial state, reduced in enumeration order
        let contribs: Vec<Vec<(u32, Cx<T>)>> = inits
            .par_iter()
            .map(|init| {
                let mut buf_a = Vec::new();
                let mut buf_b = Vec::new();
                propagate_dense(
                    &space,
                    &tables,
                    word.letters(),
                    &strides,
                    nu,
                    init.start_flat,
                    init.weight,
                    &mut buf_a,
                    &mut buf_b,
                );
                let mut out = Vec::with_capacity(n);
                for i in 0..nu {
                    let flat = init.readout_base + i * strides[0];
                    let local = space.pos[flat as usize];
                    if local != u32::MAX {
                        let amp = buf_a[local as usize];
                        if !amp.is_zero() {
                            out.push((i * nu + init.column, amp));
                        }
                    }
                }
                out
            })
            .collect();
        for list in contribs {
            for (slot, amp) in list {
                res[slot as usize] = res[slot as usize] + amp;
            }
        }
        pos_buf = space.pos;
    }

    // scalar = mean of the computed diagonal entries
    let diag: Vec<Cx<T>> = columns.iter().map(|&k| res[(k * nu + k) as usize]).collect();
    let mut scalar = Cx::<T>::zero();
    for &d in &diag {
        scalar = scalar + d;
    }
    let count = T::from_int(diag.len() as i64);
    scalar = Cx::new(scalar.re / count, scalar.im / count);

    let mut off_max = 0.0f64;
    let mut spread = 0.0f64;
    for &k in &columns {
        for i in 0..nu {
            let v = res[(i * nu + k) as usize];
            if i == k {
                spread = spread.max(cx_abs_f64(v - scalar));
            } else {
                off_max = off_max.max(cx_abs_f64(v));
            }
        }
    }
    let scale = cx_abs_f64(scalar).max(f64::MIN_POSITIVE);
    let deviation = off_max.max(spread) / scale;
    let tolerance = T::base_tolerance() * 10.0;

    let normalization =
        eyb.alpha_pow(-word.writhe()) * cx_powi(eyb.beta, -(strands as i64));
    let value = normalization * scalar;
    let result = TangleValue {
        kind: eyb.kind,
        n,
        word: word.to_string(),
        writhe: word.writhe(),
        components: word.closure_components(),
        readout,
        value,
        scalarness_deviation: deviation,
    };
    if deviation > tolerance {
        return Err(EvalError::Integrity {
            kind: eyb.kind,
            n,
            word: word.to_string(),
            deviation,
            tolerance,
        });
    }
    Ok(result)
}

/// The fully closed trace `alpha^{-w} beta^{-n} Sp_1(...Sp_n(b(xi) mu^{(x)n}))`;
/// identically zero for both operators here since `Sp_1(mu) = 0`.
pub fn closed_trace_invariant<T: Real>(eyb: &EnhancedYb<T>, word: &BraidWord) -> Cx<T> {
    let n = eyb.sys.n();
    let nu = n as u32;
    let strands = word.strands();
    let strides = strides_for(nu, strands);
    let total = n.pow(strands as u32);
    let tables = (
        CrossingTable::from_operator(&eyb.r),
        CrossingTable::from_operator(&eyb.r_inv),
    );
    let space = StateSpace::full(total);
    let mut acc = Cx::<T>::zero();
    let mut buf_a = Vec::new();
    let mut buf_b = Vec::new();
    for flat in 0..total as u32 {
        // compose mu into every strand
        let mut weight = Cx::one();
        let mut start = 0u32;
        for (p, &stride) in strides.iter().enumerate() {
            let digit = (flat / stride) % nu;
            match eyb.kind {
                OperatorKind::Jones => {
                    weight = weight * eyb.mu.get(digit, digit);
                    start += digit * stride;
                }
                OperatorKind::Kashaev => {
                    let shifted = (digit + 1) % nu;
                    weight = weight * eyb.mu.get(shifted, digit);
                    start += shifted * stride;
                }
            }
            let _ = p;
        }
        propagate_dense(
            &space,
            &tables,
            word.letters(),
            &strides,
            nu,
            start,
            weight,
            &mut buf_a,
            &mut buf_b,
        );
        acc = acc + buf_a[flat as usize];
    }
    let normalization = eyb.alpha_pow(-word.writhe()) * cx_powi(eyb.beta, -(strands as i64));
    normalization * acc
}

/// Complex agreement of the two operators' invariants on one word.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub n: usize,
    pub word: String,
    pub jones: (f64, f64),
    pub kashaev: (f64, f64),
    pub abs_difference: f64,
    pub relative_difference: f64,
    pub pass: bool,
}

/// Evaluates the word under both enhanced operators and compares the complex
/// values (exact phase agreement, not just modulus).
pub fn agreement_check<T: Real>(
    sys: &crate::qarith::RootSystem<T>,
    word: &BraidWord,
    readout: Readout,
) -> Result<AgreementReport, crate::rmatrix::RMatrixError> {
    let jones = EnhancedYb::new(sys, OperatorKind::Jones)?;
    let kashaev = EnhancedYb::new(sys, OperatorKind::Kashaev)?;
    let jv = one_one_invariant(&jones, word, readout).map_err(integrity_to_rmatrix)?;
    let kv = one_one_invariant(&kashaev, word, readout).map_err(integrity_to_rmatrix)?;
    let diff = cx_abs_f64(jv.value - kv.value);
    let scale = jv.abs().max(kv.abs()).max(1.0);
    let rel = diff / scale;
    let tol = T::base_tolerance() * 10.0;
    Ok(AgreementReport {
        n: sys.n(),
        word: word.to_string(),
        jones: (jv.value_f64().re, jv.value_f64().im),
        kashaev: (kv.value_f64().re, kv.value_f64().im),
        abs_difference: diff,
        relative_difference: rel,
        pass: rel <= tol,
    })
}

fn integrity_to_rmatrix(e: EvalError) -> crate::rmatrix::RMatrixError {
    match e {
        EvalError::Integrity { kind, n, deviation, tolerance, .. } => {
            crate::rmatrix::RMatrixError::Axiom {
                kind,
                axiom: "T_{S,1} is a scalar multiple of the identity",
                n,
                deviation,
                tolerance,
            }
        }
        EvalError::StrandMismatch { .. } => unreachable!("no state handed in"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::RootSystem;

    fn sys(n: usize) -> RootSystem<f64> {
        RootSystem::new(n).unwrap()
    }

    fn eyb(n: usize, kind: OperatorKind) -> EnhancedYb<f64> {
        EnhancedYb::new(&sys(n), kind).unwrap()
    }

    fn word(text: &str) -> BraidWord {
        BraidWord::parse(text).unwrap()
    }

    #[test]
    fn unknot_is_one_both_kinds() {
        for n in 2..=8usize {
            for kind in [OperatorKind::Jones, OperatorKind::Kashaev] {
                let e = eyb(n, kind);
                for text in ["1:", "2: 1", "2: -1"] {
                    let v = one_one_invariant(&e, &word(text), Readout::Full).unwrap();
                    let dev = (v.value - Cx::new(1.0, 0.0)).norm();
                    assert!(dev < 1e-9, "{kind:?} N={n} `{text}`: {} dev={dev:.2e}", v.value);
                }
            }
        }
    }

    #[test]
    fn determinant_anchors_at_n2() {
        let tref = word("2: 1 1 1");
        let fig8 = word("3: 1 -2 1 -2");
        for kind in [OperatorKind::Jones, OperatorKind::Kashaev] {
            let e = eyb(2, kind);
            let v = one_one_invariant(&e, &tref, Readout::Full).unwrap();
            assert!((v.abs() - 3.0).abs() < 1e-9, "{kind:?} trefoil: {}", v.abs());
            let v = one_one_invariant(&e, &fig8, Readout::Full).unwrap();
            assert!((v.abs() - 5.0).abs() < 1e-9, "{kind:?} fig8: {}", v.abs());
        }
    }

    #[test]
    fn jones_and_kashaev_agree_exactly() {
        for n in 2..=5usize {
            for text in ["2: 1 1 1", "3: 1 -2 1 -2", "3: 1 1 1 2 -1 2"] {
                let rep = agreement_check(&sys(n), &word(text), Readout::Full).unwrap();
                assert!(rep.pass, "N={n} `{text}`: {rep:?}");
            }
        }
    }

    #[test]
    fn markov_moves_leave_value_unchanged() {
        let base = word("3: 1 -2 1 -2");
        for n in 2..=5usize {
            for kind in [OperatorKind::Jones, OperatorKind::Kashaev] {
                let e = eyb(n, kind);
                let v0 = one_one_invariant(&e, &base, Readout::Full).unwrap().value;
                let conj = base.conjugate(2).unwrap();
                let v1 = one_one_invariant(&e, &conj, Readout::Full).unwrap().value;
                assert!((v0 - v1).norm() < 1e-8 * v0.norm().max(1.0), "{kind:?} N={n} conj");
                for positive in [true, false] {
                    let stab = base.stabilize(positive);
                    let v2 = one_one_invariant(&e, &stab, Readout::Full).unwrap().value;
                    assert!(
                        (v0 - v2).norm() < 1e-8 * v0.norm().max(1.0),
                        "{kind:?} N={n} stab({positive}): {v0} vs {v2}"
                    );
                }
            }
        }
    }

    #[test]
    fn connect_sum_is_multiplicative() {
        let tref = word("2: 1 1 1");
        let granny = tref.connect_sum(&tref).unwrap();
        for n in 2..=6usize {
            let e = eyb(n, OperatorKind::Jones);
            let vt = one_one_invariant(&e, &tref, Readout::Full).unwrap().value;
            let vg = one_one_invariant(&e, &granny, Readout::Full).unwrap().value;
            assert!((vg - vt * vt).norm() < 1e-8 * vt.norm_sqr().max(1.0), "N={n}");
        }
    }

    #[test]
    fn probe_readout_matches_full() {
        for kind in [OperatorKind::Jones, OperatorKind::Kashaev] {
            let e = eyb(4, kind);
            for text in ["2: 1 1 1", "3: 1 -2 1 -2"] {
                let full = one_one_invariant(&e, &word(text), Readout::Full).unwrap();
                let probe = one_one_invariant(&e, &word(text), Readout::Probe).unwrap();
                assert!((full.value - probe.value).norm() < 1e-9 * full.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sparse_apply_identities() {
        let e = eyb(3, OperatorKind::Jones);
        let mut state: SparseState<f64> = BTreeMap::new();
        state.insert(5, Cx::new(1.0, 0.0)); // basis state on 3 strands (N=3)
        // empty word leaves the state alone
        let out = braid_operator_apply(&e, &word("3:"), &state, 3).unwrap();
        assert_eq!(out, state);
        // single letter from a basis state has support at most N
        let out = braid_operator_apply(&e, &word("3: 1"), &state, 3).unwrap();
        assert!(out.len() <= 3);
        // a word followed by its reversed inverse returns the state
        let w = word("3: 1 -2 1");
        let inv = BraidWord::new(3, w.letters().iter().rev().map(|&g| -g).collect()).unwrap();
        let round = braid_operator_apply(
            &e,
            &inv,
            &braid_operator_apply(&e, &w, &state, 3).unwrap(),
            3,
        )
        .unwrap();
        let mut dev: f64 = 0.0;
        for (flat, amp) in &round {
            let want = state.get(flat).copied().unwrap_or_else(Cx::zero);
            dev = dev.max((*amp - want).norm());
        }
        assert!(dev < 1e-12, "round trip dev={dev:.3e}");
    }

    #[test]
    fn dense_sector_path_matches_sparse_full_path() {
        // charge pruning soundness: recompute the endomorphism through the
        // unpruned sparse route and compare entrywise
        for kind in [OperatorKind::Jones, OperatorKind::Kashaev] {
            let n = 3usize;
            let e = eyb(n, kind);
            let w = word("3: 1 -2 1 -2");
            let strands = 3;
            let nu = n as u32;
            let strides = strides_for(nu, strands);
            let mut res = vec![Cx::<f64>::zero(); n * n];
            for k in 0..nu {
                for t0 in 0..nu {
                    for t1 in 0..nu {
                        let init = init_state(&e, &strides, nu, k, &[t0, t1]);
                        let mut state: SparseState<f64> = BTreeMap::new();
                        state.insert(init.start_flat, init.weight);
                        let out = braid_operator_apply(&e, &w, &state, strands).unwrap();
                        for i in 0..nu {
                            let flat = init.readout_base + i * strides[0];
                            if let Some(&amp) = out.get(&flat) {
                                res[(i * nu + k) as usize] += amp;
                            }
                        }
                    }
                }
            }
            let norm = {
                let e2 = &e;
                e2.alpha_pow(-w.writhe())
            };
            let scalar = (0..n).map(|i| res[i * n + i]).sum::<Cx<f64>>() / n as f64;
            let via_sparse = norm * scalar;
            let via_dense = one_one_invariant(&e, &w, Readout::Full).unwrap().value;
            assert!(
                (via_sparse - via_dense).norm() < 1e-10 * via_dense.norm().max(1.0),
                "{kind:?}: {via_sparse} vs {via_dense}"
            );
        }
    }

    #[test]
    fn closed_trace_vanishes_and_is_consistent() {
        for kind in [OperatorKind::Jones, OperatorKind::Kashaev] {
            let n = 3;
            let e = eyb(n, kind);
            for text in ["2: 1 1 1", "3: 1 -2 1 -2", "1:"] {
                let w = word(text);
                let ts = closed_trace_invariant(&e, &w);
                assert!(ts.norm() < 1e-9, "{kind:?} `{text}`: T_S = {ts}");
                // Sp_1(mu) * T_{S,1} = T_S = 0
                let mu_trace = e.mu.trace();
                let t1 = one_one_invariant(&e, &w, Readout::Full).unwrap().value;
                assert!((mu_trace * t1 - ts).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn extended_precision_matches_double() {
        use crate::scalar::ExtFloat;
        let sd = sys(4);
        let se = RootSystem::<ExtFloat>::new(4).unwrap();
        let w = word("3: 1 -2 1 -2");
        let vd = one_one_invariant(
            &EnhancedYb::new(&sd, OperatorKind::Jones).unwrap(),
            &w,
            Readout::Full,
        )
        .unwrap();
        let ve = one_one_invariant(
            &EnhancedYb::new(&se, OperatorKind::Jones).unwrap(),
            &w,
            Readout::Full,
        )
        .unwrap();
        let diff = (vd.value_f64() - ve.value_f64()).norm();
        assert!(diff < 1e-12, "double vs extended: {diff:.3e}");
        assert!(ve.scalarness_deviation < 1e-25);
    }
}
