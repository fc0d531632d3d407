//! Deterministic parallel enumeration of projective codewords and of
//! F_q-subspaces, with the per-item rank/determinant kernels used by the MRD
//! tests.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::linalg;
use crate::gf::{Extension, FieldElem};
use crate::linpoly::LinPoly;

/// Default cap on the number of items a single sweep may visit.
pub const DEFAULT_MAX_STEPS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guard {
    pub max_steps: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_steps: DEFAULT_MAX_STEPS }
    }
}

impl Guard {
    pub fn new(max_steps: u64) -> Self {
        Guard { max_steps }
    }

    pub fn unlimited() -> Self {
        Guard { max_steps: u64::MAX }
    }

    pub fn check(&self, needed: u128) -> Result<u64> {
        if needed > self.max_steps as u128 {
            Err(Error::GuardExceeded { needed, limit: self.max_steps })
        } else {
            Ok(needed as u64)
        }
    }
}

/// How a rank sweep visits the code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Whichever of the two enumerations is shorter.
    #[default]
    Auto,
    /// Every projective codeword, first nonzero coordinate equal to 1.
    Codewords,
    /// Every k-dimensional F_q-subspace of F_{q^n}, tested through the
    /// determinant of the evaluation (Moore) matrix.
    Subspaces,
}

/// Number of normalized nonzero tuples in GF(Q)^k, i.e. (Q^k - 1)/(Q - 1).
pub fn codeword_count(big_q: u64, k: usize) -> u128 {
    let mut total: u128 = 0;
    for _ in 0..k {
        total = total.saturating_mul(big_q as u128).saturating_add(1);
    }
    total
}

/// The `idx`-th normalized tuple in lexicographic order.
pub fn codeword_at(big_q: u64, idx: u64, out: &mut [FieldElem]) {
    let k = out.len();
    let mut idx = idx as u128;
    let mut pos = 0;
    while pos < k {
        let rest = codeword_count(big_q, k - pos - 1);
        if idx < rest {
            out[pos] = FieldElem::ZERO;
            pos += 1;
            continue;
        }
        idx -= rest;
        out[pos] = FieldElem::ONE;
        for j in (pos + 1..k).rev() {
            out[j] = FieldElem((idx % big_q as u128) as u32);
            idx /= big_q as u128;
        }
        return;
    }
    unreachable!("codeword index out of range");
}

/// Gaussian binomial [n choose k]_q, saturating.
pub fn subspace_count(q: u64, n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        let a = (q as u128).checked_pow((n - i) as u32).map(|v| v - 1);
        let b = (q as u128).checked_pow((i + 1) as u32).map(|v| v - 1);
        match (a, b, num.checked_mul(a.unwrap_or(0))) {
            (Some(_), Some(b), Some(nv)) if nv != 0 => {
                num = nv;
                den *= b;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Enumerates k-dimensional subspaces of GF(q)^n through their reduced row
/// echelon bases: pivot sets in lexicographic order, then the free entries
/// read as a base-q counter (last free entry least significant).
pub struct SubspaceIndex {
    q: u64,
    n: usize,
    k: usize,
    blocks: Vec<Block>,
    total: u128,
}

struct Block {
    start: u128,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl SubspaceIndex {
    pub fn new(q: u64, n: usize, k: usize, guard: &Guard) -> Result<Self> {
        guard.check(subspace_count(q, n, k))?;
        let mut blocks = Vec::new();
        let mut total: u128 = 0;
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pv = &pivots;
                    (pv[r] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
                })
                .collect();
            blocks.push(Block { start: total, pivots: pivots.clone(), free: free.clone() });
            total += (q as u128).pow(free.len() as u32);
            // next k-combination of 0..n
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(SubspaceIndex { q, n, k, blocks, total });
                }
                i -= 1;
                if pivots[i] < n - k + i {
                    pivots[i] += 1;
                    for j in i + 1..k {
                        pivots[j] = pivots[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn len(&self) -> u64 {
        self.total as u64
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Writes the RREF basis of the `idx`-th subspace into `rows` (k × n).
    pub fn at(&self, idx: u64, rows: &mut [Vec<FieldElem>]) {
        let idx = idx as u128;
        let b = match self.blocks.binary_search_by(|blk| blk.start.cmp(&idx)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let blk = &self.blocks[b];
        for row in rows.iter_mut() {
            row.iter_mut().for_each(|x| *x = FieldElem::ZERO);
        }
        for (r, &c) in blk.pivots.iter().enumerate() {
            rows[r][c] = FieldElem::ONE;
        }
        let mut rest = idx - blk.start;
        for &(r, c) in blk.free.iter().rev() {
            rows[r][c] = FieldElem((rest % self.q as u128) as u32);
            rest /= self.q as u128;
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.k, self.n)
    }
}

/// Precomputed values f_i(G^j) for a list of polynomials, used to evaluate
/// codewords and Moore matrices without recomputing Frobenius powers.
pub(crate) struct Evaluator {
    space: Arc<Extension>,
    k: usize,
    n: usize,
    /// table[i * n + j] = f_i(G^j)
    table: Vec<FieldElem>,
    binary: bool,
}

pub(crate) struct Scratch {
    cols: Vec<FieldElem>,
    rows: Vec<Vec<FieldElem>>,
    bits: Vec<u64>,
    square: Vec<Vec<FieldElem>>,
}

impl Evaluator {
    pub(crate) fn new(space: &Arc<Extension>, polys: &[LinPoly]) -> Self {
        let n = space.n();
        let table = polys.iter().flat_map(|f| space.basis().iter().map(move |&b| f.evaluate(b))).collect();
        let binary = space.q() == 2 && n <= 64;
        Evaluator { space: space.clone(), k: polys.len(), n, table, binary }
    }

    pub(crate) fn scratch(&self, sub_dim: usize) -> Scratch {
        Scratch {
            cols: vec![FieldElem::ZERO; self.n],
            rows: vec![vec![FieldElem::ZERO; self.n]; self.n],
            bits: vec![0; self.n],
            square: vec![vec![FieldElem::ZERO; self.k]; sub_dim],
        }
    }

    /// F_q-rank of the codeword Σ b_i f_i.
    pub(crate) fn rank(&self, b: &[FieldElem], s: &mut Scratch) -> usize {
        let f = self.space.field();
        for j in 0..self.n {
            let mut acc = FieldElem::ZERO;
            for (i, &bi) in b.iter().enumerate() {
                if !bi.is_zero() {
                    acc = f.add(acc, f.mul(bi, self.table[i * self.n + j]));
                }
            }
            s.cols[j] = acc;
        }
        if self.binary {
            for (bit, c) in s.bits.iter_mut().zip(&s.cols) {
                *bit = c.0 as u64;
            }
            return linalg::rank_gf2(&mut s.bits);
        }
        for (row, &c) in s.rows.iter_mut().zip(&s.cols) {
            self.space.to_coords_into(c, row);
        }
        linalg::rank_in_place(self.space.base(), &mut s.rows)
    }

    /// Fills `s.square` with the matrix [f_i(u_r)] for u_r = Σ_l rows[r][l] G^l.
    fn moore_matrix(&self, rows: &[Vec<FieldElem>], s: &mut Scratch) {
        let f = self.space.field();
        for (r, v) in rows.iter().enumerate() {
            for i in 0..self.k {
                let mut acc = FieldElem::ZERO;
                for (l, &c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        acc = f.add(acc, self.space.scale(c, self.table[i * self.n + l]));
                    }
                }
                s.square[r][i] = acc;
            }
        }
    }

    /// Whether some nonzero codeword vanishes on the subspace spanned by `rows`.
    pub(crate) fn subspace_killed(&self, rows: &[Vec<FieldElem>], s: &mut Scratch) -> bool {
        self.moore_matrix(rows, s);
        if rows.len() == self.k {
            linalg::det_in_place(self.space.field(), &mut s.square).is_zero()
        } else {
            linalg::rank_in_place(self.space.field(), &mut s.square) < self.k
        }
    }

    /// A normalized codeword vanishing on the span of `rows`, if one exists.
    pub(crate) fn killing_codeword(&self, rows: &[Vec<FieldElem>]) -> Option<Vec<FieldElem>> {
        let mut s = self.scratch(rows.len());
        self.moore_matrix(rows, &mut s);
        let ns = linalg::null_space(self.space.field(), &s.square, self.k);
        ns.into_iter().next().map(|v| normalize_tuple(self.space.field(), v))
    }
}

/// Scales a nonzero tuple so that its first nonzero entry is 1.
pub(crate) fn normalize_tuple(f: &crate::gf::FieldCtx, mut v: Vec<FieldElem>) -> Vec<FieldElem> {
    if let Some(&lead) = v.iter().find(|x| !x.is_zero()) {
        let inv = f.inv(lead).unwrap();
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    v
}

/// Lowest index in 0..count satisfying `pred`, independent of scheduling.
pub(crate) fn find_first<S, I, P>(count: u64, init: I, pred: P) -> Option<u64>
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    P: Fn(&mut S, u64) -> bool + Sync + Send,
{
    (0..count).into_par_iter().map_init(init, |s, i| pred(s, i).then_some(i)).find_first(Option::is_some).flatten()
}

/// Histogram of `value(i)` over 0..count (values < `bins`).
pub(crate) fn histogram<S, I, V>(count: u64, bins: usize, init: I, value: V) -> Vec<u64>
where
    S: Send,
    I: Fn() -> S + Sync + Send,
    V: Fn(&mut S, u64) -> usize + Sync + Send,
{
    (0..count)
        .into_par_iter()
        .fold(
            || (init(), vec![0u64; bins]),
            |(mut s, mut h), i| {
                h[value(&mut s, i)] += 1;
                (s, h)
            },
        )
        .map(|(_, h)| h)
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &[FieldElem]) -> Vec<u32> {
        v.iter().map(|x| x.0).collect()
    }

    #[test]
    fn codeword_order_is_lexicographic_over_normalized_tuples() {
        for (q, k) in [(2u64, 3usize), (3, 2), (4, 3), (5, 1)] {
            // oracle: every tuple in GF(q)^k, keep those whose first nonzero is 1
            let mut expected = Vec::new();
            for enc in 0..q.pow(k as u32) {
                let mut t = vec![0u32; k];
                let mut v = enc;
                for j in (0..k).rev() {
                    t[j] = (v % q) as u32;
                    v /= q;
                }
                if t.iter().find(|&&x| x != 0) == Some(&1) {
                    expected.push(t);
                }
            }
            let count = codeword_count(q, k);
            assert_eq!(count, expected.len() as u128);
            let mut out = vec![FieldElem::ZERO; k];
            for (i, e) in expected.iter().enumerate() {
                codeword_at(q, i as u64, &mut out);
                assert_eq!(&tuple(&out), e);
            }
        }
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(subspace_count(2, 4, 2), 35);
        assert_eq!(subspace_count(3, 6, 4), 11011);
        assert_eq!(subspace_count(2, 5, 0), 1);
        assert_eq!(subspace_count(2, 3, 4), 0);
    }

    // Oracle: distinct row spaces among all k-tuples of vectors over GF(q).
    #[test]
    fn subspace_enumeration_hits_every_subspace_once() {
        use crate::gf::FieldCtx;
        use std::collections::BTreeSet;
        for (q, n, k) in [(2u64, 4usize, 2usize), (3, 3, 2), (2, 4, 3), (2, 3, 1)] {
            let f = FieldCtx::new(q, 1, 1 << 20).unwrap();
            let idx = SubspaceIndex::new(q, n, k, &Guard::default()).unwrap();
            assert_eq!(idx.len() as u128, subspace_count(q, n, k));
            let mut seen = BTreeSet::new();
            let mut rows = vec![vec![FieldElem::ZERO; n]; k];
            for i in 0..idx.len() {
                idx.at(i, &mut rows);
                assert_eq!(linalg::rank(&f, &rows), k);
                let mut r = rows.clone();
                linalg::rref(&f, &mut r);
                assert_eq!(r, rows, "basis must already be reduced");
                assert!(seen.insert(tuple(&rows.concat())));
            }
            let vectors: Vec<Vec<FieldElem>> = (0..q.pow(n as u32))
                .map(|mut v| {
                    (0..n)
                        .map(|_| {
                            let d = v % q;
                            v /= q;
                            FieldElem(d as u32)
                        })
                        .collect()
                })
                .collect();
            let mut brute = BTreeSet::new();
            let mut pick = vec![0usize; k];
            'outer: loop {
                let rows: Vec<Vec<FieldElem>> = pick.iter().map(|&i| vectors[i].clone()).collect();
                if linalg::rank(&f, &rows) == k {
                    let mut r = rows;
                    linalg::rref(&f, &mut r);
                    brute.insert(tuple(&r.concat()));
                }
                for j in 0..k {
                    pick[j] += 1;
                    if pick[j] < vectors.len() {
                        continue 'outer;
                    }
                    pick[j] = 0;
                }
                break;
            }
            assert_eq!(brute, seen);
        }
    }

    #[test]
    fn guard_rejects_large_sweeps() {
        let g = Guard::new(10);
        assert!(g.check(10).is_ok());
        assert!(matches!(g.check(11), Err(Error::GuardExceeded { needed: 11, limit: 10 })));
    }

    #[test]
    fn find_first_is_the_minimum() {
        for _ in 0..5 {
            let r = find_first(100_000, || (), |_, i| i % 7919 == 7918 || i == 50_000);
            assert_eq!(r, Some(7918));
        }
        assert_eq!(find_first(10, || (), |_, _| false), None);
    }
}
