//! GF(q^N) viewed as an N-dimensional vector space over GF(q).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::{FieldCtx, FieldElem};
use super::linalg;
use crate::error::{Error, Result};

/// A field `GF(q^N)` together with a fixed copy of `GF(q)` inside it.
///
/// Coordinates over `GF(q)` are taken in the basis `1, G, ..., G^(N-1)` where
/// `G` is the generator (residue class of the indeterminate) of the big field.
pub struct Extension {
    base: Arc<FieldCtx>,
    field: Arc<FieldCtx>,
    n: usize,
    q: u64,
    embed: Vec<FieldElem>,
    unembed: HashMap<FieldElem, FieldElem>,
    /// q^i mod (Q - 1) for 0 <= i < n.
    qpow: Vec<u64>,
    basis: Vec<FieldElem>,
    /// Inverse of the GF(p)-matrix whose columns are embed(y^l) G^j; only
    /// needed when q is not prime.
    coord_inv: Option<Vec<Vec<u32>>>,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) over GF({})", self.q, self.n, self.q)
    }
}

impl PartialEq for Extension {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.field == other.field && self.embed == other.embed
    }
}

impl Eq for Extension {}

impl Extension {
    /// `embed[c]` is the image of the base element with encoding `c`.
    pub fn new(base: Arc<FieldCtx>, field: Arc<FieldCtx>, embed: Vec<FieldElem>) -> Result<Self> {
        if base.characteristic() != field.characteristic()
            || !field.degree().is_multiple_of(base.degree())
            || embed.len() != base.order() as usize
        {
            return Err(Error::ContextMismatch);
        }
        let n = (field.degree() / base.degree()) as usize;
        let q = base.order() as u64;
        let q1 = (field.order() - 1) as u64;
        let mut qpow = Vec::with_capacity(n);
        let mut cur = 1u64 % q1.max(1);
        for _ in 0..n {
            qpow.push(cur);
            cur = (cur as u128 * q as u128 % q1.max(1) as u128) as u64;
        }
        let g = field.generator();
        let basis: Vec<FieldElem> = (0..n).map(|j| field.pow(g, j as u64)).collect();
        let unembed = embed.iter().enumerate().map(|(c, &e)| (e, FieldElem(c as u32))).collect();
        let mut ext = Extension { base, field, n, q, embed, unembed, qpow, basis, coord_inv: None };
        ext.verify_embedding()?;
        if ext.base.degree() > 1 {
            ext.coord_inv = Some(ext.coordinate_matrix()?);
        }
        Ok(ext)
    }

    fn verify_embedding(&self) -> Result<()> {
        let b = &self.base;
        let f = &self.field;
        let y = b.generator();
        let ey = self.embed(y);
        for c in b.elements() {
            let lhs = self.embed(b.mul(c, y));
            if lhs != f.mul(self.embed(c), ey) {
                return Err(Error::Internal("embedding is not multiplicative".into()));
            }
            if f.pow(self.embed(c), self.q) != self.embed(c) {
                return Err(Error::Internal("embedded base element not fixed by x^q".into()));
            }
        }
        Ok(())
    }

    fn coordinate_matrix(&self) -> Result<Vec<Vec<u32>>> {
        let h = self.base.degree() as usize;
        let dim = h * self.n;
        let prime = FieldCtx::new(self.field.characteristic() as u64, 1, u64::MAX)?;
        // column (j, l) = digits(embed(y^l) * G^j)
        let y = self.base.generator();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..self.n {
            for l in 0..h {
                let v = self.field.mul(self.embed(self.base.pow(y, l as u64)), self.basis[j]);
                cols.push(self.field.digits(v));
            }
        }
        // augmented [A | I] with A[r][c] = cols[c][r]
        let mut aug: Vec<Vec<FieldElem>> = (0..dim)
            .map(|r| {
                let mut row: Vec<FieldElem> = (0..dim).map(|c| FieldElem(cols[c][r])).collect();
                row.extend((0..dim).map(|c| if c == r { FieldElem::ONE } else { FieldElem::ZERO }));
                row
            })
            .collect();
        let pivots = linalg::rref(&prime, &mut aug);
        if pivots.len() != dim || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return Err(Error::Internal("GF(q)-basis is degenerate".into()));
        }
        Ok(aug.into_iter().map(|row| row[dim..].iter().map(|e| e.0).collect()).collect())
    }

    /// GF(q).
    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    /// GF(q^N).
    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    /// Degree N over GF(q).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> u64 {
        self.field.order() as u64
    }

    #[inline]
    pub fn embed(&self, c: FieldElem) -> FieldElem {
        self.embed[c.0 as usize]
    }

    pub fn embedding_table(&self) -> &[FieldElem] {
        &self.embed
    }

    /// The base-field element equal to `x`, if `x` lies in GF(q).
    pub fn to_base(&self, x: FieldElem) -> Option<FieldElem> {
        self.unembed.get(&x).copied()
    }

    /// x^(q^i), with `i` reduced mod N.
    #[inline]
    pub fn frobenius(&self, x: FieldElem, i: i64) -> FieldElem {
        let i = i.rem_euclid(self.n as i64) as usize;
        if i == 0 {
            return x;
        }
        self.field.exp_log_scaled(x, self.qpow[i])
    }

    pub fn trace(&self, x: FieldElem) -> Result<FieldElem> {
        let t = self.field.sum((0..self.n).map(|i| self.frobenius(x, i as i64)));
        self.to_base(t).ok_or_else(|| Error::Internal("trace left the base field".into()))
    }

    pub fn norm(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Ok(FieldElem::ZERO);
        }
        let e = (self.order() - 1) / (self.q - 1);
        self.to_base(self.field.pow(x, e)).ok_or_else(|| Error::Internal("norm left the base field".into()))
    }

    /// The fixed GF(q)-basis 1, G, ..., G^(N-1).
    pub fn basis(&self) -> &[FieldElem] {
        &self.basis
    }

    /// Coordinates of `x` over GF(q) in [`Self::basis`].
    pub fn to_coords(&self, x: FieldElem) -> Vec<FieldElem> {
        let mut out = vec![FieldElem::ZERO; self.n];
        self.to_coords_into(x, &mut out);
        out
    }

    pub fn to_coords_into(&self, x: FieldElem, out: &mut [FieldElem]) {
        let p = self.field.characteristic();
        match &self.coord_inv {
            None => {
                let mut v = x.0;
                for o in out.iter_mut() {
                    *o = FieldElem(v % p);
                    v /= p;
                }
            }
            Some(inv) => {
                let d = self.field.digits(x);
                let h = self.base.degree() as usize;
                for (j, o) in out.iter_mut().enumerate() {
                    let mut enc = 0u32;
                    for l in (0..h).rev() {
                        let row = &inv[j * h + l];
                        let mut s = 0u64;
                        for (a, b) in row.iter().zip(&d) {
                            s += *a as u64 * *b as u64;
                        }
                        enc = enc * p + (s % p as u64) as u32;
                    }
                    *o = FieldElem(enc);
                }
            }
        }
    }

    pub fn from_coords(&self, c: &[FieldElem]) -> FieldElem {
        if self.coord_inv.is_none() {
            return self.base_digits_to_elem(c);
        }
        self.field.sum(c.iter().zip(&self.basis).map(|(&ci, &b)| self.field.mul(self.embed(ci), b)))
    }

    fn base_digits_to_elem(&self, c: &[FieldElem]) -> FieldElem {
        let p = self.field.characteristic();
        let mut v = 0u32;
        for d in c.iter().rev() {
            v = v * p + d.0;
        }
        FieldElem(v)
    }

    /// Dimension over GF(q) of the span of `elems`.
    pub fn fq_rank(&self, elems: &[FieldElem]) -> usize {
        let rows: Vec<Vec<FieldElem>> = elems.iter().map(|&x| self.to_coords(x)).collect();
        linalg::rank(&self.base, &rows)
    }

    /// Product c * x for c in GF(q), x in GF(q^N).
    #[inline]
    pub fn scale(&self, c: FieldElem, x: FieldElem) -> FieldElem {
        self.field.mul(self.embed(c), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::tower::FieldTower;

    #[test]
    fn coordinates_round_trip_over_nonprime_base() {
        let t = FieldTower::new(2, 2, 3, 1).unwrap();
        let ext = t.ext();
        assert_eq!(ext.n(), 3);
        for x in ext.field().elements() {
            let c = ext.to_coords(x);
            assert_eq!(ext.from_coords(&c), x);
        }
    }

    #[test]
    fn coordinates_are_gf_q_linear() {
        let t = FieldTower::new(3, 2, 2, 1).unwrap();
        let ext = t.ext();
        let f = ext.field();
        let b = ext.base();
        for x in f.elements().step_by(7) {
            for c in b.elements() {
                let lhs = ext.to_coords(ext.scale(c, x));
                let rhs: Vec<FieldElem> = ext.to_coords(x).iter().map(|&v| b.mul(c, v)).collect();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
