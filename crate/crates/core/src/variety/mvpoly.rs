//! Sparse multivariate polynomials over a finite field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographically from the first variable).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone)]
pub struct MvPoly {
    ctx: Arc<FieldCtx>,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl PartialEq for MvPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms && *self.ctx == *other.ctx
    }
}

impl Eq for MvPoly {}

impl fmt::Debug for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MvPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| if e == 1 { format!("X{}", v + 1) } else { format!("X{}^{e}", v + 1) })
                    .collect();
            match (vars.is_empty(), *c == FieldElem::ONE) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Terms as `[[exponents...], coefficient]`, leading term first.
impl Serialize for MvPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in self.terms.iter().rev() {
            seq.serialize_element(&(&m.0, c.0))?;
        }
        seq.end()
    }
}

impl MvPoly {
    pub fn zero(ctx: Arc<FieldCtx>, nvars: usize) -> Self {
        MvPoly { ctx, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: Arc<FieldCtx>, nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(ctx, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(ctx: Arc<FieldCtx>, nvars: usize) -> Self {
        Self::constant(ctx, nvars, FieldElem::ONE)
    }

    /// c · X_var^e.
    pub fn monomial(ctx: Arc<FieldCtx>, nvars: usize, var: usize, e: u32, c: FieldElem) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = e;
        let mut p = Self::zero(ctx, nvars);
        p.add_term(exps, c);
        p
    }

    pub fn var(ctx: Arc<FieldCtx>, nvars: usize, var: usize) -> Self {
        Self::monomial(ctx, nvars, var, 1, FieldElem::ONE)
    }

    /// Σ coeffs[i] X_i.
    pub fn linear_form(ctx: Arc<FieldCtx>, coeffs: &[FieldElem]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(ctx, n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn from_terms(ctx: Arc<FieldCtx>, nvars: usize, terms: &[(Vec<u32>, FieldElem)]) -> Result<Self> {
        let mut p = Self::zero(ctx, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Arity { expected: nvars, got: e.len() });
            }
            p.ctx.check(*c)?;
            p.add_term(e.clone(), *c);
        }
        Ok(p)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> FieldElem {
        self.terms.get(&Monomial(exps.to_vec())).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Smallest total degree of a stored term.
    pub fn low_degree(&self) -> Option<u64> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let key = Monomial(exps);
        let sum = match self.terms.get(&key) {
            Some(&old) => self.ctx.add(old, c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    fn compatible(&self, other: &MvPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Arity { expected: self.nvars, got: other.nvars });
        }
        if *self.ctx != *other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MvPoly) -> Result<MvPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.0.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MvPoly) -> Result<MvPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MvPoly {
        self.map_coeffs(|c| self.ctx.neg(c))
    }

    pub fn scale(&self, c: FieldElem) -> MvPoly {
        if c.is_zero() {
            return MvPoly::zero(self.ctx.clone(), self.nvars);
        }
        self.map_coeffs(|a| self.ctx.mul(a, c))
    }

    fn map_coeffs(&self, f: impl Fn(FieldElem) -> FieldElem) -> MvPoly {
        MvPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f(c))).collect(),
        }
    }

    pub fn mul(&self, other: &MvPoly) -> Result<MvPoly> {
        self.compatible(other)?;
        let mut out = MvPoly::zero(self.ctx.clone(), self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                out.add_term(e, self.ctx.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: point.len() });
        }
        let f = &self.ctx;
        Ok(f.sum(self.terms.iter().map(|(m, &c)| {
            m.0.iter().zip(point).fold(c, |acc, (&e, &x)| if e == 0 { acc } else { f.mul(acc, f.pow(x, e as u64)) })
        })))
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u64) -> MvPoly {
        MvPoly {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.low_degree()
    }

    /// Replaces X_var by the constant `value`; the variable stays in the
    /// arity with exponent 0.
    pub fn substitute(&self, var: usize, value: FieldElem) -> MvPoly {
        let mut out = MvPoly::zero(self.ctx.clone(), self.nvars);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            let p = std::mem::take(&mut e[var]);
            out.add_term(e, self.ctx.mul(c, self.ctx.pow(value, p as u64)));
        }
        out
    }

    /// Keeps only the listed variables, in the given order. Every dropped
    /// variable must have exponent 0 in every term.
    pub fn select_vars(&self, keep: &[usize]) -> Result<MvPoly> {
        let mut out = MvPoly::zero(self.ctx.clone(), keep.len());
        for (m, &c) in &self.terms {
            let dropped = (0..self.nvars).filter(|v| !keep.contains(v)).any(|v| m.0[v] != 0);
            if dropped {
                return Err(Error::InvalidParameter("cannot drop a variable that occurs".into()));
            }
            out.add_term(keep.iter().map(|&v| m.0[v]).collect(), c);
        }
        Ok(out)
    }

    /// Formal partial derivative; exponents divisible by p vanish.
    pub fn derivative(&self, var: usize) -> MvPoly {
        let p = self.ctx.characteristic() as u64;
        let mut out = MvPoly::zero(self.ctx.clone(), self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var] as u64;
            if e.is_multiple_of(p) {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(exps, self.ctx.mul(c, self.ctx.from_int((e % p) as i64)));
        }
        out
    }

    /// F(X + P): every variable shifted by the matching coordinate.
    pub fn translate(&self, point: &[FieldElem]) -> Result<MvPoly> {
        if point.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: point.len() });
        }
        let f = &self.ctx;
        let p = f.characteristic() as u64;
        let mut out = MvPoly::zero(self.ctx.clone(), self.nvars);
        for (m, &c) in &self.terms {
            // expand Π (X_v + P_v)^(e_v) one variable at a time
            let mut partial: Vec<(Vec<u32>, FieldElem)> = vec![(vec![0; self.nvars], c)];
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let shift = point[v];
                let expansion: Vec<(u64, FieldElem)> = lucas_binomials(e as u64, p)
                    .into_iter()
                    .filter_map(|(i, b)| {
                        let w = if i == e as u64 {
                            f.from_int(b as i64)
                        } else if shift.is_zero() {
                            return None;
                        } else {
                            f.mul(f.from_int(b as i64), f.pow(shift, e as u64 - i))
                        };
                        Some((i, w))
                    })
                    .collect();
                let mut next = Vec::with_capacity(partial.len() * expansion.len());
                for (exps, coef) in &partial {
                    for &(i, w) in &expansion {
                        let mut ex = exps.clone();
                        ex[v] = i as u32;
                        next.push((ex, f.mul(*coef, w)));
                    }
                }
                partial = next;
            }
            for (ex, coef) in partial {
                out.add_term(ex, coef);
            }
        }
        Ok(out)
    }

    /// T^d F(X_1/T, ..., X_k/T) with T appended as the last variable.
    pub fn homogenize(&self) -> MvPoly {
        let d = self.degree().unwrap_or(0);
        let mut out = MvPoly::zero(self.ctx.clone(), self.nvars + 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.push((d - m.degree()) as u32);
            out.add_term(e, c);
        }
        out
    }

    /// Exact quotient by the linear form Σ a_i X_i, by synthetic division in
    /// the last variable that occurs in the form.
    pub fn div_linear(&self, form: &[FieldElem]) -> Result<MvPoly> {
        if form.len() != self.nvars {
            return Err(Error::Arity { expected: self.nvars, got: form.len() });
        }
        let f = &self.ctx;
        let j = form
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidParameter("zero linear form".into()))?;
        let inv = f.inv(form[j]).unwrap();
        // L = a_j (X_j - s) with s = -(Σ_{i≠j} a_i X_i) / a_j
        let s_coeffs: Vec<FieldElem> = form
            .iter()
            .enumerate()
            .map(|(i, &a)| if i == j { FieldElem::ZERO } else { f.neg(f.mul(a, inv)) })
            .collect();
        let s = MvPoly::linear_form(self.ctx.clone(), &s_coeffs);
        // slices c_e(X') by the exponent of X_j
        let top = self.terms.keys().map(|m| m.0[j]).max().unwrap_or(0) as usize;
        let mut slices = vec![MvPoly::zero(self.ctx.clone(), self.nvars); top + 1];
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            let ej = std::mem::take(&mut e[j]) as usize;
            slices[ej].add_term(e, c);
        }
        if top == 0 {
            return if self.is_zero() { Ok(self.clone()) } else { Err(Error::NonzeroRemainder) };
        }
        // b_{top-1} = c_top, b_{e-1} = c_e + s b_e, remainder c_0 + s b_0
        let mut quotient = MvPoly::zero(self.ctx.clone(), self.nvars);
        let mut b = slices[top].clone();
        for e in (0..top).rev() {
            for (m, &c) in &b.terms {
                let mut ex = m.0.clone();
                ex[j] = e as u32;
                quotient.add_term(ex, f.mul(c, inv));
            }
            b = slices[e].add(&s.mul(&b)?)?;
        }
        if !b.is_zero() {
            return Err(Error::NonzeroRemainder);
        }
        Ok(quotient)
    }
}

/// Pairs (i, C(e, i) mod p) with C(e, i) ≢ 0 mod p, via Lucas' theorem.
pub(crate) fn lucas_binomials(e: u64, p: u64) -> Vec<(u64, u64)> {
    let mut digits = Vec::new();
    let mut v = e;
    while v > 0 {
        digits.push(v % p);
        v /= p;
    }
    let mut out = vec![(0u64, 1u64)];
    let mut place = 1u64;
    for &d in &digits {
        let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
        for &(i, c) in &out {
            for t in 0..=d {
                let b = small_binomial(d, t) % p;
                if b != 0 {
                    next.push((i + t * place, c * b % p));
                }
            }
        }
        out = next;
        place *= p;
    }
    out.sort_unstable();
    out
}

fn small_binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::DEFAULT_MAX_FIELD_ORDER;

    fn ctx(p: u64, e: u32) -> Arc<FieldCtx> {
        Arc::new(FieldCtx::new(p, e, DEFAULT_MAX_FIELD_ORDER).unwrap())
    }

    #[test]
    fn lucas_matches_pascal_triangle() {
        for p in [2u64, 3, 5] {
            for e in 0..40u64 {
                let mut row = vec![1u64];
                for _ in 0..e {
                    let mut next = vec![1u64; row.len() + 1];
                    for i in 1..row.len() {
                        next[i] = (row[i - 1] + row[i]) % p;
                    }
                    row = next;
                }
                let expected: Vec<(u64, u64)> =
                    row.iter().enumerate().filter(|(_, &c)| c % p != 0).map(|(i, &c)| (i as u64, c % p)).collect();
                assert_eq!(lucas_binomials(e, p), expected, "p={p} e={e}");
            }
        }
    }

    #[test]
    fn graded_lex_order_and_serialization() {
        let f = ctx(2, 2);
        let p = MvPoly::from_terms(
            f.clone(),
            2,
            &[(vec![0, 2], FieldElem(1)), (vec![1, 1], FieldElem(3)), (vec![3, 0], FieldElem(2))],
        )
        .unwrap();
        let json = serde_json_like(&p);
        assert_eq!(json, "[[3,0],2] [[1,1],3] [[0,2],1]");
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.low_degree(), Some(2));
    }

    fn serde_json_like(p: &MvPoly) -> String {
        p.terms()
            .rev()
            .map(|(m, c)| format!("[[{}],{}]", m.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","), c.0))
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn division_by_linear_forms_inverts_multiplication() {
        let f = ctx(3, 2);
        let x = MvPoly::var(f.clone(), 3, 0);
        let y = MvPoly::var(f.clone(), 3, 1);
        let z = MvPoly::var(f.clone(), 3, 2);
        let g = x.mul(&y).unwrap().add(&z.mul(&z).unwrap().scale(FieldElem(5))).unwrap();
        let form = [FieldElem(2), FieldElem(0), FieldElem(7)];
        let l = MvPoly::linear_form(f.clone(), &form);
        let prod = g.mul(&l).unwrap();
        assert_eq!(prod.div_linear(&form).unwrap(), g);
        assert_eq!(g.div_linear(&form), Err(Error::NonzeroRemainder));
    }

    #[test]
    fn translation_and_derivatives() {
        let f = ctx(2, 4);
        // (X + 1)^3 = X^3 + X^2 + X + 1 in characteristic 2
        let x3 = MvPoly::monomial(f.clone(), 1, 0, 3, FieldElem::ONE);
        let t = x3.translate(&[FieldElem::ONE]).unwrap();
        assert_eq!(t.num_terms(), 4);
        let a = FieldElem(9);
        let h = MvPoly::from_terms(
            f.clone(),
            2,
            &[(vec![2, 1], FieldElem(3)), (vec![0, 3], FieldElem(5)), (vec![1, 0], FieldElem(1))],
        )
        .unwrap();
        let shifted = h.translate(&[a, FieldElem(4)]).unwrap();
        for u in [FieldElem(0), FieldElem(7), FieldElem(15)] {
            for v in [FieldElem(1), FieldElem(11)] {
                let lhs = shifted.evaluate(&[u, v]).unwrap();
                let rhs = h.evaluate(&[f.add(u, a), f.add(v, FieldElem(4))]).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // d/dX1 of 3·X1^2·X2 vanishes in characteristic 2
        let d = h.derivative(0);
        assert_eq!(d, MvPoly::constant(f.clone(), 2, FieldElem::ONE));
    }

    #[test]
    fn homogenization_appends_a_variable() {
        let f = ctx(3, 1);
        let h = MvPoly::from_terms(f.clone(), 1, &[(vec![2], FieldElem(1)), (vec![0], FieldElem(2))]).unwrap();
        let hh = h.homogenize();
        assert!(hh.is_homogeneous());
        assert_eq!(hh.coeff(&[0, 2]), FieldElem(2));
        assert_eq!(hh.substitute(1, FieldElem::ONE).select_vars(&[0]).unwrap(), h);
    }
}
