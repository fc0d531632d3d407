//! Linearized polynomials Σ a_i x^(q^i) over GF(q^n), taken modulo x^(q^n) - x.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::linalg::{self, Matrix};
use crate::gf::{Extension, FieldElem, FieldTower};

#[derive(Clone)]
pub struct LinPoly {
    space: Arc<Extension>,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for LinPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space)
    }
}

impl Eq for LinPoly {}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a != FieldElem::ONE {
                write!(f, "{a}*")?;
            }
            match i {
                0 => write!(f, "x")?,
                1 => write!(f, "x^q")?,
                _ => write!(f, "x^q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl LinPoly {
    pub fn new(space: Arc<Extension>, coeffs: Vec<FieldElem>) -> Result<Self> {
        if coeffs.len() != space.n() {
            return Err(Error::Arity { expected: space.n(), got: coeffs.len() });
        }
        for &c in &coeffs {
            space.field().check(c)?;
        }
        Ok(LinPoly { space, coeffs })
    }

    pub(crate) fn from_vec_unchecked(space: Arc<Extension>, coeffs: Vec<FieldElem>) -> Self {
        debug_assert_eq!(coeffs.len(), space.n());
        LinPoly { space, coeffs }
    }

    /// Builds Σ a x^(q^i) from sparse terms; exponents are reduced mod n and
    /// repeated exponents accumulate.
    pub fn from_terms(space: Arc<Extension>, terms: &[(i64, FieldElem)]) -> Result<Self> {
        let n = space.n();
        let mut coeffs = vec![FieldElem::ZERO; n];
        for &(i, a) in terms {
            space.field().check(a)?;
            let i = i.rem_euclid(n as i64) as usize;
            coeffs[i] = space.field().add(coeffs[i], a);
        }
        Ok(LinPoly { space, coeffs })
    }

    pub fn zero(space: Arc<Extension>) -> Self {
        let n = space.n();
        LinPoly { space, coeffs: vec![FieldElem::ZERO; n] }
    }

    /// The identity map x.
    pub fn identity(space: Arc<Extension>) -> Self {
        Self::monomial(space, 0, FieldElem::ONE)
    }

    /// a x^(q^i), i reduced mod n.
    pub fn monomial(space: Arc<Extension>, i: i64, a: FieldElem) -> Self {
        let mut p = Self::zero(space);
        let n = p.n() as i64;
        p.coeffs[i.rem_euclid(n) as usize] = a;
        p
    }

    pub fn space(&self) -> &Arc<Extension> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn same_space(&self, other: &LinPoly) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn evaluate(&self, x: FieldElem) -> FieldElem {
        let s = &self.space;
        s.field().sum(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, &a)| s.field().mul(a, s.frobenius(x, i as i64))),
        )
    }

    pub fn add(&self, other: &LinPoly) -> Result<LinPoly> {
        self.same_space(other)?;
        let f = self.space.field();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(LinPoly { space: self.space.clone(), coeffs })
    }

    pub fn sub(&self, other: &LinPoly) -> Result<LinPoly> {
        self.same_space(other)?;
        let f = self.space.field();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(LinPoly { space: self.space.clone(), coeffs })
    }

    /// λ·f for λ ∈ GF(q^n) (left multiplication by the scalar map λx).
    pub fn scale(&self, lambda: FieldElem) -> LinPoly {
        let f = self.space.field();
        let coeffs = self.coeffs.iter().map(|&a| f.mul(lambda, a)).collect();
        LinPoly { space: self.space.clone(), coeffs }
    }

    /// f ∘ g, reduced modulo x^(q^n) - x.
    pub fn compose(&self, g: &LinPoly) -> Result<LinPoly> {
        self.same_space(g)?;
        let s = &self.space;
        let f = s.field();
        let n = self.n();
        let mut out = vec![FieldElem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let l = (i + j) % n;
                out[l] = f.add(out[l], f.mul(a, s.frobenius(b, i as i64)));
            }
        }
        Ok(LinPoly { space: self.space.clone(), coeffs: out })
    }

    /// Applies the field automorphism x ↦ x^(p^r) to every coefficient.
    pub fn frob_coeffs(&self, r: u32) -> LinPoly {
        let f = self.space.field();
        let coeffs = self.coeffs.iter().map(|&a| f.frobenius_p(a, r)).collect();
        LinPoly { space: self.space.clone(), coeffs }
    }

    /// Matrix over GF(q) of y ↦ f(y) in the basis of [`Extension::basis`];
    /// column j holds the coordinates of f(G^j).
    pub fn as_matrix(&self) -> Matrix {
        let n = self.n();
        let cols: Vec<Vec<FieldElem>> =
            self.space.basis().iter().map(|&b| self.space.to_coords(self.evaluate(b))).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.space.base(), &self.as_matrix())
    }

    /// dim over GF(q) of the kernel of f on GF(q^n).
    pub fn kernel_dim(&self) -> usize {
        self.n() - self.rank()
    }

    /// A GF(q)-basis of ker f, as elements of GF(q^n).
    pub fn kernel_basis(&self) -> Vec<FieldElem> {
        let n = self.n();
        linalg::null_space(self.space.base(), &self.as_matrix(), n).iter().map(|v| self.space.from_coords(v)).collect()
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n()
    }

    /// (mindeg_q, deg_q).
    pub fn qdeg_bounds(&self) -> Result<(usize, usize)> {
        let lo = self.coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroPolynomial)?;
        let hi = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        Ok((lo, hi))
    }

    pub fn qdeg(&self) -> Result<usize> {
        self.qdeg_bounds().map(|b| b.1)
    }

    pub fn mindeg(&self) -> Result<usize> {
        self.qdeg_bounds().map(|b| b.0)
    }

    /// a_0 ≠ 0.
    pub fn is_separable(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Leading coefficient equals 1 (false for the zero polynomial).
    pub fn is_monic(&self) -> bool {
        matches!(self.qdeg(), Ok(d) if self.coeffs[d] == FieldElem::ONE)
    }

    /// The exponent i if f = a x^(q^i).
    pub fn monomial_exponent(&self) -> Option<usize> {
        match self.qdeg_bounds() {
            Ok((lo, hi)) if lo == hi => Some(lo),
            _ => None,
        }
    }

    /// The same polynomial over the top level GF(q^(nm)) of `tower`.
    pub fn lift(&self, tower: &FieldTower) -> Result<LinPoly> {
        if *tower.ext().as_ref() != *self.space {
            return Err(Error::ContextMismatch);
        }
        let top = tower.top().clone();
        let mut coeffs = vec![FieldElem::ZERO; top.n()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[i] = tower.embed_mid(a);
        }
        Ok(LinPoly { space: top, coeffs })
    }

    /// The unique linearized polynomial taking the value `values[j]` at the
    /// j-th basis element G^j (Moore-matrix interpolation).
    pub fn interpolate(space: Arc<Extension>, values: &[FieldElem]) -> Result<LinPoly> {
        let n = space.n();
        if values.len() != n {
            return Err(Error::Arity { expected: n, got: values.len() });
        }
        let f = space.field();
        // rows: Σ_i c_i B_j^(q^i) = v_j
        let mut aug: Matrix = space
            .basis()
            .iter()
            .zip(values)
            .map(|(&b, &v)| {
                let mut row: Vec<FieldElem> = (0..n).map(|i| space.frobenius(b, i as i64)).collect();
                row.push(v);
                row
            })
            .collect();
        let pivots = linalg::rref(f, &mut aug);
        if pivots.len() != n || pivots[n - 1] != n - 1 {
            return Err(Error::Internal("Moore matrix of a basis is singular".into()));
        }
        let coeffs = aug.iter().map(|row| row[n]).collect();
        Ok(LinPoly { space, coeffs })
    }

    /// Compositional inverse modulo x^(q^n) - x.
    pub fn inverse(&self) -> Result<LinPoly> {
        let n = self.n();
        let base = self.space.base();
        let m = self.as_matrix();
        let mut aug: Matrix = m
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut row = row.clone();
                row.extend((0..n).map(|c| if c == r { FieldElem::ONE } else { FieldElem::ZERO }));
                row
            })
            .collect();
        let pivots = linalg::rref(base, &mut aug);
        if pivots.len() != n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        // column j of the inverse matrix is the image of G^j
        let values: Vec<FieldElem> = (0..n)
            .map(|j| {
                let col: Vec<FieldElem> = (0..n).map(|r| aug[r][n + j]).collect();
                self.space.from_coords(&col)
            })
            .collect();
        Self::interpolate(self.space.clone(), &values)
    }

    /// Uniformly random coefficients.
    pub fn random<R: Rng>(space: Arc<Extension>, rng: &mut R) -> LinPoly {
        let order = space.order() as u32;
        let coeffs = (0..space.n()).map(|_| FieldElem(rng.gen_range(0..order))).collect();
        LinPoly { space, coeffs }
    }

    /// A random invertible polynomial, deterministic in `seed`.
    pub fn random_invertible(space: Arc<Extension>, seed: u64) -> LinPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_invertible_with(space, &mut rng)
    }

    pub fn random_invertible_with<R: Rng>(space: Arc<Extension>, rng: &mut R) -> LinPoly {
        loop {
            let f = Self::random(space.clone(), rng);
            if f.is_invertible() {
                return f;
            }
        }
    }
}

/// Serializes as `{"coeffs": [...]}` in wire encoding.
impl serde::Serialize for LinPoly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("LinPoly", 1)?;
        st.serialize_field("coeffs", self.coeffs())?;
        st.end()
    }
}
