//! Delsarte duality and idealisers, both solved as F_q-linear systems.

use serde::Serialize;

use super::RankMetricCode;
use crate::error::{Error, Result};
use crate::gf::linalg::{self, Matrix};
use crate::gf::FieldElem;
use crate::linpoly::LinPoly;

/// Result of [`delsarte_dual`]; a code of full dimension has the zero dual.
#[derive(Clone, Debug)]
pub enum Dual {
    Code(RankMetricCode),
    Zero { n: usize },
}

impl Dual {
    pub fn code(&self) -> Option<&RankMetricCode> {
        match self {
            Dual::Code(c) => Some(c),
            Dual::Zero { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Dual::Zero { .. })
    }
}

/// b(f, g) = Tr(Σ a_i b_i).
pub fn bilinear(f: &LinPoly, g: &LinPoly) -> Result<FieldElem> {
    let s = f.space();
    if *g.space().as_ref() != **s {
        return Err(Error::ContextMismatch);
    }
    let fld = s.field();
    let dot = fld.sum(f.coeffs().iter().zip(g.coeffs()).map(|(&a, &b)| fld.mul(a, b)));
    s.trace(dot)
}

/// {g : b(f, g) = 0 for all f ∈ C}.
///
/// The orthogonality conditions are written over F_q in the n^2 coordinates
/// of g; an F_{q^n}-basis is then extracted greedily from the F_q-solution
/// space and returned in reduced echelon form.
pub fn delsarte_dual(c: &RankMetricCode) -> Result<Dual> {
    let s = c.space().clone();
    let n = c.n();
    let k = c.k();
    if k == n {
        return Ok(Dual::Zero { n });
    }
    let fld = s.field();
    let basis = s.basis().to_vec();
    // Unknown (i, l): the l-th F_q-coordinate of b_i. For the codeword λ f
    // with λ = G^r, the condition reads Σ_{i,l} Tr(G^r a_i G^l) x_{i,l} = 0.
    let mut rows: Matrix = Vec::with_capacity(k * n);
    for f in c.basis() {
        for &lambda in &basis {
            let row = (0..n)
                .flat_map(|i| {
                    let a = fld.mul(lambda, f.coeff(i));
                    basis.iter().map(move |&g| (a, g))
                })
                .map(|(a, g)| s.trace(fld.mul(a, g)))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
    }
    let solutions = linalg::null_space(s.base(), &rows, n * n);
    if solutions.len() != n * (n - k) {
        return Err(Error::Internal(format!(
            "dual solution space has F_q-dimension {}, expected {}",
            solutions.len(),
            n * (n - k)
        )));
    }
    let mut chosen: Vec<Vec<FieldElem>> = Vec::new();
    for v in &solutions {
        let g: Vec<FieldElem> = (0..n).map(|i| s.from_coords(&v[i * n..(i + 1) * n])).collect();
        let mut trial = chosen.clone();
        trial.push(g.clone());
        if linalg::rank(fld, &trial) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == n - k {
            break;
        }
    }
    if chosen.len() != n - k {
        return Err(Error::Internal("dual is not F_{q^n}-linear".into()));
    }
    linalg::rref(fld, &mut chosen);
    let polys: Vec<LinPoly> = chosen.into_iter().map(|r| LinPoly::from_vec_unchecked(s.clone(), r)).collect();
    for g in &polys {
        for f in c.basis() {
            let dot = fld.sum(f.coeffs().iter().zip(g.coeffs()).map(|(&a, &b)| fld.mul(a, b)));
            if !dot.is_zero() {
                return Err(Error::Internal("dual basis is not orthogonal".into()));
            }
        }
    }
    Ok(Dual::Code(RankMetricCode::new(polys)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Idealiser {
    /// Dimension over F_q.
    pub dim: usize,
    pub basis: Vec<LinPoly>,
}

/// Rows h with Σ_l h_l c_l = 0 for every codeword coefficient vector c.
fn parity_check(c: &RankMetricCode) -> Matrix {
    let rows: Matrix = c.basis().iter().map(|f| f.coeffs().to_vec()).collect();
    linalg::null_space(c.space().field(), &rows, c.n())
}

fn idealiser(c: &RankMetricCode, left: bool) -> Result<Idealiser> {
    let s = c.space().clone();
    let n = c.n();
    let fld = s.field();
    let h = parity_check(c);
    let unknown = |idx: usize| {
        let (i, l) = (idx / n, idx % n);
        LinPoly::monomial(s.clone(), i as i64, s.basis()[l])
    };
    // Column idx of the system: F_q-coordinates of H·(φ∘f) (or H·(f∘φ)) for
    // every basis f, where φ is the idx-th F_q-basis element of L_{n,q}.
    let mut cols: Vec<Vec<FieldElem>> = Vec::with_capacity(n * n);
    for idx in 0..n * n {
        let phi = unknown(idx);
        let mut col = Vec::new();
        for f in c.basis() {
            let comp = if left { phi.compose(f)? } else { f.compose(&phi)? };
            for row in &h {
                let v = fld.sum(row.iter().zip(comp.coeffs()).map(|(&a, &b)| fld.mul(a, b)));
                col.extend(s.to_coords(v));
            }
        }
        cols.push(col);
    }
    let nrows = cols.first().map_or(0, |c| c.len());
    let system: Matrix = (0..nrows).map(|r| cols.iter().map(|col| col[r]).collect()).collect();
    let kernel = if nrows == 0 {
        (0..n * n)
            .map(|i| {
                let mut v = vec![FieldElem::ZERO; n * n];
                v[i] = FieldElem::ONE;
                v
            })
            .collect()
    } else {
        linalg::null_space(s.base(), &system, n * n)
    };
    let basis = kernel
        .iter()
        .map(|v| {
            let coeffs = (0..n).map(|i| s.from_coords(&v[i * n..(i + 1) * n])).collect();
            LinPoly::from_vec_unchecked(s.clone(), coeffs)
        })
        .collect::<Vec<_>>();
    for phi in &basis {
        for f in c.basis() {
            let comp = if left { phi.compose(f)? } else { f.compose(phi)? };
            if !c.contains(&comp) {
                return Err(Error::Internal("idealiser element leaves the code".into()));
            }
        }
    }
    Ok(Idealiser { dim: basis.len(), basis })
}

/// L(C) = {φ : φ ∘ f ∈ C for all f ∈ C}.
pub fn left_idealiser(c: &RankMetricCode) -> Result<Idealiser> {
    idealiser(c, true)
}

/// R(C) = {φ : f ∘ φ ∈ C for all f ∈ C}.
pub fn right_idealiser(c: &RankMetricCode) -> Result<Idealiser> {
    idealiser(c, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    fn mono(t: &FieldTower, exps: &[i64]) -> RankMetricCode {
        RankMetricCode::new(exps.iter().map(|&e| LinPoly::monomial(t.ext().clone(), e, FieldElem::ONE)).collect())
            .unwrap()
    }

    #[test]
    fn dual_of_gabidulin_is_complementary_monomials() {
        let t = FieldTower::new(2, 1, 4, 1).unwrap();
        let d = delsarte_dual(&mono(&t, &[0, 1])).unwrap();
        let d = d.code().unwrap();
        assert_eq!(d.k(), 2);
        assert!(d.same_span(&mono(&t, &[2, 3])));
        assert_eq!(d.basis()[0], LinPoly::monomial(t.ext().clone(), 2, FieldElem::ONE));
        assert!(delsarte_dual(&mono(&t, &[0, 1, 2, 3])).unwrap().is_zero());
    }

    // Oracle: since C is F_{q^n}-linear, its dual is the plain null space of
    // the coefficient matrix over F_{q^n}.
    #[test]
    fn dual_matches_direct_null_space() {
        use rand::SeedableRng;
        let t = FieldTower::new(3, 1, 3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for k in 1..3 {
            for _ in 0..5 {
                let basis = (0..k).map(|_| LinPoly::random(t.ext().clone(), &mut rng)).collect();
                let Ok(c) = RankMetricCode::new(basis) else { continue };
                let d = delsarte_dual(&c).unwrap();
                let d = d.code().unwrap();
                let rows: Matrix = c.basis().iter().map(|f| f.coeffs().to_vec()).collect();
                let direct = linalg::null_space(t.mid(), &rows, 3);
                let direct = RankMetricCode::new(
                    direct.into_iter().map(|v| LinPoly::new(t.ext().clone(), v).unwrap()).collect(),
                )
                .unwrap();
                assert!(d.same_span(&direct));
                for f in c.basis() {
                    for g in d.basis() {
                        assert_eq!(bilinear(f, g).unwrap(), FieldElem::ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn idealisers_of_gabidulin() {
        let t = FieldTower::new(2, 1, 4, 1).unwrap();
        let c = mono(&t, &[0, 1]);
        let l = left_idealiser(&c).unwrap();
        assert_eq!(l.dim, 4);
        // L(C) = {αx}
        for phi in &l.basis {
            assert_eq!(phi.monomial_exponent(), Some(0));
        }
        assert_eq!(right_idealiser(&c).unwrap().dim, 4);
        let full = mono(&t, &[0, 1, 2, 3]);
        assert_eq!(left_idealiser(&full).unwrap().dim, 16);
    }
}
