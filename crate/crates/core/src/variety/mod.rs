//! Hypersurfaces attached to a Moore polynomial set.
//!
//! F_f = det(f_j(X_i)), V = the product of the F_q-rational linear forms and
//! W = F_f / V. The tuple is a Moore set exactly when every F_{q^n}-point of
//! W with F_q-independent coordinates is absent, which gives a third
//! decision procedure next to the oracle and the MRD sweep.

mod mvpoly;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

pub use mvpoly::{Monomial, MvPoly};

use crate::code::sweep::{self, Guard};
use crate::error::{Error, Result};
use crate::gf::{Extension, FieldCtx, FieldElem};
use crate::linpoly::LinPoly;
use crate::moore::{Method, MoorePolySet, MooreReport};

/// Symbolic Moore determinant det[f_j(X_i)] in k variables.
///
/// The guard bounds k! · Π (terms of f_j), the number of products the
/// expansion may form.
pub fn build_f(set: &MoorePolySet, guard: &Guard) -> Result<MvPoly> {
    let k = set.k();
    let space = set.space();
    let ctx = space.field().clone();
    let q = space.q();
    let mut bound: u128 = (1..=k as u128).product();
    for f in set.polys() {
        let nnz = f.coeffs().iter().filter(|c| !c.is_zero()).count() as u128;
        bound = bound.saturating_mul(nnz.max(1));
    }
    guard.check(bound)?;
    let entry = |i: usize, f: &LinPoly| -> Result<MvPoly> {
        let mut p = MvPoly::zero(ctx.clone(), k);
        for (l, &a) in f.coeffs().iter().enumerate() {
            if !a.is_zero() {
                let mut e = vec![0u32; k];
                e[i] = exponent(q, l)?;
                p.add_term(e, a);
            }
        }
        Ok(p)
    };
    let entries = (0..k)
        .map(|i| set.polys().iter().map(|f| entry(i, f)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut memo = HashMap::new();
    minor(&entries, (1u32 << k) - 1, &ctx, &mut memo)
}

fn exponent(q: u64, l: usize) -> Result<u32> {
    q.checked_pow(l as u32)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::InvalidParameter(format!("exponent q^{l} does not fit in 32 bits")))
}

/// Determinant of the rows k-|cols|..k restricted to the column set `cols`,
/// expanded along its first row.
fn minor(entries: &[Vec<MvPoly>], cols: u32, ctx: &Arc<FieldCtx>, memo: &mut HashMap<u32, MvPoly>) -> Result<MvPoly> {
    let k = entries.len();
    if cols == 0 {
        return Ok(MvPoly::one(ctx.clone(), k));
    }
    if let Some(p) = memo.get(&cols) {
        return Ok(p.clone());
    }
    let row = k - cols.count_ones() as usize;
    let mut acc = MvPoly::zero(ctx.clone(), k);
    for (pos, j) in (0..k).filter(|&j| cols >> j & 1 == 1).enumerate() {
        if entries[row][j].is_zero() {
            continue;
        }
        let sub = minor(entries, cols & !(1 << j), ctx, memo)?;
        let term = entries[row][j].mul(&sub)?;
        acc = if pos % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    memo.insert(cols, acc.clone());
    Ok(acc)
}

/// Representatives of PG(k-1, q) with last nonzero coordinate 1, as
/// coefficient vectors over F_q.
pub fn projective_points(base: &FieldCtx, k: usize) -> Vec<Vec<FieldElem>> {
    let q = base.order() as u64;
    let mut out = Vec::new();
    for last in 0..k {
        let count = q.pow(last as u32);
        for idx in 0..count {
            let mut v = vec![FieldElem::ZERO; k];
            let mut r = idx;
            for x in v[..last].iter_mut().rev() {
                *x = FieldElem((r % q) as u32);
                r /= q;
            }
            v[last] = FieldElem::ONE;
            out.push(v);
        }
    }
    out
}

/// Π (a_1 X_1 + ... + a_k X_k) over PG(k-1, q), as a polynomial over the
/// extension field of `space`. With the last-nonzero-equals-one
/// representatives this is exactly the Moore determinant of
/// (x, x^q, ..., x^(q^(k-1))).
pub fn build_v(space: &Extension, k: usize, guard: &Guard) -> Result<MvPoly> {
    let q = space.q() as u128;
    guard.check((q.pow(k as u32) - 1) / (q - 1))?;
    let ctx = space.field().clone();
    let mut v = MvPoly::one(ctx.clone(), k);
    for point in projective_points(space.base(), k) {
        let form: Vec<FieldElem> = point.iter().map(|&c| space.embed(c)).collect();
        v = v.mul(&MvPoly::linear_form(ctx.clone(), &form))?;
    }
    Ok(v)
}

/// F divided by every F_q-rational linear form in turn; each division must
/// be exact.
pub fn divide_by_v(f: &MvPoly, space: &Extension) -> Result<MvPoly> {
    let mut w = f.clone();
    for point in projective_points(space.base(), f.nvars()) {
        let form: Vec<FieldElem> = point.iter().map(|&c| space.embed(c)).collect();
        w = w.div_linear(&form)?;
    }
    Ok(w)
}

/// W = F_f / V.
pub fn build_w(set: &MoorePolySet, guard: &Guard) -> Result<MvPoly> {
    divide_by_v(&build_f(set, guard)?, set.space())
}

fn point_count(space: &Extension, k: usize, guard: &Guard) -> Result<u64> {
    let total = (space.order() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    guard.check(total)
}

fn decode_point(order: u64, mut idx: u64, out: &mut [FieldElem]) {
    for x in out.iter_mut().rev() {
        *x = FieldElem((idx % order) as u32);
        idx /= order;
    }
}

/// Points of A^k(GF(q^n)) on W with F_q-independent coordinates, in
/// lexicographic order of encodings.
pub fn points_off_v(w: &MvPoly, space: &Extension, guard: &Guard) -> Result<Vec<Vec<FieldElem>>> {
    let k = w.nvars();
    let count = point_count(space, k, guard)?;
    let order = space.order();
    use rayon::prelude::*;
    Ok((0..count)
        .into_par_iter()
        .map_init(
            || vec![FieldElem::ZERO; k],
            |p, i| {
                decode_point(order, i, p);
                on_w_off_v(w, space, p).then(|| p.clone())
            },
        )
        .flatten()
        .collect())
}

fn on_w_off_v(w: &MvPoly, space: &Extension, p: &[FieldElem]) -> bool {
    // points with a zero coordinate are dependent; skip the evaluation
    !p.iter().any(|x| x.is_zero()) && w.evaluate(p).is_ok_and(|v| v.is_zero()) && space.fq_rank(p) == p.len()
}

/// Lexicographically first point of W off V, if any.
pub fn first_point_off_v(w: &MvPoly, space: &Extension, guard: &Guard) -> Result<Option<Vec<FieldElem>>> {
    let k = w.nvars();
    let count = point_count(space, k, guard)?;
    let order = space.order();
    let hit = sweep::find_first(
        count,
        || vec![FieldElem::ZERO; k],
        |p, i| {
            decode_point(order, i, p);
            on_w_off_v(w, space, p)
        },
    );
    Ok(hit.map(|i| {
        let mut p = vec![FieldElem::ZERO; k];
        decode_point(order, i, &mut p);
        p
    }))
}

/// Moore test through the points of W. The witness is the first point of W
/// off V; such a point makes the Moore matrix singular, since F = V·W.
pub fn is_moore_variety(set: &MoorePolySet, guard: &Guard) -> Result<MooreReport> {
    let steps = point_count(set.space(), set.k(), guard)?;
    let w = build_w(set, guard)?;
    let witness = first_point_off_v(&w, set.space(), guard)?;
    if let Some(p) = &witness {
        if !crate::moore::verify_witness(set, p)? {
            return Err(Error::Internal("point of W off V is not a Moore witness".into()));
        }
    }
    Ok(MooreReport { verdict: witness.is_none(), witness, method: Method::Variety, steps })
}

/// f(x, z) = Σ a_j x^(q^j) z^(q^M - q^j), homogeneous of degree q^M where
/// M is the q-degree of f.
pub fn homogenize_f(f: &LinPoly) -> Result<MvPoly> {
    let (_, top) = f.qdeg_bounds()?;
    let q = f.space().q();
    let d = exponent(q, top)?;
    let mut p = MvPoly::zero(f.space().field().clone(), 2);
    for (j, &a) in f.coeffs().iter().enumerate() {
        if !a.is_zero() {
            let e = exponent(q, j)?;
            p.add_term(vec![e, d - e], a);
        }
    }
    Ok(p)
}

/// H(X_1, X_2) = F_f(X_1, X_2, λ_3, ..., λ_k) for F_q-independent λ's.
pub fn specialize_curve(set: &MoorePolySet, lambdas: &[FieldElem], guard: &Guard) -> Result<MvPoly> {
    let k = set.k();
    if k < 2 {
        return Err(Error::InvalidParameter("a curve needs at least two polynomials".into()));
    }
    if lambdas.len() != k - 2 {
        return Err(Error::Arity { expected: k - 2, got: lambdas.len() });
    }
    let space = set.space();
    for &l in lambdas {
        space.field().check(l)?;
    }
    if space.fq_rank(lambdas) != lambdas.len() {
        return Err(Error::DependentPoints);
    }
    let mut h = build_f(set, guard)?;
    for (i, &l) in lambdas.iter().enumerate() {
        h = h.substitute(i + 2, l);
    }
    h.select_vars(&[0, 1])
}

/// Projective closure H(X_1, X_2, T) with the T-content divided out.
pub fn projective_curve(h: &MvPoly) -> MvPoly {
    let hh = h.homogenize();
    let t = hh.nvars() - 1;
    let content = hh.terms().map(|(m, _)| m.0[t]).min().unwrap_or(0);
    if content == 0 {
        return hh;
    }
    let mut out = MvPoly::zero(hh.ctx().clone(), hh.nvars());
    for (m, &c) in hh.terms() {
        let mut e = m.0.clone();
        e[t] -= content;
        out.add_term(e, c);
    }
    out
}

/// Lowest homogeneous parts of H translated to P.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowestForm {
    /// Multiplicity of P on the curve; 0 when P is not on it.
    pub m: u64,
    pub f_m: MvPoly,
    pub f_m1: MvPoly,
}

pub fn translate_lowest_form(h: &MvPoly, point: &[FieldElem]) -> Result<LowestForm> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let shifted = h.translate(point)?;
    let m = shifted.low_degree().expect("translation preserves nonzero polynomials");
    Ok(LowestForm { m, f_m: shifted.homogeneous_part(m), f_m1: shifted.homogeneous_part(m + 1) })
}

/// The tangent cone at P: the lowest form of H translated to P.
pub fn tangent_cone(h: &MvPoly, point: &[FieldElem]) -> Result<MvPoly> {
    Ok(translate_lowest_form(h, point)?.f_m)
}

/// Roots in PG(1, q^n) of the top-degree form of a bivariate H, listed as
/// (0:1:0) first and then (1:γ:0) by increasing encoding of γ.
pub fn points_at_infinity(h: &MvPoly) -> Result<Vec<[FieldElem; 3]>> {
    if h.nvars() != 2 {
        return Err(Error::Arity { expected: 2, got: h.nvars() });
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = h.degree().unwrap();
    if d == 0 {
        return Ok(Vec::new());
    }
    let top = h.homogeneous_part(d);
    let mut out = Vec::new();
    if top.evaluate(&[FieldElem::ZERO, FieldElem::ONE])?.is_zero() {
        out.push([FieldElem::ZERO, FieldElem::ONE, FieldElem::ZERO]);
    }
    for g in h.ctx().elements() {
        if top.evaluate(&[FieldElem::ONE, g])?.is_zero() {
            out.push([FieldElem::ONE, g, FieldElem::ZERO]);
        }
    }
    Ok(out)
}

/// Affine points where H and both formal partial derivatives vanish, in
/// lexicographic order.
pub fn singular_points_affine(h: &MvPoly, guard: &Guard) -> Result<Vec<[FieldElem; 2]>> {
    if h.nvars() != 2 {
        return Err(Error::Arity { expected: 2, got: h.nvars() });
    }
    let order = h.ctx().order() as u64;
    let count = guard.check((order as u128).pow(2))?;
    let (d1, d2) = (h.derivative(0), h.derivative(1));
    use rayon::prelude::*;
    Ok((0..count)
        .into_par_iter()
        .filter_map(|i| {
            let p = [FieldElem((i / order) as u32), FieldElem((i % order) as u32)];
            let vanish = |f: &MvPoly| f.evaluate(&p).is_ok_and(|v| v.is_zero());
            (vanish(h) && vanish(&d1) && vanish(&d2)).then_some(p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    fn tower(p: u64, n: u32) -> FieldTower {
        FieldTower::new(p, 1, n, 1).unwrap()
    }

    fn mono_set(t: &FieldTower, exps: &[i64]) -> MoorePolySet {
        MoorePolySet::new(exps.iter().map(|&e| LinPoly::monomial(t.ext().clone(), e, FieldElem::ONE)).collect())
            .unwrap()
    }

    fn bivariate(t: &FieldTower, terms: &[([u32; 2], u32)]) -> MvPoly {
        let terms: Vec<(Vec<u32>, FieldElem)> = terms.iter().map(|(e, c)| (e.to_vec(), FieldElem(*c))).collect();
        MvPoly::from_terms(t.mid().clone(), 2, &terms).unwrap()
    }

    #[test]
    fn determinants_of_small_sets() {
        let t = tower(2, 4);
        let g = Guard::default();
        let f = build_f(&mono_set(&t, &[0, 1]), &g).unwrap();
        assert_eq!(f, bivariate(&t, &[([1, 2], 1), ([2, 1], 1)]));
        let f = build_f(&mono_set(&t, &[0, 2]), &g).unwrap();
        assert_eq!(f, bivariate(&t, &[([1, 4], 1), ([4, 1], 1)]));
        // q = 3: X1 X2^3 - X2 X1^3
        let t3 = tower(3, 2);
        let f = build_f(&mono_set(&t3, &[0, 1]), &g).unwrap();
        assert_eq!(f, bivariate(&t3, &[([1, 3], 1), ([3, 1], 2)]));
    }

    #[test]
    fn v_is_the_gabidulin_determinant() {
        let g = Guard::default();
        for (p, k) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3)] {
            let t = tower(p, 3);
            let v = build_v(t.ext(), k, &g).unwrap();
            let q = p;
            assert_eq!(v.degree(), Some((q.pow(k as u32) - 1) / (q - 1)));
            let exps: Vec<i64> = (0..k as i64).collect();
            assert_eq!(v, build_f(&mono_set(&t, &exps), &g).unwrap(), "p={p} k={k}");
        }
        let t = tower(2, 4);
        let v = build_v(t.ext(), 2, &g).unwrap();
        // X1 X2 (X1 + X2)
        assert_eq!(v, bivariate(&t, &[([2, 1], 1), ([1, 2], 1)]));
    }

    #[test]
    fn w_of_the_basic_examples() {
        let t = tower(2, 4);
        let g = Guard::default();
        let w = build_w(&mono_set(&t, &[0, 1]), &g).unwrap();
        assert_eq!(w, MvPoly::one(t.mid().clone(), 2));
        let set = mono_set(&t, &[0, 2]);
        let w = build_w(&set, &g).unwrap();
        assert_eq!(w, bivariate(&t, &[([2, 0], 1), ([1, 1], 1), ([0, 2], 1)]));
        let v = build_v(t.ext(), 2, &g).unwrap();
        assert_eq!(w.mul(&v).unwrap(), build_f(&set, &g).unwrap());
        let pts = points_off_v(&w, t.ext(), &g).unwrap();
        let omega = t.mid().exp(5);
        assert!(pts.contains(&vec![FieldElem::ONE, omega]));
        assert!(points_off_v(&MvPoly::one(t.mid().clone(), 2), t.ext(), &g).unwrap().is_empty());
    }

    #[test]
    fn variety_test_matches_oracle_witness() {
        let t = tower(2, 4);
        let g = Guard::default();
        for exps in [[0i64, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
            let set = mono_set(&t, &exps);
            let a = crate::moore::is_moore_oracle(&set, &g).unwrap();
            let b = is_moore_variety(&set, &g).unwrap();
            assert_eq!(a.verdict, b.verdict, "{exps:?}");
            assert_eq!(a.witness, b.witness, "{exps:?}");
        }
    }

    #[test]
    fn degree_bookkeeping_for_three_polynomials() {
        // index 0, equal gaps M: degree(W) = q^(2M) + q^M - q^2 - q
        let t = tower(2, 5);
        let g = Guard::default();
        for m in [1i64, 2] {
            let set = mono_set(&t, &[0, m, 2 * m]);
            let w = build_w(&set, &g).unwrap();
            let q = 2u64;
            let qm = q.pow(m as u32);
            assert_eq!(w.degree(), Some(qm * qm + qm - q * q - q));
        }
        assert_eq!(build_v(t.ext(), 3, &g).unwrap().degree(), Some(7));
    }

    #[test]
    fn homogenized_polynomials() {
        let t = tower(2, 4);
        let delta = FieldElem(7);
        let f = LinPoly::from_terms(t.ext().clone(), &[(0, FieldElem::ONE), (2, delta)]).unwrap();
        let h = homogenize_f(&f).unwrap();
        assert_eq!(h, bivariate(&t, &[([1, 3], 1), ([4, 0], 7)]));
        for x in t.mid().elements() {
            assert_eq!(h.evaluate(&[x, FieldElem::ONE]).unwrap(), f.evaluate(x));
        }
        let mono = homogenize_f(&LinPoly::monomial(t.ext().clone(), 3, FieldElem::ONE)).unwrap();
        assert_eq!(mono, bivariate(&t, &[([8, 0], 1)]));
        assert_eq!(homogenize_f(&LinPoly::zero(t.ext().clone())), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn specialized_curve_and_its_points_at_infinity() {
        let t = tower(2, 4);
        let g = Guard::default();
        let set = mono_set(&t, &[0, 1, 2]);
        let gen = t.mid().generator();
        let h = specialize_curve(&set, &[gen], &g).unwrap();
        // F has degree 7, but the factor X3 of V becomes the constant λ_3
        assert_eq!(build_f(&set, &g).unwrap().degree(), Some(7));
        assert_eq!(h.degree(), Some(6));
        let inf = points_at_infinity(&h).unwrap();
        let expected = vec![
            [FieldElem::ZERO, FieldElem::ONE, FieldElem::ZERO],
            [FieldElem::ONE, FieldElem::ZERO, FieldElem::ZERO],
            [FieldElem::ONE, FieldElem::ONE, FieldElem::ZERO],
        ];
        assert_eq!(inf, expected);
        assert_eq!(specialize_curve(&set, &[FieldElem::ZERO], &g), Err(Error::DependentPoints));
        let pair = mono_set(&t, &[0, 1]);
        assert_eq!(specialize_curve(&pair, &[], &g).unwrap(), build_f(&pair, &g).unwrap());
        let proj = projective_curve(&h);
        assert!(proj.is_homogeneous());
        assert_eq!(proj.degree(), Some(6));
    }

    #[test]
    fn lowest_forms() {
        let t = tower(2, 4);
        let h = bivariate(&t, &[([1, 2], 1), ([2, 1], 1)]);
        let lf = translate_lowest_form(&h, &[FieldElem::ZERO, FieldElem::ZERO]).unwrap();
        assert_eq!(lf.m, 3);
        assert_eq!(lf.f_m, h);
        assert!(lf.f_m1.is_zero());
        // (1, 0) is a smooth point of X1 X2 (X1 + X2)
        let lf = translate_lowest_form(&h, &[FieldElem::ONE, FieldElem::ZERO]).unwrap();
        assert_eq!(lf.m, 1);
        let lf = translate_lowest_form(&h, &[FieldElem::ONE, FieldElem(2)]).unwrap();
        assert_eq!(lf.m, 0);
        let inf = points_at_infinity(&h).unwrap();
        assert_eq!(inf.len(), 3);
        assert!(points_at_infinity(&MvPoly::one(t.mid().clone(), 2)).unwrap().is_empty());
    }

    #[test]
    fn singular_points() {
        let t = tower(2, 4);
        let g = Guard::default();
        let cubic = bivariate(&t, &[([1, 2], 1), ([2, 1], 1)]);
        assert_eq!(singular_points_affine(&cubic, &g).unwrap(), vec![[FieldElem::ZERO; 2]]);
        let conic = bivariate(&t, &[([2, 0], 1), ([1, 1], 1), ([0, 2], 1)]);
        assert_eq!(singular_points_affine(&conic, &g).unwrap(), vec![[FieldElem::ZERO; 2]]);
        assert!(singular_points_affine(&MvPoly::one(t.mid().clone(), 2), &g).unwrap().is_empty());
    }
}
