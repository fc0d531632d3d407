//! Moore matrices and Moore polynomial sets.
//!
//! A tuple (f_1, ..., f_k) is a Moore polynomial set when det(f_j(α_i)) = 0
//! forces α_1, ..., α_k to be F_q-dependent. Three independent deciders are
//! provided: the brute-force oracle here, the MRD sweep on the spanned code,
//! and the point test on the hypersurface W in [`crate::variety`].

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::sweep::{self, Guard, Strategy};
use crate::code::RankMetricCode;
use crate::error::{Error, Result};
use crate::gf::linalg::{self, Matrix};
use crate::gf::{Extension, FieldElem, FieldTower};
use crate::linpoly::LinPoly;

/// Which of the five normalization conditions hold for a tuple.
///
/// 1. monic and independent
/// 2. distinct q-degrees M_i
/// 3. distinct min-degrees m_i, one of them 0
/// 4. f_1 = x^(q^t) for the index t
/// 5. every monomial f_i has exponent at least t
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionFlags(pub [bool; 5]);

impl AssumptionFlags {
    pub fn all(&self) -> bool {
        self.0.iter().all(|&b| b)
    }

    /// Bit i-1 set iff condition i holds.
    pub fn bits(&self) -> u8 {
        self.0.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((b as u8) << i))
    }
}

#[derive(Clone, Debug)]
pub struct MoorePolySet {
    polys: Vec<LinPoly>,
    index_t: Option<usize>,
    flags: AssumptionFlags,
}

impl MoorePolySet {
    /// Wraps an F_{q^n}-independent tuple, recording its index (when f_1 is
    /// the least monomial of the span) and the conditions it meets.
    pub fn new(polys: Vec<LinPoly>) -> Result<Self> {
        let code = RankMetricCode::new(polys.clone())?;
        let t = index_of(&code).ok();
        let index_t = t.filter(|&t| polys[0].monomial_exponent() == Some(t) && polys[0].is_monic());
        let flags = assumption_flags(&polys, t);
        Ok(MoorePolySet { polys, index_t, flags })
    }

    pub fn polys(&self) -> &[LinPoly] {
        &self.polys
    }

    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn space(&self) -> &Arc<Extension> {
        self.polys[0].space()
    }

    pub fn index_t(&self) -> Option<usize> {
        self.index_t
    }

    pub fn flags(&self) -> AssumptionFlags {
        self.flags
    }

    pub fn code(&self) -> RankMetricCode {
        RankMetricCode::new(self.polys.clone()).expect("independence checked at construction")
    }

    /// q-degrees M_1..M_k.
    pub fn top_degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|f| f.qdeg().unwrap()).collect()
    }

    /// min-degrees m_1..m_k.
    pub fn min_degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|f| f.mindeg().unwrap()).collect()
    }

    /// The same tuple over GF(q^(nm)).
    pub fn lift(&self, tower: &FieldTower) -> Result<MoorePolySet> {
        let polys = self.polys.iter().map(|f| f.lift(tower)).collect::<Result<Vec<_>>>()?;
        MoorePolySet::new(polys)
    }
}

fn assumption_flags(polys: &[LinPoly], t: Option<usize>) -> AssumptionFlags {
    let bounds: Vec<(usize, usize)> = polys.iter().map(|f| f.qdeg_bounds().unwrap()).collect();
    let distinct = |v: Vec<usize>| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    let c1 = polys.iter().all(|f| f.is_monic());
    let c2 = distinct(bounds.iter().map(|b| b.1).collect());
    let c3 = distinct(bounds.iter().map(|b| b.0).collect()) && bounds.iter().any(|b| b.0 == 0);
    let c4 = t.is_some_and(|t| polys[0].monomial_exponent() == Some(t) && polys[0].is_monic());
    let c5 = t.is_some_and(|t| polys.iter().filter_map(|f| f.monomial_exponent()).all(|e| e >= t));
    AssumptionFlags([c1, c2, c3, c4, c5])
}

/// [f_j(α_i)]_{i,j}.
pub fn moore_matrix(set: &MoorePolySet, alphas: &[FieldElem]) -> Result<Matrix> {
    let k = set.k();
    if alphas.len() != k {
        return Err(Error::Arity { expected: k, got: alphas.len() });
    }
    let fld = set.space().field();
    for &a in alphas {
        fld.check(a)?;
    }
    Ok(alphas.iter().map(|&a| set.polys.iter().map(|f| f.evaluate(a)).collect()).collect())
}

pub fn moore_det(set: &MoorePolySet, alphas: &[FieldElem]) -> Result<FieldElem> {
    let m = moore_matrix(set, alphas)?;
    Ok(linalg::det(set.space().field(), &m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Mrd,
    Variety,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreReport {
    pub verdict: bool,
    /// F_q-independent α_1..α_k with a singular Moore matrix.
    pub witness: Option<Vec<FieldElem>>,
    pub method: Method,
    pub steps: u64,
}

/// Checks that `alphas` certifies failure: singular Moore matrix and
/// F_q-rank k.
pub fn verify_witness(set: &MoorePolySet, alphas: &[FieldElem]) -> Result<bool> {
    let det = moore_det(set, alphas)?;
    Ok(det.is_zero() && set.space().fq_rank(alphas) == set.k())
}

/// Exhaustive check of the defining implication over all tuples of nonzero
/// elements, in lexicographic order of encodings.
pub fn is_moore_oracle(set: &MoorePolySet, guard: &Guard) -> Result<MooreReport> {
    let s = set.space().clone();
    let k = set.k();
    let units = s.order() - 1;
    let total = (units as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let count = guard.check(total)?;
    let fld = s.field().clone();
    let decode = move |mut i: u64, out: &mut [FieldElem]| {
        for x in out.iter_mut().rev() {
            *x = FieldElem((i % units) as u32 + 1);
            i /= units;
        }
    };
    let hit = sweep::find_first(
        count,
        || (vec![FieldElem::ZERO; k], vec![vec![FieldElem::ZERO; k]; k]),
        |(alphas, m), i| {
            decode(i, alphas);
            for (row, &a) in m.iter_mut().zip(alphas.iter()) {
                for (e, f) in row.iter_mut().zip(&set.polys) {
                    *e = f.evaluate(a);
                }
            }
            linalg::det_in_place(&fld, m).is_zero() && s.fq_rank(alphas) == k
        },
    );
    let witness = hit.map(|i| {
        let mut a = vec![FieldElem::ZERO; k];
        decode(i, &mut a);
        a
    });
    Ok(MooreReport { verdict: witness.is_none(), witness, method: Method::Oracle, steps: count })
}

/// Moore test through the MRD property of the span. A violating codeword's
/// kernel supplies the k independent points of the witness.
pub fn is_moore(set: &MoorePolySet, guard: &Guard, strategy: Strategy) -> Result<MooreReport> {
    let code = set.code();
    let report = code.is_mrd_with(guard, strategy)?;
    let witness = match &report.witness {
        None => None,
        Some(b) => {
            let w = code.codeword(b)?;
            let ker = w.kernel_basis();
            let alphas: Vec<FieldElem> = ker.into_iter().take(set.k()).collect();
            if alphas.len() < set.k() || !verify_witness(set, &alphas)? {
                return Err(Error::Internal("kernel of violating codeword is not a witness".into()));
            }
            Some(alphas)
        }
    };
    Ok(MooreReport { verdict: report.verdict, witness, method: Method::Mrd, steps: report.steps })
}

/// Least t with x^(q^t) ∈ C.
pub fn index_of(code: &RankMetricCode) -> Result<usize> {
    let s = code.space();
    (0..code.n())
        .find(|&t| code.contains(&LinPoly::monomial(s.clone(), t as i64, FieldElem::ONE)))
        .ok_or(Error::NoMonomial)
}

/// Chooses a basis of C meeting as many normalization conditions as the
/// code allows:
///
/// 1. reduce to echelon form with respect to the top q-degree, which makes
///    every element monic with distinct M_i and puts x^(q^t) in the basis;
/// 2. while two elements share a min-degree, cancel that term from the one
///    with larger M (its top term is untouched, so M_i stay distinct);
/// 3. order as x^(q^t) first, then by increasing M.
pub fn normalize(code: &RankMetricCode) -> Result<MoorePolySet> {
    let s = code.space().clone();
    let fld = s.field();
    let n = code.n();
    let mut rows: Matrix = code.basis().iter().map(|f| f.coeffs().iter().rev().copied().collect()).collect();
    linalg::rref(fld, &mut rows);
    let mut polys: Vec<Vec<FieldElem>> = rows.into_iter().map(|r| r.into_iter().rev().collect()).collect();
    let lo = |p: &Vec<FieldElem>| p.iter().position(|c| !c.is_zero()).unwrap();
    let hi = |p: &Vec<FieldElem>| p.iter().rposition(|c| !c.is_zero()).unwrap();
    let mut guard = 0usize;
    loop {
        let mut collision = None;
        'search: for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                if lo(&polys[i]) == lo(&polys[j]) {
                    collision = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = collision else { break };
        let (small, big) = if hi(&polys[i]) < hi(&polys[j]) { (i, j) } else { (j, i) };
        let m = lo(&polys[small]);
        let factor = fld.div(polys[big][m], polys[small][m]).unwrap();
        let sub = polys[small].clone();
        for (x, &y) in polys[big].iter_mut().zip(&sub) {
            *x = fld.sub(*x, fld.mul(factor, y));
        }
        guard += 1;
        if guard > n * n * n + 1 {
            return Err(Error::Internal("min-degree elimination did not terminate".into()));
        }
    }
    let t = index_of(code).ok();
    polys.sort_by_key(|p| {
        let is_t = t.is_some_and(|t| lo(p) == t && hi(p) == t);
        (!is_t, hi(p))
    });
    let polys: Vec<LinPoly> = polys.into_iter().map(|c| LinPoly::new(s.clone(), c)).collect::<Result<_>>()?;
    let set = MoorePolySet::new(polys)?;
    if !set.code().same_span(code) {
        return Err(Error::Internal("normalization changed the span".into()));
    }
    Ok(set)
}

/// Whether the exponents form an arithmetic progression (after sorting when
/// `allow_permutation`). Lists of length at most 2 always do.
pub fn is_ap(exponents: &[i64], allow_permutation: bool) -> Result<bool> {
    if exponents.is_empty() {
        return Err(Error::InvalidParameter("empty exponent list".into()));
    }
    let mut seen = BTreeSet::new();
    for &e in exponents {
        if !seen.insert(e) {
            return Err(Error::DuplicateExponent(e));
        }
    }
    let mut v = exponents.to_vec();
    if allow_permutation {
        v.sort_unstable();
    }
    if v.len() <= 2 {
        return Ok(true);
    }
    let d = v[1] - v[0];
    Ok(v.windows(2).all(|w| w[1] - w[0] == d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreProbeLevel {
    pub m: u32,
    pub report: MooreReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreProbe {
    pub levels: Vec<MooreProbeLevel>,
    pub truncated_at: Option<u32>,
    pub reason: Option<String>,
}

/// [`is_moore`] on the lifted tuple over GF(q^(nm)) for m = 1..=m_max.
pub fn exceptional_moore_probe(
    set: &MoorePolySet,
    tower: &FieldTower,
    m_max: u32,
    guard: &Guard,
    strategy: Strategy,
) -> Result<MooreProbe> {
    if **tower.ext() != **set.space() {
        return Err(Error::ContextMismatch);
    }
    let mut levels = Vec::new();
    for m in 1..=m_max {
        let attempt = tower.with_m(m).and_then(|t| set.lift(&t)).and_then(|lifted| is_moore(&lifted, guard, strategy));
        match attempt {
            Ok(report) => levels.push(MooreProbeLevel { m, report }),
            Err(e @ (Error::GuardExceeded { .. } | Error::FieldTooLarge { .. })) => {
                return Ok(MooreProbe { levels, truncated_at: Some(m), reason: Some(e.to_string()) })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(MooreProbe { levels, truncated_at: None, reason: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u64, n: u32) -> FieldTower {
        FieldTower::new(p, 1, n, 1).unwrap()
    }

    fn mono_set(t: &FieldTower, exps: &[i64]) -> MoorePolySet {
        MoorePolySet::new(exps.iter().map(|&e| LinPoly::monomial(t.ext().clone(), e, FieldElem::ONE)).collect())
            .unwrap()
    }

    fn poly(t: &FieldTower, terms: &[(i64, u32)]) -> LinPoly {
        let terms: Vec<(i64, FieldElem)> = terms.iter().map(|&(i, a)| (i, FieldElem(a))).collect();
        LinPoly::from_terms(t.ext().clone(), &terms).unwrap()
    }

    #[test]
    fn moore_matrix_entries() {
        let t = tower(2, 4);
        let set = mono_set(&t, &[0, 1]);
        let g = t.mid().generator();
        let m = moore_matrix(&set, &[FieldElem::ONE, g]).unwrap();
        assert_eq!(m, vec![vec![FieldElem::ONE, FieldElem::ONE], vec![g, t.mid().mul(g, g)]]);
        let m = moore_matrix(&set, &[FieldElem::ZERO, g]).unwrap();
        assert!(m[0].iter().all(|x| x.is_zero()));
        assert!(matches!(moore_matrix(&set, &[g]), Err(Error::Arity { .. })));
    }

    #[test]
    fn oracle_and_mrd_on_the_basic_pair() {
        let t = tower(2, 4);
        let good = mono_set(&t, &[0, 1]);
        let r = is_moore_oracle(&good, &Guard::default()).unwrap();
        assert!(r.verdict);
        assert_eq!(r.steps, 225);
        assert!(is_moore(&good, &Guard::default(), Strategy::Auto).unwrap().verdict);

        let bad = mono_set(&t, &[0, 2]);
        let r = is_moore_oracle(&bad, &Guard::default()).unwrap();
        assert!(!r.verdict);
        // ω = primitive^5 generates GF(4) inside GF(16); encoding 6 = x^2 + x
        let w = t.mid().exp(5);
        assert_eq!(w, FieldElem(6));
        assert_eq!(r.witness, Some(vec![FieldElem::ONE, w]));
        let r2 = is_moore(&bad, &Guard::default(), Strategy::Auto).unwrap();
        assert!(!r2.verdict);
        assert!(verify_witness(&bad, r2.witness.as_ref().unwrap()).unwrap());
    }

    // Dependent tuples always give singular Moore matrices.
    #[test]
    fn dependent_points_give_zero_determinant() {
        let t = tower(3, 2);
        let set = MoorePolySet::new(vec![poly(&t, &[(0, 1), (1, 4)]), poly(&t, &[(1, 1)])]).unwrap();
        for a in t.mid().elements() {
            for c in t.base().elements() {
                let b = t.ext().scale(c, a);
                assert_eq!(moore_det(&set, &[a, b]).unwrap(), FieldElem::ZERO);
            }
        }
    }

    #[test]
    fn index_examples() {
        let t = tower(3, 4);
        let g = RankMetricCode::new(mono_set(&t, &[0, 1]).polys().to_vec()).unwrap();
        assert_eq!(index_of(&g).unwrap(), 0);
        let tw = RankMetricCode::new(vec![poly(&t, &[(1, 1)]), poly(&t, &[(0, 1), (2, 3)])]).unwrap();
        assert_eq!(index_of(&tw).unwrap(), 1);
        let bin = RankMetricCode::new(vec![poly(&t, &[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(index_of(&bin), Err(Error::NoMonomial));
    }

    #[test]
    fn normalization_examples() {
        let t = tower(2, 4);
        let c = RankMetricCode::new(vec![poly(&t, &[(0, 1)]), poly(&t, &[(0, 1), (1, 1)])]).unwrap();
        let n = normalize(&c).unwrap();
        assert_eq!(n.top_degrees(), vec![0, 1]);
        assert_eq!(n.min_degrees(), vec![0, 1]);
        assert!(n.flags().all());
        assert_eq!(n.index_t(), Some(0));

        let gab = mono_set(&t, &[0, 1, 2]);
        let n = normalize(&gab.code()).unwrap();
        assert_eq!(n.polys(), gab.polys());
        assert!(n.flags().all());

        let insep = RankMetricCode::new(vec![poly(&t, &[(1, 1)]), poly(&t, &[(1, 1), (2, 1)])]).unwrap();
        let n = normalize(&insep).unwrap();
        assert!(!n.flags().0[2]);
        assert!(n.flags().0[0] && n.flags().0[1] && n.flags().0[3]);
    }

    #[test]
    fn arithmetic_progressions() {
        assert!(is_ap(&[0, 2, 4], false).unwrap());
        assert!(!is_ap(&[0, 1, 3], false).unwrap());
        assert!(is_ap(&[4, 0, 2], true).unwrap());
        assert!(!is_ap(&[4, 0, 2], false).unwrap());
        assert!(is_ap(&[5, 1], false).unwrap());
        assert_eq!(is_ap(&[1, 1], true), Err(Error::DuplicateExponent(1)));
    }

    #[test]
    fn probe_detects_non_exceptional_pair() {
        let t = tower(2, 4);
        let set = mono_set(&t, &[0, 3]);
        let p = exceptional_moore_probe(&set, &t, 3, &Guard::default(), Strategy::Auto).unwrap();
        assert!(p.levels[0].report.verdict);
        assert!(!p.levels[2].report.verdict);
        let g = mono_set(&t, &[0, 1]);
        let p = exceptional_moore_probe(&g, &t, 3, &Guard::default(), Strategy::Auto).unwrap();
        assert!(p.levels.iter().all(|l| l.report.verdict));
    }
}
