//! The tower GF(p) ⊂ GF(q) ⊂ GF(q^n) ⊂ GF(q^(nm)).

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::extension::Extension;
use super::field::{FieldCtx, FieldElem, DEFAULT_MAX_FIELD_ORDER};
use super::poly;
use crate::error::{Error, Result};

/// Wire form of a tower: `{p, h, n, m, defining_polys?}`.
///
/// `defining_polys`, when present, lists the moduli (low coefficient first,
/// monic) of GF(q), GF(q^n) and optionally GF(q^(nm)) over GF(p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default = "one")]
    pub h: u32,
    pub n: u32,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defining_polys: Option<Vec<Vec<u64>>>,
}

fn one() -> u32 {
    1
}

impl FieldSpec {
    pub fn new(p: u64, h: u32, n: u32, m: u32) -> Self {
        FieldSpec { p, h, n, m, defining_polys: None }
    }
}

/// Immutable field tower with verified embeddings between its levels.
#[derive(Debug)]
pub struct FieldTower {
    p: u64,
    h: u32,
    n: u32,
    m: u32,
    max_order: u64,
    base: Arc<FieldCtx>,
    ext: Arc<Extension>,
    top: Arc<Extension>,
    /// mid_to_top[c] is the image of c ∈ GF(q^n) in GF(q^(nm)).
    mid_to_top: Vec<FieldElem>,
}

/// The least-encoding root in `big` of the defining polynomial of `small`,
/// and the induced embedding table.
fn embedding(small: &FieldCtx, big: &FieldCtx) -> Result<Vec<FieldElem>> {
    if small.characteristic() != big.characteristic() || !big.degree().is_multiple_of(small.degree()) {
        return Err(Error::ContextMismatch);
    }
    let modulus: Vec<FieldElem> = small.modulus().iter().map(|&c| FieldElem(c)).collect();
    let eval = |x: FieldElem| modulus.iter().rev().fold(FieldElem::ZERO, |acc, &c| big.add(big.mul(acc, x), c));
    // Roots lie in the unique subfield of order |small|: 0 and the powers of
    // primitive^((Q-1)/(Qs-1)).
    let q_big = big.order() as u64 - 1;
    let q_small = small.order() as u64 - 1;
    let step = q_big / q_small;
    let root = std::iter::once(FieldElem::ZERO)
        .chain((0..q_small).map(|j| big.exp(j * step)))
        .filter(|&x| eval(x).is_zero())
        .min()
        .ok_or_else(|| Error::Internal("subfield modulus has no root".into()))?;
    let powers: Vec<FieldElem> = (0..small.degree()).map(|i| big.pow(root, i as u64)).collect();
    let table = small
        .elements()
        .map(|c| {
            let d = small.digits(c);
            big.sum(d.iter().zip(&powers).map(|(&di, &r)| big.mul(big.from_int(di as i64), r)))
        })
        .collect();
    Ok(table)
}

fn build_ctx(p: u64, degree: u32, modulus: Option<&Vec<u64>>, max_order: u64) -> Result<FieldCtx> {
    match modulus {
        Some(m) => {
            let ctx = FieldCtx::with_modulus(p, m, max_order)?;
            if ctx.degree() != degree {
                return Err(Error::BadModulus(format!("expected degree {degree}, got {}", ctx.degree())));
            }
            Ok(ctx)
        }
        None => FieldCtx::new(p, degree, max_order),
    }
}

impl FieldTower {
    pub fn new(p: u64, h: u32, n: u32, m: u32) -> Result<Self> {
        Self::with_limit(&FieldSpec::new(p, h, n, m), DEFAULT_MAX_FIELD_ORDER)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::with_limit(spec, DEFAULT_MAX_FIELD_ORDER)
    }

    /// Builds the tower, refusing any level with more than `max_order` elements.
    pub fn with_limit(spec: &FieldSpec, max_order: u64) -> Result<Self> {
        let FieldSpec { p, h, n, m, .. } = *spec;
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 || n == 0 || m == 0 {
            return Err(Error::InvalidParameter("h, n and m must be positive".into()));
        }
        let top_degree = h as u64 * n as u64 * m as u64;
        let order = (p as u128).checked_pow(top_degree as u32).unwrap_or(u128::MAX);
        if top_degree > u32::MAX as u64 || order > max_order as u128 {
            return Err(Error::FieldTooLarge { order, limit: max_order });
        }
        let polys = spec.defining_polys.as_ref();
        if let Some(ps) = polys {
            if ps.len() < 2 || ps.len() > 3 {
                return Err(Error::InvalidParameter("defining_polys must list 2 or 3 moduli".into()));
            }
        }
        let pick = |i: usize| polys.and_then(|ps| ps.get(i));

        let base = Arc::new(build_ctx(p, h, pick(0), max_order)?);
        let mid = if n == 1 && pick(1).is_none_or(|m| m.iter().map(|&c| c as u32).eq(base.modulus().iter().copied())) {
            base.clone()
        } else {
            Arc::new(build_ctx(p, h * n, pick(1), max_order)?)
        };
        let base_to_mid = if Arc::ptr_eq(&base, &mid) { base.elements().collect() } else { embedding(&base, &mid)? };
        let ext = Arc::new(Extension::new(base.clone(), mid.clone(), base_to_mid)?);
        let mut tower =
            FieldTower { p, h, n, m: 1, max_order, base, top: ext.clone(), ext, mid_to_top: mid.elements().collect() };
        if m > 1 {
            tower = tower.with_m_modulus(m, pick(2))?;
        }
        Ok(tower)
    }

    /// The same GF(q) ⊂ GF(q^n) with a different top level GF(q^(nm)).
    pub fn with_m(&self, m: u32) -> Result<Self> {
        self.with_m_modulus(m, None)
    }

    fn with_m_modulus(&self, m: u32, modulus: Option<&Vec<u64>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let mid = self.ext.field().clone();
        let (top, mid_to_top) = if m == 1 {
            (self.ext.clone(), mid.elements().collect())
        } else {
            let degree = mid.degree() * m;
            let order = (self.p as u128).checked_pow(degree).unwrap_or(u128::MAX);
            if order > self.max_order as u128 {
                return Err(Error::FieldTooLarge { order, limit: self.max_order });
            }
            let big = Arc::new(build_ctx(self.p, degree, modulus, self.max_order)?);
            let mid_to_top = embedding(&mid, &big)?;
            let base_to_top: Vec<FieldElem> =
                self.ext.embedding_table().iter().map(|&e| mid_to_top[e.0 as usize]).collect();
            let top = Arc::new(Extension::new(self.base.clone(), big, base_to_top)?);
            (top, mid_to_top)
        };
        Ok(FieldTower {
            p: self.p,
            h: self.h,
            n: self.n,
            m,
            max_order: self.max_order,
            base: self.base.clone(),
            ext: self.ext.clone(),
            top,
            mid_to_top,
        })
    }

    pub fn spec(&self) -> FieldSpec {
        let polys = |c: &FieldCtx| c.modulus().iter().map(|&x| x as u64).collect::<Vec<_>>();
        let mut defining = vec![polys(&self.base), polys(self.ext.field())];
        if self.m > 1 {
            defining.push(polys(self.top.field()));
        }
        FieldSpec { p: self.p, h: self.h, n: self.n, m: self.m, defining_polys: Some(defining) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// q = p^h.
    pub fn q(&self) -> u64 {
        self.ext.q()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn max_order(&self) -> u64 {
        self.max_order
    }

    /// GF(q).
    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    /// GF(q^n) as a field.
    pub fn mid(&self) -> &Arc<FieldCtx> {
        self.ext.field()
    }

    /// GF(q^n) over GF(q).
    pub fn ext(&self) -> &Arc<Extension> {
        &self.ext
    }

    /// GF(q^(nm)) over GF(q).
    pub fn top(&self) -> &Arc<Extension> {
        &self.top
    }

    /// GF(q^n) → GF(q^(nm)).
    pub fn embed_mid(&self, x: FieldElem) -> FieldElem {
        self.mid_to_top[x.0 as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_towers() {
        let t = FieldTower::new(2, 1, 2, 1).unwrap();
        assert_eq!(t.mid().modulus(), &[1, 1, 1]);
        let t = FieldTower::new(2, 1, 4, 1).unwrap();
        assert_eq!(t.mid().modulus(), &[1, 1, 0, 0, 1]);
        let t = FieldTower::new(3, 1, 4, 1).unwrap();
        assert_eq!(t.mid().order(), 81);
        assert_eq!(t.ext().embed(FieldElem(2)), FieldElem(2));
    }

    #[test]
    fn trace_and_norm_examples() {
        let t = FieldTower::new(2, 1, 2, 1).unwrap();
        let e = t.ext();
        let w = e.field().generator();
        assert_eq!(e.frobenius(w, 1), FieldElem(3));
        assert_eq!(e.trace(w).unwrap(), FieldElem::ONE);
        assert_eq!(e.norm(w).unwrap(), FieldElem::ONE);
        assert_eq!(e.trace(FieldElem::ZERO).unwrap(), FieldElem::ZERO);

        let t = FieldTower::new(3, 1, 4, 1).unwrap();
        let e = t.ext();
        let g = e.field().generator();
        // x^4 + 2x^3 + 2 is the least irreducible quartic over GF(3), and its
        // root generates GF(81)*, so N(g) = g^40 = -1.
        assert_eq!(e.field().pow(g, 40), FieldElem(2));
        assert_eq!(e.norm(g).unwrap(), FieldElem(2));
    }

    #[test]
    fn fq_rank_depends_on_q() {
        let t2 = FieldTower::new(2, 1, 4, 1).unwrap();
        let t4 = FieldTower::new(2, 2, 2, 1).unwrap();
        // ω ∈ GF(4) ⊂ GF(16), located through the embedding of each tower.
        let w2 = {
            let f = t2.mid();
            f.exp((f.order() as u64 - 1) / 3)
        };
        assert_eq!(t2.ext().fq_rank(&[FieldElem::ONE, w2]), 2);
        let w4 = t4.ext().embed(t4.base().generator());
        assert_eq!(t4.ext().fq_rank(&[FieldElem::ONE, w4]), 1);
        let g = t2.mid().generator();
        let g2 = t2.mid().mul(g, g);
        assert_eq!(t2.ext().fq_rank(&[FieldElem::ONE, g, g2]), 3);
        assert_eq!(t2.ext().fq_rank(&[FieldElem::ZERO]), 0);
    }

    #[test]
    fn embeddings_commute_with_frobenius() {
        for (p, h, n, m) in [(2, 1, 2, 3), (2, 2, 2, 2), (3, 1, 2, 2), (3, 2, 2, 1)] {
            let t = FieldTower::new(p, h, n, m).unwrap();
            let mid = t.ext();
            let top = t.top();
            for x in mid.field().elements() {
                assert_eq!(t.embed_mid(mid.frobenius(x, 1)), top.frobenius(t.embed_mid(x), 1));
            }
            for y in mid.field().elements().step_by(3) {
                let x = mid.field().generator();
                assert_eq!(t.embed_mid(mid.field().mul(x, y)), top.field().mul(t.embed_mid(x), t.embed_mid(y)));
                assert_eq!(t.embed_mid(mid.field().add(x, y)), top.field().add(t.embed_mid(x), t.embed_mid(y)));
            }
            // the fixed field of x -> x^q is exactly the image of GF(q)
            let fixed: Vec<FieldElem> = mid.field().elements().filter(|&x| mid.frobenius(x, 1) == x).collect();
            assert_eq!(fixed.len() as u64, t.q());
            assert!(fixed.iter().all(|&x| mid.to_base(x).is_some()));
        }
    }

    #[test]
    fn rejects_oversized_towers() {
        assert!(matches!(FieldTower::new(2, 1, 12, 3), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(FieldTower::new(6, 1, 2, 1), Err(Error::NotPrime(6))));
    }

    #[test]
    fn spec_round_trip() {
        let t = FieldTower::new(3, 1, 3, 2).unwrap();
        let s = t.spec();
        let t2 = FieldTower::from_spec(&s).unwrap();
        assert_eq!(t2.top().field().modulus(), t.top().field().modulus());
        assert_eq!(t2.spec(), s);
    }
}
