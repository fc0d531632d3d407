//! F_{q^n}-linear rank-metric codes inside L_{n,q}.

pub mod sweep;

mod dual;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use dual::{bilinear, delsarte_dual, left_idealiser, right_idealiser, Dual, Idealiser};
pub use sweep::{Guard, Strategy, DEFAULT_MAX_STEPS};

use crate::error::{Error, Result};
use crate::gf::linalg;
use crate::gf::{Extension, FieldElem, FieldTower};
use crate::linpoly::LinPoly;
use sweep::{codeword_at, codeword_count, subspace_count, Evaluator, SubspaceIndex};

/// The F_{q^n}-span of k independent linearized polynomials.
#[derive(Clone, Debug)]
pub struct RankMetricCode {
    space: Arc<Extension>,
    basis: Vec<LinPoly>,
}

impl RankMetricCode {
    /// Checks independence over GF(q^n); the basis is kept as given.
    pub fn new(basis: Vec<LinPoly>) -> Result<Self> {
        let first = basis.first().ok_or(Error::EmptyBasis)?;
        let space = first.space().clone();
        for f in &basis {
            if *f.space().as_ref() != *space {
                return Err(Error::ContextMismatch);
            }
        }
        let n = space.n();
        if basis.len() > n {
            return Err(Error::TooManyGenerators { k: basis.len(), n });
        }
        let rows: Vec<Vec<FieldElem>> = basis.iter().map(|f| f.coeffs().to_vec()).collect();
        if linalg::rank(space.field(), &rows) != basis.len() {
            return Err(Error::DependentBasis);
        }
        Ok(RankMetricCode { space, basis })
    }

    pub fn space(&self) -> &Arc<Extension> {
        &self.space
    }

    pub fn basis(&self) -> &[LinPoly] {
        &self.basis
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn q(&self) -> u64 {
        self.space.q()
    }

    /// Σ b_i f_i.
    pub fn codeword(&self, b: &[FieldElem]) -> Result<LinPoly> {
        if b.len() != self.k() {
            return Err(Error::Arity { expected: self.k(), got: b.len() });
        }
        let f = self.space.field();
        let mut coeffs = vec![FieldElem::ZERO; self.n()];
        for (&bi, p) in b.iter().zip(&self.basis) {
            f.check(bi)?;
            for (c, &a) in coeffs.iter_mut().zip(p.coeffs()) {
                *c = f.add(*c, f.mul(bi, a));
            }
        }
        LinPoly::new(self.space.clone(), coeffs)
    }

    /// Coordinates of `g` in the basis, if g ∈ C.
    pub fn coordinates_of(&self, g: &LinPoly) -> Option<Vec<FieldElem>> {
        if *g.space().as_ref() != *self.space {
            return None;
        }
        let k = self.k();
        let n = self.n();
        // columns are basis vectors, augmented with g
        let mut aug: Vec<Vec<FieldElem>> = (0..n)
            .map(|l| {
                let mut row: Vec<FieldElem> = self.basis.iter().map(|f| f.coeff(l)).collect();
                row.push(g.coeff(l));
                row
            })
            .collect();
        let pivots = linalg::rref(self.space.field(), &mut aug);
        if pivots.contains(&k) {
            return None;
        }
        Some((0..k).map(|i| aug[i][k]).collect())
    }

    pub fn contains(&self, g: &LinPoly) -> bool {
        self.coordinates_of(g).is_some()
    }

    /// Equality as F_{q^n}-subspaces.
    pub fn same_span(&self, other: &RankMetricCode) -> bool {
        self.k() == other.k() && other.basis.iter().all(|g| self.contains(g))
    }

    /// The reduced row echelon basis of the coefficient vectors: a canonical
    /// representative of the subspace.
    pub fn echelon_basis(&self) -> Vec<LinPoly> {
        let mut rows: Vec<Vec<FieldElem>> = self.basis.iter().map(|f| f.coeffs().to_vec()).collect();
        linalg::rref(self.space.field(), &mut rows);
        rows.into_iter().map(|r| LinPoly::from_vec_unchecked(self.space.clone(), r)).collect()
    }

    pub fn echelon(&self) -> RankMetricCode {
        RankMetricCode { space: self.space.clone(), basis: self.echelon_basis() }
    }

    /// (q^(nk) - 1)/(q^n - 1).
    pub fn codeword_count(&self) -> u128 {
        codeword_count(self.space.order(), self.k())
    }

    /// Number of k-dimensional F_q-subspaces of F_{q^n}.
    pub fn subspace_count(&self) -> u128 {
        subspace_count(self.q(), self.n(), self.k())
    }

    fn pick(&self, strategy: Strategy) -> Route {
        match strategy {
            Strategy::Codewords => Route::Codewords,
            Strategy::Subspaces => Route::Subspaces,
            Strategy::Auto => {
                if self.subspace_count() < self.codeword_count() {
                    Route::Subspaces
                } else {
                    Route::Codewords
                }
            }
        }
    }

    /// MRD test with the default guard and strategy.
    pub fn is_mrd(&self) -> Result<MrdReport> {
        self.is_mrd_with(&Guard::default(), Strategy::Auto)
    }

    /// Decides whether every nonzero codeword has kernel dimension at most
    /// k - 1. On failure the witness is the first violating codeword of the
    /// chosen enumeration order.
    pub fn is_mrd_with(&self, guard: &Guard, strategy: Strategy) -> Result<MrdReport> {
        let n = self.n();
        let k = self.k();
        if k == n {
            // every nonzero map has rank >= 1 = n - k + 1
            return Ok(MrdReport::holds(n, k, Route::Codewords, 0));
        }
        let ev = Evaluator::new(&self.space, &self.basis);
        let route = self.pick(strategy);
        let big_q = self.space.order();
        let found = match route {
            Route::Codewords => {
                let count = guard.check(self.codeword_count())?;
                let need = n - k + 1;
                let hit = sweep::find_first(
                    count,
                    || (ev.scratch(0), vec![FieldElem::ZERO; k]),
                    |(s, b), i| {
                        codeword_at(big_q, i, b);
                        ev.rank(b, s) < need
                    },
                );
                hit.map(|i| {
                    let mut b = vec![FieldElem::ZERO; k];
                    codeword_at(big_q, i, &mut b);
                    b
                })
                .map(|b| (b, count))
                .ok_or(count)
            }
            Route::Subspaces => {
                let idx = SubspaceIndex::new(self.q(), n, k, guard)?;
                let count = idx.len();
                let hit = sweep::find_first(
                    count,
                    || (ev.scratch(k), vec![vec![FieldElem::ZERO; n]; k]),
                    |(s, rows), i| {
                        idx.at(i, rows);
                        ev.subspace_killed(rows, s)
                    },
                );
                match hit {
                    Some(i) => {
                        let mut rows = vec![vec![FieldElem::ZERO; n]; k];
                        idx.at(i, &mut rows);
                        let b = ev
                            .killing_codeword(&rows)
                            .ok_or_else(|| Error::Internal("singular matrix without null vector".into()))?;
                        Ok((b, count))
                    }
                    None => Err(count),
                }
            }
        };
        match found {
            Err(steps) => Ok(MrdReport::holds(n, k, route, steps)),
            Ok((b, steps)) => {
                let w = self.codeword(&b)?;
                let kd = w.kernel_dim();
                if kd < k {
                    return Err(Error::Internal("MRD witness has small kernel".into()));
                }
                Ok(MrdReport {
                    verdict: false,
                    min_distance: n - kd,
                    min_distance_exact: n - kd == 1,
                    witness: Some(b),
                    witness_kernel_dim: Some(kd),
                    route,
                    steps,
                })
            }
        }
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with(&Guard::default(), Strategy::Auto)
    }

    /// Exact minimum rank distance.
    pub fn min_distance_with(&self, guard: &Guard, strategy: Strategy) -> Result<usize> {
        let n = self.n();
        let k = self.k();
        if k == n {
            return Ok(1);
        }
        match self.pick(strategy) {
            Route::Codewords => {
                let hist = self.rank_histogram(guard)?;
                Ok(hist.iter().position(|&c| c > 0).unwrap_or(n))
            }
            Route::Subspaces => {
                // every code has a codeword vanishing on some (k-1)-space, so
                // the largest kernel has dimension >= k - 1
                let ev = Evaluator::new(&self.space, &self.basis);
                let mut best = k - 1;
                for j in k..n {
                    let idx = SubspaceIndex::new(self.q(), n, j, guard)?;
                    let hit = sweep::find_first(
                        idx.len(),
                        || (ev.scratch(j), vec![vec![FieldElem::ZERO; n]; j]),
                        |(s, rows), i| {
                            idx.at(i, rows);
                            ev.subspace_killed(rows, s)
                        },
                    );
                    if hit.is_none() {
                        break;
                    }
                    best = j;
                }
                Ok(n - best)
            }
        }
    }

    /// Number of projective codewords (first nonzero coordinate 1) of each
    /// rank 0..=n.
    pub fn rank_histogram(&self, guard: &Guard) -> Result<Vec<u64>> {
        let count = guard.check(self.codeword_count())?;
        let k = self.k();
        let big_q = self.space.order();
        let ev = Evaluator::new(&self.space, &self.basis);
        Ok(sweep::histogram(
            count,
            self.n() + 1,
            || (ev.scratch(0), vec![FieldElem::ZERO; k]),
            |(s, b), i| {
                codeword_at(big_q, i, b);
                ev.rank(b, s)
            },
        ))
    }

    /// Number of codewords of each rank 0..=n, including the zero word.
    pub fn weight_distribution(&self, guard: &Guard) -> Result<Vec<u64>> {
        let mut hist = self.rank_histogram(guard)?;
        let scale = self.space.order() - 1;
        for h in hist.iter_mut() {
            *h *= scale;
        }
        hist[0] = 1;
        Ok(hist)
    }

    /// g ∘ C^ρ ∘ h = {g ∘ f^ρ ∘ h : f ∈ C}, where ρ: a ↦ a^(p^rho_exp) acts
    /// on coefficients. Fails with `InvalidParameter` when the image is not
    /// F_{q^n}-linear (e.g. g not of the form a·x^(q^i)).
    pub fn transform(&self, g: &LinPoly, h: &LinPoly, rho_exp: u32) -> Result<RankMetricCode> {
        let e = self.space.field().degree();
        if rho_exp >= e {
            return Err(Error::InvalidParameter(format!("Frobenius exponent {rho_exp} must be below {e}")));
        }
        if !g.is_invertible() || !h.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let image = |f: &LinPoly| g.compose(&f.frob_coeffs(rho_exp))?.compose(h);
        let basis = self.basis.iter().map(image).collect::<Result<Vec<_>>>()?;
        let out = RankMetricCode::new(basis)?;
        // the image is only F_q-linear in general; it is a code of this kind
        // exactly when it is closed under the scalars of GF(q^n)
        for f in &self.basis {
            for &lambda in self.space.basis() {
                if !out.contains(&image(&f.scale(lambda))?) {
                    return Err(Error::InvalidParameter("g ∘ C^ρ ∘ h is not F_{q^n}-linear for this g".into()));
                }
            }
        }
        Ok(out)
    }

    /// The span of the same basis over GF(q^(nm)).
    pub fn lift(&self, tower: &FieldTower) -> Result<RankMetricCode> {
        let basis = self.basis.iter().map(|f| f.lift(tower)).collect::<Result<Vec<_>>>()?;
        RankMetricCode::new(basis)
    }

    /// MRD verdicts of the lifts to GF(q^(nm)) for m = 1..=m_max. Stops at
    /// the first level whose sweep exceeds the guard or field limit.
    pub fn exceptional_probe(
        &self,
        tower: &FieldTower,
        m_max: u32,
        guard: &Guard,
        strategy: Strategy,
    ) -> Result<ProbeReport> {
        if *tower.ext().as_ref() != *self.space {
            return Err(Error::ContextMismatch);
        }
        let mut levels = Vec::new();
        for m in 1..=m_max {
            let attempt = tower.with_m(m).and_then(|t| self.lift(&t)).and_then(|c| c.is_mrd_with(guard, strategy));
            match attempt {
                Ok(report) => levels.push(ProbeLevel { m, report }),
                Err(e @ (Error::GuardExceeded { .. } | Error::FieldTooLarge { .. })) => {
                    return Ok(ProbeReport { levels, truncated_at: Some(m), reason: Some(e.to_string()) });
                }
                Err(e) => return Err(e),
            }
        }
        Ok(ProbeReport { levels, truncated_at: None, reason: None })
    }

    /// Invariants that equivalent codes share.
    pub fn fingerprint(&self, guard: &Guard) -> Result<Fingerprint> {
        let weights = self.weight_distribution(guard)?;
        let d = weights.iter().skip(1).position(|&c| c > 0).map(|i| i + 1).unwrap_or(0);
        Ok(Fingerprint {
            q: self.q(),
            n: self.n(),
            k: self.k(),
            min_distance: d,
            weight_distribution: weights,
            left_idealiser_dim: left_idealiser(self)?.dim,
            right_idealiser_dim: right_idealiser(self)?.dim,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Codewords,
    Subspaces,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrdReport {
    pub verdict: bool,
    /// n - k + 1 when the code is MRD; otherwise the rank of the witness,
    /// which is exact only if `min_distance_exact`.
    pub min_distance: usize,
    pub min_distance_exact: bool,
    /// Coordinates b_1..b_k of a codeword with kernel dimension >= k.
    pub witness: Option<Vec<FieldElem>>,
    pub witness_kernel_dim: Option<usize>,
    pub route: Route,
    pub steps: u64,
}

impl MrdReport {
    fn holds(n: usize, k: usize, route: Route, steps: u64) -> Self {
        MrdReport {
            verdict: true,
            min_distance: n - k + 1,
            min_distance_exact: true,
            witness: None,
            witness_kernel_dim: None,
            route,
            steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeLevel {
    pub m: u32,
    pub report: MrdReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub levels: Vec<ProbeLevel>,
    /// First level that could not be decided, if any.
    pub truncated_at: Option<u32>,
    pub reason: Option<String>,
}

impl ProbeReport {
    pub fn all_mrd(&self) -> bool {
        self.levels.iter().all(|l| l.report.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub min_distance: usize,
    pub weight_distribution: Vec<u64>,
    pub left_idealiser_dim: usize,
    pub right_idealiser_dim: usize,
}
