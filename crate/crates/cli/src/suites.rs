//! Named acceptance suites. Each case records what was computed and whether
//! it matched the expectation; the suite passes when no case fails.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankmetric::code::{delsarte_dual, Guard, Strategy};
use rankmetric::families::{self, FamilyId};
use rankmetric::gf::Extension;
use rankmetric::moore::{self, MoorePolySet};
use rankmetric::variety::{self, MvPoly};
use rankmetric::{Error, FieldElem, FieldTower, LinPoly, RankMetricCode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::wire::{polys_json, to_value};
use crate::{verify, CliError, Reply, Settings};

pub const SUITES: [&str; 4] = ["paper-smoke", "oracle-equivalence", "table1", "duality"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Pass,
    Fail,
    /// Not decidable within the configured guards.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub status: CaseStatus,
    pub detail: Value,
}

impl Case {
    fn check(name: impl Into<String>, pass: bool, detail: Value) -> Self {
        let status = if pass { CaseStatus::Pass } else { CaseStatus::Fail };
        Case { name: name.into(), status, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    fn new(suite: &str, cases: Vec<Case>) -> Self {
        let count = |s| cases.iter().filter(|c| c.status == s).count();
        let failed = count(CaseStatus::Fail);
        SuiteReport {
            suite: suite.into(),
            pass: failed == 0,
            passed: count(CaseStatus::Pass),
            failed,
            skipped: count(CaseStatus::Skipped),
            cases,
        }
    }
}

pub fn run(name: &str, s: &Settings) -> Result<Reply, CliError> {
    let report = run_suite(name, s)?;
    Ok(Reply { property_false: !report.pass, result: to_value(&report), certificate: None })
}

pub fn run_suite(name: &str, s: &Settings) -> Result<SuiteReport, CliError> {
    let cases = match name {
        "paper-smoke" => paper_smoke(s)?,
        "oracle-equivalence" => oracle_equivalence(s)?,
        "table1" => table1(s)?,
        "duality" => duality(s)?,
        _ => return Err(CliError::Invalid(format!("unknown suite {name:?} (expected one of {})", SUITES.join(", ")))),
    };
    Ok(SuiteReport::new(name, cases))
}

fn tower(p: u64, n: u32) -> Result<FieldTower, CliError> {
    Ok(FieldTower::new(p, 1, n, 1)?)
}

fn mono(space: &Arc<Extension>, i: i64) -> LinPoly {
    LinPoly::monomial(space.clone(), i, FieldElem::ONE)
}

/// A uniformly random k-dimensional code (redrawn until the basis is
/// independent).
pub fn random_code(space: &Arc<Extension>, k: usize, rng: &mut ChaCha8Rng) -> RankMetricCode {
    loop {
        let basis = (0..k).map(|_| LinPoly::random(space.clone(), rng)).collect();
        if let Ok(c) = RankMetricCode::new(basis) {
            return c;
        }
    }
}

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Oracle, MRD and variety verdicts for one set, with certificates checked.
#[derive(Clone, Debug, Serialize)]
pub struct TripleVerdict {
    pub oracle: bool,
    pub mrd: bool,
    pub variety: bool,
    pub witnesses: [Option<Vec<u32>>; 3],
}

impl TripleVerdict {
    pub fn agree(&self) -> bool {
        self.oracle == self.mrd && self.mrd == self.variety
    }
}

pub fn triple_verdict(set: &MoorePolySet, guard: &Guard) -> Result<TripleVerdict, CliError> {
    let oracle = moore::is_moore_oracle(set, guard)?;
    let mrd = moore::is_moore(set, guard, Strategy::Auto)?;
    let w = variety::build_w(set, guard)?;
    let points = variety::first_point_off_v(&w, set.space(), guard)?;
    for p in [&oracle.witness, &mrd.witness].into_iter().flatten() {
        verify::moore_witness(set, p)?;
    }
    if let Some(p) = &points {
        verify::variety_witness(set, &w, p)?;
    }
    let enc = |w: &Option<Vec<FieldElem>>| w.as_ref().map(|v| v.iter().map(|e| e.0).collect());
    Ok(TripleVerdict {
        oracle: oracle.verdict,
        mrd: mrd.verdict,
        variety: points.is_none(),
        witnesses: [enc(&oracle.witness), enc(&mrd.witness), enc(&points)],
    })
}

/// W·V = F and deg W = Σ q^{M_j} − (q^k − 1)/(q − 1) with M_j the top
/// q-degrees of the normalized basis.
pub fn structural_check(set: &MoorePolySet, guard: &Guard) -> Result<(bool, Value), CliError> {
    let space = set.space();
    let f = variety::build_f(set, guard)?;
    let v = variety::build_v(space, set.k(), guard)?;
    let w = variety::divide_by_v(&f, space)?;
    let normalized = moore::normalize(&set.code())?;
    let q = space.q();
    let k = set.k() as u32;
    let expected = normalized.top_degrees().iter().map(|&m| q.pow(m as u32)).sum::<u64>() - (q.pow(k) - 1) / (q - 1);
    let product = w.mul(&v)? == f;
    let degree = w.degree();
    Ok((
        product && degree == Some(expected),
        json!({ "w_times_v_is_f": product, "degree_w": degree, "expected_degree": expected }),
    ))
}

fn counterexample(guard: &Guard) -> Result<Case, CliError> {
    let t = tower(2, 4)?;
    let set = MoorePolySet::new(vec![mono(t.ext(), 0), mono(t.ext(), 2)])?;
    let v = triple_verdict(&set, guard)?;
    let consistent = v.witnesses.iter().all(|w| w.is_some()) && v.witnesses.iter().all(|w| *w == v.witnesses[0]);
    let pass = !v.oracle && !v.mrd && !v.variety && consistent;
    Ok(Case::check("(x, x^(q^2)) at q=2, n=4 is not Moore", pass, to_value(&v)))
}

/// W for (x, x^(q^2)) at q = 2.
pub fn worked_w() -> Result<(MvPoly, MvPoly), CliError> {
    let t = tower(2, 4)?;
    let set = MoorePolySet::new(vec![mono(t.ext(), 0), mono(t.ext(), 2)])?;
    let w = variety::build_w(&set, &Guard::default())?;
    let one = FieldElem::ONE;
    let expected = MvPoly::from_terms(t.mid().clone(), 2, &[(vec![2, 0], one), (vec![1, 1], one), (vec![0, 2], one)])?;
    Ok((w, expected))
}

/// (0:1:0) and (1:γ:0), γ ∈ GF(q), in the order `points_at_infinity` lists
/// them.
pub fn expected_infinity(space: &Extension) -> Vec<[u32; 3]> {
    let one = FieldElem::ONE.0;
    let mut v = vec![[0, one, 0]];
    v.extend(space.base().elements().map(|g| [one, space.embed(g).0, 0]));
    v
}

fn paper_smoke(s: &Settings) -> Result<Vec<Case>, CliError> {
    let guard = &s.guard;
    let mut cases = vec![counterexample(guard)?];

    let (w, expected) = worked_w()?;
    cases.push(Case::check(
        "W(x, x^(q^2)) at q=2 is X1^2 + X1 X2 + X2^2",
        w == expected,
        json!({ "W": w.to_string() }),
    ));

    let t = tower(2, 4)?;
    let g = families::gabidulin(t.ext(), 2, 1)?.code()?;
    let r = g.is_mrd_with(guard, Strategy::Auto)?;
    cases.push(Case::check("Gabidulin G_{2,1} at q=2, n=4 is MRD", r.verdict, to_value(&r)));

    let t3 = tower(3, 4)?;
    let minus_one = t3.base().from_int(-1);
    let delta = families::find_delta(t3.ext(), |d| t3.ext().norm(d).is_ok_and(|v| v == minus_one))
        .ok_or_else(|| Error::Internal("no δ of norm -1".into()))?;
    let tw = families::twisted_gabidulin(t3.ext(), 2, 1, delta)?;
    let r = tw.code()?.is_mrd_with(guard, Strategy::Auto)?;
    cases.push(Case::check(
        "twisted Gabidulin at q=3, n=4, N(δ) = -1 is MRD",
        r.verdict && tw.valid(),
        json!({ "delta": delta.0, "verdict": r.verdict }),
    ));

    let t5 = tower(2, 5)?;
    let ps = families::pseudoregulus(t5.ext(), 1)?;
    let set = ps.moore_set()?;
    let r = moore::is_moore(&set, guard, Strategy::Auto)?;
    let index = moore::index_of(&set.code())?;
    cases.push(Case::check(
        "pseudoregulus at q=2, n=5 is Moore with index 0",
        r.verdict && index == 0,
        json!({ "verdict": r.verdict, "index": index }),
    ));

    let set = MoorePolySet::new(vec![mono(t.ext(), 0), mono(t.ext(), 1), mono(t.ext(), 2)])?;
    let h = variety::specialize_curve(&set, &[t.mid().generator()], guard)?;
    let points: Vec<[u32; 3]> = variety::points_at_infinity(&h)?.iter().map(|p| p.map(|e| e.0)).collect();
    let expected = expected_infinity(t.ext());
    cases.push(Case::check(
        "points at infinity of H for (x, x^q, x^(q^2)) at q=2, n=4",
        points == expected,
        json!({ "points": points, "expected": expected }),
    ));

    let one = FieldElem::ONE;
    let c = MvPoly::from_terms(t.mid().clone(), 2, &[(vec![1, 2], one), (vec![2, 1], t.mid().from_int(-1))])?;
    let lf = variety::translate_lowest_form(&c, &[FieldElem::ZERO, FieldElem::ZERO])?;
    cases.push(Case::check(
        "lowest form of X1 X2^q - X2 X1^q at the origin has degree q+1",
        lf.m == 3,
        json!({ "m": lf.m }),
    ));
    Ok(cases)
}

/// The monomial pairs (x^(q^i), x^(q^j)), 0 ≤ i < j < n, at q = 2, n = 4,
/// followed by `random` seeded 2-dimensional codes.
pub fn oracle_pool(seed: u64, random: usize) -> Result<Vec<(String, MoorePolySet)>, CliError> {
    let t = tower(2, 4)?;
    let space = t.ext();
    let mut pool = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            pool.push((format!("(x^(q^{i}), x^(q^{j}))"), MoorePolySet::new(vec![mono(space, i), mono(space, j)])?));
        }
    }
    let mut r = rng(seed, 1);
    for i in 0..random {
        let c = random_code(space, 2, &mut r);
        pool.push((format!("random #{i}"), MoorePolySet::new(c.basis().to_vec())?));
    }
    Ok(pool)
}

fn oracle_equivalence(s: &Settings) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    for (name, set) in oracle_pool(s.seed, 50)? {
        let v = triple_verdict(&set, &s.guard)?;
        let (structural, detail) = structural_check(&set, &s.guard)?;
        cases.push(Case::check(
            name,
            v.agree() && structural,
            json!({ "polys": polys_json(set.polys()), "verdicts": to_value(&v), "structure": detail }),
        ));
    }
    Ok(cases)
}

/// Smallest parameters at which each row's conditions can hold.
pub fn row_params(row: u8) -> (u64, u32, u32) {
    // (p, h, n)
    match row {
        3 | 4 => (3, 1, 6),
        5 | 6 => (5, 1, 6),
        7 | 8 => (3, 1, 6),
        9 | 10 => (3, 1, 7),
        11 | 12 => (2, 2, 8),
        _ => (3, 1, 8),
    }
}

/// Row 5's δ is "certain choices": the least-encoding δ whose row-5 set is
/// Moore.
pub fn row5_delta(space: &Arc<Extension>, guard: &Guard) -> Result<Option<FieldElem>, CliError> {
    for d in space.field().elements().skip(1) {
        let set = families::table1_row(space, 5, 1, Some(d))?.moore_set()?;
        if moore::is_moore(&set, guard, Strategy::Auto)?.verdict {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

fn table1(s: &Settings) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    let mut row5 = None;
    for row in 3..=14u8 {
        let (p, h, n) = row_params(row);
        let t = FieldTower::new(p, h, n, 1)?;
        let space = t.ext();
        let delta = match row {
            5 => {
                row5 = row5_delta(space, &s.guard)?;
                row5
            }
            6 => row5
                .map(|d| -> Result<_, CliError> {
                    Ok(families::dual_row_relation(space, 6, 1, Some(d))?.dual_delta.expect("row 6 has δ'"))
                })
                .transpose()?,
            9..=12 => None,
            _ => families::default_delta(space, row),
        };
        let name = format!("row {row} at q={}, n={n}", t.q());
        if delta.is_none() && !(9..=12).contains(&row) {
            cases.push(Case::check(name, false, json!({ "error": "no admissible δ" })));
            continue;
        }
        let fam = families::table1_row(space, row, 1, delta)?;
        let set = fam.moore_set()?;
        let mut detail = json!({
            "row": row,
            "q": t.q(),
            "n": n,
            "k": set.k(),
            "delta": delta.map(|d| d.0),
            "conditions": to_value(&fam.conditions),
        });
        let mut dual_ok = true;
        if row % 2 == 0 {
            let primal = match (row, delta) {
                (6, _) => row5,
                (14, Some(d)) => Some(t.mid().neg(d)),
                _ => delta,
            };
            dual_ok = families::check_dual_row(space, row, 1, primal)?;
            detail["dual_relation_holds"] = json!(dual_ok);
        }
        match moore::is_moore(&set, &s.guard, Strategy::Auto) {
            Ok(r) => {
                if let Some(w) = &r.witness {
                    verify::moore_witness(&set, w)?;
                }
                detail["verdict"] = json!(r.verdict);
                detail["steps"] = json!(r.steps);
                let pass = r.verdict && dual_ok && fam.id == FamilyId::Row(row);
                cases.push(Case::check(name, pass, detail));
            }
            Err(Error::GuardExceeded { needed, limit }) => {
                detail["verdict"] = Value::Null;
                detail["guard"] = json!({ "needed": needed.to_string(), "limit": limit });
                let status = if dual_ok { CaseStatus::Skipped } else { CaseStatus::Fail };
                cases.push(Case { name, status, detail });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(cases)
}

/// The k-th seeded duality instance: q = 2, n = 4, k = 1 + (i mod 3).
pub fn duality_pool(seed: u64, count: usize) -> Result<Vec<RankMetricCode>, CliError> {
    let t = tower(2, 4)?;
    let mut r = rng(seed, 2);
    Ok((0..count).map(|i| random_code(t.ext(), 1 + i % 3, &mut r)).collect())
}

fn duality(s: &Settings) -> Result<Vec<Case>, CliError> {
    let mut cases = Vec::new();
    for (i, c) in duality_pool(s.seed, 25)?.into_iter().enumerate() {
        let dual = delsarte_dual(&c)?;
        let d = dual.code().ok_or_else(|| Error::Internal("dual of a proper code is zero".into()))?;
        let back = delsarte_dual(d)?;
        let involution = back.code().is_some_and(|b| b.same_span(&c));
        let mrd = c.is_mrd_with(&s.guard, Strategy::Auto)?;
        let dist = c.min_distance_with(&s.guard, Strategy::Auto)?;
        let dual_mrd = d.is_mrd_with(&s.guard, Strategy::Auto)?.verdict;
        let needs_mrd_dual = mrd.verdict && dist > 1;
        cases.push(Case::check(
            format!("random #{i} (k={})", c.k()),
            involution && (!needs_mrd_dual || dual_mrd),
            json!({
                "basis": polys_json(c.basis()),
                "double_dual_is_code": involution,
                "mrd": mrd.verdict,
                "min_distance": dist,
                "dual_mrd": dual_mrd,
            }),
        ));
    }
    for row in [4u8, 6, 8, 10, 12, 14] {
        let (p, h, n) = match row {
            12 => (3, 1, 8),
            r => row_params(r),
        };
        let t = FieldTower::new(p, h, n, 1)?;
        let space = t.ext();
        let primal = match row {
            6 => Some(t.mid().generator()),
            10 | 12 => None,
            r => families::default_delta(space, r - 1),
        };
        let holds = families::check_dual_row(space, row, 1, primal)?;
        let rel = families::dual_row_relation(space, row, 1, primal)?;
        cases.push(Case::check(
            format!("row {row} is the shifted dual of row {} at q={}, n={n}", rel.primal_row, t.q()),
            holds,
            json!({ "shift": rel.shift, "primal_delta": primal.map(|d| d.0), "dual_delta": rel.dual_delta.map(|d| d.0) }),
        ));
    }
    Ok(cases)
}
