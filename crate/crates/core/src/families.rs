//! Known MRD families and the Moore polynomial sets of the classification
//! table, with their side conditions evaluated exactly.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{delsarte_dual, RankMetricCode};
use crate::error::{Error, Result};
use crate::gf::{Extension, FieldElem};
use crate::linpoly::LinPoly;
use crate::moore::MoorePolySet;

/// Serialized as "G", "T", "Ps", "LP" or "row3" ... "row14".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FamilyId {
    /// Gabidulin codes.
    Gabidulin,
    /// Twisted Gabidulin codes.
    Twisted,
    /// Pseudoregulus-type scattered monomials.
    Pseudoregulus,
    /// Lunardon–Polverino binomials.
    Lp,
    /// Row 3..=14 of the table of known Moore polynomial sets.
    Row(u8),
}

impl From<FamilyId> for String {
    fn from(id: FamilyId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for FamilyId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Gabidulin => write!(f, "G"),
            FamilyId::Twisted => write!(f, "T"),
            FamilyId::Pseudoregulus => write!(f, "Ps"),
            FamilyId::Lp => write!(f, "LP"),
            FamilyId::Row(r) => write!(f, "row{r}"),
        }
    }
}

impl std::str::FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" => Ok(FamilyId::Gabidulin),
            "T" => Ok(FamilyId::Twisted),
            "Ps" => Ok(FamilyId::Pseudoregulus),
            "LP" => Ok(FamilyId::Lp),
            _ => s
                .strip_prefix("row")
                .and_then(|r| r.parse::<u8>().ok())
                .filter(|r| (3..=14).contains(r))
                .map(FamilyId::Row)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    Holds,
    Fails,
    /// The condition refers to choices not determined by the formula; the
    /// sweep has to decide.
    UnverifiableCondition,
}

impl From<bool> for Validity {
    fn from(b: bool) -> Self {
        if b {
            Validity::Holds
        } else {
            Validity::Fails
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub condition: String,
    pub status: Validity,
}

fn cond(name: impl Into<String>, status: impl Into<Validity>) -> Condition {
    Condition { condition: name.into(), status: status.into() }
}

/// A constructed member of a family.
#[derive(Clone, Debug, Serialize)]
pub struct Family {
    pub id: FamilyId,
    /// The tuple as printed; for (Ps) and (LP) this is (x^(q^t), f).
    pub polys: Vec<LinPoly>,
    /// Index t of the scattered polynomial, for (Ps) and (LP).
    pub index: Option<usize>,
    pub conditions: Vec<Condition>,
}

impl Family {
    pub fn code(&self) -> Result<RankMetricCode> {
        RankMetricCode::new(self.polys.clone())
    }

    pub fn moore_set(&self) -> Result<MoorePolySet> {
        MoorePolySet::new(self.polys.clone())
    }

    /// Whether no condition fails (unverifiable ones are not counted).
    pub fn valid(&self) -> bool {
        self.conditions.iter().all(|c| c.status != Validity::Fails)
    }

    /// The scattered polynomial f of an (Ps) or (LP) member.
    pub fn scattered_poly(&self) -> Option<&LinPoly> {
        self.index.map(|_| &self.polys[1])
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn residue(e: i64, n: usize) -> usize {
    e.rem_euclid(n as i64) as usize
}

fn gcd_condition(s: i64, n: usize) -> Condition {
    cond(format!("gcd(s, {n}) = 1"), gcd(s.unsigned_abs(), n as u64) == 1)
}

fn mono(space: &Arc<Extension>, e: i64) -> LinPoly {
    LinPoly::monomial(space.clone(), e, FieldElem::ONE)
}

fn terms(space: &Arc<Extension>, t: &[(i64, FieldElem)]) -> Result<LinPoly> {
    LinPoly::from_terms(space.clone(), t)
}

fn check_delta(space: &Extension, delta: FieldElem) -> Result<FieldElem> {
    space.field().check(delta)?;
    if delta.is_zero() {
        return Err(Error::InvalidParameter("δ must be nonzero".into()));
    }
    Ok(delta)
}

/// G_{k,s} = <x, x^(q^s), ..., x^(q^(s(k-1)))>.
pub fn gabidulin(space: &Arc<Extension>, k: usize, s: i64) -> Result<Family> {
    let n = space.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}")));
    }
    let mut seen = vec![false; n];
    for i in 0..k as i64 {
        let e = residue(s * i, n);
        if std::mem::replace(&mut seen[e], true) {
            return Err(Error::DuplicateExponent(s * i));
        }
    }
    let polys = (0..k as i64).map(|i| mono(space, s * i)).collect();
    Ok(Family { id: FamilyId::Gabidulin, polys, index: None, conditions: vec![gcd_condition(s, n)] })
}

/// H_{k,s}(δ) = <x^(q^s), ..., x^(q^(s(k-1))), x + δ x^(q^(sk))>.
pub fn twisted_gabidulin(space: &Arc<Extension>, k: usize, s: i64, delta: FieldElem) -> Result<Family> {
    let n = space.n();
    let delta = check_delta(space, delta)?;
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= k < n, got k = {k}")));
    }
    let mut seen = vec![false; n];
    for i in 0..=k as i64 {
        let e = residue(s * i, n);
        if std::mem::replace(&mut seen[e], true) {
            return Err(Error::DuplicateExponent(s * i));
        }
    }
    let mut polys: Vec<LinPoly> = (1..k as i64).map(|i| mono(space, s * i)).collect();
    polys.push(terms(space, &[(0, FieldElem::ONE), (s * k as i64, delta)])?);
    let base = space.base();
    let sign = if (n * k).is_multiple_of(2) { 1 } else { -1 };
    let norm = space.norm(delta)?;
    let conditions = vec![gcd_condition(s, n), cond(format!("N(δ) != (-1)^{}", n * k), norm != base.from_int(sign))];
    Ok(Family { id: FamilyId::Twisted, polys, index: None, conditions })
}

/// f = x^(q^s), scattered of index 0; the tuple is (x, f).
pub fn pseudoregulus(space: &Arc<Extension>, s: i64) -> Result<Family> {
    let n = space.n();
    if s <= 0 || s as usize >= n {
        return Err(Error::InvalidParameter(format!("need 0 < s < n, got s = {s}")));
    }
    Ok(Family {
        id: FamilyId::Pseudoregulus,
        polys: vec![mono(space, 0), mono(space, s)],
        index: Some(0),
        conditions: vec![gcd_condition(s, n)],
    })
}

/// f = x + δ x^(q^(2s)), scattered of index s; the tuple is (x^(q^s), f).
pub fn lp_poly(space: &Arc<Extension>, s: i64, delta: FieldElem) -> Result<Family> {
    let n = space.n();
    let delta = check_delta(space, delta)?;
    if s <= 0 || s as usize >= n || residue(2 * s, n) == 0 {
        return Err(Error::InvalidParameter(format!("s = {s} is out of range for n = {n}")));
    }
    let norm = space.norm(delta)?;
    Ok(Family {
        id: FamilyId::Lp,
        polys: vec![mono(space, s), terms(space, &[(0, FieldElem::ONE), (2 * s, delta)])?],
        index: Some(s as usize),
        conditions: vec![gcd_condition(s, n), cond("N(δ) != 1", norm != FieldElem::ONE)],
    })
}

fn require_n(space: &Extension, row: u8, n: usize) -> Result<()> {
    if space.n() != n {
        return Err(Error::InvalidParameter(format!("row {row} needs n = {n}, got {}", space.n())));
    }
    Ok(())
}

fn require_delta(row: u8, delta: Option<FieldElem>) -> Result<FieldElem> {
    delta.ok_or_else(|| Error::InvalidParameter(format!("row {row} needs δ")))
}

/// Row `row` (3..=14) of the table of known Moore polynomial sets, exactly
/// as printed. Condition failures are reported, not rejected.
pub fn table1_row(space: &Arc<Extension>, row: u8, s: i64, delta: Option<FieldElem>) -> Result<Family> {
    let fld = space.field();
    let q = space.q();
    let n = space.n();
    let odd = || cond("q odd", q % 2 == 1);
    let minus_one = fld.from_int(-1);
    let (polys, conditions) = match row {
        3 | 4 => {
            if !n.is_multiple_of(2) || n < 6 {
                return Err(Error::InvalidParameter(format!("row {row} needs n = 2t with t >= 3")));
            }
            let t = (n / 2) as i64;
            let d = check_delta(space, require_delta(row, delta)?)?;
            let norm = fld.pow(d, q.pow(t as u32) + 1);
            // δ^(q^s + 1) and δ^(1 - q^(s(2t-1)))
            let a = fld.mul(d, space.frobenius(d, s));
            let b = fld.div(d, space.frobenius(d, s * (2 * t - 1))).ok_or(Error::NotInvertible)?;
            let conditions = vec![odd(), cond("N_{q^2t/q^t}(δ) = -1", norm == minus_one), gcd_condition(s, n)];
            let polys = if row == 3 {
                vec![
                    mono(space, 0),
                    terms(
                        space,
                        &[(s, FieldElem::ONE), (s * (t - 1), FieldElem::ONE), (s * (t + 1), a), (s * (2 * t - 1), b)],
                    )?,
                ]
            } else {
                let skip = [0, 1, t - 1, t + 1, 2 * t - 1];
                let mut p: Vec<LinPoly> =
                    (0..2 * t).filter(|i| !skip.contains(i)).map(|i| mono(space, s * i)).collect();
                p.push(terms(space, &[(s, FieldElem::ONE), (s * (t - 1), minus_one)])?);
                p.push(terms(space, &[(s, a), (s * (t + 1), minus_one)])?);
                p.push(terms(space, &[(s, b), (s * (2 * t - 1), minus_one)])?);
                p
            };
            (polys, conditions)
        }
        5 | 6 => {
            require_n(space, row, 6)?;
            let d = check_delta(space, require_delta(row, delta)?)?;
            let conditions = vec![
                cond("q > 4", q > 4),
                Condition { condition: "certain choices of δ".into(), status: Validity::UnverifiableCondition },
            ];
            let polys = if row == 5 {
                vec![mono(space, 0), terms(space, &[(1, FieldElem::ONE), (4, d)])?]
            } else {
                let d5 = fld.neg(space.frobenius(d, 5));
                vec![mono(space, 1), mono(space, 2), mono(space, 4), terms(space, &[(0, FieldElem::ONE), (3, d5)])?]
            };
            (polys, conditions)
        }
        7 | 8 => {
            require_n(space, row, 6)?;
            let d = check_delta(space, require_delta(row, delta)?)?;
            let golden = fld.add(fld.mul(d, d), d) == FieldElem::ONE;
            let conditions = vec![odd(), cond("δ^2 + δ = 1", golden)];
            let polys = if row == 7 {
                vec![mono(space, 0), terms(space, &[(1, FieldElem::ONE), (3, FieldElem::ONE), (5, d)])?]
            } else {
                vec![
                    mono(space, 1),
                    mono(space, 3),
                    terms(space, &[(0, FieldElem::ONE), (2, minus_one)])?,
                    terms(space, &[(4, FieldElem::ONE), (0, fld.neg(d))])?,
                ]
            };
            (polys, conditions)
        }
        9..=12 => {
            let (nn, extra) = if row <= 10 { (7, odd()) } else { (8, cond("q ≡ 1 (mod 3)", q % 3 == 1)) };
            require_n(space, row, nn)?;
            let exps: &[i64] = match row {
                9 | 11 => &[0, 1, 3],
                10 => &[0, 2, 3, 4],
                _ => &[0, 2, 3, 4, 5],
            };
            let polys = exps.iter().map(|&i| mono(space, s * i)).collect();
            (polys, vec![extra, gcd_condition(s, nn)])
        }
        13 | 14 => {
            require_n(space, row, 8)?;
            let d = check_delta(space, require_delta(row, delta)?)?;
            let conditions = vec![odd(), cond("δ^2 = -1", fld.mul(d, d) == minus_one)];
            let polys = if row == 13 {
                vec![mono(space, 0), terms(space, &[(1, FieldElem::ONE), (5, d)])?]
            } else {
                let mut p: Vec<LinPoly> = [1, 2, 3, 5, 6].iter().map(|&i| mono(space, i)).collect();
                p.push(terms(space, &[(0, FieldElem::ONE), (4, fld.neg(d))])?);
                p
            };
            (polys, conditions)
        }
        _ => return Err(Error::InvalidParameter(format!("no table row {row}"))),
    };
    Ok(Family { id: FamilyId::Row(row), polys, index: None, conditions })
}

/// How a dual row relates to its primal row: the printed dual row with
/// parameter `dual_delta` spans the Delsarte dual of the primal row composed
/// on the right with x^(q^shift).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DualRelation {
    pub primal_row: u8,
    pub shift: usize,
    pub dual_delta: Option<FieldElem>,
}

pub fn dual_row_relation(space: &Extension, row: u8, s: i64, delta: Option<FieldElem>) -> Result<DualRelation> {
    let fld = space.field();
    let n = space.n();
    let (shift, dual_delta) = match row {
        4 => (0, delta),
        6 => {
            let d = require_delta(row, delta)?;
            (n - 1, Some(space.frobenius(fld.inv(d).ok_or(Error::NotInvertible)?, 1)))
        }
        8 => (n - 1, delta),
        10 => (residue(5 * s, n), None),
        12 => (residue(6 * s, n), None),
        14 => (n - 1, Some(fld.neg(require_delta(row, delta)?))),
        _ => return Err(Error::InvalidParameter(format!("row {row} is not a dual row"))),
    };
    Ok(DualRelation { primal_row: row - 1, shift, dual_delta })
}

/// Checks that the printed dual row spans the (shifted) Delsarte dual of the
/// primal row with parameter δ.
pub fn check_dual_row(space: &Arc<Extension>, row: u8, s: i64, delta: Option<FieldElem>) -> Result<bool> {
    let rel = dual_row_relation(space, row, s, delta)?;
    let primal = table1_row(space, rel.primal_row, s, delta)?.code()?;
    let dual = delsarte_dual(&primal)?;
    let dual = dual.code().ok_or_else(|| Error::Internal("primal row has full dimension".into()))?;
    let shift = mono(space, rel.shift as i64);
    let shifted = RankMetricCode::new(dual.basis().iter().map(|f| f.compose(&shift)).collect::<Result<Vec<_>>>()?)?;
    let printed = table1_row(space, row, s, rel.dual_delta)?.code()?;
    Ok(printed.same_span(&shifted))
}

/// Least-encoding nonzero δ of GF(q^n) satisfying `pred`.
pub fn find_delta(space: &Extension, pred: impl Fn(FieldElem) -> bool) -> Option<FieldElem> {
    space.field().elements().skip(1).find(|&d| pred(d))
}

/// The least-encoding δ meeting the row's δ-condition, when it has one that
/// can be decided.
pub fn default_delta(space: &Extension, row: u8) -> Option<FieldElem> {
    let fld = space.field();
    let q = space.q();
    let minus_one = fld.from_int(-1);
    match row {
        3 | 4 => {
            let qt = q.pow((space.n() / 2) as u32);
            find_delta(space, |d| fld.pow(d, qt + 1) == minus_one)
        }
        7 | 8 => find_delta(space, |d| fld.add(fld.mul(d, d), d) == FieldElem::ONE),
        13 | 14 => find_delta(space, |d| fld.mul(d, d) == minus_one),
        _ => None,
    }
}
