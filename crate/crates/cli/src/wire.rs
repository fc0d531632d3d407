//! JSON wire formats: elements, polynomials, codes and request payloads.

use std::sync::Arc;

use rankmetric::gf::{Extension, FieldCtx};
use rankmetric::variety::MvPoly;
use rankmetric::{FieldElem, FieldSpec, FieldTower, LinPoly, RankMetricCode};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::CliError;

/// An element as a base-p integer encoding or a string: a decimal encoding
/// or `g^k` for a power of the field generator.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElemWire {
    Int(u64),
    Str(String),
}

pub fn parse_element(s: &str, ctx: &FieldCtx) -> Result<FieldElem, CliError> {
    let s = s.trim();
    if let Some(k) = s.strip_prefix("g^") {
        let k: i64 = k.trim().parse().map_err(|_| CliError::Invalid(format!("malformed exponent in {s:?}")))?;
        let g = ctx.generator();
        return ctx.pow_signed(g, k).ok_or_else(|| CliError::Invalid(format!("{s:?} is undefined")));
    }
    if s == "g" {
        return Ok(ctx.generator());
    }
    let v: u64 = s.parse().map_err(|_| CliError::Invalid(format!("malformed element {s:?}")))?;
    Ok(ctx.from_u64(v)?)
}

impl ElemWire {
    pub fn decode(&self, ctx: &FieldCtx) -> Result<FieldElem, CliError> {
        match self {
            ElemWire::Int(v) => Ok(ctx.from_u64(*v)?),
            ElemWire::Str(s) => parse_element(s, ctx),
        }
    }
}

pub fn decode_elems(v: &[ElemWire], ctx: &FieldCtx) -> Result<Vec<FieldElem>, CliError> {
    v.iter().map(|e| e.decode(ctx)).collect()
}

/// A linearized polynomial: the dense coefficient list a_0..a_(n-1), or
/// `{"terms": [[i, a_i], ...]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PolyWire {
    Dense(Vec<ElemWire>),
    Sparse(SparsePoly),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparsePoly {
    pub terms: Vec<(i64, ElemWire)>,
}

impl PolyWire {
    pub fn decode(&self, space: &Arc<Extension>) -> Result<LinPoly, CliError> {
        let ctx = space.field();
        match self {
            PolyWire::Dense(c) => Ok(LinPoly::new(space.clone(), decode_elems(c, ctx)?)?),
            PolyWire::Sparse(s) => {
                let terms =
                    s.terms.iter().map(|(i, a)| Ok((*i, a.decode(ctx)?))).collect::<Result<Vec<_>, CliError>>()?;
                Ok(LinPoly::from_terms(space.clone(), &terms)?)
            }
        }
    }
}

pub fn decode_polys(v: &[PolyWire], space: &Arc<Extension>) -> Result<Vec<LinPoly>, CliError> {
    v.iter().map(|p| p.decode(space)).collect()
}

pub fn decode_code(v: &[PolyWire], space: &Arc<Extension>) -> Result<RankMetricCode, CliError> {
    Ok(RankMetricCode::new(decode_polys(v, space)?)?)
}

/// Sparse multivariate polynomial: `[[exponents...], coefficient]` pairs.
pub type MvPolyWire = Vec<(Vec<u32>, ElemWire)>;

pub fn decode_mvpoly(terms: &MvPolyWire, nvars: Option<usize>, ctx: &Arc<FieldCtx>) -> Result<MvPoly, CliError> {
    let nvars = nvars
        .or_else(|| terms.first().map(|t| t.0.len()))
        .ok_or_else(|| CliError::Invalid("cannot infer the number of variables of an empty polynomial".into()))?;
    let terms = terms.iter().map(|(e, c)| Ok((e.clone(), c.decode(ctx)?))).collect::<Result<Vec<_>, CliError>>()?;
    Ok(MvPoly::from_terms(ctx.clone(), nvars, &terms)?)
}

pub fn tower(spec: &FieldSpec) -> Result<FieldTower, CliError> {
    Ok(FieldTower::from_spec(spec)?)
}

pub fn elems_json(v: &[FieldElem]) -> Value {
    json!(v.iter().map(|e| e.0).collect::<Vec<_>>())
}

pub fn poly_json(f: &LinPoly) -> Value {
    elems_json(f.coeffs())
}

pub fn polys_json(v: &[LinPoly]) -> Value {
    Value::Array(v.iter().map(poly_json).collect())
}

pub fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("wire types serialize infallibly")
}

// Request payloads. Every command reads one of these from the input JSON.

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldOnly {
    pub field: FieldSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalReq {
    pub field: FieldSpec,
    pub poly: PolyWire,
    pub points: Vec<ElemWire>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeReq {
    pub field: FieldSpec,
    pub f: PolyWire,
    pub g: PolyWire,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeReq {
    pub field: FieldSpec,
    pub code: Vec<PolyWire>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformReq {
    pub field: FieldSpec,
    pub code: Vec<PolyWire>,
    pub g: PolyWire,
    pub h: PolyWire,
    #[serde(default)]
    pub rho: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MooreDetReq {
    pub field: FieldSpec,
    pub polys: Vec<PolyWire>,
    pub alphas: Vec<ElemWire>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolysReq {
    pub field: FieldSpec,
    pub polys: Vec<PolyWire>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsApReq {
    pub exponents: Vec<i64>,
    #[serde(default)]
    pub allow_permutation: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivideReq {
    pub field: FieldSpec,
    pub poly: MvPolyWire,
    #[serde(default)]
    pub nvars: Option<usize>,
}

/// A plane curve given either by its terms or as the specialization of a
/// polynomial set at λ_3..λ_k.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveReq {
    pub field: FieldSpec,
    #[serde(default)]
    pub curve: Option<MvPolyWire>,
    #[serde(default)]
    pub polys: Option<Vec<PolyWire>>,
    #[serde(default)]
    pub lambdas: Vec<ElemWire>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankmetric::gf::DEFAULT_MAX_FIELD_ORDER;

    #[test]
    fn element_parsing() {
        let f4 = FieldCtx::new(2, 2, DEFAULT_MAX_FIELD_ORDER).unwrap();
        assert_eq!(parse_element("0", &f4).unwrap(), FieldElem::ZERO);
        let e = parse_element("3", &f4).unwrap();
        assert_eq!(f4.digits(e), vec![1, 1]);
        assert!(parse_element("4", &f4).is_err());
        assert!(parse_element("x", &f4).is_err());
        let f16 = FieldCtx::new(2, 4, DEFAULT_MAX_FIELD_ORDER).unwrap();
        let g = f16.generator();
        assert_eq!(parse_element("g^3", &f16).unwrap(), f16.pow(g, 3));
        assert_eq!(parse_element("g^-1", &f16).unwrap(), f16.inv(g).unwrap());
        // canonical encodings round-trip
        for v in 0..16u32 {
            assert_eq!(parse_element(&v.to_string(), &f16).unwrap().0, v);
        }
    }
}
