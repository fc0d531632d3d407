//! One handler per subcommand.

use rankmetric::code::{delsarte_dual, left_idealiser, right_idealiser, Dual, Idealiser, Strategy};
use rankmetric::families::{self, FamilyId};
use rankmetric::gf::linalg;
use rankmetric::moore::{self, Method, MoorePolySet};
use rankmetric::variety::{self, MvPoly};
use rankmetric::{Error, FieldTower};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::wire::{self, elems_json, poly_json, polys_json, to_value};
use crate::{verify, CliError, Command, Reply, Settings, VarietyOp};

fn parse<T: DeserializeOwned>(input: &str) -> Result<T, CliError> {
    Ok(serde_json::from_str(input)?)
}

pub fn dispatch(command: &Command, input: &str, s: &Settings) -> Result<Reply, CliError> {
    match command {
        Command::FieldInfo => field_info(parse(input)?),
        Command::Eval => eval(parse(input)?),
        Command::Compose => compose(parse(input)?),
        Command::IsMrd { strategy } => is_mrd(parse(input)?, s, (*strategy).into()),
        Command::MinDistance => min_distance(parse(input)?, s),
        Command::Dual => dual(parse(input)?),
        Command::Idealisers => idealisers(parse(input)?),
        Command::Transform => transform(parse(input)?),
        Command::Lift => lift(parse(input)?),
        Command::ExceptionalProbe { m_max, strategy } => probe(parse(input)?, s, *m_max, (*strategy).into()),
        Command::MooreDet => moore_det(parse(input)?),
        Command::IsMoore { method } => is_moore(parse(input)?, s, (*method).into()),
        Command::Index => index(parse(input)?),
        Command::Normalize => normalize(parse(input)?),
        Command::IsAp => is_ap(parse(input)?),
        Command::Variety { op } => match op {
            VarietyOp::Build => variety_build(parse(input)?, s),
            VarietyOp::Divide => variety_divide(parse(input)?),
            VarietyOp::Points => variety_points(parse(input)?, s),
            VarietyOp::Infinity => variety_curve(parse(input)?, s, false),
            VarietyOp::Singular => variety_curve(parse(input)?, s, true),
        },
        Command::Family { id, q, n, k, s: step, t, delta, check } => family(
            &FamilyArgs { id: id.clone(), q: *q, n: *n, k: *k, s: *step, t: *t, delta: delta.clone(), check: *check },
            s,
        ),
        Command::Fingerprint => fingerprint(parse(input)?, s),
        Command::Suite { name } => crate::suites::run(name, s),
    }
}

fn field_info(req: wire::FieldOnly) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let top = t.top().field();
    Ok(Reply::ok(json!({
        "p": t.p(),
        "h": t.h(),
        "q": t.q(),
        "n": t.n(),
        "m": t.m(),
        "orders": [t.base().order(), t.mid().order(), top.order()],
        "moduli": [t.base().modulus(), t.mid().modulus(), top.modulus()],
        "generator": t.mid().generator().0,
        "primitive": t.mid().primitive().0,
    })))
}

fn eval(req: wire::EvalReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let f = req.poly.decode(t.ext())?;
    let points = wire::decode_elems(&req.points, t.mid())?;
    let values: Vec<_> = points.iter().map(|&x| f.evaluate(x)).collect();
    Ok(Reply::ok(json!({ "values": elems_json(&values) })))
}

fn compose(req: wire::ComposeReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let f = req.f.decode(t.ext())?;
    let g = req.g.decode(t.ext())?;
    let fg = f.compose(&g)?;
    Ok(Reply::ok(json!({ "poly": poly_json(&fg), "display": fg.to_string() })))
}

fn is_mrd(req: wire::CodeReq, s: &Settings, strategy: Strategy) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let report = code.is_mrd_with(&s.guard, strategy)?;
    let certificate = match &report.witness {
        Some(b) => {
            let kernel = verify::mrd_witness(&code, b)?;
            let w = code.codeword(b)?;
            Some(json!({
                "coefficients": elems_json(b),
                "codeword": poly_json(&w),
                "kernel_dim": kernel,
                "kernel_basis": elems_json(&w.kernel_basis()),
            }))
        }
        None => None,
    };
    Ok(Reply { property_false: !report.verdict, result: to_value(&report), certificate })
}

fn min_distance(req: wire::CodeReq, s: &Settings) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let d = code.min_distance_with(&s.guard, Strategy::Auto)?;
    Ok(Reply::ok(json!({
        "min_distance": d,
        "n": code.n(),
        "k": code.k(),
        "singleton_bound": code.n() - code.k() + 1,
    })))
}

fn dual(req: wire::CodeReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    Ok(Reply::ok(match delsarte_dual(&code)? {
        Dual::Zero { n } => json!({ "zero": true, "n": n, "k": 0, "basis": [] }),
        Dual::Code(d) => json!({ "zero": false, "n": d.n(), "k": d.k(), "basis": polys_json(d.basis()) }),
    }))
}

fn idealiser_json(i: &Idealiser) -> Value {
    json!({ "dim": i.dim, "basis": polys_json(&i.basis) })
}

fn idealisers(req: wire::CodeReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let l = left_idealiser(&code)?;
    let r = right_idealiser(&code)?;
    Ok(Reply::ok(json!({ "left": idealiser_json(&l), "right": idealiser_json(&r) })))
}

fn transform(req: wire::TransformReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let g = req.g.decode(t.ext())?;
    let h = req.h.decode(t.ext())?;
    let out = code.transform(&g, &h, req.rho)?;
    Ok(Reply::ok(json!({ "k": out.k(), "basis": polys_json(out.basis()) })))
}

fn lift(req: wire::CodeReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let lifted = code.lift(&t)?;
    Ok(Reply::ok(json!({
        "m": t.m(),
        "field_order": t.top().order(),
        "k": lifted.k(),
        "basis": polys_json(lifted.basis()),
    })))
}

fn probe(req: wire::CodeReq, s: &Settings, m_max: u32, strategy: Strategy) -> Result<Reply, CliError> {
    let t = wire::tower(&FieldSpecM1::of(&req.field))?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let report = code.exceptional_probe(&t, m_max, &s.guard, strategy)?;
    let mut certificate = None;
    for level in &report.levels {
        if let Some(b) = &level.report.witness {
            let lifted = code.lift(&t.with_m(level.m)?)?;
            let kernel = verify::mrd_witness(&lifted, b)?;
            if certificate.is_none() {
                certificate = Some(json!({ "m": level.m, "coefficients": elems_json(b), "kernel_dim": kernel }));
            }
        }
    }
    Ok(Reply {
        property_false: !report.all_mrd(),
        result: json!({
            "levels": report.levels.iter().map(|l| json!({ "m": l.m, "verdict": l.report.verdict, "report": to_value(&l.report) })).collect::<Vec<_>>(),
            "all_mrd": report.all_mrd(),
            "truncated_at": report.truncated_at,
            "reason": report.reason,
        }),
        certificate,
    })
}

/// Probes lift from the base tower, so the level m of the request is ignored.
struct FieldSpecM1;

impl FieldSpecM1 {
    fn of(spec: &rankmetric::FieldSpec) -> rankmetric::FieldSpec {
        let mut s = spec.clone();
        s.m = 1;
        if let Some(polys) = &mut s.defining_polys {
            polys.truncate(2);
        }
        s
    }
}

fn moore_set(field: &rankmetric::FieldSpec, polys: &[wire::PolyWire]) -> Result<(FieldTower, MoorePolySet), CliError> {
    let t = wire::tower(field)?;
    let set = MoorePolySet::new(wire::decode_polys(polys, t.ext())?)?;
    Ok((t, set))
}

fn moore_det(req: wire::MooreDetReq) -> Result<Reply, CliError> {
    let (t, set) = moore_set(&req.field, &req.polys)?;
    let alphas = wire::decode_elems(&req.alphas, t.mid())?;
    let m = moore::moore_matrix(&set, &alphas)?;
    let det = linalg::det(t.mid(), &m);
    Ok(Reply::ok(json!({
        "matrix": m.iter().map(|r| elems_json(r)).collect::<Vec<_>>(),
        "det": det.0,
        "fq_rank": t.ext().fq_rank(&alphas),
    })))
}

fn is_moore(req: wire::PolysReq, s: &Settings, method: Method) -> Result<Reply, CliError> {
    let (_, set) = moore_set(&req.field, &req.polys)?;
    let report = match method {
        Method::Oracle => moore::is_moore_oracle(&set, &s.guard)?,
        Method::Mrd => moore::is_moore(&set, &s.guard, Strategy::Auto)?,
        Method::Variety => variety::is_moore_variety(&set, &s.guard)?,
    };
    let certificate = match &report.witness {
        Some(p) => {
            if method == Method::Variety {
                let w = variety::build_w(&set, &s.guard)?;
                verify::variety_witness(&set, &w, p)?;
            } else {
                verify::moore_witness(&set, p)?;
            }
            Some(json!({ "alphas": elems_json(p), "det": 0, "fq_rank": set.k() }))
        }
        None => None,
    };
    Ok(Reply { property_false: !report.verdict, result: to_value(&report), certificate })
}

fn index(req: wire::CodeReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let index = match moore::index_of(&code) {
        Ok(i) => Some(i),
        Err(Error::NoMonomial) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Reply::ok(json!({ "index": index })))
}

fn normalize(req: wire::CodeReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    let set = moore::normalize(&code)?;
    Ok(Reply::ok(json!({
        "polys": polys_json(set.polys()),
        "flags": set.flags().0,
        "flag_bits": set.flags().bits(),
        "index_t": set.index_t(),
        "top_degrees": set.top_degrees(),
        "min_degrees": set.min_degrees(),
    })))
}

fn is_ap(req: wire::IsApReq) -> Result<Reply, CliError> {
    let v = moore::is_ap(&req.exponents, req.allow_permutation)?;
    Ok(Reply::ok(json!({ "is_ap": v })))
}

fn variety_build(req: wire::PolysReq, s: &Settings) -> Result<Reply, CliError> {
    let (t, set) = moore_set(&req.field, &req.polys)?;
    let f = variety::build_f(&set, &s.guard)?;
    let v = variety::build_v(t.ext(), set.k(), &s.guard)?;
    let w = variety::divide_by_v(&f, t.ext())?;
    if w.mul(&v)? != f {
        return Err(Error::Internal("W·V differs from F".into()).into());
    }
    Ok(Reply::ok(json!({
        "F": to_value(&f),
        "V": to_value(&v),
        "W": to_value(&w),
        "degrees": { "F": f.degree(), "V": v.degree(), "W": w.degree() },
    })))
}

fn variety_divide(req: wire::DivideReq) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let f = wire::decode_mvpoly(&req.poly, req.nvars, t.mid())?;
    let w = variety::divide_by_v(&f, t.ext())?;
    Ok(Reply::ok(json!({ "quotient": to_value(&w), "degree": w.degree() })))
}

fn variety_points(req: wire::PolysReq, s: &Settings) -> Result<Reply, CliError> {
    let (t, set) = moore_set(&req.field, &req.polys)?;
    let w = variety::build_w(&set, &s.guard)?;
    let points = variety::points_off_v(&w, t.ext(), &s.guard)?;
    let certificate = match points.first() {
        Some(p) => {
            verify::variety_witness(&set, &w, p)?;
            Some(json!({ "point": elems_json(p) }))
        }
        None => None,
    };
    Ok(Reply {
        property_false: !points.is_empty(),
        result: json!({
            "moore": points.is_empty(),
            "count": points.len(),
            "points": points.iter().map(|p| elems_json(p)).collect::<Vec<_>>(),
        }),
        certificate,
    })
}

fn curve(req: &wire::CurveReq, s: &Settings) -> Result<(FieldTower, MvPoly), CliError> {
    let t = wire::tower(&req.field)?;
    match (&req.curve, &req.polys) {
        (Some(c), None) => {
            if !req.lambdas.is_empty() {
                return Err(CliError::Invalid("lambdas apply only to a polynomial set".into()));
            }
            let h = wire::decode_mvpoly(c, Some(2), t.mid())?;
            Ok((t, h))
        }
        (None, Some(p)) => {
            let set = MoorePolySet::new(wire::decode_polys(p, t.ext())?)?;
            let lambdas = wire::decode_elems(&req.lambdas, t.mid())?;
            let h = variety::specialize_curve(&set, &lambdas, &s.guard)?;
            Ok((t, h))
        }
        _ => Err(CliError::Invalid("give exactly one of `curve` or `polys`".into())),
    }
}

fn variety_curve(req: wire::CurveReq, s: &Settings, singular: bool) -> Result<Reply, CliError> {
    let (_, h) = curve(&req, s)?;
    if h.is_zero() {
        // H ≡ 0 certifies that the set is not a Moore set
        return Ok(Reply {
            property_false: true,
            result: json!({ "curve_vanishes": true, "points": Value::Null }),
            certificate: Some(json!({ "curve": "identically zero" })),
        });
    }
    let points: Vec<Value> = if singular {
        variety::singular_points_affine(&h, &s.guard)?.iter().map(|p| elems_json(p)).collect()
    } else {
        variety::points_at_infinity(&h)?.iter().map(|p| elems_json(p)).collect()
    };
    Ok(Reply::ok(json!({
        "curve_vanishes": false,
        "curve": to_value(&h),
        "degree": h.degree(),
        "points": points,
    })))
}

fn fingerprint(req: wire::CodeReq, s: &Settings) -> Result<Reply, CliError> {
    let t = wire::tower(&req.field)?;
    let code = wire::decode_code(&req.code, t.ext())?;
    Ok(Reply::ok(to_value(&code.fingerprint(&s.guard)?)))
}

pub struct FamilyArgs {
    pub id: String,
    pub q: u64,
    pub n: Option<u32>,
    pub k: Option<usize>,
    pub s: Option<i64>,
    pub t: Option<u32>,
    pub delta: Option<String>,
    pub check: bool,
}

/// (p, h) with q = p^h.
pub fn prime_power(q: u64) -> Result<(u64, u32), CliError> {
    let p = (2..=q)
        .find(|d| q.is_multiple_of(*d))
        .ok_or_else(|| CliError::Invalid(format!("q = {q} is not a prime power")))?;
    let (mut v, mut h) = (q, 0);
    while v % p == 0 {
        v /= p;
        h += 1;
    }
    if v != 1 {
        return Err(CliError::Invalid(format!("q = {q} is not a prime power")));
    }
    Ok((p, h))
}

fn family(a: &FamilyArgs, settings: &Settings) -> Result<Reply, CliError> {
    let id: FamilyId = a.id.parse()?;
    let (p, h) = prime_power(a.q)?;
    let implied = match id {
        FamilyId::Row(3 | 4) => a.t.map(|t| 2 * t),
        FamilyId::Row(5..=8) => Some(6),
        FamilyId::Row(9 | 10) => Some(7),
        FamilyId::Row(11..=14) => Some(8),
        _ => None,
    };
    let n = match (a.n, implied) {
        (Some(n), Some(i)) if n != i => {
            return Err(CliError::Invalid(format!("{id} needs n = {i}, got {n}")));
        }
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) => return Err(CliError::Invalid("--n is required".into())),
    };
    let tower = FieldTower::new(p, h, n, 1)?;
    let space = tower.ext();
    let fld = tower.mid();
    let delta = a.delta.as_deref().map(|d| wire::parse_element(d, fld)).transpose()?;
    let k = a.k.unwrap_or(2);
    let step = a.s.unwrap_or(1);
    let nk = n as usize * k;
    let least = |pred: &dyn Fn(rankmetric::FieldElem) -> bool| families::find_delta(space, pred);
    let need = |d: Option<rankmetric::FieldElem>| d.ok_or_else(|| CliError::Invalid(format!("{id} needs --delta")));
    let mut row_delta = None;
    let fam = match id {
        FamilyId::Gabidulin => families::gabidulin(space, k, step)?,
        FamilyId::Twisted => {
            let sign = tower.base().from_int(if nk.is_multiple_of(2) { 1 } else { -1 });
            let d = delta.or_else(|| least(&|d| space.norm(d).is_ok_and(|v| v != sign)));
            families::twisted_gabidulin(space, k, step, need(d)?)?
        }
        FamilyId::Pseudoregulus => families::pseudoregulus(space, step)?,
        FamilyId::Lp => {
            let d = delta.or_else(|| least(&|d| space.norm(d).is_ok_and(|v| v != rankmetric::FieldElem::ONE)));
            families::lp_poly(space, step, need(d)?)?
        }
        FamilyId::Row(r) => {
            let d = match r {
                9..=12 => None,
                _ => Some(need(delta.or_else(|| families::default_delta(space, r)))?),
            };
            row_delta = d;
            families::table1_row(space, r, step, d)?
        }
    };
    let mut result = json!({
        "id": fam.id,
        "q": a.q,
        "n": n,
        "polys": polys_json(&fam.polys),
        "index": fam.index,
        "conditions": to_value(&fam.conditions),
        "valid": fam.valid(),
    });
    let mut reply = Reply::default();
    if a.check {
        let set = fam.moore_set()?;
        let report = moore::is_moore(&set, &settings.guard, Strategy::Auto)?;
        if let Some(p) = &report.witness {
            verify::moore_witness(&set, p)?;
            reply.certificate = Some(json!({ "alphas": elems_json(p) }));
        }
        reply.property_false = !report.verdict;
        result["moore"] = json!(report.verdict);
        if let FamilyId::Row(r) = id {
            if r % 2 == 0 {
                // δ of the primal row whose dual relation yields this row's δ
                let primal_delta = match (r, row_delta) {
                    (6, Some(d)) => fld.inv(space.frobenius(d, -1)),
                    (14, Some(d)) => Some(fld.neg(d)),
                    _ => row_delta,
                };
                let rel = families::dual_row_relation(space, r, step, primal_delta)?;
                let holds = families::check_dual_row(space, r, step, primal_delta)?;
                result["dual_relation"] = json!({ "primal_row": rel.primal_row, "shift": rel.shift, "holds": holds });
            }
        }
    }
    reply.result = result;
    Ok(reply)
}
