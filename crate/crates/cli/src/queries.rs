//! Query execution. Each subcommand runs the whole query list but
//! executes only its own class of operations, recording the rest as
//! skipped; a failing query is recorded in place and never aborts the
//! batch (internal invariant breaches excepted).

use polylip::criteria::{self, Conclusion, Target, Verdict};
use polylip::gendiff;
use polylip::oracle::{self, ModulusProfile, OracleVerdict, SamplingPlan};
use polylip::rat::format_rat;
use polylip::varfun::{self, PLValueFunction};
use polylip::{Error, ExtReal, Norm, Rat};

use crate::instance::{parse_norm, Instance, QuerySpec};
use crate::report::{
    ExtRealOut, HRepOut, OracleOut, PlanOut, Report, ResultOut, Status, WitnessOut,
};

/// The command an operation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpClass {
    Eval,
    Check,
    Verify,
}

impl OpClass {
    pub fn command(self) -> &'static str {
        match self {
            OpClass::Eval => "eval",
            OpClass::Check => "check",
            OpClass::Verify => "verify",
        }
    }
}

pub fn classify(op: &str) -> Option<OpClass> {
    match op {
        "gauge" | "distance" | "scalar-distance" | "minimal-time" | "minimal-time-map"
        | "scalarization" | "generalized-projection" | "normal-cone" | "subdifferential"
        | "singular-subdifferential" | "minkowski-singular" | "coderivative"
        | "scalarization-subdifferential" => Some(OpClass::Eval),
        "gauge-criterion" | "function-lipschitz" | "aubin-criterion"
        | "minimal-time-criterion" | "scalarization-criterion" | "inclusion-audit"
        | "scalarization-audit" => Some(OpClass::Check),
        "sampled-modulus" | "aubin-sampled" | "equivalence-report" | "exact-lipschitz" => {
            Some(OpClass::Verify)
        }
        _ => None,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Structure(_) => "structure",
        Error::EmptyInput(_) => "empty-input",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Resource(_) => "resource",
        Error::Internal(_) => "internal",
    }
}

/// A query-level failure: either a binding problem (bad name, missing
/// argument — reported as a structure error) or a propagated math error.
enum QueryError {
    Binding(String),
    Math(Error),
}

impl From<Error> for QueryError {
    fn from(e: Error) -> Self {
        QueryError::Math(e)
    }
}

impl From<String> for QueryError {
    fn from(s: String) -> Self {
        QueryError::Binding(s)
    }
}

type QResult<T> = std::result::Result<T, QueryError>;

struct Ctx<'a> {
    instance: &'a Instance,
    plan: SamplingPlan,
}

fn need<'q>(field: Option<&'q String>, name: &str) -> QResult<&'q str> {
    field
        .map(|s| s.as_str())
        .ok_or_else(|| QueryError::Binding(format!("missing required field {name:?}")))
}

fn norm_of(q: &QuerySpec, default: Norm) -> QResult<Norm> {
    match &q.norm {
        None => Ok(default),
        Some(s) => parse_norm(s).map_err(QueryError::Binding),
    }
}

fn polyhedral_norm_of(q: &QuerySpec) -> QResult<Norm> {
    let n = norm_of(q, Norm::LInf)?;
    if n == Norm::L2 {
        return Err(QueryError::Binding(
            "this operation needs a polyhedral norm (\"l1\" or \"linf\")".into(),
        ));
    }
    Ok(n)
}

/// Base point in the joint space of a map: an explicit `point`, or the
/// concatenation `x ++ y`.
pub fn joint_of(
    instance: &Instance,
    q: &QuerySpec,
    m: usize,
    n: usize,
) -> std::result::Result<(Vec<Rat>, Vec<Rat>), String> {
    if let Some(p) = &q.point {
        let p = instance.point(p)?;
        if p.len() != m + n {
            return Err(format!(
                "point has dimension {}, the joint space needs {}",
                p.len(),
                m + n
            ));
        }
        return Ok((p[..m].to_vec(), p[m..].to_vec()));
    }
    let x_name = q.x.as_ref().ok_or("missing required field \"x\"")?;
    let y_name = q.y.as_ref().ok_or("missing required field \"y\"")?;
    let x = instance.point(x_name)?;
    let y = instance.point(y_name)?;
    if x.len() != m || y.len() != n {
        return Err(format!(
            "x/y have dimensions {}/{}, the map needs {}/{}",
            x.len(),
            y.len(),
            m,
            n
        ));
    }
    Ok((x.clone(), y.clone()))
}

fn joint_point(ctx: &Ctx, q: &QuerySpec, m: usize, n: usize) -> QResult<(Vec<Rat>, Vec<Rat>)> {
    joint_of(ctx.instance, q, m, n).map_err(QueryError::Binding)
}

fn base_point<'c>(ctx: &'c Ctx, q: &QuerySpec, dim: usize) -> QResult<&'c Vec<Rat>> {
    let p = ctx.instance.point(need(q.point.as_ref(), "point")?)?;
    if p.len() != dim {
        return Err(QueryError::Binding(format!(
            "point has dimension {}, expected {dim}",
            p.len()
        )));
    }
    Ok(p)
}

/// Build the piecewise-linear function a function-level query names.
fn build_function(ctx: &Ctx, q: &QuerySpec) -> QResult<(PLValueFunction, Vec<Rat>)> {
    let kind = need(q.function.as_ref(), "function")?;
    let inst = ctx.instance;
    match kind {
        "gauge" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let x = base_point(ctx, q, f.dim())?;
            Ok((varfun::gauge_fn(f)?, x.clone()))
        }
        "distance" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let norm = polyhedral_norm_of(q)?;
            let x = base_point(ctx, q, omega.dim())?;
            Ok((varfun::distance_fn(omega, norm)?, x.clone()))
        }
        "scalar-distance" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let norm = polyhedral_norm_of(q)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let mut joint = x;
            joint.extend(y);
            Ok((varfun::scalar_distance_fn(g, norm)?, joint))
        }
        "minimal-time" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let omega = inst.set_h(need(q.target.as_ref(), "target")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            Ok((varfun::minimal_time_fn(f, omega)?, x.clone()))
        }
        "minimal-time-map" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let mut joint = x;
            joint.extend(y);
            Ok((varfun::minimal_time_sv_fn(f, g)?, joint))
        }
        "scalarization" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let d = inst.direction(need(q.direction.as_ref(), "direction")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            Ok((varfun::scalarization_fn(omega, d)?, x.clone()))
        }
        other => Err(QueryError::Binding(format!(
            "unknown function kind {other:?} (use gauge | distance | scalar-distance | \
             minimal-time | minimal-time-map | scalarization)"
        ))),
    }
}

fn push_witness(
    report: &mut Report,
    id: &str,
    label: &str,
    poly: &polylip::HPolyhedron,
    trivial: Option<bool>,
) -> polylip::Result<()> {
    report.witnesses.push(WitnessOut {
        query: id.to_string(),
        label: label.to_string(),
        hrep: HRepOut::from_poly(poly)?,
        trivial,
    });
    Ok(())
}

fn push_verdict(report: &mut Report, id: &str, res: &mut ResultOut, v: &Verdict) -> QResult<()> {
    res.conclusion = Some(v.conclusion.to_string());
    res.criterion = Some(v.criterion.to_string());
    res.notes.extend(v.notes.iter().cloned());
    let trivial = matches!(
        v.conclusion,
        Conclusion::Lipschitz | Conclusion::SufficientHolds
    );
    push_witness(report, id, "witness-cone", v.witness.as_poly(), Some(trivial))
        .map_err(QueryError::Math)?;
    for (label, cone) in &v.labeled_cones {
        push_witness(report, id, label, cone.as_poly(), None).map_err(QueryError::Math)?;
    }
    Ok(())
}

fn push_profile(
    report: &mut Report,
    id: &str,
    kind: &str,
    profile: &ModulusProfile,
    plan: &SamplingPlan,
) {
    report.oracle.push(OracleOut {
        query: id.to_string(),
        kind: kind.to_string(),
        verdict: match profile.verdict {
            OracleVerdict::LipschitzEvidence => "lipschitz-evidence".into(),
            OracleVerdict::BlowupEvidence => "blowup-evidence".into(),
            OracleVerdict::Inconclusive => "inconclusive".into(),
        },
        modulus: profile.modulus.as_ref().map(format_rat),
        per_radius: profile
            .per_radius
            .iter()
            .map(|(k, v)| (*k, ExtRealOut::from_ext(v)))
            .collect(),
        plan: PlanOut {
            seed: plan.seed,
            radii: plan.radii,
            samples: plan.samples,
            norm: match plan.norm {
                Norm::L1 => "l1".into(),
                Norm::LInf => "linf".into(),
                Norm::L2 => "l2".into(),
            },
        },
    });
}

fn set_value(res: &mut ResultOut, v: &ExtReal) {
    res.value = Some(ExtRealOut::from_ext(v));
}

const DEFAULT_FACE_CAP: usize = 16;

fn run_one(ctx: &Ctx, q: &QuerySpec, id: &str, report: &mut Report) -> QResult<ResultOut> {
    let inst = ctx.instance;
    let mut res = ResultOut::new(id.to_string(), q.op.clone());
    match q.op.as_str() {
        // ---- eval ----
        "gauge" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let x = base_point(ctx, q, f.dim())?;
            set_value(&mut res, &varfun::gauge(f, x)?);
        }
        "distance" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let norm = norm_of(q, Norm::LInf)?;
            let x = base_point(ctx, q, omega.dim())?;
            set_value(&mut res, &varfun::distance(omega, x, norm)?);
            if norm == Norm::L2 {
                res.notes.push(
                    "euclidean distances are reported squared so that the value stays rational"
                        .into(),
                );
            }
        }
        "scalar-distance" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let norm = polyhedral_norm_of(q)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let f = varfun::scalar_distance_fn(g, norm)?;
            let mut joint = x;
            joint.extend(y);
            set_value(&mut res, &f.evaluate(&joint)?);
        }
        "minimal-time" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let omega = inst.set_h(need(q.target.as_ref(), "target")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            set_value(&mut res, &varfun::minimal_time(f, omega, x)?);
        }
        "minimal-time-map" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            set_value(&mut res, &varfun::minimal_time_sv(f, g, &x, &y)?);
        }
        "scalarization" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let d = inst.direction(need(q.direction.as_ref(), "direction")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            set_value(&mut res, &varfun::scalarization(omega, d, x)?);
        }
        "generalized-projection" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let g = match (&q.map, &q.target) {
                (Some(name), None) => inst.map(name)?.clone(),
                (None, Some(name)) => {
                    polylip::GraphMap::constant(0, inst.set_h(name)?).map_err(QueryError::Math)?
                }
                _ => {
                    return Err(QueryError::Binding(
                        "give exactly one of map/target".into(),
                    ))
                }
            };
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let t = varfun::minimal_time_sv(f, &g, &x, &y)?;
            if let ExtReal::Finite(t) = &t {
                res.notes.push(format!("minimal time {}", format_rat(t)));
            }
            set_value(&mut res, &t);
            let proj = varfun::generalized_projection(f, &g, &x, &y)?;
            push_witness(report, id, "generalized-projection", &proj, None)
                .map_err(QueryError::Math)?;
        }
        "normal-cone" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            let cone = polylip::poly::cones::normal_cone_at(omega, x)?;
            let trivial = polylip::poly::cones::is_trivial_cone(&cone)?;
            push_witness(report, id, "normal-cone", cone.as_poly(), Some(trivial))
                .map_err(QueryError::Math)?;
        }
        "subdifferential" => {
            let (f, x) = build_function(ctx, q)?;
            let sub = gendiff::value_subdifferential(&f, &x)?;
            push_witness(report, id, "subdifferential", &sub, None).map_err(QueryError::Math)?;
        }
        "singular-subdifferential" => {
            let (f, x) = build_function(ctx, q)?;
            let cone = gendiff::singular_subdifferential(&f, &x)?;
            let trivial = polylip::poly::cones::is_trivial_cone(&cone)?;
            push_witness(
                report,
                id,
                "singular-subdifferential",
                cone.as_poly(),
                Some(trivial),
            )
            .map_err(QueryError::Math)?;
        }
        "minkowski-singular" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let x = base_point(ctx, q, f.dim())?;
            let cone = gendiff::minkowski_singular(f, x)?;
            let trivial = polylip::poly::cones::is_trivial_cone(&cone)?;
            push_witness(
                report,
                id,
                "minkowski-singular-cone",
                cone.as_poly(),
                Some(trivial),
            )
            .map_err(QueryError::Math)?;
        }
        "coderivative" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let v = inst.point(need(q.vector.as_ref(), "vector")?)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let cd = gendiff::coderivative(g, &x, &y, v)?;
            push_witness(report, id, "coderivative-value", &cd.set, None)
                .map_err(QueryError::Math)?;
            push_witness(report, id, "graph-normal-cone", cd.graph_cone.as_poly(), None)
                .map_err(QueryError::Math)?;
        }
        "scalarization-subdifferential" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let d = inst.direction(need(q.direction.as_ref(), "direction")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            let s = gendiff::scalarization_subdifferential(omega, d, x)?;
            res.point = Some(crate::report::vec_out(&s.hit_point));
            res.notes.push(if s.exact {
                "the normal-cone formula is exact at this point".into()
            } else {
                "the normal-cone formula is an outer bound at this point".into()
            });
            push_witness(report, id, "scalarization-subdifferential", &s.set, None)
                .map_err(QueryError::Math)?;
        }

        // ---- check ----
        "function-lipschitz" => {
            let (f, x) = build_function(ctx, q)?;
            let v = criteria::function_lipschitz_criterion(&f, &x)?;
            push_verdict(report, id, &mut res, &v)?;
        }
        "aubin-criterion" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let v = criteria::aubin_criterion(g, &x, &y)?;
            push_verdict(report, id, &mut res, &v)?;
        }
        "gauge-criterion" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let x = base_point(ctx, q, f.dim())?;
            let m = criteria::minkowski_report(f, x)?;
            match (&m.local, &m.local_note) {
                (Some(v), _) => push_verdict(report, id, &mut res, v)?,
                (None, note) => {
                    res.conclusion = Some("undecided".into());
                    res.criterion = Some("gauge-singular-cone".into());
                    if let Some(n) = note {
                        res.notes.push(n.clone());
                    }
                }
            }
            res.flags = Some(vec![
                ("zero-interior".into(), m.global.zero_interior),
                ("negative-dual-trivial".into(), m.global.negative_dual_trivial),
                ("readings-agree".into(), m.global.agree),
            ]);
        }
        "minimal-time-criterion" => {
            let f = inst.set_v(need(q.dynamics.as_ref(), "dynamics")?)?;
            let cap = q.face_cap.unwrap_or(DEFAULT_FACE_CAP);
            match (&q.map, &q.target) {
                (Some(name), None) => {
                    let g = inst.map(name)?;
                    let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
                    let v = criteria::minimal_time_criterion(f, &Target::Map(g), &x, &y, cap)?;
                    push_verdict(report, id, &mut res, &v)?;
                }
                (None, Some(name)) => {
                    let omega = inst.set_h(name)?;
                    let y = base_point(ctx, q, omega.dim())?;
                    let v =
                        criteria::minimal_time_criterion(f, &Target::Set(omega), &[], y, cap)?;
                    push_verdict(report, id, &mut res, &v)?;
                }
                _ => {
                    return Err(QueryError::Binding(
                        "give exactly one of map/target".into(),
                    ))
                }
            }
        }
        "scalarization-criterion" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let d = inst.direction(need(q.direction.as_ref(), "direction")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            let v = criteria::scalarization_criterion(omega, d, x)?;
            push_verdict(report, id, &mut res, &v)?;
        }
        "inclusion-audit" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let dynamics = match &q.dynamics {
                Some(name) => Some(inst.set_v(name)?),
                None => None,
            };
            let norm = polyhedral_norm_of(q)?;
            let cap = q.face_cap.unwrap_or(DEFAULT_FACE_CAP);
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let items = criteria::inclusion_audit(g, dynamics, &x, &y, norm, cap)?;
            res.audit = Some(
                items
                    .iter()
                    .map(|a| crate::report::AuditOut {
                        name: a.name.to_string(),
                        applicable: a.applicable,
                        passed: a.passed,
                        detail: a.detail.clone(),
                    })
                    .collect(),
            );
        }
        "scalarization-audit" => {
            let omega = inst.set_h(need(q.set.as_ref(), "set")?)?;
            let d = inst.direction(need(q.direction.as_ref(), "direction")?)?;
            let x = base_point(ctx, q, omega.dim())?;
            let a = criteria::scalarization_audit(omega, d, x)?;
            res.audit = Some(vec![crate::report::AuditOut {
                name: a.name.to_string(),
                applicable: a.applicable,
                passed: a.passed,
                detail: a.detail.clone(),
            }]);
        }

        // ---- verify ----
        "sampled-modulus" => {
            let (f, x) = build_function(ctx, q)?;
            let profile = oracle::sampled_modulus(&f, &x, &ctx.plan)?;
            push_profile(report, id, "sampled-modulus", &profile, &ctx.plan);
        }
        "aubin-sampled" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let profile = oracle::aubin_sampled(g, &x, &y, &ctx.plan)?;
            push_profile(report, id, "aubin-sampled", &profile, &ctx.plan);
        }
        "equivalence-report" => {
            let g = inst.map(need(q.map.as_ref(), "map")?)?;
            let (x, y) = joint_point(ctx, q, g.input_dim(), g.output_dim())?;
            let e = criteria::convex_equivalences(g, &x, &y, &ctx.plan)?;
            res.flags = Some(vec![
                ("aubin-sampled".into(), e.aubin_sampled),
                ("distance-lipschitz-sampled".into(), e.distance_lipschitz_sampled),
                ("domain-interior".into(), e.domain_interior),
                ("coderivative-trivial".into(), e.coderivative_trivial),
                ("agreement".into(), e.agreement),
            ]);
            res.notes.extend(e.notes.iter().cloned());
        }
        "exact-lipschitz" => {
            let (f, x) = build_function(ctx, q)?;
            let e = oracle::exact_pl_lipschitz(&f, &x)?;
            res.flags = Some(vec![
                ("lipschitz".into(), e.lipschitz),
                ("in-domain".into(), e.in_domain),
            ]);
        }

        other => {
            return Err(QueryError::Binding(format!("unknown operation {other:?}")));
        }
    }
    Ok(res)
}

fn want<'q>(field: &'q Option<String>, name: &str) -> std::result::Result<&'q str, String> {
    field
        .as_deref()
        .ok_or_else(|| format!("missing required field {name:?}"))
}

fn point_dim(inst: &Instance, q: &QuerySpec, dim: usize) -> std::result::Result<(), String> {
    let p = inst.point(want(&q.point, "point")?)?;
    if p.len() != dim {
        return Err(format!("point has dimension {}, expected {dim}", p.len()));
    }
    Ok(())
}

fn norm_ok(q: &QuerySpec, allow_euclidean: bool) -> std::result::Result<(), String> {
    if let Some(s) = &q.norm {
        let n = parse_norm(s)?;
        if n == Norm::L2 && !allow_euclidean {
            return Err("this operation needs a polyhedral norm (\"l1\" or \"linf\")".into());
        }
    }
    Ok(())
}

/// Binding checks for function-level queries, mirroring `build_function`
/// without constructing anything.
fn function_bindings(inst: &Instance, q: &QuerySpec) -> std::result::Result<(), String> {
    match want(&q.function, "function")? {
        "gauge" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            point_dim(inst, q, f.dim())
        }
        "distance" => {
            let omega = inst.set_h(want(&q.set, "set")?)?;
            norm_ok(q, false)?;
            point_dim(inst, q, omega.dim())
        }
        "scalar-distance" => {
            let g = inst.map(want(&q.map, "map")?)?;
            norm_ok(q, false)?;
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        "minimal-time" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            let omega = inst.set_h(want(&q.target, "target")?)?;
            if f.dim() != omega.dim() {
                return Err(format!(
                    "dynamics dimension {} != target dimension {}",
                    f.dim(),
                    omega.dim()
                ));
            }
            point_dim(inst, q, omega.dim())
        }
        "minimal-time-map" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            let g = inst.map(want(&q.map, "map")?)?;
            if f.dim() != g.output_dim() {
                return Err(format!(
                    "dynamics dimension {} != map output dimension {}",
                    f.dim(),
                    g.output_dim()
                ));
            }
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        "scalarization" => {
            let omega = inst.set_h(want(&q.set, "set")?)?;
            let d = inst.direction(want(&q.direction, "direction")?)?;
            if d.len() != omega.dim() {
                return Err(format!(
                    "direction has dimension {}, the set has {}",
                    d.len(),
                    omega.dim()
                ));
            }
            point_dim(inst, q, omega.dim())
        }
        other => Err(format!(
            "unknown function kind {other:?} (use gauge | distance | scalar-distance | \
             minimal-time | minimal-time-map | scalarization)"
        )),
    }
}

fn one_of_map_target(
    inst: &Instance,
    q: &QuerySpec,
    dynamics_dim: usize,
) -> std::result::Result<(), String> {
    match (&q.map, &q.target) {
        (Some(name), None) => {
            let g = inst.map(name)?;
            if g.output_dim() != dynamics_dim {
                return Err(format!(
                    "dynamics dimension {dynamics_dim} != map output dimension {}",
                    g.output_dim()
                ));
            }
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        (None, Some(name)) => {
            let omega = inst.set_h(name)?;
            if omega.dim() != dynamics_dim {
                return Err(format!(
                    "dynamics dimension {dynamics_dim} != target dimension {}",
                    omega.dim()
                ));
            }
            point_dim(inst, q, omega.dim())
        }
        _ => Err("give exactly one of map/target".into()),
    }
}

fn validate_one(inst: &Instance, q: &QuerySpec) -> std::result::Result<(), String> {
    match q.op.as_str() {
        "gauge" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            point_dim(inst, q, f.dim())
        }
        "distance" => {
            let omega = inst.set_h(want(&q.set, "set")?)?;
            norm_ok(q, true)?;
            point_dim(inst, q, omega.dim())
        }
        "scalar-distance" => {
            let g = inst.map(want(&q.map, "map")?)?;
            norm_ok(q, false)?;
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        "minimal-time" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            let omega = inst.set_h(want(&q.target, "target")?)?;
            if f.dim() != omega.dim() {
                return Err(format!(
                    "dynamics dimension {} != target dimension {}",
                    f.dim(),
                    omega.dim()
                ));
            }
            point_dim(inst, q, omega.dim())
        }
        "minimal-time-map" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            let g = inst.map(want(&q.map, "map")?)?;
            if f.dim() != g.output_dim() {
                return Err(format!(
                    "dynamics dimension {} != map output dimension {}",
                    f.dim(),
                    g.output_dim()
                ));
            }
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        "scalarization" | "scalarization-criterion" | "scalarization-subdifferential"
        | "scalarization-audit" => {
            let omega = inst.set_h(want(&q.set, "set")?)?;
            let d = inst.direction(want(&q.direction, "direction")?)?;
            if d.len() != omega.dim() {
                return Err(format!(
                    "direction has dimension {}, the set has {}",
                    d.len(),
                    omega.dim()
                ));
            }
            point_dim(inst, q, omega.dim())
        }
        "generalized-projection" | "minimal-time-criterion" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            one_of_map_target(inst, q, f.dim())
        }
        "normal-cone" => {
            let omega = inst.set_h(want(&q.set, "set")?)?;
            point_dim(inst, q, omega.dim())
        }
        "minkowski-singular" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            point_dim(inst, q, f.dim())
        }
        "coderivative" => {
            let g = inst.map(want(&q.map, "map")?)?;
            let v = inst.point(want(&q.vector, "vector")?)?;
            if v.len() != g.output_dim() {
                return Err(format!(
                    "vector has dimension {}, the output space has {}",
                    v.len(),
                    g.output_dim()
                ));
            }
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        "subdifferential" | "singular-subdifferential" | "function-lipschitz"
        | "sampled-modulus" | "exact-lipschitz" => function_bindings(inst, q),
        "aubin-criterion" | "aubin-sampled" | "equivalence-report" => {
            let g = inst.map(want(&q.map, "map")?)?;
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        "gauge-criterion" => {
            let f = inst.set_v(want(&q.dynamics, "dynamics")?)?;
            point_dim(inst, q, f.dim())
        }
        "inclusion-audit" => {
            let g = inst.map(want(&q.map, "map")?)?;
            norm_ok(q, false)?;
            if let Some(name) = &q.dynamics {
                let f = inst.set_v(name)?;
                if f.dim() != g.output_dim() {
                    return Err(format!(
                        "dynamics dimension {} != map output dimension {}",
                        f.dim(),
                        g.output_dim()
                    ));
                }
            }
            joint_of(inst, q, g.input_dim(), g.output_dim()).map(|_| ())
        }
        other => Err(format!("unknown operation {other:?}")),
    }
}

/// Static semantic validation of every query's bindings: names must
/// resolve and dimensions must be consistent, whatever command later
/// runs the batch. Failures here are input errors.
pub fn validate(instance: &Instance) -> std::result::Result<(), String> {
    for (i, q) in instance.queries.iter().enumerate() {
        validate_one(instance, q)
            .map_err(|e| format!("queries[{}] ({}): {e}", i, instance.query_id(i)))?;
    }
    Ok(())
}

/// Run the query list for one command. Returns the report; an
/// `Error::Internal` from the core aborts the batch instead.
pub fn run_queries(
    instance: &Instance,
    class: OpClass,
    plan: SamplingPlan,
    report: &mut Report,
) -> polylip::Result<()> {
    let ctx = Ctx { instance, plan };
    for (i, q) in instance.queries.iter().enumerate() {
        let id = instance.query_id(i);
        let Some(op_class) = classify(&q.op) else {
            let mut res = ResultOut::new(id, q.op.clone());
            res.status = Status::Error;
            res.error = Some(crate::report::ErrorOut {
                kind: "structure".into(),
                message: format!("unknown operation {:?}", q.op),
            });
            report.results.push(res);
            continue;
        };
        if op_class != class {
            let mut res = ResultOut::new(id, q.op.clone());
            res.status = Status::Skipped;
            res.skipped_reason = Some(format!(
                "operation runs under the `{}` command",
                op_class.command()
            ));
            report.results.push(res);
            continue;
        }
        match run_one(&ctx, q, &id, report) {
            Ok(res) => report.results.push(res),
            Err(QueryError::Binding(msg)) => {
                let mut res = ResultOut::new(id, q.op.clone());
                res.status = Status::Error;
                res.error = Some(crate::report::ErrorOut {
                    kind: "structure".into(),
                    message: msg,
                });
                report.results.push(res);
            }
            Err(QueryError::Math(e)) => {
                if matches!(e, Error::Internal(_)) {
                    return Err(e);
                }
                let mut res = ResultOut::new(id, q.op.clone());
                res.status = Status::Error;
                res.error = Some(crate::report::ErrorOut {
                    kind: error_kind(&e).into(),
                    message: e.to_string(),
                });
                report.results.push(res);
            }
        }
    }
    Ok(())
}
