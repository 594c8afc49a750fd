//! Generalized differentiation on polyhedral convex data.
//!
//! On convex polyhedra the limiting and Fréchet constructions coincide
//! with their convex-analysis counterparts, so everything here is exact:
//!
//! - subdifferentials of parametric LP value functions are the image of
//!   the optimal dual face under the transpose of the parameter-coupling
//!   matrix (an affine minorant `y·(b0 + Bp)` is tight exactly on the
//!   optimal duals);
//! - singular subdifferentials are normal cones of effective domains;
//! - coderivatives are slices of graph normal cones.
//!
//! Nonconvex input does not exist in these types, so no limiting
//! sequences are ever simulated.

use num_traits::One;

use crate::error::{Error, Result};
use crate::lp::{optimal_dual_face, RowKind};
use crate::poly::cones::{negative_dual, normal_cone_at, point_dual, support_value};
use crate::poly::fm::affine_image;
use crate::poly::{ConeSet, HPolyhedron, PointLocation, VPolytope};
use crate::rat::{dot, vadd, vneg, vscale, vzero, Mat, Rat};
use crate::varfun::{scalarization_fn, ExtReal, GraphMap, PLValueFunction};

/// A coderivative value `D*G(x̄,ȳ)(v)`: the input-space set
/// `{u : (u, −v) ∈ N((x̄,ȳ); gph G)}`, together with the graph normal
/// cone it was sliced from. The set is a cone exactly when `v = 0`.
#[derive(Clone, Debug)]
pub struct CoderivativeResult {
    pub set: HPolyhedron,
    pub graph_cone: ConeSet,
}

/// Subdifferential of a parametric LP value function at `x̄`, exact
/// H-form. Requires a finite value at `x̄`.
pub fn value_subdifferential(f: &PLValueFunction, x_bar: &[Rat]) -> Result<HPolyhedron> {
    match f.evaluate(x_bar)? {
        ExtReal::Finite(_) => {}
        _ => {
            return Err(Error::precondition(
                "subdifferential requires a finite value at the base point",
            ))
        }
    }
    let lp = f.instantiate(x_bar)?;
    let dual_face = optimal_dual_face(&lp)?;
    // Map y ↦ Bᵀ y into parameter space.
    let rows = f.rows.len();
    let mut m = Mat::zeros(f.param_dim, rows);
    for i in 0..rows {
        for c in 0..f.param_dim {
            *m.at_mut(c, i) = f.rhs_coupling[i][c].clone();
        }
    }
    affine_image(&dual_face, &m, &vzero(f.param_dim))?.canonicalized()
}

/// Singular subdifferential of a convex piecewise-linear value function:
/// the normal cone of its effective domain at `x̄`. Trivial exactly when
/// `x̄` is interior to the domain.
pub fn singular_subdifferential(f: &PLValueFunction, x_bar: &[Rat]) -> Result<ConeSet> {
    match f.evaluate(x_bar)? {
        ExtReal::Finite(_) => {}
        _ => {
            return Err(Error::precondition(
                "singular subdifferential requires a finite value at the base point",
            ))
        }
    }
    normal_cone_at(&f.domain()?, x_bar)
}

/// Coderivative `D*G(x̄,ȳ)(v)` of a polyhedral-graph map at a graph
/// point.
pub fn coderivative(
    g: &GraphMap,
    x_bar: &[Rat],
    y_bar: &[Rat],
    v: &[Rat],
) -> Result<CoderivativeResult> {
    if v.len() != g.output_dim() {
        return Err(Error::structure("coderivative: direction dimension mismatch"));
    }
    if !g.graph_contains(x_bar, y_bar)? {
        return Err(Error::precondition(
            "coderivative requested off the graph",
        ));
    }
    let m = g.input_dim();
    let mut point = x_bar.to_vec();
    point.extend_from_slice(y_bar);
    let graph_cone = normal_cone_at(g.graph(), &point)?;
    // (u, -v) ∈ N  ⟺  N_u u ≤/= N_z v row by row.
    let np = graph_cone.as_poly();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..np.row_count() {
        let full = &np.rows()[i];
        rows.push(full[..m].to_vec());
        rhs.push(dot(&full[m..], v) + np.rhs()[i].clone());
    }
    let set = HPolyhedron::from_parts(m, rows, np.kinds().to_vec(), rhs)?.canonicalized()?;
    Ok(CoderivativeResult { set, graph_cone })
}

/// The coderivative at `v = 0` as a cone — the object every Aubin-type
/// criterion tests for triviality.
pub fn coderivative_cone(g: &GraphMap, x_bar: &[Rat], y_bar: &[Rat]) -> Result<ConeSet> {
    let zero = vzero(g.output_dim());
    ConeSet::from_hpoly(coderivative(g, x_bar, y_bar, &zero)?.set)
}

/// For convex-graph maps, `D*G(x̄,ȳ)(0)` is also the normal cone of the
/// domain at `x̄`, independent of `ȳ` — the cheap route, cross-checked
/// against [`coderivative_cone`] in the test suites.
pub fn coderivative_at_zero_convex(g: &GraphMap, x_bar: &[Rat]) -> Result<ConeSet> {
    let dom = g.dom()?;
    normal_cone_at(&dom, x_bar)
}

/// Singular subdifferential of the gauge of `F` at `x̄` in closed form:
/// `F⁻ ∩ {x̄}⁺`. Requires `x̄` in the domain of the gauge.
pub fn minkowski_singular(f: &VPolytope, x_bar: &[Rat]) -> Result<ConeSet> {
    match crate::varfun::gauge(f, x_bar)? {
        ExtReal::Finite(_) => {}
        _ => {
            return Err(Error::precondition(
                "gauge is infinite at the base point",
            ))
        }
    }
    negative_dual(f)?.intersect(&point_dual(x_bar)?)
}

/// Subdifferential of the scalarization `φ_d(·; Ω)` at `x̄`, as the slice
/// `{w : ⟨w, −d⟩ = 1} ∩ N(x̃; Ω)` of the normal cone at the hit point
/// `x̃ = x̄ + φ_d(x̄) d`.
///
/// `exact` is true when `x̄` lies in the interior of `dom φ_d` (local
/// Lipschitz continuity of the convex value function, hence calmness);
/// otherwise the set is an upper estimate.
#[derive(Clone, Debug)]
pub struct ScalarizationSubdifferential {
    pub set: HPolyhedron,
    pub hit_point: Vec<Rat>,
    pub exact: bool,
}

pub fn scalarization_subdifferential(
    omega: &HPolyhedron,
    d: &[Rat],
    x_bar: &[Rat],
) -> Result<ScalarizationSubdifferential> {
    let f = scalarization_fn(omega, d)?;
    let t = match f.evaluate(x_bar)? {
        ExtReal::Finite(t) => t,
        _ => {
            return Err(Error::precondition(
                "scalarization subdifferential requires a finite value",
            ))
        }
    };
    let hit_point = vadd(x_bar, &vscale(&t, d));
    let normal = normal_cone_at(omega, &hit_point)?;
    let np = normal.as_poly();
    let mut rows = np.rows().to_vec();
    let mut kinds = np.kinds().to_vec();
    let mut rhs = np.rhs().to_vec();
    rows.push(vneg(d));
    kinds.push(RowKind::Eq);
    rhs.push(Rat::one());
    let set = HPolyhedron::from_parts(omega.dim(), rows, kinds, rhs)?.canonicalized()?;
    let exact = matches!(
        f.domain()?.classify_point(x_bar)?,
        PointLocation::Interior
    );
    Ok(ScalarizationSubdifferential {
        set,
        hit_point,
        exact,
    })
}

/// Membership of `v` in the support-sphere slice `{v : σ_F(−v) = 1}`
/// used by the minimal-time subdifferential estimates.
pub fn in_support_sphere(f: &VPolytope, v: &[Rat]) -> Result<bool> {
    Ok(support_value(f, &vneg(v))? == Rat::one())
}
