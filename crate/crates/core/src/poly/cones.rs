//! Cone calculus: dual cones, normal cones, support values, and the
//! triviality decision that every Lipschitz criterion in the crate reduces
//! to.
//!
//! Triviality of a cone `C` is decided by the `2n` LP feasibility probes
//! `{v in C, v_i = ±1}` — complete because cones are closed under positive
//! scaling, so any nonzero member scales to reach some `v_i = ±1`. An
//! independent decision via extreme-ray enumeration is exposed for
//! cross-checking in tests.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, Feasibility, RowKind};
use crate::poly::convert::{hrep_to_vrep, vrep_to_hrep};
use crate::poly::{ConeSet, HPolyhedron, PointLocation, VPolytope};
use crate::rat::{dot, vneg, vzero, Rat};

/// Positive dual cone `F⁺ = {v : ⟨v, x⟩ >= 0 for all x in F}`.
///
/// Generated sets only need their generators checked: one row per vertex
/// and per ray. The dual of the empty set is the whole space.
pub fn positive_dual(f: &VPolytope) -> Result<ConeSet> {
    let dim = f.dim();
    let mut rows = Vec::new();
    for g in f.vertices().iter().chain(f.rays()) {
        rows.push(vneg(g));
    }
    let n = rows.len();
    ConeSet::from_hpoly(HPolyhedron::from_parts(
        dim,
        rows,
        vec![RowKind::Le; n],
        vzero(n),
    )?)
}

/// Negative dual cone `F⁻ = -F⁺ = {v : ⟨v, x⟩ <= 0 for all x in F}`.
pub fn negative_dual(f: &VPolytope) -> Result<ConeSet> {
    let dim = f.dim();
    let rows: Vec<Vec<Rat>> = f.vertices().iter().chain(f.rays()).cloned().collect();
    let n = rows.len();
    ConeSet::from_hpoly(HPolyhedron::from_parts(
        dim,
        rows,
        vec![RowKind::Le; n],
        vzero(n),
    )?)
}

/// Orthogonal complement `F^⊥ = {v : ⟨v, x⟩ = 0 for all x in F}`.
pub fn orthogonal_complement(f: &VPolytope) -> Result<ConeSet> {
    let dim = f.dim();
    let rows: Vec<Vec<Rat>> = f.vertices().iter().chain(f.rays()).cloned().collect();
    let n = rows.len();
    ConeSet::from_hpoly(HPolyhedron::from_parts(
        dim,
        rows,
        vec![RowKind::Eq; n],
        vzero(n),
    )?)
}

/// Dual halfspace of a single point, `{v : ⟨v, x̄⟩ >= 0}` (the whole space
/// when `x̄ = 0`).
pub fn point_dual(x: &[Rat]) -> Result<ConeSet> {
    ConeSet::from_hpoly(HPolyhedron::from_parts(
        x.len(),
        vec![vneg(x)],
        vec![RowKind::Le],
        vec![Rat::zero()],
    )?)
}

/// H-form of the cone generated by `gens` (the trivial cone for an empty
/// generator list), via the lifted Fourier–Motzkin route.
pub fn cone_from_generators(dim: usize, gens: &[Vec<Rat>]) -> Result<ConeSet> {
    let rays: Vec<Vec<Rat>> = gens.iter().filter(|g| !crate::rat::is_zero_vec(g)).cloned().collect();
    let v = VPolytope::new(dim, vec![vzero(dim)], rays)?;
    ConeSet::from_hpoly(vrep_to_hrep(&v)?)
}

/// Normal cone `N(x̄; P)` of a polyhedron at one of its points: the cone
/// generated by the outward normals of active inequality rows plus the
/// spans of equality-row normals. Errors when `x̄` lies outside `P`.
pub fn normal_cone_at(p: &HPolyhedron, x: &[Rat]) -> Result<ConeSet> {
    match p.classify_point(x)? {
        PointLocation::Outside => Err(Error::precondition(
            "normal cone requested at a point outside the set",
        )),
        PointLocation::Interior => Ok(ConeSet::trivial(p.dim())),
        PointLocation::Boundary(active) => {
            let mut gens: Vec<Vec<Rat>> = Vec::new();
            for i in active {
                match p.kinds()[i] {
                    RowKind::Le => gens.push(p.rows()[i].clone()),
                    RowKind::Eq => {
                        gens.push(p.rows()[i].clone());
                        gens.push(vneg(&p.rows()[i]));
                    }
                }
            }
            cone_from_generators(p.dim(), &gens)
        }
    }
}

/// Decide `C = {0}` by the `2n` LP probes `{v in C, v_i = ±1}`.
pub fn is_trivial_cone(c: &ConeSet) -> Result<bool> {
    let dim = c.dim();
    let p = c.as_poly();
    for i in 0..dim {
        for sign in [Rat::one(), -Rat::one()] {
            let mut rows = p.rows().to_vec();
            let mut kinds = p.kinds().to_vec();
            let mut rhs = p.rhs().to_vec();
            let mut probe = vzero(dim);
            probe[i] = Rat::one();
            rows.push(probe);
            kinds.push(RowKind::Eq);
            rhs.push(sign.clone());
            if let Feasibility::Feasible(_) = lp_feasible(&rows, &kinds, &rhs)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Independent triviality decision by extreme-ray enumeration; used to
/// cross-check [`is_trivial_cone`] in the test suites.
pub fn is_trivial_cone_by_rays(c: &ConeSet) -> Result<bool> {
    let v = hrep_to_vrep(c.as_poly())?;
    let origin_only = v.vertices().iter().all(|p| crate::rat::is_zero_vec(p));
    Ok(origin_only && v.rays().is_empty())
}

/// A nonzero member of the cone, if one exists (deterministic: the first
/// successful probe of [`is_trivial_cone`]'s schedule).
pub fn nontrivial_witness(c: &ConeSet) -> Result<Option<Vec<Rat>>> {
    let dim = c.dim();
    let p = c.as_poly();
    for i in 0..dim {
        for sign in [Rat::one(), -Rat::one()] {
            let mut rows = p.rows().to_vec();
            let mut kinds = p.kinds().to_vec();
            let mut rhs = p.rhs().to_vec();
            let mut probe = vzero(dim);
            probe[i] = Rat::one();
            rows.push(probe);
            kinds.push(RowKind::Eq);
            rhs.push(sign.clone());
            if let Feasibility::Feasible(x) = lp_feasible(&rows, &kinds, &rhs)? {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Support value `σ_F(v) = max {⟨v, x⟩ : x in F}`.
///
/// Errors on the empty set and on directions along which `F` is unbounded
/// (the crate's dynamics are bounded sets by standing assumption).
pub fn support_value(f: &VPolytope, v: &[Rat]) -> Result<Rat> {
    if v.len() != f.dim() {
        return Err(Error::structure("support_value: dimension mismatch"));
    }
    if f.is_empty() {
        return Err(Error::EmptyInput("support of the empty set".into()));
    }
    for r in f.rays() {
        if dot(r, v).is_positive() {
            return Err(Error::precondition(
                "support value unbounded along a recession ray",
            ));
        }
    }
    Ok(f
        .vertices()
        .iter()
        .map(|x| dot(x, v))
        .max()
        .expect("nonempty vertex list"))
}
