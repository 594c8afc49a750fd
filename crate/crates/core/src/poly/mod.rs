//! Polyhedral sets in exact arithmetic.
//!
//! Two representations with certified conversions between them:
//!
//! * [`HPolyhedron`] — intersection of halfspaces and hyperplanes
//!   `{x : aᵢ·x {<=,=} bᵢ}`, the workhorse representation;
//! * [`VPolytope`] — generator form `conv(vertices) + cone(rays)`.
//!
//! The empty set is first-class: it is representable (canonically as the
//! single row `0·x <= -1`), detectable by LP, and handled by every
//! operation. Canonicalization scales rows to primitive integer form,
//! deduplicates, drops LP-certified redundant rows, and sorts, so that two
//! canonical H-forms of the same set are often syntactically identical (and
//! [`HPolyhedron::set_equal`] short-circuits on that).
//!
//! Submodules carry the heavier machinery: Fourier–Motzkin projection
//! ([`fm`]), representation conversion ([`convert`]), cone calculus
//! ([`cones`]), face enumeration ([`faces`]), and exact Euclidean projection
//! ([`project`]).

pub mod cones;
pub mod convert;
pub mod faces;
pub mod fm;
pub mod project;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, solve_lp, Feasibility, LinearProgram, LpOutcome, RowKind, Sense, VarBound};
use crate::rat::{dot, is_zero_vec, primitive_integer_form, vzero, Rat};

/// Polyhedron in halfspace representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<Vec<Rat>>,
    kinds: Vec<RowKind>,
    rhs: Vec<Rat>,
}

/// Polyhedron in generator representation: `conv(vertices) + cone(rays)`.
///
/// An empty vertex list denotes the empty set; rays without at least one
/// base point are rejected as structurally ambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
}

/// Convex polyhedral cone, stored as a homogeneous [`HPolyhedron`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSet {
    poly: HPolyhedron,
}

/// A face of a polyhedron: the exact active inequality-row set together
/// with a relative-interior witness (all other inequality rows strict).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Indices of inequality rows active on the whole face.
    pub active: Vec<usize>,
    /// Point in the relative interior of the face.
    pub witness: Vec<Rat>,
}

/// Where a point sits relative to a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointLocation {
    /// Violates at least one row.
    Outside,
    /// Satisfies all rows, with at least one nontrivial row active; carries
    /// the active row index set (both kinds, zero-normal rows ignored).
    Boundary(Vec<usize>),
    /// Satisfies every inequality row strictly and no nontrivial equality
    /// row exists, so a full-dimensional neighborhood fits inside.
    Interior,
}

impl HPolyhedron {
    /// Build from raw parts, validating shapes only (no canonicalization).
    pub fn from_parts(
        dim: usize,
        rows: Vec<Vec<Rat>>,
        kinds: Vec<RowKind>,
        rhs: Vec<Rat>,
    ) -> Result<Self> {
        if rows.len() != kinds.len() || rows.len() != rhs.len() {
            return Err(Error::structure("hpolyhedron: rows/kinds/rhs mismatch"));
        }
        for r in &rows {
            if r.len() != dim {
                return Err(Error::structure("hpolyhedron: row width != dim"));
            }
        }
        Ok(HPolyhedron { dim, rows, kinds, rhs })
    }

    /// The whole space `R^dim` (no rows).
    pub fn full_space(dim: usize) -> Self {
        HPolyhedron { dim, rows: vec![], kinds: vec![], rhs: vec![] }
    }

    /// Canonical empty set in `R^dim` (`0·x <= -1`).
    pub fn empty(dim: usize) -> Self {
        HPolyhedron {
            dim,
            rows: vec![vzero(dim)],
            kinds: vec![RowKind::Le],
            rhs: vec![-Rat::from_integer(1.into())],
        }
    }

    /// Single point `{p}` as an equality system.
    pub fn single_point(p: &[Rat]) -> Self {
        let dim = p.len();
        let mut rows = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut r = vzero(dim);
            r[j] = Rat::from_integer(1.into());
            rows.push(r);
        }
        HPolyhedron { dim, rows, kinds: vec![RowKind::Eq; dim], rhs: p.to_vec() }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Constraint rows.
    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    /// Row kinds.
    pub fn kinds(&self) -> &[RowKind] {
        &self.kinds
    }

    /// Right-hand sides.
    pub fn rhs(&self) -> &[Rat] {
        &self.rhs
    }

    /// Number of rows.
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rat]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        self.rows.iter().zip(&self.kinds).zip(&self.rhs).all(|((a, k), b)| {
            let v = dot(a, x);
            match k {
                RowKind::Le => v <= *b,
                RowKind::Eq => v == *b,
            }
        })
    }

    /// Classify a point as outside / boundary / interior.
    ///
    /// Zero-normal rows are evaluated for membership but never counted as
    /// active, so the interior verdict matches the topological interior for
    /// any representation, canonical or not.
    pub fn classify_point(&self, x: &[Rat]) -> Result<PointLocation> {
        if x.len() != self.dim {
            return Err(Error::structure("classify_point: dimension mismatch"));
        }
        let mut active = Vec::new();
        for (i, ((a, k), b)) in self.rows.iter().zip(&self.kinds).zip(&self.rhs).enumerate() {
            let v = dot(a, x);
            match k {
                RowKind::Le => {
                    if v > *b {
                        return Ok(PointLocation::Outside);
                    }
                    if v == *b && !is_zero_vec(a) {
                        active.push(i);
                    }
                }
                RowKind::Eq => {
                    if v != *b {
                        return Ok(PointLocation::Outside);
                    }
                    if !is_zero_vec(a) {
                        active.push(i);
                    }
                }
            }
        }
        if active.is_empty() {
            Ok(PointLocation::Interior)
        } else {
            Ok(PointLocation::Boundary(active))
        }
    }

    /// LP feasibility.
    pub fn is_empty(&self) -> Result<bool> {
        match lp_feasible(&self.rows, &self.kinds, &self.rhs)? {
            Feasibility::Feasible(_) => Ok(false),
            Feasibility::Infeasible(_) => Ok(true),
        }
    }

    /// Some point of the set, if nonempty.
    pub fn any_point(&self) -> Result<Option<Vec<Rat>>> {
        match lp_feasible(&self.rows, &self.kinds, &self.rhs)? {
            Feasibility::Feasible(mut x) => {
                // A row-free system leaves the witness width at zero;
                // pad to ambient dimension (the origin works).
                x.resize(self.dim, Rat::zero());
                Ok(Some(x))
            }
            Feasibility::Infeasible(_) => Ok(None),
        }
    }

    /// Intersection (row concatenation).
    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::structure("intersect: dimension mismatch"));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let mut kinds = self.kinds.clone();
        kinds.extend(other.kinds.iter().cloned());
        let mut rhs = self.rhs.clone();
        rhs.extend(other.rhs.iter().cloned());
        Ok(HPolyhedron { dim: self.dim, rows, kinds, rhs })
    }

    /// Translate by `t`: `{x + t : x in P}`.
    pub fn translate(&self, t: &[Rat]) -> Result<HPolyhedron> {
        if t.len() != self.dim {
            return Err(Error::structure("translate: dimension mismatch"));
        }
        let rhs = self
            .rhs
            .iter()
            .zip(&self.rows)
            .map(|(b, a)| b + dot(a, t))
            .collect();
        Ok(HPolyhedron { dim: self.dim, rows: self.rows.clone(), kinds: self.kinds.clone(), rhs })
    }

    /// Positive scaling `t·P` for `t > 0`.
    pub fn scale(&self, t: &Rat) -> Result<HPolyhedron> {
        if !t.is_positive() {
            return Err(Error::precondition("scale requires t > 0"));
        }
        let rhs = self.rhs.iter().map(|b| b * t).collect();
        Ok(HPolyhedron { dim: self.dim, rows: self.rows.clone(), kinds: self.kinds.clone(), rhs })
    }

    /// Maximize `objective` over the set (all variables free).
    pub fn maximize(&self, objective: &[Rat]) -> Result<LpOutcome> {
        if objective.len() != self.dim {
            return Err(Error::structure("maximize: dimension mismatch"));
        }
        solve_lp(&LinearProgram {
            sense: Sense::Max,
            objective: objective.to_vec(),
            rows: self.rows.clone(),
            kinds: self.kinds.clone(),
            rhs: self.rhs.clone(),
            bounds: vec![VarBound::Free; self.dim],
        })
    }

    /// True iff every row of `self` holds with equality on the whole set
    /// image — helper for validity of a single row against a set.
    fn row_valid(&self, a: &[Rat], kind: RowKind, b: &Rat) -> Result<bool> {
        match kind {
            RowKind::Le => match self.maximize(a)? {
                LpOutcome::Optimal { value, .. } => Ok(value <= *b),
                LpOutcome::Unbounded { .. } => Ok(false),
                LpOutcome::Infeasible { .. } => Ok(true),
            },
            RowKind::Eq => {
                let hi = match self.maximize(a)? {
                    LpOutcome::Optimal { value, .. } => value,
                    LpOutcome::Unbounded { .. } => return Ok(false),
                    LpOutcome::Infeasible { .. } => return Ok(true),
                };
                let lo = match self.maximize(&crate::rat::vneg(a))? {
                    LpOutcome::Optimal { value, .. } => -value,
                    LpOutcome::Unbounded { .. } => return Ok(false),
                    LpOutcome::Infeasible { .. } => return Ok(true),
                };
                Ok(hi == *b && lo == *b)
            }
        }
    }

    /// Exact inclusion test `self ⊆ other` (per-row LP certification).
    pub fn subset_of(&self, other: &HPolyhedron) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::structure("subset_of: dimension mismatch"));
        }
        if self.is_empty()? {
            return Ok(true);
        }
        for ((a, k), b) in other.rows.iter().zip(&other.kinds).zip(&other.rhs) {
            if !self.row_valid(a, *k, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact set equality (mutual inclusion, with a syntactic short-circuit
    /// on canonical forms).
    pub fn set_equal(&self, other: &HPolyhedron) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::structure("set_equal: dimension mismatch"));
        }
        let a = self.canonicalized()?;
        let b = other.canonicalized()?;
        if a == b {
            return Ok(true);
        }
        Ok(a.subset_of(&b)? && b.subset_of(&a)?)
    }

    /// Canonical H-form: primitive integer rows, zero rows resolved,
    /// duplicates removed, LP-certified irredundant, deterministically
    /// sorted. Empty sets collapse to [`HPolyhedron::empty`].
    pub fn canonicalized(&self) -> Result<HPolyhedron> {
        // Resolve zero-normal rows and scale the rest to primitive form.
        let mut triples: Vec<(RowKind, Vec<Rat>, Rat)> = Vec::new();
        for ((a, k), b) in self.rows.iter().zip(&self.kinds).zip(&self.rhs) {
            if is_zero_vec(a) {
                let violated = match k {
                    RowKind::Le => b.is_negative(),
                    RowKind::Eq => !b.is_zero(),
                };
                if violated {
                    return Ok(HPolyhedron::empty(self.dim));
                }
                continue;
            }
            let mut joint = a.clone();
            joint.push(b.clone());
            let mut prim = primitive_integer_form(&joint);
            if *k == RowKind::Eq {
                // Canonical orientation for hyperplanes.
                if let Some(first) = prim.iter().find(|v| !v.is_zero()) {
                    if first.is_negative() {
                        prim = crate::rat::vneg(&prim);
                    }
                }
            }
            let b_new = prim.pop().expect("joint row nonempty");
            triples.push((*k, prim, b_new));
        }
        triples.sort();
        triples.dedup();

        let mut p = HPolyhedron {
            dim: self.dim,
            rows: triples.iter().map(|t| t.1.clone()).collect(),
            kinds: triples.iter().map(|t| t.0).collect(),
            rhs: triples.iter().map(|t| t.2.clone()).collect(),
        };
        if p.is_empty()? {
            return Ok(HPolyhedron::empty(self.dim));
        }

        // Irredundancy: drop each row implied by the remaining ones.
        let mut i = 0;
        while i < p.rows.len() {
            let rest = HPolyhedron {
                dim: p.dim,
                rows: p.rows.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect(),
                kinds: p.kinds.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, k)| *k).collect(),
                rhs: p.rhs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b.clone()).collect(),
            };
            if rest.row_valid(&p.rows[i], p.kinds[i], &p.rhs[i])? {
                p = rest;
            } else {
                i += 1;
            }
        }
        Ok(p)
    }
}

impl VPolytope {
    /// Build from generator lists; vertices are deduplicated, rays are
    /// scaled to primitive form and deduplicated.
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>, rays: Vec<Vec<Rat>>) -> Result<Self> {
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::structure("vpolytope: vertex width != dim"));
            }
        }
        for r in &rays {
            if r.len() != dim {
                return Err(Error::structure("vpolytope: ray width != dim"));
            }
            if is_zero_vec(r) {
                return Err(Error::structure("vpolytope: zero ray"));
            }
        }
        if vertices.is_empty() && !rays.is_empty() {
            return Err(Error::structure("vpolytope: rays without a base point"));
        }
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        let mut rays: Vec<Vec<Rat>> = rays.iter().map(|r| primitive_integer_form(r)).collect();
        rays.sort();
        rays.dedup();
        Ok(VPolytope { dim, vertices, rays })
    }

    /// Canonical empty set in `R^dim`.
    pub fn empty(dim: usize) -> Self {
        VPolytope { dim, vertices: vec![], rays: vec![] }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generator points.
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// Recession directions.
    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    /// True iff the generator lists denote the empty set.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True iff the set is bounded (no rays).
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// Exact membership: is `x` a convex combination of vertices plus a
    /// nonnegative combination of rays? Decided by LP feasibility.
    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::structure("vpolytope contains: dimension mismatch"));
        }
        if self.is_empty() {
            return Ok(false);
        }
        // Unknowns: lambda (per vertex, >= 0, sum 1), mu (per ray, >= 0).
        let nv = self.vertices.len();
        let nr = self.rays.len();
        let mut rows = Vec::new();
        let mut kinds = Vec::new();
        let mut rhs = Vec::new();
        for coord in 0..self.dim {
            let mut row = Vec::with_capacity(nv + nr);
            for v in &self.vertices {
                row.push(v[coord].clone());
            }
            for r in &self.rays {
                row.push(r[coord].clone());
            }
            rows.push(row);
            kinds.push(RowKind::Eq);
            rhs.push(x[coord].clone());
        }
        let mut ones = vec![Rat::from_integer(1.into()); nv];
        ones.extend(vzero(nr));
        rows.push(ones);
        kinds.push(RowKind::Eq);
        rhs.push(Rat::from_integer(1.into()));
        let lp = LinearProgram {
            sense: Sense::Min,
            objective: vzero(nv + nr),
            rows,
            kinds,
            rhs,
            bounds: vec![VarBound::NonNeg; nv + nr],
        };
        Ok(matches!(solve_lp(&lp)?, LpOutcome::Optimal { .. }))
    }
}

impl ConeSet {
    /// Wrap a homogeneous H-polyhedron; rejects any nonzero right-hand side.
    pub fn from_hpoly(poly: HPolyhedron) -> Result<Self> {
        if poly.rhs().iter().any(|b| !b.is_zero()) {
            return Err(Error::structure("coneset: inhomogeneous right-hand side"));
        }
        Ok(ConeSet { poly })
    }

    /// The trivial cone `{0}`.
    pub fn trivial(dim: usize) -> Self {
        let mut rows = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut r = vzero(dim);
            r[j] = Rat::from_integer(1.into());
            rows.push(r);
        }
        ConeSet {
            poly: HPolyhedron { dim, rows, kinds: vec![RowKind::Eq; dim], rhs: vzero(dim) },
        }
    }

    /// The full space as a cone.
    pub fn full_space(dim: usize) -> Self {
        ConeSet { poly: HPolyhedron::full_space(dim) }
    }

    /// Underlying H-form.
    pub fn as_poly(&self) -> &HPolyhedron {
        &self.poly
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    /// Exact membership.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.poly.contains(x)
    }

    /// Intersection of two cones.
    pub fn intersect(&self, other: &ConeSet) -> Result<ConeSet> {
        Ok(ConeSet { poly: self.poly.intersect(&other.poly)? })
    }

    /// Canonicalize the underlying H-form (stays homogeneous).
    pub fn canonicalized(&self) -> Result<ConeSet> {
        let p = self.poly.canonicalized()?;
        debug_assert!(p.rhs().iter().all(|b| b.is_zero()), "cone canonical form inhomogeneous");
        Ok(ConeSet { poly: p })
    }
}
