//! Evaluators for the nonsmooth functions of polyhedral variational
//! analysis: gauges, distances in polyhedral norms, scalarized distances
//! to set-valued maps, minimal time functions, generalized projections,
//! and directional scalarizations.
//!
//! Every polyhedral-norm evaluator is realized as a *right-hand-side
//! parametric* linear program ([`PLValueFunction`]): the query point
//! enters the constraints affinely through a coupling matrix, the value
//! is the exact LP optimum, and the same descriptor later feeds the
//! generalized-differentiation layer (subdifferentials come from optimal
//! dual faces, singular subdifferentials from the projected domain).
//! Values are extended reals with the convention `inf ∅ = +∞`; only the
//! scalarization can reach `−∞`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, RowKind, Sense, VarBound};
use crate::poly::convert::vrep_to_hrep;
use crate::poly::fm::project_out;
use crate::poly::{HPolyhedron, VPolytope};
use crate::rat::{dot, format_rat, vadd, vneg, vscale, vzero, Rat};

/// Extended real value. The derived order puts `−∞ < finite < +∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtReal {
    MinusInf,
    Finite(Rat),
    PlusInf,
}

impl ExtReal {
    pub fn finite(r: Rat) -> Self {
        ExtReal::Finite(r)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ExtReal::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::MinusInf => write!(f, "-inf"),
            ExtReal::Finite(r) => write!(f, "{}", format_rat(r)),
            ExtReal::PlusInf => write!(f, "+inf"),
        }
    }
}

/// Norm selection for distance-type evaluators. `L1` and `LInf` are
/// polyhedral and evaluate to exact rationals; `L2` is reserved for the
/// Euclidean projection path, which reports the *squared* distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

/// Closed unit ball of a polyhedral norm as a V-polytope.
pub fn unit_ball(norm: Norm, dim: usize) -> Result<VPolytope> {
    match norm {
        Norm::L2 => Err(Error::Unsupported(
            "the Euclidean ball is not polyhedral; use L1 or LInf".into(),
        )),
        Norm::L1 => {
            let mut vertices = Vec::new();
            for i in 0..dim {
                for sign in [Rat::one(), -Rat::one()] {
                    let mut v = vzero(dim);
                    v[i] = sign;
                    vertices.push(v);
                }
            }
            VPolytope::new(dim, vertices, vec![])
        }
        Norm::LInf => {
            let mut vertices = Vec::new();
            for mask in 0..(1usize << dim) {
                let v: Vec<Rat> = (0..dim)
                    .map(|i| {
                        if mask & (1 << i) != 0 {
                            Rat::one()
                        } else {
                            -Rat::one()
                        }
                    })
                    .collect();
                vertices.push(v);
            }
            VPolytope::new(dim, vertices, vec![])
        }
    }
}

/// A set-valued map `G : R^m ⇉ R^n` given by a polyhedral graph
/// `{(x, z) : z ∈ G(x)}` in `R^{m+n}`.
#[derive(Clone, Debug)]
pub struct GraphMap {
    graph: HPolyhedron,
    m: usize,
    n: usize,
}

impl GraphMap {
    /// Wrap a polyhedron in `R^{m+n}` as a graph. The graph must be
    /// nonempty.
    pub fn new(graph: HPolyhedron, m: usize, n: usize) -> Result<Self> {
        if graph.dim() != m + n {
            return Err(Error::structure(
                "graph dimension must equal input dim + output dim",
            ));
        }
        if graph.is_empty()? {
            return Err(Error::EmptyInput("graph of a set-valued map".into()));
        }
        Ok(GraphMap { graph, m, n })
    }

    /// The constant map `G(x) ≡ Ω` on `R^m`: graph `R^m × Ω`.
    pub fn constant(m: usize, omega: &HPolyhedron) -> Result<Self> {
        let n = omega.dim();
        let rows: Vec<Vec<Rat>> = omega
            .rows()
            .iter()
            .map(|r| {
                let mut row = vzero(m);
                row.extend_from_slice(r);
                row
            })
            .collect();
        let graph =
            HPolyhedron::from_parts(m + n, rows, omega.kinds().to_vec(), omega.rhs().to_vec())?;
        GraphMap::new(graph, m, n)
    }

    pub fn graph(&self) -> &HPolyhedron {
        &self.graph
    }

    pub fn input_dim(&self) -> usize {
        self.m
    }

    pub fn output_dim(&self) -> usize {
        self.n
    }

    /// The image `G(x)` as a polyhedron in the output space (possibly
    /// empty): substitute `x` into the first `m` coordinates.
    pub fn slice(&self, x: &[Rat]) -> Result<HPolyhedron> {
        if x.len() != self.m {
            return Err(Error::structure("slice: input dimension mismatch"));
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..self.graph.row_count() {
            let full = &self.graph.rows()[i];
            rows.push(full[self.m..].to_vec());
            rhs.push(self.graph.rhs()[i].clone() - dot(&full[..self.m], x));
        }
        HPolyhedron::from_parts(self.n, rows, self.graph.kinds().to_vec(), rhs)
    }

    /// The domain `{x : G(x) ≠ ∅}`, by projecting the graph onto the
    /// input coordinates.
    pub fn dom(&self) -> Result<HPolyhedron> {
        let out_coords: Vec<usize> = (self.m..self.m + self.n).collect();
        project_out(&self.graph, &out_coords)
    }

    /// Membership `(x, z) ∈ gph G`.
    pub fn graph_contains(&self, x: &[Rat], z: &[Rat]) -> Result<bool> {
        if x.len() != self.m || z.len() != self.n {
            return Err(Error::structure("graph_contains: dimension mismatch"));
        }
        let mut xy = x.to_vec();
        xy.extend_from_slice(z);
        Ok(self.graph.contains(&xy))
    }
}

/// A convex piecewise-linear value function realized as a right-hand-side
/// parametric minimum LP:
///
/// `f(p) = min { c·w : T w (≤ or =) b0 + B p, w respects bounds }`,
///
/// with `inf ∅ = +∞` and unbounded descent giving `−∞`.
#[derive(Clone, Debug)]
pub struct PLValueFunction {
    pub param_dim: usize,
    pub var_dim: usize,
    pub objective: Vec<Rat>,
    pub rows: Vec<Vec<Rat>>,
    pub kinds: Vec<RowKind>,
    pub rhs_base: Vec<Rat>,
    /// One coupling row per constraint row; `rhs_i(p) = rhs_base[i] +
    /// rhs_coupling[i]·p`.
    pub rhs_coupling: Vec<Vec<Rat>>,
    pub bounds: Vec<VarBound>,
}

impl PLValueFunction {
    /// Structural validation: consistent widths everywhere.
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.var_dim || self.bounds.len() != self.var_dim {
            return Err(Error::structure(
                "value function: objective/bounds width must equal var_dim",
            ));
        }
        let k = self.rows.len();
        if self.kinds.len() != k || self.rhs_base.len() != k || self.rhs_coupling.len() != k {
            return Err(Error::structure(
                "value function: rows, kinds, rhs_base, rhs_coupling must align",
            ));
        }
        for r in &self.rows {
            if r.len() != self.var_dim {
                return Err(Error::structure("value function: ragged constraint row"));
            }
        }
        for b in &self.rhs_coupling {
            if b.len() != self.param_dim {
                return Err(Error::structure("value function: ragged coupling row"));
            }
        }
        Ok(())
    }

    /// The concrete LP at parameter `p`.
    pub fn instantiate(&self, p: &[Rat]) -> Result<LinearProgram> {
        if p.len() != self.param_dim {
            return Err(Error::structure("instantiate: parameter dimension mismatch"));
        }
        self.validate()?;
        let rhs: Vec<Rat> = (0..self.rows.len())
            .map(|i| self.rhs_base[i].clone() + dot(&self.rhs_coupling[i], p))
            .collect();
        Ok(LinearProgram {
            sense: Sense::Min,
            objective: self.objective.clone(),
            rows: self.rows.clone(),
            kinds: self.kinds.clone(),
            rhs,
            bounds: self.bounds.clone(),
        })
    }

    /// Exact value at `p`.
    pub fn evaluate(&self, p: &[Rat]) -> Result<ExtReal> {
        let lp = self.instantiate(p)?;
        Ok(match crate::lp::solve_lp(&lp)? {
            LpOutcome::Optimal { value, .. } => ExtReal::Finite(value),
            LpOutcome::Infeasible { .. } => ExtReal::PlusInf,
            LpOutcome::Unbounded { .. } => ExtReal::MinusInf,
        })
    }

    /// The effective domain `{p : the LP at p is feasible}` as a
    /// polyhedron in parameter space, by projecting the joint feasibility
    /// region `{(p, w)}` onto `p`.
    ///
    /// For RHS-parametric LPs unbounded descent is a recession property
    /// independent of `p`, so on this set the value is either finite
    /// everywhere or `−∞` everywhere.
    pub fn domain(&self) -> Result<HPolyhedron> {
        self.validate()?;
        let np = self.param_dim;
        let nw = self.var_dim;
        let mut rows = Vec::new();
        let mut kinds = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..self.rows.len() {
            // T w - B p ≤/= b0, coordinates ordered (p, w).
            let mut row = vneg(&self.rhs_coupling[i]);
            row.extend_from_slice(&self.rows[i]);
            rows.push(row);
            kinds.push(self.kinds[i]);
            rhs.push(self.rhs_base[i].clone());
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if *b == VarBound::NonNeg {
                let mut row = vzero(np + nw);
                row[np + j] = -Rat::one();
                rows.push(row);
                kinds.push(RowKind::Le);
                rhs.push(Rat::zero());
            }
        }
        let joint = HPolyhedron::from_parts(np + nw, rows, kinds, rhs)?;
        let w_coords: Vec<usize> = (np..np + nw).collect();
        project_out(&joint, &w_coords)
    }

    /// The epigraph `{(p, s) : f(p) ≤ s}` as the graph of a set-valued
    /// map `p ↦ [f(p), ∞)`, by projecting `{(p, s, w) : w feasible at p,
    /// c·w ≤ s}` onto `(p, s)`.
    pub fn epigraph_map(&self) -> Result<GraphMap> {
        self.validate()?;
        let np = self.param_dim;
        let nw = self.var_dim;
        let mut rows = Vec::new();
        let mut kinds = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..self.rows.len() {
            // Coordinates ordered (p, s, w).
            let mut row = vneg(&self.rhs_coupling[i]);
            row.push(Rat::zero());
            row.extend_from_slice(&self.rows[i]);
            rows.push(row);
            kinds.push(self.kinds[i]);
            rhs.push(self.rhs_base[i].clone());
        }
        let mut epi_row = vzero(np + 1 + nw);
        epi_row[np] = -Rat::one();
        epi_row[np + 1..].clone_from_slice(&self.objective);
        rows.push(epi_row);
        kinds.push(RowKind::Le);
        rhs.push(Rat::zero());
        for (j, b) in self.bounds.iter().enumerate() {
            if *b == VarBound::NonNeg {
                let mut row = vzero(np + 1 + nw);
                row[np + 1 + j] = -Rat::one();
                rows.push(row);
                kinds.push(RowKind::Le);
                rhs.push(Rat::zero());
            }
        }
        let joint = HPolyhedron::from_parts(np + 1 + nw, rows, kinds, rhs)?;
        let w_coords: Vec<usize> = (np + 1..np + 1 + nw).collect();
        GraphMap::new(project_out(&joint, &w_coords)?, np, 1)
    }
}

/// Descriptor of the gauge (Minkowski function) of a nonempty bounded
/// polytope: `ρ_F(x) = min { Σ μ_i : Σ μ_i v_i = x, μ ≥ 0 }` over the
/// vertices `v_i` of `F`.
pub fn gauge_fn(f: &VPolytope) -> Result<PLValueFunction> {
    if f.is_empty() {
        return Err(Error::EmptyInput("gauge of the empty set".into()));
    }
    if !f.rays().is_empty() {
        return Err(Error::precondition("gauge requires a bounded set"));
    }
    let dim = f.dim();
    let k = f.vertices().len();
    let mut rows = Vec::new();
    let mut coupling = Vec::new();
    for c in 0..dim {
        rows.push(f.vertices().iter().map(|v| v[c].clone()).collect());
        let mut e = vzero(dim);
        e[c] = Rat::one();
        coupling.push(e);
    }
    Ok(PLValueFunction {
        param_dim: dim,
        var_dim: k,
        objective: vec![Rat::one(); k],
        rows,
        kinds: vec![RowKind::Eq; dim],
        rhs_base: vzero(dim),
        rhs_coupling: coupling,
        bounds: vec![VarBound::NonNeg; k],
    })
}

/// Gauge value `ρ_F(x)`; `+∞` outside the cone generated by `F`.
pub fn gauge(f: &VPolytope, x: &[Rat]) -> Result<ExtReal> {
    gauge_fn(f)?.evaluate(x)
}

/// Descriptor of `x ↦ dist(x, Ω)` in a polyhedral norm, as a parametric
/// LP over variables `(y, s)`: minimize the norm bound `s` subject to
/// `y ∈ Ω` and `±(x − y) ≤ s` componentwise (`s` shared for `LInf`,
/// per-coordinate for `L1`).
pub fn distance_fn(omega: &HPolyhedron, norm: Norm) -> Result<PLValueFunction> {
    let n = omega.dim();
    let (s_count, objective): (usize, Vec<Rat>) = match norm {
        Norm::L1 => (n, {
            let mut c = vzero(2 * n);
            for s in c.iter_mut().skip(n) {
                *s = Rat::one();
            }
            c
        }),
        Norm::LInf => (1, {
            let mut c = vzero(n + 1);
            c[n] = Rat::one();
            c
        }),
        Norm::L2 => {
            return Err(Error::Unsupported(
                "the Euclidean distance has no LP descriptor; use distance() with Norm::L2".into(),
            ))
        }
    };
    let nw = n + s_count;
    let mut rows = Vec::new();
    let mut kinds = Vec::new();
    let mut base = Vec::new();
    let mut coupling = Vec::new();
    for i in 0..omega.row_count() {
        let mut row = omega.rows()[i].clone();
        row.extend(vzero(s_count));
        rows.push(row);
        kinds.push(omega.kinds()[i]);
        base.push(omega.rhs()[i].clone());
        coupling.push(vzero(n));
    }
    for c in 0..n {
        let s_index = n + if s_count == 1 { 0 } else { c };
        // y_c - s ≤ x_c.
        let mut up = vzero(nw);
        up[c] = Rat::one();
        up[s_index] = -Rat::one();
        rows.push(up);
        kinds.push(RowKind::Le);
        base.push(Rat::zero());
        let mut e = vzero(n);
        e[c] = Rat::one();
        coupling.push(e.clone());
        // -y_c - s ≤ -x_c.
        let mut down = vzero(nw);
        down[c] = -Rat::one();
        down[s_index] = -Rat::one();
        rows.push(down);
        kinds.push(RowKind::Le);
        base.push(Rat::zero());
        coupling.push(vneg(&e));
    }
    Ok(PLValueFunction {
        param_dim: n,
        var_dim: nw,
        objective,
        rows,
        kinds,
        rhs_base: base,
        rhs_coupling: coupling,
        bounds: vec![VarBound::Free; nw],
    })
}

/// Distance from `x` to `Ω`: exact rational for `L1`/`LInf`, the exact
/// *squared* Euclidean distance for `L2`. The empty set is at `+∞`.
pub fn distance(omega: &HPolyhedron, x: &[Rat], norm: Norm) -> Result<ExtReal> {
    if x.len() != omega.dim() {
        return Err(Error::structure("distance: dimension mismatch"));
    }
    match norm {
        Norm::L2 => {
            if omega.is_empty()? {
                return Ok(ExtReal::PlusInf);
            }
            Ok(ExtReal::Finite(
                crate::poly::project::metric_projection(omega, x)?.distance_squared,
            ))
        }
        _ => distance_fn(omega, norm)?.evaluate(x),
    }
}

/// Descriptor of the scalarized distance `(x, y) ↦ dist(y, G(x))` in a
/// polyhedral norm, parametric in the joint point `(x, y)`.
pub fn scalar_distance_fn(g: &GraphMap, norm: Norm) -> Result<PLValueFunction> {
    let m = g.input_dim();
    let n = g.output_dim();
    let s_count = match norm {
        Norm::L1 => n,
        Norm::LInf => 1,
        Norm::L2 => {
            return Err(Error::Unsupported(
                "the Euclidean scalarized distance has no LP descriptor".into(),
            ))
        }
    };
    // Variables (z, s): z ∈ G(x), s bounds the norm of y - z.
    let nw = n + s_count;
    let mut objective = vzero(nw);
    for slot in objective.iter_mut().skip(n) {
        *slot = Rat::one();
    }
    let mut rows = Vec::new();
    let mut kinds = Vec::new();
    let mut base = Vec::new();
    let mut coupling = Vec::new();
    let graph = g.graph();
    for i in 0..graph.row_count() {
        let full = &graph.rows()[i];
        let mut row = full[m..].to_vec();
        row.extend(vzero(s_count));
        rows.push(row);
        kinds.push(graph.kinds()[i]);
        base.push(graph.rhs()[i].clone());
        let mut cp = vneg(&full[..m]);
        cp.extend(vzero(n));
        coupling.push(cp);
    }
    for c in 0..n {
        let s_index = n + if s_count == 1 { 0 } else { c };
        // z_c - s ≤ y_c.
        let mut up = vzero(nw);
        up[c] = Rat::one();
        up[s_index] = -Rat::one();
        rows.push(up);
        kinds.push(RowKind::Le);
        base.push(Rat::zero());
        let mut cp = vzero(m + n);
        cp[m + c] = Rat::one();
        coupling.push(cp);
        // -z_c - s ≤ -y_c.
        let mut down = vzero(nw);
        down[c] = -Rat::one();
        down[s_index] = -Rat::one();
        rows.push(down);
        kinds.push(RowKind::Le);
        base.push(Rat::zero());
        let mut cp = vzero(m + n);
        cp[m + c] = -Rat::one();
        coupling.push(cp);
    }
    Ok(PLValueFunction {
        param_dim: m + n,
        var_dim: nw,
        objective,
        rows,
        kinds,
        rhs_base: base,
        rhs_coupling: coupling,
        bounds: vec![VarBound::Free; nw],
    })
}

/// Scalarized distance `D(x, y) = dist(y, G(x))`; `+∞` on empty images.
pub fn scalar_distance(g: &GraphMap, x: &[Rat], y: &[Rat], norm: Norm) -> Result<ExtReal> {
    if x.len() != g.input_dim() || y.len() != g.output_dim() {
        return Err(Error::structure("scalar_distance: dimension mismatch"));
    }
    match norm {
        Norm::L2 => distance(&g.slice(x)?, y, Norm::L2),
        _ => {
            let mut p = x.to_vec();
            p.extend_from_slice(y);
            scalar_distance_fn(g, norm)?.evaluate(&p)
        }
    }
}

/// Descriptor of the minimal time `x ↦ inf { t ≥ 0 : (x + tF) ∩ Ω ≠ ∅ }`
/// with dynamic set `F` (nonempty bounded): minimize `Σ μ_i` subject to
/// `x + Σ μ_i v_i ∈ Ω`, `μ ≥ 0`.
pub fn minimal_time_fn(f: &VPolytope, omega: &HPolyhedron) -> Result<PLValueFunction> {
    if f.dim() != omega.dim() {
        return Err(Error::structure("minimal_time: dimension mismatch"));
    }
    if f.is_empty() {
        return Err(Error::EmptyInput("minimal time with empty dynamics".into()));
    }
    if !f.rays().is_empty() {
        return Err(Error::precondition("minimal time requires bounded dynamics"));
    }
    let k = f.vertices().len();
    let mut rows = Vec::new();
    let mut coupling = Vec::new();
    for i in 0..omega.row_count() {
        let a = &omega.rows()[i];
        rows.push(f.vertices().iter().map(|v| dot(a, v)).collect());
        coupling.push(vneg(a));
    }
    Ok(PLValueFunction {
        param_dim: omega.dim(),
        var_dim: k,
        objective: vec![Rat::one(); k],
        rows,
        kinds: omega.kinds().to_vec(),
        rhs_base: omega.rhs().to_vec(),
        rhs_coupling: coupling,
        bounds: vec![VarBound::NonNeg; k],
    })
}

/// Minimal time to reach `Ω` from `x` with dynamics `F`; `+∞` when
/// unreachable. Zero exactly on `Ω`.
pub fn minimal_time(f: &VPolytope, omega: &HPolyhedron, x: &[Rat]) -> Result<ExtReal> {
    minimal_time_fn(f, omega)?.evaluate(x)
}

/// Descriptor of the set-valued minimal time `(x, y) ↦ inf { t ≥ 0 :
/// (y + tF) ∩ G(x) ≠ ∅ }`, parametric in the joint point.
pub fn minimal_time_sv_fn(f: &VPolytope, g: &GraphMap) -> Result<PLValueFunction> {
    if f.dim() != g.output_dim() {
        return Err(Error::structure(
            "minimal_time_sv: dynamics must live in the output space",
        ));
    }
    if f.is_empty() {
        return Err(Error::EmptyInput("minimal time with empty dynamics".into()));
    }
    if !f.rays().is_empty() {
        return Err(Error::precondition("minimal time requires bounded dynamics"));
    }
    let m = g.input_dim();
    let n = g.output_dim();
    let k = f.vertices().len();
    let graph = g.graph();
    let mut rows = Vec::new();
    let mut coupling = Vec::new();
    for i in 0..graph.row_count() {
        let full = &graph.rows()[i];
        let a_z = &full[m..];
        rows.push(f.vertices().iter().map(|v| dot(a_z, v)).collect());
        coupling.push(vneg(full));
    }
    let _ = n;
    Ok(PLValueFunction {
        param_dim: m + n,
        var_dim: k,
        objective: vec![Rat::one(); k],
        rows,
        kinds: graph.kinds().to_vec(),
        rhs_base: graph.rhs().to_vec(),
        rhs_coupling: coupling,
        bounds: vec![VarBound::NonNeg; k],
    })
}

/// Set-valued minimal time `T(x, y)`; zero exactly when `y ∈ G(x)`.
pub fn minimal_time_sv(f: &VPolytope, g: &GraphMap, x: &[Rat], y: &[Rat]) -> Result<ExtReal> {
    if x.len() != g.input_dim() || y.len() != g.output_dim() {
        return Err(Error::structure("minimal_time_sv: dimension mismatch"));
    }
    let mut p = x.to_vec();
    p.extend_from_slice(y);
    minimal_time_sv_fn(f, g)?.evaluate(&p)
}

/// Generalized projection: the attainment set `(ȳ + t̄ F) ∩ G(x̄)` at the
/// optimal time `t̄`, nonempty whenever `t̄` is finite. Errors when the
/// target is unreachable.
pub fn generalized_projection(
    f: &VPolytope,
    g: &GraphMap,
    x_bar: &[Rat],
    y_bar: &[Rat],
) -> Result<HPolyhedron> {
    let t_bar = match minimal_time_sv(f, g, x_bar, y_bar)? {
        ExtReal::Finite(t) => t,
        _ => {
            return Err(Error::precondition(
                "generalized projection needs a finite minimal time",
            ))
        }
    };
    let reach = if t_bar.is_zero() {
        HPolyhedron::single_point(y_bar)
    } else {
        let shifted: Vec<Vec<Rat>> = f
            .vertices()
            .iter()
            .map(|v| vadd(y_bar, &vscale(&t_bar, v)))
            .collect();
        vrep_to_hrep(&VPolytope::new(f.dim(), shifted, vec![])?)?
    };
    reach.intersect(&g.slice(x_bar)?)?.canonicalized()
}

/// Descriptor of the scalarization `x ↦ inf { t ∈ R : x + t d ∈ Ω }`
/// along a nonzero direction `d`. The only evaluator that can reach
/// `−∞`.
pub fn scalarization_fn(omega: &HPolyhedron, d: &[Rat]) -> Result<PLValueFunction> {
    if d.len() != omega.dim() {
        return Err(Error::structure("scalarization: dimension mismatch"));
    }
    if crate::rat::is_zero_vec(d) {
        return Err(Error::precondition("scalarization direction must be nonzero"));
    }
    let mut rows = Vec::new();
    let mut coupling = Vec::new();
    for i in 0..omega.row_count() {
        let a = &omega.rows()[i];
        rows.push(vec![dot(a, d)]);
        coupling.push(vneg(a));
    }
    Ok(PLValueFunction {
        param_dim: omega.dim(),
        var_dim: 1,
        objective: vec![Rat::one()],
        rows,
        kinds: omega.kinds().to_vec(),
        rhs_base: omega.rhs().to_vec(),
        rhs_coupling: coupling,
        bounds: vec![VarBound::Free],
    })
}

/// Scalarization value `φ_d(x; Ω)`: `+∞` when the ray misses `Ω`, `−∞`
/// when the hitting time is unbounded below.
pub fn scalarization(omega: &HPolyhedron, d: &[Rat], x: &[Rat]) -> Result<ExtReal> {
    scalarization_fn(omega, d)?.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn simplex_segment() -> VPolytope {
        VPolytope::new(
            2,
            vec![vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]],
            vec![],
        )
        .unwrap()
    }

    fn x_axis() -> HPolyhedron {
        HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(0), rat_int(1)]],
            vec![RowKind::Eq],
            vec![rat_int(0)],
        )
        .unwrap()
    }

    fn vertical_needle() -> VPolytope {
        // F = {0} x [0,1].
        VPolytope::new(
            2,
            vec![vec![rat_int(0), rat_int(0)], vec![rat_int(0), rat_int(1)]],
            vec![],
        )
        .unwrap()
    }

    fn half_graph() -> GraphMap {
        // gph = {(x, z) : z ≥ x} in R².
        let h = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(-1)]],
            vec![RowKind::Le],
            vec![rat_int(0)],
        )
        .unwrap();
        GraphMap::new(h, 1, 1).unwrap()
    }

    fn needle_on_halfline() -> GraphMap {
        // gph = R₊ × {0}: nonnegative inputs, image {0}.
        let h = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(-1), rat_int(0)], vec![rat_int(0), rat_int(1)]],
            vec![RowKind::Le, RowKind::Eq],
            vec![rat_int(0), rat_int(0)],
        )
        .unwrap();
        GraphMap::new(h, 1, 1).unwrap()
    }

    #[test]
    fn gauge_values_of_the_simplex_gauge() {
        let f = simplex_segment();
        assert_eq!(
            gauge(&f, &[rat_int(2), rat_int(2)]).unwrap(),
            ExtReal::Finite(rat_int(4))
        );
        assert_eq!(gauge(&f, &[rat_int(1), rat_int(-1)]).unwrap(), ExtReal::PlusInf);
        assert_eq!(
            gauge(&f, &[rat_int(0), rat_int(0)]).unwrap(),
            ExtReal::Finite(rat_int(0))
        );
    }

    #[test]
    fn gauge_is_positively_homogeneous() {
        let f = simplex_segment();
        let x = [rat_int(3), rat(1, 2)];
        let lam = rat(7, 3);
        let fx = gauge(&f, &x).unwrap();
        let fl = gauge(&f, &vscale(&lam, &x)).unwrap();
        match (fx, fl) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => assert_eq!(b, lam * a),
            _ => panic!("expected finite values"),
        }
    }

    #[test]
    fn distances_in_three_norms() {
        let box2 = HPolyhedron::from_parts(
            2,
            vec![
                vec![rat_int(1), rat_int(0)],
                vec![rat_int(-1), rat_int(0)],
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(0), rat_int(-1)],
            ],
            vec![RowKind::Le; 4],
            vec![rat_int(1), rat_int(1), rat_int(1), rat_int(1)],
        )
        .unwrap();
        let x = [rat_int(2), rat_int(3)];
        // Squared Euclidean distance: projection to (1,1), 1 + 4.
        assert_eq!(
            distance(&box2, &x, Norm::L2).unwrap(),
            ExtReal::Finite(rat_int(5))
        );
        assert_eq!(
            distance(&box2, &x, Norm::L1).unwrap(),
            ExtReal::Finite(rat_int(3))
        );
        assert_eq!(
            distance(&box2, &x, Norm::LInf).unwrap(),
            ExtReal::Finite(rat_int(2))
        );
        // Inside: zero in every norm.
        for norm in [Norm::L1, Norm::L2, Norm::LInf] {
            assert_eq!(
                distance(&box2, &[rat(1, 2), rat_int(0)], norm).unwrap(),
                ExtReal::Finite(rat_int(0))
            );
        }
        // Distance to the x-axis from (0, -2) in sup norm.
        assert_eq!(
            distance(&x_axis(), &[rat_int(0), rat_int(-2)], Norm::LInf).unwrap(),
            ExtReal::Finite(rat_int(2))
        );
        // Empty set: +∞.
        assert_eq!(
            distance(&HPolyhedron::empty(2), &x, Norm::L1).unwrap(),
            ExtReal::PlusInf
        );
        assert_eq!(
            distance(&HPolyhedron::empty(2), &x, Norm::L2).unwrap(),
            ExtReal::PlusInf
        );
    }

    #[test]
    fn slices_and_domains_of_graphs() {
        let g = half_graph();
        let s1 = g.slice(&[rat_int(1)]).unwrap();
        assert!(s1.contains(&[rat_int(1)]));
        assert!(s1.contains(&[rat_int(100)]));
        assert!(!s1.contains(&[rat(1, 2)]));
        let dom = g.dom().unwrap();
        assert!(dom.contains(&[rat_int(-50)]));

        let nh = needle_on_halfline();
        assert!(nh.slice(&[rat_int(-1)]).unwrap().is_empty().unwrap());
        let s = nh.slice(&[rat_int(1)]).unwrap();
        assert!(s.contains(&[rat_int(0)]));
        assert!(!s.contains(&[rat_int(1)]));
        let dom = nh.dom().unwrap();
        assert!(dom.contains(&[rat_int(0)]));
        assert!(dom.contains(&[rat_int(3)]));
        assert!(!dom.contains(&[rat_int(-1)]));
    }

    #[test]
    fn scalar_distance_matches_slice_distance() {
        let g = half_graph();
        assert_eq!(
            scalar_distance(&g, &[rat_int(1)], &[rat_int(0)], Norm::LInf).unwrap(),
            ExtReal::Finite(rat_int(1))
        );
        assert_eq!(
            scalar_distance(&g, &[rat_int(0)], &[rat_int(5)], Norm::LInf).unwrap(),
            ExtReal::Finite(rat_int(0))
        );
        let nh = needle_on_halfline();
        assert_eq!(
            scalar_distance(&nh, &[rat_int(-1)], &[rat_int(0)], Norm::LInf).unwrap(),
            ExtReal::PlusInf
        );
        // Descriptor agrees with the slice route on a lattice.
        let d_fn = scalar_distance_fn(&g, Norm::L1).unwrap();
        for xi in -2..=2i64 {
            for yi in -2..=2i64 {
                let via_fn = d_fn.evaluate(&[rat_int(xi), rat_int(yi)]).unwrap();
                let via_slice =
                    distance(&g.slice(&[rat_int(xi)]).unwrap(), &[rat_int(yi)], Norm::L1).unwrap();
                assert_eq!(via_fn, via_slice);
            }
        }
    }

    #[test]
    fn minimal_time_reaches_the_axis() {
        let f = vertical_needle();
        let omega = x_axis();
        assert_eq!(
            minimal_time(&f, &omega, &[rat_int(0), rat_int(-2)]).unwrap(),
            ExtReal::Finite(rat_int(2))
        );
        // On the target: zero.
        assert_eq!(
            minimal_time(&f, &omega, &[rat_int(7), rat_int(0)]).unwrap(),
            ExtReal::Finite(rat_int(0))
        );
        // Above the axis the needle only moves up: unreachable.
        assert_eq!(
            minimal_time(&f, &omega, &[rat_int(0), rat_int(1)]).unwrap(),
            ExtReal::PlusInf
        );
        // One-dimensional forward motion cannot reach a point behind.
        let fwd = VPolytope::new(1, vec![vec![rat_int(1)]], vec![]).unwrap();
        let origin = HPolyhedron::single_point(&[rat_int(0)]);
        assert_eq!(
            minimal_time(&fwd, &origin, &[rat_int(1)]).unwrap(),
            ExtReal::PlusInf
        );
        assert_eq!(
            minimal_time(&fwd, &origin, &[rat_int(-3)]).unwrap(),
            ExtReal::Finite(rat_int(3))
        );
    }

    #[test]
    fn minimal_time_with_unit_ball_is_distance() {
        let omega = x_axis();
        for norm in [Norm::L1, Norm::LInf] {
            let ball = unit_ball(norm, 2).unwrap();
            for (xi, yi) in [(0i64, -2i64), (3, 5), (-1, 0), (2, -7)] {
                let x = [rat_int(xi), rat_int(yi)];
                assert_eq!(
                    minimal_time(&ball, &omega, &x).unwrap(),
                    distance(&omega, &x, norm).unwrap(),
                );
            }
        }
    }

    #[test]
    fn set_valued_minimal_time() {
        let g = half_graph();
        let f = VPolytope::new(1, vec![vec![rat_int(1)]], vec![]).unwrap();
        assert_eq!(
            minimal_time_sv(&f, &g, &[rat_int(2)], &[rat_int(0)]).unwrap(),
            ExtReal::Finite(rat_int(2))
        );
        assert_eq!(
            minimal_time_sv(&f, &g, &[rat_int(0)], &[rat_int(5)]).unwrap(),
            ExtReal::Finite(rat_int(0))
        );
        let nh = needle_on_halfline();
        assert_eq!(
            minimal_time_sv(&f, &nh, &[rat_int(-1)], &[rat_int(0)]).unwrap(),
            ExtReal::PlusInf
        );
    }

    #[test]
    fn generalized_projection_fixtures() {
        // Needle dynamics from below the axis: unique contact at the origin.
        let f = vertical_needle();
        let g = GraphMap::constant(2, &x_axis()).unwrap();
        let pi = generalized_projection(
            &f,
            &g,
            &[rat_int(0), rat_int(0)],
            &[rat_int(0), rat_int(-2)],
        )
        .unwrap();
        let expect = HPolyhedron::single_point(&[rat_int(0), rat_int(0)]);
        assert!(pi.set_equal(&expect).unwrap());
        // Zero time: the projection is the base point itself.
        let g2 = half_graph();
        let f1 = VPolytope::new(1, vec![vec![rat_int(1)]], vec![]).unwrap();
        let pi0 = generalized_projection(&f1, &g2, &[rat_int(0)], &[rat_int(5)]).unwrap();
        assert!(pi0
            .set_equal(&HPolyhedron::single_point(&[rat_int(5)]))
            .unwrap());
        // Horizontal segment pushing into a halfplane: unique contact.
        let seg = VPolytope::new(
            2,
            vec![vec![rat_int(0), rat_int(0)], vec![rat_int(1), rat_int(0)]],
            vec![],
        )
        .unwrap();
        let right = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(-1), rat_int(0)]],
            vec![RowKind::Le],
            vec![rat_int(-1)],
        )
        .unwrap();
        let gr = GraphMap::constant(2, &right).unwrap();
        let pi2 = generalized_projection(
            &seg,
            &gr,
            &[rat_int(0), rat_int(0)],
            &[rat_int(0), rat_int(0)],
        )
        .unwrap();
        assert!(pi2
            .set_equal(&HPolyhedron::single_point(&[rat_int(1), rat_int(0)]))
            .unwrap());
        // Unreachable: error.
        let nh = needle_on_halfline();
        assert!(generalized_projection(&f1, &nh, &[rat_int(-1)], &[rat_int(0)]).is_err());
    }

    #[test]
    fn scalarization_values_and_translation() {
        // Ω = {x₂ ≥ |x₁|}.
        let wedge = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(-1)]],
            vec![RowKind::Le, RowKind::Le],
            vec![rat_int(0), rat_int(0)],
        )
        .unwrap();
        let d = [rat_int(0), rat_int(1)];
        assert_eq!(
            scalarization(&wedge, &d, &[rat_int(1), rat_int(0)]).unwrap(),
            ExtReal::Finite(rat_int(1))
        );
        // Whole space: −∞.
        assert_eq!(
            scalarization(&HPolyhedron::full_space(2), &d, &[rat_int(0), rat_int(0)]).unwrap(),
            ExtReal::MinusInf
        );
        // Quadrant unreachable when x₁ < 0.
        let quadrant = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(-1), rat_int(0)], vec![rat_int(0), rat_int(-1)]],
            vec![RowKind::Le, RowKind::Le],
            vec![rat_int(0), rat_int(0)],
        )
        .unwrap();
        assert_eq!(
            scalarization(&quadrant, &d, &[rat_int(-1), rat_int(0)]).unwrap(),
            ExtReal::PlusInf
        );
        // Zero direction refused.
        assert!(scalarization(&wedge, &[rat_int(0), rat_int(0)], &[rat_int(0), rat_int(0)]).is_err());
        // Translation identity φ(x + αd) = φ(x) − α on a finite case.
        let x = [rat_int(1), rat_int(0)];
        let alpha = rat(5, 2);
        let lhs = scalarization(&wedge, &d, &vadd(&x, &vscale(&alpha, &d))).unwrap();
        match (lhs, scalarization(&wedge, &d, &x).unwrap()) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => assert_eq!(a, b - alpha),
            _ => panic!("expected finite values"),
        }
    }

    #[test]
    fn domain_and_epigraph_of_the_gauge() {
        let f = gauge_fn(&simplex_segment()).unwrap();
        let dom = f.domain().unwrap();
        // dom ρ_F = R²₊.
        assert!(dom.contains(&[rat_int(5), rat_int(0)]));
        assert!(!dom.contains(&[rat_int(-1), rat_int(5)]));
        let epi = f.epigraph_map().unwrap();
        // epi ρ_F = {x ≥ 0, s ≥ x₁ + x₂}.
        let expect = HPolyhedron::from_parts(
            3,
            vec![
                vec![rat_int(-1), rat_int(0), rat_int(0)],
                vec![rat_int(0), rat_int(-1), rat_int(0)],
                vec![rat_int(1), rat_int(1), rat_int(-1)],
            ],
            vec![RowKind::Le; 3],
            vec![rat_int(0), rat_int(0), rat_int(0)],
        )
        .unwrap();
        assert!(epi.graph().set_equal(&expect).unwrap());
        // Graph membership helper agrees with evaluation.
        assert!(epi
            .graph_contains(&[rat_int(1), rat_int(1)], &[rat_int(2)])
            .unwrap());
        assert!(!epi
            .graph_contains(&[rat_int(1), rat_int(1)], &[rat(3, 2)])
            .unwrap());
    }

    #[test]
    fn absolute_value_epigraph() {
        // ψ(x) = |x| as distance to the origin in R¹.
        let origin = HPolyhedron::single_point(&[rat_int(0)]);
        let f = distance_fn(&origin, Norm::LInf).unwrap();
        assert_eq!(
            f.evaluate(&[rat_int(-3)]).unwrap(),
            ExtReal::Finite(rat_int(3))
        );
        let epi = f.epigraph_map().unwrap();
        let expect = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(-1)]],
            vec![RowKind::Le, RowKind::Le],
            vec![rat_int(0), rat_int(0)],
        )
        .unwrap();
        assert!(epi.graph().set_equal(&expect).unwrap());
    }

    #[test]
    fn ext_real_ordering_and_display() {
        assert!(ExtReal::MinusInf < ExtReal::Finite(rat_int(-1000)));
        assert!(ExtReal::Finite(rat_int(1000)) < ExtReal::PlusInf);
        assert_eq!(ExtReal::Finite(rat(1, 2)).to_string(), "1/2");
        assert_eq!(ExtReal::PlusInf.to_string(), "+inf");
        assert_eq!(ExtReal::MinusInf.to_string(), "-inf");
    }
}
