//! Face enumeration through active-set classes.
//!
//! A nonempty face of a polyhedron is determined by the set of inequality
//! rows tight on its relative interior. For each candidate subset `S` we
//! solve a strict-margin LP: maximize `t` subject to the rows of `S` tight,
//! every other inequality row slack by at least `t`, and `t <= 1`. The
//! class is realized exactly when the optimum is positive, and the
//! optimizer is then a relative-interior witness.
//!
//! An optional `within` polyhedron restricts witnesses to a subregion
//! without contributing rows to the activity pattern — used by the
//! criteria layer to walk the faces of a graph that meet a projection set.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, RowKind, Sense, VarBound};
use crate::poly::{Face, HPolyhedron};
use crate::rat::{vzero, Rat};

/// Cap on the number of inequality rows enumerated by
/// [`active_set_classes`]; subsets grow as `2^rows`.
pub const DEFAULT_FACE_CAP: usize = 16;

/// Enumerate the active-set classes of `p` (optionally restricted to
/// witnesses inside `within`), in deterministic order: by active-set size,
/// then lexicographically.
///
/// Each returned [`Face`] carries the tight inequality-row indices (into
/// `p`'s canonical row list, equality rows excluded — they are tight
/// everywhere) and a relative-interior witness point.
pub fn active_set_classes(
    p: &HPolyhedron,
    within: Option<&HPolyhedron>,
    cap: usize,
) -> Result<Vec<Face>> {
    let p = p.canonicalized()?;
    if p.is_empty()? {
        return Ok(Vec::new());
    }
    if let Some(w) = within {
        if w.dim() != p.dim() {
            return Err(Error::structure(
                "active_set_classes: `within` dimension mismatch",
            ));
        }
    }
    let ineq: Vec<usize> = (0..p.row_count())
        .filter(|&i| p.kinds()[i] == RowKind::Le)
        .collect();
    if ineq.len() > cap {
        return Err(Error::Resource(format!(
            "face enumeration over {} inequality rows exceeds the cap of {}",
            ineq.len(),
            cap
        )));
    }
    let mut out: Vec<Face> = Vec::new();
    // Masks of row-subsets already known infeasible *as tight sets*: any
    // superset of an infeasible tight set is infeasible too.
    let mut dead_masks: Vec<u64> = Vec::new();
    let subsets = super::convert::subsets_up_to(&ineq, ineq.len());
    for active in subsets {
        let mask: u64 = active
            .iter()
            .map(|&i| 1u64 << ineq.iter().position(|&j| j == i).unwrap())
            .fold(0, |a, b| a | b);
        if dead_masks.iter().any(|&d| d | mask == mask) {
            continue;
        }
        match relint_witness(&p, within, &active)? {
            Some(witness) => out.push(Face { active, witness }),
            None => {
                // Only a *tight-set infeasibility* prunes supersets; a
                // failure of strict slackness elsewhere does not. Check
                // which one occurred.
                if !tight_set_feasible(&p, within, &active)? {
                    dead_masks.push(mask);
                }
            }
        }
    }
    Ok(out)
}

/// All nonempty faces of `p` as active-set classes (no restriction set).
pub fn enumerate_faces(p: &HPolyhedron, cap: usize) -> Result<Vec<Face>> {
    active_set_classes(p, None, cap)
}

/// A point with every inequality strictly slack when one exists,
/// otherwise any feasible point (the set may carry implicit equalities);
/// `None` exactly when `p` is empty.
pub fn relative_interior_point(p: &HPolyhedron) -> Result<Option<Vec<Rat>>> {
    let p = p.canonicalized()?;
    if p.is_empty()? {
        return Ok(None);
    }
    match relint_witness(&p, None, &[])? {
        Some(x) => Ok(Some(x)),
        None => p.any_point(),
    }
}

/// Strict-margin LP for one candidate active set. Returns a
/// relative-interior witness when the class is realized.
fn relint_witness(
    p: &HPolyhedron,
    within: Option<&HPolyhedron>,
    active: &[usize],
) -> Result<Option<Vec<Rat>>> {
    let dim = p.dim();
    // Variables: (x, t). Maximize t.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let aug = |row: &[Rat], t_coef: Rat| -> Vec<Rat> {
        let mut r = row.to_vec();
        r.push(t_coef);
        r
    };
    for i in 0..p.row_count() {
        let is_active = active.contains(&i);
        match p.kinds()[i] {
            RowKind::Eq => {
                rows.push(aug(&p.rows()[i], Rat::zero()));
                kinds.push(RowKind::Eq);
                rhs.push(p.rhs()[i].clone());
            }
            RowKind::Le => {
                if is_active {
                    rows.push(aug(&p.rows()[i], Rat::zero()));
                    kinds.push(RowKind::Eq);
                    rhs.push(p.rhs()[i].clone());
                } else {
                    rows.push(aug(&p.rows()[i], Rat::one()));
                    kinds.push(RowKind::Le);
                    rhs.push(p.rhs()[i].clone());
                }
            }
        }
    }
    if let Some(w) = within {
        for i in 0..w.row_count() {
            rows.push(aug(&w.rows()[i], Rat::zero()));
            kinds.push(w.kinds()[i]);
            rhs.push(w.rhs()[i].clone());
        }
    }
    // t <= 1 keeps the LP bounded.
    let mut cap_row = vzero(dim + 1);
    cap_row[dim] = Rat::one();
    rows.push(cap_row);
    kinds.push(RowKind::Le);
    rhs.push(Rat::one());
    let mut objective = vzero(dim + 1);
    objective[dim] = Rat::one();
    let lp = LinearProgram {
        sense: Sense::Max,
        objective,
        rows,
        kinds,
        rhs,
        bounds: vec![VarBound::Free; dim + 1],
    };
    match crate::lp::solve_lp(&lp)? {
        LpOutcome::Optimal { x, value, .. } => {
            if value.is_positive() {
                Ok(Some(x[..dim].to_vec()))
            } else {
                Ok(None)
            }
        }
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::Internal(
            "strict-margin LP unbounded despite the t <= 1 cap".into(),
        )),
    }
}

/// Is the *tight set* `active` feasible at all (margins ignored)? Used to
/// prune supersets during enumeration.
fn tight_set_feasible(
    p: &HPolyhedron,
    within: Option<&HPolyhedron>,
    active: &[usize],
) -> Result<bool> {
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for i in 0..p.row_count() {
        rows.push(p.rows()[i].clone());
        kinds.push(if active.contains(&i) {
            RowKind::Eq
        } else {
            p.kinds()[i]
        });
        rhs.push(p.rhs()[i].clone());
    }
    if let Some(w) = within {
        for i in 0..w.row_count() {
            rows.push(w.rows()[i].clone());
            kinds.push(w.kinds()[i]);
            rhs.push(w.rhs()[i].clone());
        }
    }
    Ok(matches!(
        crate::lp::lp_feasible(&rows, &kinds, &rhs)?,
        crate::lp::Feasibility::Feasible(_)
    ))
}
