//! Exact Euclidean metric projection onto a polyhedron.
//!
//! The projection of `x` onto a nonempty polyhedron is the unique nearest
//! point, and it is the projection of `x` onto the affine hull of its own
//! active rows. Enumerating affine subspaces spanned by at most `dim`
//! inequality rows (always joined with every equality row), projecting
//! onto each by a Lagrange solve, and keeping the nearest feasible
//! candidate therefore finds it exactly — in rational arithmetic, since
//! the optimality conditions are linear and the squared distance rational.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lp::RowKind;
use crate::poly::convert::subsets_up_to;
use crate::poly::HPolyhedron;
use crate::rat::{dot, independent_row_indices, norm_l2_squared, solve_unique, vsub, Rat};

/// Result of a metric projection: the nearest point and the squared
/// Euclidean distance to it (the distance itself is generally irrational;
/// its square is exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub point: Vec<Rat>,
    pub distance_squared: Rat,
}

/// Project `x` onto `p` in the Euclidean metric. Errors on the empty set.
pub fn metric_projection(p: &HPolyhedron, x: &[Rat]) -> Result<Projection> {
    if x.len() != p.dim() {
        return Err(Error::structure("metric_projection: dimension mismatch"));
    }
    let p = p.canonicalized()?;
    if p.is_empty()? {
        return Err(Error::EmptyInput("projection onto the empty set".into()));
    }
    if p.contains(x) {
        return Ok(Projection {
            point: x.to_vec(),
            distance_squared: Rat::zero(),
        });
    }
    let dim = p.dim();
    let eq_rows: Vec<usize> = (0..p.row_count())
        .filter(|&i| p.kinds()[i] == RowKind::Eq)
        .collect();
    let ineq_rows: Vec<usize> = (0..p.row_count())
        .filter(|&i| p.kinds()[i] == RowKind::Le)
        .collect();
    let mut best: Option<Projection> = None;
    for subset in subsets_up_to(&ineq_rows, dim) {
        let tight: Vec<usize> = eq_rows.iter().chain(subset.iter()).copied().collect();
        let Some(candidate) = project_onto_affine(&p, &tight, x)? else {
            continue;
        };
        if !p.contains(&candidate) {
            continue;
        }
        let d2 = norm_l2_squared(&vsub(x, &candidate));
        let better = match &best {
            None => true,
            Some(b) => d2 < b.distance_squared,
        };
        if better {
            best = Some(Projection {
                point: candidate,
                distance_squared: d2,
            });
        }
    }
    let best = best.ok_or_else(|| {
        Error::Internal("no feasible projection candidate on a nonempty set".into())
    })?;
    debug_assert!(projection_is_optimal(&p, x, &best.point));
    Ok(best)
}

/// Orthogonal projection of `x` onto the affine subspace where the given
/// rows hold with equality: solve `(M M^T) ν = M x - d` over an
/// independent subset `M` of the rows, then `y = x - M^T ν`. Returns
/// `None` when the tight system is inconsistent.
fn project_onto_affine(
    p: &HPolyhedron,
    tight: &[usize],
    x: &[Rat],
) -> Result<Option<Vec<Rat>>> {
    let dim = p.dim();
    if tight.is_empty() {
        return Ok(Some(x.to_vec()));
    }
    let all_rows: Vec<Vec<Rat>> = tight.iter().map(|&i| p.rows()[i].clone()).collect();
    let keep = independent_row_indices(&all_rows);
    let m_rows: Vec<Vec<Rat>> = keep.iter().map(|&k| all_rows[k].clone()).collect();
    let d: Vec<Rat> = keep.iter().map(|&k| p.rhs()[tight[k]].clone()).collect();
    // Consistency of the dropped (dependent) rows is checked after the
    // solve by evaluating the candidate against every tight row.
    let k = m_rows.len();
    let gram: Vec<Vec<Rat>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&m_rows[i], &m_rows[j])).collect())
        .collect();
    let rhs: Vec<Rat> = (0..k).map(|i| dot(&m_rows[i], x) - d[i].clone()).collect();
    let Some(nu) = solve_unique(&gram, &rhs)? else {
        // The Gram matrix of independent rows is invertible; `None` is
        // unreachable here, but fall through safely.
        return Ok(None);
    };
    let mut y = x.to_vec();
    for i in 0..k {
        for c in 0..dim {
            y[c] -= nu[i].clone() * m_rows[i][c].clone();
        }
    }
    for &row_idx in tight {
        if dot(&p.rows()[row_idx], &y) != p.rhs()[row_idx] {
            return Ok(None);
        }
    }
    Ok(Some(y))
}

/// Optimality check used as a debug assertion: `x - y` must lie in the
/// normal cone of the set at `y`.
fn projection_is_optimal(p: &HPolyhedron, x: &[Rat], y: &[Rat]) -> bool {
    match crate::poly::cones::normal_cone_at(p, y) {
        Ok(cone) => cone.contains(&vsub(x, y)),
        Err(_) => false,
    }
}

/// Squared Euclidean distance from `x` to `p` (zero inside). Errors on the
/// empty set.
pub fn distance_squared(p: &HPolyhedron, x: &[Rat]) -> Result<Rat> {
    Ok(metric_projection(p, x)?.distance_squared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn unit_square() -> HPolyhedron {
        HPolyhedron::from_parts(
            2,
            vec![
                vec![rat_int(1), rat_int(0)],
                vec![rat_int(-1), rat_int(0)],
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(0), rat_int(-1)],
            ],
            vec![RowKind::Le; 4],
            vec![rat_int(1), rat_int(0), rat_int(1), rat_int(0)],
        )
        .unwrap()
    }

    #[test]
    fn projection_onto_square_from_all_sides() {
        let sq = unit_square();
        // Inside: fixed point.
        let inside = metric_projection(&sq, &[rat(1, 2), rat(1, 3)]).unwrap();
        assert_eq!(inside.point, vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(inside.distance_squared, Rat::zero());
        // Past an edge: foot of the perpendicular.
        let edge = metric_projection(&sq, &[rat(1, 2), rat_int(3)]).unwrap();
        assert_eq!(edge.point, vec![rat(1, 2), rat_int(1)]);
        assert_eq!(edge.distance_squared, rat_int(4));
        // Past a corner: the corner.
        let corner = metric_projection(&sq, &[rat_int(2), rat_int(2)]).unwrap();
        assert_eq!(corner.point, vec![rat_int(1), rat_int(1)]);
        assert_eq!(corner.distance_squared, rat_int(2));
    }

    #[test]
    fn projection_onto_halfplane_is_the_closed_formula() {
        // {x : x1 + x2 <= 0}; project (1, 1) -> (0, 0), d^2 = 2.
        let h = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(1)]],
            vec![RowKind::Le],
            vec![rat_int(0)],
        )
        .unwrap();
        let pr = metric_projection(&h, &[rat_int(1), rat_int(1)]).unwrap();
        assert_eq!(pr.point, vec![rat_int(0), rat_int(0)]);
        assert_eq!(pr.distance_squared, rat_int(2));
    }

    #[test]
    fn projection_onto_affine_line() {
        // {x : x1 + x2 = 1}; project the origin -> (1/2, 1/2).
        let line = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(1)]],
            vec![RowKind::Eq],
            vec![rat_int(1)],
        )
        .unwrap();
        let pr = metric_projection(&line, &[rat_int(0), rat_int(0)]).unwrap();
        assert_eq!(pr.point, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(pr.distance_squared, rat(1, 2));
    }

    #[test]
    fn projection_is_nonexpansive_on_samples() {
        let sq = unit_square();
        let pts = [
            vec![rat_int(3), rat_int(0)],
            vec![rat_int(-2), rat(1, 2)],
            vec![rat(5, 2), rat(7, 2)],
            vec![rat_int(0), rat_int(-4)],
        ];
        for a in &pts {
            for b in &pts {
                let pa = metric_projection(&sq, a).unwrap().point;
                let pb = metric_projection(&sq, b).unwrap().point;
                assert!(norm_l2_squared(&vsub(&pa, &pb)) <= norm_l2_squared(&vsub(a, b)));
            }
        }
    }

    #[test]
    fn empty_set_is_an_error() {
        assert!(metric_projection(&HPolyhedron::empty(2), &[rat_int(0), rat_int(0)]).is_err());
    }
}
