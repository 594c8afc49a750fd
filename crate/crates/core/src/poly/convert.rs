//! Conversions between halfspace and generator representations.
//!
//! `vrep_to_hrep` lifts `conv(V) + cone(R)` to multiplier space and projects
//! the multipliers out with Fourier–Motzkin, so both conversion directions
//! share one exact kernel. `hrep_to_vrep` splits off the lineality space,
//! enumerates basic feasible points of the pointed section as vertices, and
//! enumerates rank-(n-1) tight sets of the recession cone as extreme rays.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::RowKind;
use crate::poly::fm::project_out;
use crate::poly::{HPolyhedron, VPolytope};
use crate::rat::{dot, nullspace, solve_unique, vneg, vzero, Rat};

/// Cap on inequality rows for the subset enumerations in
/// [`hrep_to_vrep`]; above it the conversion refuses with a resource error
/// instead of silently exploding.
pub const VERTEX_ENUM_ROW_CAP: usize = 20;

/// Exact H-form of a generator representation.
pub fn vrep_to_hrep(v: &VPolytope) -> Result<HPolyhedron> {
    let dim = v.dim();
    if v.is_empty() {
        return Ok(HPolyhedron::empty(dim));
    }
    let nv = v.vertices().len();
    let nr = v.rays().len();
    let total = dim + nv + nr;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    // x - Σ λ_i v_i - Σ μ_j r_j = 0, coordinatewise.
    for c in 0..dim {
        let mut row = vzero(total);
        row[c] = Rat::one();
        for (i, vert) in v.vertices().iter().enumerate() {
            row[dim + i] = -vert[c].clone();
        }
        for (j, ray) in v.rays().iter().enumerate() {
            row[dim + nv + j] = -ray[c].clone();
        }
        rows.push(row);
        kinds.push(RowKind::Eq);
        rhs.push(Rat::zero());
    }
    // Σ λ_i = 1.
    let mut ones = vzero(total);
    for i in 0..nv {
        ones[dim + i] = Rat::one();
    }
    rows.push(ones);
    kinds.push(RowKind::Eq);
    rhs.push(Rat::one());
    // λ, μ >= 0.
    for j in 0..nv + nr {
        let mut row = vzero(total);
        row[dim + j] = -Rat::one();
        rows.push(row);
        kinds.push(RowKind::Le);
        rhs.push(Rat::zero());
    }
    let lifted = HPolyhedron::from_parts(total, rows, kinds, rhs)?;
    let elim: Vec<usize> = (dim..total).collect();
    project_out(&lifted, &elim)
}

/// Exact generator form of an H-polyhedron.
///
/// Errors with [`Error::EmptyInput`] on the empty set (callers that want to
/// treat emptiness as data should test [`HPolyhedron::is_empty`] first) and
/// with [`Error::Resource`] above [`VERTEX_ENUM_ROW_CAP`] inequality rows.
pub fn hrep_to_vrep(p: &HPolyhedron) -> Result<VPolytope> {
    let p = p.canonicalized()?;
    let dim = p.dim();
    if p.is_empty()? {
        return Err(Error::EmptyInput("hrep_to_vrep on the empty set".into()));
    }
    let ineq: Vec<usize> = (0..p.row_count()).filter(|&i| p.kinds()[i] == RowKind::Le).collect();
    if ineq.len() > VERTEX_ENUM_ROW_CAP {
        return Err(Error::Resource(format!(
            "hrep_to_vrep: {} inequality rows exceeds cap {}",
            ineq.len(),
            VERTEX_ENUM_ROW_CAP
        )));
    }
    // Lineality space: directions annihilated by every row normal. With
    // no rows at all the whole space is lineality.
    let lin: Vec<Vec<Rat>> = if p.row_count() == 0 {
        (0..dim)
            .map(|i| {
                let mut e = vzero(dim);
                e[i] = Rat::one();
                e
            })
            .collect()
    } else {
        nullspace(p.rows())
    };

    // Pointed section: pin the lineality space with equality rows.
    let mut sec_rows = p.rows().to_vec();
    let mut sec_kinds = p.kinds().to_vec();
    let mut sec_rhs = p.rhs().to_vec();
    for l in &lin {
        sec_rows.push(l.clone());
        sec_kinds.push(RowKind::Eq);
        sec_rhs.push(Rat::zero());
    }
    let section = HPolyhedron::from_parts(dim, sec_rows, sec_kinds, sec_rhs)?;
    let sec_eq: Vec<usize> = (0..section.row_count())
        .filter(|&i| section.kinds()[i] == RowKind::Eq)
        .collect();

    // Vertices: feasible points with a rank-`dim` tight system.
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let eq_rows: Vec<Vec<Rat>> = sec_eq.iter().map(|&i| section.rows()[i].clone()).collect();
    let eq_rhs: Vec<Rat> = sec_eq.iter().map(|&i| section.rhs()[i].clone()).collect();
    for subset in subsets_up_to(&ineq, dim) {
        let mut sys = eq_rows.clone();
        let mut sys_rhs = eq_rhs.clone();
        for &i in &subset {
            sys.push(p.rows()[i].clone());
            sys_rhs.push(p.rhs()[i].clone());
        }
        if let Some(x) = solve_unique(&sys, &sys_rhs)? {
            if section.contains(&x) {
                vertices.push(x);
            }
        }
    }
    vertices.sort();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(Error::Internal(
            "pointed nonempty section produced no vertex".into(),
        ));
    }

    // Extreme rays of the section's recession cone: one-dimensional
    // nullspaces of rank-(dim-1) tight systems, kept if feasible.
    let mut rays: Vec<Vec<Rat>> = Vec::new();
    let hom_eq: Vec<Vec<Rat>> = sec_eq.iter().map(|&i| section.rows()[i].clone()).collect();
    let feasible_dir = |d: &[Rat]| -> bool {
        ineq.iter().all(|&i| !dot(&p.rows()[i], d).is_positive())
    };
    if dim >= 1 {
        for subset in subsets_up_to(&ineq, dim.saturating_sub(1)) {
            let mut sys = hom_eq.clone();
            for &i in &subset {
                sys.push(p.rows()[i].clone());
            }
            if sys.is_empty() {
                // No constraints at all: only possible when dim <= 1 after
                // the cap; handled by the nullspace call below anyway.
                sys.push(vzero(dim));
            }
            let ns = nullspace(&sys);
            if ns.len() == 1 {
                let g = &ns[0];
                if feasible_dir(g) {
                    rays.push(g.clone());
                } else if feasible_dir(&vneg(g)) {
                    rays.push(vneg(g));
                }
            }
        }
    }
    // Lineality contributes both directions of each basis vector.
    for l in &lin {
        rays.push(l.clone());
        rays.push(vneg(l));
    }

    VPolytope::new(dim, vertices, rays)
}

/// All subsets of `items` of size `0..=max_size`, in deterministic order
/// (by size, then lexicographically by the chosen indices).
pub(crate) fn subsets_up_to(items: &[usize], max_size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_size.min(items.len()) {
        let mut next = Vec::new();
        for base in &frontier {
            let start = base.last().map_or(0, |&b| {
                items.iter().position(|&x| x == b).unwrap() + 1
            });
            for (pos, &item) in items.iter().enumerate().skip(start) {
                let _ = pos;
                let mut s = base.clone();
                s.push(item);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn square_round_trip() {
        let square = VPolytope::new(
            2,
            vec![
                vec![rat_int(0), rat_int(0)],
                vec![rat_int(1), rat_int(0)],
                vec![rat_int(0), rat_int(1)],
                vec![rat_int(1), rat_int(1)],
            ],
            vec![],
        )
        .unwrap();
        let h = vrep_to_hrep(&square).unwrap();
        // Membership sampling across a small lattice, against the direct
        // convex-combination test (independent LP path).
        for x in -2..=3 {
            for y in -2..=3 {
                let pt = vec![rat(x, 2), rat(y, 2)];
                assert_eq!(
                    h.contains(&pt),
                    square.contains(&pt).unwrap(),
                    "mismatch at ({x}/2, {y}/2)"
                );
            }
        }
        let back = hrep_to_vrep(&h).unwrap();
        assert_eq!(back.vertices().len(), 4);
        assert!(back.rays().is_empty());
        for v in square.vertices() {
            assert!(back.vertices().contains(v));
        }
    }

    #[test]
    fn unbounded_wedge_has_rays() {
        // {(x, y) : y >= |x|} = cone over two rays with apex 0.
        let p = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(-1)]],
            vec![RowKind::Le, RowKind::Le],
            vec![rat_int(0), rat_int(0)],
        )
        .unwrap();
        let v = hrep_to_vrep(&p).unwrap();
        assert_eq!(v.vertices(), &[vzero(2)]);
        let mut rays = v.rays().to_vec();
        rays.sort();
        assert_eq!(
            rays,
            vec![vec![rat_int(-1), rat_int(1)], vec![rat_int(1), rat_int(1)]]
        );
    }

    #[test]
    fn line_has_lineality_rays_and_a_base_point() {
        // The x-axis in R^2: no vertices in the classical sense, so the
        // generator form is one base point plus both lineality directions.
        let p = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(0), rat_int(1)]],
            vec![RowKind::Eq],
            vec![rat_int(0)],
        )
        .unwrap();
        let v = hrep_to_vrep(&p).unwrap();
        assert_eq!(v.vertices(), &[vzero(2)]);
        let mut rays = v.rays().to_vec();
        rays.sort();
        assert_eq!(
            rays,
            vec![vec![rat_int(-1), rat_int(0)], vec![rat_int(1), rat_int(0)]]
        );
        // Round trip back to H-form is the same set.
        let h2 = vrep_to_hrep(&v).unwrap();
        assert!(h2.set_equal(&p).unwrap());
    }

    #[test]
    fn empty_input_is_a_distinct_error() {
        let e = HPolyhedron::empty(2);
        match hrep_to_vrep(&e) {
            Err(Error::EmptyInput(_)) => {}
            other => panic!("expected EmptyInput, got {other:?}"),
        }
        // And the V-side empty maps to the canonical empty H-form.
        let h = vrep_to_hrep(&VPolytope::empty(2)).unwrap();
        assert!(h.is_empty().unwrap());
    }

    #[test]
    fn segment_with_ray_round_trip() {
        let v = VPolytope::new(
            2,
            vec![vec![rat_int(0), rat_int(0)], vec![rat_int(0), rat_int(1)]],
            vec![vec![rat_int(1), rat_int(0)]],
        )
        .unwrap();
        let h = vrep_to_hrep(&v).unwrap();
        let v2 = hrep_to_vrep(&h).unwrap();
        let h2 = vrep_to_hrep(&v2).unwrap();
        assert!(h.set_equal(&h2).unwrap());
        assert!(h.contains(&[rat_int(5), rat(1, 2)]));
        assert!(!h.contains(&[rat_int(-1), rat(1, 2)]));
    }
}
