//! Exact Fourier–Motzkin projection.
//!
//! Eliminating a variable uses an equality row by substitution when one is
//! available (cheap and blowup-free) and otherwise combines every
//! positive/negative inequality pair. The intermediate system is
//! re-canonicalized after each elimination — LP-certified redundancy removal
//! is what keeps the classical FM blowup harmless at this crate's scale.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::RowKind;
use crate::poly::HPolyhedron;
use crate::rat::{Mat, Rat};

/// Eliminate coordinate `k` (column stays, zeroed) from the row system.
fn eliminate(p: &HPolyhedron, k: usize) -> Result<HPolyhedron> {
    let dim = p.dim();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();

    // Substitution via the first equality row carrying the variable.
    if let Some(e) = (0..p.row_count())
        .find(|&i| p.kinds()[i] == RowKind::Eq && !p.rows()[i][k].is_zero())
    {
        let erow = &p.rows()[e];
        let eb = &p.rhs()[e];
        for i in 0..p.row_count() {
            if i == e {
                continue;
            }
            let coef = &p.rows()[i][k];
            if coef.is_zero() {
                rows.push(p.rows()[i].clone());
                kinds.push(p.kinds()[i]);
                rhs.push(p.rhs()[i].clone());
            } else {
                let f = coef / &erow[k];
                let reduced: Vec<Rat> = p.rows()[i]
                    .iter()
                    .zip(erow)
                    .map(|(a, eaj)| a - &f * eaj)
                    .collect();
                rows.push(reduced);
                kinds.push(p.kinds()[i]);
                rhs.push(&p.rhs()[i] - &f * eb);
            }
        }
        return HPolyhedron::from_parts(dim, rows, kinds, rhs);
    }

    // Pure inequality elimination: keep zero-coefficient rows, combine
    // positive/negative pairs.
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in 0..p.row_count() {
        let coef = &p.rows()[i][k];
        if coef.is_zero() {
            rows.push(p.rows()[i].clone());
            kinds.push(p.kinds()[i]);
            rhs.push(p.rhs()[i].clone());
        } else if coef.is_positive() {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    for &ip in &pos {
        for &in_ in &neg {
            let cp = &p.rows()[ip][k];
            let cn = &p.rows()[in_][k]; // negative
            // (-cn)·row_p + cp·row_n cancels coordinate k; both multipliers
            // are positive so the inequality direction is preserved.
            let mp = -cn.clone();
            let mn = cp.clone();
            let combo: Vec<Rat> = p.rows()[ip]
                .iter()
                .zip(&p.rows()[in_])
                .map(|(a, b)| &mp * a + &mn * b)
                .collect();
            rows.push(combo);
            kinds.push(RowKind::Le);
            rhs.push(&mp * &p.rhs()[ip] + &mn * &p.rhs()[in_]);
        }
    }
    HPolyhedron::from_parts(dim, rows, kinds, rhs)
}

/// Exact projection of `p` onto the coordinates **not** listed in
/// `eliminate_coords`; the surviving coordinates keep their relative order.
pub fn project_out(p: &HPolyhedron, eliminate_coords: &[usize]) -> Result<HPolyhedron> {
    let dim = p.dim();
    let mut elim: Vec<usize> = eliminate_coords.to_vec();
    elim.sort_unstable();
    elim.dedup();
    if elim.len() != eliminate_coords.len() {
        return Err(Error::structure("project_out: duplicate coordinates"));
    }
    if elim.iter().any(|&c| c >= dim) {
        return Err(Error::structure("project_out: coordinate out of range"));
    }

    let mut cur = p.canonicalized()?;
    for &k in &elim {
        cur = eliminate(&cur, k)?.canonicalized()?;
    }

    // Strip the eliminated columns (all zero now).
    let keep: Vec<usize> = (0..dim).filter(|c| !elim.contains(c)).collect();
    let rows: Vec<Vec<Rat>> = cur
        .rows()
        .iter()
        .map(|r| keep.iter().map(|&c| r[c].clone()).collect())
        .collect();
    HPolyhedron::from_parts(keep.len(), rows, cur.kinds().to_vec(), cur.rhs().to_vec())?
        .canonicalized()
}

/// Exact affine image `{M x + c : x in p}` computed by lifting to the graph
/// `{(y, x) : y = Mx + c, x in p}` and projecting out `x`.
pub fn affine_image(p: &HPolyhedron, m: &Mat, c: &[Rat]) -> Result<HPolyhedron> {
    if m.ncols() != p.dim() || m.nrows() != c.len() {
        return Err(Error::structure("affine_image: shape mismatch"));
    }
    let r = m.nrows();
    let n = p.dim();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    // y_i - (Mx)_i = c_i
    for i in 0..r {
        let mut row = vec![Rat::zero(); r + n];
        row[i] = Rat::from_integer(1.into());
        for j in 0..n {
            row[r + j] = -m.at(i, j).clone();
        }
        rows.push(row);
        kinds.push(RowKind::Eq);
        rhs.push(c[i].clone());
    }
    // x in p
    for ((a, k), b) in p.rows().iter().zip(p.kinds()).zip(p.rhs()) {
        let mut row = vec![Rat::zero(); r + n];
        row[r..].clone_from_slice(a);
        rows.push(row);
        kinds.push(*k);
        rhs.push(b.clone());
    }
    let lifted = HPolyhedron::from_parts(r + n, rows, kinds, rhs)?;
    let elim: Vec<usize> = (r..r + n).collect();
    project_out(&lifted, &elim)
}

/// Membership in the projection, decided independently of the FM result by
/// lifting: is there a point of `p` whose kept coordinates equal `x`?
pub fn lifted_membership(p: &HPolyhedron, eliminate_coords: &[usize], x: &[Rat]) -> Result<bool> {
    let keep: Vec<usize> = (0..p.dim()).filter(|c| !eliminate_coords.contains(c)).collect();
    if x.len() != keep.len() {
        return Err(Error::structure("lifted_membership: dimension mismatch"));
    }
    let mut q = p.clone();
    for (xi, &c) in x.iter().zip(&keep) {
        let mut row = vec![Rat::zero(); p.dim()];
        row[c] = Rat::from_integer(1.into());
        q = q.intersect(&HPolyhedron::from_parts(
            p.dim(),
            vec![row],
            vec![RowKind::Eq],
            vec![xi.clone()],
        )?)?;
    }
    Ok(!q.is_empty()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn shadow_of_a_wedge() {
        // {(x, z) : z >= x, z <= 1} projected onto x gives {x <= 1}.
        let p = HPolyhedron::from_parts(
            2,
            vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(0), rat_int(1)]],
            vec![RowKind::Le, RowKind::Le],
            vec![rat_int(0), rat_int(1)],
        )
        .unwrap();
        let q = project_out(&p, &[1]).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.contains(&[rat_int(1)]));
        assert!(q.contains(&[rat_int(-100)]));
        assert!(!q.contains(&[rat(9, 8)]));
    }

    #[test]
    fn equality_substitution_path() {
        // {(x, y, z) : x + y + z = 3, 0 <= z <= 1, y = z} projected onto x
        // is the segment [1, 3] (x = 3 - 2z, z in [0,1]).
        let p = HPolyhedron::from_parts(
            3,
            vec![
                vec![rat_int(1), rat_int(1), rat_int(1)],
                vec![rat_int(0), rat_int(0), rat_int(1)],
                vec![rat_int(0), rat_int(0), rat_int(-1)],
                vec![rat_int(0), rat_int(1), rat_int(-1)],
            ],
            vec![RowKind::Eq, RowKind::Le, RowKind::Le, RowKind::Eq],
            vec![rat_int(3), rat_int(1), rat_int(0), rat_int(0)],
        )
        .unwrap();
        let q = project_out(&p, &[1, 2]).unwrap();
        for (pt, inside) in [
            (rat_int(1), true),
            (rat_int(3), true),
            (rat_int(2), true),
            (rat(1, 2), false),
            (rat(7, 2), false),
        ] {
            assert_eq!(q.contains(std::slice::from_ref(&pt)), inside, "point {pt}");
        }
    }

    #[test]
    fn projection_of_empty_is_empty() {
        let e = HPolyhedron::empty(3);
        let q = project_out(&e, &[0, 2]).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(q.is_empty().unwrap());
    }

    #[test]
    fn projection_matches_lifted_membership() {
        // Random-ish fixed wedge in R^3, project out the middle coordinate.
        let p = HPolyhedron::from_parts(
            3,
            vec![
                vec![rat_int(1), rat_int(2), rat_int(-1)],
                vec![rat_int(-1), rat_int(1), rat_int(1)],
                vec![rat_int(0), rat_int(-1), rat_int(0)],
            ],
            vec![RowKind::Le; 3],
            vec![rat_int(2), rat_int(1), rat_int(0)],
        )
        .unwrap();
        let q = project_out(&p, &[1]).unwrap();
        for x0 in -3..=3 {
            for x2 in -3..=3 {
                let pt = vec![rat_int(x0), rat_int(x2)];
                assert_eq!(
                    q.contains(&pt),
                    lifted_membership(&p, &[1], &pt).unwrap(),
                    "mismatch at ({x0}, {x2})"
                );
            }
        }
    }

    #[test]
    fn affine_image_of_square_under_projection_matrix() {
        // Image of the unit square under (x, y) -> x + y is [0, 2].
        let square = HPolyhedron::from_parts(
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
        .unwrap();
        let m = Mat::from_rows(vec![vec![rat_int(1), rat_int(1)]]).unwrap();
        let img = affine_image(&square, &m, &[rat_int(0)]).unwrap();
        assert!(img.contains(&[rat_int(0)]));
        assert!(img.contains(&[rat_int(2)]));
        assert!(!img.contains(&[rat(17, 8)]));
        assert!(!img.contains(&[rat(-1, 8)]));
    }
}
