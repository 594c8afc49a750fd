//! Exact linear programs with self-certifying outcomes.
//!
//! A [`LinearProgram`] is `min/max c·x` over rows `aᵢ·x {<=,=} bᵢ` with
//! per-variable bounds (free or nonnegative). Every solve returns a
//! certificate that can be replayed in exact arithmetic:
//!
//! * optimal: primal point `x` and dual vector `y` with `c·x = b·y`;
//! * infeasible: a Farkas vector;
//! * unbounded: a feasible point plus an improving ray.
//!
//! ## Dual sign convention
//!
//! The dual vector `y` is normalized so that strong duality reads literally
//! `c·x* = b·y*` against the rows as stated. For a `Min` program this forces
//! `yᵢ <= 0` on `<=` rows (and `yᵢ >= 0` for `Max`); equality rows are
//! unsigned. Reduced costs satisfy `c − Aᵀy >= 0` on nonnegative variables
//! (`<= 0` for `Max`) and vanish on free variables.
//!
//! Farkas certificates for an infeasible system satisfy `y_i >= 0` on `<=`
//! rows, `yᵀA = 0` on free variables (`yᵀA >= 0` on nonnegative ones), and
//! `y·b < 0`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::HPolyhedron;
use crate::rat::{dot, vneg, Rat};
use crate::simplex::{solve_standard, KernelOutcome, StandardForm};

/// Row comparison kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// `a·x <= b`
    Le,
    /// `a·x = b`
    Eq,
}

/// Optimization sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// Minimize the objective.
    Min,
    /// Maximize the objective.
    Max,
}

/// Per-variable bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    /// Unrestricted in sign.
    Free,
    /// `x_j >= 0`.
    NonNeg,
}

/// An exact linear program.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Optimization sense.
    pub sense: Sense,
    /// Objective coefficients `c`.
    pub objective: Vec<Rat>,
    /// Constraint rows `A`.
    pub rows: Vec<Vec<Rat>>,
    /// Row kinds, parallel to `rows`.
    pub kinds: Vec<RowKind>,
    /// Right-hand sides `b`, parallel to `rows`.
    pub rhs: Vec<Rat>,
    /// Variable bounds, parallel to `objective`.
    pub bounds: Vec<VarBound>,
}

/// Outcome of an exact solve, with certificates.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// Optimal solution with dual certificate (`c·x = b·y` exactly).
    Optimal {
        /// Optimal primal point.
        x: Vec<Rat>,
        /// Dual vector in the documented sign convention.
        y: Vec<Rat>,
        /// Optimal value.
        value: Rat,
    },
    /// No feasible point exists; `farkas` certifies it.
    Infeasible {
        /// Farkas vector over the rows.
        farkas: Vec<Rat>,
    },
    /// Feasible but unbounded in the optimization direction.
    Unbounded {
        /// A feasible point.
        x: Vec<Rat>,
        /// Improving ray (`c·ray < 0` for `Min`, `> 0` for `Max`).
        ray: Vec<Rat>,
    },
}

/// Feasibility query result for a row system over free variables.
#[derive(Debug, Clone)]
pub enum Feasibility {
    /// A feasible point.
    Feasible(Vec<Rat>),
    /// A Farkas certificate of infeasibility.
    Infeasible(Vec<Rat>),
}

impl LinearProgram {
    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(Error::structure("lp: bounds length != variable count"));
        }
        if self.rows.len() != self.kinds.len() || self.rows.len() != self.rhs.len() {
            return Err(Error::structure("lp: rows/kinds/rhs length mismatch"));
        }
        for row in &self.rows {
            if row.len() != n {
                return Err(Error::structure("lp: row width != variable count"));
            }
        }
        Ok(())
    }
}

/// Internal: column mapping from original variables into standard form.
enum VarCols {
    Single(usize),
    Split(usize, usize),
}

/// Solve an exact LP. See the module docs for certificate conventions.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let minimized = match lp.sense {
        Sense::Min => lp.objective.clone(),
        Sense::Max => vneg(&lp.objective),
    };

    // Standard-form columns: variables (split if free), then slacks.
    let nvars = lp.objective.len();
    let mut cols: Vec<VarCols> = Vec::with_capacity(nvars);
    let mut c_std: Vec<Rat> = Vec::new();
    for (j, bound) in lp.bounds.iter().enumerate() {
        match bound {
            VarBound::NonNeg => {
                cols.push(VarCols::Single(c_std.len()));
                c_std.push(minimized[j].clone());
            }
            VarBound::Free => {
                cols.push(VarCols::Split(c_std.len(), c_std.len() + 1));
                c_std.push(minimized[j].clone());
                c_std.push(-minimized[j].clone());
            }
        }
    }
    let slack_base = c_std.len();
    let n_slack = lp.kinds.iter().filter(|k| **k == RowKind::Le).count();
    c_std.extend(std::iter::repeat_n(Rat::zero(), n_slack));

    let mut a_std: Vec<Vec<Rat>> = Vec::with_capacity(lp.rows.len());
    let mut b_std: Vec<Rat> = Vec::with_capacity(lp.rows.len());
    let mut signs: Vec<Rat> = Vec::with_capacity(lp.rows.len());
    let mut slack_seen = 0usize;
    for (i, row) in lp.rows.iter().enumerate() {
        let mut std_row = vec![Rat::zero(); c_std.len()];
        for (j, aij) in row.iter().enumerate() {
            if aij.is_zero() {
                continue;
            }
            match &cols[j] {
                VarCols::Single(p) => std_row[*p] = aij.clone(),
                VarCols::Split(p, q) => {
                    std_row[*p] = aij.clone();
                    std_row[*q] = -aij.clone();
                }
            }
        }
        if lp.kinds[i] == RowKind::Le {
            std_row[slack_base + slack_seen] = Rat::from_integer(1.into());
            slack_seen += 1;
        }
        let mut rhs = lp.rhs[i].clone();
        let sign = if rhs.is_negative() {
            for v in std_row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            Rat::from_integer((-1).into())
        } else {
            Rat::from_integer(1.into())
        };
        a_std.push(std_row);
        b_std.push(rhs);
        signs.push(sign);
    }

    let sf = StandardForm { a: a_std, b: b_std, c: c_std };
    let back = |z: &[Rat]| -> Vec<Rat> {
        cols.iter()
            .map(|vc| match vc {
                VarCols::Single(p) => z[*p].clone(),
                VarCols::Split(p, q) => &z[*p] - &z[*q],
            })
            .collect()
    };

    let outcome = match solve_standard(&sf)? {
        KernelOutcome::Optimal { z, y, .. } => {
            let x = back(&z);
            // y maps back through the row scaling; for Max flip once more so
            // that c·x = b·y holds against the original objective.
            let flip = match lp.sense {
                Sense::Min => Rat::from_integer(1.into()),
                Sense::Max => Rat::from_integer((-1).into()),
            };
            let y: Vec<Rat> = y
                .iter()
                .zip(&signs)
                .map(|(yi, s)| yi * s * &flip)
                .collect();
            let value = dot(&lp.objective, &x);
            LpOutcome::Optimal { x, y, value }
        }
        KernelOutcome::Infeasible { y } => {
            let farkas: Vec<Rat> = y.iter().zip(&signs).map(|(yi, s)| -(yi * s)).collect();
            LpOutcome::Infeasible { farkas }
        }
        KernelOutcome::Unbounded { z, ray } => LpOutcome::Unbounded {
            x: back(&z),
            ray: back(&ray),
        },
    };

    debug_assert!(
        verify_outcome(lp, &outcome),
        "lp outcome failed exact verification"
    );
    Ok(outcome)
}

/// Decide feasibility of `A x {<=,=} b` over free variables, returning a
/// point or a Farkas certificate.
pub fn lp_feasible(rows: &[Vec<Rat>], kinds: &[RowKind], rhs: &[Rat]) -> Result<Feasibility> {
    let n = rows.first().map_or(0, |r| r.len());
    let lp = LinearProgram {
        sense: Sense::Min,
        objective: vec![Rat::zero(); n],
        rows: rows.to_vec(),
        kinds: kinds.to_vec(),
        rhs: rhs.to_vec(),
        bounds: vec![VarBound::Free; n],
    };
    match solve_lp(&lp)? {
        LpOutcome::Optimal { x, .. } => Ok(Feasibility::Feasible(x)),
        LpOutcome::Unbounded { x, .. } => Ok(Feasibility::Feasible(x)),
        LpOutcome::Infeasible { farkas } => Ok(Feasibility::Infeasible(farkas)),
    }
}

/// H-form of the optimal dual face `{y : y dual-feasible, b·y = value}`.
///
/// By weak duality every dual-feasible `y` has `b·y <= value` (`>=` for
/// `Max`), so pinning the dual objective to the optimal value carves out
/// exactly the set of optimal dual vectors — no tableau bookkeeping needed.
/// The face lives in the sign convention documented on this module, and the
/// dual vector returned by [`solve_lp`] is always a member.
///
/// Errors with [`Error::Precondition`] unless the program solves to
/// optimality.
pub fn optimal_dual_face(lp: &LinearProgram) -> Result<HPolyhedron> {
    lp.validate()?;
    let (value, witness) = match solve_lp(lp)? {
        LpOutcome::Optimal { value, y, .. } => (value, y),
        _ => {
            return Err(Error::precondition(
                "optimal_dual_face requires an optimal solve",
            ))
        }
    };
    let m = lp.rows.len();
    let nvars = lp.objective.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut kinds: Vec<RowKind> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let sgn = match lp.sense {
        Sense::Min => Rat::from_integer(1.into()),
        Sense::Max => Rat::from_integer((-1).into()),
    };
    // Dual feasibility per variable: (Aᵀy)_j <= c_j for nonnegative vars
    // (>= for Max, encoded by flipping), equality for free vars.
    for j in 0..nvars {
        let col: Vec<Rat> = (0..m).map(|i| &lp.rows[i][j] * &sgn).collect();
        match lp.bounds[j] {
            VarBound::NonNeg => {
                rows.push(col);
                kinds.push(RowKind::Le);
                rhs.push(&lp.objective[j] * &sgn);
            }
            VarBound::Free => {
                rows.push(col);
                kinds.push(RowKind::Eq);
                rhs.push(&lp.objective[j] * &sgn);
            }
        }
    }
    // Sign condition on duals of `<=` rows.
    for i in 0..m {
        if lp.kinds[i] == RowKind::Le {
            let mut row = vec![Rat::zero(); m];
            row[i] = sgn.clone();
            rows.push(row);
            kinds.push(RowKind::Le);
            rhs.push(Rat::zero());
        }
    }
    // Strong duality pins the dual objective.
    rows.push(lp.rhs.clone());
    kinds.push(RowKind::Eq);
    rhs.push(value);

    let face = HPolyhedron::from_parts(m, rows, kinds, rhs)?.canonicalized()?;
    debug_assert!(face.contains(&witness), "dual witness outside dual face");
    Ok(face)
}

// ---------------------------------------------------------------------------
// Exact certificate verification
// ---------------------------------------------------------------------------

/// True iff `x` satisfies every row and bound of `lp`.
pub fn verify_feasible_point(lp: &LinearProgram, x: &[Rat]) -> bool {
    if x.len() != lp.objective.len() {
        return false;
    }
    for (j, bound) in lp.bounds.iter().enumerate() {
        if *bound == VarBound::NonNeg && x[j].is_negative() {
            return false;
        }
    }
    lp.rows.iter().zip(&lp.kinds).zip(&lp.rhs).all(|((row, kind), b)| {
        let v = dot(row, x);
        match kind {
            RowKind::Le => v <= *b,
            RowKind::Eq => v == *b,
        }
    })
}

/// True iff `(x, y)` is a certified optimal pair: `x` primal feasible, `y`
/// dual feasible in the documented convention, and `c·x = b·y` exactly.
pub fn verify_optimal(lp: &LinearProgram, x: &[Rat], y: &[Rat]) -> bool {
    if !verify_feasible_point(lp, x) || y.len() != lp.rows.len() {
        return false;
    }
    let sgn_ok = lp.kinds.iter().zip(y).all(|(kind, yi)| match (lp.sense, kind) {
        (_, RowKind::Eq) => true,
        (Sense::Min, RowKind::Le) => !yi.is_positive(),
        (Sense::Max, RowKind::Le) => !yi.is_negative(),
    });
    if !sgn_ok {
        return false;
    }
    // Reduced costs: c_j - (Aᵀy)_j, nonnegative for Min (nonpositive for
    // Max) on nonnegative variables, zero on free variables.
    for j in 0..lp.objective.len() {
        let aty: Rat = (0..lp.rows.len()).map(|i| &lp.rows[i][j] * &y[i]).sum();
        let rc = &lp.objective[j] - &aty;
        let ok = match (lp.sense, lp.bounds[j]) {
            (_, VarBound::Free) => rc.is_zero(),
            (Sense::Min, VarBound::NonNeg) => !rc.is_negative(),
            (Sense::Max, VarBound::NonNeg) => !rc.is_positive(),
        };
        if !ok {
            return false;
        }
    }
    dot(&lp.objective, x) == dot(&lp.rhs, y)
}

/// True iff `farkas` certifies infeasibility of the row system of `lp`.
pub fn verify_farkas(lp: &LinearProgram, farkas: &[Rat]) -> bool {
    if farkas.len() != lp.rows.len() {
        return false;
    }
    // y_i >= 0 on `<=` rows.
    if lp
        .kinds
        .iter()
        .zip(farkas)
        .any(|(k, yi)| *k == RowKind::Le && yi.is_negative())
    {
        return false;
    }
    // yᵀA = 0 on free variables, >= 0 on nonnegative ones.
    for j in 0..lp.objective.len() {
        let v: Rat = (0..lp.rows.len()).map(|i| &lp.rows[i][j] * &farkas[i]).sum();
        let ok = match lp.bounds[j] {
            VarBound::Free => v.is_zero(),
            VarBound::NonNeg => !v.is_negative(),
        };
        if !ok {
            return false;
        }
    }
    dot(&lp.rhs, farkas).is_negative()
}

/// True iff `ray` is a feasible improving direction from the feasible `x`.
pub fn verify_ray(lp: &LinearProgram, x: &[Rat], ray: &[Rat]) -> bool {
    if !verify_feasible_point(lp, x) || ray.len() != lp.objective.len() {
        return false;
    }
    for (j, bound) in lp.bounds.iter().enumerate() {
        if *bound == VarBound::NonNeg && ray[j].is_negative() {
            return false;
        }
    }
    let dir_ok = lp.rows.iter().zip(&lp.kinds).all(|(row, kind)| {
        let v = dot(row, ray);
        match kind {
            RowKind::Le => !v.is_positive(),
            RowKind::Eq => v.is_zero(),
        }
    });
    if !dir_ok {
        return false;
    }
    let slope = dot(&lp.objective, ray);
    match lp.sense {
        Sense::Min => slope.is_negative(),
        Sense::Max => slope.is_positive(),
    }
}

/// Replay any outcome's certificate in exact arithmetic.
pub fn verify_outcome(lp: &LinearProgram, outcome: &LpOutcome) -> bool {
    match outcome {
        LpOutcome::Optimal { x, y, value } => {
            verify_optimal(lp, x, y) && dot(&lp.objective, x) == *value
        }
        LpOutcome::Infeasible { farkas } => verify_farkas(lp, farkas),
        LpOutcome::Unbounded { x, ray } => verify_ray(lp, x, ray),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int, vzero};

    fn lp_min(
        objective: Vec<Rat>,
        rows: Vec<Vec<Rat>>,
        kinds: Vec<RowKind>,
        rhs: Vec<Rat>,
        bounds: Vec<VarBound>,
    ) -> LinearProgram {
        LinearProgram { sense: Sense::Min, objective, rows, kinds, rhs, bounds }
    }

    #[test]
    fn min_x_with_lower_bound_row() {
        // min x s.t. -x <= -1 over a free variable: optimum 1 at x = 1.
        let lp = lp_min(
            vec![rat_int(1)],
            vec![vec![rat_int(-1)]],
            vec![RowKind::Le],
            vec![rat_int(-1)],
            vec![VarBound::Free],
        );
        match solve_lp(&lp).unwrap() {
            LpOutcome::Optimal { x, y, value } => {
                assert_eq!(x, vec![rat_int(1)]);
                assert_eq!(value, rat_int(1));
                assert!(verify_optimal(&lp, &x, &y));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_vertex_two_ways() {
        // min x1 + x2 s.t. x1, x2 >= 0 and -x1 - x2 <= -1: optimum 1,
        // cross-checked against brute-force vertex enumeration of the
        // triangle's corners (independent of the simplex path).
        let lp = lp_min(
            vec![rat_int(1), rat_int(1)],
            vec![vec![rat_int(-1), rat_int(-1)]],
            vec![RowKind::Le],
            vec![rat_int(-1)],
            vec![VarBound::NonNeg, VarBound::NonNeg],
        );
        let vertices = [
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ];
        let oracle = vertices
            .iter()
            .filter(|v| verify_feasible_point(&lp, v))
            .map(|v| dot(&lp.objective, v))
            .min()
            .unwrap();
        match solve_lp(&lp).unwrap() {
            LpOutcome::Optimal { x, y, value } => {
                assert_eq!(value, oracle);
                assert!(verify_optimal(&lp, &x, &y));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_with_ray() {
        // max x s.t. x >= 0: unbounded with improving ray +1.
        let lp = LinearProgram {
            sense: Sense::Max,
            objective: vec![rat_int(1)],
            rows: vec![],
            kinds: vec![],
            rhs: vec![],
            bounds: vec![VarBound::NonNeg],
        };
        match solve_lp(&lp).unwrap() {
            LpOutcome::Unbounded { x, ray } => {
                assert!(verify_ray(&lp, &x, &ray));
                assert_eq!(ray, vec![rat_int(1)]);
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_farkas() {
        // {x <= 1, -x <= -2} is empty; certificate (1,1).
        let rows = vec![vec![rat_int(1)], vec![rat_int(-1)]];
        let kinds = vec![RowKind::Le, RowKind::Le];
        let rhs = vec![rat_int(1), rat_int(-2)];
        match lp_feasible(&rows, &kinds, &rhs).unwrap() {
            Feasibility::Infeasible(y) => {
                let lp = lp_min(vec![rat_int(0)], rows, kinds, rhs, vec![VarBound::Free]);
                assert!(verify_farkas(&lp, &y));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn equality_rows_and_mixed_bounds() {
        // min 2x + y s.t. x + y = 3, x - y <= 1, x free, y >= 0.
        // Eliminating x = 3 - y gives objective 6 - y with y >= 1, so the
        // optimum is at y as large as possible... x - y <= 1 gives
        // 3 - 2y <= 1, y >= 1; objective 6 - y decreases in y and y is
        // unbounded above (x = 3 - y stays feasible), so the LP is
        // unbounded below.
        let lp = lp_min(
            vec![rat_int(2), rat_int(1)],
            vec![
                vec![rat_int(1), rat_int(1)],
                vec![rat_int(1), rat_int(-1)],
            ],
            vec![RowKind::Eq, RowKind::Le],
            vec![rat_int(3), rat_int(1)],
            vec![VarBound::Free, VarBound::NonNeg],
        );
        match solve_lp(&lp).unwrap() {
            LpOutcome::Unbounded { x, ray } => assert!(verify_ray(&lp, &x, &ray)),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn dual_face_of_duplicated_row_is_a_segment() {
        // min x s.t. x >= 0 stated twice (rows -x <= 0, -x <= 0).
        // Dual feasibility for the free variable forces y1 + y2 = -1 with
        // y <= 0 in this crate's sign convention: a segment.
        let lp = lp_min(
            vec![rat_int(1)],
            vec![vec![rat_int(-1)], vec![rat_int(-1)]],
            vec![RowKind::Le, RowKind::Le],
            vec![rat_int(0), rat_int(0)],
            vec![VarBound::Free],
        );
        let face = optimal_dual_face(&lp).unwrap();
        // Endpoints of the segment and its midpoint are members...
        assert!(face.contains(&[rat_int(-1), rat_int(0)]));
        assert!(face.contains(&[rat_int(0), rat_int(-1)]));
        assert!(face.contains(&[rat(-1, 2), rat(-1, 2)]));
        // ... while sign-flipped or off-segment points are not.
        assert!(!face.contains(&[rat_int(1), rat_int(0)]));
        assert!(!face.contains(&[rat(-1, 2), rat(-1, 4)]));
    }

    #[test]
    fn dual_face_of_single_bound_is_a_point() {
        // min x s.t. x >= 0: unique dual y = -1 in this convention.
        let lp = lp_min(
            vec![rat_int(1)],
            vec![vec![rat_int(-1)]],
            vec![RowKind::Le],
            vec![rat_int(0)],
            vec![VarBound::Free],
        );
        let face = optimal_dual_face(&lp).unwrap();
        assert!(face.contains(&[rat_int(-1)]));
        assert!(!face.contains(&[rat_int(1)]));
        assert!(!face.contains(&[rat(-1, 2)]));
        // min 0 s.t. x <= 1: the only dual is 0.
        let lp2 = lp_min(
            vec![rat_int(0)],
            vec![vec![rat_int(1)]],
            vec![RowKind::Le],
            vec![rat_int(1)],
            vec![VarBound::Free],
        );
        let face2 = optimal_dual_face(&lp2).unwrap();
        assert!(face2.contains(&[rat_int(0)]));
        assert!(!face2.contains(&[rat(1, 8)]));
        assert!(!face2.contains(&[rat(-1, 8)]));
    }

    #[test]
    fn zero_dimensional_lp() {
        let lp = lp_min(vzero(0), vec![], vec![], vec![], vec![]);
        match solve_lp(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(0)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
