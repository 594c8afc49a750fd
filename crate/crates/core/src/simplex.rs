//! Exact two-phase primal simplex on equality standard form.
//!
//! Internal kernel behind [`crate::lp`]. Design points:
//!
//! * dense rational tableau, no floating point anywhere;
//! * Bland's least-index rule for both the entering column and ratio-test
//!   ties, so termination is unconditional (no cycling);
//! * artificial columns are kept in the tableau after phase 1 so the basis
//!   inverse — and with it exact dual vectors and Farkas certificates — can
//!   be read off the final tableau directly;
//! * rows whose artificial cannot be driven out at the end of phase 1 are
//!   dependent on the others and are dropped; their dual entries are zero.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// `min c·z  s.t.  A z = b, z >= 0` with `b >= 0` componentwise.
pub(crate) struct StandardForm {
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    pub c: Vec<Rat>,
}

/// Kernel result, all certificates in standard-form coordinates.
pub(crate) enum KernelOutcome {
    /// Optimal `z` with dual `y` satisfying `Aᵀy <= c` and `y·b = c·z`.
    Optimal { z: Vec<Rat>, y: Vec<Rat> },
    /// Infeasibility certificate `y` with `yᵀA <= 0` and `y·b > 0`.
    Infeasible { y: Vec<Rat> },
    /// Feasible `z` plus ray `r >= 0` with `A r = 0` and `c·r < 0`.
    Unbounded { z: Vec<Rat>, ray: Vec<Rat> },
}

/// Hard cap on pivots; Bland's rule terminates long before this on any
/// input this crate produces, so hitting the cap indicates a kernel bug.
const MAX_PIVOTS: usize = 200_000;

struct Tableau {
    /// Structural column count (problem variables, before artificials).
    n: usize,
    /// Total original row count (artificial column block width).
    m0: usize,
    /// Rows: `n` structural + `m0` artificial columns + rhs.
    rows: Vec<Vec<Rat>>,
    /// Basic column of each tableau row.
    basis: Vec<usize>,
    /// Original standard-form row index of each tableau row.
    origin: Vec<usize>,
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m0 = sf.a.len();
        let n = sf.c.len();
        let mut rows = Vec::with_capacity(m0);
        for i in 0..m0 {
            let mut row = Vec::with_capacity(n + m0 + 1);
            row.extend(sf.a[i].iter().cloned());
            for j in 0..m0 {
                row.push(if i == j { Rat::from_integer(1.into()) } else { Rat::zero() });
            }
            row.push(sf.b[i].clone());
            rows.push(row);
        }
        Tableau {
            n,
            m0,
            rows,
            basis: (0..m0).map(|i| n + i).collect(),
            origin: (0..m0).collect(),
        }
    }

    fn rhs(&self, r: usize) -> &Rat {
        let w = self.n + self.m0;
        &self.rows[r][w]
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.n + self.m0 + 1;
        let inv = self.rows[r][j].clone().recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for k in 0..w {
                if !pivot_row[k].is_zero() {
                    let t = &pivot_row[k] * &f;
                    row[k] -= t;
                }
            }
        }
        self.basis[r] = j;
    }

    /// Reduced cost of column `j` under `costs` (indexed over all columns).
    fn reduced_cost(&self, costs: &[Rat], j: usize) -> Rat {
        let mut rc = costs[j].clone();
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[r]];
            if !cb.is_zero() && !row[j].is_zero() {
                rc -= cb * &row[j];
            }
        }
        rc
    }

    /// Run simplex iterations with Bland's rule over columns `< col_limit`.
    /// Returns `None` at optimality, `Some(j)` when column `j` proves the
    /// objective unbounded below.
    fn run(&mut self, costs: &[Rat], col_limit: usize) -> Result<Option<usize>> {
        for _ in 0..MAX_PIVOTS {
            // Entering: least-index column with negative reduced cost.
            let mut entering = None;
            for j in 0..col_limit {
                if self.basis.contains(&j) {
                    continue;
                }
                if self.reduced_cost(costs, j).is_negative_rat() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(None);
            };
            // Leaving: min ratio; ties broken by least basic-variable index.
            let mut best: Option<(Rat, usize, usize)> = None; // (ratio, basis var, row)
            for r in 0..self.rows.len() {
                if self.rows[r][j].is_positive_rat() {
                    let ratio = self.rhs(r) / &self.rows[r][j];
                    let replace = match &best {
                        None => true,
                        Some((br, bvar, _)) => {
                            ratio < *br || (ratio == *br && self.basis[r] < *bvar)
                        }
                    };
                    if replace {
                        best = Some((ratio, self.basis[r], r));
                    }
                }
            }
            match best {
                Some((_, _, r)) => self.pivot(r, j),
                None => return Ok(Some(j)),
            }
        }
        Err(Error::Internal("simplex pivot cap exceeded".into()))
    }

    /// Dual vector `y` over all original rows: `y_i = c_B · (B⁻¹)e_i`,
    /// read from the artificial column block; dropped rows contribute zero.
    fn dual(&self, costs: &[Rat]) -> Vec<Rat> {
        let mut y = vec![Rat::zero(); self.m0];
        for (i, yi) in y.iter_mut().enumerate() {
            let col = self.n + i;
            for (r, row) in self.rows.iter().enumerate() {
                let cb = &costs[self.basis[r]];
                if !cb.is_zero() && !row[col].is_zero() {
                    *yi += cb * &row[col];
                }
            }
        }
        y
    }

    /// Current primal point in structural coordinates.
    fn primal(&self) -> Vec<Rat> {
        let mut z = vec![Rat::zero(); self.n];
        for (r, &bj) in self.basis.iter().enumerate() {
            if bj < self.n {
                z[bj] = self.rhs(r).clone();
            }
        }
        z
    }
}

// Small readability helpers: `Rat` comparisons against zero.
trait SignExt {
    fn is_negative_rat(&self) -> bool;
    fn is_positive_rat(&self) -> bool;
}
impl SignExt for Rat {
    fn is_negative_rat(&self) -> bool {
        use num_traits::Signed;
        self.is_negative()
    }
    fn is_positive_rat(&self) -> bool {
        use num_traits::Signed;
        self.is_positive()
    }
}

/// Solve the standard-form program exactly.
pub(crate) fn solve_standard(sf: &StandardForm) -> Result<KernelOutcome> {
    let m0 = sf.a.len();
    let n = sf.c.len();
    for row in &sf.a {
        if row.len() != n {
            return Err(Error::Internal("standard form: ragged rows".into()));
        }
    }
    if sf.b.len() != m0 {
        return Err(Error::Internal("standard form: rhs length".into()));
    }
    if sf.b.iter().any(SignExt::is_negative_rat) {
        return Err(Error::Internal("standard form: negative rhs".into()));
    }

    let mut t = Tableau::new(sf);
    let ncols = n + m0;

    // Phase 1: minimize the artificial sum.
    let mut costs1 = vec![Rat::zero(); ncols];
    for c in costs1.iter_mut().skip(n) {
        *c = Rat::from_integer(1.into());
    }
    if t.run(&costs1, n)?.is_some() {
        // The phase-1 objective is bounded below by zero, so an unbounded
        // direction cannot exist.
        return Err(Error::Internal("phase 1 reported unbounded".into()));
    }
    let w: Rat = t
        .basis
        .iter()
        .zip(0..t.rows.len())
        .map(|(&bj, r)| &costs1[bj] * t.rhs(r))
        .sum();
    if w.is_positive_rat() {
        return Ok(KernelOutcome::Infeasible { y: t.dual(&costs1) });
    }

    // Drive remaining artificials out of the basis; drop dependent rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            let pivot_col = (0..n).find(|&j| !t.rows[r][j].is_zero());
            match pivot_col {
                Some(j) => t.pivot(r, j),
                None => {
                    // Row is a linear combination of the others.
                    t.rows.remove(r);
                    t.basis.remove(r);
                    t.origin.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2: original objective, artificials barred from entering.
    let mut costs2 = vec![Rat::zero(); ncols];
    costs2[..n].clone_from_slice(&sf.c);
    match t.run(&costs2, n)? {
        None => {
            let z = t.primal();
            let y = t.dual(&costs2);
            Ok(KernelOutcome::Optimal { z, y })
        }
        Some(j) => {
            let mut ray = vec![Rat::zero(); n];
            ray[j] = Rat::from_integer(1.into());
            for (r, &bj) in t.basis.iter().enumerate() {
                if bj < n {
                    ray[bj] = -t.rows[r][j].clone();
                }
            }
            Ok(KernelOutcome::Unbounded { z: t.primal(), ray })
        }
    }
}
