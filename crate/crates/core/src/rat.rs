//! Exact rational scalars, vectors, and matrices.
//!
//! All arithmetic in this crate is exact: scalars are arbitrary-precision
//! rationals ([`Rat`]), vectors are plain `Vec<Rat>` with helper functions,
//! and [`Mat`] is a dense row-major matrix. `num_rational::BigRational`
//! already maintains the canonical-form invariant we need (fully reduced,
//! positive denominator), so we use it directly instead of re-deriving a
//! fraction type.
//!
//! The module also carries the small exact linear-algebra kernel (Gaussian
//! elimination) that the polyhedral layer leans on: unique solves, nullspace
//! bases, rank, and row-space filtering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always reduced, denominator always positive.
pub type Rat = BigRational;

/// Build a rational from an integer numerator and denominator.
///
/// # Panics
/// Panics if `den == 0`; use [`parse_rat`] for fallible construction.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Build a rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"p"` or `"p/q"` (optionally signed) into a rational.
///
/// Rejects zero denominators and malformed text with [`Error::Structure`]
/// instead of panicking, which is what the CLI layer needs.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| Error::structure(format!("bad rational numerator: {s:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| Error::structure(format!("bad rational denominator: {s:?}")))?;
    if den.is_zero() {
        return Err(Error::structure(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Format a rational as `"p"` or `"p/q"` (the canonical display form).
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Convert to `f64` (for plotting and human-oriented display only —
/// never for decisions).
pub fn rat_to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Out-of-range magnitudes only occur with adversarial inputs; clamp.
        if x.is_negative() {
            f64::MIN
        } else {
            f64::MAX
        }
    })
}

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

/// Inner product. Panics on length mismatch (callers validate dimensions at
/// the boundary; internal call sites are length-checked by construction).
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len(), "dot: length mismatch");
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `a + b`.
pub fn vadd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a - b`.
pub fn vsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `c * a` for a scalar `c`.
pub fn vscale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

/// `-a`.
pub fn vneg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

/// All-zero vector of length `n`.
pub fn vzero(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

/// True iff every entry is zero.
pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// ℓ1 norm (exact).
pub fn norm_l1(a: &[Rat]) -> Rat {
    a.iter().map(|x| x.abs()).sum()
}

/// ℓ∞ norm (exact).
pub fn norm_linf(a: &[Rat]) -> Rat {
    a.iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Squared ℓ2 norm (exact; the unsquared value is generally irrational).
pub fn norm_l2_squared(a: &[Rat]) -> Rat {
    a.iter().map(|x| x * x).sum()
}

/// Scale a nonzero rational vector to its canonical primitive integer form:
/// entries are coprime integers and the first nonzero entry of the result
/// keeps the sign of the input (no orientation flip).
///
/// Used to canonicalize rows and rays so that syntactic comparison is
/// meaningful. Returns the vector unchanged if it is zero.
pub fn primitive_integer_form(a: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    if is_zero_vec(a) {
        return a.to_vec();
    }
    // Multiply by the lcm of denominators, then divide by the gcd of numerators.
    let mut lcm = BigInt::one();
    for x in a {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = a.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for v in &ints {
        gcd = gcd.gcd(v);
    }
    ints.into_iter()
        .map(|v| BigRational::from_integer(v / &gcd))
        .collect()
}

// ---------------------------------------------------------------------------
// Matrices and Gaussian elimination
// ---------------------------------------------------------------------------

/// Dense row-major matrix of rationals with explicit shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    /// Build from a list of equal-length rows.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != cols {
                return Err(Error::structure("ragged matrix rows"));
            }
        }
        Ok(Mat {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Immutable entry access.
    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    /// Mutable entry access.
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    /// Copy of row `i`.
    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// Matrix–vector product `A x`.
    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols, "mul_vec: shape mismatch");
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], x))
            .collect()
    }

    /// Transposed product `Aᵀ y`.
    pub fn tr_mul_vec(&self, y: &[Rat]) -> Vec<Rat> {
        assert_eq!(y.len(), self.rows, "tr_mul_vec: shape mismatch");
        let mut out = vec![Rat::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.at(i, j);
                if !a.is_zero() {
                    *o += yi * a;
                }
            }
        }
        out
    }
}

/// Reduced row echelon form of `rows` (in place on a copy), returning the
/// echelon rows (zero rows dropped) and the pivot column of each.
pub fn rref(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        // Find a pivot row at or below r with a nonzero entry in column c.
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= p * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Rank of the row set.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).0.len()
}

/// Indices of a maximal linearly independent subset of `rows`, preferring
/// earlier rows (deterministic).
pub fn independent_row_indices(rows: &[Vec<Rat>]) -> Vec<usize> {
    let mut kept: Vec<Vec<Rat>> = Vec::new();
    let mut idx = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut cand = kept.clone();
        cand.push(row.clone());
        if rank(&cand) > kept.len() {
            kept.push(row.clone());
            idx.push(i);
        }
    }
    idx
}

/// Solve `A x = b` when the solution is unique.
///
/// Returns `Ok(Some(x))` for a consistent system of full column rank,
/// `Ok(None)` when inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if a.len() != b.len() {
        return Err(Error::structure("solve_unique: row/rhs mismatch"));
    }
    let n = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (ech, pivots) = rref(&aug);
    // Inconsistent: a pivot in the augmented column.
    if pivots.contains(&n) {
        return Ok(None);
    }
    // Underdetermined: fewer pivots than unknowns.
    if pivots.len() < n {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &pc) in ech.iter().zip(&pivots) {
        x[pc] = row[n].clone();
    }
    Ok(Some(x))
}

/// Basis of the nullspace `{x : A x = 0}` (deterministic order).
pub fn nullspace(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.first().map_or(0, |r| r.len());
    if n == 0 {
        return Vec::new();
    }
    let (ech, pivots) = rref(a);
    let mut basis = Vec::new();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    for &fc in &free {
        let mut v = vec![Rat::zero(); n];
        v[fc] = Rat::one();
        for (row, &pc) in ech.iter().zip(&pivots) {
            v[pc] = -row[fc].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        // Canonicalization: reduced, positive denominator.
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert_eq!(format_rat(&parse_rat("3/-6").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_form_is_canonical() {
        let v = vec![rat(1, 2), rat(-3, 4), rat(0, 1)];
        let p = primitive_integer_form(&v);
        assert_eq!(p, vec![rat_int(2), rat_int(-3), rat_int(0)]);
        // Scaling invariance.
        let w = vscale(&rat(7, 3), &v);
        assert_eq!(primitive_integer_form(&w), p);
    }

    #[test]
    fn solve_unique_basic() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1.
        let a = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]];
        let b = vec![rat_int(3), rat_int(1)];
        let x = solve_unique(&a, &b).unwrap().unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(1)]);
        // Underdetermined.
        let a2 = vec![vec![rat_int(1), rat_int(1)]];
        assert!(solve_unique(&a2, &[rat_int(3)]).unwrap().is_none());
        // Inconsistent.
        let a3 = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(2), rat_int(2)]];
        assert!(solve_unique(&a3, &[rat_int(1), rat_int(3)]).unwrap().is_none());
    }

    #[test]
    fn nullspace_dimension_and_membership() {
        // Single equation x + y + z = 0 in R^3: nullspace has dimension 2.
        let a = vec![vec![rat_int(1), rat_int(1), rat_int(1)]];
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&a[0], v).is_zero());
        }
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn norms_are_exact() {
        let v = vec![rat(1, 2), rat(-1, 3)];
        assert_eq!(norm_l1(&v), rat(5, 6));
        assert_eq!(norm_linf(&v), rat(1, 2));
        assert_eq!(norm_l2_squared(&v), rat(13, 36));
    }
}
