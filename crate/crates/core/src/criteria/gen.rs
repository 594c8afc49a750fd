//! Seeded random instances for agreement sweeps.
//!
//! Everything is drawn from a deterministic stream: small integer
//! coefficients in `{-3, …, 3}`, graphs filtered to be nonempty with a
//! certified base point on them, value functions filtered to be finite
//! at their anchor. Anchors alternate between relative-interior points
//! and boundary points so both regimes of every criterion get exercised.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::lp::RowKind;
use crate::poly::faces::relative_interior_point;
use crate::poly::{HPolyhedron, VPolytope};
use crate::rat::{rat_int, Rat};
use crate::varfun::{
    distance_fn, gauge_fn, minimal_time_fn, scalarization_fn, ExtReal, GraphMap, Norm,
    PLValueFunction,
};

const RETRIES: usize = 500;

/// Deterministic instance stream.
pub struct InstanceGen {
    rng: ChaCha20Rng,
}

impl InstanceGen {
    pub fn new(seed: u64) -> Self {
        InstanceGen {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    fn coeff(&mut self) -> Rat {
        rat_int(self.rng.gen_range(-3..=3))
    }

    fn row(&mut self, dim: usize) -> Vec<Rat> {
        (0..dim).map(|_| self.coeff()).collect()
    }

    /// A nonzero direction with coefficients in `{-3, …, 3}`.
    pub fn direction(&mut self, dim: usize) -> Vec<Rat> {
        loop {
            let d = self.row(dim);
            if d.iter().any(|c| !c.is_zero()) {
                return d;
            }
        }
    }

    /// An arbitrary point with coefficients in `{-3, …, 3}`.
    pub fn point(&mut self, dim: usize) -> Vec<Rat> {
        self.row(dim)
    }

    /// A nonempty polyhedron with at most `max_rows` rows (mostly
    /// inequalities, occasionally an equality) and a point on it.
    pub fn set_instance(&mut self, dim: usize, max_rows: usize) -> Result<(HPolyhedron, Vec<Rat>)> {
        for _ in 0..RETRIES {
            let k = self.rng.gen_range(1..=max_rows);
            let mut rows = Vec::with_capacity(k);
            let mut kinds = Vec::with_capacity(k);
            let mut rhs = Vec::with_capacity(k);
            for _ in 0..k {
                rows.push(self.row(dim));
                kinds.push(if self.rng.gen_range(0..10) == 0 {
                    RowKind::Eq
                } else {
                    RowKind::Le
                });
                rhs.push(self.coeff());
            }
            let p = HPolyhedron::from_parts(dim, rows, kinds, rhs)?;
            let anchor = self.anchor(&p)?;
            if let Some(x) = anchor {
                return Ok((p, x));
            }
        }
        Err(Error::Internal(
            "instance generator exhausted retries building a nonempty set".into(),
        ))
    }

    /// Pick a base point of `p`: a relative-interior point or a vertex-ish
    /// boundary point, alternating by coin flip. `None` when `p` is empty.
    fn anchor(&mut self, p: &HPolyhedron) -> Result<Option<Vec<Rat>>> {
        if self.rng.gen_bool(0.5) {
            relative_interior_point(p)
        } else {
            p.any_point()
        }
    }

    /// A nonempty set-valued map `R^m ⇉ R^n` with polyhedral convex
    /// graph, plus a certified graph point `(x̄, ȳ)`.
    pub fn graph_instance(
        &mut self,
        m: usize,
        n: usize,
        max_rows: usize,
    ) -> Result<(GraphMap, Vec<Rat>, Vec<Rat>)> {
        for _ in 0..RETRIES {
            let (p, anchor) = match self.set_instance(m + n, max_rows) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let g = GraphMap::new(p, m, n)?;
            debug_assert!(g.graph_contains(&anchor[..m], &anchor[m..])?);
            let (x, y) = anchor.split_at(m);
            return Ok((g, x.to_vec(), y.to_vec()));
        }
        Err(Error::Internal(
            "instance generator exhausted retries building a graph".into(),
        ))
    }

    /// A polytope (optionally with rays) given by `1..=max_vertices`
    /// generator points.
    pub fn polytope(
        &mut self,
        dim: usize,
        max_vertices: usize,
        max_rays: usize,
    ) -> Result<VPolytope> {
        let nv = self.rng.gen_range(1..=max_vertices);
        let vertices: Vec<Vec<Rat>> = (0..nv).map(|_| self.row(dim)).collect();
        let nr = if max_rays == 0 {
            0
        } else {
            self.rng.gen_range(0..=max_rays)
        };
        let rays: Vec<Vec<Rat>> = (0..nr).map(|_| self.direction(dim)).collect();
        VPolytope::new(dim, vertices, rays)
    }

    /// A convex piecewise-linear function — a gauge, a distance, a
    /// minimal time, or a scalarization over random data — together with
    /// an anchor point of finite value.
    pub fn value_function(&mut self, dim: usize) -> Result<(PLValueFunction, Vec<Rat>)> {
        for _ in 0..RETRIES {
            let f = match self.rng.gen_range(0..4) {
                0 => gauge_fn(&self.polytope(dim, 4, 0)?)?,
                1 => {
                    let (omega, _) = self.set_instance(dim, 4)?;
                    let norm = if self.rng.gen_bool(0.5) {
                        Norm::L1
                    } else {
                        Norm::LInf
                    };
                    distance_fn(&omega, norm)?
                }
                2 => {
                    let dyn_set = self.polytope(dim, 3, 0)?;
                    let (omega, _) = self.set_instance(dim, 4)?;
                    minimal_time_fn(&dyn_set, &omega)?
                }
                _ => {
                    let (omega, _) = self.set_instance(dim, 4)?;
                    let d = self.direction(dim);
                    scalarization_fn(&omega, &d)?
                }
            };
            let dom = f.domain()?;
            if let Some(x) = self.anchor(&dom)? {
                if let ExtReal::Finite(_) = f.evaluate(&x)? {
                    return Ok((f, x));
                }
            }
        }
        Err(Error::Internal(
            "instance generator exhausted retries building a value function".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PointLocation;

    #[test]
    fn streams_are_deterministic() {
        let mut a = InstanceGen::new(11);
        let mut b = InstanceGen::new(11);
        let (ga, xa, ya) = a.graph_instance(2, 2, 6).unwrap();
        let (gb, xb, yb) = b.graph_instance(2, 2, 6).unwrap();
        assert_eq!(xa, xb);
        assert_eq!(ya, yb);
        assert!(ga.graph().set_equal(gb.graph()).unwrap());
    }

    #[test]
    fn graph_instances_certify_their_anchor() {
        let mut g = InstanceGen::new(5);
        for _ in 0..20 {
            let (map, x, y) = g.graph_instance(2, 1, 6).unwrap();
            assert!(map.graph_contains(&x, &y).unwrap());
        }
    }

    #[test]
    fn value_functions_are_finite_at_their_anchor() {
        let mut g = InstanceGen::new(9);
        for _ in 0..20 {
            let (f, x) = g.value_function(2).unwrap();
            assert!(f.evaluate(&x).unwrap().is_finite());
            assert_ne!(
                f.domain().unwrap().classify_point(&x).unwrap(),
                PointLocation::Outside
            );
        }
    }
}
