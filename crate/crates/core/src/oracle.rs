//! Independent verification layer.
//!
//! Everything here checks the *definitions* — Lipschitz difference
//! quotients, the Aubin excess inclusion, the Fréchet subgradient
//! inequality — by sampling on a rational lattice, never by reusing the
//! cone calculus it is meant to audit. One master direction list per plan
//! is rescaled through a geometric radius schedule; on piecewise-linear
//! data the per-radius supremum quotient becomes *exactly constant* once
//! the radius drops below the distance to the nearest inactive piece, so
//! stabilization is detected by exact rational equality, not tolerance.
//! The one exact decision is [`exact_pl_lipschitz`]: for a convex
//! piecewise-linear function, local Lipschitz continuity is equivalent to
//! interiority of the point in the effective domain, which the polyhedral
//! layer decides outright.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::poly::convert::hrep_to_vrep;
use crate::poly::{HPolyhedron, PointLocation};
use crate::rat::{norm_l1, norm_linf, rat, vadd, vscale, vsub, vzero, Rat};
use crate::varfun::{distance, ExtReal, GraphMap, Norm, PLValueFunction};

/// Deterministic sampling schedule: radii `2^0, 2^-1, …, 2^-(radii-1)`,
/// one master direction list of `samples` rational vectors reused at
/// every radius.
#[derive(Clone, Debug)]
pub struct SamplingPlan {
    pub seed: u64,
    pub radii: usize,
    pub samples: usize,
    pub norm: Norm,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            seed: 17,
            radii: 12,
            samples: 200,
            norm: Norm::LInf,
        }
    }
}

impl SamplingPlan {
    /// A small deterministic plan for wide agreement sweeps.
    pub fn budget(seed: u64) -> Self {
        SamplingPlan {
            seed,
            radii: 8,
            samples: 10,
            norm: Norm::LInf,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.norm == Norm::L2 {
            return Err(Error::Unsupported(
                "sampling oracles need a polyhedral norm (L1 or LInf)".into(),
            ));
        }
        if self.radii < 4 || self.samples == 0 {
            return Err(Error::precondition(
                "sampling plan needs at least 4 radii and 1 sample",
            ));
        }
        Ok(())
    }
}

/// Outcome of a sampling sweep. Blowup and Lipschitz labels are
/// *evidence* from finitely many samples, except where the caller pairs
/// them with the exact interiority decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    LipschitzEvidence,
    BlowupEvidence,
    Inconclusive,
}

/// Per-radius supremum difference quotients and the verdict they
/// support. `modulus` is the stabilized quotient under Lipschitz
/// evidence.
#[derive(Clone, Debug)]
pub struct ModulusProfile {
    /// `(k, sup quotient at radius 2^-k)`.
    pub per_radius: Vec<(u32, ExtReal)>,
    pub verdict: OracleVerdict,
    pub modulus: Option<Rat>,
}

fn poly_norm(v: &[Rat], norm: Norm) -> Rat {
    match norm {
        Norm::L1 => norm_l1(v),
        Norm::LInf => norm_linf(v),
        Norm::L2 => unreachable!("plans are validated to polyhedral norms"),
    }
}

/// Master direction list: the signed unit vectors first (so every open
/// halfspace is probed and boundary exits are always sampled), then the
/// two-coordinate sign patterns `±e_i ± e_j` (which attain the extremal
/// slopes of coordinate-aligned pieces), then seeded lattice vectors with
/// entries `k/12`, `|k| ≤ 12` — denominators stay powers of 2 times 3,
/// keeping every evaluation rational.
fn master_directions(dim: usize, plan: &SamplingPlan) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha20Rng::seed_from_u64(plan.seed);
    let mut dirs: Vec<Vec<Rat>> = Vec::new();
    for i in 0..dim {
        for sign in [1i64, -1] {
            let mut e = vzero(dim);
            e[i] = rat(sign, 1);
            dirs.push(e);
        }
    }
    for i in 0..dim {
        for j in i + 1..dim {
            for (si, sj) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
                let mut e = vzero(dim);
                e[i] = rat(si, 1);
                e[j] = rat(sj, 1);
                dirs.push(e);
            }
        }
    }
    dirs.truncate(plan.samples);
    while dirs.len() < plan.samples {
        let d: Vec<Rat> = (0..dim).map(|_| rat(rng.gen_range(-12..=12), 12)).collect();
        if d.iter().all(|c| c.is_zero()) {
            continue;
        }
        dirs.push(d);
    }
    dirs
}

fn radius(k: u32) -> Rat {
    rat(1, 1i64 << k.min(62))
}

/// Difference quotient of two extended-real values over a positive gap;
/// `None` when the pair carries no information (both values infinite with
/// the same sign).
fn pair_quotient(fa: &ExtReal, fb: &ExtReal, gap: &Rat) -> Option<ExtReal> {
    match (fa, fb) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let diff = (a.clone() - b.clone()).abs();
            Some(ExtReal::Finite(diff / gap.clone()))
        }
        (ExtReal::PlusInf, ExtReal::PlusInf) | (ExtReal::MinusInf, ExtReal::MinusInf) => None,
        _ => Some(ExtReal::PlusInf),
    }
}

fn sup_update(sup: &mut Option<ExtReal>, q: ExtReal) {
    match sup {
        None => *sup = Some(q),
        Some(s) => {
            if q > *s {
                *sup = Some(q);
            }
        }
    }
}

/// Verdict from a finished radius sweep, reading the tail of the
/// schedule: exact equality of the last four finite sups is Lipschitz
/// evidence; a final infinite sup, an all-infinite sweep, or strict
/// growth across the last three radii is blowup evidence.
fn classify_profile(per_radius: &[(u32, ExtReal)]) -> (OracleVerdict, Option<Rat>) {
    let n = per_radius.len();
    if n >= 4 {
        let tail = &per_radius[n - 4..];
        if let Some(first) = tail[0].1.as_finite() {
            if tail.iter().all(|(_, q)| q.as_finite() == Some(first)) {
                return (OracleVerdict::LipschitzEvidence, Some(first.clone()));
            }
        }
    }
    if per_radius
        .last()
        .map(|(_, q)| *q == ExtReal::PlusInf)
        .unwrap_or(false)
        || per_radius.iter().all(|(_, q)| *q == ExtReal::PlusInf)
    {
        return (OracleVerdict::BlowupEvidence, None);
    }
    if n >= 3 {
        let t = &per_radius[n - 3..];
        if t[0].1 < t[1].1 && t[1].1 < t[2].1 {
            return (OracleVerdict::BlowupEvidence, None);
        }
    }
    (OracleVerdict::Inconclusive, None)
}

/// Sampled Lipschitz modulus of a parametric value function around a
/// point of finite value: per radius, the supremum difference quotient
/// over anchored and consecutive sample pairs. Inconclusive sweeps
/// deterministically escalate the radius schedule twice before giving
/// up.
pub fn sampled_modulus(
    f: &PLValueFunction,
    x_bar: &[Rat],
    plan: &SamplingPlan,
) -> Result<ModulusProfile> {
    plan.validate()?;
    let f_base = f.evaluate(x_bar)?;
    if !f_base.is_finite() {
        return Err(Error::precondition(
            "sampled modulus needs a finite value at the anchor",
        ));
    }
    let dirs = master_directions(f.param_dim, plan);
    let mut radii_count = plan.radii;
    for _escalation in 0..3 {
        let mut per_radius = Vec::new();
        for k in 0..radii_count as u32 {
            let r = radius(k);
            let points: Vec<Vec<Rat>> = dirs
                .iter()
                .map(|d| vadd(x_bar, &vscale(&r, d)))
                .collect();
            let values: Vec<ExtReal> = points
                .iter()
                .map(|p| f.evaluate(p))
                .collect::<Result<_>>()?;
            let mut sup: Option<ExtReal> = None;
            for (i, p) in points.iter().enumerate() {
                let gap = poly_norm(&vsub(p, x_bar), plan.norm);
                if let Some(q) = pair_quotient(&values[i], &f_base, &gap) {
                    sup_update(&mut sup, q);
                }
                let j = (i + 1) % points.len();
                if j != i {
                    let gap = poly_norm(&vsub(p, &points[j]), plan.norm);
                    if !gap.is_zero() {
                        if let Some(q) = pair_quotient(&values[i], &values[j], &gap) {
                            sup_update(&mut sup, q);
                        }
                    }
                }
            }
            per_radius.push((k, sup.expect("anchor pairs always produce a quotient")));
        }
        let (verdict, modulus) = classify_profile(&per_radius);
        if verdict != OracleVerdict::Inconclusive || radii_count >= plan.radii + 8 {
            return Ok(ModulusProfile {
                per_radius,
                verdict,
                modulus,
            });
        }
        radii_count += 4;
    }
    unreachable!("escalation loop always returns");
}

/// The exact Lipschitz decision for convex piecewise-linear value
/// functions: Lipschitz around `x̄` iff `x̄` is interior to the effective
/// domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLipschitz {
    pub lipschitz: bool,
    pub in_domain: bool,
}

pub fn exact_pl_lipschitz(f: &PLValueFunction, x_bar: &[Rat]) -> Result<ExactLipschitz> {
    let dom = f.domain()?;
    Ok(match dom.classify_point(x_bar)? {
        PointLocation::Interior => ExactLipschitz {
            lipschitz: true,
            in_domain: true,
        },
        PointLocation::Boundary(_) => ExactLipschitz {
            lipschitz: false,
            in_domain: true,
        },
        PointLocation::Outside => ExactLipschitz {
            lipschitz: false,
            in_domain: false,
        },
    })
}

/// Per-point cache for one radius of an Aubin sweep: the raw slice, its
/// emptiness, and the vertices of the windowed slice (`None` when the
/// windowed slice is empty).
struct SlicePoint {
    slice: HPolyhedron,
    slice_empty: bool,
    window_vertices: Option<Vec<Vec<Rat>>>,
}

impl SlicePoint {
    fn build(g: &GraphMap, window: &HPolyhedron, x: &[Rat]) -> Result<SlicePoint> {
        let slice = g.slice(x)?;
        // The vertex enumeration canonicalizes internally, so hand it the
        // raw intersection; a nonempty windowed slice certifies the slice
        // itself nonempty, saving the extra feasibility probe.
        let windowed = slice.intersect(window)?;
        let window_vertices = if windowed.is_empty()? {
            None
        } else {
            Some(hrep_to_vrep(&windowed)?.vertices().to_vec())
        };
        let slice_empty = if window_vertices.is_some() {
            false
        } else {
            slice.is_empty()?
        };
        Ok(SlicePoint {
            slice,
            slice_empty,
            window_vertices,
        })
    }
}

/// One-sided excess `sup { dist(w, G(u)) : w ∈ G(x) ∩ W }` in a
/// polyhedral norm, exact: the supremum of a convex function over the
/// (bounded) intersection is attained at a vertex.
fn aubin_excess(source: &SlicePoint, target: &SlicePoint, norm: Norm) -> Result<ExtReal> {
    let verts = match &source.window_vertices {
        None => return Ok(ExtReal::Finite(Rat::zero())),
        Some(v) => v,
    };
    if target.slice_empty {
        return Ok(ExtReal::PlusInf);
    }
    let mut worst = Rat::zero();
    for w in verts {
        // Contained vertices contribute distance zero; the sign check is
        // far cheaper than the projection program.
        if target.slice.contains(w) {
            continue;
        }
        match distance(&target.slice, w, norm)? {
            ExtReal::Finite(d) => {
                if d > worst {
                    worst = d;
                }
            }
            _ => return Ok(ExtReal::PlusInf),
        }
    }
    Ok(ExtReal::Finite(worst))
}

/// Sampled Aubin (Lipschitz-like) profile of a set-valued map around a
/// graph point: excess inclusions `G(x) ∩ W ⊆ G(u) + q·‖x−u‖·B` measured
/// on anchored and consecutive input pairs, with `W` the unit sup-norm
/// box around `ȳ`.
pub fn aubin_sampled(
    g: &GraphMap,
    x_bar: &[Rat],
    y_bar: &[Rat],
    plan: &SamplingPlan,
) -> Result<ModulusProfile> {
    plan.validate()?;
    if !g.graph_contains(x_bar, y_bar)? {
        return Err(Error::precondition(
            "Aubin sampling needs a graph point",
        ));
    }
    let n = g.output_dim();
    let mut wrows = Vec::new();
    let mut wrhs = Vec::new();
    for c in 0..n {
        let mut up = vzero(n);
        up[c] = Rat::one();
        wrows.push(up);
        wrhs.push(y_bar[c].clone() + Rat::one());
        let mut down = vzero(n);
        down[c] = -Rat::one();
        wrows.push(down);
        wrhs.push(Rat::one() - y_bar[c].clone());
    }
    let window = HPolyhedron::from_parts(n, wrows, vec![crate::lp::RowKind::Le; 2 * n], wrhs)?;
    let dirs = master_directions(g.input_dim(), plan);
    let mut radii_count = plan.radii;
    for _escalation in 0..3 {
        let mut per_radius = Vec::new();
        for k in 0..radii_count as u32 {
            let r = radius(k);
            // Index 0 is the anchor; each point's slice geometry is
            // computed once and shared across all pairs at this radius.
            let mut points: Vec<Vec<Rat>> = vec![x_bar.to_vec()];
            points.extend(dirs.iter().map(|d| vadd(x_bar, &vscale(&r, d))));
            let cache: Vec<SlicePoint> = points
                .iter()
                .map(|p| SlicePoint::build(g, &window, p))
                .collect::<Result<_>>()?;
            let mut sup: Option<ExtReal> = None;
            let pair = |a: usize, b: usize, sup: &mut Option<ExtReal>| -> Result<()> {
                let gap = poly_norm(&vsub(&points[a], &points[b]), plan.norm);
                if gap.is_zero() {
                    return Ok(());
                }
                for (s, t) in [(a, b), (b, a)] {
                    let q = match aubin_excess(&cache[s], &cache[t], plan.norm)? {
                        ExtReal::Finite(e) => ExtReal::Finite(e / gap.clone()),
                        inf => inf,
                    };
                    sup_update(sup, q);
                }
                Ok(())
            };
            let n_s = dirs.len();
            for i in 0..n_s {
                pair(0, 1 + i, &mut sup)?;
                let j = (i + 1) % n_s;
                if j != i {
                    pair(1 + i, 1 + j, &mut sup)?;
                }
            }
            per_radius.push((k, sup.expect("anchor pairs always produce a quotient")));
        }
        let (verdict, modulus) = classify_profile(&per_radius);
        if verdict != OracleVerdict::Inconclusive || radii_count >= plan.radii + 8 {
            return Ok(ModulusProfile {
                per_radius,
                verdict,
                modulus,
            });
        }
        radii_count += 4;
    }
    unreachable!("escalation loop always returns");
}

/// Result of a Fréchet subgradient inequality check.
#[derive(Clone, Debug)]
pub struct SubgradientCheck {
    pub pass: bool,
    /// Worst violating sample and its normalized violation, when failing.
    pub worst: Option<(Vec<Rat>, Rat)>,
}

/// Test `⟨w, x − x̄⟩ ≤ f(x) − f(x̄) + o(‖x − x̄‖)` by requiring the
/// normalized violation `[⟨w, x−x̄⟩ − f(x) + f(x̄)] / ‖x−x̄‖` on the last
/// radius of the schedule to stay at or below `eps` (exact zero is the
/// right threshold on piecewise-linear data).
pub fn frechet_subgradient_check(
    f: &PLValueFunction,
    x_bar: &[Rat],
    w: &[Rat],
    plan: &SamplingPlan,
    eps: &Rat,
) -> Result<SubgradientCheck> {
    plan.validate()?;
    let f_base = match f.evaluate(x_bar)? {
        ExtReal::Finite(v) => v,
        _ => {
            return Err(Error::precondition(
                "subgradient check needs a finite value at the anchor",
            ))
        }
    };
    let dirs = master_directions(f.param_dim, plan);
    let mut worst: Option<(Vec<Rat>, Rat)> = None;
    let k = (plan.radii - 1) as u32;
    let r = radius(k);
    for d in &dirs {
        let x = vadd(x_bar, &vscale(&r, d));
        let gap = poly_norm(&vsub(&x, x_bar), plan.norm);
        let violation = match f.evaluate(&x)? {
            // +∞ on the other side can never violate the inequality.
            ExtReal::PlusInf => continue,
            ExtReal::MinusInf => {
                return Ok(SubgradientCheck {
                    pass: false,
                    worst: Some((x, Rat::zero())),
                })
            }
            ExtReal::Finite(fx) => {
                (crate::rat::dot(w, &vsub(&x, x_bar)) - fx + f_base.clone()) / gap
            }
        };
        if violation > *eps {
            let replace = match &worst {
                None => true,
                Some((_, v)) => violation > *v,
            };
            if replace {
                worst = Some((x, violation));
            }
        }
    }
    Ok(SubgradientCheck {
        pass: worst.is_none(),
        worst,
    })
}
