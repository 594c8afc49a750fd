//! Randomized invariants for the exact geometry and the nonsmooth
//! evaluators. Every check is decided in rational arithmetic; the random
//! data only chooses which exact statement to verify.

use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;

use polylip::poly::cones::{
    is_trivial_cone, is_trivial_cone_by_rays, negative_dual, orthogonal_complement, positive_dual,
};
use polylip::poly::convert::{hrep_to_vrep, vrep_to_hrep};
use polylip::poly::fm::{lifted_membership, project_out};
use polylip::poly::project::metric_projection;
use polylip::rat::{dot, rat_int, vscale, vsub};
use polylip::varfun::{distance, gauge, gauge_fn, minimal_time, scalarization};
use polylip::{ExtReal, HPolyhedron, Norm, Rat, RowKind, VPolytope};

fn coeffs(dim: usize) -> impl Strategy<Value = Vec<Rat>> {
    vec((-3i64..=3).prop_map(rat_int), dim)
}

fn hpoly(dim: usize) -> impl Strategy<Value = HPolyhedron> {
    (1usize..=5).prop_flat_map(move |k| {
        (vec(coeffs(dim), k), vec(0u8..10u8, k), vec(-3i64..=3, k)).prop_map(
            move |(rows, kind_sel, rhs)| {
                let kinds = kind_sel
                    .iter()
                    .map(|&s| if s == 0 { RowKind::Eq } else { RowKind::Le })
                    .collect();
                let rhs = rhs.into_iter().map(rat_int).collect();
                HPolyhedron::from_parts(dim, rows, kinds, rhs).unwrap()
            },
        )
    })
}

fn vpoly(dim: usize) -> impl Strategy<Value = VPolytope> {
    (1usize..=4, 0usize..=2).prop_flat_map(move |(nv, nr)| {
        (vec(coeffs(dim), nv), vec(coeffs(dim), nr)).prop_map(move |(vs, rs)| {
            let rays: Vec<Vec<Rat>> = rs
                .into_iter()
                .filter(|r| r.iter().any(|c| !c.is_zero()))
                .collect();
            VPolytope::new(dim, vs, rays).unwrap()
        })
    })
}

fn bounded_vpoly(dim: usize) -> impl Strategy<Value = VPolytope> {
    (1usize..=4).prop_flat_map(move |nv| {
        vec(coeffs(dim), nv).prop_map(move |vs| VPolytope::new(dim, vs, vec![]).unwrap())
    })
}

fn dim_and<S, T>(f: fn(usize) -> S) -> impl Strategy<Value = (usize, T)>
where
    S: Strategy<Value = T>,
    T: core::fmt::Debug,
{
    (1usize..=3).prop_flat_map(move |d| f(d).prop_map(move |v| (d, v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Converting H → V → H reproduces the same set exactly.
    #[test]
    fn representation_round_trip((_, p) in dim_and(hpoly)) {
        prop_assume!(!p.is_empty().unwrap());
        let v = hrep_to_vrep(&p).unwrap();
        let h2 = vrep_to_hrep(&v).unwrap();
        prop_assert!(p.set_equal(&h2).unwrap());
    }

    /// Fourier–Motzkin projection decides membership exactly as the
    /// lifted feasibility program does.
    #[test]
    fn projected_membership_matches_the_lifted_program(
        (dim, p) in dim_and(hpoly),
        pick in 0usize..3,
        q in coeffs(3),
    ) {
        let k = pick % dim;
        let proj = project_out(&p, &[k]).unwrap();
        let y: Vec<Rat> = q[..dim - 1].to_vec();
        prop_assert_eq!(
            proj.contains(&y),
            lifted_membership(&p, &[k], &y).unwrap()
        );
    }

    /// The annihilator of a generated set is exactly the intersection of
    /// its upper and lower dual cones.
    #[test]
    fn orthogonal_complement_is_the_two_sided_dual((_, f) in dim_and(vpoly)) {
        let both = positive_dual(&f).unwrap()
            .as_poly()
            .intersect(negative_dual(&f).unwrap().as_poly())
            .unwrap();
        prop_assert!(orthogonal_complement(&f).unwrap().as_poly().set_equal(&both).unwrap());
    }

    /// Euclidean projection lands in the set, is idempotent, and is
    /// firmly nonexpansive (all checked on exact squared norms).
    #[test]
    fn euclidean_projection_is_firmly_nonexpansive(
        (dim, p) in dim_and(hpoly),
        a in coeffs(3),
        b in coeffs(3),
    ) {
        prop_assume!(!p.is_empty().unwrap());
        let x = a[..dim].to_vec();
        let y = b[..dim].to_vec();
        let px = metric_projection(&p, &x).unwrap().point;
        let py = metric_projection(&p, &y).unwrap().point;
        prop_assert!(p.contains(&px));
        prop_assert_eq!(metric_projection(&p, &px).unwrap().point, px.clone());
        let d_proj = vsub(&px, &py);
        let d_arg = vsub(&x, &y);
        prop_assert!(dot(&d_proj, &d_proj) <= dot(&d_arg, &d_proj));
    }

    /// The gauge is positively homogeneous and subadditive.
    #[test]
    fn gauge_is_homogeneous_and_subadditive(
        (dim, f) in dim_and(bounded_vpoly),
        a in coeffs(3),
        b in coeffs(3),
        scale_num in 0i64..=3,
    ) {
        let x = a[..dim].to_vec();
        let y = b[..dim].to_vec();
        let t = Rat::new(scale_num.into(), 2.into());
        let gx = gauge(&f, &x).unwrap();
        let scaled = gauge(&f, &vscale(&t, &x)).unwrap();
        match gx {
            ExtReal::Finite(ref g) => prop_assert_eq!(scaled, ExtReal::Finite(t.clone() * g.clone())),
            ExtReal::PlusInf => {
                if t.is_zero() {
                    prop_assert_eq!(scaled, ExtReal::Finite(Rat::zero()));
                } else {
                    prop_assert_eq!(scaled, ExtReal::PlusInf);
                }
            }
            ExtReal::MinusInf => prop_assert!(false, "gauge can never be -inf"),
        }
        let gy = gauge(&f, &y).unwrap();
        let sum: Vec<Rat> = x.iter().zip(&y).map(|(u, v)| u.clone() + v.clone()).collect();
        if let (ExtReal::Finite(gx), ExtReal::Finite(gy)) = (&gx, &gy) {
            match gauge(&f, &sum).unwrap() {
                ExtReal::Finite(gs) => prop_assert!(gs <= gx.clone() + gy.clone()),
                other => prop_assert!(false, "subadditivity broken: {} vs finite bound", other),
            }
        }
    }

    /// Moving the argument along the scalarization direction shifts the
    /// value by exactly the step, through both infinities.
    #[test]
    fn scalarization_translates_along_its_direction(
        (dim, omega) in dim_and(hpoly),
        dsel in coeffs(3),
        a in coeffs(3),
        num in -4i64..=4,
    ) {
        let d = dsel[..dim].to_vec();
        prop_assume!(d.iter().any(|c| !c.is_zero()));
        let x = a[..dim].to_vec();
        let alpha = Rat::new(num.into(), 2.into());
        let shifted: Vec<Rat> = x.iter().zip(&d).map(|(u, v)| u.clone() + alpha.clone() * v.clone()).collect();
        let lhs = scalarization(&omega, &d, &shifted).unwrap();
        let rhs = scalarization(&omega, &d, &x).unwrap();
        let expected = match rhs {
            ExtReal::Finite(t) => ExtReal::Finite(t - alpha),
            inf => inf,
        };
        prop_assert_eq!(lhs, expected);
    }

    /// The minimal time vanishes exactly on the target set.
    #[test]
    fn minimal_time_vanishes_exactly_on_the_target(
        (dim, omega) in dim_and(hpoly),
        fsel in (1usize..=3),
        a in coeffs(3),
    ) {
        let mut gen_data = a.clone();
        gen_data.extend(a.iter().map(|c| Rat::zero() - c.clone()));
        let verts: Vec<Vec<Rat>> = (0..fsel).map(|i| {
            (0..dim).map(|j| gen_data[(i + j) % gen_data.len()].clone()).collect()
        }).collect();
        let f = VPolytope::new(dim, verts, vec![]).unwrap();
        let x = a[..dim].to_vec();
        let t = minimal_time(&f, &omega, &x).unwrap();
        prop_assert_eq!(t == ExtReal::Finite(Rat::zero()), omega.contains(&x));
    }

    /// The linear-program reading of cone triviality agrees with the
    /// generator enumeration.
    #[test]
    fn cone_triviality_readings_agree((_, f) in dim_and(vpoly)) {
        let c = positive_dual(&f).unwrap();
        prop_assert_eq!(is_trivial_cone(&c).unwrap(), is_trivial_cone_by_rays(&c).unwrap());
        let n = negative_dual(&f).unwrap();
        prop_assert_eq!(is_trivial_cone(&n).unwrap(), is_trivial_cone_by_rays(&n).unwrap());
    }

    /// Epigraph membership of the gauge agrees with its values.
    #[test]
    fn epigraph_membership_matches_function_values(
        (dim, f) in dim_and(bounded_vpoly),
        a in coeffs(3),
        level in -3i64..=3,
    ) {
        let x = a[..dim].to_vec();
        let fun = gauge_fn(&f).unwrap();
        let epi = fun.epigraph_map().unwrap();
        let v = rat_int(level);
        let inside = epi.graph_contains(&x, std::slice::from_ref(&v)).unwrap();
        prop_assert_eq!(inside, fun.evaluate(&x).unwrap() <= ExtReal::Finite(v));
    }

    /// The polyhedral distance vanishes exactly on the set.
    #[test]
    fn distance_vanishes_exactly_on_the_set(
        (dim, omega) in dim_and(hpoly),
        a in coeffs(3),
        use_l1 in proptest::bool::ANY,
    ) {
        prop_assume!(!omega.is_empty().unwrap());
        let x = a[..dim].to_vec();
        let norm = if use_l1 { Norm::L1 } else { Norm::LInf };
        let d = distance(&omega, &x, norm).unwrap();
        prop_assert_eq!(d == ExtReal::Finite(Rat::zero()), omega.contains(&x));
    }
}
