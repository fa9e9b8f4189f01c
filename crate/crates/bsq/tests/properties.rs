//! Property checks that the structured machinery holds up away from the
//! curated cases: exact coboundary identities at random parameters, Stokes
//! consistency on random rectangles, and the closed-form lattice counts of
//! the segment family.

use bsq::cech::{build_wall_over_interval, pointwise_complex, pointwise_h, StructuredCover};
use bsq::geometry::{
    curvature_residual, holonomy_turns, holonomy_via_area, CoordRectangle, LoopPoint, RectPlane,
};
use bsq::rational::{q, qi, Q};
use bsq::toric::{quantize, DelzantPolytope};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rand_param(rng: &mut StdRng, lo: i64, hi: i64) -> Q {
    let d = rng.gen_range(1..=12i64);
    q(rng.gen_range(lo * d..=hi * d), d)
}

#[test]
fn coboundary_squares_to_zero_at_random_params() {
    let wall = build_wall_over_interval(&[
        ((q(1, 2), q(7, 4)), 3),
        ((q(3, 2), q(11, 4)), 5),
        ((q(5, 2), q(15, 4)), 4),
    ])
    .unwrap();
    let mut rng = StdRng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 100 {
        let t = rand_param(&mut rng, 1, 3);
        if !wall.contains_param(&t) {
            continue;
        }
        checked += 1;
        let cx = pointwise_complex(&wall, &t).unwrap();
        assert!(cx.dd_is_zero_symbolically(), "t = {t}");
    }
}

#[test]
fn euler_characteristic_is_rank_nullity_consistent() {
    let wall = build_wall_over_interval(&[((q(1, 2), q(7, 4)), 4), ((q(3, 2), q(5, 2)), 3)])
        .unwrap();
    let mut rng = StdRng::seed_from_u64(22);
    for _ in 0..60 {
        let t = rand_param(&mut rng, 1, 2);
        if !wall.contains_param(&t) {
            continue;
        }
        let cx = pointwise_complex(&wall, &t).unwrap();
        let (n0, n1, n2) = cx.dims();
        let chi_spaces = n0 as i64 - n1 as i64 + n2 as i64;
        let chi = cx.cohomology_dim(0) as i64 - cx.cohomology_dim(1) as i64
            + cx.cohomology_dim(2) as i64;
        assert_eq!(chi_spaces, chi, "t = {t}");
    }
}

#[test]
fn integer_parameters_contribute_one_unit_in_their_layer() {
    // integers 1, 2, 3 sit strictly inside layers 0, 1, 2 respectively
    let wall = build_wall_over_interval(&[
        ((q(1, 2), q(3, 2) + q(1, 8)), 3),
        ((q(3, 2) - q(1, 8), q(5, 2) + q(1, 8)), 4),
        ((q(5, 2) - q(1, 8), q(7, 2)), 5),
    ])
    .unwrap();
    assert!(wall.warnings().is_empty());
    for m in 1..=3i64 {
        assert_eq!(pointwise_h(&wall, &qi(m), 1).unwrap(), 1, "m = {m}");
        assert_eq!(pointwise_h(&wall, &qi(m), 0).unwrap(), 0);
        assert_eq!(pointwise_h(&wall, &qi(m), 2).unwrap(), 0);
    }
    // and nothing anywhere else
    for t in [q(5, 4), q(7, 4), q(9, 4), q(11, 4)] {
        for deg in 0..=2 {
            assert_eq!(pointwise_h(&wall, &t, deg).unwrap(), 0, "t = {t}");
        }
    }
}

#[test]
fn stokes_consistency_on_random_rectangles() {
    let mut rng = StdRng::seed_from_u64(23);
    for trial in 0..100 {
        let cylinder = rng.gen_bool(0.5);
        let a0 = q(rng.gen_range(-12..=12), rng.gen_range(1..=6));
        let a1 = &a0 + q(rng.gen_range(1..=10), rng.gen_range(1..=4));
        let b0 = q(rng.gen_range(-8..=8), rng.gen_range(1..=6));
        let b1 = &b0 + q(rng.gen_range(1..=8), rng.gen_range(1..=4));
        let rect = CoordRectangle {
            plane: if cylinder {
                RectPlane::Cylinder(0)
            } else {
                RectPlane::Plane(0)
            },
            action_range: (a0.clone(), a1),
            angle_range: (b0, b1),
            base: LoopPoint {
                t: vec![qi(0)],
                theta: vec![qi(0)],
                s: vec![q(rng.gen_range(0..=8), 3)],
                phi: vec![qi(0)],
            },
        };
        let lp = rect.boundary();
        let via_area = holonomy_via_area(&lp, &rect.flat_surface()).unwrap();
        assert_eq!(via_area.turns(), &holonomy_turns(&lp), "trial {trial}");
        assert!(
            (via_area.to_complex()
                - bsq::geometry::holonomy_along_loop(&lp, None, 1e-10).unwrap())
            .norm()
                < 1e-9
        );
        assert_eq!(curvature_residual(&rect, None, 16), 0.0);
    }
}

#[test]
fn gauge_invariance_holds_on_winding_loops() {
    // loops that wind around the fibre are closed but not contractible;
    // a single-valued gauge still cannot move the holonomy
    use bsq::geometry::{holonomy_along_loop, DiscreteLoop, GaugeFunction, LoopPoint};
    use bsq::rational::q_to_f64;
    let mut rng = StdRng::seed_from_u64(25);
    for trial in 0..100 {
        let n = rng.gen_range(3..=7);
        let first = LoopPoint {
            t: vec![q(rng.gen_range(-8..=8), rng.gen_range(1..=6))],
            theta: vec![q(rng.gen_range(-12..=12), rng.gen_range(1..=6))],
            s: vec![q(rng.gen_range(0..=8), rng.gen_range(1..=4))],
            phi: vec![q(rng.gen_range(-12..=12), rng.gen_range(1..=6))],
        };
        let mut pts = vec![first.clone()];
        for _ in 0..n {
            pts.push(LoopPoint {
                t: vec![q(rng.gen_range(-8..=8), rng.gen_range(1..=6))],
                theta: vec![q(rng.gen_range(-12..=12), rng.gen_range(1..=6))],
                s: vec![q(rng.gen_range(0..=8), rng.gen_range(1..=4))],
                phi: vec![q(rng.gen_range(-12..=12), rng.gen_range(1..=6))],
            });
        }
        // close with a winding offset: same fibre point, different branch
        let mut last = first.clone();
        last.theta[0] += qi(rng.gen_range(-2..=2));
        last.phi[0] += qi(rng.gen_range(-2..=2));
        pts.push(last);
        let lp = DiscreteLoop::closed(pts).unwrap();

        let (a, b) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let gauge = GaugeFunction::new(move |p: &LoopPoint| {
            let th = std::f64::consts::TAU * q_to_f64(&p.theta[0]);
            let ph = std::f64::consts::TAU * q_to_f64(&p.phi[0]);
            a * th.cos() + b * ph.sin() * q_to_f64(&p.s[0])
        });
        let plain = holonomy_along_loop(&lp, None, 1e-9).unwrap();
        let gauged = holonomy_along_loop(&lp, Some(&gauge), 1e-9).unwrap();
        assert!((gauged - plain).norm() < 1e-9, "trial {trial}");
    }
}

#[test]
fn bohr_sommerfeld_membership_is_decided_argwise() {
    // trivial generators exactly at integer coordinates, decided on rationals
    use bsq::geometry::{holonomy_generators, Leaf};
    let mut rng = StdRng::seed_from_u64(24);
    for _ in 0..300 {
        let t = q(rng.gen_range(-20..=20), rng.gen_range(1..=6));
        let s = q(rng.gen_range(0..=20), rng.gen_range(1..=6));
        let leaf = Leaf::new(vec![t.clone()], vec![s.clone()]).unwrap();
        let all_one = holonomy_generators(&leaf)
            .iter()
            .all(|g| g.is_one());
        let integral = bsq::rational::is_integer(&t) && bsq::rational::is_integer(&s);
        assert_eq!(all_one, integral, "t = {t}, s = {s}");
        assert_eq!(leaf.is_bohr_sommerfeld(), integral);
    }
}

#[test]
fn segment_family_counts_up_to_fifty() {
    for k in 1..=50i64 {
        let qz = quantize(&DelzantPolytope::segment(k)).unwrap();
        assert_eq!(qz.real_dim as i64, k - 1, "k = {k}");
        assert_eq!(qz.kahler_dim as i64, k + 1, "k = {k}");
    }
}
