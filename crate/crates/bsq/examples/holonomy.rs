//! Holonomy of the canonical connection along piecewise-linear loops.
//!
//! The potential is Θ = Σ t dθ + Σ s dφ, so the holonomy of a loop is
//! e^{i∮Θ}, an exact rational number of turns for rational loops. Two
//! consequences are demonstrated: a gauge change (adding dG for a
//! single-valued G) never moves the holonomy, and for contractible loops the
//! line integral equals the symplectic area of any spanning surface.
//!
//! Run with: cargo run --example holonomy

use bsq::geometry::{
    curvature_residual, holonomy_along_loop, holonomy_phase, holonomy_via_area, CoordRectangle,
    DiscreteLoop, GaugeFunction, LoopPoint, RectPlane, SpanningSurface,
};
use bsq::rational::{q, q_to_f64, qi};
use std::f64::consts::TAU;

fn main() {
    // one full revolution at t = 1/2: holonomy e^{iπ} = −1
    let revolution = DiscreteLoop::closed(vec![
        LoopPoint::cylinder1(q(1, 2), qi(0)),
        LoopPoint::cylinder1(q(1, 2), q(1, 3)),
        LoopPoint::cylinder1(q(1, 2), q(2, 3)),
        LoopPoint::cylinder1(q(1, 2), qi(1)),
    ])
    .unwrap();
    let phase = holonomy_phase(&revolution);
    println!(
        "revolution at t = 1/2: holonomy argument {} turns, value {:.4}",
        phase.arg_string(),
        phase.to_complex()
    );

    // gauge invariance: perturb by dG with a single-valued G
    let gauge = GaugeFunction::new(|p: &LoopPoint| {
        let th = TAU * q_to_f64(&p.theta[0]);
        0.8 * th.sin() + 0.2 * q_to_f64(&p.t[0])
    });
    let plain = holonomy_along_loop(&revolution, None, 1e-9).unwrap();
    let gauged = holonomy_along_loop(&revolution, Some(&gauge), 1e-9).unwrap();
    println!(
        "with a gauge perturbation: |difference| = {:.2e}",
        (gauged - plain).norm()
    );

    // Stokes route: a rectangle from (0,0) to (1/2, 2π) has area π
    let rect = CoordRectangle {
        plane: RectPlane::Cylinder(0),
        action_range: (qi(0), q(1, 2)),
        angle_range: (qi(0), qi(1)),
        base: LoopPoint::cylinder1(qi(0), qi(0)),
    };
    let boundary = rect.boundary();
    let by_area = holonomy_via_area(&boundary, &rect.flat_surface()).unwrap();
    println!(
        "rectangle boundary: line route {} turns, area route {} turns",
        holonomy_phase(&boundary).arg_string(),
        by_area.arg_string()
    );
    println!(
        "Stokes residual |∮Θ − ∬ω| = {:.1e}",
        curvature_residual(&rect, None, 32)
    );

    // a crooked contractible loop, fanned into triangles: routes still agree
    let crooked = DiscreteLoop::closed(vec![
        LoopPoint::cylinder1(qi(0), qi(0)),
        LoopPoint::cylinder1(q(3, 4), q(1, 5)),
        LoopPoint::cylinder1(q(1, 3), q(2, 3)),
        LoopPoint::cylinder1(q(-1, 2), q(1, 4)),
        LoopPoint::cylinder1(qi(0), qi(0)),
    ])
    .unwrap();
    let fan = SpanningSurface::fan(&crooked).unwrap();
    let a = holonomy_via_area(&crooked, &fan).unwrap();
    let b = holonomy_phase(&crooked);
    println!(
        "crooked loop: area route = line route exactly: {}",
        a.turns() == b.turns()
    );
}
