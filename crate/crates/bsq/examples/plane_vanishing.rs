//! The plane model: annuli count their circles, discs lose the origin.
//!
//! An annulus behaves like a cylinder band in the action coordinate s. A
//! disc through the origin is different: the origin element of the cover
//! admits no nonzero flat section at all, and that empty section space
//! removes the obstruction that an integer circle would otherwise create —
//! so a small disc has no cohomology, and a large disc counts only the
//! positive integer circles, never s = 0.
//!
//! Run with: cargo run --example plane_vanishing

use bsq::cech::{
    annulus_cohomology, disc_cohomology, pointwise_complex, single_layer_cover, PlaneCover,
    SampleOpts, StructuredCover,
};
use bsq::rational::{format_q, q};

fn main() {
    let opts = SampleOpts::default();

    // annulus (1/2, 3/2): one circle, s = 1
    let cover = single_layer_cover(3, (q(1, 2), q(3, 2))).unwrap();
    let rep = annulus_cohomology(&q(1, 2), &q(3, 2), &cover, &opts).unwrap();
    println!("annulus (1/2, 3/2): H1 = {}", rep.dim(1));

    // small discs: everything vanishes regardless of ring size
    for arcs in 3..=6 {
        let cover = PlaneCover::build(&q(4, 5), arcs).unwrap();
        let rep = disc_cohomology(&cover, &opts).unwrap();
        println!(
            "disc radius 4/5, ring of {arcs}: all H^q zero: {}",
            rep.is_zero()
        );
    }
    println!();

    // larger discs: ceil(r) − 1 circles contribute; the origin never does
    for r in [q(1, 2), q(3, 2), q(5, 2), q(7, 2)] {
        let cover = PlaneCover::build(&r, 3).unwrap();
        let rep = disc_cohomology(&cover, &opts).unwrap();
        let support: Vec<String> = rep
            .support()
            .iter()
            .map(|sp| format_q(&sp.param[0]))
            .collect();
        println!(
            "disc radius {}: H1 = {} from circles s in [{}]",
            format_q(&r),
            rep.dim(1),
            support.join(", ")
        );
    }

    // why: in the region where the origin element overlaps the ring, the
    // coboundary keeps full rank even at integer s
    let cover = PlaneCover::build(&q(4, 5), 3).unwrap();
    let cx = pointwise_complex(&cover, &q(2, 5)).unwrap();
    println!(
        "\norigin-overlap complex: elements {:?}, C0 dim {} (origin element contributes none)",
        cx.element_labels(),
        cx.dims().0
    );
    println!(
        "rank of the level-0 coboundary there: {} = generic {}, so no parameter obstructs",
        cx.rank_at_param(0),
        cx.rank_generic(0)
    );

    // covers that fail to confine an integer circle to the ring are flagged
    let flagged = PlaneCover::build_explicit(&q(9, 10), &q(3, 2), &q(7, 5), 3).unwrap();
    for w in flagged.warnings() {
        println!("flagged cover: {w}");
    }
}
