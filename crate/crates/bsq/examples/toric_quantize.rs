//! Real versus Kähler quantization of toric manifolds, by lattice count.
//!
//! The moment polytope arrives as halfspaces with primitive integer normals.
//! The real-polarization quantization has one dimension per interior lattice
//! point; the Kähler count takes every lattice point. The difference is the
//! boundary count, and it is never zero for a genuine moment polytope, so
//! the two polarizations honestly disagree.
//!
//! Run with: cargo run --example toric_quantize

use bsq::rational::qi;
use bsq::toric::{
    delzant_validate, enumerate_lattice_points, quantize, DelzantPolytope, Halfspace,
};

fn report(poly: &DelzantPolytope, label: &str) {
    let qz = quantize(poly).unwrap();
    println!(
        "{label}: real = {}, Kahler = {}, boundary discrepancy = {}",
        qz.real_dim, qz.kahler_dim, qz.discrepancy
    );
}

fn main() {
    // the sphere family: segments [0, k]
    for k in [1i64, 2, 4, 7, 10] {
        report(&DelzantPolytope::segment(k), &format!("segment [0, {k}]"));
    }
    println!();

    // surfaces: a dilated simplex and a square
    report(&DelzantPolytope::simplex(2, 3), "simplex x+y <= 3");
    report(&DelzantPolytope::rect_box(&[2, 2]), "square [0,2]^2");
    report(&DelzantPolytope::simplex(3, 4), "3-simplex x+y+z <= 4");
    println!();

    // structural diagnostics: vertex cones must be unimodular
    let good = DelzantPolytope::simplex(2, 3);
    println!("simplex diagnostics: {:?}", delzant_validate(&good));
    let bad = DelzantPolytope::new(
        2,
        vec![
            Halfspace::new(vec![2, 0], qi(2)),
            Halfspace::new(vec![0, 1], qi(1)),
            Halfspace::new(vec![-1, 0], qi(0)),
            Halfspace::new(vec![0, -1], qi(0)),
        ],
    )
    .unwrap();
    for d in delzant_validate(&bad) {
        println!("flag: {d}");
    }
    println!();

    // the classified points themselves
    let r = enumerate_lattice_points(&DelzantPolytope::simplex(2, 3)).unwrap();
    println!("simplex interior points: {:?}", r.interior_points);
    println!("simplex boundary points: {:?}", r.boundary_points);
}
