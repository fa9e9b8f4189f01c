//! Enumerate the Bohr-Sommerfeld leaves of bands in the product model.
//!
//! A leaf (the torus at fixed action coordinates) admits a global flat
//! section exactly when every holonomy generator is trivial, which happens
//! at integer coordinates. Leaves with a vanishing plane coordinate are
//! singular: lower-dimensional tori that the quantization count excludes.
//!
//! Run with: cargo run --example bs_set

use bsq::geometry::{bs_set_in_band, holonomy_generators, Band, Leaf};
use bsq::rational::{format_q, q};

fn show(band: &Band, label: &str) {
    println!("{label}");
    let leaves = bs_set_in_band(band);
    if leaves.is_empty() {
        println!("  (no Bohr-Sommerfeld leaves)");
    }
    for leaf in &leaves {
        let t: Vec<String> = leaf.t().iter().map(format_q).collect();
        let s: Vec<String> = leaf.s().iter().map(format_q).collect();
        println!(
            "  t = ({}), s = ({})  dim {}  {}",
            t.join(", "),
            s.join(", "),
            leaf.dimension(),
            if leaf.is_singular() { "singular" } else { "nonsingular" },
        );
    }
    println!();
}

fn main() {
    // a cylinder band holding two leaves
    let band = Band::cylinder(q(3, 2), q(7, 2)).unwrap();
    show(&band, "cylinder band t in (3/2, 7/2):");

    // a disc in the plane factor: the origin circle is singular
    let band = Band::new(vec![], vec![q(5, 2)]).unwrap();
    show(&band, "plane disc s < 5/2:");

    // a product band: cylinder x disc
    let band = Band::new(vec![(q(1, 2), q(5, 2))], vec![q(3, 2)]).unwrap();
    show(&band, "product band (1/2, 5/2) x {s < 3/2}:");

    // holonomy generators decide membership exactly
    let leaf = Leaf::new(vec![q(1, 2)], vec![]).unwrap();
    let gens = holonomy_generators(&leaf);
    println!(
        "leaf at t = 1/2: generator e^(2*pi*i/2) = {:.3}, Bohr-Sommerfeld: {}",
        gens[0].to_complex(),
        leaf.is_bohr_sommerfeld()
    );
}
