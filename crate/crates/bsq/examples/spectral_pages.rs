//! The bigraded page engine on its own.
//!
//! Pages hold finite-dimensional entries with differentials of bidegree
//! (r, 1−r); turning a page takes kernel mod image everywhere. A page whose
//! nonzero entries occupy a single row is already stable: every differential
//! from page two on changes the row.
//!
//! Run with: cargo run --example spectral_pages

use bsq::linalg::Mat;
use bsq::rational::qi;
use bsq::spectral::BigradedPage;

fn show(page: &BigradedPage, label: &str) {
    println!("{label} (page {}):", page.r());
    for (&(p, q), e) in page.entries() {
        println!("  ({p}, {q}) dim {}", e.dim);
    }
    if page.entries().is_empty() {
        println!("  (empty)");
    }
}

fn main() {
    // a single-row page is stable and survives turning unchanged
    let mut single = BigradedPage::new(2).unwrap();
    for p in 0..4 {
        single.set_entry(p, 1, (p as usize) + 1);
    }
    show(&single, "single row");
    println!(
        "stable: {}, total degrees: {:?}\n",
        single.is_stable(),
        single.total_degree_dims().unwrap()
    );

    // a full-rank differential wipes out both ends
    let mut page = BigradedPage::new(2).unwrap();
    page.set_entry(0, 1, 2);
    page.set_entry(2, 0, 2);
    page.set_differential(
        0,
        1,
        Mat::from_rows(vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]]),
    )
    .unwrap();
    show(&page, "before");
    let next = page.turn_page().unwrap();
    show(&next, "after a full-rank differential");
    println!(
        "euler characteristic preserved: {} = {}\n",
        page.euler_characteristic(),
        next.euler_characteristic()
    );

    // a rank-one differential leaves kernel and cokernel behind
    let mut page = BigradedPage::new(2).unwrap();
    page.set_entry(0, 1, 2);
    page.set_entry(2, 0, 2);
    page.set_differential(
        0,
        1,
        Mat::from_rows(vec![vec![qi(1), qi(1)], vec![qi(1), qi(1)]]),
    )
    .unwrap();
    let next = page.turn_page().unwrap();
    show(&next, "after a rank-one differential");
    println!("stable now: {}", next.is_stable());

    // composing differentials must vanish; the engine refuses otherwise
    let mut bad = BigradedPage::new(2).unwrap();
    bad.set_entry(0, 2, 1);
    bad.set_entry(2, 1, 1);
    bad.set_entry(4, 0, 1);
    bad.set_differential(0, 2, Mat::from_rows(vec![vec![qi(1)]])).unwrap();
    bad.set_differential(2, 1, Mat::from_rows(vec![vec![qi(1)]])).unwrap();
    println!(
        "\nturning a page with d∘d ≠ 0: {:?}",
        bad.turn_page().err().map(|e| e.to_string())
    );
}
