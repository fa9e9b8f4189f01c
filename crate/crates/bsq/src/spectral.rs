//! Bigraded page engine and the direct-image dimension tables that deliver
//! band cohomology in any dimension.
//!
//! Pages carry finite-dimensional entries and differentials of bidegree
//! (r, 1−r). Turning a page replaces each entry by kernel-mod-image
//! dimensions; the next page's differentials default to zero, which is all
//! the closed-form tables ever need. For a product model the relevant table
//! says: with no plane factors, the only nonzero direct image sits in degree
//! m and is a skyscraper on the integer lattice; with a plane factor,
//! everything vanishes.

use crate::cech::{hash_description, CohomologyReport, SupportPoint};
use crate::geometry::Band;
use crate::linalg::Mat;
use crate::rational::{format_q, integers_in_open_interval, Q};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("page index must be at least 2, got {0}")]
    PageIndex(u32),
    #[error("differential at ({0}, {1}) has shape {2}x{3}, expected {4}x{5}")]
    DifferentialShape(i64, i64, usize, usize, usize, usize),
    #[error("differentials do not compose to zero at ({0}, {1})")]
    DdNotZero(i64, i64),
    #[error("page is not stable; total degrees are undefined")]
    Unstable,
    #[error("model must have at least one factor")]
    EmptyModel,
}

/// One entry of a page: a dimension, optionally with basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageEntry {
    pub dim: usize,
    pub basis: Option<Vec<String>>,
}

/// A bigraded page with differentials d: (p, q) → (p+r, q−r+1).
#[derive(Debug, Clone, PartialEq)]
pub struct BigradedPage {
    r: u32,
    entries: BTreeMap<(i64, i64), PageEntry>,
    diffs: BTreeMap<(i64, i64), Mat<Q>>,
    warnings: Vec<String>,
}

impl BigradedPage {
    pub fn new(r: u32) -> Result<Self, SpectralError> {
        if r < 2 {
            return Err(SpectralError::PageIndex(r));
        }
        Ok(BigradedPage {
            r,
            entries: BTreeMap::new(),
            diffs: BTreeMap::new(),
            warnings: Vec::new(),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), PageEntry> {
        &self.entries
    }

    pub fn diffs(&self) -> &BTreeMap<(i64, i64), Mat<Q>> {
        &self.diffs
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).map_or(0, |e| e.dim)
    }

    pub fn set_entry(&mut self, p: i64, q: i64, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(p, q));
        } else {
            self.entries.insert((p, q), PageEntry { dim, basis: None });
        }
    }

    pub fn set_entry_with_basis(&mut self, p: i64, q: i64, basis: Vec<String>) {
        self.entries.insert(
            (p, q),
            PageEntry {
                dim: basis.len(),
                basis: Some(basis),
            },
        );
    }

    /// Target bidegree of the differential leaving (p, q).
    pub fn target(&self, p: i64, q: i64) -> (i64, i64) {
        (p + self.r as i64, q - self.r as i64 + 1)
    }

    /// Installs d at (p, q), a (target dim) × (source dim) matrix. Induced
    /// differentials require chain-level data; installing a nonzero matrix
    /// on entries without basis labels is recorded as a warning.
    pub fn set_differential(&mut self, p: i64, q: i64, m: Mat<Q>) -> Result<(), SpectralError> {
        let (tp, tq) = self.target(p, q);
        let src = self.dim(p, q);
        let tgt = self.dim(tp, tq);
        if m.rows() != tgt || m.cols() != src {
            return Err(SpectralError::DifferentialShape(
                p,
                q,
                m.rows(),
                m.cols(),
                tgt,
                src,
            ));
        }
        if !m.is_zero() {
            let labelled = self.entries.get(&(p, q)).is_some_and(|e| e.basis.is_some())
                && self
                    .entries
                    .get(&(tp, tq))
                    .is_some_and(|e| e.basis.is_some());
            if !labelled {
                self.warnings.push(format!(
                    "nonzero differential at ({p}, {q}) without basis labels; it cannot be \
                     propagated to later pages"
                ));
            }
        }
        self.diffs.insert((p, q), m);
        Ok(())
    }

    fn check_dd(&self) -> Result<(), SpectralError> {
        for (&(p, q), m) in &self.diffs {
            let (tp, tq) = self.target(p, q);
            if let Some(m2) = self.diffs.get(&(tp, tq)) {
                if m.rows() > 0 && m2.rows() > 0 && !m2.mul_mat(m).is_zero() {
                    return Err(SpectralError::DdNotZero(p, q));
                }
            }
        }
        Ok(())
    }

    /// Kernel-mod-image of every entry; the next page starts with zero
    /// differentials.
    pub fn turn_page(&self) -> Result<BigradedPage, SpectralError> {
        self.check_dd()?;
        let mut next = BigradedPage::new(self.r + 1)?;
        for (&(p, q), entry) in &self.entries {
            let rank_out = self.diffs.get(&(p, q)).map_or(0, Mat::rank);
            let src = (p - self.r as i64, q + self.r as i64 - 1);
            let rank_in = self.diffs.get(&src).map_or(0, Mat::rank);
            // rank_in ≤ dim ker(out) once d∘d = 0 holds
            let dim = entry.dim - rank_out - rank_in;
            next.set_entry(p, q, dim);
        }
        Ok(next)
    }

    /// True when every installed differential is zero and no two nonzero
    /// entries are connected by any later differential's bidegree arithmetic
    /// either, so all pages from here on agree.
    pub fn is_stable(&self) -> bool {
        if self.diffs.values().any(|m| !m.is_zero()) {
            return false;
        }
        let keys: Vec<(i64, i64)> = self.entries.keys().copied().collect();
        for &(p, q) in &keys {
            for &(p2, q2) in &keys {
                let dp = p2 - p;
                if dp >= self.r as i64 && q2 - q == 1 - dp {
                    return false;
                }
            }
        }
        true
    }

    /// Diagonal sums E^k = ⊕_{p+q=k}; only meaningful on a stable page.
    pub fn total_degree_dims(&self) -> Result<BTreeMap<i64, usize>, SpectralError> {
        if !self.is_stable() {
            return Err(SpectralError::Unstable);
        }
        let mut out = BTreeMap::new();
        for (&(p, q), e) in &self.entries {
            *out.entry(p + q).or_insert(0) += e.dim;
        }
        Ok(out)
    }

    /// Alternating sum over total degrees, the quantity page-turning
    /// preserves.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (&(p, q), e) in &self.entries {
            let sign = if (p + q).rem_euclid(2) == 0 { 1 } else { -1 };
            chi += sign * e.dim as i64;
        }
        chi
    }
}

/// A sheaf supported on finitely many base points with finite-dimensional
/// towers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkyscraperSheafModel {
    /// (point, tower dimension); points distinct, dimensions ≥ 1.
    support: Vec<(Vec<Q>, usize)>,
}

impl SkyscraperSheafModel {
    pub fn new(mut support: Vec<(Vec<Q>, usize)>) -> Self {
        support.retain(|(_, d)| *d > 0);
        support.sort_by(|a, b| a.0.cmp(&b.0));
        support.dedup_by(|a, b| a.0 == b.0);
        SkyscraperSheafModel { support }
    }

    pub fn support(&self) -> &[(Vec<Q>, usize)] {
        &self.support
    }
}

/// Cohomology of a skyscraper over an open box: degree 0 collects the towers
/// inside the region, higher degrees vanish.
pub fn skyscraper_cohomology(
    model: &SkyscraperSheafModel,
    region: &[(Q, Q)],
) -> BTreeMap<usize, usize> {
    let mut h0 = 0;
    for (point, dim) in &model.support {
        let inside = point.len() == region.len()
            && point
                .iter()
                .zip(region)
                .all(|(x, (lo, hi))| lo < x && x < hi);
        if inside {
            h0 += dim;
        }
    }
    let mut out = BTreeMap::new();
    out.insert(0, h0);
    out
}

/// Where the higher direct images of the flat-section sheaf live for the
/// product model with m cylinder and k plane factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectImageTable {
    m: usize,
    k: usize,
}

impl DirectImageTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True iff the degree-q direct image is nonzero: only q = m, and only
    /// when there is no plane factor.
    pub fn is_nonzero(&self, q: usize) -> bool {
        self.k == 0 && q == self.m
    }

    /// The degree-q direct image as a skyscraper over the given base box:
    /// towers of dimension 1 on the integer lattice when nonzero.
    pub fn sheaf_over(&self, q: usize, region: &[(Q, Q)]) -> SkyscraperSheafModel {
        if !self.is_nonzero(q) {
            return SkyscraperSheafModel::new(vec![]);
        }
        let mut points = vec![Vec::new()];
        for (lo, hi) in region {
            let ints = integers_in_open_interval(lo, hi);
            let mut next = Vec::new();
            for p in &points {
                for v in &ints {
                    let mut x = p.clone();
                    x.push(v.clone());
                    next.push(x);
                }
            }
            points = next;
        }
        if region.is_empty() {
            points.clear();
        }
        SkyscraperSheafModel::new(points.into_iter().map(|p| (p, 1)).collect())
    }
}

/// Closed-form dimension table for the model with m cylinder and k plane
/// factors. With k > 0 the fibre over every base point carries no
/// cohomology, so all direct images vanish.
pub fn direct_image_table(m: usize, k: usize) -> Result<DirectImageTable, SpectralError> {
    if m + k == 0 {
        return Err(SpectralError::EmptyModel);
    }
    Ok(DirectImageTable { m, k })
}

/// Band cohomology through the fibration: build the second page from the
/// direct-image table and skyscraper cohomology of the base box, check it is
/// a single stabilized entry, and read off the total degrees. With k = 0 the
/// answer is H^m = C^ν with ν the lattice count of the base box; with k > 0
/// everything vanishes.
pub fn band_cohomology_leray(band: &Band) -> Result<CohomologyReport, SpectralError> {
    let model = band.model();
    let (m, k) = (model.num_cylinder(), model.num_plane());
    let table = direct_image_table(m, k)?;
    let region = band.t_intervals();

    let mut page = BigradedPage::new(2)?;
    for qdeg in 0..=(m + k) {
        if !table.is_nonzero(qdeg) {
            continue;
        }
        let sheaf = table.sheaf_over(qdeg, region);
        for (p, dim) in skyscraper_cohomology(&sheaf, region) {
            page.set_entry(p as i64, qdeg as i64, dim);
        }
    }
    debug_assert!(page.entries().len() <= 1);
    if !page.is_stable() {
        return Err(SpectralError::Unstable);
    }
    let totals = page.total_degree_dims()?;

    let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
    for (deg, dim) in totals {
        if dim > 0 {
            dims.insert(deg as usize, dim);
        }
    }
    let mut support = Vec::new();
    if k == 0 {
        let sheaf = table.sheaf_over(m, region);
        for (point, dim) in sheaf.support() {
            support.push(SupportPoint {
                param: point.clone(),
                dim: *dim,
            });
        }
    }
    let desc = format!(
        "leray;m={m};k={k};{}",
        band.t_intervals()
            .iter()
            .map(|(lo, hi)| format!("{},{}", format_q(lo), format_q(hi)))
            .collect::<Vec<_>>()
            .join(";")
    );
    Ok(CohomologyReport::new(
        dims,
        support,
        hash_description(&desc),
        "t",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn mat(rows: Vec<Vec<i64>>) -> Mat<Q> {
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(qi).collect())
                .collect(),
        )
    }

    #[test]
    fn zero_differentials_turn_identically() {
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 1, 2);
        page.set_entry(1, 0, 3);
        let next = page.turn_page().unwrap();
        assert_eq!(next.r(), 3);
        assert_eq!(next.dim(0, 1), 2);
        assert_eq!(next.dim(1, 0), 3);
    }

    #[test]
    fn single_row_is_stable_fixed_point() {
        let mut page = BigradedPage::new(2).unwrap();
        for p in 0..5 {
            page.set_entry(p, 1, (p as usize % 3) + 1);
        }
        assert!(page.is_stable());
        let next = page.turn_page().unwrap();
        for p in 0..5 {
            assert_eq!(next.dim(p, 1), page.dim(p, 1));
        }
        assert!(next.is_stable());
    }

    #[test]
    fn full_rank_differential_kills_both_entries() {
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 1, 2);
        page.set_entry(2, 0, 2);
        page.set_differential(0, 1, mat(vec![vec![1, 0], vec![0, 1]]))
            .unwrap();
        assert!(!page.is_stable());
        let next = page.turn_page().unwrap();
        assert_eq!(next.dim(0, 1), 0);
        assert_eq!(next.dim(2, 0), 0);
        assert!(next.entries().is_empty());
    }

    #[test]
    fn rank_one_differential_leaves_kernel_and_cokernel() {
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 1, 2);
        page.set_entry(2, 0, 2);
        page.set_differential(0, 1, mat(vec![vec![1, 1], vec![1, 1]]))
            .unwrap();
        let next = page.turn_page().unwrap();
        assert_eq!(next.dim(0, 1), 1);
        assert_eq!(next.dim(2, 0), 1);
        // euler characteristic preserved
        assert_eq!(page.euler_characteristic(), next.euler_characteristic());
    }

    #[test]
    fn dd_nonzero_rejected() {
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 2, 1);
        page.set_entry(2, 1, 1);
        page.set_entry(4, 0, 1);
        page.set_differential(0, 2, mat(vec![vec![1]])).unwrap();
        page.set_differential(2, 1, mat(vec![vec![1]])).unwrap();
        assert!(matches!(
            page.turn_page(),
            Err(SpectralError::DdNotZero(0, 2))
        ));
    }

    #[test]
    fn differential_shape_checked_and_warned() {
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 1, 2);
        page.set_entry(2, 0, 1);
        assert!(matches!(
            page.set_differential(0, 1, mat(vec![vec![1, 0], vec![0, 1]])),
            Err(SpectralError::DifferentialShape(..))
        ));
        page.set_differential(0, 1, mat(vec![vec![1, 0]])).unwrap();
        assert_eq!(page.warnings().len(), 1);
    }

    #[test]
    fn stability_respects_bidegree_arithmetic() {
        // entries (0,1) and (1,0): no differential of any r ≥ 2 connects them
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 1, 2);
        page.set_entry(1, 0, 3);
        assert!(page.is_stable());
        assert_eq!(
            page.total_degree_dims().unwrap(),
            BTreeMap::from([(1i64, 5usize)])
        );
        // entries (0,2) and (3,0) are connected by a d_3
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 2, 1);
        page.set_entry(3, 0, 1);
        assert!(!page.is_stable());
        assert!(page.total_degree_dims().is_err());
        // empty page is stable
        let page = BigradedPage::new(2).unwrap();
        assert!(page.is_stable());
        assert!(page.total_degree_dims().unwrap().is_empty());
    }

    #[test]
    fn single_entry_total_degree() {
        let mut page = BigradedPage::new(2).unwrap();
        page.set_entry(0, 3, 7);
        assert_eq!(
            page.total_degree_dims().unwrap(),
            BTreeMap::from([(3i64, 7usize)])
        );
    }

    #[test]
    fn skyscraper_cohomology_examples() {
        let m = SkyscraperSheafModel::new(vec![(vec![qi(2)], 1)]);
        let h = skyscraper_cohomology(&m, &[(q(3, 2), q(5, 2))]);
        assert_eq!(h[&0], 1);
        let h = skyscraper_cohomology(&m, &[(q(5, 2), q(7, 2))]);
        assert_eq!(h[&0], 0);
        let m = SkyscraperSheafModel::new(vec![
            (vec![qi(1)], 1),
            (vec![qi(2)], 1),
            (vec![qi(3)], 1),
        ]);
        let h = skyscraper_cohomology(&m, &[(q(1, 2), q(7, 2))]);
        assert_eq!(h[&0], 3);
        assert_eq!(h.get(&1).copied().unwrap_or(0), 0);
    }

    #[test]
    fn direct_image_table_cases() {
        let t = direct_image_table(1, 0).unwrap();
        assert!(t.is_nonzero(1));
        assert!(!t.is_nonzero(0));
        assert!(!t.is_nonzero(2));
        let sheaf = t.sheaf_over(1, &[(q(1, 2), q(5, 2))]);
        assert_eq!(sheaf.support().len(), 2);

        let t = direct_image_table(2, 0).unwrap();
        assert!(t.is_nonzero(2));
        assert!(!t.is_nonzero(1));

        let t = direct_image_table(1, 1).unwrap();
        for q in 0..=4 {
            assert!(!t.is_nonzero(q));
        }
        assert!(direct_image_table(0, 0).is_err());
    }

    #[test]
    fn leray_band_lattice_count() {
        // (1/2, 5/2) x (1/2, 3/2): lattice points (1,1), (2,1)
        let band = Band::new(vec![(q(1, 2), q(5, 2)), (q(1, 2), q(3, 2))], vec![]).unwrap();
        let rep = band_cohomology_leray(&band).unwrap();
        assert_eq!(rep.dim(2), 2);
        assert_eq!(rep.dim(0), 0);
        assert_eq!(rep.dim(1), 0);
        assert_eq!(rep.support().len(), 2);
        assert_eq!(rep.support()[0].param, vec![qi(1), qi(1)]);
    }

    #[test]
    fn leray_band_with_plane_factor_vanishes() {
        let band = Band::new(vec![(q(1, 2), q(5, 2))], vec![q(7, 2)]).unwrap();
        let rep = band_cohomology_leray(&band).unwrap();
        assert!(rep.is_zero());
        assert!(rep.support().is_empty());
    }

    #[test]
    fn leray_matches_cech_on_cylinder_bands() {
        use crate::cech::{band_cohomology, build_ek_cover, SampleOpts};
        let b = Band::cylinder(q(1, 2), q(7, 2)).unwrap();
        let cover = build_ek_cover(4, &b).unwrap();
        let cech = band_cohomology(&b, &cover, &SampleOpts::default()).unwrap();
        let leray = band_cohomology_leray(&b).unwrap();
        assert!(cech.same_cohomology(&leray));
    }
}
