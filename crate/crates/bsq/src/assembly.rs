//! Decomposing a band into overlapping sub-bands and reassembling the
//! cohomology.
//!
//! When the overlap of two pieces carries no cohomology, the long exact
//! sequence of the union collapses to a direct sum, so per-degree dimensions
//! just add. Decomposition places cuts at half-integers, which keeps every
//! overlap away from the Bohr-Sommerfeld parameters.

use crate::cech::{hash_description, CohomologyReport, SupportPoint};
use crate::geometry::{bs_set_in_band, Band, Leaf};
use crate::rational::{format_q, integers_in_open_interval, is_integer, q, Q};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AssemblyError {
    #[error("band endpoint {0} is an integer; open bands must not end on a Bohr-Sommerfeld parameter")]
    BoundaryOnLeaf(String),
    #[error("decomposition only applies to pure cylinder bands (k = 0), got k = {0}")]
    PlaneFactors(usize),
    #[error("overlap cohomology is nonzero in degree {degree} (dim {dim}); the direct-sum reduction does not apply")]
    NonAcyclicOverlap { degree: usize, dim: usize },
    #[error("supplied leaves do not match the band's Bohr-Sommerfeld set")]
    LeafMismatch,
    #[error("bad split points: {0}")]
    BadCuts(String),
}

/// One piece of a decomposition, holding at most one leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubBand {
    pub band: Band,
    pub bs_leaf: Option<Leaf>,
}

impl SubBand {
    /// The stock three-arc cover of this piece (pure cylinder pieces only).
    pub fn default_cover(&self) -> Result<crate::cech::BrickWallCover, crate::cech::CoverError> {
        crate::cech::build_ek_cover(3, &self.band)
    }
}

/// Ordered pieces whose union is the original band, with their pairwise
/// overlaps; every overlap avoids the integer parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandDecomposition {
    pub pieces: Vec<SubBand>,
    pub overlaps: Vec<Band>,
}

/// Cuts one axis between its leaves (at the half-integers by default),
/// widening each cut into an overlap of half-width 1/8.
fn axis_chain_with(lo: &Q, hi: &Q, cuts: Option<&[Q]>) -> Result<Vec<(Q, Q)>, AssemblyError> {
    if is_integer(lo) {
        return Err(AssemblyError::BoundaryOnLeaf(format_q(lo)));
    }
    if is_integer(hi) {
        return Err(AssemblyError::BoundaryOnLeaf(format_q(hi)));
    }
    let ints = integers_in_open_interval(lo, hi);
    if ints.len() <= 1 {
        return Ok(vec![(lo.clone(), hi.clone())]);
    }
    let w = q(1, 8);
    let cuts: Vec<Q> = match cuts {
        None => ints
            .windows(2)
            .map(|pair| (&pair[0] + &pair[1]) / q(2, 1))
            .collect(),
        Some(given) => {
            if given.len() != ints.len() - 1 {
                return Err(AssemblyError::BadCuts(format!(
                    "{} cuts for {} leaves",
                    given.len(),
                    ints.len()
                )));
            }
            for (c, pair) in given.iter().zip(ints.windows(2)) {
                let margin_lo = &pair[0] + &w;
                let margin_hi = &pair[1] - &w;
                if is_integer(c) || c <= &margin_lo || c >= &margin_hi {
                    return Err(AssemblyError::BadCuts(format!(
                        "cut {} must lie in ({}, {})",
                        format_q(c),
                        format_q(&margin_lo),
                        format_q(&margin_hi)
                    )));
                }
            }
            given.to_vec()
        }
    };
    let mut pieces = Vec::new();
    let mut start = lo.clone();
    for c in &cuts {
        pieces.push((start.clone(), c + &w));
        start = c - &w;
    }
    pieces.push((start, hi.clone()));
    Ok(pieces)
}

/// Splits a pure cylinder band into overlapping sub-bands, one leaf each.
/// `bs_points` must be the band's own Bohr-Sommerfeld set (passed explicitly
/// so a caller can cross-check what it believes the leaves are). Cuts sit at
/// the half-integers.
pub fn decompose_band(band: &Band, bs_points: &[Leaf]) -> Result<BandDecomposition, AssemblyError> {
    decompose_band_at(band, bs_points, None)
}

/// Like [`decompose_band`] but with caller-chosen cut points for the first
/// axis: one non-integer rational strictly between each pair of consecutive
/// leaves, at distance more than 1/8 from any integer so the widened
/// overlaps stay leaf-free.
pub fn decompose_band_at(
    band: &Band,
    bs_points: &[Leaf],
    cuts: Option<&[Q]>,
) -> Result<BandDecomposition, AssemblyError> {
    if !band.s_radii().is_empty() {
        return Err(AssemblyError::PlaneFactors(band.s_radii().len()));
    }
    if bs_points != bs_set_in_band(band).as_slice() {
        return Err(AssemblyError::LeafMismatch);
    }
    let mut axes = Vec::new();
    for (i, (lo, hi)) in band.t_intervals().iter().enumerate() {
        let axis_cuts = if i == 0 { cuts } else { None };
        axes.push(axis_chain_with(lo, hi, axis_cuts)?);
    }
    // cartesian product of the per-axis chains, lexicographic
    let mut grids: Vec<Vec<(Q, Q)>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::new();
        for prefix in &grids {
            for iv in axis {
                let mut p = prefix.clone();
                p.push(iv.clone());
                next.push(p);
            }
        }
        grids = next;
    }
    let mut pieces = Vec::new();
    for intervals in grids {
        let piece = Band::new(intervals, vec![]).expect("sub-band intervals are valid");
        let leaves = bs_set_in_band(&piece);
        debug_assert!(leaves.len() <= 1);
        pieces.push(SubBand {
            bs_leaf: leaves.into_iter().next(),
            band: piece,
        });
    }
    // all pairwise intersections; each must be leaf-free
    let mut overlaps = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if let Some(ov) = intersect_bands(&pieces[i].band, &pieces[j].band) {
                debug_assert!(bs_set_in_band(&ov).is_empty());
                overlaps.push(ov);
            }
        }
    }
    Ok(BandDecomposition { pieces, overlaps })
}

fn intersect_bands(a: &Band, b: &Band) -> Option<Band> {
    let mut intervals = Vec::new();
    for ((alo, ahi), (blo, bhi)) in a.t_intervals().iter().zip(b.t_intervals()) {
        let lo = alo.clone().max(blo.clone());
        let hi = ahi.clone().min(bhi.clone());
        if lo >= hi {
            return None;
        }
        intervals.push((lo, hi));
    }
    Some(Band::new(intervals, vec![]).expect("nonempty intersection"))
}

/// Direct-sum reassembly: requires the overlap report to vanish in every
/// degree, then adds dimensions degree-wise and merges supports.
pub fn mv_assemble(
    left: &CohomologyReport,
    right: &CohomologyReport,
    overlap: &CohomologyReport,
) -> Result<CohomologyReport, AssemblyError> {
    if let Some((&degree, &dim)) = overlap.dims().iter().find(|(_, &d)| d > 0) {
        return Err(AssemblyError::NonAcyclicOverlap { degree, dim });
    }
    let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, v) in left.dims().iter().chain(right.dims()) {
        *dims.entry(*k).or_insert(0) += v;
    }
    let mut support: Vec<SupportPoint> = left
        .support()
        .iter()
        .chain(right.support())
        .cloned()
        .collect();
    support.sort_by(|a, b| a.param.cmp(&b.param));
    let hash = hash_description(&format!("{}+{}", left.cover_hash(), right.cover_hash()));
    Ok(CohomologyReport::new(
        dims,
        support,
        hash,
        left.param_key().to_string(),
    ))
}

/// Folds a chain of piece reports with leaf-free overlaps into one report.
pub fn assemble_chain(
    reports: &[CohomologyReport],
    zero_overlap: &CohomologyReport,
) -> Result<CohomologyReport, AssemblyError> {
    let mut iter = reports.iter();
    let Some(first) = iter.next() else {
        return Ok(zero_overlap.clone());
    };
    let mut acc = first.clone();
    for r in iter {
        acc = mv_assemble(&acc, r, zero_overlap)?;
    }
    Ok(acc)
}
