//! Per-degree cohomology dimensions with their supporting parameters.
//!
//! A band's cohomology is assembled as a finitely supported sum over the
//! integer parameters it contains: each contributes the rank drop of the
//! pointwise coboundary there. Generic rational parameters are sampled and
//! required to have exact pointwise complexes, certifying the cover.

use super::complex::{pointwise_complex, CechError};
use super::cover::StructuredCover;
use crate::geometry::Band;
use crate::rational::{format_q, integers_in_open_interval, is_integer, q, Q};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Sampling policy for the generic-parameter certification.
#[derive(Debug, Clone)]
pub struct SampleOpts {
    /// Evenly spaced probes per unit interval (midpoint-aligned).
    pub samples_per_unit: u32,
}

impl Default for SampleOpts {
    fn default() -> Self {
        SampleOpts { samples_per_unit: 5 }
    }
}

/// One parameter value supporting cohomology, with its pointwise dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPoint {
    pub param: Vec<Q>,
    pub dim: usize,
}

/// Per-degree dimensions, the parameters carrying them, and a hash of the
/// cover that produced the numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    dims: BTreeMap<usize, usize>,
    support: Vec<SupportPoint>,
    cover_hash: String,
    param_key: String,
}

impl CohomologyReport {
    pub fn new(
        mut dims: BTreeMap<usize, usize>,
        support: Vec<SupportPoint>,
        cover_hash: String,
        param_key: impl Into<String>,
    ) -> Self {
        // normalize: degrees 0..=max(1, top nonzero) always present
        let top = dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&q, _)| q)
            .max()
            .unwrap_or(1)
            .max(1);
        dims.retain(|&k, _| k <= top);
        for k in 0..=top {
            dims.entry(k).or_insert(0);
        }
        CohomologyReport {
            dims,
            support,
            cover_hash,
            param_key: param_key.into(),
        }
    }

    pub fn zero(cover_hash: String, param_key: impl Into<String>) -> Self {
        CohomologyReport::new(BTreeMap::new(), Vec::new(), cover_hash, param_key)
    }

    pub fn dims(&self) -> &BTreeMap<usize, usize> {
        &self.dims
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn support(&self) -> &[SupportPoint] {
        &self.support
    }

    pub fn cover_hash(&self) -> &str {
        &self.cover_hash
    }

    pub fn param_key(&self) -> &str {
        &self.param_key
    }

    pub fn is_zero(&self) -> bool {
        self.dims.values().all(|&d| d == 0)
    }

    /// Same dimensions and same supporting parameters; the covers that
    /// produced the two reports may differ.
    pub fn same_cohomology(&self, other: &CohomologyReport) -> bool {
        self.dims == other.dims && self.support == other.support
    }
}

/// FNV-1a of the cover description: stable across runs and builds.
pub fn hash_description(desc: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in desc.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

fn generic_samples(lo: &Q, hi: &Q, opts: &SampleOpts, skip: &BTreeSet<Q>) -> Vec<Q> {
    let mut out: BTreeSet<Q> = BTreeSet::new();
    let width = hi - lo;
    // midpoints between consecutive integers
    let ints = integers_in_open_interval(lo, hi);
    for w in ints.windows(2) {
        out.insert((&w[0] + &w[1]) / q(2, 1));
    }
    // endpoint probes within 1/7 of each end. The simplest rational in the
    // window is used so the probe's denominator stays small regardless of
    // the endpoint's: exact evaluation stays in a small cyclotomic field.
    let offset = q(1, 7).min(&width / q(4, 1));
    for window in [(lo.clone(), lo + &offset), (hi - &offset, hi.clone())] {
        if let Some(p) = crate::rational::simplest_between(&window.0, &window.1) {
            if is_integer(&p) {
                // probe on the non-integer side of it instead
                for half in [(window.0.clone(), p.clone()), (p.clone(), window.1.clone())] {
                    if let Some(p2) = crate::rational::simplest_between(&half.0, &half.1) {
                        out.insert(p2);
                    }
                }
            } else {
                out.insert(p);
            }
        }
    }
    // midpoint-aligned grid anchored at the integers, so grid samples have
    // denominator exactly 2 · samples_per_unit
    let spu = opts.samples_per_unit.max(1) as i64;
    let step = q(1, spu);
    let mut x = lo.floor() + &step / q(2, 1);
    while &x < hi {
        if &x > lo {
            out.insert(x.clone());
        }
        x += &step;
    }
    out.into_iter()
        .filter(|x| lo < x && x < hi && !is_integer(x) && !skip.contains(x))
        .collect()
}

/// Shared driver: contributions at the given support parameters, exactness
/// at generic samples in (lo, hi).
fn cohomology_over_interval<C: StructuredCover + ?Sized>(
    cover: &C,
    lo: &Q,
    hi: &Q,
    support_params: &[Q],
    opts: &SampleOpts,
    param_key: &str,
) -> Result<CohomologyReport, CechError> {
    // generic ranks depend only on which elements are active, so memoize
    // them across all evaluated parameters
    let mut generic_memo: std::collections::HashMap<Vec<usize>, [usize; 2]> =
        std::collections::HashMap::new();
    let mut complex_at = |p: &Q| -> Result<crate::cech::PointwiseComplex, CechError> {
        let cx = pointwise_complex(cover, p)?;
        let key = cx.active_elements().to_vec();
        match generic_memo.get(&key) {
            Some(ranks) => cx.seed_generic_ranks(ranks[0], ranks[1]),
            None => {
                generic_memo.insert(key, [cx.rank_generic(0), cx.rank_generic(1)]);
            }
        }
        Ok(cx)
    };

    let uncertified = cover.uncertified_params();
    let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
    let mut support = Vec::new();
    for p in support_params {
        if uncertified.contains(p) {
            return Err(CechError::UncertifiedSupport(format_q(p)));
        }
        let cx = complex_at(p)?;
        let mut total = 0;
        for deg in 0..=2 {
            let c = cx.contribution(deg);
            if c > 0 {
                *dims.entry(deg).or_insert(0) += c;
                total += c;
            }
        }
        if total > 0 {
            support.push(SupportPoint {
                param: vec![p.clone()],
                dim: total,
            });
        }
    }
    let skip: BTreeSet<Q> = support_params.iter().cloned().collect();
    for sample in generic_samples(lo, hi, opts, &skip) {
        let cx = complex_at(&sample)?;
        for deg in 0..=2 {
            let d = cx.cohomology_dim(deg);
            if d != 0 {
                return Err(CechError::GenericInconsistency {
                    param: format_q(&sample),
                    degree: deg,
                    dim: d,
                });
            }
        }
    }
    Ok(CohomologyReport::new(
        dims,
        support,
        hash_description(&cover.description()),
        param_key,
    ))
}

/// Cohomology of a cylinder band (m = 1, k = 0) with respect to a layered
/// cover: each integer t in the band contributes its pointwise rank drop,
/// and all generic samples must be exact.
pub fn band_cohomology<C: StructuredCover + ?Sized>(
    band: &Band,
    cover: &C,
    opts: &SampleOpts,
) -> Result<CohomologyReport, CechError> {
    let (lo, hi) = band
        .single_interval()
        .map_err(|e| CechError::BandShape(e.to_string()))?;
    let (clo, chi) = cover.param_range();
    if clo > lo || chi < hi {
        return Err(CechError::RegionNotCovered(format!(
            "cover spans ({}, {}), band needs ({}, {})",
            format_q(&clo),
            format_q(&chi),
            format_q(&lo),
            format_q(&hi)
        )));
    }
    let ints = integers_in_open_interval(&lo, &hi);
    cohomology_over_interval(cover, &lo, &hi, &ints, opts, "t")
}

/// Cohomology of an annulus 0 < inner < s < outer with respect to a layered
/// cover in the s parameter.
pub fn annulus_cohomology<C: StructuredCover + ?Sized>(
    inner: &Q,
    outer: &Q,
    cover: &C,
    opts: &SampleOpts,
) -> Result<CohomologyReport, CechError> {
    if !inner.is_positive() || inner >= outer {
        return Err(CechError::BandShape(format!(
            "annulus needs 0 < inner < outer, got ({}, {})",
            format_q(inner),
            format_q(outer)
        )));
    }
    let (clo, chi) = cover.param_range();
    if &clo > inner || &chi < outer {
        return Err(CechError::RegionNotCovered(format!(
            "cover spans ({}, {}), annulus needs ({}, {})",
            format_q(&clo),
            format_q(&chi),
            format_q(inner),
            format_q(outer)
        )));
    }
    let ints = integers_in_open_interval(inner, outer);
    cohomology_over_interval(cover, inner, outer, &ints, opts, "s")
}

/// Cohomology of the full disc covered by an origin element plus a ring.
/// The support candidates are the positive integer circles; the origin
/// never contributes (the origin element has no sections, so no rank can
/// drop there).
pub fn disc_cohomology<C: StructuredCover + ?Sized>(
    cover: &C,
    opts: &SampleOpts,
) -> Result<CohomologyReport, CechError> {
    let (lo, hi) = cover.param_range();
    debug_assert!(lo.is_zero());
    let mut candidates = Vec::new();
    let mut m = Q::one();
    while m < hi {
        candidates.push(m.clone());
        m += Q::one();
    }
    cohomology_over_interval(cover, &lo, &hi, &candidates, opts, "s")
}
