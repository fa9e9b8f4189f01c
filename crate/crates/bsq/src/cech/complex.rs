//! Pointwise evaluation of the Čech complex of a structured cover.
//!
//! Cochains valued in leafwise-flat sections reduce, after cancelling the
//! common exponential factor, to tuples of smooth functions of the action
//! parameter, and the coboundary becomes a matrix whose entries are 0, ±1
//! and ±z^w with z = e^{-2πi·param}. Freezing the parameter gives a finite
//! complex per value. The function-space cohomology in degree q is carried
//! entirely by the rank drops of the incoming coboundary: at a parameter
//! where rank δ^{q-1} falls below its generic value, each lost rank unit is
//! one obstructed cocycle class. Away from those parameters the evaluated
//! complex must be exact, which is what certifies a cover as well formed.

use super::cover::StructuredCover;
use crate::linalg::cyclotomic::{phase_element, Cyc};
use crate::linalg::ratfunc::RatFn;
use crate::linalg::{Field, Mat};
use crate::phase::UnitPhase;
use crate::rational::{format_q, is_integer, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::cell::OnceCell;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CechError {
    #[error("parameter {0} is outside the covered range")]
    ParamOutsideCover(String),
    #[error("cover does not contain the requested region: {0}")]
    RegionNotCovered(String),
    #[error(
        "generic parameter {param} has nonzero pointwise cohomology (degree {degree}, dim {dim}); the cover is malformed"
    )]
    GenericInconsistency {
        param: String,
        degree: usize,
        dim: usize,
    },
    #[error("cochain has length {got}, expected {expected}")]
    CochainShape { got: usize, expected: usize },
    #[error("input is not a cocycle at this parameter")]
    NotCocycle,
    #[error("no singular layer at parameter {0}; nothing obstructs")]
    NoObstruction(String),
    #[error("band shape mismatch: {0}")]
    BandShape(String),
    #[error(
        "support parameter {0} is flagged by the cover (leaf not confined to one layer); refusing to report an uncertified dimension"
    )]
    UncertifiedSupport(String),
}

/// A matrix entry c·z^w with c ∈ {−1, 0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mono {
    pub c: i8,
    pub w: i64,
}

impl Mono {
    pub const ZERO: Mono = Mono { c: 0, w: 0 };

    pub fn new(c: i8, w: i64) -> Self {
        if c == 0 {
            Mono::ZERO
        } else {
            Mono { c, w }
        }
    }

    fn is_zero(&self) -> bool {
        self.c == 0
    }
}

/// The complex of one cover frozen at one parameter value.
#[derive(Debug, Clone)]
pub struct PointwiseComplex {
    param: Q,
    /// Indices into the cover's element list, in cover order.
    active_elements: Vec<usize>,
    element_labels: Vec<String>,
    /// Columns of delta0: active elements with nonzero section space.
    section_columns: Vec<usize>,
    /// Indices into the cover's pair list, in cover order.
    active_pairs: Vec<usize>,
    pair_labels: Vec<String>,
    active_triples: Vec<usize>,
    triple_labels: Vec<String>,
    delta0: Vec<Vec<Mono>>,
    delta1: Vec<Vec<Mono>>,
    /// Within-layer pair positions (into the active pair list) per layer,
    /// used by the coboundary obstruction functional.
    layer_pair_positions: BTreeMap<usize, Vec<usize>>,
    rank_at_cache: [OnceCell<usize>; 2],
    rank_generic_cache: [OnceCell<usize>; 2],
}

/// Builds the complex of the cover at the given parameter: only elements
/// whose parameter interval contains it are active.
pub fn pointwise_complex<C: StructuredCover + ?Sized>(
    cover: &C,
    param: &Q,
) -> Result<PointwiseComplex, CechError> {
    if !cover.contains_param(param) {
        return Err(CechError::ParamOutsideCover(format_q(param)));
    }
    let elements = cover.elements();
    let active: Vec<usize> = (0..elements.len())
        .filter(|&i| elements[i].active_at(param))
        .collect();
    let pos_of: BTreeMap<usize, usize> = active.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let is_active = |i: usize| pos_of.contains_key(&i);

    let section_columns: Vec<usize> = active
        .iter()
        .copied()
        .filter(|&i| elements[i].has_sections)
        .collect();
    let col_of: BTreeMap<usize, usize> = section_columns
        .iter()
        .enumerate()
        .map(|(c, &i)| (i, c))
        .collect();

    let table = cover.table();
    let mut active_pairs = Vec::new();
    let mut pair_row_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (pi, p) in table.pairs.iter().enumerate() {
        if is_active(p.members.0) && is_active(p.members.1) {
            pair_row_of.insert(pi, active_pairs.len());
            active_pairs.push(pi);
        }
    }
    let mut active_triples = Vec::new();
    for (ti, t) in table.triples.iter().enumerate() {
        if is_active(t.members.0) && is_active(t.members.1) && is_active(t.members.2) {
            active_triples.push(ti);
        }
    }

    // delta0: one row per active pair
    let mut delta0 = vec![vec![Mono::ZERO; section_columns.len()]; active_pairs.len()];
    for (row, &pi) in active_pairs.iter().enumerate() {
        let p = &table.pairs[pi];
        let (v, w) = p.members;
        if let Some(&c) = col_of.get(&v) {
            delta0[row][c] = Mono::new(-1, 0);
        }
        if let Some(&c) = col_of.get(&w) {
            delta0[row][c] = Mono::new(1, p.shift_second);
        }
    }

    // delta1: one row per active triple; the sign pattern is the alternating
    // sum over omitted members, each term re-expressed in the triple's
    // reference branch
    let pair_index: BTreeMap<(usize, usize), usize> = table
        .pairs
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let (a, b) = p.members;
            ((a.min(b), a.max(b)), pi)
        })
        .collect();
    let mut delta1 = vec![vec![Mono::ZERO; active_pairs.len()]; active_triples.len()];
    for (row, &ti) in active_triples.iter().enumerate() {
        let t = &table.triples[ti];
        let members = [t.members.0, t.members.1, t.members.2];
        let shifts = [t.shifts.0, t.shifts.1, t.shifts.2];
        for omit in 0..3 {
            let kept: Vec<usize> = (0..3).filter(|&j| j != omit).collect();
            let (a, b) = (members[kept[0]], members[kept[1]]);
            let pi = *pair_index
                .get(&(a.min(b), a.max(b)))
                .expect("triple face is an enumerated pair");
            let sign = if omit == 1 { -1i8 } else { 1 };
            // branch carrier of the face: its first member, or the second
            // when the first has no angular lift (the origin element)
            let p = &table.pairs[pi];
            let carrier = if elements[p.members.0].lift.is_some() {
                p.members.0
            } else {
                p.members.1
            };
            let carrier_slot = members
                .iter()
                .position(|&m| m == carrier)
                .expect("carrier belongs to the triple");
            let w = shifts[carrier_slot];
            let col = pair_row_of[&pi];
            delta1[row][col] = Mono::new(sign, w);
        }
    }

    let mut layer_pair_positions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pos, &pi) in active_pairs.iter().enumerate() {
        let p = &table.pairs[pi];
        let (la, lb) = (elements[p.members.0].layer, elements[p.members.1].layer);
        if la == lb && elements[p.members.0].lift.is_some() {
            layer_pair_positions.entry(la).or_default().push(pos);
        }
    }
    Ok(PointwiseComplex {
        param: param.clone(),
        element_labels: active.iter().map(|&i| elements[i].label.clone()).collect(),
        active_elements: active,
        section_columns,
        pair_labels: active_pairs
            .iter()
            .map(|&pi| table.pairs[pi].label.clone())
            .collect(),
        active_pairs,
        triple_labels: active_triples
            .iter()
            .map(|&ti| table.triples[ti].label.clone())
            .collect(),
        active_triples,
        delta0,
        delta1,
        layer_pair_positions,
        rank_at_cache: [OnceCell::new(), OnceCell::new()],
        rank_generic_cache: [OnceCell::new(), OnceCell::new()],
    })
}

impl PointwiseComplex {
    pub fn param(&self) -> &Q {
        &self.param
    }

    /// z = e^{-2πi·param}, the phase appearing in the matrix entries.
    pub fn phase(&self) -> UnitPhase {
        UnitPhase::from_turns(-self.param.clone())
    }

    pub fn active_elements(&self) -> &[usize] {
        &self.active_elements
    }

    pub fn element_labels(&self) -> &[String] {
        &self.element_labels
    }

    pub fn pair_labels(&self) -> &[String] {
        &self.pair_labels
    }

    pub fn triple_labels(&self) -> &[String] {
        &self.triple_labels
    }

    /// Cochain space dimensions (|C⁰|, |C¹|, |C²|).
    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.section_columns.len(),
            self.active_pairs.len(),
            self.active_triples.len(),
        )
    }

    pub fn delta0(&self) -> &Vec<Vec<Mono>> {
        &self.delta0
    }

    pub fn delta1(&self) -> &Vec<Vec<Mono>> {
        &self.delta1
    }

    fn delta(&self, level: usize) -> Option<&Vec<Vec<Mono>>> {
        match level {
            0 => Some(&self.delta0),
            1 => Some(&self.delta1),
            _ => None,
        }
    }

    fn dim_c(&self, q: usize) -> usize {
        match q {
            0 => self.section_columns.len(),
            1 => self.active_pairs.len(),
            2 => self.active_triples.len(),
            _ => 0,
        }
    }

    fn mono_to_cyc(&self, zeta: &Cyc, m: &Mono) -> Cyc {
        if m.c == 0 {
            return zeta.zero_like();
        }
        let mut acc = zeta.one_like();
        let (base, reps) = if m.w >= 0 {
            (zeta.clone(), m.w)
        } else {
            (zeta.inv().expect("root of unity invertible"), -m.w)
        };
        for _ in 0..reps {
            acc = acc.mul(&base);
        }
        if m.c < 0 {
            acc = acc.neg();
        }
        acc
    }

    /// The coboundary at this parameter, over the cyclotomic field of
    /// z = e^{-2πi·param}.
    pub fn delta_at_param(&self, level: usize) -> Option<Mat<Cyc>> {
        let rows = self.delta(level)?;
        let zeta = phase_element(&-self.param.clone());
        let data: Vec<Vec<Cyc>> = rows
            .iter()
            .map(|r| r.iter().map(|m| self.mono_to_cyc(&zeta, m)).collect())
            .collect();
        Some(if data.is_empty() {
            Mat::zero(0, self.dim_c(level), &zeta.zero_like())
        } else {
            Mat::from_rows(data)
        })
    }

    /// The coboundary with z left as an indeterminate, over Q(z). Each row
    /// is cleared of negative powers by a unit row scaling, which preserves
    /// rank and solvability.
    pub fn delta_generic(&self, level: usize) -> Option<Mat<RatFn>> {
        let rows = self.delta(level)?;
        let data: Vec<Vec<RatFn>> = rows
            .iter()
            .map(|r| {
                let min_w = r.iter().filter(|m| !m.is_zero()).map(|m| m.w).min().unwrap_or(0);
                let shift = (-min_w).max(0);
                r.iter()
                    .map(|m| {
                        if m.is_zero() {
                            RatFn::constant(Q::zero())
                        } else {
                            let c = if m.c < 0 { -Q::one() } else { Q::one() };
                            RatFn::monomial(c, (m.w + shift) as usize)
                        }
                    })
                    .collect()
            })
            .collect();
        Some(if data.is_empty() {
            Mat::zero(0, self.dim_c(level), &RatFn::constant(Q::zero()))
        } else {
            Mat::from_rows(data)
        })
    }

    /// Float evaluation, for numeric cross-checks.
    pub fn delta_complex64(&self, level: usize) -> Option<Vec<Vec<Complex64>>> {
        let rows = self.delta(level)?;
        let z = self.phase().to_complex();
        Some(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|m| z.powi(m.w as i32) * m.c as f64)
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rank_at_param(&self, level: usize) -> usize {
        if level > 1 {
            return 0;
        }
        *self.rank_at_cache[level]
            .get_or_init(|| self.delta_at_param(level).map_or(0, |m| m.rank()))
    }

    pub fn rank_generic(&self, level: usize) -> usize {
        if level > 1 {
            return 0;
        }
        *self.rank_generic_cache[level]
            .get_or_init(|| self.delta_generic(level).map_or(0, |m| m.rank()))
    }

    /// Pre-populates the generic ranks, for drivers that memoize them per
    /// active-element configuration.
    pub fn seed_generic_ranks(&self, level0: usize, level1: usize) {
        let _ = self.rank_generic_cache[0].set(level0);
        let _ = self.rank_generic_cache[1].set(level1);
    }

    /// Dimension of H^q of the evaluated complex at this parameter
    /// (rank-nullity on the frozen matrices).
    pub fn cohomology_dim(&self, q: usize) -> usize {
        if q > 2 {
            return 0;
        }
        let n = self.dim_c(q);
        let r_out = if q < 2 { self.rank_at_param(q) } else { 0 };
        let r_in = if q > 0 { self.rank_at_param(q - 1) } else { 0 };
        n - r_out - r_in
    }

    /// Contribution of this parameter to the function-space cohomology in
    /// degree q: the rank drop of the incoming coboundary against its
    /// generic value. Degree 0 and degrees past the complex length get 0.
    pub fn contribution(&self, q: usize) -> usize {
        if q == 0 || q > 2 {
            return 0;
        }
        let level = q - 1;
        if self.delta(level).is_none_or(Vec::is_empty) {
            // an empty coboundary has rank 0 everywhere
            return 0;
        }
        self.rank_generic(level) - self.rank_at_param(level)
    }

    /// δ¹·δ⁰ = 0 as an identity in z (hence at every parameter), checked by
    /// exact symbolic expansion.
    pub fn dd_is_zero_symbolically(&self) -> bool {
        for trow in &self.delta1 {
            for col in 0..self.section_columns.len() {
                let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
                for (k, t) in trow.iter().enumerate() {
                    let d = &self.delta0[k][col];
                    if t.c == 0 || d.c == 0 {
                        continue;
                    }
                    *acc.entry(t.w + d.w).or_insert(0) += (t.c as i64) * (d.c as i64);
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Positions (into the active pair list) of the within-layer pairs of
    /// each active layer.
    pub fn layer_pair_positions(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.layer_pair_positions
    }
}

/// Total cohomology contribution of this parameter, summed over degrees.
pub fn pointwise_h<C: StructuredCover + ?Sized>(
    cover: &C,
    param: &Q,
    degree: usize,
) -> Result<usize, CechError> {
    Ok(pointwise_complex(cover, param)?.contribution(degree))
}

/// Result of trying to write a 1-cocycle as a coboundary at a parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    /// A 0-cochain whose coboundary is the input, indexed like the active
    /// elements with sections.
    Primitive(Vec<Cyc>),
    /// The value of the obstruction functional: the cyclic sum of the
    /// within-layer entries of the singular layer.
    Obstruction(Q),
}

/// Solves δ⁰·b = cocycle over the exact cyclotomic field of the parameter's
/// phase; on failure returns the obstruction functional value.
#[allow(clippy::needless_range_loop)]
pub fn coboundary_solve<C: StructuredCover + ?Sized>(
    cover: &C,
    param: &Q,
    cocycle: &[Q],
) -> Result<SolveOutcome, CechError> {
    let cx = pointwise_complex(cover, param)?;
    let (_, n1, _) = cx.dims();
    if cocycle.len() != n1 {
        return Err(CechError::CochainShape {
            got: cocycle.len(),
            expected: n1,
        });
    }
    let zeta = phase_element(&-param.clone());
    let rhs: Vec<Cyc> = cocycle.iter().map(|x| Cyc::from_q(zeta.field(), x.clone())).collect();

    if let Some(d1) = cx.delta_at_param(1) {
        if d1.rows() > 0 {
            let zero = zeta.zero_like();
            for r in 0..d1.rows() {
                let mut acc = zero.clone();
                for c in 0..d1.cols() {
                    acc = acc.add(&d1.at(r, c).mul(&rhs[c]));
                }
                if !acc.is_zero() {
                    return Err(CechError::NotCocycle);
                }
            }
        }
    }

    let d0 = cx
        .delta_at_param(0)
        .expect("level-0 coboundary always defined");
    if let Some(b) = d0.solve(&rhs) {
        return Ok(SolveOutcome::Primitive(b));
    }

    // unsolvable only at a parameter where some layer's cyclic system is
    // singular, i.e. the phase is 1 and the layer is active
    if !is_integer(param) {
        return Err(CechError::NoObstruction(format_q(param)));
    }
    // with the phase equal to 1 every active layer is singular, and the
    // warning machinery keeps integers out of layer overlaps, so the first
    // active layer carries the obstruction functional
    match cx.layer_pair_positions().values().next() {
        Some(positions) => {
            let sum: Q = positions.iter().map(|&p| cocycle[p].clone()).sum();
            Ok(SolveOutcome::Obstruction(sum))
        }
        None => Err(CechError::NoObstruction(format_q(param))),
    }
}
