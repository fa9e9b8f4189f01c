//! Structured covers of two-dimensional model pieces.
//!
//! A layer is an open parameter interval times a circle covered by k ≥ 3
//! arcs, each overlapping only its cyclic neighbours. Arcs are stored as
//! *lifted* angular intervals in turn units: arc i of an evenly built layer
//! covers (i/k + δ − o, (i+1)/k + δ + o), so the last arc runs past one full
//! turn and its overlap with arc 0 carries the branch jump. All double and
//! triple intersections are enumerated once at construction, each with the
//! integer branch offsets of its members, from which the coboundary entries
//! (±1 and ±z^w, z = e^{-2πi·param}) follow.

use crate::geometry::Band;
use crate::rational::{format_q, integers_in_open_interval, q, qi, Q};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("a circle layer needs at least 3 arcs, got {0}")]
    TooFewArcs(usize),
    #[error("bad arc geometry: {0}")]
    ArcGeometry(String),
    #[error("layer intervals do not cover the band: {0}")]
    DoesNotCover(String),
    #[error("bad layer structure: {0}")]
    LayerStructure(String),
    #[error("adjacent layers violate the triple-intersection rule: {0}")]
    TripleRule(String),
    #[error("bad plane cover radii: {0}")]
    PlaneRadii(String),
    #[error("cover pair {0} intersects in more than one component")]
    MultiComponentOverlap(String),
    #[error("band shape mismatch: {0}")]
    BandShape(String),
}

/// One element of a structured cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub label: String,
    pub layer: usize,
    pub index_in_layer: usize,
    /// Parameter extent (t for cylinder layers, s for plane covers).
    pub param_lo: Q,
    pub param_hi: Q,
    /// The origin disc of a plane cover includes its left endpoint s = 0.
    pub closed_left: bool,
    /// Lifted angular interval in turns; None for the origin disc.
    pub lift: Option<(Q, Q)>,
    /// The origin disc admits no nonzero flat section, so it contributes no
    /// unknown to the 0-cochains.
    pub has_sections: bool,
}

impl Element {
    pub fn active_at(&self, param: &Q) -> bool {
        let left_ok = if self.closed_left {
            param >= &self.param_lo
        } else {
            param > &self.param_lo
        };
        left_ok && param < &self.param_hi
    }
}

/// A double intersection, members in canonical written order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairData {
    pub label: String,
    pub members: (usize, usize),
    /// Branch offset of the second member relative to the first on this
    /// intersection: lift_first − lift_second, in whole turns.
    pub shift_second: i64,
}

/// A triple intersection, members in canonical written order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleData {
    pub label: String,
    pub members: (usize, usize, usize),
    /// Branch offsets relative to the reference member (the first member
    /// with a lift): lift_ref − lift_member, in whole turns.
    pub shifts: (i64, i64, i64),
}

/// Precomputed intersection combinatorics shared by all cover kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTable {
    pub pairs: Vec<PairData>,
    pub triples: Vec<TripleData>,
}

/// Common access for anything the pointwise complex builder consumes.
pub trait StructuredCover {
    fn elements(&self) -> &[Element];
    fn table(&self) -> &IntersectionTable;
    /// Full open parameter range covered (left end closed for plane covers).
    fn param_range(&self) -> (Q, Q);
    fn contains_param(&self, param: &Q) -> bool;
    fn warnings(&self) -> &[String];
    /// Parameters at which the pointwise evaluation is not certified to
    /// equal the function-space answer (the subjects of the warnings).
    fn uncertified_params(&self) -> Vec<Q>;
    /// Canonical description used for report hashing.
    fn description(&self) -> String;
}

/// ((first arc, second arc), lifted overlap region, branch offset of the
/// second arc on it).
type ArcOverlap = ((usize, usize), (Q, Q), i64);

/// (lifted region in the first arc's branch, offset of the second).
type OverlapComponent = ((Q, Q), i64);

/// (parameter interval, arc count, optional rotation, optional overlap
/// half-width).
pub type LayerSpec = ((Q, Q), usize, Option<Q>, Option<Q>);

/// A circle covered by k ≥ 3 arcs with only cyclically-adjacent overlaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleCover {
    arcs: Vec<(Q, Q)>,
}

impl CircleCover {
    /// k arcs of equal length with overlap half-width `overlap`, the whole
    /// configuration rotated by `offset` turns.
    pub fn evenly(count: usize, offset: &Q, overlap: &Q) -> Result<Self, CoverError> {
        if count < 3 {
            return Err(CoverError::TooFewArcs(count));
        }
        if !overlap.is_positive() || (overlap * qi(2)) >= (Q::one() / qi(count as i64)) {
            return Err(CoverError::ArcGeometry(format!(
                "overlap width {} incompatible with {} arcs",
                format_q(overlap),
                count
            )));
        }
        let k = qi(count as i64);
        let arcs = (0..count)
            .map(|i| {
                let lo = qi(i as i64) / &k + offset - overlap;
                let hi = qi(i as i64 + 1) / &k + offset + overlap;
                (lo, hi)
            })
            .collect();
        CircleCover::from_arcs(arcs)
    }

#[allow(clippy::needless_range_loop)]
    pub fn from_arcs(arcs: Vec<(Q, Q)>) -> Result<Self, CoverError> {
        let k = arcs.len();
        if k < 3 {
            return Err(CoverError::TooFewArcs(k));
        }
        for i in 0..k {
            if arcs[i].0 >= arcs[i].1 {
                return Err(CoverError::ArcGeometry(format!("arc {i} is empty")));
            }
        }
        let one = Q::one();
        for i in 0..k - 1 {
            if arcs[i].0 >= arcs[i + 1].0 {
                return Err(CoverError::ArcGeometry(format!(
                    "arc starts not increasing at {i}"
                )));
            }
        }
        if arcs[k - 1].0 >= &arcs[0].0 + &one {
            return Err(CoverError::ArcGeometry("arc starts exceed one turn".into()));
        }
        // consecutive arcs overlap, the last wrapping onto the first
        for i in 0..k - 1 {
            if arcs[i].1 <= arcs[i + 1].0 {
                return Err(CoverError::ArcGeometry(format!(
                    "arcs {i} and {} do not overlap",
                    i + 1
                )));
            }
        }
        if arcs[k - 1].1 <= &arcs[0].0 + &one {
            return Err(CoverError::ArcGeometry(
                "last arc does not wrap onto the first".into(),
            ));
        }
        // only cyclically adjacent arcs overlap
        for i in 0..k {
            let next2 = if i + 2 < k {
                arcs[i + 2].0.clone()
            } else {
                &arcs[i + 2 - k].0 + &one
            };
            if arcs[i].1 >= next2 {
                return Err(CoverError::ArcGeometry(format!(
                    "arc {i} reaches past its neighbour"
                )));
            }
        }
        Ok(CircleCover { arcs })
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// The adjacent pair carrying the whole-turn branch offset.
    pub fn branch_jump_index(&self) -> (usize, usize) {
        (self.arcs.len() - 1, 0)
    }

    pub fn arcs(&self) -> &[(Q, Q)] {
        &self.arcs
    }

    /// Within-layer double intersections in cyclic order (0,1), (1,2), ...,
    /// (k−1, 0); the wrap pair has branch offset 1.
    fn adjacent_overlaps(&self) -> Vec<ArcOverlap> {
        let k = self.arcs.len();
        let mut out = Vec::with_capacity(k);
        for i in 0..k - 1 {
            let region = (self.arcs[i + 1].0.clone(), self.arcs[i].1.clone());
            out.push(((i, i + 1), region, 0));
        }
        let wrap_region = (&self.arcs[0].0 + Q::one(), self.arcs[k - 1].1.clone());
        out.push(((k - 1, 0), wrap_region, 1));
        out
    }
}

/// Intersection of two lifted arcs on the circle. Returns the region in the
/// first arc's lift together with the branch offset of the second
/// (lift_first − lift_second, whole turns), or an error when the arcs meet
/// in more than one component.
fn circle_intersection(
    a: &(Q, Q),
    b: &(Q, Q),
    context: &str,
) -> Result<Option<OverlapComponent>, CoverError> {
    let mut found: Option<((Q, Q), i64)> = None;
    for s in [-2i64, -1, 0, 1, 2] {
        let lo = a.0.clone().max(&b.0 + qi(s));
        let hi = a.1.clone().min(&b.1 + qi(s));
        if lo < hi {
            if found.is_some() {
                return Err(CoverError::MultiComponentOverlap(context.to_string()));
            }
            found = Some(((lo, hi), s));
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub interval: (Q, Q),
    pub circle: CircleCover,
    pub offset: Q,
}

/// A layered cover of a band (or annulus): consecutive layers overlap in the
/// parameter, each layer covers the circle by arcs, and the within-layer
/// overlaps of adjacent layers avoid each other so intersections are at
/// worst triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickWallCover {
    layers: Vec<Layer>,
    elements: Vec<Element>,
    table: IntersectionTable,
    warnings: Vec<String>,
    uncertified: Vec<Q>,
}

fn layer_letter(layer: usize) -> String {
    let letters = [
        "A", "B", "C", "D", "L", "M", "N", "P", "R", "S", "T", "U", "V", "W",
    ];
    letters
        .get(layer)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("L{layer}"))
}

fn brick_label(layers: &[Layer], layer: usize, index: usize) -> String {
    if layers.len() == 1 {
        // single-layer covers read like the classic three-arc cover E, F, G
        let letters = ["E", "F", "G", "H", "I", "J", "K", "L"];
        if layers[0].circle.arc_count() <= letters.len() {
            return letters[index].to_string();
        }
        return format!("E{}", index + 1);
    }
    format!("{}{}", layer_letter(layer), index + 1)
}

impl BrickWallCover {
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self, CoverError> {
        if layers.is_empty() {
            return Err(CoverError::LayerStructure("no layers".into()));
        }
        for (i, l) in layers.iter().enumerate() {
            if l.interval.0 >= l.interval.1 {
                return Err(CoverError::LayerStructure(format!(
                    "layer {i} interval is empty"
                )));
            }
        }
        for i in 0..layers.len() - 1 {
            let (a, b) = (&layers[i], &layers[i + 1]);
            if b.interval.0 <= a.interval.0
                || b.interval.1 <= a.interval.1
                || b.interval.0 >= a.interval.1
            {
                return Err(CoverError::LayerStructure(format!(
                    "layers {i} and {} must overlap in a proper open interval",
                    i + 1
                )));
            }
        }
        for i in 0..layers.len().saturating_sub(2) {
            if layers[i].interval.1 >= layers[i + 2].interval.0 {
                return Err(CoverError::LayerStructure(format!(
                    "non-consecutive layers {i} and {} meet",
                    i + 2
                )));
            }
        }
        // adjacent layers: within-layer overlap arcs must be disjoint on the
        // circle, otherwise a quadruple intersection appears
        for i in 0..layers.len() - 1 {
            for (pa, ra, _) in layers[i].circle.adjacent_overlaps() {
                for (pb, rb, _) in layers[i + 1].circle.adjacent_overlaps() {
                    let ctx = format!("layers {i}/{} pairs {pa:?}/{pb:?}", i + 1);
                    if circle_intersection(&ra, &rb, &ctx)?.is_some() {
                        return Err(CoverError::TripleRule(ctx));
                    }
                }
            }
        }

        let mut warnings = Vec::new();
        let mut uncertified = Vec::new();
        for i in 0..layers.len() - 1 {
            let lo = layers[i + 1].interval.0.clone();
            let hi = layers[i].interval.1.clone();
            for m in integers_in_open_interval(&lo, &hi) {
                warnings.push(format!(
                    "integer parameter {} lies in the overlap of layers {} and {}; \
                     pointwise evaluation there is not certified",
                    format_q(&m),
                    i,
                    i + 1
                ));
                uncertified.push(m);
            }
        }

        let mut elements = Vec::new();
        for (li, l) in layers.iter().enumerate() {
            for (ai, arc) in l.circle.arcs().iter().enumerate() {
                elements.push(Element {
                    label: brick_label(&layers, li, ai),
                    layer: li,
                    index_in_layer: ai,
                    param_lo: l.interval.0.clone(),
                    param_hi: l.interval.1.clone(),
                    closed_left: false,
                    lift: Some(arc.clone()),
                    has_sections: true,
                });
            }
        }
        let table = build_table(&elements)?;
        Ok(BrickWallCover {
            layers,
            elements,
            table,
            warnings,
            uncertified,
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Indices of layers whose interval contains the parameter.
    pub fn active_layers(&self, param: &Q) -> Vec<usize> {
        self.layers
            .iter()
            .enumerate()
            .filter(|(_, l)| &l.interval.0 < param && param < &l.interval.1)
            .map(|(i, _)| i)
            .collect()
    }

    /// Element indices of one layer, in arc order.
    pub fn layer_elements(&self, layer: usize) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.layer == layer)
            .map(|(i, _)| i)
            .collect()
    }
}

impl StructuredCover for BrickWallCover {
    fn elements(&self) -> &[Element] {
        &self.elements
    }

    fn table(&self) -> &IntersectionTable {
        &self.table
    }

    fn param_range(&self) -> (Q, Q) {
        (
            self.layers.first().unwrap().interval.0.clone(),
            self.layers.last().unwrap().interval.1.clone(),
        )
    }

    fn contains_param(&self, param: &Q) -> bool {
        self.layers
            .iter()
            .any(|l| &l.interval.0 < param && param < &l.interval.1)
    }

    fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn uncertified_params(&self) -> Vec<Q> {
        self.uncertified.clone()
    }

    fn description(&self) -> String {
        let mut s = String::from("wall");
        for l in &self.layers {
            s.push_str(&format!(
                ";{},{},{},{}",
                format_q(&l.interval.0),
                format_q(&l.interval.1),
                l.circle.arc_count(),
                format_q(&l.offset)
            ));
        }
        s
    }
}

/// Default overlap half-widths and rotational offsets for a stack of layers:
/// layer ℓ+1 is rotated backwards by half the overlap-grid spacing
/// 1/lcm(k_ℓ, k_{ℓ+1}) so its cut lines interleave with layer ℓ's, and
/// overlap widths are small enough to keep the interleaving strict.
fn layer_geometry(arc_counts: &[usize]) -> Vec<(Q, Q)> {
    let n = arc_counts.len();
    let mut out = Vec::with_capacity(n);
    let mut offset = Q::zero();
    for i in 0..n {
        let mut scale = arc_counts[i] as i64;
        if i > 0 {
            scale = scale.max((arc_counts[i - 1] as i64).lcm(&(arc_counts[i] as i64)));
        }
        if i + 1 < n {
            scale = scale.max((arc_counts[i] as i64).lcm(&(arc_counts[i + 1] as i64)));
        }
        let overlap = q(1, 8 * scale);
        if i > 0 {
            let l = (arc_counts[i - 1] as i64).lcm(&(arc_counts[i] as i64));
            offset -= q(1, 2 * l);
        }
        out.push((offset.clone(), overlap));
    }
    out
}

/// Single-layer cover of a cylinder band by k ≥ 3 arcs with one branch jump.
pub fn build_ek_cover(k: usize, band: &Band) -> Result<BrickWallCover, CoverError> {
    let interval = band
        .single_interval()
        .map_err(|e| CoverError::BandShape(e.to_string()))?;
    single_layer_cover(k, interval)
}

/// Single-layer cover of an arbitrary open parameter interval.
pub fn single_layer_cover(k: usize, interval: (Q, Q)) -> Result<BrickWallCover, CoverError> {
    let geo = layer_geometry(&[k]);
    let circle = CircleCover::evenly(k, &geo[0].0, &geo[0].1)?;
    BrickWallCover::from_layers(vec![Layer {
        interval,
        circle,
        offset: geo[0].0.clone(),
    }])
}

/// Layered cover of a band from (interval, arc count) specs. Intervals must
/// overlap consecutively and their union must contain the band's interval.
pub fn build_brick_wall(
    band: &Band,
    layer_spec: &[((Q, Q), usize)],
) -> Result<BrickWallCover, CoverError> {
    let interval = band
        .single_interval()
        .map_err(|e| CoverError::BandShape(e.to_string()))?;
    let wall = build_wall_over_interval(layer_spec)?;
    let (lo, hi) = wall.param_range();
    if lo > interval.0 || hi < interval.1 {
        return Err(CoverError::DoesNotCover(format!(
            "({}, {}) versus band ({}, {})",
            format_q(&lo),
            format_q(&hi),
            format_q(&interval.0),
            format_q(&interval.1)
        )));
    }
    Ok(wall)
}

/// Layered cover of whatever interval the specs span.
pub fn build_wall_over_interval(
    layer_spec: &[((Q, Q), usize)],
) -> Result<BrickWallCover, CoverError> {
    let specs: Vec<LayerSpec> = layer_spec
        .iter()
        .map(|(iv, k)| (iv.clone(), *k, None, None))
        .collect();
    cover_from_layer_specs(&specs)
}

/// Wall from per-layer specs with optional explicit rotational offsets and
/// overlap half-widths; omitted values fall back to the interleaving scheme.
pub fn cover_from_layer_specs(specs: &[LayerSpec]) -> Result<BrickWallCover, CoverError> {
    if specs.is_empty() {
        return Err(CoverError::LayerStructure("no layers".into()));
    }
    let counts: Vec<usize> = specs.iter().map(|s| s.1).collect();
    let geo = layer_geometry(&counts);
    let mut layers = Vec::new();
    for (i, (interval, k, offset, overlap)) in specs.iter().enumerate() {
        let offset = offset.clone().unwrap_or_else(|| geo[i].0.clone());
        let overlap = overlap.clone().unwrap_or_else(|| geo[i].1.clone());
        let circle = CircleCover::evenly(*k, &offset, &overlap)?;
        layers.push(Layer {
            interval: interval.clone(),
            circle,
            offset,
        });
    }
    BrickWallCover::from_layers(layers)
}

/// A disc about the origin covered by one origin disc element plus a ring of
/// arcs. The origin element has zero-dimensional section space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCover {
    disc_radius: Q,
    ring_interval: (Q, Q),
    ring: CircleCover,
    elements: Vec<Element>,
    table: IntersectionTable,
    warnings: Vec<String>,
    uncertified: Vec<Q>,
}

impl PlaneCover {
    /// Cover of the open disc {s < radius}: origin element of radius
    /// min(5/8·radius, 4/5) and a ring of `arcs` arcs from half that out to
    /// `radius`. The origin element stays inside s = 1 so every positive
    /// integer circle lies in ring-only territory.
    pub fn build(radius: &Q, arcs: usize) -> Result<Self, CoverError> {
        if !radius.is_positive() {
            return Err(CoverError::PlaneRadii(format!(
                "radius {} not positive",
                format_q(radius)
            )));
        }
        let r_a = (radius * q(5, 8)).min(q(4, 5));
        let r0 = &r_a / qi(2);
        PlaneCover::build_explicit(&r0, &r_a, radius, arcs)
    }

    /// Explicit radii: origin element covers [0, disc_radius), ring covers
    /// (ring_lo, ring_hi).
    pub fn build_explicit(
        ring_lo: &Q,
        disc_radius: &Q,
        ring_hi: &Q,
        arcs: usize,
    ) -> Result<Self, CoverError> {
        if !ring_lo.is_positive() || ring_lo >= disc_radius || ring_lo >= ring_hi {
            return Err(CoverError::PlaneRadii(format!(
                "need 0 < ring_lo < disc_radius and ring_lo < ring_hi, got {}, {}, {}",
                format_q(ring_lo),
                format_q(disc_radius),
                format_q(ring_hi)
            )));
        }
        let geo = layer_geometry(&[arcs]);
        let ring = CircleCover::evenly(arcs, &geo[0].0, &geo[0].1)?;

        let outer = disc_radius.clone().max(ring_hi.clone());
        let mut warnings = Vec::new();
        let mut uncertified = Vec::new();
        let mut m = Q::one();
        while m < outer {
            if &m <= disc_radius {
                warnings.push(format!(
                    "Bohr-Sommerfeld circle s = {} is not confined to the ring; \
                     pointwise evaluation there is not certified",
                    format_q(&m)
                ));
                uncertified.push(m.clone());
            }
            m += Q::one();
        }

        let mut elements = vec![Element {
            label: "A".into(),
            layer: 0,
            index_in_layer: 0,
            param_lo: Q::zero(),
            param_hi: disc_radius.clone(),
            closed_left: true,
            lift: None,
            has_sections: false,
        }];
        let ring_letters = ["E", "F", "G", "H", "I", "J", "K", "L"];
        for (ai, arc) in ring.arcs().iter().enumerate() {
            let label = ring_letters
                .get(ai)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("E{}", ai + 1))
                .to_string();
            elements.push(Element {
                label,
                layer: 1,
                index_in_layer: ai,
                param_lo: ring_lo.clone(),
                param_hi: ring_hi.clone(),
                closed_left: false,
                lift: Some(arc.clone()),
                has_sections: true,
            });
        }
        let table = build_table(&elements)?;
        Ok(PlaneCover {
            disc_radius: disc_radius.clone(),
            ring_interval: (ring_lo.clone(), ring_hi.clone()),
            ring,
            elements,
            table,
            warnings,
            uncertified,
        })
    }

    pub fn disc_radius(&self) -> &Q {
        &self.disc_radius
    }

    pub fn ring_interval(&self) -> &(Q, Q) {
        &self.ring_interval
    }

    pub fn ring(&self) -> &CircleCover {
        &self.ring
    }
}

impl StructuredCover for PlaneCover {
    fn elements(&self) -> &[Element] {
        &self.elements
    }

    fn table(&self) -> &IntersectionTable {
        &self.table
    }

    fn param_range(&self) -> (Q, Q) {
        (
            Q::zero(),
            self.disc_radius.clone().max(self.ring_interval.1.clone()),
        )
    }

    fn contains_param(&self, param: &Q) -> bool {
        !param.is_negative() && param < &self.param_range().1
    }

    fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn uncertified_params(&self) -> Vec<Q> {
        self.uncertified.clone()
    }

    fn description(&self) -> String {
        format!(
            "plane;{},{},{},{}",
            format_q(&self.ring_interval.0),
            format_q(&self.disc_radius),
            format_q(&self.ring_interval.1),
            self.ring.arc_count()
        )
    }
}

/// Enumerate all double and triple intersections of the element list.
///
/// Pairs: within a layer, cyclically adjacent arcs (the wrap pair written
/// last-first); across consecutive layers, every angularly overlapping pair
/// written lower layer first; the sectionless origin element meets every
/// ring arc. Triples: a within-layer pair joined by one element of an
/// adjacent layer (or by the origin element).
fn build_table(elements: &[Element]) -> Result<IntersectionTable, CoverError> {
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        while layers.len() <= e.layer {
            layers.push(Vec::new());
        }
        layers[e.layer].push(i);
    }
    let label_of = |m: &[usize]| -> String {
        m.iter()
            .map(|&i| elements[i].label.clone())
            .collect::<Vec<_>>()
            .join("")
    };

    let mut pairs: Vec<PairData> = Vec::new();
    let mut triples: Vec<TripleData> = Vec::new();

    // pairs and triples are grouped by the lower layer of the pair
    for li in 0..layers.len() {
        let idxs = &layers[li];
        let lifted_layer = idxs.iter().all(|&i| elements[i].lift.is_some());
        // within-layer adjacencies
        let mut within: Vec<ArcOverlap> = Vec::new();
        if lifted_layer && idxs.len() >= 3 {
            let arcs: Vec<(Q, Q)> = idxs
                .iter()
                .map(|&i| elements[i].lift.clone().unwrap())
                .collect();
            let circle = CircleCover { arcs };
            for ((a, b), region, shift) in circle.adjacent_overlaps() {
                within.push(((idxs[a], idxs[b]), region, shift));
            }
        }
        for ((a, b), _, shift) in &within {
            pairs.push(PairData {
                label: label_of(&[*a, *b]),
                members: (*a, *b),
                shift_second: *shift,
            });
        }

        if li + 1 < layers.len() {
            let next = &layers[li + 1];
            // cross pairs, lower layer first
            for &a in idxs {
                for &b in next {
                    match (&elements[a].lift, &elements[b].lift) {
                        (None, Some(_)) => {
                            // origin element meets every ring arc
                            pairs.push(PairData {
                                label: label_of(&[a, b]),
                                members: (a, b),
                                shift_second: 0,
                            });
                        }
                        (Some(la), Some(lb)) => {
                            let ctx = label_of(&[a, b]);
                            if let Some((_, s)) = circle_intersection(la, lb, &ctx)? {
                                pairs.push(PairData {
                                    label: ctx,
                                    members: (a, b),
                                    shift_second: s,
                                });
                            }
                        }
                        _ => {
                            return Err(CoverError::LayerStructure(
                                "sectionless element above layer 0".into(),
                            ))
                        }
                    }
                }
            }
            // triples: a within-layer pair of this layer with an element of
            // the next, or a within-layer pair of the next with one of this
            let mut push_triple = |ordered: [usize; 3],
                                   shifts: [i64; 3]|
             -> Result<(), CoverError> {
                // normalize offsets to the first lifted member
                let reference = (0..3)
                    .find(|&j| elements[ordered[j]].lift.is_some())
                    .expect("triple has a lifted member");
                let base = shifts[reference];
                let shifts = (
                    shifts[0] - base,
                    shifts[1] - base,
                    shifts[2] - base,
                );
                triples.push(TripleData {
                    label: label_of(&ordered),
                    members: (ordered[0], ordered[1], ordered[2]),
                    shifts,
                });
                Ok(())
            };

            for ((a, b), region, shift) in &within {
                for &c in next {
                    match &elements[c].lift {
                        None => unreachable!("origin element is in layer 0"),
                        Some(lc) => {
                            let ctx = label_of(&[*a, *b, c]);
                            if let Some((_, sc)) = circle_intersection(region, lc, &ctx)? {
                                push_triple([*a, *b, c], [0, *shift, sc])?;
                            }
                        }
                    }
                }
            }
            if next.len() >= 3 {
                let arcs: Vec<(Q, Q)> = next
                    .iter()
                    .map(|&i| elements[i].lift.clone().unwrap())
                    .collect();
                let next_circle = CircleCover { arcs };
                for ((a, b), region, shift) in next_circle.adjacent_overlaps() {
                    let (na, nb) = (next[a], next[b]);
                    for &c in idxs {
                        match &elements[c].lift {
                            None => {
                                // origin element joins every ring adjacency
                                push_triple([c, na, nb], [0, 0, shift])?;
                            }
                            Some(lc) => {
                                let ctx = label_of(&[c, na, nb]);
                                // region relative to the pair's first member
                                if let Some((_, sc)) =
                                    circle_intersection(&region, lc, &ctx)?
                                {
                                    // shifts relative to c after reorder
                                    push_triple([c, na, nb], [sc, 0, shift])?;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(IntersectionTable { pairs, triples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn band(lo: Q, hi: Q) -> Band {
        Band::cylinder(lo, hi).unwrap()
    }

    #[test]
    fn ek_cover_structure() {
        let c = build_ek_cover(3, &band(q(3, 2), q(5, 2))).unwrap();
        let labels: Vec<&str> = c.elements().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["E", "F", "G"]);
        let pair_labels: Vec<&str> =
            c.table().pairs.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(pair_labels, ["EF", "FG", "GE"]);
        // the wrap pair carries the branch jump
        assert_eq!(c.table().pairs[2].shift_second, 1);
        assert_eq!(c.table().pairs[0].shift_second, 0);
        assert!(c.table().triples.is_empty());
        assert!(c.warnings().is_empty());
    }

    #[test]
    fn ek_counts() {
        // combinatorial count oracle: k arcs, k doubles, 0 triples
        for k in 3..=8 {
            let c = build_ek_cover(k, &band(q(1, 10), q(9, 10))).unwrap();
            assert_eq!(c.elements().len(), k);
            assert_eq!(c.table().pairs.len(), k);
            assert_eq!(c.table().triples.len(), 0);
        }
    }

    #[test]
    fn too_few_arcs_rejected() {
        assert!(matches!(
            build_ek_cover(2, &band(qi(0), qi(1))),
            Err(CoverError::TooFewArcs(2))
        ));
    }

    #[test]
    fn two_layer_wall_counts() {
        // m arcs + n arcs: m+n cross doubles and m+n triples
        let b = band(q(1, 2), q(5, 2));
        let wall = build_brick_wall(
            &b,
            &[((q(1, 2), q(7, 4)), 3), ((q(3, 2), q(5, 2)), 4)],
        )
        .unwrap();
        assert_eq!(wall.elements().len(), 7);
        let cross = wall
            .table()
            .pairs
            .iter()
            .filter(|p| {
                wall.elements()[p.members.0].layer != wall.elements()[p.members.1].layer
            })
            .count();
        assert_eq!(cross, 7);
        assert_eq!(wall.table().triples.len(), 7);
        // within-layer doubles: 3 + 4
        assert_eq!(wall.table().pairs.len(), 3 + 4 + 7);
        assert!(wall.warnings().is_empty());
    }

    #[test]
    fn degenerate_wall_equals_ek() {
        let b = band(q(3, 2), q(5, 2));
        let wall = build_brick_wall(&b, &[((q(3, 2), q(5, 2)), 3)]).unwrap();
        let ek = build_ek_cover(3, &b).unwrap();
        assert_eq!(wall, ek);
    }

    #[test]
    fn non_covering_wall_rejected() {
        let b = band(qi(0), qi(3));
        let r = build_brick_wall(&b, &[((qi(0), qi(1)), 3), ((q(3, 4), qi(2)), 3)]);
        assert!(matches!(r, Err(CoverError::DoesNotCover(_))));
    }

    #[test]
    fn bs_in_layer_overlap_warns() {
        let b = band(q(1, 2), q(5, 2));
        let wall = build_brick_wall(
            &b,
            &[((q(1, 2), q(9, 8)), 3), ((q(7, 8), q(5, 2)), 3)],
        )
        .unwrap();
        // integer 1 lies in the overlap (7/8, 9/8)
        assert_eq!(wall.warnings().len(), 1);
        assert!(wall.warnings()[0].contains("1"));
    }

    #[test]
    fn three_layer_wall_counts_by_scan() {
        // membership-scan oracle: sample the rectangle on a fine grid and
        // collect which element sets actually occur
        let b = band(qi(0), qi(3));
        let wall = build_brick_wall(
            &b,
            &[
                ((qi(0), q(9, 8)), 3),
                ((qi(1), q(17, 8)), 4),
                ((qi(2), qi(3)), 5),
            ],
        )
        .unwrap();
        use std::collections::BTreeSet;
        let mut seen_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut seen_triples: BTreeSet<Vec<usize>> = BTreeSet::new();
        // f64 raster is fine here: every arc endpoint is a rational with a
        // small denominator, far from the sample points
        let lifts: Vec<Option<(f64, f64)>> = wall
            .elements()
            .iter()
            .map(|e| {
                e.lift.as_ref().map(|(lo, hi)| {
                    (crate::rational::q_to_f64(lo), crate::rational::q_to_f64(hi))
                })
            })
            .collect();
        let steps = 401i64;
        for ti in 0..steps {
            let t = qi(3) * q(2 * ti + 1, 2 * steps);
            let active_t: Vec<usize> = (0..wall.elements().len())
                .filter(|&ei| wall.elements()[ei].active_at(&t))
                .collect();
            for ai in 0..steps {
                let angle = (2 * ai + 1) as f64 / (2 * steps) as f64;
                let mut active = Vec::new();
                for &ei in &active_t {
                    let (lo, hi) = lifts[ei].unwrap();
                    let inside = [-2.0f64, -1.0, 0.0, 1.0, 2.0]
                        .iter()
                        .any(|s| lo < angle + s && angle + s < hi);
                    if inside {
                        active.push(ei);
                    }
                }
                assert!(
                    !active.is_empty() && active.len() <= 3,
                    "cover violates at-worst-triple at t={t:?} angle={angle:?}: {active:?}"
                );
                if active.len() == 2 {
                    seen_pairs.insert((active[0], active[1]));
                }
                if active.len() == 3 {
                    seen_triples.insert(active);
                }
            }
        }
        let declared_pairs: BTreeSet<(usize, usize)> = wall
            .table()
            .pairs
            .iter()
            .map(|p| {
                let (a, b) = p.members;
                (a.min(b), a.max(b))
            })
            .collect();
        let declared_triples: BTreeSet<Vec<usize>> = wall
            .table()
            .triples
            .iter()
            .map(|t| {
                let mut v = vec![t.members.0, t.members.1, t.members.2];
                v.sort();
                v
            })
            .collect();
        assert_eq!(seen_pairs, declared_pairs);
        assert_eq!(seen_triples, declared_triples);
    }

    #[test]
    fn plane_cover_structure() {
        let c = PlaneCover::build(&q(4, 5), 3).unwrap();
        let labels: Vec<&str> = c.elements().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, ["A", "E", "F", "G"]);
        let pair_labels: Vec<&str> =
            c.table().pairs.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(pair_labels, ["AE", "AF", "AG", "EF", "FG", "GE"]);
        let triple_labels: Vec<&str> =
            c.table().triples.iter().map(|t| t.label.as_str()).collect();
        assert_eq!(triple_labels, ["AEF", "AFG", "AGE"]);
        assert!(c.warnings().is_empty());
    }

    #[test]
    fn plane_cover_counts() {
        // ring of 4: 4+4 doubles, 4 triples
        let c = PlaneCover::build(&q(4, 5), 4).unwrap();
        assert_eq!(c.table().pairs.len(), 8);
        assert_eq!(c.table().triples.len(), 4);
    }

    #[test]
    fn plane_cover_flags_unconfined_bs() {
        // ring (9/10, 7/5) inside an origin element of radius 3/2
        let c = PlaneCover::build_explicit(&q(9, 10), &q(3, 2), &q(7, 5), 3).unwrap();
        assert_eq!(c.warnings().len(), 1);
        assert!(c.warnings()[0].contains("s = 1"));
        // default construction keeps integers ring-only
        let c = PlaneCover::build(&q(5, 2), 3).unwrap();
        assert!(c.warnings().is_empty());
    }
}
