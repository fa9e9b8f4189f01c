//! Model spaces, bands, leaves and the holonomy calculus of the canonical
//! connection.
//!
//! The model is (R×S¹)^m × C^k. Cylinder factors carry coordinates (t, θ),
//! plane factors carry (s, φ) with s the action coordinate (half the squared
//! radius), so the symplectic form is Σ dt∧dθ + Σ ds∧dφ and the connection
//! potential is Θ = Σ t dθ + Σ s dφ. Angles are stored as rational *turns*
//! (multiples of 2π) carrying their branch, which makes holonomy along
//! piecewise-linear loops an exact rational computation: hol = e^{2πi·W} with
//! W = Σ mean(t)·Δθ + Σ mean(s)·Δφ in turn units.

use crate::phase::UnitPhase;
use crate::rational::{
    format_q, integers_in_open_interval, is_integer, nonneg_integers_below, q, q_to_f64, Q,
};
use num_traits::{Signed, Zero};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("model space must have at least one factor")]
    EmptyModel,
    #[error("band shape mismatch: {0}")]
    BandShape(String),
    #[error("interval ({0}, {1}) is empty")]
    EmptyInterval(String, String),
    #[error("radius {0} is not positive")]
    NonPositiveRadius(String),
    #[error("leaf has negative plane coordinate {0}")]
    NegativePlaneCoordinate(String),
    #[error("loop must have at least two points")]
    TooFewPoints,
    #[error("loop is not closed: {0}")]
    NotClosed(String),
    #[error("loop point shape mismatch at index {0}")]
    PointShape(usize),
    #[error("gauge is branch-inconsistent on the loop (mismatch {0:.3e})")]
    GaugeBranch(f64),
    #[error("surface boundary does not match the loop")]
    BoundaryMismatch,
}

/// The product model (R×S¹)^m × C^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpace {
    num_cylinder: usize,
    num_plane: usize,
}

impl ModelSpace {
    pub fn new(num_cylinder: usize, num_plane: usize) -> Result<Self, GeometryError> {
        if num_cylinder + num_plane == 0 {
            return Err(GeometryError::EmptyModel);
        }
        Ok(ModelSpace {
            num_cylinder,
            num_plane,
        })
    }

    pub fn num_cylinder(&self) -> usize {
        self.num_cylinder
    }

    pub fn num_plane(&self) -> usize {
        self.num_plane
    }

    /// Real dimension of the model, 2(m + k).
    pub fn dimension(&self) -> usize {
        2 * (self.num_cylinder + self.num_plane)
    }
}

/// An open band: a product of open t-intervals (one per cylinder factor)
/// times a product of discs {s < radius} about the origin (one per plane
/// factor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    t_intervals: Vec<(Q, Q)>,
    s_radii: Vec<Q>,
}

impl Band {
    pub fn new(t_intervals: Vec<(Q, Q)>, s_radii: Vec<Q>) -> Result<Self, GeometryError> {
        if t_intervals.is_empty() && s_radii.is_empty() {
            return Err(GeometryError::EmptyModel);
        }
        for (lo, hi) in &t_intervals {
            if lo >= hi {
                return Err(GeometryError::EmptyInterval(format_q(lo), format_q(hi)));
            }
        }
        for r in &s_radii {
            if !r.is_positive() {
                return Err(GeometryError::NonPositiveRadius(format_q(r)));
            }
        }
        Ok(Band {
            t_intervals,
            s_radii,
        })
    }

    /// Cylinder band with a single t-interval.
    pub fn cylinder(lo: Q, hi: Q) -> Result<Self, GeometryError> {
        Band::new(vec![(lo, hi)], vec![])
    }

    pub fn model(&self) -> ModelSpace {
        ModelSpace {
            num_cylinder: self.t_intervals.len(),
            num_plane: self.s_radii.len(),
        }
    }

    pub fn t_intervals(&self) -> &[(Q, Q)] {
        &self.t_intervals
    }

    pub fn s_radii(&self) -> &[Q] {
        &self.s_radii
    }

    /// The unique t-interval of a pure cylinder band with m = 1.
    pub fn single_interval(&self) -> Result<(Q, Q), GeometryError> {
        if self.t_intervals.len() == 1 && self.s_radii.is_empty() {
            Ok(self.t_intervals[0].clone())
        } else {
            Err(GeometryError::BandShape(format!(
                "expected m=1, k=0 cylinder band, got m={}, k={}",
                self.t_intervals.len(),
                self.s_radii.len()
            )))
        }
    }

    pub fn contains_leaf(&self, leaf: &Leaf) -> bool {
        leaf.t.len() == self.t_intervals.len()
            && leaf.s.len() == self.s_radii.len()
            && leaf
                .t
                .iter()
                .zip(&self.t_intervals)
                .all(|(t, (lo, hi))| lo < t && t < hi)
            && leaf.s.iter().zip(&self.s_radii).all(|(s, r)| s < r)
    }
}

/// A leaf of the polarization: the torus at fixed (t, s).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leaf {
    t: Vec<Q>,
    s: Vec<Q>,
}

impl Leaf {
    pub fn new(t: Vec<Q>, s: Vec<Q>) -> Result<Self, GeometryError> {
        for sj in &s {
            if sj.is_negative() {
                return Err(GeometryError::NegativePlaneCoordinate(format_q(sj)));
            }
        }
        Ok(Leaf { t, s })
    }

    pub fn t(&self) -> &[Q] {
        &self.t
    }

    pub fn s(&self) -> &[Q] {
        &self.s
    }

    /// A leaf is singular when some plane factor degenerates (s_j = 0);
    /// there the fibre torus loses a circle factor.
    pub fn is_singular(&self) -> bool {
        self.s.iter().any(Zero::is_zero)
    }

    /// Dimension of the torus: m plus one circle per nonzero s.
    pub fn dimension(&self) -> usize {
        self.t.len() + self.s.iter().filter(|s| !s.is_zero()).count()
    }

    /// Trivial holonomy around every fundamental cycle.
    pub fn is_bohr_sommerfeld(&self) -> bool {
        holonomy_generators(self).iter().all(UnitPhase::is_one)
    }
}

/// All leaves in the band whose holonomy generators are trivial:
/// integer t in each interval, nonnegative integer s below each radius.
/// Ordered lexicographically; singularity is read off the leaf itself.
pub fn bs_set_in_band(band: &Band) -> Vec<Leaf> {
    let mut axes: Vec<Vec<Q>> = Vec::new();
    for (lo, hi) in band.t_intervals() {
        axes.push(integers_in_open_interval(lo, hi));
    }
    for r in band.s_radii() {
        axes.push(nonneg_integers_below(r));
    }
    let m = band.t_intervals().len();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Q>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::new();
        for prefix in &stack {
            for v in axis {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        stack = next;
    }
    if axes.is_empty() {
        return out;
    }
    for coords in stack {
        let (t, s) = coords.split_at(m);
        out.push(Leaf {
            t: t.to_vec(),
            s: s.to_vec(),
        });
    }
    out
}

/// Holonomy around the fundamental cycles of the leaf: e^{2πi·t_j} for each
/// cylinder factor and e^{2πi·s_j} for each plane factor with s_j > 0.
pub fn holonomy_generators(leaf: &Leaf) -> Vec<UnitPhase> {
    let mut out: Vec<UnitPhase> = leaf
        .t
        .iter()
        .map(|t| UnitPhase::from_turns(t.clone()))
        .collect();
    for s in &leaf.s {
        if !s.is_zero() {
            out.push(UnitPhase::from_turns(s.clone()));
        }
    }
    out
}

/// A point of the model in lifted coordinates: angles are rational turns with
/// branch included (two points on the same fibre may differ by whole turns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopPoint {
    pub t: Vec<Q>,
    pub theta: Vec<Q>,
    pub s: Vec<Q>,
    pub phi: Vec<Q>,
}

impl LoopPoint {
    pub fn cylinder1(t: Q, theta: Q) -> Self {
        LoopPoint {
            t: vec![t],
            theta: vec![theta],
            s: vec![],
            phi: vec![],
        }
    }

    pub fn plane1(s: Q, phi: Q) -> Self {
        LoopPoint {
            t: vec![],
            theta: vec![],
            s: vec![s],
            phi: vec![phi],
        }
    }

    fn same_shape(&self, other: &LoopPoint) -> bool {
        self.t.len() == other.t.len()
            && self.theta.len() == other.theta.len()
            && self.s.len() == other.s.len()
            && self.phi.len() == other.phi.len()
    }

    /// Equal as points of the manifold: all coordinates agree and the angle
    /// branches differ by whole turns.
    fn same_manifold_point(&self, other: &LoopPoint) -> bool {
        self.same_shape(other)
            && self.t == other.t
            && self.s == other.s
            && self
                .theta
                .iter()
                .zip(&other.theta)
                .all(|(a, b)| is_integer(&(a - b)))
            && self
                .phi
                .iter()
                .zip(&other.phi)
                .all(|(a, b)| is_integer(&(a - b)))
    }
}

/// A closed piecewise-linear loop in lifted coordinates. The final point must
/// project to the same manifold point as the first; any whole-turn angle
/// differences are the loop's winding numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteLoop {
    points: Vec<LoopPoint>,
}

impl DiscreteLoop {
    pub fn closed(points: Vec<LoopPoint>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewPoints);
        }
        let first = &points[0];
        for (i, p) in points.iter().enumerate() {
            if !p.same_shape(first) {
                return Err(GeometryError::PointShape(i));
            }
        }
        let last = points.last().unwrap();
        if !first.same_manifold_point(last) {
            return Err(GeometryError::NotClosed(
                "first and last points differ".into(),
            ));
        }
        Ok(DiscreteLoop { points })
    }

    pub fn points(&self) -> &[LoopPoint] {
        &self.points
    }

    /// Whole-turn angle offsets accumulated around the loop.
    pub fn winding(&self) -> (Vec<Q>, Vec<Q>) {
        let first = &self.points[0];
        let last = self.points.last().unwrap();
        let theta = last
            .theta
            .iter()
            .zip(&first.theta)
            .map(|(a, b)| a - b)
            .collect();
        let phi = last
            .phi
            .iter()
            .zip(&first.phi)
            .map(|(a, b)| a - b)
            .collect();
        (theta, phi)
    }

    /// Zero winding: the loop is null-homotopic (it closes up in the lifted
    /// coordinate space, which is contractible).
    pub fn is_contractible(&self) -> bool {
        let (th, ph) = self.winding();
        th.iter().all(Zero::is_zero) && ph.iter().all(Zero::is_zero)
    }

    fn segments(&self) -> impl Iterator<Item = (&LoopPoint, &LoopPoint)> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }
}

/// A single-valued smooth function evaluated pointwise along loops, used as
/// the exact perturbation dG of the potential (equivalently as the gauge
/// ψ = e^{iG} of a trivialization change).
pub struct GaugeFunction {
    f: Box<dyn Fn(&LoopPoint) -> f64>,
}

impl GaugeFunction {
    pub fn new(f: impl Fn(&LoopPoint) -> f64 + 'static) -> Self {
        GaugeFunction { f: Box::new(f) }
    }

    pub fn eval(&self, p: &LoopPoint) -> f64 {
        (self.f)(p)
    }
}

/// ∮Θ along the loop, in turn units (divide the actual line integral by 2π).
/// Exact: on a linear segment ∫ t dθ = mean(t)·Δθ.
pub fn holonomy_turns(lp: &DiscreteLoop) -> Q {
    let mut total = Q::zero();
    for (a, b) in lp.segments() {
        for j in 0..a.t.len() {
            let mean = (&a.t[j] + &b.t[j]) / q(2, 1);
            total += mean * (&b.theta[j] - &a.theta[j]);
        }
        for j in 0..a.s.len() {
            let mean = (&a.s[j] + &b.s[j]) / q(2, 1);
            total += mean * (&b.phi[j] - &a.phi[j]);
        }
    }
    total
}

/// exp(i ∮ Θ'), Θ' = Θ + dG when a gauge is supplied. The canonical part is
/// exact; the dG part telescopes through the pointwise gauge values and must
/// return to its starting value on a closed loop (branch consistency),
/// checked against `tol`.
pub fn holonomy_along_loop(
    lp: &DiscreteLoop,
    gauge: Option<&GaugeFunction>,
    tol: f64,
) -> Result<num_complex::Complex64, GeometryError> {
    let base = UnitPhase::from_turns(holonomy_turns(lp));
    let mut correction = 0.0;
    if let Some(g) = gauge {
        let mut acc = 0.0;
        for (a, b) in lp.segments() {
            acc += g.eval(b) - g.eval(a);
        }
        // single-valued gauge: the telescoped integral of dG vanishes
        if acc.abs() > tol {
            return Err(GeometryError::GaugeBranch(acc.abs()));
        }
        correction = acc;
    }
    let rot = num_complex::Complex64::new(0.0, correction).exp();
    Ok(base.to_complex() * rot)
}

/// Exact holonomy phase of the canonical connection (no gauge).
pub fn holonomy_phase(lp: &DiscreteLoop) -> UnitPhase {
    UnitPhase::from_turns(holonomy_turns(lp))
}

/// An oriented triangle in lifted coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle(pub [LoopPoint; 3]);

impl Triangle {
    /// Symplectic area in turn units: Σ_j ½(Δ₁t_j·Δ₂θ_j − Δ₂t_j·Δ₁θ_j) plus
    /// the plane-factor analogue.
    pub fn symplectic_area_turns(&self) -> Q {
        let [p0, p1, p2] = &self.0;
        let mut area = Q::zero();
        for j in 0..p0.t.len() {
            let d1t = &p1.t[j] - &p0.t[j];
            let d2t = &p2.t[j] - &p0.t[j];
            let d1h = &p1.theta[j] - &p0.theta[j];
            let d2h = &p2.theta[j] - &p0.theta[j];
            area += (d1t * d2h - d2t * d1h) / q(2, 1);
        }
        for j in 0..p0.s.len() {
            let d1s = &p1.s[j] - &p0.s[j];
            let d2s = &p2.s[j] - &p0.s[j];
            let d1p = &p1.phi[j] - &p0.phi[j];
            let d2p = &p2.phi[j] - &p0.phi[j];
            area += (d1s * d2p - d2s * d1p) / q(2, 1);
        }
        area
    }
}

/// A triangulated surface in lifted coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningSurface {
    triangles: Vec<Triangle>,
}

impl SpanningSurface {
    pub fn new(triangles: Vec<Triangle>) -> Self {
        SpanningSurface { triangles }
    }

    /// Fan over the loop from its first vertex; boundary is the loop.
    pub fn fan(lp: &DiscreteLoop) -> Result<Self, GeometryError> {
        if !lp.is_contractible() {
            return Err(GeometryError::BoundaryMismatch);
        }
        let pts = lp.points();
        let base = pts[0].clone();
        let mut triangles = Vec::new();
        for w in pts.windows(2) {
            triangles.push(Triangle([base.clone(), w[0].clone(), w[1].clone()]));
        }
        Ok(SpanningSurface { triangles })
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn total_area_turns(&self) -> Q {
        let mut area = Q::zero();
        for t in &self.triangles {
            area += t.symplectic_area_turns();
        }
        area
    }

    /// The 1-chain boundary: directed edges with opposite pairs cancelled.
    fn boundary_edges(&self) -> Vec<(LoopPoint, LoopPoint)> {
        let mut edges: Vec<(LoopPoint, LoopPoint)> = Vec::new();
        for tri in &self.triangles {
            let [a, b, c] = &tri.0;
            for (from, to) in [(a, b), (b, c), (c, a)] {
                if from == to {
                    continue; // degenerate edge carries no boundary
                }
                if let Some(i) = edges.iter().position(|(f, t)| f == to && t == from) {
                    edges.remove(i);
                } else {
                    edges.push((from.clone(), to.clone()));
                }
            }
        }
        edges
    }

    /// Boundary equals the loop, as directed edge multisets.
    pub fn bounds(&self, lp: &DiscreteLoop) -> bool {
        let mut loop_edges: Vec<(LoopPoint, LoopPoint)> = Vec::new();
        for w in lp.points().windows(2) {
            if w[0] == w[1] {
                continue;
            }
            if let Some(i) = loop_edges
                .iter()
                .position(|(f, t)| f == &w[1] && t == &w[0])
            {
                loop_edges.remove(i);
            } else {
                loop_edges.push((w[0].clone(), w[1].clone()));
            }
        }
        let mut bd = self.boundary_edges();
        if bd.len() != loop_edges.len() {
            return false;
        }
        for e in loop_edges {
            if let Some(i) = bd.iter().position(|x| *x == e) {
                bd.remove(i);
            } else {
                return false;
            }
        }
        bd.is_empty()
    }
}

/// exp(i ∬ ω) over a surface spanning the loop; Stokes makes this the
/// holonomy for contractible loops.
pub fn holonomy_via_area(
    lp: &DiscreteLoop,
    surface: &SpanningSurface,
) -> Result<UnitPhase, GeometryError> {
    if !surface.bounds(lp) {
        return Err(GeometryError::BoundaryMismatch);
    }
    Ok(UnitPhase::from_turns(surface.total_area_turns()))
}

/// Which coordinate plane an axis-aligned rectangle sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RectPlane {
    /// (t_j, θ_j) plane of cylinder factor j.
    Cylinder(usize),
    /// (s_j, φ_j) plane of plane factor j.
    Plane(usize),
}

/// An axis-aligned rectangle [a0, a1] × [b0, b1] in a single coordinate
/// plane, all other coordinates held at the base point.
#[derive(Debug, Clone)]
pub struct CoordRectangle {
    pub plane: RectPlane,
    pub action_range: (Q, Q),
    /// Angular range in turns.
    pub angle_range: (Q, Q),
    pub base: LoopPoint,
}

impl CoordRectangle {
    fn corner(&self, action: &Q, angle: &Q) -> LoopPoint {
        let mut p = self.base.clone();
        match self.plane {
            RectPlane::Cylinder(j) => {
                p.t[j] = action.clone();
                p.theta[j] = angle.clone();
            }
            RectPlane::Plane(j) => {
                p.s[j] = action.clone();
                p.phi[j] = angle.clone();
            }
        }
        p
    }

    /// The counterclockwise boundary loop.
    pub fn boundary(&self) -> DiscreteLoop {
        let (a0, a1) = &self.action_range;
        let (b0, b1) = &self.angle_range;
        DiscreteLoop::closed(vec![
            self.corner(a0, b0),
            self.corner(a1, b0),
            self.corner(a1, b1),
            self.corner(a0, b1),
            self.corner(a0, b0),
        ])
        .expect("rectangle boundary closes")
    }

    /// Flat spanning surface (two triangles).
    pub fn flat_surface(&self) -> SpanningSurface {
        let (a0, a1) = &self.action_range;
        let (b0, b1) = &self.angle_range;
        let p00 = self.corner(a0, b0);
        let p10 = self.corner(a1, b0);
        let p11 = self.corner(a1, b1);
        let p01 = self.corner(a0, b1);
        SpanningSurface::new(vec![
            Triangle([p00.clone(), p10.clone(), p11.clone()]),
            Triangle([p00, p11, p01]),
        ])
    }

    /// Signed symplectic area ∬ω in turn units: Δaction · Δangle.
    pub fn area_turns(&self) -> Q {
        let (a0, a1) = &self.action_range;
        let (b0, b1) = &self.angle_range;
        (a1 - a0) * (b1 - b0)
    }
}

/// Stokes residual |∮Θ' − ∬ω| for an axis-aligned rectangle, where
/// Θ' = Θ + dG when a gauge is supplied. The canonical part cancels exactly;
/// the gauge line integral is accumulated by trapezoidal sampling of G at
/// `subdivisions` points per edge.
pub fn curvature_residual(
    rect: &CoordRectangle,
    gauge: Option<&GaugeFunction>,
    subdivisions: usize,
) -> f64 {
    let boundary = rect.boundary();
    let circulation = TAU * q_to_f64(&holonomy_turns(&boundary));
    let area = TAU * q_to_f64(&rect.area_turns());
    let mut gauge_part = 0.0;
    if let Some(g) = gauge {
        let n = subdivisions.max(1);
        for w in boundary.points().windows(2) {
            let mut prev = g.eval(&w[0]);
            for i in 1..=n {
                let lam = q(i as i64, n as i64);
                let p = lerp_point(&w[0], &w[1], &lam);
                let cur = g.eval(&p);
                gauge_part += cur - prev;
                prev = cur;
            }
        }
    }
    (circulation + gauge_part - area).abs()
}

fn lerp_point(a: &LoopPoint, b: &LoopPoint, lam: &Q) -> LoopPoint {
    let l = |x: &Q, y: &Q| x + (y - x) * lam;
    LoopPoint {
        t: a.t.iter().zip(&b.t).map(|(x, y)| l(x, y)).collect(),
        theta: a.theta.iter().zip(&b.theta).map(|(x, y)| l(x, y)).collect(),
        s: a.s.iter().zip(&b.s).map(|(x, y)| l(x, y)).collect(),
        phi: a.phi.iter().zip(&b.phi).map(|(x, y)| l(x, y)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use num_complex::Complex64;

    fn band1(lo: Q, hi: Q) -> Band {
        Band::cylinder(lo, hi).unwrap()
    }

    #[test]
    fn bs_set_cylinder_interval() {
        // integers in (3/2, 7/2): 2 and 3, both nonsingular
        let leaves = bs_set_in_band(&band1(q(3, 2), q(7, 2)));
        assert_eq!(leaves.len(), 2);
        assert_eq!(leaves[0].t(), &[qi(2)]);
        assert_eq!(leaves[1].t(), &[qi(3)]);
        assert!(leaves.iter().all(|l| !l.is_singular()));
    }

    #[test]
    fn bs_set_plane_disc() {
        // disc of radius 5/2: s = 0 (singular), 1, 2
        let band = Band::new(vec![], vec![q(5, 2)]).unwrap();
        let leaves = bs_set_in_band(&band);
        assert_eq!(leaves.len(), 3);
        assert_eq!(leaves[0].s(), &[qi(0)]);
        assert!(leaves[0].is_singular());
        assert_eq!(leaves[0].dimension(), 0);
        assert!(!leaves[1].is_singular());
        assert!(!leaves[2].is_singular());
        assert_eq!(leaves[2].dimension(), 1);
    }

    #[test]
    fn bs_set_empty() {
        assert!(bs_set_in_band(&band1(q(1, 10), q(9, 10))).is_empty());
    }

    #[test]
    fn bs_set_matches_grid_scan() {
        // oracle: scan the integer bounding box and test membership per point
        let band = Band::new(vec![(q(-5, 2), q(3, 2))], vec![q(7, 4)]).unwrap();
        let leaves = bs_set_in_band(&band);
        let mut expected = Vec::new();
        for t in -10..=10i64 {
            for s in 0..=10i64 {
                let leaf = Leaf::new(vec![qi(t)], vec![qi(s)]).unwrap();
                if band.contains_leaf(&leaf) {
                    expected.push(leaf);
                }
            }
        }
        assert_eq!(leaves, expected);
        assert_eq!(leaves.len(), 4 * 2); // t in {-2,-1,0,1}, s in {0,1}
    }

    #[test]
    fn generators_and_bs_predicate() {
        let l = Leaf::new(vec![qi(2)], vec![]).unwrap();
        let g = holonomy_generators(&l);
        assert_eq!(g.len(), 1);
        assert!(g[0].is_one());
        assert!(l.is_bohr_sommerfeld());

        let l = Leaf::new(vec![q(1, 2)], vec![]).unwrap();
        let g = holonomy_generators(&l);
        assert!((g[0].to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(!l.is_bohr_sommerfeld());

        // s = 3 > 0 contributes a generator; both trivial
        let l = Leaf::new(vec![qi(1)], vec![qi(3)]).unwrap();
        let g = holonomy_generators(&l);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(UnitPhase::is_one));

        // singular leaf: s = 0 contributes no generator
        let l = Leaf::new(vec![], vec![qi(0)]).unwrap();
        assert!(holonomy_generators(&l).is_empty());
        assert!(l.is_bohr_sommerfeld());
        assert!(l.is_singular());
    }

    fn full_revolution_loop(t: Q) -> DiscreteLoop {
        DiscreteLoop::closed(vec![
            LoopPoint::cylinder1(t.clone(), qi(0)),
            LoopPoint::cylinder1(t.clone(), q(1, 3)),
            LoopPoint::cylinder1(t.clone(), q(2, 3)),
            LoopPoint::cylinder1(t, qi(1)),
        ])
        .unwrap()
    }

    #[test]
    fn loop_holonomy_closed_form() {
        // constant t = 1/2, one revolution: e^{iπ} = -1
        let lp = full_revolution_loop(q(1, 2));
        assert_eq!(holonomy_turns(&lp), q(1, 2));
        let h = holonomy_along_loop(&lp, None, 1e-10).unwrap();
        assert!((h - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        // t = 0: trivial
        let lp = full_revolution_loop(qi(0));
        assert!(holonomy_phase(&lp).is_one());

        // quadrature oracle: finely sampled f64 integral of t dθ
        let lp = full_revolution_loop(q(1, 2));
        let mut acc = 0.0;
        for w in lp.points().windows(2) {
            let n = 64;
            for i in 0..n {
                let lam0 = q(i, n);
                let lam1 = q(i + 1, n);
                let p0 = lerp_point(&w[0], &w[1], &lam0);
                let p1 = lerp_point(&w[0], &w[1], &lam1);
                let tm = 0.5 * (q_to_f64(&p0.t[0]) + q_to_f64(&p1.t[0]));
                acc += tm * TAU * (q_to_f64(&p1.theta[0]) - q_to_f64(&p0.theta[0]));
            }
        }
        assert!((acc - TAU * 0.5).abs() < 1e-9);
    }

    #[test]
    fn gauge_leaves_holonomy_unchanged() {
        let lp = full_revolution_loop(q(1, 2));
        // single-valued gauge: depends on the angle only through its image on S¹
        let g = GaugeFunction::new(|p: &LoopPoint| {
            let th = TAU * q_to_f64(&p.theta[0]);
            0.7 * th.sin() + 0.3 * q_to_f64(&p.t[0])
        });
        let with = holonomy_along_loop(&lp, Some(&g), 1e-9).unwrap();
        let without = holonomy_along_loop(&lp, None, 1e-9).unwrap();
        assert!((with - without).norm() < 1e-12);

        // branch-inconsistent "gauge" (linear in the lifted angle) errors
        let bad = GaugeFunction::new(|p: &LoopPoint| q_to_f64(&p.theta[0]));
        assert!(matches!(
            holonomy_along_loop(&lp, Some(&bad), 1e-9),
            Err(GeometryError::GaugeBranch(_))
        ));
    }

    #[test]
    fn non_closed_loop_rejected() {
        let r = DiscreteLoop::closed(vec![
            LoopPoint::cylinder1(qi(0), qi(0)),
            LoopPoint::cylinder1(qi(1), q(1, 2)),
        ]);
        assert!(matches!(r, Err(GeometryError::NotClosed(_))));
    }

    fn rect(t0: Q, t1: Q, turns: Q) -> CoordRectangle {
        CoordRectangle {
            plane: RectPlane::Cylinder(0),
            action_range: (t0, t1),
            angle_range: (qi(0), turns),
            base: LoopPoint::cylinder1(qi(0), qi(0)),
        }
    }

    #[test]
    fn area_holonomy_matches_loop_holonomy() {
        // rectangle (0,0) to (1/2, 2π): area π, holonomy -1 both ways
        let r = rect(qi(0), q(1, 2), qi(1));
        let lp = r.boundary();
        let via_area = holonomy_via_area(&lp, &r.flat_surface()).unwrap();
        assert_eq!(via_area.turns(), &q(1, 2));
        assert_eq!(holonomy_turns(&lp), q(1, 2));
        assert!((via_area.to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        // area 2π: trivial holonomy
        let r = rect(qi(0), qi(1), qi(1));
        let lp = r.boundary();
        let via_area = holonomy_via_area(&lp, &r.flat_surface()).unwrap();
        assert!(via_area.is_one());
        // brute-force area summation oracle
        let brute: Q = r
            .flat_surface()
            .triangles()
            .iter()
            .map(Triangle::symplectic_area_turns)
            .sum();
        assert_eq!(brute, qi(1));
    }

    #[test]
    fn degenerate_surface_is_trivial() {
        let p = LoopPoint::cylinder1(qi(0), qi(0));
        let lp = DiscreteLoop::closed(vec![p.clone(), p.clone(), p.clone()]).unwrap();
        let surf = SpanningSurface::new(vec![]);
        let h = holonomy_via_area(&lp, &surf).unwrap();
        assert!(h.is_one());
    }

    #[test]
    fn boundary_mismatch_rejected() {
        let r = rect(qi(0), q(1, 2), qi(1));
        let other = rect(qi(0), q(1, 3), qi(1));
        assert!(matches!(
            holonomy_via_area(&r.boundary(), &other.flat_surface()),
            Err(GeometryError::BoundaryMismatch)
        ));
    }

    #[test]
    fn stokes_residual_vanishes() {
        let r = rect(qi(0), q(1, 2), qi(1));
        assert_eq!(curvature_residual(&r, None, 8), 0.0);

        // (s,φ) rectangle [1,2] × [0,π]
        let r = CoordRectangle {
            plane: RectPlane::Plane(0),
            action_range: (qi(1), qi(2)),
            angle_range: (qi(0), q(1, 2)),
            base: LoopPoint::plane1(qi(1), qi(0)),
        };
        assert_eq!(curvature_residual(&r, None, 8), 0.0);

        // gauge perturbation dG: closed form unchanged, quadrature below 1e-10
        let g = GaugeFunction::new(|p: &LoopPoint| {
            let ph = TAU * q_to_f64(&p.phi[0]);
            0.5 * ph.cos() * q_to_f64(&p.s[0])
        });
        assert!(curvature_residual(&r, Some(&g), 64) < 1e-10);
    }
}
