//! Moment polytopes as halfspace lists and the lattice-point counts behind
//! the two quantizations: interior points for the real polarization versus
//! all points for the Kähler one.

use crate::rational::{format_q, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("polytope is unbounded (recession direction {0:?})")]
    Unbounded(Vec<i64>),
    #[error("polytope is empty or not full-dimensional")]
    NotFullDimensional,
    #[error("halfspace {index} has a {problem} normal")]
    BadNormal { index: usize, problem: &'static str },
    #[error("halfspace normal length {got} does not match dimension {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("candidate point count {0} exceeds the enumeration budget")]
    TooManyCandidates(String),
    #[error("lattice evaluation overflowed a machine integer")]
    Overflow,
}

/// One constraint ⟨u, x⟩ ≤ c with integer normal u and rational offset c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: Vec<i64>, offset: Q) -> Self {
        Halfspace { normal, offset }
    }
}

/// A convex polytope in halfspace description. Moment polytopes of toric
/// manifolds come with primitive integer normals and unimodular vertex
/// cones; those conditions are diagnosed, not assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl DelzantPolytope {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self, ToricError> {
        if dim == 0 {
            return Err(ToricError::ZeroDimension);
        }
        for (index, h) in halfspaces.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(ToricError::DimensionMismatch {
                    got: h.normal.len(),
                    expected: dim,
                });
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(ToricError::BadNormal {
                    index,
                    problem: "zero",
                });
            }
        }
        Ok(DelzantPolytope { dim, halfspaces })
    }

    /// The interval [0, k] in dimension 1.
    pub fn segment(k: i64) -> Self {
        DelzantPolytope::new(
            1,
            vec![
                Halfspace::new(vec![1], Q::from_integer(BigInt::from(k))),
                Halfspace::new(vec![-1], Q::zero()),
            ],
        )
        .expect("segment is valid")
    }

    /// The box [0, a_1] × ... × [0, a_n].
    pub fn rect_box(sides: &[i64]) -> Self {
        let n = sides.len();
        let mut hs = Vec::new();
        for (i, &a) in sides.iter().enumerate() {
            let mut up = vec![0i64; n];
            up[i] = 1;
            hs.push(Halfspace::new(up, Q::from_integer(BigInt::from(a))));
            let mut dn = vec![0i64; n];
            dn[i] = -1;
            hs.push(Halfspace::new(dn, Q::zero()));
        }
        DelzantPolytope::new(n, hs).expect("box is valid")
    }

    /// The standard dilated simplex x_i ≥ 0, Σ x_i ≤ k.
    pub fn simplex(n: usize, k: i64) -> Self {
        let mut hs = vec![Halfspace::new(
            vec![1; n],
            Q::from_integer(BigInt::from(k)),
        )];
        for i in 0..n {
            let mut dn = vec![0i64; n];
            dn[i] = -1;
            hs.push(Halfspace::new(dn, Q::zero()));
        }
        DelzantPolytope::new(n, hs).expect("simplex is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    fn eval(&self, h: &Halfspace, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (u, x) in h.normal.iter().zip(point) {
            acc += Q::from_integer(BigInt::from(*u)) * x;
        }
        acc
    }

    /// ⟨u, x⟩ compared with c at an integer point, via checked machine
    /// arithmetic against the offset's reduced numerator and denominator.
    fn classify_constraint(&self, h: &Halfspace, point: &[i64]) -> Result<Ordering, ToricError> {
        let mut dot: i128 = 0;
        for (&u, &x) in h.normal.iter().zip(point) {
            dot = dot
                .checked_add((u as i128) * (x as i128))
                .ok_or(ToricError::Overflow)?;
        }
        let num = h.offset.numer().to_i128().ok_or(ToricError::Overflow)?;
        let den = h.offset.denom().to_i128().ok_or(ToricError::Overflow)?;
        let lhs = dot.checked_mul(den).ok_or(ToricError::Overflow)?;
        Ok(lhs.cmp(&num))
    }

    /// All vertices: solutions of dim-subsets of constraints at equality
    /// that satisfy every constraint.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        let m = self.halfspaces.len();
        let mut verts: Vec<Vec<Q>> = Vec::new();
        let mut subset = vec![0usize; n];
        enumerate_subsets(m, n, &mut subset, 0, 0, &mut |chosen| {
            if let Some(p) = self.solve_equalities(chosen) {
                let feasible = self
                    .halfspaces
                    .iter()
                    .all(|h| self.eval(h, &p) <= h.offset);
                if feasible && !verts.contains(&p) {
                    verts.push(p);
                }
            }
        });
        verts.sort();
        verts
    }

    fn solve_equalities(&self, chosen: &[usize]) -> Option<Vec<Q>> {
        use crate::linalg::Mat;
        let n = self.dim;
        let rows: Vec<Vec<Q>> = chosen
            .iter()
            .map(|&i| {
                self.halfspaces[i]
                    .normal
                    .iter()
                    .map(|&u| Q::from_integer(BigInt::from(u)))
                    .collect()
            })
            .collect();
        let rhs: Vec<Q> = chosen
            .iter()
            .map(|&i| self.halfspaces[i].offset.clone())
            .collect();
        let mat = Mat::from_rows(rows);
        if mat.rank() < n {
            return None;
        }
        mat.solve(&rhs)
    }

    /// Nonzero direction d with ⟨u_i, d⟩ ≤ 0 for all i, if one exists. The
    /// polytope is bounded iff there is none.
    pub fn recession_direction(&self) -> Option<Vec<i64>> {
        let n = self.dim;
        let satisfies = |d: &[Q]| {
            self.halfspaces
                .iter()
                .all(|h| !self.eval(h, d).is_positive())
        };
        // a full kernel direction of the normal matrix recedes both ways
        if let Some(d) = self.normal_kernel_direction() {
            return Some(d);
        }
        if n == 1 {
            for d in [vec![Q::one()], vec![-Q::one()]] {
                if satisfies(&d) {
                    return Some(rational_dir_to_int(&d));
                }
            }
            return None;
        }
        // any extreme recession ray is the kernel of n−1 independent normals
        let m = self.halfspaces.len();
        let mut subset = vec![0usize; n - 1];
        let mut found: Option<Vec<i64>> = None;
        enumerate_subsets(m, n - 1, &mut subset, 0, 0, &mut |chosen| {
            if found.is_some() {
                return;
            }
            if let Some(d) = self.kernel_of_rows(chosen) {
                for cand in [d.clone(), d.iter().map(|x| -x.clone()).collect()] {
                    if satisfies(&cand) {
                        found = Some(rational_dir_to_int(&cand));
                        return;
                    }
                }
            }
        });
        found
    }

    fn normal_kernel_direction(&self) -> Option<Vec<i64>> {
        let all: Vec<usize> = (0..self.halfspaces.len()).collect();
        self.kernel_of_rows(&all).map(|d| rational_dir_to_int(&d))
    }

    /// A nonzero kernel vector of the chosen normal rows, when the kernel is
    /// one-dimensional or larger.
#[allow(clippy::needless_range_loop)]
    fn kernel_of_rows(&self, chosen: &[usize]) -> Option<Vec<Q>> {
        let n = self.dim;
        // Gaussian elimination tracking a kernel vector: append identity and
        // reduce; any free column yields a kernel direction.
        let mut rows: Vec<Vec<Q>> = chosen
            .iter()
            .map(|&i| {
                self.halfspaces[i]
                    .normal
                    .iter()
                    .map(|&u| Q::from_integer(BigInt::from(u)))
                    .collect()
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..n {
            let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = Q::one() / rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for cc in 0..n {
                        let sub = &f * &rows[r][cc];
                        rows[i][cc] -= sub;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        let free = (0..n).find(|c| !pivot_cols.contains(c))?;
        let mut d = vec![Q::zero(); n];
        d[free] = Q::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            d[pc] = -rows[ri][free].clone();
        }
        Some(d)
    }

    /// Rational point strictly inside every halfspace, if any: the vertex
    /// centroid works exactly when the polytope is full-dimensional.
    pub fn interior_point(&self) -> Option<Vec<Q>> {
        let verts = self.vertices();
        if verts.is_empty() {
            return None;
        }
        let n = self.dim;
        let count = Q::from_integer(BigInt::from(verts.len() as i64));
        let mut centroid = vec![Q::zero(); n];
        for v in &verts {
            for i in 0..n {
                centroid[i] += &v[i];
            }
        }
        for c in centroid.iter_mut() {
            *c /= &count;
        }
        let strict = self
            .halfspaces
            .iter()
            .all(|h| self.eval(h, &centroid) < h.offset);
        strict.then_some(centroid)
    }

    /// Bounded and full-dimensional, or the reason it is not.
    pub fn validate_geometry(&self) -> Result<(), ToricError> {
        if let Some(d) = self.recession_direction() {
            return Err(ToricError::Unbounded(d));
        }
        if self.interior_point().is_none() {
            return Err(ToricError::NotFullDimensional);
        }
        Ok(())
    }

    /// Integer bounding box [floor(min), ceil(max)] per coordinate, from the
    /// vertices.
    pub fn bounding_box(&self) -> Result<Vec<(i64, i64)>, ToricError> {
        self.validate_geometry()?;
        let verts = self.vertices();
        let mut out = Vec::new();
        for i in 0..self.dim {
            let lo = verts.iter().map(|v| v[i].clone()).min().unwrap().floor();
            let hi = verts.iter().map(|v| v[i].clone()).max().unwrap().ceil();
            out.push((
                lo.numer().to_i64().ok_or(ToricError::Overflow)?,
                hi.numer().to_i64().ok_or(ToricError::Overflow)?,
            ));
        }
        Ok(out)
    }
}

fn enumerate_subsets(
    m: usize,
    k: usize,
    buf: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        visit(buf);
        return;
    }
    for i in start..m {
        buf[depth] = i;
        enumerate_subsets(m, k, buf, depth + 1, i + 1, visit);
    }
}

fn rational_dir_to_int(d: &[Q]) -> Vec<i64> {
    let mut lcm = BigInt::one();
    for x in d {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = d.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if g.is_zero() {
        g = BigInt::one();
    }
    ints.iter()
        .map(|v| (v / &g).to_i64().unwrap_or(0))
        .collect()
}

/// Lattice points classified against the polytope boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeReport {
    pub interior_points: Vec<Vec<i64>>,
    pub boundary_points: Vec<Vec<i64>>,
}

impl LatticeReport {
    /// Dimension of the real-polarization quantization: interior points.
    pub fn real_dim(&self) -> usize {
        self.interior_points.len()
    }

    /// Dimension of the Kähler quantization: every lattice point.
    pub fn kahler_dim(&self) -> usize {
        self.interior_points.len() + self.boundary_points.len()
    }
}

/// Scan budget for the bounding-box enumeration.
const CANDIDATE_BUDGET: i128 = 20_000_000;

/// Scans the integer bounding box and classifies each lattice point:
/// boundary when some constraint is tight, interior when all are strict.
pub fn enumerate_lattice_points(poly: &DelzantPolytope) -> Result<LatticeReport, ToricError> {
    enumerate_lattice_points_jobs(poly, 1)
}

/// Same scan, sliced into slabs along the first coordinate and run on
/// `jobs` threads; slab results are concatenated in slab order so the
/// output is identical to the sequential scan.
pub fn enumerate_lattice_points_jobs(
    poly: &DelzantPolytope,
    jobs: usize,
) -> Result<LatticeReport, ToricError> {
    let bbox = poly.bounding_box()?;
    let mut candidates: i128 = 1;
    for (lo, hi) in &bbox {
        candidates = candidates.saturating_mul((hi - lo + 1).max(0) as i128);
    }
    if candidates > CANDIDATE_BUDGET {
        return Err(ToricError::TooManyCandidates(candidates.to_string()));
    }
    let (lo0, hi0) = bbox[0];
    let jobs = jobs.max(1).min((hi0 - lo0 + 1).max(1) as usize);
    let slab_results: Vec<Result<LatticeReport, ToricError>> = if jobs == 1 {
        vec![scan_slab(poly, &bbox, lo0, hi0)]
    } else {
        let width = (hi0 - lo0 + 1) as usize;
        let per = width.div_ceil(jobs);
        let mut ranges = Vec::new();
        let mut a = lo0;
        while a <= hi0 {
            let b = (a + per as i64 - 1).min(hi0);
            ranges.push((a, b));
            a = b + 1;
        }
        let bbox_ref = &bbox;
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(a, b)| scope.spawn(move || scan_slab(poly, bbox_ref, a, b)))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        })
    };
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    for r in slab_results {
        let r = r?;
        interior.extend(r.interior_points);
        boundary.extend(r.boundary_points);
    }
    Ok(LatticeReport {
        interior_points: interior,
        boundary_points: boundary,
    })
}

fn scan_slab(
    poly: &DelzantPolytope,
    bbox: &[(i64, i64)],
    first_lo: i64,
    first_hi: i64,
) -> Result<LatticeReport, ToricError> {
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    let mut point: Vec<i64> = bbox.iter().map(|&(lo, _)| lo).collect();
    point[0] = first_lo;
    if first_lo > first_hi {
        return Ok(LatticeReport {
            interior_points: interior,
            boundary_points: boundary,
        });
    }
    'scan: loop {
        let mut inside = true;
        let mut tight = false;
        for h in poly.halfspaces() {
            match poly.classify_constraint(h, &point)? {
                Ordering::Greater => {
                    inside = false;
                    break;
                }
                Ordering::Equal => tight = true,
                Ordering::Less => {}
            }
        }
        if inside {
            if tight {
                boundary.push(point.clone());
            } else {
                interior.push(point.clone());
            }
        }
        // odometer increment, last coordinate fastest
        for i in (0..point.len()).rev() {
            let hi = if i == 0 { first_hi } else { bbox[i].1 };
            let lo = if i == 0 { first_lo } else { bbox[i].0 };
            if point[i] < hi {
                point[i] += 1;
                continue 'scan;
            }
            point[i] = lo;
            if i == 0 {
                break 'scan;
            }
        }
    }
    Ok(LatticeReport {
        interior_points: interior,
        boundary_points: boundary,
    })
}

/// The two quantization dimensions side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantization {
    pub real_dim: usize,
    pub kahler_dim: usize,
    /// Boundary lattice points: what the Kähler count includes and the
    /// real-polarization count drops.
    pub discrepancy: usize,
}

pub fn quantize(poly: &DelzantPolytope) -> Result<Quantization, ToricError> {
    quantize_jobs(poly, 1)
}

pub fn quantize_jobs(poly: &DelzantPolytope, jobs: usize) -> Result<Quantization, ToricError> {
    let report = enumerate_lattice_points_jobs(poly, jobs)?;
    Ok(Quantization {
        real_dim: report.real_dim(),
        kahler_dim: report.kahler_dim(),
        discrepancy: report.boundary_points.len(),
    })
}

/// Structural diagnostics: primitive normals, and a unimodular set of active
/// normals at every vertex (exactly dim tight constraints whose normals have
/// determinant ±1).
pub fn delzant_validate(poly: &DelzantPolytope) -> Vec<String> {
    use crate::linalg::Mat;
    let mut out = Vec::new();
    for (i, h) in poly.halfspaces().iter().enumerate() {
        let mut g: i64 = 0;
        for &u in &h.normal {
            g = g.gcd(&u);
        }
        if g != 1 {
            out.push(format!(
                "halfspace {i} normal {:?} is not primitive (gcd {g})",
                h.normal
            ));
        }
    }
    if poly.validate_geometry().is_err() {
        out.push("polytope is not a bounded full-dimensional body".into());
        return out;
    }
    for v in poly.vertices() {
        let active: Vec<usize> = poly
            .halfspaces()
            .iter()
            .enumerate()
            .filter(|(_, h)| poly.eval(h, &v) == h.offset)
            .map(|(i, _)| i)
            .collect();
        let vstr: Vec<String> = v.iter().map(format_q).collect();
        if active.len() != poly.dim() {
            out.push(format!(
                "vertex ({}) has {} tight constraints, expected {}",
                vstr.join(", "),
                active.len(),
                poly.dim()
            ));
            continue;
        }
        let rows: Vec<Vec<Q>> = active
            .iter()
            .map(|&i| {
                poly.halfspaces()[i]
                    .normal
                    .iter()
                    .map(|&u| Q::from_integer(BigInt::from(u)))
                    .collect()
            })
            .collect();
        let det = Mat::from_rows(rows).det();
        if det != Q::one() && det != -Q::one() {
            out.push(format!(
                "vertex ({}) normal determinant is {}, not ±1",
                vstr.join(", "),
                format_q(&det)
            ));
        }
    }
    out
}
