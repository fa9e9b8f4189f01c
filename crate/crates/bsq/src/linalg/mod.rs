//! Exact linear algebra over pluggable fields.
//!
//! Rank, solve and determinant by plain Gaussian elimination; the matrices in
//! this crate are small (tens of rows), so exactness beats asymptotics.

pub mod cyclotomic;
pub mod poly;
pub mod ratfunc;

use crate::rational::Q;
use num_traits::{One, Zero};

/// Field operations, instance-based so elements can carry their field
/// (cyclotomic elements know their conductor).
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// None for zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
}

impl Field for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(Q::one() / self.clone())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Dense row-major matrix. Zero rows or columns are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged matrix");
        }
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize, exemplar: &F) -> Self {
        Mat {
            rows,
            cols,
            data: vec![exemplar.zero_like(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn mul_mat(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let exemplar = self
            .data
            .first()
            .or_else(|| other.data.first())
            .expect("cannot multiply empty matrices without an exemplar");
        let mut out = Mat::zero(self.rows, other.cols, exemplar);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j).add(&a.mul(other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row echelon reduction in place; returns pivot column indices.
    fn echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let pivot_inv = self.at(row, col).inv().expect("nonzero pivot");
            for r in (row + 1)..self.rows {
                if self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).mul(&pivot_inv);
                for c in col..self.cols {
                    let v = self.at(r, c).sub(&factor.mul(self.at(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelon().len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// One solution of self·x = rhs with free variables set to zero,
    /// or None when inconsistent.
#[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        let exemplar = self.data.first().or_else(|| rhs.first())?;
        let zero = exemplar.zero_like();
        // augmented elimination
        let mut work = Mat {
            rows: self.rows,
            cols: self.cols + 1,
            data: {
                let mut d = Vec::with_capacity(self.rows * (self.cols + 1));
                for r in 0..self.rows {
                    d.extend(self.data[r * self.cols..(r + 1) * self.cols].iter().cloned());
                    d.push(rhs[r].clone());
                }
                d
            },
        };
        let pivots = work.echelon();
        // inconsistent iff a pivot landed in the rhs column
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![zero; self.cols];
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = work.at(i, self.cols).clone();
            for c in (pc + 1)..self.cols {
                acc = acc.sub(&work.at(i, c).mul(&x[c]));
            }
            x[pc] = acc.mul(&work.at(i, pc).inv().expect("pivot"));
        }
        Some(x)
    }

    /// Determinant of a square matrix with at least one entry.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        assert!(self.rows > 0, "determinant of empty matrix");
        let mut work = self.clone();
        let one = work.data[0].one_like();
        let mut det = one.clone();
        let mut sign_flip = false;
        for col in 0..work.cols {
            let Some(p) = (col..work.rows).find(|&r| !work.at(r, col).is_zero()) else {
                return work.data[0].zero_like();
            };
            if p != col {
                work.swap_rows(col, p);
                sign_flip = !sign_flip;
            }
            let pivot = work.at(col, col).clone();
            det = det.mul(&pivot);
            let pivot_inv = pivot.inv().expect("nonzero pivot");
            for r in (col + 1)..work.rows {
                if work.at(r, col).is_zero() {
                    continue;
                }
                let factor = work.at(r, col).mul(&pivot_inv);
                for c in col..work.cols {
                    let v = work.at(r, c).sub(&factor.mul(work.at(col, c)));
                    work.set(r, c, v);
                }
            }
        }
        if sign_flip {
            det.neg()
        } else {
            det
        }
    }
}
