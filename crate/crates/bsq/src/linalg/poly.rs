//! Dense univariate polynomials over the rationals.
//!
//! Just enough arithmetic for cyclotomic moduli and rational-function
//! elimination: ring ops, exact division, Euclidean gcd.

use crate::rational::Q;
use num_traits::{One, Zero};
use std::fmt;

/// Polynomial with rational coefficients, lowest degree first.
/// Invariant: no trailing zero coefficient (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly { coeffs: vec![c] }.trimmed()
    }

    pub fn var() -> Self {
        Poly {
            coeffs: vec![Q::zero(), Q::one()],
        }
    }

    /// c·x^k.
    pub fn monomial(c: Q, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        Poly { coeffs }.trimmed()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Poly { coeffs }.trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }.trimmed()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.degree().unwrap();
        let lead_inv = Q::one() / divisor.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot_coeffs = vec![Q::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() * &lead_inv;
            let shift = rd - dd;
            quot_coeffs[shift] = factor.clone();
            rem = rem.sub(&divisor.mul(&Poly::monomial(factor, shift)));
        }
        (Poly::from_coeffs(quot_coeffs), rem)
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&(Q::one() / l.clone())),
        }
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + crate::rational::q_to_f64(c);
        }
        acc
    }

    /// x^n - 1.
    pub fn xn_minus_one(n: usize) -> Poly {
        let mut p = Poly::monomial(Q::one(), n);
        p = p.sub(&Poly::one());
        p
    }
}

/// n-th cyclotomic polynomial, by dividing x^n - 1 by the cyclotomic
/// polynomials of the proper divisors of n.
pub fn cyclotomic_polynomial(n: usize) -> Poly {
    assert!(n >= 1);
    let mut cache: Vec<Option<Poly>> = vec![None; n + 1];
    cyclo_rec(n, &mut cache)
}

fn cyclo_rec(n: usize, cache: &mut Vec<Option<Poly>>) -> Poly {
    if let Some(p) = &cache[n] {
        return p.clone();
    }
    let mut p = Poly::xn_minus_one(n);
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclo_rec(d, cache);
            p = p.div_exact(&phi_d);
        }
    }
    cache[n] = Some(p.clone());
    p
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", crate::rational::format_q(c))?,
                1 => write!(f, "({})x", crate::rational::format_q(c))?,
                _ => write!(f, "({})x^{}", crate::rational::format_q(c), k)?,
            }
        }
        Ok(())
    }
}
