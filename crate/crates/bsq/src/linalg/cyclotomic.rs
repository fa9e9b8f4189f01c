//! Exact arithmetic in cyclotomic fields Q(ζ_n).
//!
//! Elements are residues modulo the n-th cyclotomic polynomial. This is what
//! lets a coboundary matrix be evaluated at e^{-2πi·p/q} and row-reduced with
//! no floating point anywhere: the entry is exactly a root of unity, and its
//! minimal polynomial is known.

use super::poly::{cyclotomic_polynomial, Poly};
use super::Field;
use crate::rational::{frac_mod_one, Q};
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use std::f64::consts::TAU;
use std::fmt;
use std::rc::Rc;

/// The field Q(ζ_n), ζ_n = e^{2πi/n}.
#[derive(Debug, PartialEq, Eq)]
pub struct CycField {
    n: usize,
    modulus: Poly,
}

impl CycField {
    pub fn new(n: usize) -> Rc<Self> {
        assert!(n >= 1);
        Rc::new(CycField {
            n,
            modulus: cyclotomic_polynomial(n),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Degree of the field over Q (Euler phi of n).
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }
}

/// An element of Q(ζ_n).
#[derive(Clone)]
pub struct Cyc {
    field: Rc<CycField>,
    poly: Poly,
}

impl Cyc {
    pub fn from_q(field: &Rc<CycField>, c: Q) -> Self {
        Cyc {
            field: field.clone(),
            poly: Poly::constant(c),
        }
    }

    /// ζ_n^k.
    pub fn root_power(field: &Rc<CycField>, k: i64) -> Self {
        let n = field.n as i64;
        let k = k.rem_euclid(n) as usize;
        let poly = Poly::monomial(Q::one(), k);
        Cyc {
            field: field.clone(),
            poly: reduce(&poly, field),
        }
    }

    pub fn field(&self) -> &Rc<CycField> {
        &self.field
    }

    /// The underlying residue polynomial in ζ.
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Some(q) iff the element is rational.
    pub fn as_rational(&self) -> Option<Q> {
        match self.poly.degree() {
            None => Some(Q::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let base = TAU / self.field.n as f64;
        let z = Complex64::new(base.cos(), base.sin());
        self.poly.eval_complex(z)
    }
}

fn reduce(p: &Poly, field: &Rc<CycField>) -> Poly {
    let (_, r) = p.div_rem(&field.modulus);
    r
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.poly == other.poly
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc(n={}, {:?})", self.field.n, self.poly)
    }
}

impl Field for Cyc {
    fn zero_like(&self) -> Self {
        Cyc {
            field: self.field.clone(),
            poly: Poly::zero(),
        }
    }

    fn one_like(&self) -> Self {
        Cyc {
            field: self.field.clone(),
            poly: Poly::one(),
        }
    }

    fn add(&self, other: &Self) -> Self {
        Cyc {
            field: self.field.clone(),
            poly: self.poly.add(&other.poly),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Cyc {
            field: self.field.clone(),
            poly: self.poly.sub(&other.poly),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        Cyc {
            field: self.field.clone(),
            poly: reduce(&self.poly.mul(&other.poly), &self.field),
        }
    }

    fn neg(&self) -> Self {
        Cyc {
            field: self.field.clone(),
            poly: self.poly.neg(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.poly.is_zero() {
            return None;
        }
        // extended Euclid: a·poly + b·modulus = gcd = constant (modulus irreducible)
        let (g, a) = half_ext_gcd(&self.poly, &self.field.modulus);
        let g_const = match g.degree() {
            Some(0) => g.coeff(0),
            // gcd of nonzero element with irreducible modulus must be constant
            _ => return None,
        };
        let inv_poly = a.scale(&(Q::one() / g_const));
        Some(Cyc {
            field: self.field.clone(),
            poly: reduce(&inv_poly, &self.field),
        })
    }

    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

/// Returns (g, a) with a·x ≡ g (mod y) and g = gcd(x, y) (not normalized).
fn half_ext_gcd(x: &Poly, y: &Poly) -> (Poly, Poly) {
    let mut r0 = x.clone();
    let mut r1 = y.clone();
    let mut a0 = Poly::one();
    let mut a1 = Poly::zero();
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let a = a0.sub(&q.mul(&a1));
        r0 = r1;
        r1 = r;
        a0 = a1;
        a1 = a;
    }
    (r0, a0)
}

/// The field element e^{2πi·turns} for rational turns, living in Q(ζ_d)
/// where d is the reduced denominator of `turns`.
pub fn phase_element(turns: &Q) -> Cyc {
    let f = frac_mod_one(turns);
    let d = f.denom().to_usize().expect("denominator fits in usize");
    let k = f.numer().to_i64().expect("numerator fits in i64");
    let field = CycField::new(d.max(1));
    Cyc::root_power(&field, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn roots_of_unity_multiply() {
        let f = CycField::new(6);
        let z = Cyc::root_power(&f, 1);
        let mut acc = z.one_like();
        for _ in 0..6 {
            acc = acc.mul(&z);
        }
        assert_eq!(acc, z.one_like());
        // ζ_6^3 = -1
        let m1 = Cyc::root_power(&f, 3);
        assert_eq!(m1.as_rational(), Some(qi(-1)));
    }

    #[test]
    fn inverses() {
        let f = CycField::new(5);
        let z = Cyc::root_power(&f, 2);
        let w = z.inv().unwrap();
        assert_eq!(z.mul(&w), z.one_like());
        let r = Cyc::from_q(&f, q(3, 7));
        assert_eq!(r.mul(&r.inv().unwrap()), r.one_like());
        assert!(r.zero_like().inv().is_none());
        // 1 - ζ is invertible in Q(ζ_5)
        let e = z.one_like().sub(&Cyc::root_power(&f, 1));
        assert_eq!(e.mul(&e.inv().unwrap()), z.one_like());
    }

    #[test]
    fn phase_element_matches_complex_exponential() {
        for (n, d) in [(1i64, 2i64), (2, 3), (-1, 4), (5, 6), (3, 1)] {
            let t = q(n, d);
            let c = phase_element(&t);
            let expect = Complex64::new(
                (TAU * n as f64 / d as f64).cos(),
                (TAU * n as f64 / d as f64).sin(),
            );
            assert!((c.to_complex() - expect).norm() < 1e-10, "{n}/{d}");
        }
        assert!(phase_element(&qi(7)).as_rational() == Some(qi(1)));
    }
}
