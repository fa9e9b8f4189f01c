//! The rational function field Q(x), used for generic-parameter ranks.
//!
//! Coboundary entries are monomials in z = e^{-2πi·t}; row-reducing over Q(z)
//! with z transcendental gives the rank at a generic parameter, against which
//! the rank at a specific root of unity is compared.

use super::poly::Poly;
use super::Field;
use crate::rational::Q;
use num_traits::One;
use std::fmt;

/// num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, PartialEq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Q) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn var() -> Self {
        RatFn::from_poly(Poly::var())
    }

    /// c·x^k.
    pub fn monomial(c: Q, k: usize) -> Self {
        RatFn::from_poly(Poly::monomial(c, k))
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RatFn { num, den }.normalize()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Poly::one();
            return self;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = Q::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    /// Some(p) iff the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.degree() == Some(0) {
            Some(&self.num)
        } else {
            None
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl Field for RatFn {
    fn zero_like(&self) -> Self {
        RatFn::from_poly(Poly::zero())
    }

    fn one_like(&self) -> Self {
        RatFn::from_poly(Poly::one())
    }

    fn add(&self, other: &Self) -> Self {
        RatFn::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(RatFn::new(self.den.clone(), self.num.clone()))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    #[test]
    fn field_ops_reduce() {
        let x = RatFn::var();
        // (x^2 - 1)/(x - 1) = x + 1
        let num = Poly::from_coeffs(vec![qi(-1), qi(0), qi(1)]);
        let den = Poly::from_coeffs(vec![qi(-1), qi(1)]);
        let r = RatFn::new(num, den);
        assert_eq!(r.as_poly().unwrap(), &Poly::from_coeffs(vec![qi(1), qi(1)]));
        // 1/x · x = 1
        let inv = x.inv().unwrap();
        assert_eq!(inv.mul(&x), x.one_like());
        // x - x = 0
        assert!(x.sub(&x).is_zero());
    }
}
