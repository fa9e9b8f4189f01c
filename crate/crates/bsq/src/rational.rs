//! Exact rational scalars and their canonical `"p/q"` text form.
//!
//! Every coordinate, interval endpoint, radius and phase argument in this
//! crate is a [`Q`]; nothing geometric is ever stored as a float.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Q = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Rational from a pair of machine integers.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from a machine integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses the canonical text form: `"p"` or `"p/q"`, optionally signed.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let mut parts = s.splitn(2, '/');
    let num_str = parts.next().unwrap();
    let num: BigInt = num_str
        .parse()
        .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
    match parts.next() {
        None => Ok(Q::from_integer(num)),
        Some(den_str) => {
            let den: BigInt = den_str
                .parse()
                .map_err(|_| ParseRationalError::Invalid(s.to_string()))?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Q::new(num, den))
        }
    }
}

/// Canonical text form: reduced, `"p"` when integral, else `"p/q"` with q > 0.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Integers m with lo < m < hi, ascending.
pub fn integers_in_open_interval(lo: &Q, hi: &Q) -> Vec<Q> {
    let mut out = Vec::new();
    if lo >= hi {
        return out;
    }
    let mut m = lo.ceil();
    if &m == lo {
        m += Q::one();
    }
    while &m < hi {
        out.push(m.clone());
        m += Q::one();
    }
    out
}

/// Nonnegative integers m with m < hi, ascending (0 included when 0 < hi).
pub fn nonneg_integers_below(hi: &Q) -> Vec<Q> {
    let mut out = Vec::new();
    let mut m = Q::zero();
    while &m < hi {
        out.push(m.clone());
        m += Q::one();
    }
    out
}

/// Fractional part in [0, 1).
pub fn frac_mod_one(x: &Q) -> Q {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Q::one());
    f
}

/// The smallest-denominator rational strictly between lo and hi, by walking
/// the Stern-Brocot tree. The result of probing an interval of width w has
/// denominator at most about 1/w, which keeps downstream cyclotomic fields
/// small no matter how ugly the endpoints are.
pub fn simplest_between(lo: &Q, hi: &Q) -> Option<Q> {
    if lo >= hi {
        return None;
    }
    // shift so that lo >= 0
    let shift = if lo.is_negative() {
        -lo.floor()
    } else {
        Q::zero()
    };
    let lo = lo + &shift;
    let hi = hi + &shift;
    // if an integer lies strictly inside, it is the simplest
    let c = lo.ceil();
    let inner = if c == lo { c + Q::one() } else { c };
    if inner < hi {
        return Some(inner - shift);
    }
    // continued-fraction descent: both endpoints share an integer part
    let a = lo.floor();
    let lo_f = &lo - &a;
    let hi_f = &hi - &a;
    if lo_f.is_zero() {
        // lo is an integer: answer is a + 1/n for the smallest workable n
        let inv = Q::one() / &hi_f;
        let mut n = inv.floor() + Q::one();
        if (Q::one() / &n) >= hi_f {
            n += Q::one();
        }
        return Some(a + Q::one() / n - shift);
    }
    let sub = simplest_between(&(Q::one() / hi_f), &(Q::one() / lo_f))?;
    Some(a + Q::one() / sub - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/2", "-7/3", "5", "0", "-4"] {
            let x = parse_q(s).unwrap();
            assert_eq!(format_q(&x), s);
        }
        // non-canonical input normalizes
        assert_eq!(format_q(&parse_q("6/4").unwrap()), "3/2");
        assert_eq!(format_q(&parse_q("3/-2").unwrap()), "-3/2");
        assert_eq!(format_q(&parse_q("4/2").unwrap()), "2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn integer_enumeration() {
        let v = integers_in_open_interval(&q(3, 2), &q(7, 2));
        assert_eq!(v, vec![qi(2), qi(3)]);
        // open endpoints excluded
        let v = integers_in_open_interval(&qi(1), &qi(3));
        assert_eq!(v, vec![qi(2)]);
        assert!(integers_in_open_interval(&q(1, 10), &q(9, 10)).is_empty());
        assert_eq!(nonneg_integers_below(&q(5, 2)), vec![qi(0), qi(1), qi(2)]);
        assert!(nonneg_integers_below(&qi(0)).is_empty());
    }

    #[test]
    fn simplest_rational_probes() {
        // denominator stays small for a width-1/7 window with ugly endpoints
        let lo = q(123457, 35291);
        let hi = &lo + q(1, 7);
        let p = simplest_between(&lo, &hi).unwrap();
        assert!(lo < p && p < hi);
        assert!(*p.denom() <= num_bigint::BigInt::from(8));
        // integer inside: the integer is the simplest
        assert_eq!(simplest_between(&q(19, 20), &q(23, 20)).unwrap(), qi(1));
        // classic: simplest between 0.2 and 0.26 is 1/4
        assert_eq!(simplest_between(&q(1, 5), &q(13, 50)).unwrap(), q(1, 4));
        // negative windows shift cleanly
        let p = simplest_between(&q(-27, 11), &q(-9, 4)).unwrap();
        assert!(q(-27, 11) < p && p < q(-9, 4));
        assert!(simplest_between(&q(1, 2), &q(1, 2)).is_none());
    }

    #[test]
    fn frac_mod_one_negative() {
        assert_eq!(frac_mod_one(&q(-1, 2)), q(1, 2));
        assert_eq!(frac_mod_one(&qi(-3)), qi(0));
    }
}
