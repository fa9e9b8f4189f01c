//! Unit complex numbers with exact rational argument.
//!
//! A [`UnitPhase`] is e^{2πi·turns} with `turns` an exact rational, so the
//! question "is this holonomy trivial?" reduces to "is `turns` an integer?"
//! and is decided arithmetically instead of by a float comparison.

use crate::rational::{format_q, frac_mod_one, is_integer, q_to_f64, Q};
use num_complex::Complex64;
use num_traits::Zero;
use std::f64::consts::TAU;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitPhase {
    turns: Q,
}

impl UnitPhase {
    /// e^{2πi·turns}.
    pub fn from_turns(turns: Q) -> Self {
        UnitPhase { turns }
    }

    pub fn one() -> Self {
        UnitPhase { turns: Q::zero() }
    }

    /// The exact argument, in turns (multiples of 2π), as constructed.
    pub fn turns(&self) -> &Q {
        &self.turns
    }

    /// Argument reduced to [0, 1).
    pub fn reduced_turns(&self) -> Q {
        frac_mod_one(&self.turns)
    }

    /// Exactly 1 iff the argument is an integer number of turns.
    pub fn is_one(&self) -> bool {
        is_integer(&self.turns)
    }

    pub fn mul(&self, other: &UnitPhase) -> UnitPhase {
        UnitPhase {
            turns: &self.turns + &other.turns,
        }
    }

    pub fn inv(&self) -> UnitPhase {
        UnitPhase {
            turns: -self.turns.clone(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = TAU * q_to_f64(&self.reduced_turns());
        Complex64::new(a.cos(), a.sin())
    }

    /// Canonical serialization: the reduced argument in turns, e.g. `"1/2"`.
    pub fn arg_string(&self) -> String {
        format_q(&self.reduced_turns())
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(2*pi*i*{})", format_q(&self.turns))
    }
}
