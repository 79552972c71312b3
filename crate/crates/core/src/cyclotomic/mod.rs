//! Exact arithmetic in Z[ζ_q] and its real subring Z[ζ + ζ⁻¹], the
//! (1 − ζ)-adic valuation, and canonical reduction modulo ρ^e.

mod elem;
mod lattice;
mod real;
mod ring;

use std::fmt;

use serde::{Serialize, Serializer};

pub use elem::CycElem;
pub use lattice::{hermite_normal_form, rational_intersection_exponent, ResidueLattice};
pub use real::RealCoords;
pub use ring::{cyclotomic_polynomial, prime_power_decomposition, RingContext, MAX_Q};

/// A valuation that may be infinite (the valuation of zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, k: i64) -> bool {
        self >= Valuation::Finite(k)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(k) => s.serialize_i64(*k),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}
