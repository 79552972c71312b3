use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::prime_power_decomposition;
use crate::error::{Error, Result};
use crate::matrices::Family;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Parse(format!("unknown parity {other:?}, expected even or odd"))),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Which closed form a bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    /// q = 2, n even.
    A,
    /// q = 2, n odd.
    B,
    /// q a power of an odd prime.
    C,
    /// q = 2^f with f > 1, n even.
    D,
    /// q = 2^f with f > 1, n odd.
    E,
    /// q not a prime power: a single class.
    NonPrimePower,
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundCase::A => "a",
            BoundCase::B => "b",
            BoundCase::C => "c",
            BoundCase::D => "d",
            BoundCase::E => "e",
            BoundCase::NonPrimePower => "non_prime_power",
        })
    }
}

/// An upper bound on the number of residue classes of characteristic
/// polynomials modulo ρ^e, with the case it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBound {
    pub case: BoundCase,
    pub value: BigUint,
}

fn pow(base: u32, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

/// Upper bound on the number of classes of χ_M modulo ρ^e over all
/// matrices of the family of order n with the given parity.
pub fn theorem_bound(q: u32, e: u32, parity: Parity, family: Family) -> Result<TheoremBound> {
    if e == 0 {
        return Err(Error::domain("the reduction exponent e must be at least 1"));
    }
    if q < 2 {
        return Err(Error::domain(format!("root order q must be at least 2, got {q}")));
    }
    let Some((p, f)) = prime_power_decomposition(q) else {
        return Ok(TheoremBound { case: BoundCase::NonPrimePower, value: BigUint::one() });
    };
    let e = e as i64;
    let sq = e * e;
    // ⌈2^{2−f}·e⌉ for f ≥ 2.
    let scaled = || (e as u64).div_ceil(1u64 << (f - 2)) as i64;
    let (case, exp) = match (p, f, parity, family) {
        (2, 1, Parity::Even, Family::Hermitian) => (BoundCase::A, sq / 2 - e + 1),
        (2, 1, Parity::Odd, Family::Hermitian) => (BoundCase::B, (sq + 1) / 2 - e + 1),
        (2, 1, Parity::Even, Family::Seidel) => (BoundCase::A, (e - 2) * (e - 3) / 2),
        (2, 1, Parity::Odd, Family::Seidel) => (BoundCase::B, (sq - 5 * e + 8) / 2),
        (2, _, Parity::Even, Family::Hermitian) => (BoundCase::D, (e - 1) * (e - 2) + scaled() - 1),
        (2, _, Parity::Odd, Family::Hermitian) => (BoundCase::E, (e - 1) * (e - 1) + scaled() - 1 - e / 4),
        (2, _, Parity::Even, Family::Seidel) => (BoundCase::D, (e - 1) * (e - 2)),
        (2, _, Parity::Odd, Family::Seidel) => (BoundCase::E, (e - 1) * (e - 1) - e / 4),
        (_, _, _, _) => (BoundCase::C, (e - 1) * (e - 1)),
    };
    let exp = u64::try_from(exp).expect("every case has a nonnegative exponent for e >= 1");
    Ok(TheoremBound { case, value: pow(if case == BoundCase::C { p } else { 2 }, exp) })
}
