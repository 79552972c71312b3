use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{RealCoords, RingContext, Valuation};
use crate::error::{Error, Result};

/// An element of Z[ζ_q] in the power basis 1, ζ, …, ζ^{φ(q)−1}.
///
/// Coordinates are always reduced modulo Φ_q, so equality is coordinate
/// equality. Binary operators panic when the operands come from different
/// rings; the `try_*` methods report that as an error instead.
#[derive(Clone, PartialEq, Eq)]
pub struct CycElem {
    ring: RingContext,
    coords: Vec<BigInt>,
}

impl CycElem {
    pub(crate) fn from_parts(ring: RingContext, coords: Vec<BigInt>) -> Self {
        debug_assert_eq!(coords.len(), ring.phi());
        Self { ring, coords }
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The integer value if the element lies in Z.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }

    fn check(&self, other: &CycElem) -> Result<()> {
        if self.ring.same_ring(&other.ring) {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.ring.q(), right: other.ring.q() })
        }
    }

    pub fn try_add(&self, other: &CycElem) -> Result<CycElem> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.ring.clone(), coords))
    }

    pub fn try_sub(&self, other: &CycElem) -> Result<CycElem> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.ring.clone(), coords))
    }

    pub fn try_mul(&self, other: &CycElem) -> Result<CycElem> {
        self.check(other)?;
        let phi = self.ring.phi();
        let mut raw = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_parts(self.ring.clone(), self.ring.reduce(raw)))
    }

    pub fn scale(&self, k: &BigInt) -> CycElem {
        Self::from_parts(self.ring.clone(), self.coords.iter().map(|c| c * k).collect())
    }

    pub fn scale_i64(&self, k: i64) -> CycElem {
        Self::from_parts(self.ring.clone(), self.coords.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> CycElem {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under the automorphism ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> CycElem {
        let coeffs: Vec<(i64, BigInt)> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (-(i as i64), c.clone()))
            .collect();
        self.ring.from_zeta_coeffs(&coeffs)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Exact quotient by (1 − ζ).
    ///
    /// Writes a(x) = (1 − x)s(x) + a(1) and Φ(x) = (1 − x)g(x) + Φ(1). Then
    /// a is divisible iff Φ(1) divides a(1), and the quotient is s − t·g with
    /// t = a(1)/Φ(1).
    pub fn div_one_minus_zeta(&self) -> Result<CycElem> {
        let phi = self.ring.phi();
        let cyclo = self.ring.cyclotomic_coeffs();
        let a1: BigInt = self.coords.iter().sum();
        let phi1: i64 = cyclo.iter().sum();
        let (t, rem) = a1.div_rem(&BigInt::from(phi1));
        if !rem.is_zero() {
            return Err(Error::NotDivisible);
        }
        // s_j = −Σ_{i>j} a_i and g_j = −Σ_{i>j} Φ_i; both via suffix sums.
        let mut out = vec![BigInt::zero(); phi];
        let mut suffix_a = BigInt::zero();
        let mut suffix_g: i64 = cyclo[phi];
        for j in (0..phi).rev() {
            if j + 1 < phi {
                suffix_a += &self.coords[j + 1];
                suffix_g += cyclo[j + 1];
            }
            out[j] = -&suffix_a + &t * suffix_g;
        }
        Ok(Self::from_parts(self.ring.clone(), out))
    }

    /// Whether the element lies in (1 − ζ)^k Z[ζ], by repeated exact division.
    pub fn in_omz_power(&self, k: u32) -> bool {
        if !self.ring.is_prime_power() {
            return true;
        }
        let mut cur = self.clone();
        for _ in 0..k {
            if cur.is_zero() {
                return true;
            }
            match cur.div_one_minus_zeta() {
                Ok(next) => cur = next,
                Err(_) => return false,
            }
        }
        true
    }

    /// Exact quotient by (1 − ζ)^k, or `None` if the division fails.
    pub fn div_omz_power(&self, k: u32) -> Option<CycElem> {
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.div_one_minus_zeta().ok()?;
        }
        Some(cur)
    }

    /// Largest k with the element in (1 − ζ)^k Z[ζ].
    ///
    /// For q not a prime power (1 − ζ) is a unit; nonzero elements get 0.
    pub fn valuation_omz(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        if !self.ring.is_prime_power() {
            return Valuation::Finite(0);
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Ok(next) = cur.div_one_minus_zeta() {
            cur = next;
            k += 1;
        }
        Valuation::Finite(k)
    }

    /// Exact coordinatewise quotient by an integer, if every coordinate is
    /// divisible.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<CycElem> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (quot, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            coords.push(quot);
        }
        Some(Self::from_parts(self.ring.clone(), coords))
    }

    /// Membership in d·(1 − ζ)Z[ζ] for a positive integer d.
    pub fn in_int_times_omz(&self, d: u64) -> bool {
        match self.div_one_minus_zeta() {
            Ok(u) => u.div_exact_int(&BigInt::from(d)).is_some(),
            Err(_) => false,
        }
    }

    /// Coordinates in the ρ-power basis of the real subring.
    pub fn to_real(&self) -> Result<RealCoords> {
        self.ring.solve_real(&self.coords).map(RealCoords::new).ok_or(Error::NotReal)
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem(q={}, {})", self.ring.q(), self)
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}ζ")?,
                _ => write!(f, "{c}ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&CycElem> for &CycElem {
            type Output = CycElem;
            fn $method(self, rhs: &CycElem) -> CycElem {
                self.$try(rhs).expect("operands from different rings")
            }
        }
        impl $tr<CycElem> for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: CycElem) -> CycElem {
                (&self).$try(&rhs).expect("operands from different rings")
            }
        }
        impl $tr<&CycElem> for CycElem {
            type Output = CycElem;
            fn $method(self, rhs: &CycElem) -> CycElem {
                (&self).$try(rhs).expect("operands from different rings")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&CycElem> for CycElem {
    fn add_assign(&mut self, rhs: &CycElem) {
        self.check(rhs).expect("operands from different rings");
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a += b;
        }
    }
}

impl SubAssign<&CycElem> for CycElem {
    fn sub_assign(&mut self, rhs: &CycElem) {
        self.check(rhs).expect("operands from different rings");
        for (a, b) in self.coords.iter_mut().zip(&rhs.coords) {
            *a -= b;
        }
    }
}

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem::from_parts(self.ring.clone(), self.coords.iter().map(|c| -c).collect())
    }
}

impl Neg for CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        -&self
    }
}
