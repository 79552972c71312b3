use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{CycElem, RingContext};
use crate::error::{Error, Result};

/// An element of Z[ζ + ζ⁻¹] in the basis 1, ρ, …, ρ^{m−1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealCoords {
    #[serde(with = "crate::serde_int::vec")]
    coords: Vec<BigInt>,
}

impl RealCoords {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The element of Z[ζ_q] these coordinates describe.
    pub fn to_cyc(&self, ring: &RingContext) -> Result<CycElem> {
        let pows = ring.rho_power_coords();
        if self.coords.len() != pows.len() {
            return Err(Error::domain(format!(
                "real coordinate vector has length {}, ring Z[zeta_{}] expects {}",
                self.coords.len(),
                ring.q(),
                pows.len()
            )));
        }
        let mut out = vec![BigInt::zero(); ring.phi()];
        for (c, pow) in self.coords.iter().zip(pows) {
            if c.is_zero() {
                continue;
            }
            for (acc, x) in out.iter_mut().zip(pow) {
                *acc += c * x;
            }
        }
        Ok(ring.element(out))
    }
}

impl fmt::Debug for RealCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealCoords{:?}", self.coords.iter().map(ToString::to_string).collect::<Vec<_>>())
    }
}

impl fmt::Display for RealCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}
