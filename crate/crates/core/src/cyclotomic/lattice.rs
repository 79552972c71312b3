use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{RealCoords, RingContext};
use crate::error::{Error, Result};

/// The ideal ρ^e Z[ζ + ζ⁻¹] as an integer lattice in ρ-power coordinates.
///
/// The basis rows are in Hermite normal form: upper triangular, positive
/// diagonal, and entries above each pivot reduced into [0, pivot).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueLattice {
    q: u32,
    e: u32,
    #[serde(with = "crate::serde_int::vec_vec")]
    basis: Vec<Vec<BigInt>>,
}

impl ResidueLattice {
    /// Lattice of ρ^e Z[ζ + ζ⁻¹].
    ///
    /// For q = 2 this is 2^e Z rather than 4^e Z, and for q not a prime power
    /// it is the whole ring.
    pub fn new(ring: &RingContext, e: u32) -> Self {
        let m = ring.real_dim();
        let basis = if ring.q() == 2 {
            vec![vec![BigInt::one() << e]]
        } else if !ring.is_prime_power() {
            identity(m)
        } else {
            let rho = ring.rho();
            let mut gen = rho.pow(e);
            let mut rows = Vec::with_capacity(m);
            for _ in 0..m {
                let c = gen.to_real().expect("powers of rho are real");
                rows.push(c.into_coords());
                gen = &gen * &rho;
            }
            hermite_normal_form(rows)
        };
        Self { q: ring.q(), e, basis }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of residue classes, the product of the pivots.
    pub fn index(&self) -> BigInt {
        (0..self.dim()).map(|i| self.basis[i][i].clone()).product()
    }

    /// Reduces each coordinate into [0, pivot) against the basis.
    pub fn canonical_residue(&self, x: &RealCoords) -> Result<RealCoords> {
        if x.len() != self.dim() {
            return Err(Error::domain(format!(
                "real coordinate vector has length {}, lattice has rank {}",
                x.len(),
                self.dim()
            )));
        }
        let mut v = x.coords().to_vec();
        self.reduce_in_place(&mut v);
        Ok(RealCoords::new(v))
    }

    pub(crate) fn reduce_in_place(&self, v: &mut [BigInt]) {
        for (i, row) in self.basis.iter().enumerate() {
            let f = v[i].div_floor(&row[i]);
            if f.is_zero() {
                continue;
            }
            for (x, b) in v[i..].iter_mut().zip(&row[i..]) {
                *x -= &f * b;
            }
        }
    }

    pub fn contains(&self, x: &RealCoords) -> Result<bool> {
        Ok(self.canonical_residue(x)?.is_zero())
    }
}

fn identity(m: usize) -> Vec<Vec<BigInt>> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Row-style Hermite normal form of a full-rank square integer matrix.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    for j in 0..m {
        // Bring a nonzero entry into the pivot position first, so the gcd
        // combination below never divides by zero.
        if rows[j][j].is_zero() {
            if let Some(k) = (j + 1..m).find(|&k| !rows[k][j].is_zero()) {
                rows.swap(j, k);
            }
        }
        for i in j + 1..m {
            if rows[i][j].is_zero() {
                continue;
            }
            let a = rows[j][j].clone();
            let b = rows[i][j].clone();
            let ext = a.extended_gcd(&b);
            let (g, x, y) = (ext.gcd, ext.x, ext.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let new_j: Vec<BigInt> = rows[j].iter().zip(&rows[i]).map(|(r, s)| &x * r + &y * s).collect();
            let new_i: Vec<BigInt> = rows[j].iter().zip(&rows[i]).map(|(r, s)| &ag * s - &bg * r).collect();
            rows[j] = new_j;
            rows[i] = new_i;
        }
        assert!(!rows[j][j].is_zero(), "lattice basis must have full rank");
        if rows[j][j].is_negative() {
            for x in rows[j].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..j {
            let f = rows[i][j].div_floor(&rows[j][j]);
            if !f.is_zero() {
                let pivot_row = rows[j].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    rows
}

/// The t with (ρ^e Z[ζ + ζ⁻¹]) ∩ Z = 2^t Z, for q = 2^f with f > 1.
///
/// With e = 2^{f−2}g + h and 0 ≤ h < 2^{f−2}, t = g + ⌈h / 2^{f−2}⌉.
pub fn rational_intersection_exponent(ring: &RingContext, e: u32) -> Result<u32> {
    match ring.prime_power() {
        Some((2, f)) if f > 1 => {
            let block = 1u32 << (f - 2);
            let (g, h) = (e / block, e % block);
            Ok(g + u32::from(h > 0))
        }
        _ => Err(Error::domain(format!(
            "rational intersection exponent needs q = 2^f with f > 1, got q = {}",
            ring.q()
        ))),
    }
}
