use std::fmt;

use num_bigint::BigInt;

use crate::cyclotomic::{CycElem, RingContext};
use crate::error::{Error, Result};

/// A dense square matrix over Z[ζ_q].
#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    ring: RingContext,
    n: usize,
    cells: Vec<CycElem>,
}

impl CycMatrix {
    pub fn new(ring: &RingContext, n: usize, cells: Vec<CycElem>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::domain(format!("expected {} cells for order {n}, got {}", n * n, cells.len())));
        }
        if let Some(bad) = cells.iter().find(|c| c.ring() != ring) {
            return Err(Error::ContextMismatch { left: ring.q(), right: bad.ring().q() });
        }
        Ok(Self { ring: ring.clone(), n, cells })
    }

    pub fn from_fn(ring: &RingContext, n: usize, mut f: impl FnMut(usize, usize) -> CycElem) -> Self {
        let cells = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { ring: ring.clone(), n, cells }
    }

    pub fn zero(ring: &RingContext, n: usize) -> Self {
        Self::from_fn(ring, n, |_, _| ring.zero())
    }

    pub fn identity(ring: &RingContext, n: usize) -> Self {
        Self::from_fn(ring, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn ones(ring: &RingContext, n: usize) -> Self {
        Self::from_fn(ring, n, |_, _| ring.one())
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycElem {
        &self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycElem) {
        self.cells[i * self.n + j] = v;
    }

    pub fn cells(&self) -> &[CycElem] {
        &self.cells
    }

    pub fn map(&self, f: impl Fn(&CycElem) -> CycElem) -> Self {
        Self { ring: self.ring.clone(), n: self.n, cells: self.cells.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.n, |i, j| self.get(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.n, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(&self.ring, self.n, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(&self.ring, self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(&self.ring, n, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..n {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(&self.ring, self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self::from_fn(&self.ring, self.n, |i, j| self.get(i, j) * other.get(i, j))
    }

    /// Entrywise k-th power.
    pub fn hadamard_pow(&self, k: u32) -> Self {
        self.map(|x| x.pow(k))
    }

    pub fn trace(&self) -> CycElem {
        let mut acc = self.ring.zero();
        for i in 0..self.n {
            acc += self.get(i, i);
        }
        acc
    }

    /// 𝟏ᵀM𝟏, the sum of all entries.
    pub fn total(&self) -> CycElem {
        let mut acc = self.ring.zero();
        for c in &self.cells {
            acc += c;
        }
        acc
    }

    pub fn row_sum(&self, i: usize) -> CycElem {
        let mut acc = self.ring.zero();
        for j in 0..self.n {
            acc += self.get(i, j);
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.map(|x| x.scale(k))
    }

    /// Principal submatrix with row and column `skip` removed.
    pub fn minor(&self, skip: usize) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&i| i != skip).collect();
        Self::from_fn(&self.ring, keep.len(), |i, j| self.get(keep[i], keep[j]).clone())
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycMatrix(q={}, n={})", self.ring.q(), self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The matrix A = (J − H)/(1 − ζ) whose entries weight closed walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkMatrix(CycMatrix);

impl WalkMatrix {
    pub(crate) fn new(m: CycMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CycMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn ring(&self) -> &RingContext {
        self.0.ring()
    }

    pub fn get(&self, i: usize, j: usize) -> &CycElem {
        self.0.get(i, j)
    }
}

impl std::ops::Deref for WalkMatrix {
    type Target = CycMatrix;
    fn deref(&self) -> &CycMatrix {
        &self.0
    }
}
