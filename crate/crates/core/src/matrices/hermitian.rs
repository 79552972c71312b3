use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CycMatrix, Graph, SwitchingVector, WalkMatrix};
use crate::cyclotomic::{CycElem, RingContext};
use crate::error::{Error, Result};

/// Which kind of matrix a run is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Hermitian matrices with every entry a q-th root of unity.
    Hermitian,
    /// Hermitian matrices with zero diagonal and root-of-unity entries off it.
    Seidel,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hermitian" => Ok(Family::Hermitian),
            "seidel" => Ok(Family::Seidel),
            other => Err(Error::Parse(format!("unknown family {other:?}, expected hermitian or seidel"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hermitian => "hermitian",
            Family::Seidel => "seidel",
        })
    }
}

/// Validates an n×n exponent table for Hermitian symmetry and returns the
/// off-diagonal part with the diagonal slots zeroed.
fn check_exponents(n: usize, q: u32, exps: &[u32]) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("root order q must be at least 2, got {q}")));
    }
    if exps.len() != n * n {
        return Err(Error::domain(format!("expected {} exponent codes for order {n}, got {}", n * n, exps.len())));
    }
    for i in 0..n {
        for j in 0..n {
            let e = exps[i * n + j];
            if e >= q {
                return Err(Error::domain(format!("exponent code {e} at ({i}, {j}) is not below q = {q}")));
            }
            if i < j && (e + exps[j * n + i]) % q != 0 {
                return Err(Error::domain(format!("entries ({i}, {j}) and ({j}, {i}) are not conjugate")));
            }
        }
    }
    Ok(())
}

fn full_from_upper(n: usize, q: u32, upper: &[u32]) -> Result<Vec<u32>> {
    if upper.len() != n * (n.saturating_sub(1)) / 2 {
        return Err(Error::domain(format!(
            "expected {} upper-triangle codes for order {n}, got {}",
            n * n.saturating_sub(1) / 2,
            upper.len()
        )));
    }
    let mut exps = vec![0u32; n * n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let e = upper[k];
            if e >= q {
                return Err(Error::domain(format!("exponent code {e} is not below q = {q}")));
            }
            exps[i * n + j] = e;
            exps[j * n + i] = (q - e) % q;
            k += 1;
        }
    }
    Ok(exps)
}

/// H ∈ ℋ_n(q): Hermitian, every entry a power of ζ_q.
///
/// Off-diagonal entries are stored as exponent codes k (meaning ζ^k); the
/// diagonal as signs, where −1 is only allowed for even q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HermitianRootMatrix {
    n: usize,
    q: u32,
    exps: Vec<u32>,
    diag: Vec<i8>,
}

impl HermitianRootMatrix {
    /// Builds a matrix from a full n×n exponent table (diagonal slots are
    /// ignored) and diagonal signs.
    pub fn new(n: usize, q: u32, mut exps: Vec<u32>, diag: Vec<i8>) -> Result<Self> {
        for i in 0..n.min(exps.len() / n.max(1)) {
            exps[i * n + i] = 0;
        }
        check_exponents(n, q, &exps)?;
        Self::check_diag(n, q, &diag)?;
        Ok(Self { n, q, exps, diag })
    }

    /// Builds a matrix from its strict upper triangle in row-major order.
    pub fn from_upper(n: usize, q: u32, upper: &[u32], diag: Vec<i8>) -> Result<Self> {
        let exps = full_from_upper(n, q, upper)?;
        Self::check_diag(n, q, &diag)?;
        Ok(Self { n, q, exps, diag })
    }

    fn check_diag(n: usize, q: u32, diag: &[i8]) -> Result<()> {
        if diag.len() != n {
            return Err(Error::domain(format!("expected {n} diagonal signs, got {}", diag.len())));
        }
        for &d in diag {
            match d {
                1 => {}
                -1 if q % 2 == 0 => {}
                -1 => return Err(Error::domain(format!("diagonal entry -1 is not a {q}-th root of unity"))),
                other => return Err(Error::domain(format!("diagonal sign must be 1 or -1, got {other}"))),
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Exponent code of an off-diagonal entry.
    pub fn exp(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.n + j]
    }

    pub fn diag(&self, i: usize) -> i8 {
        self.diag[i]
    }

    pub fn diag_signs(&self) -> &[i8] {
        &self.diag
    }

    /// Exponent code of any entry, with the diagonal −1 written as ζ^{q/2}.
    pub fn entry_exp(&self, i: usize, j: usize) -> u32 {
        if i == j {
            if self.diag[i] == 1 {
                0
            } else {
                self.q / 2
            }
        } else {
            self.exp(i, j)
        }
    }

    pub fn upper(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.exp(i, j));
            }
        }
        out
    }

    fn check_ring(&self, ring: &RingContext) -> Result<()> {
        if ring.q() != self.q {
            return Err(Error::ContextMismatch { left: ring.q(), right: self.q });
        }
        Ok(())
    }

    pub fn to_cyc_matrix(&self, ring: &RingContext) -> Result<CycMatrix> {
        self.check_ring(ring)?;
        Ok(CycMatrix::from_fn(ring, self.n, |i, j| {
            if i == j {
                ring.from_int(self.diag[i])
            } else {
                ring.zeta_pow(self.exp(i, j) as i64)
            }
        }))
    }

    /// A = (J − H)/(1 − ζ), divided exactly entry by entry.
    ///
    /// Off the diagonal (1 − ζ^k)/(1 − ζ) = 1 + ζ + ⋯ + ζ^{k−1}; on it, a
    /// +1 gives 0 and a −1 gives 2/(1 − ζ).
    pub fn a_transform(&self, ring: &RingContext) -> Result<WalkMatrix> {
        self.check_ring(ring)?;
        let loop_value = if self.diag.contains(&-1) {
            Some(ring.from_int(2).div_one_minus_zeta().map_err(|_| {
                Error::Arithmetic(format!("2 is not divisible by 1 - zeta in Z[zeta_{}]", self.q))
            })?)
        } else {
            None
        };
        let geometric: Vec<CycElem> = {
            let mut acc = ring.zero();
            let mut out = Vec::with_capacity(self.q as usize);
            for k in 0..self.q as i64 {
                out.push(acc.clone());
                acc += &ring.zeta_pow(k);
            }
            out
        };
        let m = CycMatrix::from_fn(ring, self.n, |i, j| {
            if i == j {
                if self.diag[i] == 1 {
                    ring.zero()
                } else {
                    loop_value.clone().expect("loop value computed when a -1 is present")
                }
            } else {
                geometric[self.exp(i, j) as usize].clone()
            }
        });
        Ok(WalkMatrix::new(m))
    }

    /// Γ(H): i ~ j when A_ij ≠ 0, with a loop at i when H_ii = −1.
    pub fn underlying_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            if self.diag[i] == -1 {
                g.set_loop(i, true);
            }
            for j in i + 1..self.n {
                if self.exp(i, j) != 0 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Γ^res(H): i ~ j (i ≠ j) when A_ij ∉ (1 − ζ)Z[ζ].
    ///
    /// Since ζ ≡ 1 modulo (1 − ζ), A_ij ≡ k for H_ij = ζ^k, so for q = p^f
    /// the edge is present iff p ∤ k. For other q the ideal is the whole
    /// ring and the graph is empty. The graph never has loops.
    pub fn residue_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        let Some(p) = crate::cyclotomic::prime_power_decomposition(self.q).map(|(p, _)| p) else {
            return g;
        };
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.exp(i, j) % p != 0 {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// D H D⁻¹ with D = diag(ζ^{d_i}).
    pub fn switch(&self, d: &SwitchingVector) -> Result<Self> {
        if d.len() != self.n {
            return Err(Error::domain(format!("switching vector has length {}, matrix has order {}", d.len(), self.n)));
        }
        let q = self.q;
        let mut exps = self.exps.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    exps[i * self.n + j] = (self.exp(i, j) + d.get(i) % q + q - d.get(j) % q) % q;
                }
            }
        }
        Ok(Self { n: self.n, q, exps, diag: self.diag.clone() })
    }
}

/// A q-Seidel matrix: zero diagonal, Hermitian, off-diagonal entries powers
/// of ζ_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeidelMatrix {
    n: usize,
    q: u32,
    exps: Vec<u32>,
}

impl SeidelMatrix {
    pub fn new(n: usize, q: u32, mut exps: Vec<u32>) -> Result<Self> {
        for i in 0..n.min(exps.len() / n.max(1)) {
            exps[i * n + i] = 0;
        }
        check_exponents(n, q, &exps)?;
        Ok(Self { n, q, exps })
    }

    pub fn from_upper(n: usize, q: u32, upper: &[u32]) -> Result<Self> {
        Ok(Self { n, q, exps: full_from_upper(n, q, upper)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn exp(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.n + j]
    }

    pub fn upper(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(self.exp(i, j));
            }
        }
        out
    }

    /// S + I, which lies in ℋ_n(q).
    pub fn embed(&self) -> HermitianRootMatrix {
        HermitianRootMatrix { n: self.n, q: self.q, exps: self.exps.clone(), diag: vec![1; self.n] }
    }

    pub fn to_cyc_matrix(&self, ring: &RingContext) -> Result<CycMatrix> {
        if ring.q() != self.q {
            return Err(Error::ContextMismatch { left: ring.q(), right: self.q });
        }
        Ok(CycMatrix::from_fn(ring, self.n, |i, j| {
            if i == j {
                ring.zero()
            } else {
                ring.zeta_pow(self.exp(i, j) as i64)
            }
        }))
    }
}

/// Either kind of matrix, as produced by sampling, enumeration or parsing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootMatrix {
    Hermitian(HermitianRootMatrix),
    Seidel(SeidelMatrix),
}

impl RootMatrix {
    pub fn family(&self) -> Family {
        match self {
            RootMatrix::Hermitian(_) => Family::Hermitian,
            RootMatrix::Seidel(_) => Family::Seidel,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            RootMatrix::Hermitian(h) => h.n(),
            RootMatrix::Seidel(s) => s.n(),
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            RootMatrix::Hermitian(h) => h.q(),
            RootMatrix::Seidel(s) => s.q(),
        }
    }

    pub fn exp(&self, i: usize, j: usize) -> u32 {
        match self {
            RootMatrix::Hermitian(h) => h.exp(i, j),
            RootMatrix::Seidel(s) => s.exp(i, j),
        }
    }

    /// Diagonal value as an integer: ±1 for Hermitian, 0 for Seidel.
    pub fn diag_value(&self, i: usize) -> i8 {
        match self {
            RootMatrix::Hermitian(h) => h.diag(i),
            RootMatrix::Seidel(_) => 0,
        }
    }

    pub fn to_cyc_matrix(&self, ring: &RingContext) -> Result<CycMatrix> {
        match self {
            RootMatrix::Hermitian(h) => h.to_cyc_matrix(ring),
            RootMatrix::Seidel(s) => s.to_cyc_matrix(ring),
        }
    }

    /// The matrix viewed in ℋ_n(q); Seidel matrices are shifted by I.
    pub fn as_hermitian(&self) -> HermitianRootMatrix {
        match self {
            RootMatrix::Hermitian(h) => h.clone(),
            RootMatrix::Seidel(s) => s.embed(),
        }
    }
}

impl From<HermitianRootMatrix> for RootMatrix {
    fn from(h: HermitianRootMatrix) -> Self {
        RootMatrix::Hermitian(h)
    }
}

impl From<SeidelMatrix> for RootMatrix {
    fn from(s: SeidelMatrix) -> Self {
        RootMatrix::Seidel(s)
    }
}
