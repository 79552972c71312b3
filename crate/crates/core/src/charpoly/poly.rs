use num_bigint::BigInt;
use serde::Serialize;

use super::berkowitz::{charpoly_cyc, charpoly_int};
use crate::cyclotomic::{CycElem, RealCoords, RingContext};
use crate::error::{Error, Result};
use crate::matrices::{HermitianRootMatrix, RootMatrix};

/// χ(x) = Σ a_i x^{n−i} with coefficients in the real subring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CharPoly {
    n: usize,
    q: u32,
    coeffs: Vec<RealCoords>,
}

impl CharPoly {
    pub fn new(q: u32, coeffs: Vec<RealCoords>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("a characteristic polynomial has at least one coefficient"));
        }
        Ok(Self { n: coeffs.len() - 1, q, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[RealCoords] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RealCoords {
        &self.coeffs[i]
    }

    /// All coefficients as elements of Z[ζ].
    pub fn cyc_coeffs(&self, ring: &RingContext) -> Result<Vec<CycElem>> {
        self.coeffs.iter().map(|c| c.to_cyc(ring)).collect()
    }
}

/// det(xI − M) for a Hermitian or Seidel matrix, with coefficients in ρ
/// coordinates.
pub fn charpoly_real(m: &RootMatrix, ring: &RingContext) -> Result<CharPoly> {
    if ring.q() != m.q() {
        return Err(Error::ContextMismatch { left: ring.q(), right: m.q() });
    }
    let n = m.n();
    if m.q() == 2 {
        let cells: Vec<i64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                if i == j {
                    m.diag_value(i) as i64
                } else if m.exp(i, j) == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let coeffs = charpoly_int(n, &cells).into_iter().map(|c| RealCoords::new(vec![c])).collect();
        return CharPoly::new(2, coeffs);
    }
    let coeffs = charpoly_cyc(&m.to_cyc_matrix(ring)?);
    let real = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.to_real().map_err(|_| {
                Error::Arithmetic(format!("coefficient a_{i} = {c} of a Hermitian matrix is not real"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CharPoly::new(m.q(), real)
}

pub fn charpoly_hermitian(h: &HermitianRootMatrix, ring: &RingContext) -> Result<CharPoly> {
    charpoly_real(&RootMatrix::Hermitian(h.clone()), ring)
}

/// Power sums p_1..p_upto of the roots of Σ c_i x^{n−i} (so p_k = tr M^k),
/// from Newton's identities.
pub fn newton_power_sums(coeffs: &[CycElem], upto: usize) -> Vec<CycElem> {
    let ring = coeffs[0].ring().clone();
    let n = coeffs.len() - 1;
    let mut p: Vec<CycElem> = Vec::with_capacity(upto);
    for k in 1..=upto {
        let mut acc = if k <= n { coeffs[k].scale(&BigInt::from(-(k as i64))) } else { ring.zero() };
        for i in 1..k.min(n + 1) {
            acc -= &(&coeffs[i] * &p[k - i - 1]);
        }
        p.push(acc);
    }
    p
}

/// tr(M^k) for k = 1..upto, recovered from the characteristic polynomial.
pub fn power_sums(cp: &CharPoly, ring: &RingContext, upto: usize) -> Result<Vec<RealCoords>> {
    let coeffs = cp.cyc_coeffs(ring)?;
    newton_power_sums(&coeffs, upto).iter().map(CycElem::to_real).collect()
}
