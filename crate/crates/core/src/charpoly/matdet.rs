use crate::cyclotomic::{CycElem, RingContext};
use crate::error::{Error, Result};
use crate::matrices::HermitianRootMatrix;

use super::congruence::CongruenceInputs;

/// Right-hand side of the matrix-determinant relation between the
/// coefficients a_j of χ_{J−(1−ζ)A} and b_j of χ_A:
/// a_j = (ζ − 1)^j (b_j + (1 − ζ)^{−1} Σ_{i=1}^{j} b_{j−i} 𝟏ᵀA^{i−1}𝟏).
///
/// Since (ζ − 1)^j/(1 − ζ) = −(ζ − 1)^{j−1}, no division is needed.
pub fn matdet_rhs(b: &[CycElem], ones_powers: &[CycElem], j: usize) -> CycElem {
    let ring = b[0].ring().clone();
    let zm1 = &ring.zeta() - &ring.one();
    let mut out = &zm1.pow(j as u32) * &b[j];
    if j > 0 {
        let mut s = ring.zero();
        for i in 1..=j {
            s += &(&b[j - i] * &ones_powers[i - 1]);
        }
        out -= &(&zm1.pow(j as u32 - 1) * &s);
    }
    out
}

/// First index j where the relation fails, or `None` if it holds for all j.
pub fn matdet_first_failure(inputs: &CongruenceInputs) -> Option<usize> {
    (0..=inputs.n).find(|&j| matdet_rhs(&inputs.b, &inputs.ones_powers, j) != inputs.a[j])
}

/// Checks the relation for H = J − (1 − ζ)A. Fails with a theorem violation
/// naming the offending j.
pub fn matdet_relation_check(h: &HermitianRootMatrix, ring: &RingContext) -> Result<()> {
    if ring.q() <= 2 {
        return Err(Error::NotApplicable("the walk matrix relation is checked for q > 2".into()));
    }
    let inputs = CongruenceInputs::compute(h, ring)?;
    match matdet_first_failure(&inputs) {
        None => Ok(()),
        Some(j) => Err(Error::TheoremViolation(format!(
            "coefficient relation fails at j = {j} for q = {}, exponents {:?}, diagonal {:?}",
            ring.q(),
            h.upper(),
            h.diag_signs()
        ))),
    }
}
