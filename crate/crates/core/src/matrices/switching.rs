use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Graph, HermitianRootMatrix};
use crate::error::{Error, Result};

/// Exponent codes d of a diagonal matrix D = diag(ζ^{d_i}), normalized so
/// that d_0 = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SwitchingVector {
    d: Vec<u32>,
}

impl SwitchingVector {
    pub fn new(d: Vec<u32>) -> Result<Self> {
        if d.first().is_some_and(|&x| x != 0) {
            return Err(Error::domain("switching vector must start with 0"));
        }
        Ok(Self { d })
    }

    /// Shifts every code by −d_0 modulo q; the switched matrix is unchanged.
    pub fn normalized(d: &[u32], q: u32) -> Self {
        let first = d.first().copied().unwrap_or(0) % q;
        Self { d: d.iter().map(|&x| (x % q + q - first) % q).collect() }
    }

    pub fn identity(n: usize) -> Self {
        Self { d: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.d[i]
    }

    pub fn codes(&self) -> &[u32] {
        &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }

    /// All normalized vectors of length n over Z/q, in lexicographic order.
    pub fn all(n: usize, q: u32, budget: u128) -> Result<impl Iterator<Item = SwitchingVector>> {
        let count = (q as u128).checked_pow(n.saturating_sub(1) as u32).unwrap_or(u128::MAX);
        if count > budget {
            return Err(Error::Budget { needed: count, budget });
        }
        Ok((0..count).map(move |mut idx| {
            let mut d = vec![0u32; n];
            for slot in d.iter_mut().skip(1).rev() {
                *slot = (idx % q as u128) as u32;
                idx /= q as u128;
            }
            SwitchingVector { d }
        }))
    }
}

/// Default cap on switching-class enumeration.
pub const SWITCHING_BUDGET: u128 = 1_000_000;

/// The residue graphs of every D H D⁻¹.
pub fn switching_class_residue_graphs(h: &HermitianRootMatrix, budget: u128) -> Result<BTreeSet<Graph>> {
    let mut out = BTreeSet::new();
    for d in SwitchingVector::all(h.n(), h.q(), budget)? {
        out.insert(h.switch(&d)?.residue_graph());
    }
    Ok(out)
}

/// Finds the switching whose residue graph has all degrees even, and checks
/// that the switching class holds exactly one such graph.
///
/// Requires odd n and q a power of 2 greater than 2.
pub fn find_euler_switching(h: &HermitianRootMatrix) -> Result<SwitchingVector> {
    let q = h.q();
    if h.n() % 2 == 0 {
        return Err(Error::NotApplicable(format!("Euler normalization needs odd order, got n = {}", h.n())));
    }
    if q <= 2 || !q.is_power_of_two() {
        return Err(Error::NotApplicable(format!("Euler normalization needs q a power of 2 above 2, got q = {q}")));
    }
    let mut found: Option<(SwitchingVector, Graph)> = None;
    let mut euler = BTreeSet::new();
    for d in SwitchingVector::all(h.n(), q, SWITCHING_BUDGET)? {
        let g = h.switch(&d)?.residue_graph();
        if g.is_euler() {
            if found.is_none() {
                found = Some((d, g.clone()));
            }
            euler.insert(g);
        }
    }
    match (found, euler.len()) {
        (Some((d, _)), 1) => Ok(d),
        (_, count) => {
            let class = switching_class_residue_graphs(h, SWITCHING_BUDGET)?;
            Err(Error::TheoremViolation(format!(
                "switching class of {h:?} contains {count} Euler residue graphs (expected exactly 1); \
                 Euler graphs: {euler:?}; full switching class: {class:?}"
            )))
        }
    }
}

/// Switches H to its Euler representative and returns both.
pub fn euler_normalize(h: &HermitianRootMatrix) -> Result<(HermitianRootMatrix, SwitchingVector)> {
    let d = find_euler_switching(h)?;
    Ok((h.switch(&d)?, d))
}
