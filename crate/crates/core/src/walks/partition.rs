use std::collections::BTreeSet;

use serde::Serialize;

use super::walk::{closed_walks, orbits, weight, Dihedral, Walk};
use crate::cyclotomic::CycElem;
use crate::error::Result;
use crate::matrices::{Graph, WalkMatrix};

/// Outcome of checking orbit structure for closed N-walks of one graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrbitCheckReport {
    #[serde(rename = "N")]
    pub len: usize,
    pub walks: usize,
    pub orbits: usize,
    pub simple_orbits: usize,
    /// Simple orbits with two palindromic members where |U| differs from
    /// ψ because the rotation period of the palindrome is not N/2^{κ−1}.
    pub psi_size_mismatches: usize,
    pub failures: Vec<String>,
}

impl OrbitCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// U for a simple orbit: the rotation class if it has no palindromes,
/// otherwise {w^i : 0 ≤ i < p/2} for a palindromic member w of rotation
/// period p.
pub fn simple_orbit_u(members: &[Walk]) -> Vec<Walk> {
    match members.iter().find(|w| w.is_palindromic()) {
        None => {
            let w = &members[0];
            let mut u: Vec<Walk> = (0..w.len()).map(|i| w.rotate(i)).collect();
            u.sort();
            u.dedup();
            u
        }
        Some(w) => (0..w.rotation_period() / 2).map(|i| w.rotate(i)).collect(),
    }
}

/// Checks, for every orbit of closed N-walks in `g`:
/// * orbit size times stabilizer size is 2N;
/// * simple orbits have 0 or 2 palindromic members, and U ⊔ Ψ(U) is the
///   orbit with U and Ψ(U) disjoint;
/// * with weights, each walk in U has the same weight, and
///   a non-simple orbit either has one weight or splits as the rotation
///   class of some x with wt(x) ≠ wt(xᵀ) and that of xᵀ, each of constant
///   weight;
/// * κ(w) ≥ k forces 2^k | N for palindromic simple walks.
///
/// For N = 2 it checks the pairing (v,w,v) ↔ (w,v,w) of simple walks; N = 1
/// has no simple walks.
pub fn orbit_partition_check(g: &Graph, weights: Option<&WalkMatrix>, len: usize, budget: u128) -> Result<OrbitCheckReport> {
    let walks = closed_walks(g, len, false, budget)?;
    let mut report = OrbitCheckReport { len, walks: walks.len(), ..Default::default() };
    if len <= 2 {
        check_short(&walks, len, &mut report);
        return Ok(report);
    }
    let weight_of = |w: &Walk| -> Result<Option<CycElem>> { weights.map(|a| weight(a, w)).transpose() };
    for rec in orbits(&walks)? {
        report.orbits += 1;
        let rep = &rec.representative;
        let stab = Dihedral::all(len).filter(|&el| rep.act(el) == *rep).count();
        if rec.members.len() * stab != 2 * len {
            report.failures.push(format!("orbit of {:?}: |orbit| {} * |stab| {stab} != 2N", rep.vertices(), rec.members.len()));
        }
        if rec.simple {
            report.simple_orbits += 1;
            check_simple(&rec.members, rec.palindromic_count, &weight_of, &mut report)?;
        } else {
            check_non_simple(&rec.members, &weight_of, &mut report)?;
        }
    }
    Ok(report)
}

fn check_short(walks: &[Walk], len: usize, report: &mut OrbitCheckReport) {
    let simple: BTreeSet<&Walk> = walks.iter().filter(|w| w.is_simple()).collect();
    if len == 1 {
        if !simple.is_empty() {
            report.failures.push("a closed 1-walk is simple".into());
        }
        return;
    }
    for w in &simple {
        let partner = w.rotate(1);
        if partner == **w || !simple.contains(&partner) || partner.rotate(1) != **w {
            report.failures.push(format!("2-walk {:?} has no distinct partner", w.vertices()));
        }
    }
    report.orbits = simple.len() / 2;
    report.simple_orbits = report.orbits;
}

fn check_simple(
    members: &[Walk],
    palindromic: usize,
    weight_of: &dyn Fn(&Walk) -> Result<Option<CycElem>>,
    report: &mut OrbitCheckReport,
) -> Result<()> {
    let rep = &members[0];
    if palindromic != 0 && palindromic != 2 {
        report.failures.push(format!("orbit of {:?} has {palindromic} palindromic members", rep.vertices()));
        return Ok(());
    }
    for w in members.iter().filter(|w| w.is_palindromic()) {
        // κ fails with a violation when its divisibility consequence fails.
        if let Err(e) = w.kappa() {
            report.failures.push(e.to_string());
            return Ok(());
        }
    }
    let u = simple_orbit_u(members);
    let image: Vec<Walk> = u.iter().map(|w| w.big_psi()).collect::<Result<_>>()?;
    let u_set: BTreeSet<&Walk> = u.iter().collect();
    let image_set: BTreeSet<&Walk> = image.iter().collect();
    let orbit_set: BTreeSet<&Walk> = members.iter().collect();
    let disjoint = u_set.is_disjoint(&image_set) && image_set.len() == image.len();
    let union: BTreeSet<&Walk> = u_set.union(&image_set).copied().collect();
    if !disjoint || union != orbit_set {
        report.failures.push(format!("U and Psi(U) do not partition the orbit of {:?}", rep.vertices()));
    }
    if palindromic == 2 {
        let w = members.iter().find(|w| w.is_palindromic()).expect("palindrome present");
        if u.len() != w.psi()? {
            report.psi_size_mismatches += 1;
        }
    }
    let weights: Vec<Option<CycElem>> = u.iter().map(weight_of).collect::<Result<_>>()?;
    if let Some(Some(first)) = weights.first() {
        if weights.iter().any(|w| w.as_ref() != Some(first)) {
            report.failures.push(format!("weight is not constant on U for the orbit of {:?}", rep.vertices()));
        }
    }
    Ok(())
}

fn check_non_simple(
    members: &[Walk],
    weight_of: &dyn Fn(&Walk) -> Result<Option<CycElem>>,
    report: &mut OrbitCheckReport,
) -> Result<()> {
    let weights: Vec<Option<CycElem>> = members.iter().map(weight_of).collect::<Result<_>>()?;
    if weights.iter().any(Option::is_none) {
        return Ok(());
    }
    let weights: Vec<CycElem> = weights.into_iter().map(Option::unwrap).collect();
    if weights.iter().all(|w| *w == weights[0]) {
        return Ok(());
    }
    let rep = &members[0];
    let Some(x) = members.iter().zip(&weights).find_map(|(x, wx)| {
        let pos = members.iter().position(|m| *m == x.reverse())?;
        (weights[pos] != *wx).then_some(x)
    }) else {
        report.failures.push(format!("orbit of {:?} has several weights but no x with wt(x) != wt(x^T)", rep.vertices()));
        return Ok(());
    };
    let class = |w: &Walk| -> BTreeSet<Walk> { (0..w.len()).map(|k| w.rotate(k)).collect() };
    let u = class(x);
    let ut = class(&x.reverse());
    let orbit: BTreeSet<Walk> = members.iter().cloned().collect();
    let union: BTreeSet<Walk> = u.union(&ut).cloned().collect();
    if !u.is_disjoint(&ut) || union != orbit {
        report.failures.push(format!("U and U^T do not partition the non-simple orbit of {:?}", rep.vertices()));
    }
    for part in [&u, &ut] {
        let ws: BTreeSet<usize> = part
            .iter()
            .map(|w| {
                let i = members.iter().position(|m| m == w).expect("member");
                weights.iter().position(|v| *v == weights[i]).expect("present")
            })
            .collect();
        if ws.len() != 1 {
            report.failures.push(format!("weight is not constant on a half of the orbit of {:?}", rep.vertices()));
        }
    }
    Ok(())
}
