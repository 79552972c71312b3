use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::compositions::{c_coeff, compositions, Composition};
use super::congruence::CongruenceInputs;
use crate::cyclotomic::{CycElem, RealCoords, ResidueLattice, RingContext};
use crate::error::{Error, Result};
use crate::matrices::HermitianRootMatrix;

fn require_two_power(ring: &RingContext) -> Result<()> {
    if ring.q() > 2 && ring.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("q = {} is not a power of 2 above 2", ring.q())))
    }
}

fn exact_div(x: &CycElem, k: u32, what: &str) -> Result<CycElem> {
    x.div_omz_power(k).ok_or_else(|| Error::Arithmetic(format!("{what} is not divisible by (1 - zeta)^{k}")))
}

/// The quotients α_i = a_{2i+1}/(1−ζ)^{2i} and
/// β_i = (a_{2i+1} + a_{2i} + a_{2i−1}(a_3 + a_2 + a_1 + n))/(1−ζ)^{2i−1},
/// for i = 1..=count; entry 0 of each vector is unused.
#[derive(Clone, Debug)]
pub struct Quotients {
    pub alpha: Vec<CycElem>,
    pub beta: Vec<CycElem>,
}

impl Quotients {
    pub fn new(a: &[CycElem], n: usize, count: usize) -> Result<Self> {
        let ring = a[0].ring().clone();
        if 2 * count + 1 > n || n < 3 {
            return Err(Error::domain(format!("quotients up to index {count} need a_{} but n = {n}", 2 * count + 1)));
        }
        let shift = &(&(&a[3] + &a[2]) + &a[1]) + &ring.from_int(n as i64);
        let mut alpha = vec![ring.zero()];
        let mut beta = vec![ring.zero()];
        for i in 1..=count {
            alpha.push(exact_div(&a[2 * i + 1], 2 * i as u32, &format!("a_{}", 2 * i + 1))?);
            let num = &(&a[2 * i + 1] + &a[2 * i]) + &(&a[2 * i - 1] * &shift);
            beta.push(exact_div(&num, 2 * i as u32 - 1, &format!("beta_{i} numerator"))?);
        }
        Ok(Self { alpha, beta })
    }

    /// P_d(x) = ∏ α_i^{x_{2i}} · ∏ β_i^{x_{2i−1}}.
    pub fn product(&self, x: &Composition) -> CycElem {
        let ring = self.alpha[0].ring().clone();
        let mut acc = ring.one();
        for j in 1..=x.len() {
            let e = x.get(j);
            if e == 0 {
                continue;
            }
            let base = if j % 2 == 0 { &self.alpha[j / 2] } else { &self.beta[j.div_ceil(2)] };
            acc = &acc * &base.pow(e);
        }
        acc
    }
}

/// Outcome of evaluating the a_{4k−1} congruence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A4k1Outcome {
    pub k: usize,
    pub pass: bool,
    /// Odd part of the common denominator of the c(x) involved.
    #[serde(with = "crate::serde_int::int")]
    pub odd_denominator: BigInt,
    /// The residual D_odd·V, which must lie in (1 − ζ).
    #[serde(skip)]
    pub residual: Option<CycElem>,
}

/// Evaluates a_{4k−1}/(1−ζ)^{4k−2} − (2k−1)(Σ_{X′(4k−2)} c·P + Σ_{X(2k−1)} c·P/(1−ζ))
/// and tests membership in (1 − ζ).
///
/// The c(x) are rational. With D = D_odd·2^s their common denominator,
/// D(1−ζ)V is computed in Z[ζ], divided back by (1−ζ) and 2^s exactly, and
/// the result D_odd·V is tested. D_odd is a unit at the prime above 2, so
/// this decides the membership 2-adically. A division that does not clear
/// is reported as an arithmetic error.
pub fn a4k1_evaluate(a: &[CycElem], n: usize, k: usize, ring: &RingContext) -> Result<A4k1Outcome> {
    require_two_power(ring)?;
    if k < 2 || 4 * k > n + 1 {
        return Err(Error::NotApplicable(format!("k = {k} outside 2..=floor((n+1)/4) for n = {n}")));
    }
    let quot = Quotients::new(a, n, 2 * k - 1)?;
    let even: Vec<(Composition, BigRational)> = compositions(4 * k - 2, true)
        .into_iter()
        .map(|x| {
            let c = c_coeff(&x).expect("nonzero");
            (x, c)
        })
        .collect();
    let odd: Vec<(Composition, BigRational)> = compositions(2 * k - 1, false)
        .into_iter()
        .map(|x| {
            let c = c_coeff(&x).expect("nonzero");
            (x, c)
        })
        .collect();
    let den = even.iter().chain(&odd).fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let s = den.trailing_zeros().unwrap_or(0);
    let odd_den = &den >> s;

    let omz = ring.one_minus_zeta();
    let lead = exact_div(&a[4 * k - 1], 4 * k as u32 - 2, &format!("a_{}", 4 * k - 1))?;
    let mut sum_even = ring.zero();
    for (x, c) in &even {
        sum_even += &quot.product(x).scale(&(c * &den).to_integer());
    }
    let mut sum_odd = ring.zero();
    for (x, c) in &odd {
        sum_odd += &quot.product(x).scale(&(c * &den).to_integer());
    }
    let factor = BigInt::from(2 * k - 1);
    // U = D(1−ζ)V.
    let u = &(&lead.scale(&den) * &omz) - &(&(&sum_even * &omz) + &sum_odd).scale(&factor);
    let dv = u
        .div_one_minus_zeta()
        .map_err(|_| Error::Arithmetic(format!("denominator (1 - zeta) does not clear for k = {k}")))?;
    let residual = dv
        .div_exact_int(&(BigInt::one() << s))
        .ok_or_else(|| Error::Arithmetic(format!("denominator 2^{s} does not clear for k = {k}")))?;
    let pass = residual.in_omz_power(1);
    Ok(A4k1Outcome { k, pass, odd_denominator: odd_den, residual: Some(residual) })
}

/// Checks the a_{4k−1} congruence for an Euler-normalized H.
///
/// Fails with `NotApplicable` unless q > 2 is a power of 2, the residue
/// graph is Euler and 2 ≤ k ≤ ⌊(n+1)/4⌋; fails with `TheoremViolation` if
/// the congruence does not hold.
pub fn thm_a4k1_check(h: &HermitianRootMatrix, k: usize, ring: &RingContext) -> Result<A4k1Outcome> {
    require_two_power(ring)?;
    if h.n() % 2 == 0 {
        return Err(Error::NotApplicable("the a_(4k-1) congruence is checked for odd n".into()));
    }
    if !h.residue_graph().is_euler() {
        return Err(Error::NotApplicable("residue graph is not Euler; normalize by switching first".into()));
    }
    let inputs = CongruenceInputs::compute(h, ring)?;
    let out = a4k1_evaluate(&inputs.a, h.n(), k, ring)?;
    if !out.pass {
        return Err(violation(h, ring, &format!("a_{} congruence fails for k = {k}", 4 * k - 1)));
    }
    Ok(out)
}

fn violation(h: &HermitianRootMatrix, ring: &RingContext, what: &str) -> Error {
    Error::TheoremViolation(format!(
        "{what}; q = {}, n = {}, exponents {:?}, diagonal {:?}",
        ring.q(),
        h.n(),
        h.upper(),
        h.diag_signs()
    ))
}

/// The two congruences tying b_{2j}, b_{2j−1} to α_j, β_j, as membership in
/// (1 − ζ)². Returns the first failing (j, which) pair, where `which` is 0
/// for the even-index statement and 1 for the odd one.
pub fn coefficient_pair_first_failure(a: &[CycElem], b: &[CycElem], n: usize) -> Result<Option<(usize, u8)>> {
    let count = n.saturating_sub(1) / 2;
    if count == 0 {
        return Ok(None);
    }
    let quot = Quotients::new(a, n, count)?;
    for j in 1..=count {
        if !(&b[2 * j] - &quot.alpha[j]).in_omz_power(2) {
            return Ok(Some((j, 0)));
        }
        if !(&b[2 * j - 1] - &quot.beta[j]).in_omz_power(2) {
            return Ok(Some((j, 1)));
        }
    }
    Ok(None)
}

/// Checks both coefficient-pair congruences for odd n and an Euler residue
/// graph.
pub fn coefficient_pair_check(h: &HermitianRootMatrix, ring: &RingContext) -> Result<()> {
    require_two_power(ring)?;
    if h.n() % 2 == 0 {
        return Err(Error::NotApplicable("coefficient pair congruences need odd n".into()));
    }
    if !h.residue_graph().is_euler() {
        return Err(Error::NotApplicable("residue graph is not Euler".into()));
    }
    let inputs = CongruenceInputs::compute(h, ring)?;
    match coefficient_pair_first_failure(&inputs.a, &inputs.b, h.n())? {
        None => Ok(()),
        Some((j, which)) => {
            let idx = if which == 0 { 2 * j } else { 2 * j - 1 };
            Err(violation(h, ring, &format!("b_{idx} congruence fails")))
        }
    }
}

/// Result of grouping coefficient vectors by a_1..a_{4k−3}.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeterminationReport {
    pub k: usize,
    pub samples: usize,
    pub groups: usize,
    /// Groups containing at least two distinct exact values of a_{4k−1}.
    pub informative_groups: usize,
    /// Groups whose a_{4k−1} residues modulo ρ^{2k} disagree.
    pub conflicts: usize,
}

/// Groups characteristic polynomials by a_1..a_{4k−3} and checks that the
/// residue of a_{4k−1} modulo ρ^{⌈(4k−1)/2⌉} is constant within each group.
///
/// With `condition_e = None` the grouping uses exact values; with `Some(e)`
/// it uses residues modulo ρ^e.
pub fn a4k1_determination(
    polys: &[Vec<RealCoords>],
    k: usize,
    condition_e: Option<u32>,
    ring: &RingContext,
) -> Result<DeterminationReport> {
    require_two_power(ring)?;
    let lattice = ResidueLattice::new(ring, (4 * k - 1).div_ceil(2) as u32);
    let condition = condition_e.map(|e| ResidueLattice::new(ring, e));
    let mut groups: BTreeMap<Vec<RealCoords>, (RealCoords, RealCoords, bool, bool)> = BTreeMap::new();
    for p in polys {
        if p.len() < 4 * k {
            return Err(Error::domain(format!("polynomial of degree {} has no a_{}", p.len() - 1, 4 * k - 1)));
        }
        let key = match &condition {
            None => p[1..=4 * k - 3].to_vec(),
            Some(l) => p[1..=4 * k - 3].iter().map(|c| l.canonical_residue(c)).collect::<Result<_>>()?,
        };
        let value = p[4 * k - 1].clone();
        let residue = lattice.canonical_residue(&value)?;
        groups
            .entry(key)
            .and_modify(|(v0, r0, distinct, conflict)| {
                *distinct |= *v0 != value;
                *conflict |= *r0 != residue;
            })
            .or_insert((value.clone(), residue, false, false));
    }
    Ok(DeterminationReport {
        k,
        samples: polys.len(),
        groups: groups.len(),
        informative_groups: groups.values().filter(|g| g.2).count(),
        conflicts: groups.values().filter(|g| g.3).count(),
    })
}
