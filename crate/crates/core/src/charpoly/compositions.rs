use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclotomic::{CycElem, Valuation};
use crate::error::{Error, Result};

/// A vector x = (x_1, …, x_d) of nonnegative integers.
///
/// Members of X(d) satisfy x_1 + 2x_2 + … + d·x_d = d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        Self(parts)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// x_i with 1-based index; zero past the end.
    pub fn get(&self, i: usize) -> u32 {
        if i == 0 {
            0
        } else {
            self.0.get(i - 1).copied().unwrap_or(0)
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// x_1 + … + x_d.
    pub fn count(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// x_1 + 2x_2 + … + d·x_d.
    pub fn weight(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &x)| (i as u64 + 1) * x as u64).sum()
    }

    /// The vector 2x, padded with zeros to length 2d.
    pub fn doubled(&self) -> Self {
        let mut v: Vec<u32> = self.0.iter().map(|x| 2 * x).collect();
        v.resize(2 * self.0.len(), 0);
        Self(v)
    }
}

/// X(d), or X′(d) when `restricted`, in a fixed deterministic order.
///
/// X′(d) keeps the vectors with x_d = 0 and x_i = 0 for all odd i.
pub fn compositions(d: usize, restricted: bool) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    fill(d, d, restricted, &mut cur, &mut out);
    out
}

// Chooses x_i for i = idx, idx−1, …, 1 with `rem` weight left.
fn fill(idx: usize, rem: usize, restricted: bool, cur: &mut Vec<u32>, out: &mut Vec<Composition>) {
    if idx == 0 {
        if rem == 0 {
            out.push(Composition(cur.clone()));
        }
        return;
    }
    let d = cur.len();
    let forced_zero = restricted && (idx == d || idx % 2 == 1);
    let max = if forced_zero { 0 } else { rem / idx };
    for x in (0..=max).rev() {
        cur[idx - 1] = x as u32;
        fill(idx - 1, rem - x * idx, restricted, cur, out);
    }
    cur[idx - 1] = 0;
}

/// Number of partitions of d, by the standard coin-change recurrence.
pub fn partition_count(d: usize) -> u64 {
    let mut p = vec![0u64; d + 1];
    p[0] = 1;
    for part in 1..=d {
        for s in part..=d {
            p[s] += p[s - part];
        }
    }
    p[d]
}

pub fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// c(x) = (x_1 + … + x_d − 1)! / (x_1! ⋯ x_d!).
pub fn c_coeff(x: &Composition) -> Result<BigRational> {
    let total = x.count();
    if total == 0 {
        return Err(Error::domain("c(x) needs a nonzero composition"));
    }
    Ok(multinomial_ratio(total - 1, x.parts()))
}

fn multinomial_ratio(top: u64, parts: &[u32]) -> BigRational {
    let den = parts.iter().fold(BigInt::one(), |acc, &m| acc * factorial(m as u64));
    BigRational::new(factorial(top), den)
}

fn nu2_int(x: &BigInt) -> Valuation {
    match x.trailing_zeros() {
        Some(t) => Valuation::Finite(t as i64),
        None => Valuation::Infinite,
    }
}

/// 2-adic valuation of a rational; negative when the reduced denominator is even.
pub fn nu2(r: &BigRational) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let num = nu2_int(r.numer()).finite().unwrap_or(0);
    let den = nu2_int(r.denom()).finite().unwrap_or(0);
    Valuation::Finite(num - den)
}

/// ν₂(m!) by Legendre's formula Σ_j ⌊m/2^j⌋.
pub fn nu2_factorial(m: u64) -> u64 {
    let mut acc = 0;
    let mut p = 2u64;
    while p <= m {
        acc += m / p;
        p = match p.checked_mul(2) {
            Some(v) => v,
            None => break,
        };
    }
    acc
}

/// ν₂(m!) by dividing each factor 2, …, m down to an odd number.
pub fn nu2_factorial_by_division(m: u64) -> u64 {
    let mut acc = 0;
    for mut i in 2..=m {
        while i % 2 == 0 {
            i /= 2;
            acc += 1;
        }
    }
    acc
}

/// First m ≤ m_max where the two ν₂(m!) computations disagree.
pub fn legendre_mismatch(m_max: u64) -> Option<u64> {
    let mut running = 0u64;
    for m in 0..=m_max {
        if m >= 2 {
            let mut i = m;
            while i % 2 == 0 {
                i /= 2;
                running += 1;
            }
        }
        if running != nu2_factorial(m) {
            return Some(m);
        }
    }
    None
}

/// Which valuation statement a failure refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationLemma {
    /// ν₂((Σm_i − 1)!/∏m_i!) ≥ −ν₂(m) for every nonzero part m.
    CoefficientLowerBound,
    /// ν₂(m!/∏m_i!) = ν₂((2m)!/∏(2m_i)!).
    DoublingInvariance,
    /// (4k−2)c(2x) + (2k−1)²c(x)² ∈ 2Z for x ∈ X(2k−1).
    DoubledSumEven,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationFailure {
    pub lemma: ValuationLemma,
    pub composition: Composition,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValuationReport {
    pub d_max: usize,
    pub cases_checked: u64,
    pub failures: Vec<ValuationFailure>,
}

impl ValuationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_part_list(parts: &[u32], witness: &Composition, report: &mut ValuationReport) {
    let total: u64 = parts.iter().map(|&m| m as u64).sum();
    if total == 0 {
        return;
    }
    report.cases_checked += 1;
    let lhs = nu2(&multinomial_ratio(total - 1, parts));
    for &m in parts.iter().filter(|&&m| m > 0) {
        let bound = -(m.trailing_zeros() as i64);
        if !lhs.is_at_least(bound) {
            report.failures.push(ValuationFailure {
                lemma: ValuationLemma::CoefficientLowerBound,
                composition: witness.clone(),
                detail: format!("nu2 = {lhs} < -nu2({m})"),
            });
        }
    }
    let single = nu2(&multinomial_ratio(total, parts));
    let doubled: Vec<u32> = parts.iter().map(|m| 2 * m).collect();
    let double = nu2(&multinomial_ratio(2 * total, &doubled));
    if single != double {
        report.failures.push(ValuationFailure {
            lemma: ValuationLemma::DoublingInvariance,
            composition: witness.clone(),
            detail: format!("{single} != {double}"),
        });
    }
}

/// Exhaustive check of the ν₂ statements over every composition of weight at
/// most `d_max`.
///
/// The first two statements are tested both on the X(s) vectors themselves
/// and on the part lists of every partition of s, which together cover every
/// multiset of nonnegative integers with sum ≤ d_max.
pub fn valuation_lemmas_check(d_max: usize) -> ValuationReport {
    let mut report = ValuationReport { d_max, ..Default::default() };
    for s in 1..=d_max {
        for x in compositions(s, false) {
            check_part_list(x.parts(), &x, &mut report);
            let partition: Vec<u32> = (1..=s).flat_map(|i| std::iter::repeat_n(i as u32, x.get(i) as usize)).collect();
            check_part_list(&partition, &x, &mut report);
        }
    }
    let two = BigInt::from(2);
    for k in 1.. {
        let d = 2 * k - 1;
        if d > d_max {
            break;
        }
        for x in compositions(d, false) {
            report.cases_checked += 1;
            let cx = c_coeff(&x).expect("nonzero");
            let c2x = c_coeff(&x.doubled()).expect("nonzero");
            let val = c2x * BigInt::from(4 * k - 2) + &cx * &cx * BigInt::from((2 * k - 1) * (2 * k - 1));
            if !val.is_integer() || !val.numer().is_multiple_of(&two) {
                report.failures.push(ValuationFailure {
                    lemma: ValuationLemma::DoubledSumEven,
                    composition: x.clone(),
                    detail: format!("value {val}"),
                });
            }
        }
    }
    report
}

/// tr(A^i) from the coefficients b_0..b_n of χ_A, via
/// i · Σ_{x ∈ X(i)} c(x) ∏_j (−b_j)^{x_j}; b_j = 0 for j > n.
pub fn trace_from_coefficients(b: &[CycElem], i: usize) -> CycElem {
    let ring = b[0].ring().clone();
    let mut acc = ring.zero();
    for x in compositions(i, false) {
        if (1..=i).any(|j| x.get(j) > 0 && j >= b.len()) {
            continue;
        }
        let coeff = c_coeff(&x).expect("nonzero") * BigInt::from(i);
        debug_assert!(coeff.is_integer());
        let mut term = ring.one();
        for j in 1..=i {
            let e = x.get(j);
            if e > 0 {
                term = &term * &(-&b[j]).pow(e);
            }
        }
        acc += &term.scale(&coeff.to_integer());
    }
    acc
}
