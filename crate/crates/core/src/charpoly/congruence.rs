use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::berkowitz::charpoly_cyc;
use crate::cyclotomic::{CycElem, ResidueLattice, RingContext, Valuation};
use crate::error::Result;
use crate::matrices::{CycMatrix, HermitianRootMatrix};

/// The statements checked by [`congruence_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    /// a_0 = 1.
    LeadingCoefficient,
    /// 2a_2 = a_1² − n².
    SecondCoefficient,
    /// a_1 ≡ n (mod 2).
    FirstCoefficientParity,
    /// q = 2: det H ∈ 2^{n−1}Z.
    DetPowerOfTwo,
    /// q = 2: a_k ∈ 2^{k−1}Z.
    CoefficientPowerOfTwo,
    /// q = 2: Σ_i det H[i] ∈ 2^{n−1}Z.
    PrincipalMinorSum,
    /// q = 2: a_k ∈ 2^k Z when n + k is odd.
    CoefficientPowerOfTwoOddShift,
    /// q > 2: b_i ∈ (1 − ζ) for odd i, where χ_A = Σ b_i x^{n−i}.
    WalkCoefficientsOdd,
    /// q > 2: det H ∈ (1 − ζ)^{n−1}.
    DetOneMinusZeta,
    /// q > 2, n even: det H ∈ (1 − ζ)^n.
    DetOneMinusZetaEven,
    /// q > 2: det H ∈ ρ^{⌊n/2⌋}.
    DetRho,
    /// q > 2, n odd: det A ∈ (1 − ζ).
    DetWalkOdd,
    /// q = 2^f > 2: a_j ∈ (1 − ζ)^j when n or j is even.
    CoefficientOneMinusZeta,
    /// q = 2^f > 2: 𝟏ᵀA^k𝟏 ∈ (1 − ζ) for k ≥ 1.
    OnesPowers,
    /// q > 2: a_i lies in the ρ-power tier for its index.
    CoefficientRhoTier,
}

impl Predicate {
    pub const ALL: [Predicate; 15] = [
        Predicate::LeadingCoefficient,
        Predicate::SecondCoefficient,
        Predicate::FirstCoefficientParity,
        Predicate::DetPowerOfTwo,
        Predicate::CoefficientPowerOfTwo,
        Predicate::PrincipalMinorSum,
        Predicate::CoefficientPowerOfTwoOddShift,
        Predicate::WalkCoefficientsOdd,
        Predicate::DetOneMinusZeta,
        Predicate::DetOneMinusZetaEven,
        Predicate::DetRho,
        Predicate::DetWalkOdd,
        Predicate::CoefficientOneMinusZeta,
        Predicate::OnesPowers,
        Predicate::CoefficientRhoTier,
    ];

    /// Whether the statement's hypotheses hold for ℋ_n(q).
    pub fn applies(self, q: u32, n: usize) -> bool {
        let two_power_above_two = q > 2 && q.is_power_of_two();
        match self {
            Predicate::LeadingCoefficient | Predicate::SecondCoefficient | Predicate::FirstCoefficientParity => true,
            Predicate::DetPowerOfTwo
            | Predicate::CoefficientPowerOfTwo
            | Predicate::PrincipalMinorSum
            | Predicate::CoefficientPowerOfTwoOddShift => q == 2,
            Predicate::WalkCoefficientsOdd | Predicate::DetOneMinusZeta | Predicate::DetRho => q > 2,
            Predicate::CoefficientRhoTier => q > 2,
            Predicate::DetOneMinusZetaEven => q > 2 && n % 2 == 0,
            Predicate::DetWalkOdd => q > 2 && n % 2 == 1,
            Predicate::CoefficientOneMinusZeta | Predicate::OnesPowers => two_power_above_two,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::LeadingCoefficient => "leading_coefficient",
            Predicate::SecondCoefficient => "second_coefficient",
            Predicate::FirstCoefficientParity => "first_coefficient_parity",
            Predicate::DetPowerOfTwo => "det_power_of_two",
            Predicate::CoefficientPowerOfTwo => "coefficient_power_of_two",
            Predicate::PrincipalMinorSum => "principal_minor_sum",
            Predicate::CoefficientPowerOfTwoOddShift => "coefficient_power_of_two_odd_shift",
            Predicate::WalkCoefficientsOdd => "walk_coefficients_odd",
            Predicate::DetOneMinusZeta => "det_one_minus_zeta",
            Predicate::DetOneMinusZetaEven => "det_one_minus_zeta_even",
            Predicate::DetRho => "det_rho",
            Predicate::DetWalkOdd => "det_walk_odd",
            Predicate::CoefficientOneMinusZeta => "coefficient_one_minus_zeta",
            Predicate::OnesPowers => "ones_powers",
            Predicate::CoefficientRhoTier => "coefficient_rho_tier",
        }
    }
}

/// Where a predicate failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Coefficient or power index, when the predicate ranges over one.
    pub index: Option<usize>,
    /// The ideal the value should lie in.
    pub expected: String,
    /// The observed valuation or value.
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateRecord {
    pub name: &'static str,
    pub applicable: bool,
    pub pass: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub n: usize,
    pub q: u32,
    pub records: Vec<PredicateRecord>,
}

impl CongruenceReport {
    /// True iff every applicable predicate passed.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| !r.applicable || r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PredicateRecord> {
        self.records.iter().filter(|r| r.applicable && !r.pass)
    }

    pub fn record(&self, p: Predicate) -> Option<&PredicateRecord> {
        self.records.iter().find(|r| r.name == p.name())
    }
}

/// Everything the predicates read, precomputed so tests can tamper with it.
#[derive(Clone, Debug)]
pub struct CongruenceInputs {
    pub n: usize,
    /// Coefficients a_0..a_n of χ_H.
    pub a: Vec<CycElem>,
    /// Coefficients b_0..b_n of χ_A for A = (J − H)/(1 − ζ).
    pub b: Vec<CycElem>,
    /// det H[i] for each i; only filled for q = 2.
    pub principal_minors: Vec<CycElem>,
    /// 𝟏ᵀA^k𝟏 for k = 0..=n.
    pub ones_powers: Vec<CycElem>,
}

impl CongruenceInputs {
    pub fn compute(h: &HermitianRootMatrix, ring: &RingContext) -> Result<Self> {
        let hm = h.to_cyc_matrix(ring)?;
        let a = charpoly_cyc(&hm);
        let am = h.a_transform(ring)?;
        let b = charpoly_cyc(am.matrix());
        let n = h.n();
        let principal_minors = if ring.q() == 2 {
            (0..n).map(|i| determinant(&hm.minor(i))).collect()
        } else {
            Vec::new()
        };
        Ok(Self { n, a, b, principal_minors, ones_powers: ones_powers(am.matrix(), n) })
    }
}

/// 𝟏ᵀM^k𝟏 for k = 0..=upto.
pub fn ones_powers(m: &CycMatrix, upto: usize) -> Vec<CycElem> {
    let ring = m.ring();
    let n = m.n();
    let mut v = vec![ring.one(); n];
    let mut out = Vec::with_capacity(upto + 1);
    for k in 0..=upto {
        out.push(v.iter().fold(ring.zero(), |acc, x| &acc + x));
        if k < upto {
            v = (0..n)
                .map(|i| {
                    let mut acc = ring.zero();
                    for (j, x) in v.iter().enumerate() {
                        acc += &(m.get(i, j) * x);
                    }
                    acc
                })
                .collect();
        }
    }
    out
}

/// det M from the constant term of its characteristic polynomial.
pub fn determinant(m: &CycMatrix) -> CycElem {
    let c = charpoly_cyc(m);
    let last = c.last().expect("nonempty").clone();
    if m.n() % 2 == 0 {
        last
    } else {
        -last
    }
}

fn nu2_int(x: &BigInt) -> Valuation {
    if x.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(x.trailing_zeros().unwrap_or(0) as i64)
    }
}

struct Checker {
    records: Vec<PredicateRecord>,
    q: u32,
    n: usize,
}

impl Checker {
    fn run(&mut self, p: Predicate, body: impl FnOnce() -> Option<Witness>) {
        let applicable = p.applies(self.q, self.n);
        let witness = if applicable { body() } else { None };
        self.records.push(PredicateRecord { name: p.name(), applicable, pass: witness.is_none(), witness });
    }

    /// Integer divisibility by 2^k for an element that should be rational.
    fn pow2_witness(x: &CycElem, k: u32, index: Option<usize>) -> Option<Witness> {
        let expected = format!("2^{k} Z");
        match x.as_integer() {
            Some(v) if nu2_int(v).is_at_least(k as i64) => None,
            Some(v) => Some(Witness { index, expected, observed: format!("nu2 = {}", nu2_int(v)) }),
            None => Some(Witness { index, expected, observed: format!("non-integer value {x}") }),
        }
    }

    fn omz_witness(x: &CycElem, k: u32, index: Option<usize>) -> Option<Witness> {
        if x.in_omz_power(k) {
            None
        } else {
            Some(Witness {
                index,
                expected: format!("(1 - zeta)^{k}"),
                observed: format!("valuation {}", x.valuation_omz()),
            })
        }
    }
}

/// Evaluates every applicable coefficient congruence for one matrix.
pub fn congruence_report(inputs: &CongruenceInputs, ring: &RingContext) -> CongruenceReport {
    let n = inputs.n;
    let q = ring.q();
    let a = &inputs.a;
    let b = &inputs.b;
    let mut c = Checker { records: Vec::new(), q, n };
    let det_h = if n % 2 == 0 { a[n].clone() } else { -&a[n] };

    c.run(Predicate::LeadingCoefficient, || {
        (!a[0].is_one()).then(|| Witness { index: Some(0), expected: "1".into(), observed: a[0].to_string() })
    });
    c.run(Predicate::SecondCoefficient, || {
        if n < 2 {
            return None;
        }
        let lhs = a[2].scale_i64(2);
        let rhs = &(&a[1] * &a[1]) - &ring.from_int((n * n) as i64);
        (lhs != rhs).then(|| Witness {
            index: Some(2),
            expected: format!("2 a_2 = a_1^2 - n^2 = {rhs}"),
            observed: format!("2 a_2 = {lhs}"),
        })
    });
    c.run(Predicate::FirstCoefficientParity, || {
        let ok = a[1].as_integer().is_some_and(|v| (v - BigInt::from(n)).is_even());
        (!ok).then(|| Witness { index: Some(1), expected: format!("a_1 = {n} mod 2"), observed: a[1].to_string() })
    });
    c.run(Predicate::DetPowerOfTwo, || Checker::pow2_witness(&det_h, n.saturating_sub(1) as u32, None));
    c.run(Predicate::CoefficientPowerOfTwo, || {
        (1..=n).find_map(|k| Checker::pow2_witness(&a[k], (k - 1) as u32, Some(k)))
    });
    c.run(Predicate::PrincipalMinorSum, || {
        let sum = inputs.principal_minors.iter().fold(ring.zero(), |acc, x| &acc + x);
        Checker::pow2_witness(&sum, n.saturating_sub(1) as u32, None)
    });
    c.run(Predicate::CoefficientPowerOfTwoOddShift, || {
        (1..=n).filter(|k| (n + k) % 2 == 1).find_map(|k| Checker::pow2_witness(&a[k], k as u32, Some(k)))
    });
    c.run(Predicate::WalkCoefficientsOdd, || {
        (1..=n).step_by(2).find_map(|i| Checker::omz_witness(&b[i], 1, Some(i)))
    });
    c.run(Predicate::DetOneMinusZeta, || Checker::omz_witness(&det_h, n.saturating_sub(1) as u32, None));
    c.run(Predicate::DetOneMinusZetaEven, || Checker::omz_witness(&det_h, n as u32, None));
    c.run(Predicate::DetRho, || rho_witness(ring, &det_h, (n / 2) as u32, None));
    c.run(Predicate::DetWalkOdd, || {
        let det_a = if n % 2 == 0 { b[n].clone() } else { -&b[n] };
        Checker::omz_witness(&det_a, 1, None)
    });
    c.run(Predicate::CoefficientOneMinusZeta, || {
        (0..=n).filter(|j| n % 2 == 0 || j % 2 == 0).find_map(|j| Checker::omz_witness(&a[j], j as u32, Some(j)))
    });
    c.run(Predicate::OnesPowers, || {
        (1..inputs.ones_powers.len()).find_map(|k| Checker::omz_witness(&inputs.ones_powers[k], 1, Some(k)))
    });
    let tier = |i: usize| -> u32 {
        if !q.is_power_of_two() {
            i.saturating_sub(1).div_ceil(2) as u32
        } else if n % 2 == 0 {
            i.div_ceil(2) as u32
        } else {
            (i / 2) as u32
        }
    };
    c.run(Predicate::CoefficientRhoTier, || (0..=n).find_map(|i| rho_witness(ring, &a[i], tier(i), Some(i))));

    CongruenceReport { n, q, records: c.records }
}

fn rho_witness(ring: &RingContext, x: &CycElem, e: u32, index: Option<usize>) -> Option<Witness> {
    let expected = format!("rho^{e}");
    match x.to_real() {
        Ok(r) => {
            let res = ResidueLattice::new(ring, e).canonical_residue(&r).expect("dimension matches ring");
            (!res.is_zero()).then(|| Witness { index, expected, observed: format!("residue {res}") })
        }
        Err(_) => Some(Witness { index, expected, observed: format!("non-real value {x}") }),
    }
}

/// Builds the inputs for H and evaluates the report.
pub fn congruence_report_for(h: &HermitianRootMatrix, ring: &RingContext) -> Result<CongruenceReport> {
    Ok(congruence_report(&CongruenceInputs::compute(h, ring)?, ring))
}
