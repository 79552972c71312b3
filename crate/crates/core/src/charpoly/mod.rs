//! Characteristic polynomials over Z[ζ_q] and the congruences their
//! coefficients satisfy.

mod a4k1;
mod berkowitz;
mod compositions;
mod congruence;
mod matdet;
mod poly;
#[cfg(test)]
mod tests;

pub use a4k1::{
    a4k1_determination, a4k1_evaluate, coefficient_pair_check, coefficient_pair_first_failure, thm_a4k1_check,
    A4k1Outcome, DeterminationReport, Quotients,
};
pub use berkowitz::{berkowitz, charpoly_cyc, charpoly_int, CheckedI128, CommutativeRing, Integers};
pub use compositions::{
    c_coeff, compositions, factorial, legendre_mismatch, nu2, nu2_factorial, nu2_factorial_by_division,
    partition_count, trace_from_coefficients, valuation_lemmas_check, Composition, ValuationFailure, ValuationLemma,
    ValuationReport,
};
pub use congruence::{
    congruence_report, congruence_report_for, determinant, ones_powers, CongruenceInputs, CongruenceReport,
    Predicate, PredicateRecord, Witness,
};
pub use matdet::{matdet_first_failure, matdet_relation_check, matdet_rhs};
pub use poly::{charpoly_hermitian, charpoly_real, newton_power_sums, power_sums, CharPoly};
