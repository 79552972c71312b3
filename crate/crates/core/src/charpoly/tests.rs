use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::cyclotomic::{CycElem, RealCoords, RingContext};
use crate::error::Error;
use crate::matrices::{euler_normalize, CycMatrix, Family, HermitianRootMatrix, RootMatrix, Sampler, SwitchingVector};

fn ring(q: u32) -> RingContext {
    RingContext::new(q).unwrap()
}

fn herm(n: usize, q: u32, upper: &[u32], diag: &[i8]) -> HermitianRootMatrix {
    HermitianRootMatrix::from_upper(n, q, upper, diag.to_vec()).unwrap()
}

fn ints(r: &RingContext, v: &[i64]) -> Vec<CycElem> {
    v.iter().map(|&x| r.from_int(x)).collect()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            (p, inversions % 2 == 1)
        })
        .collect()
}

// det(xI − M) by the Leibniz expansion; returns a_0..a_n.
fn leibniz_charpoly(m: &CycMatrix) -> Vec<CycElem> {
    let r = m.ring().clone();
    let n = m.n();
    let mut total = vec![r.zero(); n + 1];
    for (perm, odd) in permutations(n) {
        // Polynomial in x, increasing degree.
        let mut poly = vec![r.one()];
        for (i, &j) in perm.iter().enumerate() {
            let entry = [-m.get(i, j), if i == j { r.one() } else { r.zero() }];
            let mut next = vec![r.zero(); poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d] += &(c * &entry[0]);
                next[d + 1] += &(c * &entry[1]);
            }
            poly = next;
        }
        for (d, c) in poly.into_iter().enumerate() {
            if odd {
                total[n - d] -= &c;
            } else {
                total[n - d] += &c;
            }
        }
    }
    total
}

fn random_matrix(r: &RingContext, n: usize, cells: &[Vec<i64>]) -> CycMatrix {
    CycMatrix::from_fn(r, n, |i, j| {
        let c = &cells[i * n + j];
        r.element(c.iter().map(|&x| BigInt::from(x)).collect())
    })
}

#[test]
fn charpoly_cyc_examples() {
    let r = ring(5);
    let zero = CycMatrix::zero(&r, 3);
    let c = charpoly_cyc(&zero);
    assert!(c[0].is_one() && c[1..].iter().all(CycElem::is_zero));
    let m = CycMatrix::from_fn(&r, 1, |_, _| r.zeta());
    assert_eq!(charpoly_cyc(&m), vec![r.one(), -r.zeta()]);
    let m = CycMatrix::from_fn(&r, 2, |i, j| r.zeta_pow((i + 2 * j) as i64));
    let c = charpoly_cyc(&m);
    assert_eq!(c[1], -m.trace());
    let det = &(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0));
    assert_eq!(c[2], det);
}

#[test]
fn charpoly_int_uses_bigint_fallback() {
    let big = 4_000_000_000_000_000_000i64;
    let cells = [big, 3, -big, big];
    let c = charpoly_int(2, &cells);
    let expected = BigInt::from(big) * BigInt::from(big) + BigInt::from(3) * BigInt::from(big);
    assert_eq!(c[2], expected);
    assert_eq!(c[1], BigInt::from(-2 * big));
    let small = charpoly_int(3, &[1, 1, 1, 1, 1, 1, 1, 1, 1]);
    assert_eq!(small, vec![BigInt::from(1), BigInt::from(-3), BigInt::from(0), BigInt::from(0)]);
}

#[test]
fn charpoly_real_examples() {
    let r2 = ring(2);
    let j = herm(3, 2, &[0, 0, 0], &[1, 1, 1]);
    let cp = charpoly_hermitian(&j, &r2).unwrap();
    let expected: Vec<RealCoords> = [1, -3, 0, 0].iter().map(|&x| RealCoords::from_i64s(&[x])).collect();
    assert_eq!(cp.coeffs(), expected.as_slice());
    let r4 = ring(4);
    let h = herm(2, 4, &[1], &[1, 1]);
    let cp = charpoly_hermitian(&h, &r4).unwrap();
    assert_eq!(cp.coeff(1), &RealCoords::from_i64s(&[-2]));
    assert!(cp.coeff(2).is_zero());
    let json = serde_json::to_string(&cp).unwrap();
    assert_eq!(json, r#"{"n":2,"q":4,"coeffs":[[1],[-2],[0]]}"#);
}

#[test]
fn charpoly_q2_fast_path_matches_generic() {
    let r2 = ring(2);
    let s = Sampler::new(6, 2, Family::Hermitian, 5).unwrap();
    for i in 0..30 {
        let h = s.draw_hermitian(i);
        let fast = charpoly_hermitian(&h, &r2).unwrap();
        let slow = charpoly_cyc(&h.to_cyc_matrix(&r2).unwrap());
        let slow: Vec<RealCoords> = slow.iter().map(|c| c.to_real().unwrap()).collect();
        assert_eq!(fast.coeffs(), slow.as_slice());
    }
}

#[test]
fn second_coefficient_and_trace_identities() {
    for q in [2u32, 3, 4, 5, 8] {
        let r = ring(q);
        let s = Sampler::new(5, q, Family::Hermitian, 77).unwrap();
        for i in 0..100 {
            let h = s.draw_hermitian(i);
            let cp = charpoly_hermitian(&h, &r).unwrap();
            let a = cp.cyc_coeffs(&r).unwrap();
            assert!(a[0].is_one());
            assert_eq!(a[2].scale_i64(2), &(&a[1] * &a[1]) - &r.from_int(25));
            let p = power_sums(&cp, &r, 2).unwrap();
            assert_eq!(p[1].to_cyc(&r).unwrap(), r.from_int(25));
            assert_eq!(p[0].to_cyc(&r).unwrap(), -&a[1]);
        }
    }
}

#[test]
fn charpoly_is_switching_invariant() {
    let r = ring(8);
    let s = Sampler::new(5, 8, Family::Hermitian, 3).unwrap();
    for i in 0..20 {
        let h = s.draw_hermitian(i);
        let d = SwitchingVector::new(vec![0, (i % 8) as u32, 3, 5, 7]).unwrap();
        let switched = h.switch(&d).unwrap();
        assert_eq!(charpoly_hermitian(&h, &r).unwrap(), charpoly_hermitian(&switched, &r).unwrap());
    }
}

#[test]
fn seidel_charpoly_shifts_identity() {
    // χ_S(x) = χ_{S+I}(x + 1).
    let r = ring(4);
    let s = Sampler::new(4, 4, Family::Seidel, 9).unwrap();
    for i in 0..10 {
        let m = s.draw(i);
        let RootMatrix::Seidel(seidel) = &m else { panic!("expected Seidel") };
        let cs = charpoly_real(&m, &r).unwrap().cyc_coeffs(&r).unwrap();
        let ch = charpoly_hermitian(&seidel.embed(), &r).unwrap().cyc_coeffs(&r).unwrap();
        // Expand Σ ch_i (x+1)^{n−i} and compare.
        let n = 4;
        let mut shifted = vec![r.zero(); n + 1];
        for (i, c) in ch.iter().enumerate() {
            let deg = n - i;
            for t in 0..=deg {
                let binom = (0..t).fold(1i64, |acc, s| acc * (deg - s) as i64 / (s + 1) as i64);
                shifted[n - t] += &c.scale_i64(binom);
            }
        }
        assert_eq!(cs, shifted);
    }
}

#[test]
fn matdet_examples() {
    let r4 = ring(4);
    let j = herm(3, 4, &[0, 0, 0], &[1, 1, 1]);
    matdet_relation_check(&j, &r4).unwrap();
    let inputs = CongruenceInputs::compute(&j, &r4).unwrap();
    assert_eq!(inputs.a, ints(&r4, &[1, -3, 0, 0]));
    let s = Sampler::new(3, 4, Family::Hermitian, 1).unwrap();
    for i in 0..50 {
        matdet_relation_check(&s.draw_hermitian(i), &r4).unwrap();
    }
    for q in [3u32, 5, 8, 9, 12] {
        let r = ring(q);
        let s = Sampler::new(5, q, Family::Hermitian, 2).unwrap();
        for i in 0..20 {
            matdet_relation_check(&s.draw_hermitian(i), &r).unwrap();
        }
    }
    let r2 = ring(2);
    assert!(matches!(matdet_relation_check(&herm(2, 2, &[0], &[1, 1]), &r2), Err(Error::NotApplicable(_))));
    let mut bad = CongruenceInputs::compute(&s_draw(5, 8, 4), &ring(8)).unwrap();
    bad.a[3] += &ring(8).one();
    assert_eq!(matdet_first_failure(&bad), Some(3));
}

fn s_draw(n: usize, q: u32, i: u64) -> HermitianRootMatrix {
    Sampler::new(n, q, Family::Hermitian, 1234).unwrap().draw_hermitian(i)
}

#[test]
fn congruence_report_q2_example() {
    let r2 = ring(2);
    let j = herm(3, 2, &[0, 0, 0], &[1, 1, 1]);
    let rep = congruence_report_for(&j, &r2).unwrap();
    assert!(rep.passed());
    for p in [Predicate::DetPowerOfTwo, Predicate::CoefficientPowerOfTwo, Predicate::PrincipalMinorSum] {
        let rec = rep.record(p).unwrap();
        assert!(rec.applicable && rec.pass);
    }
    assert!(!rep.record(Predicate::WalkCoefficientsOdd).unwrap().applicable);
    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["records"][0]["name"], "leading_coefficient");
    assert_eq!(json["records"][0]["witness"], serde_json::Value::Null);
}

#[test]
fn congruence_reports_pass_on_random_matrices() {
    for q in [2u32, 3, 4, 5, 8, 9] {
        let r = ring(q);
        for n in 3..=7 {
            let s = Sampler::new(n, q, Family::Hermitian, 1000 + n as u64).unwrap();
            for i in 0..40 {
                let h = s.draw_hermitian(i);
                let rep = congruence_report_for(&h, &r).unwrap();
                let failures: Vec<_> = rep.failures().collect();
                assert!(failures.is_empty(), "q={q} n={n} i={i}: {failures:?}");
            }
        }
    }
}

#[test]
fn congruence_applicability_table() {
    use Predicate::*;
    assert!(DetPowerOfTwo.applies(2, 5) && !DetPowerOfTwo.applies(4, 5));
    assert!(DetOneMinusZetaEven.applies(3, 4) && !DetOneMinusZetaEven.applies(3, 5));
    assert!(DetWalkOdd.applies(4, 5) && !DetWalkOdd.applies(4, 6));
    assert!(CoefficientOneMinusZeta.applies(8, 3) && !CoefficientOneMinusZeta.applies(9, 3));
    assert!(OnesPowers.applies(4, 3) && !OnesPowers.applies(2, 3));
    assert!(FirstCoefficientParity.applies(7, 3));
    assert!(Predicate::ALL.iter().all(|p| LeadingCoefficient.applies(2, 1) && !p.name().is_empty()));
}

#[test]
fn corrupted_coefficients_fail_with_witness() {
    let r2 = ring(2);
    let j = herm(3, 2, &[0, 0, 0], &[1, 1, 1]);
    let mut inputs = CongruenceInputs::compute(&j, &r2).unwrap();
    inputs.a[3] = r2.from_int(2);
    let rep = congruence_report(&inputs, &r2);
    assert!(!rep.passed());
    let rec = rep.record(Predicate::DetPowerOfTwo).unwrap();
    assert!(!rec.pass);
    assert_eq!(rec.witness.as_ref().unwrap().observed, "nu2 = 1");

    let r8 = ring(8);
    let h = s_draw(5, 8, 0);
    let mut inputs = CongruenceInputs::compute(&h, &r8).unwrap();
    inputs.b[1] += &r8.one();
    inputs.ones_powers[2] += &r8.one();
    inputs.a[4] += &r8.one();
    let rep = congruence_report(&inputs, &r8);
    let failed: Vec<&str> = rep.failures().map(|r| r.name).collect();
    assert!(failed.contains(&"walk_coefficients_odd"));
    assert!(failed.contains(&"ones_powers"));
    assert!(failed.contains(&"coefficient_rho_tier"));
    let w = rep.record(Predicate::OnesPowers).unwrap().witness.clone().unwrap();
    assert_eq!(w.index, Some(2));

    let r3 = ring(3);
    let h = s_draw(4, 3, 0);
    let mut inputs = CongruenceInputs::compute(&h, &r3).unwrap();
    inputs.a[4] += &r3.one();
    let rep = congruence_report(&inputs, &r3);
    assert!(!rep.record(Predicate::DetOneMinusZetaEven).unwrap().pass);
    assert!(!rep.record(Predicate::DetRho).unwrap().pass);
}

#[test]
fn composition_examples() {
    let x2 = compositions(2, false);
    assert_eq!(x2, vec![Composition::new(vec![0, 1]), Composition::new(vec![2, 0])]);
    assert!(compositions(2, true).is_empty());
    assert!(compositions(5, true).is_empty());
    let x6 = compositions(6, true);
    assert_eq!(x6.len(), 2);
    assert!(x6.contains(&Composition::new(vec![0, 3, 0, 0, 0, 0])));
    assert!(x6.contains(&Composition::new(vec![0, 1, 0, 1, 0, 0])));
    for d in 1..=12 {
        let all = compositions(d, false);
        assert_eq!(all.len() as u64, partition_count(d));
        assert!(all.iter().all(|x| x.weight() == d as u64));
        let unique: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }
    assert_eq!(partition_count(12), 77);
}

#[test]
fn c_coeff_and_nu2_examples() {
    assert_eq!(c_coeff(&Composition::new(vec![0, 0, 1])).unwrap(), BigRational::from_integer(1.into()));
    assert_eq!(
        c_coeff(&Composition::new(vec![3, 0, 0])).unwrap(),
        BigRational::new(1.into(), 3.into())
    );
    assert!(c_coeff(&Composition::new(vec![0, 0])).is_err());
    use crate::cyclotomic::Valuation;
    assert_eq!(nu2(&BigRational::from_integer(12.into())), Valuation::Finite(2));
    assert_eq!(nu2(&BigRational::new(3.into(), 8.into())), Valuation::Finite(-3));
    assert_eq!(nu2(&BigRational::from_integer(0.into())), Valuation::Infinite);
    // k = 1, x = (1): 2·c((2)) + c((1))² = 2.
    let x = Composition::new(vec![1]);
    let v = c_coeff(&x.doubled()).unwrap() * BigInt::from(2) + c_coeff(&x).unwrap().pow(2);
    assert_eq!(v, BigRational::from_integer(2.into()));
}

#[test]
fn valuation_lemmas_hold_exhaustively() {
    let rep = valuation_lemmas_check(12);
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.cases_checked > 100);
    assert_eq!(legendre_mismatch(10_000), None);
    for m in [0u64, 1, 2, 7, 64, 1000] {
        assert_eq!(nu2_factorial(m), nu2_factorial_by_division(m));
    }
}

#[test]
fn newton_trace_formula_matches_direct_traces() {
    let r = ring(8);
    let s = Sampler::new(5, 8, Family::Hermitian, 31).unwrap();
    for i in 0..5 {
        let a = s.draw_hermitian(i).a_transform(&r).unwrap().into_matrix();
        let b = charpoly_cyc(&a);
        let mut power = CycMatrix::identity(&r, 5);
        for k in 1..=5 {
            power = power.mul(&a);
            assert_eq!(trace_from_coefficients(&b, k), power.trace());
        }
    }
}

#[test]
fn a4k1_preconditions() {
    let r4 = ring(4);
    let h = herm(5, 4, &[0; 10], &[1; 5]);
    assert!(matches!(thm_a4k1_check(&h, 2, &r4), Err(Error::NotApplicable(_))));
    let r3 = ring(3);
    let h3 = herm(7, 3, &[0; 21], &[1; 7]);
    assert!(matches!(thm_a4k1_check(&h3, 2, &r3), Err(Error::NotApplicable(_))));
    // An odd-order matrix whose residue graph is not Euler.
    let mut upper = vec![0u32; 21];
    upper[0] = 1;
    let not_euler = herm(7, 4, &upper, &[1; 7]);
    assert!(!not_euler.residue_graph().is_euler());
    assert!(matches!(thm_a4k1_check(&not_euler, 2, &r4), Err(Error::NotApplicable(_))));
}

#[test]
fn a4k1_holds_for_euler_normalized_samples() {
    let r4 = ring(4);
    let s = Sampler::new(7, 4, Family::Hermitian, 2024).unwrap();
    for i in 0..100 {
        let (h, _) = euler_normalize(&s.draw_hermitian(i)).unwrap();
        let out = thm_a4k1_check(&h, 2, &r4).unwrap();
        assert!(out.pass);
        coefficient_pair_check(&h, &r4).unwrap();
    }
    let r8 = ring(8);
    let s = Sampler::new(7, 8, Family::Hermitian, 7).unwrap();
    for i in 0..20 {
        let (h, _) = euler_normalize(&s.draw_hermitian(i)).unwrap();
        thm_a4k1_check(&h, 2, &r8).unwrap();
        coefficient_pair_check(&h, &r8).unwrap();
    }
}

#[test]
fn a4k1_detects_corruption() {
    let r4 = ring(4);
    let (h, _) = euler_normalize(&s_draw(7, 4, 3)).unwrap();
    let mut inputs = CongruenceInputs::compute(&h, &r4).unwrap();
    assert!(a4k1_evaluate(&inputs.a, 7, 2, &r4).unwrap().pass);
    inputs.a[7] += &r4.one_minus_zeta().pow(6);
    assert!(!a4k1_evaluate(&inputs.a, 7, 2, &r4).unwrap().pass);
    inputs.a[7] += &r4.one();
    assert!(matches!(a4k1_evaluate(&inputs.a, 7, 2, &r4), Err(Error::Arithmetic(_))));

    let mut inputs = CongruenceInputs::compute(&h, &r4).unwrap();
    inputs.b[2] += &r4.one_minus_zeta();
    assert_eq!(coefficient_pair_first_failure(&inputs.a, &inputs.b, 7).unwrap(), Some((1, 0)));
}

#[test]
fn a4k1_residue_is_determined_by_lower_coefficients() {
    let r4 = ring(4);
    let s = Sampler::new(7, 4, Family::Hermitian, 99).unwrap();
    let polys: Vec<Vec<RealCoords>> = (0..300)
        .map(|i| {
            let (h, _) = euler_normalize(&s.draw_hermitian(i)).unwrap();
            charpoly_hermitian(&h, &r4).unwrap().coeffs().to_vec()
        })
        .collect();
    let rep = a4k1_determination(&polys, 2, Some(7), &r4).unwrap();
    assert_eq!(rep.conflicts, 0);
    assert_eq!(rep.samples, 300);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn charpoly_matches_leibniz(
        q in prop::sample::select(vec![3u32, 4, 5, 8, 12]),
        n in 1usize..=4,
        seed in prop::collection::vec(prop::collection::vec(-3i64..=3, 8), 16),
    ) {
        let r = ring(q);
        let phi = r.phi();
        let cells: Vec<Vec<i64>> = seed.iter().take(n * n).map(|c| c[..phi].to_vec()).collect();
        let m = random_matrix(&r, n, &cells);
        prop_assert_eq!(charpoly_cyc(&m), leibniz_charpoly(&m));
    }

    #[test]
    fn power_sums_match_direct_traces(
        q in prop::sample::select(vec![2u32, 4, 5, 8]),
        n in 1usize..=4,
        seed in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 16),
    ) {
        let r = ring(q);
        let phi = r.phi();
        let cells: Vec<Vec<i64>> = seed.iter().take(n * n).map(|c| c[..phi].to_vec()).collect();
        let m = random_matrix(&r, n, &cells);
        let p = newton_power_sums(&charpoly_cyc(&m), 2 * n);
        let mut power = CycMatrix::identity(&r, n);
        for k in 1..=2 * n {
            power = power.mul(&m);
            prop_assert_eq!(&p[k - 1], &power.trace());
        }
    }

    #[test]
    fn berkowitz_over_integers_matches_checked(cells in prop::collection::vec(-50i64..=50, 25)) {
        let exact = berkowitz(&Integers, 5, &cells.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        prop_assert_eq!(charpoly_int(5, &cells), exact);
    }
}

#[test]
fn a4k1_congruence_can_fail_for_even_order() {
    // An order-8 matrix with Euler residue graph where the congruence fails;
    // the check is therefore restricted to odd n.
    let r8 = ring(8);
    let upper = [1, 6, 6, 1, 6, 7, 7, 5, 5, 7, 7, 0, 5, 7, 5, 4, 7, 4, 6, 3, 4, 5, 0, 4, 3, 4, 6, 0];
    let h = herm(8, 8, &upper, &[-1, -1, 1, -1, -1, -1, 1, 1]);
    assert!(h.residue_graph().is_euler());
    let inputs = CongruenceInputs::compute(&h, &r8).unwrap();
    assert!(!a4k1_evaluate(&inputs.a, 8, 2, &r8).unwrap().pass);
    assert!(matches!(thm_a4k1_check(&h, 2, &r8), Err(Error::NotApplicable(_))));
}
