use proptest::prelude::*;

use super::*;
use crate::cyclotomic::RingContext;
use crate::error::Error;
use crate::matrices::{euler_normalize, Family, Graph, HermitianRootMatrix, Sampler};

fn ring(q: u32) -> RingContext {
    RingContext::new(q).unwrap()
}

fn complete(n: usize, loops: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &edges, loops).unwrap()
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges, &[]).unwrap()
}

fn walk(v: &[usize]) -> Walk {
    Walk::new(v.to_vec()).unwrap()
}

#[test]
fn dihedral_presentation() {
    for n in 3..=9 {
        let r = Dihedral::rotation(1, n);
        let s = Dihedral::reflection(0, n);
        let mut p = Dihedral::identity();
        for _ in 0..n {
            p = p.compose(r, n);
        }
        assert_eq!(p, Dihedral::identity());
        assert_eq!(s.compose(s, n), Dihedral::identity());
        let rs = r.compose(s, n);
        assert_eq!(rs.compose(rs, n), Dihedral::identity());
        for g in Dihedral::all(n) {
            assert_eq!(g.compose(g.inverse(n), n), Dihedral::identity());
        }
        assert_eq!(Dihedral::all(n).count(), 2 * n);
    }
}

proptest! {
    #[test]
    fn action_is_compatible_with_composition(
        cycle in proptest::collection::vec(0usize..4, 3..9),
        a in 0usize..20, fa in any::<bool>(), b in 0usize..20, fb in any::<bool>(),
    ) {
        let n = cycle.len();
        let w = Walk::from_cycle(&cycle).unwrap();
        let g = Dihedral { k: a % n, reflect: fa };
        let h = Dihedral { k: b % n, reflect: fb };
        prop_assert_eq!(w.act(h).act(g), w.act(g.compose(h, n)));
    }

    #[test]
    fn orbit_times_stabilizer(cycle in proptest::collection::vec(0usize..3, 3..10)) {
        let w = Walk::from_cycle(&cycle).unwrap();
        let n = w.len();
        let rec = orbit(&w).unwrap();
        let stab = Dihedral::all(n).filter(|&g| w.act(g) == w).count();
        prop_assert_eq!(rec.members.len() * stab, 2 * n);
    }
}

#[test]
fn rotation_and_reversal_conventions() {
    let w = walk(&[0, 1, 2, 0]);
    assert_eq!(w.rotate(1).vertices(), &[1, 2, 0, 1]);
    assert_eq!(w.reverse().vertices(), &[0, 2, 1, 0]);
    assert!(Walk::new(vec![0, 1]).is_err());
    assert!(walk(&[0, 1, 0]).is_palindromic());
}

#[test]
fn triangle_closed_walk_count() {
    let g = complete(3, &[]);
    let walks = closed_walks(&g, 3, false, WALK_BUDGET).unwrap();
    assert_eq!(walks.len(), 6);
    assert_eq!(closed_walk_count(&g, 3), 6);
    assert!(walks.windows(2).all(|p| p[0] < p[1]));
    assert!(walks.iter().all(|w| w.is_simple() && w.is_valid_in(&g)));
}

#[test]
fn enumeration_respects_loops_and_budget() {
    let g = complete(3, &[1]);
    for len in 1..=6 {
        let all = closed_walks(&g, len, false, WALK_BUDGET).unwrap();
        assert_eq!(all.len() as u128, closed_walk_count(&g, len));
        let simple = closed_walks(&g, len, true, WALK_BUDGET).unwrap();
        assert!(simple.iter().all(Walk::is_simple));
        assert_eq!(simple.len(), all.iter().filter(|w| w.is_simple()).count());
    }
    assert!(matches!(closed_walks(&complete(4, &[]), 12, false, 100), Err(Error::Budget { .. })));
}

#[test]
fn weight_examples() {
    let q = 4;
    let r = ring(q);
    // For q = 2 every edge has A_ij = 1.
    let h2 = HermitianRootMatrix::from_upper(3, 2, &[1, 1, 1], vec![1, 1, 1]).unwrap();
    let a2 = h2.a_transform(&ring(2)).unwrap();
    assert_eq!(weight(&a2, &walk(&[0, 1, 2, 0, 2, 0])).unwrap(), ring(2).one());
    // Exponent 1 gives A_01 = 1 and A_10 = 1 + ζ + ζ² = ζ.
    let h = HermitianRootMatrix::from_upper(3, q, &[1, 1, 1], vec![1, 1, -1]).unwrap();
    let a = h.a_transform(&r).unwrap();
    assert_eq!(weight(&a, &walk(&[0, 1, 0])).unwrap(), r.zeta());
    assert!(matches!(weight(&a, &walk(&[0, 0, 1, 0])), Err(Error::Walk(_))));
    let looped = weight(&a, &walk(&[2, 2, 0, 2])).unwrap();
    assert!(looped.in_omz_power(1));
    let zero = HermitianRootMatrix::from_upper(2, q, &[0], vec![1, 1]).unwrap().a_transform(&r).unwrap();
    assert!(matches!(weight(&zero, &walk(&[0, 1, 0])), Err(Error::Walk(_))));
}

#[test]
fn weight_plus_psi_weight_is_divisible() {
    for q in [4u32, 8] {
        let r = ring(q);
        let s = Sampler::new(4, q, Family::Hermitian, 17).unwrap();
        for i in 0..10 {
            let h = s.draw_hermitian(i);
            let g = h.underlying_graph();
            let a = h.a_transform(&r).unwrap();
            for len in 3..=6 {
                for w in closed_walks(&g, len, false, WALK_BUDGET).unwrap() {
                    let wt = weight(&a, &w).unwrap();
                    if w.is_simple() {
                        let other = weight(&a, &w.big_psi().unwrap()).unwrap();
                        assert!((&wt + &other).in_omz_power(1), "{:?}", w.dump(Some(&wt)));
                    } else {
                        assert!(wt.in_omz_power(1));
                    }
                }
            }
        }
    }
}

#[test]
fn palindromic_counts() {
    let plain = orbit(&walk(&[0, 1, 2, 0])).unwrap();
    assert_eq!(plain.palindromic_count, 0);
    let pal = orbit(&walk(&[0, 1, 2, 1, 0, 1, 2, 1, 0])).unwrap();
    assert_eq!(pal.palindromic_count, 2);
    assert!(walk(&[0, 1, 2, 0]).kappa().is_err());
}

#[test]
fn kappa_on_four_cycle() {
    let g = cycle(4);
    for w in closed_walks(&g, 8, true, WALK_BUDGET).unwrap() {
        if !w.is_palindromic() {
            continue;
        }
        let k = w.kappa().unwrap();
        assert_eq!(8 % (1 << k), 0, "{:?}", w.vertices());
        assert_eq!(w.psi().unwrap(), 8 >> k);
        if w.rotate(4) == w {
            assert!(k >= 2);
        }
    }
    // (0,1,0,1,0,1,0,1,0): w^4 = w^2 = w, w^1 differs, so κ = 3.
    assert_eq!(walk(&[0, 1, 0, 1, 0, 1, 0, 1, 0]).kappa().unwrap(), 3);
}

#[test]
fn fix_set_examples() {
    let g = complete(4, &[]);
    for len in 3..=6 {
        let all = closed_walks(&g, len, false, WALK_BUDGET).unwrap();
        assert_eq!(fix_set(&g, len, Dihedral::identity(), WALK_BUDGET).unwrap(), all);
        if len % 2 == 1 {
            assert!(fix_set(&g, len, Dihedral::reflection(0, len), WALK_BUDGET).unwrap().is_empty());
        }
    }
    assert!(fix_set(&g, 4, Dihedral { k: 7, reflect: false }, WALK_BUDGET).is_err());
}

#[test]
fn hadamard_trace_matches_walk_powers() {
    let r = ring(8);
    let s = Sampler::new(4, 8, Family::Hermitian, 3).unwrap();
    for i in 0..4 {
        let h = s.draw_hermitian(i);
        let a = h.a_transform(&r).unwrap();
        let g = h.underlying_graph();
        for d in 1..=5u32 {
            assert_eq!(hadamard_trace(&a, 1, d), a.pow(d).trace());
            for k in 1..=3u32 {
                let brute = closed_walks(&g, d as usize, false, WALK_BUDGET)
                    .unwrap()
                    .iter()
                    .fold(r.zero(), |acc, w| &acc + &weight(&a, w).unwrap().pow(k));
                assert_eq!(hadamard_trace(&a, k, d), brute);
            }
        }
    }
    let zero = HermitianRootMatrix::from_upper(3, 4, &[0, 0, 0], vec![1, 1, 1]).unwrap().a_transform(&ring(4)).unwrap();
    assert!(hadamard_trace(&zero, 2, 3).is_zero());
}

#[test]
fn bilinear_sum_examples() {
    let r = ring(4);
    let h = Sampler::new(5, 4, Family::Hermitian, 8).unwrap().draw_hermitian(0);
    let a = h.a_transform(&r).unwrap();
    assert_eq!(bilinear_reverse_sum(&a, 0), r.from_int(5));
    let m = a.hadamard(&a.transpose());
    assert_eq!(bilinear_reverse_sum(&a, 3), m.pow(3).total());
}

#[test]
fn fixed_set_trace_identities() {
    for q in [4u32, 8] {
        let r = ring(q);
        let s = Sampler::new(4, q, Family::Hermitian, 41).unwrap();
        for i in 0..5 {
            let h = s.draw_hermitian(i);
            for len in 3..=7 {
                let rep = fix_trace_identities(&h, &r, len, WALK_BUDGET).unwrap();
                for rec in &rep.records {
                    if rec.name == "reflection_sum" && len % 2 == 0 && q >= 8 {
                        continue;
                    }
                    assert!(!rec.applicable || rec.pass, "q={q} len={len} {rec:?}");
                }
            }
        }
    }
}

#[test]
fn bilinear_sum_matches_vertex_reflection_fix_sets() {
    let r = ring(8);
    let h = Sampler::new(4, 8, Family::Hermitian, 5).unwrap().draw_hermitian(2);
    let a = h.a_transform(&r).unwrap();
    let g = h.underlying_graph();
    for len in [4usize, 6] {
        let b = bilinear_reverse_sum(&a, (len / 2) as u32);
        for (el, sum) in fix_weight_sums(&a, &g, len, WALK_BUDGET).unwrap() {
            if el.reflect && el.k % 2 == 0 {
                assert_eq!(sum, b);
            }
        }
    }
}

#[test]
fn frak_w_counts_agree() {
    for q in [4u32, 8] {
        let r = ring(q);
        for n in [3usize, 4, 5] {
            let s = Sampler::new(n, q, Family::Hermitian, 60 + n as u64).unwrap();
            for i in 0..6 {
                let h = s.draw_hermitian(i);
                for len in [4usize, 6] {
                    let direct = frak_w_count(&h, &r, len, WALK_BUDGET).unwrap();
                    assert_eq!(direct, frak_w_count_by_matrix(&h, &r, len).unwrap());
                    assert_eq!(direct, frak_w_count_by_fix_filter(&h, &r, len, WALK_BUDGET).unwrap());
                }
            }
        }
    }
    let no_loops = HermitianRootMatrix::from_upper(3, 4, &[1, 3, 1], vec![1, 1, 1]).unwrap();
    assert_eq!(frak_w_count(&no_loops, &ring(4), 6, WALK_BUDGET).unwrap(), 0);
    assert!(frak_w_count(&no_loops, &ring(2), 6, WALK_BUDGET).is_err());
    assert!(frak_w_count(&no_loops, &ring(4), 5, WALK_BUDGET).is_err());
}

#[test]
fn frak_w_is_even_after_euler_normalization() {
    let r = ring(4);
    let s = Sampler::new(5, 4, Family::Hermitian, 12).unwrap();
    for i in 0..20 {
        let (h, _) = euler_normalize(&s.draw_hermitian(i)).unwrap();
        for len in [4usize, 6, 8, 10] {
            assert_eq!(frak_w_count(&h, &r, len, WALK_BUDGET).unwrap() % 2, 0);
        }
    }
}

fn hs_record(rep: &IdentityReport, name: &str) -> IdentityRecord {
    rep.records.iter().find(|r| r.name == name).cloned().unwrap()
}

#[test]
fn harary_schwenk_examples() {
    let r = ring(4);
    let s = Sampler::new(5, 4, Family::Hermitian, 90).unwrap();
    for i in 0..20 {
        let h = s.draw_hermitian(i);
        let odd = harary_schwenk_check(&h, &r, 3, WALK_BUDGET).unwrap();
        assert!(hs_record(&odd, "odd_length").applicable && odd.passed());
        let even = harary_schwenk_check(&h, &r, 4, WALK_BUDGET).unwrap();
        assert!(hs_record(&even, "reflection_corrected_even").applicable && even.passed());
    }
    let seidel = Sampler::new(5, 4, Family::Seidel, 91).unwrap();
    for i in 0..20 {
        let h = seidel.draw(i).as_hermitian();
        let rep = harary_schwenk_check(&h, &r, 4, WALK_BUDGET).unwrap();
        assert!(hs_record(&rep, "seidel_even").applicable && rep.passed());
    }
    let plain = ring(2);
    let seidel2 = Sampler::new(5, 2, Family::Seidel, 92).unwrap();
    for i in 0..20 {
        let h = seidel2.draw(i).as_hermitian();
        for len in [4usize, 6, 8] {
            let rep = harary_schwenk_check(&h, &plain, len, WALK_BUDGET).unwrap();
            assert!(hs_record(&rep, "seidel_even").applicable && rep.passed());
            assert!(!hs_record(&rep, "reflection_corrected_even").applicable);
        }
    }
    let h = HermitianRootMatrix::from_upper(3, 6, &[1, 2, 3], vec![1, 1, 1]).unwrap();
    let rep = harary_schwenk_check(&h, &ring(6), 5, WALK_BUDGET).unwrap();
    assert_eq!(rep.applicable_count(), 0);
}

#[test]
fn reflection_corrected_form_can_fail_for_q8() {
    // One looped vertex of odd residue degree makes |𝔚_6| = 1.
    let r = ring(8);
    let h = HermitianRootMatrix::from_upper(2, 8, &[1], vec![-1, 1]).unwrap();
    assert_eq!(frak_w_count(&h, &r, 6, WALK_BUDGET).unwrap(), 1);
    let rep = harary_schwenk_check(&h, &r, 6, WALK_BUDGET).unwrap();
    assert!(!hs_record(&rep, "reflection_corrected_even").pass);
    let fix = fix_trace_identities(&h, &r, 6, WALK_BUDGET).unwrap();
    assert!(hs_record(&fix, "burnside_membership").pass);
    assert!(!hs_record(&fix, "reflection_sum").pass);
    // For q = 4 the same shape passes.
    let h4 = HermitianRootMatrix::from_upper(2, 4, &[1], vec![-1, 1]).unwrap();
    assert!(harary_schwenk_check(&h4, &ring(4), 6, WALK_BUDGET).unwrap().passed());
}

#[test]
fn hadamard_square_congruence_can_fail_for_q4() {
    let r = ring(4);
    let h = HermitianRootMatrix::from_upper(1, 4, &[], vec![-1]).unwrap();
    let rep = trace_congruence_suite(&h, &r, 1, WALK_BUDGET).unwrap();
    assert!(!hs_record(&rep, "hadamard_square_trace").pass);
    let h8 = HermitianRootMatrix::from_upper(1, 8, &[], vec![-1]).unwrap();
    assert!(trace_congruence_suite(&h8, &ring(8), 1, WALK_BUDGET).unwrap().passed());
}

#[test]
fn trace_suite_examples() {
    let r = ring(8);
    let s = Sampler::new(5, 8, Family::Hermitian, 4).unwrap();
    for i in 0..20 {
        let rep = trace_congruence_suite(&s.draw_hermitian(i), &r, 6, WALK_BUDGET).unwrap();
        assert!(rep.records.iter().filter(|x| x.name == "trace").all(|x| x.applicable && x.pass));
        assert!(rep.records.iter().filter(|x| x.name == "hadamard_square_trace" && x.index % 2 == 0).all(|x| !x.applicable));
        assert!(rep.passed());
    }
    let r4 = ring(4);
    let s4 = Sampler::new(7, 4, Family::Hermitian, 6).unwrap();
    for i in 0..10 {
        let (h, _) = euler_normalize(&s4.draw_hermitian(i)).unwrap();
        let rep = trace_congruence_suite(&h, &r4, 6, WALK_BUDGET).unwrap();
        let quad = rep.records.iter().find(|x| x.name == "quadratic_trace" && x.index == 6).unwrap();
        assert!(quad.applicable && quad.pass);
        assert!(rep.failures().all(|x| x.name == "hadamard_square_trace" && x.index == 1));
    }
    let h = HermitianRootMatrix::from_upper(3, 3, &[1, 2, 1], vec![1, 1, 1]).unwrap();
    assert_eq!(trace_congruence_suite(&h, &ring(3), 4, WALK_BUDGET).unwrap().applicable_count(), 0);
}

#[test]
fn orbit_partition_on_small_graphs() {
    let r = ring(8);
    for n in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << (pairs.len() + n)) {
            let mut upper = vec![0u32; pairs.len()];
            for (e, u) in upper.iter_mut().enumerate() {
                if mask >> e & 1 == 1 {
                    *u = [1, 3, 2, 5][e % 4];
                }
            }
            let diag: Vec<i8> = (0..n).map(|v| if mask >> (pairs.len() + v) & 1 == 1 { -1 } else { 1 }).collect();
            let h = HermitianRootMatrix::from_upper(n, 8, &upper, diag).unwrap();
            let g = h.underlying_graph();
            let a = h.a_transform(&r).unwrap();
            for len in 1..=6 {
                let rep = orbit_partition_check(&g, Some(&a), len, WALK_BUDGET).unwrap();
                assert!(rep.passed(), "n={n} mask={mask} len={len} {:?}", rep.failures);
            }
        }
    }
}

#[test]
fn single_edge_two_walk_pairing() {
    let g = complete(2, &[]);
    let rep = orbit_partition_check(&g, None, 2, WALK_BUDGET).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.simple_orbits, 1);
}

#[test]
fn u_size_is_psi_for_primitive_palindromes() {
    // Period 4 with N = 8: |U| = 2 = ψ.
    let w = walk(&[0, 1, 2, 1, 0, 1, 2, 1, 0]);
    let rec = orbit(&w).unwrap();
    assert_eq!(simple_orbit_u(&rec.members).len(), rec.psi.unwrap());
    // Period 2 with N = 6: ψ = 3 but U = {w}.
    let w = walk(&[0, 1, 0, 1, 0, 1, 0]);
    let rec = orbit(&w).unwrap();
    assert_eq!(rec.psi, Some(3));
    assert_eq!(simple_orbit_u(&rec.members).len(), 1);
    let rep = orbit_partition_check(&complete(2, &[]), None, 6, WALK_BUDGET).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.psi_size_mismatches, 1);
}

#[test]
fn walk_dump_format() {
    let r = ring(4);
    let w = walk(&[0, 1, 0]);
    let v = w.dump(Some(&r.zeta()));
    assert_eq!(v["N"], 2);
    assert_eq!(v["vertices"], serde_json::json!([0, 1, 0]));
    assert_eq!(v["weight"], serde_json::json!([0, 1]));
}
