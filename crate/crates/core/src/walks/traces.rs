use num_bigint::BigInt;
use serde::Serialize;

use super::walk::{closed_walks, open_walks, weight, Dihedral, Walk};
use crate::cyclotomic::{CycElem, RingContext};
use crate::error::{Error, Result};
use crate::matrices::{CycMatrix, Graph, HermitianRootMatrix, WalkMatrix};

/// One checked identity or membership, with its applicability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityRecord {
    pub name: &'static str,
    /// The walk length or power the record refers to.
    pub index: usize,
    pub applicable: bool,
    pub pass: bool,
}

impl IdentityRecord {
    fn skipped(name: &'static str, index: usize) -> Self {
        Self { name, index, applicable: false, pass: true }
    }

    fn checked(name: &'static str, index: usize, pass: bool) -> Self {
        Self { name, index, applicable: true, pass }
    }
}

/// A list of records with a shared pass criterion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub records: Vec<IdentityRecord>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| !r.applicable || r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.records.iter().filter(|r| r.applicable && !r.pass)
    }

    pub fn applicable_count(&self) -> usize {
        self.records.iter().filter(|r| r.applicable).count()
    }
}

/// Euler's totient.
pub fn totient(mut m: u64) -> u64 {
    let mut out = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |d| n % d == 0)
}

/// tr((A^{∘k})^d).
pub fn hadamard_trace(a: &CycMatrix, k: u32, d: u32) -> CycElem {
    a.hadamard_pow(k).pow(d).trace()
}

/// 1ᵀ(A∘Aᵀ)^k 1.
pub fn bilinear_reverse_sum(a: &CycMatrix, k: u32) -> CycElem {
    let m = a.hadamard(&a.transpose());
    let n = a.n();
    let mut v: Vec<CycElem> = vec![a.ring().one(); n];
    for _ in 0..k {
        v = (0..n)
            .map(|i| {
                let mut acc = a.ring().zero();
                for (j, vj) in v.iter().enumerate() {
                    let e = m.get(i, j);
                    if !e.is_zero() && !vj.is_zero() {
                        acc += &(e * vj);
                    }
                }
                acc
            })
            .collect();
    }
    v.iter().fold(a.ring().zero(), |acc, x| &acc + x)
}

/// Σ_{d | N} φ(N/d) tr((A^{∘N/d})^d), the rotation part of the weighted
/// Burnside sum.
pub fn rotation_sum(a: &CycMatrix, len: usize) -> CycElem {
    let mut acc = a.ring().zero();
    for d in divisors(len) {
        let t = hadamard_trace(a, (len / d) as u32, d as u32);
        acc += &t.scale(&BigInt::from(totient((len / d) as u64)));
    }
    acc
}

fn require_two_power(ring: &RingContext, strict: bool) -> Result<()> {
    let ok = ring.is_power_of_two() && (!strict || ring.q() > 2);
    if ok {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("q = {} is not a power of 2{}", ring.q(), if strict { " above 2" } else { "" })))
    }
}

fn check_ring(h: &HermitianRootMatrix, ring: &RingContext) -> Result<()> {
    if h.q() != ring.q() {
        return Err(Error::ContextMismatch { left: ring.q(), right: h.q() });
    }
    Ok(())
}

fn frak_w_preconditions(h: &HermitianRootMatrix, ring: &RingContext, len: usize) -> Result<()> {
    check_ring(h, ring)?;
    require_two_power(ring, true)?;
    if len < 4 || len % 2 == 1 {
        return Err(Error::domain(format!("the reflection-fixed count needs even N >= 4, got {len}")));
    }
    Ok(())
}

/// |𝔚_N(H)|: walks fixed by the edge reflection rs whose weight times
/// (1−ζ)²/4 is a unit at (1 − ζ).
///
/// Such a walk is (u,u)·x·xᵀ·(v,v) for a walk x of length N/2 − 1 from a
/// looped vertex u to a looped vertex v, and the condition is that
/// wt(x)·wt(xᵀ) ∉ (1 − ζ). The count enumerates those x.
pub fn frak_w_count(h: &HermitianRootMatrix, ring: &RingContext, len: usize, budget: u128) -> Result<u128> {
    frak_w_preconditions(h, ring, len)?;
    let g = h.underlying_graph();
    let a = h.a_transform(ring)?;
    let steps = len / 2 - 1;
    let paths = open_walks(g.n(), steps, budget, |i, j| g.is_step(i, j))?;
    let mut count = 0u128;
    for x in paths {
        if !g.has_loop(x[0]) || !g.has_loop(x[steps]) {
            continue;
        }
        let mut prod = ring.one();
        for s in x.windows(2) {
            prod = &prod * &(a.get(s[0], s[1]) * a.get(s[1], s[0]));
        }
        if !prod.in_omz_power(1) {
            count += 1;
        }
    }
    Ok(count)
}

/// |𝔚_N(H)| as Σ_{u,v looped} (M^{N/2−1})_{uv}, M the residue adjacency.
pub fn frak_w_count_by_matrix(h: &HermitianRootMatrix, ring: &RingContext, len: usize) -> Result<u128> {
    frak_w_preconditions(h, ring, len)?;
    let res = h.residue_graph();
    let n = h.n();
    let m = res.adjacency();
    let mut cur: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect();
    for _ in 0..len / 2 - 1 {
        cur = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| cur[i][k] * u128::from(m[k][j])).sum()).collect())
            .collect();
    }
    let looped: Vec<usize> = (0..n).filter(|&v| h.diag(v) == -1).collect();
    Ok(looped.iter().flat_map(|&u| looped.iter().map(move |&v| (u, v))).map(|(u, v)| cur[u][v]).sum())
}

/// |𝔚_N(H)| by filtering fix(rs) directly from the definition.
pub fn frak_w_count_by_fix_filter(
    h: &HermitianRootMatrix,
    ring: &RingContext,
    len: usize,
    budget: u128,
) -> Result<u128> {
    frak_w_preconditions(h, ring, len)?;
    let g = h.underlying_graph();
    let a = h.a_transform(ring)?;
    let four = BigInt::from(4);
    let omz_sq = ring.one_minus_zeta().pow(2);
    let rs = Dihedral::rotation(1, len).compose(Dihedral::reflection(0, len), len);
    let mut count = 0u128;
    for w in closed_walks(&g, len, false, budget)? {
        if w.act(rs) != w {
            continue;
        }
        let scaled = &weight(&a, &w)? * &omz_sq;
        let quarter = scaled
            .div_exact_int(&four)
            .ok_or_else(|| Error::Arithmetic("reflection-fixed weight is not divisible by 4 / (1 - zeta)^2".into()))?;
        if !quarter.in_omz_power(1) {
            count += 1;
        }
    }
    Ok(count)
}

/// The Harary–Schwenk type congruences for closed N-walks.
///
/// Records, each with its own applicability:
/// * `odd_length`: odd N ≥ 3, q > 2 a power of 2; the rotation sum lies in (1−ζ)N.
/// * `seidel_even`: even N ≥ 4, q a power of 2, all diagonal entries +1;
///   rotation sum + (N/2)·1ᵀ(A∘Aᵀ)^{N/2}1 lies in (1−ζ)N.
/// * `reflection_corrected_even`: even N ≥ 4, q > 2 a power of 2; rotation
///   sum + N|𝔚_N| + (N/2)·1ᵀ(A∘Aᵀ)^{N/2}1 lies in (1−ζ)N.
/// * `euler_rotation`: N ≥ 3, q > 2 a power of 2, Euler residue graph; the
///   rotation sum alone lies in (1−ζ)N.
pub fn harary_schwenk_check(
    h: &HermitianRootMatrix,
    ring: &RingContext,
    len: usize,
    budget: u128,
) -> Result<IdentityReport> {
    check_ring(h, ring)?;
    if len < 3 {
        return Err(Error::domain("closed walk congruences need N >= 3"));
    }
    let two_power = ring.is_power_of_two();
    let strict = two_power && ring.q() > 2;
    let even = len % 2 == 0;
    let no_loops = h.diag_signs().iter().all(|&d| d == 1);
    let euler = h.residue_graph().is_euler();

    let mut report = IdentityReport::default();
    if !two_power {
        for name in ["odd_length", "seidel_even", "reflection_corrected_even", "euler_rotation"] {
            report.records.push(IdentityRecord::skipped(name, len));
        }
        return Ok(report);
    }
    let a = h.a_transform(ring)?;
    let rot = rotation_sum(&a, len);
    let member = |x: &CycElem| x.in_int_times_omz(len as u64);

    report.records.push(if strict && !even {
        IdentityRecord::checked("odd_length", len, member(&rot))
    } else {
        IdentityRecord::skipped("odd_length", len)
    });

    let half_bilinear = if even {
        Some(bilinear_reverse_sum(&a, (len / 2) as u32).scale(&BigInt::from(len / 2)))
    } else {
        None
    };
    report.records.push(match &half_bilinear {
        Some(b) if no_loops => IdentityRecord::checked("seidel_even", len, member(&(&rot + b))),
        _ => IdentityRecord::skipped("seidel_even", len),
    });

    report.records.push(match &half_bilinear {
        Some(b) if strict => {
            let w = frak_w_count(h, ring, len, budget)?;
            let total = &(&rot + b) + &ring.from_int(BigInt::from(w) * BigInt::from(len));
            IdentityRecord::checked("reflection_corrected_even", len, member(&total))
        }
        _ => IdentityRecord::skipped("reflection_corrected_even", len),
    });

    report.records.push(if strict && euler {
        IdentityRecord::checked("euler_rotation", len, member(&rot))
    } else {
        IdentityRecord::skipped("euler_rotation", len)
    });
    Ok(report)
}

/// Trace and entry-sum congruences of A for walk lengths 1..=max_len.
///
/// Records:
/// * `trace` (k ≥ 1): tr(A^k) ∈ (1−ζ).
/// * `hadamard_square_trace` (odd k): tr((A^{∘2})^k) − tr(A^k)² + 2tr(A^k)/(1−ζ) ∈ 2(1−ζ).
/// * `ones_first` (Euler, k = 1): 1ᵀA1 ∈ (1−ζ).
/// * `ones_power` (Euler, k ≥ 2): 1ᵀA^k1 ∈ (1−ζ)².
/// * `bilinear_reverse` (Euler, k ≥ 2): 1ᵀ(A∘Aᵀ)^k1 ∈ 2(1−ζ).
/// * `quadratic_trace` (Euler, N = k ≡ 2 mod 4, N > 2):
///   tr(A^{N/2})² − 2tr(A^{N/2})/(1−ζ) + tr(A^N) ∈ 2(1−ζ).
/// * `euler_rotation` (Euler, N = k ≥ 3): the rotation sum lies in (1−ζ)N.
/// * `reflection_count_even` (Euler, even N = k ≥ 4): |𝔚_N| is even.
///
/// Every record needs q > 2 a power of 2.
pub fn trace_congruence_suite(
    h: &HermitianRootMatrix,
    ring: &RingContext,
    max_len: usize,
    budget: u128,
) -> Result<IdentityReport> {
    check_ring(h, ring)?;
    let mut report = IdentityReport::default();
    let strict = ring.is_power_of_two() && ring.q() > 2;
    let euler = strict && h.residue_graph().is_euler();
    let a = if strict { Some(h.a_transform(ring)?) } else { None };
    let traces: Vec<CycElem> = match &a {
        Some(a) => {
            let mut out = vec![ring.from_int(a.n() as i64)];
            let mut p = CycMatrix::identity(ring, a.n());
            for _ in 1..=max_len {
                p = p.mul(a);
                out.push(p.trace());
            }
            out
        }
        None => Vec::new(),
    };
    let two = 2u64;
    for k in 1..=max_len {
        let Some(a) = &a else {
            for name in [
                "trace",
                "hadamard_square_trace",
                "ones_first",
                "ones_power",
                "bilinear_reverse",
                "quadratic_trace",
                "euler_rotation",
                "reflection_count_even",
            ] {
                report.records.push(IdentityRecord::skipped(name, k));
            }
            continue;
        };
        let t = &traces[k];
        report.records.push(IdentityRecord::checked("trace", k, t.in_omz_power(1)));

        report.records.push(if k % 2 == 1 {
            let pass = match t.scale_i64(2).div_one_minus_zeta() {
                Ok(t_over) => {
                    let x = &(&hadamard_trace(a, 2, k as u32) - &t.pow(2)) + &t_over;
                    x.in_int_times_omz(two)
                }
                Err(_) => false,
            };
            IdentityRecord::checked("hadamard_square_trace", k, pass)
        } else {
            IdentityRecord::skipped("hadamard_square_trace", k)
        });

        let ones = if euler { Some(a.pow(k as u32).total()) } else { None };
        report.records.push(match &ones {
            Some(x) if k == 1 => IdentityRecord::checked("ones_first", k, x.in_omz_power(1)),
            _ => IdentityRecord::skipped("ones_first", k),
        });
        report.records.push(match &ones {
            Some(x) if k >= 2 => IdentityRecord::checked("ones_power", k, x.in_omz_power(2)),
            _ => IdentityRecord::skipped("ones_power", k),
        });
        report.records.push(if euler && k >= 2 {
            IdentityRecord::checked("bilinear_reverse", k, bilinear_reverse_sum(a, k as u32).in_int_times_omz(two))
        } else {
            IdentityRecord::skipped("bilinear_reverse", k)
        });
        report.records.push(if euler && k > 2 && k % 4 == 2 {
            let half = &traces[k / 2];
            let pass = match half.scale_i64(2).div_one_minus_zeta() {
                Ok(h_over) => (&(&half.pow(2) - &h_over) + t).in_int_times_omz(two),
                Err(_) => false,
            };
            IdentityRecord::checked("quadratic_trace", k, pass)
        } else {
            IdentityRecord::skipped("quadratic_trace", k)
        });
        report.records.push(if euler && k >= 3 {
            IdentityRecord::checked("euler_rotation", k, rotation_sum(a, k).in_int_times_omz(k as u64))
        } else {
            IdentityRecord::skipped("euler_rotation", k)
        });
        report.records.push(if euler && k >= 4 && k % 2 == 0 {
            IdentityRecord::checked("reflection_count_even", k, frak_w_count(h, ring, k, budget)? % 2 == 0)
        } else {
            IdentityRecord::skipped("reflection_count_even", k)
        });
    }
    Ok(report)
}

/// Σ_{w ∈ fix(g)} wt(w) for every g ∈ D_N, indexed as `Dihedral::all`.
pub fn fix_weight_sums(a: &WalkMatrix, g: &Graph, len: usize, budget: u128) -> Result<Vec<(Dihedral, CycElem)>> {
    if len < 3 {
        return Err(Error::domain("the dihedral action needs N >= 3"));
    }
    let walks = closed_walks(g, len, false, budget)?;
    let weights: Vec<CycElem> = walks.iter().map(|w| weight(a, w)).collect::<Result<_>>()?;
    Ok(Dihedral::all(len)
        .map(|el| {
            let mut acc = a.ring().zero();
            for (w, wt) in walks.iter().zip(&weights) {
                if w.act(el) == *w {
                    acc += wt;
                }
            }
            (el, acc)
        })
        .collect())
}

/// The weighted Burnside sum Σ_g Σ_{fix(g)} wt, computed from fix sets and
/// from orbits as Σ_w 2N·wt(w)/|orb(w)|.
pub fn burnside_two_ways(a: &WalkMatrix, g: &Graph, len: usize, budget: u128) -> Result<(CycElem, CycElem)> {
    let by_fix = fix_weight_sums(a, g, len, budget)?.into_iter().fold(a.ring().zero(), |acc, (_, s)| &acc + &s);
    let mut by_orbit = a.ring().zero();
    for w in closed_walks(g, len, false, budget)? {
        let orbit_size = orbit_size(&w);
        let wt = weight(a, &w)?;
        by_orbit += &wt.scale(&BigInt::from(2 * len / orbit_size));
    }
    Ok((by_fix, by_orbit))
}

fn orbit_size(w: &Walk) -> usize {
    let mut members: Vec<Walk> = Dihedral::all(w.len()).map(|g| w.act(g)).collect();
    members.sort();
    members.dedup();
    members.len()
}

/// Checks the fixed-set trace identities of A for closed N-walks in Γ(H):
/// * `rotation_fix` (every k): Σ_{fix(r^k)} wt = tr((A^{∘N/gcd})^{gcd});
/// * `vertex_reflection_fix` (even N, every r^{2k}s): Σ wt = 1ᵀ(A∘Aᵀ)^{N/2}1;
/// * `reflection_sum` (q a power of 2): for odd N the full reflection sum lies
///   in (1−ζ)N; for even N, and q > 2, the edge-reflection sum minus N|𝔚_N| does;
/// * `burnside_consistency`: the two Burnside computations agree;
/// * `burnside_membership` (q > 2 a power of 2): the Burnside sum lies in (1−ζ)N.
pub fn fix_trace_identities(
    h: &HermitianRootMatrix,
    ring: &RingContext,
    len: usize,
    budget: u128,
) -> Result<IdentityReport> {
    check_ring(h, ring)?;
    let g = h.underlying_graph();
    let a = h.a_transform(ring)?;
    let sums = fix_weight_sums(&a, &g, len, budget)?;
    let mut report = IdentityReport::default();
    let mut rot_ok = true;
    let mut refl_ok = true;
    let bilinear = if len % 2 == 0 { Some(bilinear_reverse_sum(&a, (len / 2) as u32)) } else { None };
    let mut reflection_total = ring.zero();
    let mut edge_total = ring.zero();
    for (el, s) in &sums {
        if !el.reflect {
            let d = num_integer::gcd(el.k, len);
            rot_ok &= *s == hadamard_trace(&a, (len / d) as u32, d as u32);
        } else {
            reflection_total += s;
            if el.k % 2 == 0 {
                if let Some(b) = &bilinear {
                    refl_ok &= s == b;
                }
            } else {
                edge_total += s;
            }
        }
    }
    report.records.push(IdentityRecord::checked("rotation_fix", len, rot_ok));
    report.records.push(if bilinear.is_some() {
        IdentityRecord::checked("vertex_reflection_fix", len, refl_ok)
    } else {
        IdentityRecord::skipped("vertex_reflection_fix", len)
    });
    let strict = ring.is_power_of_two() && ring.q() > 2;
    report.records.push(if len % 2 == 1 && ring.is_power_of_two() {
        IdentityRecord::checked("reflection_sum", len, reflection_total.in_int_times_omz(len as u64))
    } else if len % 2 == 0 && strict {
        let w = frak_w_count(h, ring, len, budget)?;
        let x = &edge_total - &ring.from_int(BigInt::from(w) * BigInt::from(len));
        IdentityRecord::checked("reflection_sum", len, x.in_int_times_omz(len as u64))
    } else {
        IdentityRecord::skipped("reflection_sum", len)
    });
    let (by_fix, by_orbit) = burnside_two_ways(&a, &g, len, budget)?;
    report.records.push(IdentityRecord::checked("burnside_consistency", len, by_fix == by_orbit));
    report.records.push(if strict {
        IdentityRecord::checked("burnside_membership", len, by_fix.in_int_times_omz(len as u64))
    } else {
        IdentityRecord::skipped("burnside_membership", len)
    });
    Ok(report)
}
