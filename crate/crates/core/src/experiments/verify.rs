use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::classes::pool;
use crate::charpoly::{
    a4k1_determination, charpoly_hermitian, coefficient_pair_check, congruence_report_for, thm_a4k1_check,
};
use crate::cyclotomic::{RealCoords, RingContext};
use crate::error::{Error, Result};
use crate::matrices::{euler_normalize, Family, HermitianRootMatrix, Sampler};
use crate::walks::{
    fix_trace_identities, harary_schwenk_check, orbit_partition_check, trace_congruence_suite, IdentityReport,
    WALK_BUDGET,
};

/// Where a suite takes its matrices from.
#[derive(Clone, Debug)]
pub enum SuiteInput {
    Random { n: usize, q: u32, samples: u64, seed: u64 },
    Matrix(HermitianRootMatrix),
}

impl SuiteInput {
    fn len(&self) -> u64 {
        match self {
            SuiteInput::Random { samples, .. } => *samples,
            SuiteInput::Matrix(_) => 1,
        }
    }

    fn q(&self) -> u32 {
        match self {
            SuiteInput::Random { q, .. } => *q,
            SuiteInput::Matrix(h) => h.q(),
        }
    }

    fn n(&self) -> usize {
        match self {
            SuiteInput::Random { n, .. } => *n,
            SuiteInput::Matrix(h) => h.n(),
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            SuiteInput::Random { seed, .. } => Some(*seed),
            SuiteInput::Matrix(_) => None,
        }
    }

    fn sampler(&self) -> Result<Option<Sampler>> {
        match self {
            SuiteInput::Random { n, q, seed, .. } => Sampler::new(*n, *q, Family::Hermitian, *seed).map(Some),
            SuiteInput::Matrix(_) => Ok(None),
        }
    }

    fn get(&self, sampler: Option<&Sampler>, i: u64) -> HermitianRootMatrix {
        match (self, sampler) {
            (SuiteInput::Matrix(h), _) => h.clone(),
            (_, Some(s)) => s.draw_hermitian(i),
            (_, None) => unreachable!("random input always has a sampler"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteWitness {
    /// Sample index, or graph index for the orbit suite.
    pub sample: u64,
    pub check: String,
    pub index: Option<usize>,
    pub detail: String,
}

/// Aggregated pass/fail counts of one suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub samples: u64,
    pub checked: u64,
    pub failed: u64,
    pub checks: BTreeMap<String, CheckTally>,
    /// The first few failures.
    pub witnesses: Vec<SuiteWitness>,
}

/// Witnesses kept per report.
pub const MAX_WITNESSES: usize = 10;

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn tally(&self, check: &str) -> CheckTally {
        self.checks.get(check).copied().unwrap_or_default()
    }

    pub fn to_jsonl(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    fn new(suite: &'static str, input: Option<&SuiteInput>) -> Self {
        Self {
            suite,
            q: input.map(SuiteInput::q),
            n: input.map(SuiteInput::n),
            seed: input.and_then(SuiteInput::seed),
            samples: 0,
            checked: 0,
            failed: 0,
            checks: BTreeMap::new(),
            witnesses: Vec::new(),
        }
    }

    fn absorb(&mut self, sample: u64, outcomes: Vec<Outcome>) {
        for o in outcomes {
            let t = self.checks.entry(o.check.clone()).or_default();
            if !o.applicable {
                continue;
            }
            t.checked += 1;
            self.checked += 1;
            if !o.pass {
                t.failed += 1;
                self.failed += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(SuiteWitness { sample, check: o.check, index: o.index, detail: o.detail });
                }
            }
        }
    }
}

struct Outcome {
    check: String,
    index: Option<usize>,
    applicable: bool,
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(check: impl Into<String>, index: Option<usize>, pass: bool, detail: impl Into<String>) -> Self {
        Self { check: check.into(), index, applicable: true, pass, detail: detail.into() }
    }

    /// Maps a theorem violation to a failed outcome and passes other errors on.
    fn from_result<T>(check: &str, h: &HermitianRootMatrix, r: Result<T>) -> Result<(Self, Option<T>)> {
        match r {
            Ok(v) => Ok((Outcome::new(check, None, true, ""), Some(v))),
            Err(Error::TheoremViolation(msg)) => Ok((Outcome::new(check, None, false, format!("{}; {msg}", describe(h))), None)),
            Err(e) => Err(e),
        }
    }
}

fn describe(h: &HermitianRootMatrix) -> String {
    format!("q = {}, n = {}, exponents {:?}, diagonal {:?}", h.q(), h.n(), h.upper(), h.diag_signs())
}

fn identity_outcomes(prefix: &str, h: &HermitianRootMatrix, rep: &IdentityReport, keep: Option<&[&str]>) -> Vec<Outcome> {
    rep.records
        .iter()
        .filter(|r| keep.is_none_or(|k| k.contains(&r.name)))
        .map(|r| Outcome {
            check: format!("{prefix}{}", r.name),
            index: Some(r.index),
            applicable: r.applicable,
            pass: r.pass,
            detail: describe(h),
        })
        .collect()
}

fn run<F>(input: &SuiteInput, workers: usize, f: F) -> Result<Vec<Vec<Outcome>>>
where
    F: Fn(&HermitianRootMatrix) -> Result<Vec<Outcome>> + Sync,
{
    let sampler = input.sampler()?;
    pool(workers)?.install(|| {
        (0..input.len()).into_par_iter().map(|i| f(&input.get(sampler.as_ref(), i))).collect()
    })
}

fn collect(suite: &'static str, input: &SuiteInput, per_sample: Vec<Vec<Outcome>>) -> SuiteReport {
    let mut report = SuiteReport::new(suite, Some(input));
    for (i, o) in per_sample.into_iter().enumerate() {
        report.absorb(i as u64, o);
    }
    report.samples = input.len();
    report
}

/// Every predicate of the coefficient congruence report, per matrix.
pub fn verify_congruences(input: &SuiteInput, workers: usize) -> Result<SuiteReport> {
    let ring = RingContext::new(input.q())?;
    let per = run(input, workers, |h| {
        let rep = congruence_report_for(h, &ring)?;
        Ok(rep
            .records
            .iter()
            .map(|r| Outcome {
                check: r.name.to_string(),
                index: r.witness.as_ref().and_then(|w| w.index),
                applicable: r.applicable,
                pass: r.pass,
                detail: match &r.witness {
                    Some(w) => format!("{}; expected {}, observed {}", describe(h), w.expected, w.observed),
                    None => String::new(),
                },
            })
            .collect())
    })?;
    Ok(collect("congruences", input, per))
}

/// The closed-walk congruences at each length in `lens` and the trace
/// congruences up to the largest of them.
pub fn verify_walks(input: &SuiteInput, lens: &[usize], workers: usize) -> Result<SuiteReport> {
    let Some(&max_len) = lens.iter().max() else {
        return Err(Error::domain("the walk suite needs at least one length"));
    };
    if let Some(bad) = lens.iter().find(|&&l| l < 3) {
        return Err(Error::domain(format!("walk lengths must be at least 3, got {bad}")));
    }
    let ring = RingContext::new(input.q())?;
    let per = run(input, workers, |h| {
        let mut out = Vec::new();
        for &len in lens {
            out.extend(identity_outcomes("closed_walk.", h, &harary_schwenk_check(h, &ring, len, WALK_BUDGET)?, None));
        }
        out.extend(identity_outcomes("trace.", h, &trace_congruence_suite(h, &ring, max_len, WALK_BUDGET)?, None));
        Ok(out)
    })?;
    Ok(collect("walks", input, per))
}

/// Euler normalization: the switching class has exactly one Euler residue
/// graph, and after switching to it |𝔚_N| is even and the rotation sums
/// lie in (1−ζ)N for 3 ≤ N ≤ `max_len`.
pub fn verify_euler(input: &SuiteInput, max_len: usize, workers: usize) -> Result<SuiteReport> {
    let ring = RingContext::new(input.q())?;
    let per = run(input, workers, |h| {
        let (unique, normalized) = Outcome::from_result("unique_euler", h, euler_normalize(h))?;
        let mut out = vec![unique];
        if let Some((g, _)) = normalized {
            let rep = trace_congruence_suite(&g, &ring, max_len, WALK_BUDGET)?;
            out.push(Outcome::new("euler_graph", None, g.residue_graph().is_euler(), describe(&g)));
            out.extend(identity_outcomes("", &g, &rep, Some(&["reflection_count_even", "euler_rotation"])));
        }
        Ok(out)
    })?;
    Ok(collect("euler", input, per))
}

/// The a_{4k−1} congruence and both coefficient-pair congruences on
/// Euler-normalized matrices, then the determination of a_{4k−1} modulo
/// ρ^{2k} by the residues of a_1..a_{4k−3} modulo ρ^{4k−1} across samples.
pub fn verify_a4k1(input: &SuiteInput, k: usize, workers: usize) -> Result<SuiteReport> {
    let ring = RingContext::new(input.q())?;
    let sampler = input.sampler()?;
    let results: Vec<(Vec<Outcome>, Option<Vec<RealCoords>>)> = pool(workers)?.install(|| {
        (0..input.len())
            .into_par_iter()
            .map(|i| {
                let h = input.get(sampler.as_ref(), i);
                let (unique, normalized) = Outcome::from_result("unique_euler", &h, euler_normalize(&h))?;
                let mut out = vec![unique];
                let Some((g, _)) = normalized else { return Ok((out, None)) };
                out.push(Outcome::from_result("a4k1", &g, thm_a4k1_check(&g, k, &ring))?.0);
                out.push(Outcome::from_result("coefficient_pairs", &g, coefficient_pair_check(&g, &ring))?.0);
                let poly = charpoly_hermitian(&g, &ring)?.coeffs().to_vec();
                Ok((out, Some(poly)))
            })
            .collect::<Result<_>>()
    })?;
    let mut report = SuiteReport::new("a4k1", Some(input));
    let mut polys = Vec::new();
    for (i, (out, poly)) in results.into_iter().enumerate() {
        report.absorb(i as u64, out);
        polys.extend(poly);
    }
    report.samples = input.len();
    let det = a4k1_determination(&polys, k, Some((4 * k - 1) as u32), &ring)?;
    let detail = format!("{} groups, {} with conflicting residues", det.groups, det.conflicts);
    report.absorb(0, vec![Outcome::new("determination", None, det.conflicts == 0, detail)]);
    Ok(report)
}

/// Exponents used to weight edges in the orbit suite; any nonzero codes
/// would do.
const ORBIT_WEIGHT_CODES: [u32; 4] = [1, 3, 2, 5];
const ORBIT_WEIGHT_Q: u32 = 8;

/// Exhaustive orbit structure over every graph with loops on 1..=max_vertices
/// vertices and every N in 1..=max_len, with edge weights from an 8th-root
/// matrix: orbit partition, κ, the U ⊔ Ψ(U) split and the rotation and
/// vertex-reflection fixed-set trace identities, plus Burnside consistency
/// (the dihedral identities from N = 3 on).
pub fn verify_orbits(max_vertices: usize, max_len: usize, workers: usize) -> Result<SuiteReport> {
    if max_vertices > 5 {
        return Err(Error::domain(format!("the orbit suite is exhaustive; at most 5 vertices, got {max_vertices}")));
    }
    let ring = RingContext::new(ORBIT_WEIGHT_Q)?;
    let mut cases = Vec::new();
    for n in 1..=max_vertices {
        let pairs = n * (n - 1) / 2;
        for mask in 0u64..(1 << (pairs + n)) {
            cases.push((n, mask));
        }
    }
    let per: Vec<Vec<Outcome>> = pool(workers)?.install(|| {
        cases
            .par_iter()
            .map(|&(n, mask)| {
                let pairs = n * (n - 1) / 2;
                let upper: Vec<u32> = (0..pairs)
                    .map(|e| if mask >> e & 1 == 1 { ORBIT_WEIGHT_CODES[e % 4] } else { 0 })
                    .collect();
                let diag = (0..n).map(|v| if mask >> (pairs + v) & 1 == 1 { -1 } else { 1 }).collect();
                let h = HermitianRootMatrix::from_upper(n, ORBIT_WEIGHT_Q, &upper, diag)?;
                let g = h.underlying_graph();
                let a = h.a_transform(&ring)?;
                let mut out = Vec::new();
                for len in 1..=max_len {
                    let rep = orbit_partition_check(&g, Some(&a), len, WALK_BUDGET)?;
                    let detail = format!("{} vertices, graph mask {mask:#b}: {}", n, rep.failures.join("; "));
                    out.push(Outcome::new("orbit_partition", Some(len), rep.passed(), detail));
                    if len < 3 {
                        continue;
                    }
                    let ids = fix_trace_identities(&h, &ring, len, WALK_BUDGET)?;
                    out.extend(identity_outcomes(
                        "",
                        &h,
                        &ids,
                        Some(&["rotation_fix", "vertex_reflection_fix", "burnside_consistency"]),
                    ));
                }
                Ok(out)
            })
            .collect::<Result<_>>()
    })?;
    let mut report = SuiteReport::new("orbits", None);
    report.samples = per.len() as u64;
    for (i, o) in per.into_iter().enumerate() {
        report.absorb(i as u64, o);
    }
    Ok(report)
}
