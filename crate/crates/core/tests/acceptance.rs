//! Acceptance run: one PASS/FAIL line per criterion, plus detail lines.
//!
//! Exits nonzero when a criterion fails, except for the criteria listed in
//! `KNOWN_FAILURES`, whose failures are printed but tolerated. Set
//! `ACCEPTANCE_STRICT=1` to make every failure fatal.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclocong::charpoly::{legendre_mismatch, valuation_lemmas_check};
use cyclocong::cyclotomic::{rational_intersection_exponent, CycElem, RealCoords, ResidueLattice, RingContext, Valuation};
use cyclocong::experiments::{
    collect_classes, sharpness_probe, theorem_bound, verify_a4k1, verify_congruences, verify_euler, verify_orbits,
    verify_walks, ClassConfig, Mode, Parity, SuiteInput, SuiteReport,
};
use cyclocong::matrices::Family;

/// Criteria that fail because the statements they check do not hold in the
/// stated generality; counterexamples are printed with the FAIL line.
const KNOWN_FAILURES: &[u32] = &[5];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self { pass, summary: summary.into(), details: Vec::new() }
    }
}

type Check = fn() -> Result<Outcome, cyclocong::Error>;

fn suite_details(r: &SuiteReport) -> Vec<String> {
    let mut out: Vec<String> = r
        .checks
        .iter()
        .filter(|(_, t)| t.failed > 0)
        .map(|(name, t)| format!("{name}: {} of {} failed", t.failed, t.checked))
        .collect();
    out.extend(r.witnesses.iter().take(2).map(|w| format!("e.g. sample {}: {} at {:?}: {}", w.sample, w.check, w.index, w.detail)));
    out
}

fn exhaustive_q2() -> Result<Outcome, cyclocong::Error> {
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, limit) in [(4usize, 4u64), (5, 8)] {
        let rep = collect_classes(&ClassConfig::new(n, 2, 3, Family::Hermitian, Mode::Exhaustive, 1 << 24))?;
        pass &= rep.distinct <= limit && rep.within_bound;
        lines.push(format!("n={n}: {} matrices, {} keys (limit {limit})", rep.processed, rep.distinct));
    }
    Ok(Outcome::new(pass, lines.join("; ")))
}

fn sampled_q4() -> Result<Outcome, cyclocong::Error> {
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [4usize, 5] {
        for e in [2u32, 3] {
            let cfg = ClassConfig::new(n, 4, e, Family::Hermitian, Mode::Sample, 10_000).with_seed(20 + n as u64);
            let rep = collect_classes(&cfg)?;
            pass &= rep.within_bound;
            lines.push(format!("n={n} e={e}: {} <= {} (case {})", rep.distinct, rep.bound, rep.bound_case));
        }
    }
    Ok(Outcome::new(pass, lines.join("; ")))
}

fn sharpness() -> Result<Outcome, cyclocong::Error> {
    let mut lines = Vec::new();
    let mut saturated = true;
    let mut within = true;
    for (e, target) in [(3u32, 2u64), (4, 4)] {
        let cfg = ClassConfig::new(21, 2, e, Family::Seidel, Mode::Sample, 100_000).with_seed(1);
        let rep = sharpness_probe(&cfg)?;
        saturated &= rep.distinct == target;
        within &= rep.within_bound;
        lines.push(format!("e={e}: {} of {target} keys after {} draws", rep.distinct, rep.processed));
    }
    // Saturation is evidence only; staying within the bound is required.
    let mut out = Outcome::new(within, lines.join("; "));
    if !saturated {
        out.details.push("warning: the bound was not reached".into());
    }
    Ok(out)
}

fn congruences() -> Result<Outcome, cyclocong::Error> {
    let mut checked = 0;
    let mut failed = 0;
    let mut details = Vec::new();
    for q in [2u32, 3, 4, 5, 8, 9] {
        for n in 3..=7usize {
            let rep = verify_congruences(&SuiteInput::Random { n, q, samples: 1000, seed: 100 + q as u64 * 10 + n as u64 }, 1)?;
            checked += rep.checked;
            failed += rep.failed;
            details.extend(suite_details(&rep).into_iter().map(|d| format!("q={q} n={n}: {d}")));
        }
    }
    let mut out = Outcome::new(failed == 0, format!("30000 matrices, {checked} applicable predicates, {failed} failures"));
    out.details = details;
    Ok(out)
}

fn walks() -> Result<Outcome, cyclocong::Error> {
    let mut checked = 0;
    let mut failed = 0;
    let mut details = Vec::new();
    for q in [4u32, 8] {
        for n in [4usize, 5] {
            let input = SuiteInput::Random { n, q, samples: 100, seed: 500 + q as u64 * 10 + n as u64 };
            let rep = verify_walks(&input, &[3, 4, 5, 6, 8, 9], 1)?;
            checked += rep.checked;
            failed += rep.failed;
            details.extend(suite_details(&rep).into_iter().map(|d| format!("q={q} n={n}: {d}")));
        }
    }
    let mut out = Outcome::new(failed == 0, format!("400 matrices, {checked} applicable checks, {failed} failures"));
    if failed > 0 {
        details.push(
            "analysis: with q = 4 the odd-power Hadamard-square trace congruence fails already at k = 1 for a \
             single looped vertex (H = [-1] gives 2i, not in 2(1-i)Z[i]); with q >= 8 the reflection-corrected \
             even form fails when |W_N| is odd (e.g. q = 8, N = 6, H = [[-1, z], [conj z, 1]]). Both hold after \
             Euler normalization, see the euler criterion."
                .into(),
        );
    }
    out.details = details;
    Ok(out)
}

fn orbits() -> Result<Outcome, cyclocong::Error> {
    let rep = verify_orbits(4, 6, 1)?;
    let mut out = Outcome::new(
        rep.passed(),
        format!("{} weighted graphs, {} checks, {} failures", rep.samples, rep.checked, rep.failed),
    );
    out.details = suite_details(&rep);
    Ok(out)
}

fn euler() -> Result<Outcome, cyclocong::Error> {
    let mut checked = 0;
    let mut failed = 0;
    let mut details = Vec::new();
    for n in [3usize, 5, 7] {
        let rep = verify_euler(&SuiteInput::Random { n, q: 4, samples: 100, seed: 700 + n as u64 }, 8, 1)?;
        checked += rep.checked;
        failed += rep.failed;
        details.extend(suite_details(&rep).into_iter().map(|d| format!("n={n}: {d}")));
    }
    let mut out = Outcome::new(failed == 0, format!("300 matrices, {checked} checks, {failed} failures"));
    out.details = details;
    Ok(out)
}

fn valuations() -> Result<Outcome, cyclocong::Error> {
    let rep = valuation_lemmas_check(12);
    let legendre = legendre_mismatch(10_000);
    let mut out = Outcome::new(
        rep.passed() && legendre.is_none(),
        format!(
            "{} composition cases, {} failures; Legendre mismatch up to 10^4: {legendre:?}",
            rep.cases_checked,
            rep.failures.len()
        ),
    );
    out.details = rep.failures.iter().take(3).map(|f| format!("{f:?}")).collect();
    Ok(out)
}

fn a4k1() -> Result<Outcome, cyclocong::Error> {
    let rep = verify_a4k1(&SuiteInput::Random { n: 7, q: 4, samples: 100, seed: 900 }, 2, 1)?;
    let mut out = Outcome::new(
        rep.passed(),
        format!(
            "{} matrices; a_7 {}/{}, coefficient pairs {}/{}, determination conflicts {}",
            rep.samples,
            rep.tally("a4k1").checked - rep.tally("a4k1").failed,
            rep.tally("a4k1").checked,
            rep.tally("coefficient_pairs").checked - rep.tally("coefficient_pairs").failed,
            rep.tally("coefficient_pairs").checked,
            rep.tally("determination").failed
        ),
    );
    out.details = suite_details(&rep);
    Ok(out)
}

fn random_elem(r: &RingContext, rng: &mut ChaCha8Rng) -> CycElem {
    r.element((0..r.phi()).map(|_| BigInt::from(rng.random_range(-6i64..=6))).collect())
}

fn ring_core() -> Result<Outcome, cyclocong::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let rings: Vec<RingContext> =
        [2u32, 3, 4, 5, 7, 8, 9, 12, 16, 15].iter().map(|&q| RingContext::new(q)).collect::<Result<_, _>>()?;
    let mut failures = Vec::new();
    let trials = 10_000;
    for t in 0..trials {
        let r = &rings[t % rings.len()];
        let (a, b, c) = (random_elem(r, &mut rng), random_elem(r, &mut rng), random_elem(r, &mut rng));
        let ok = &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && (&a * &b).conj() == &a.conj() * &b.conj()
            && (&a + &b).conj() == &a.conj() + &b.conj()
            && a.conj().conj() == a;
        let omz = r.one_minus_zeta();
        let round_trip = (&a * &omz).div_one_minus_zeta().ok().as_ref() == Some(&a);
        let valuation = if r.is_prime_power() && !a.is_zero() {
            let k = rng.random_range(0..4u32);
            match (a.valuation_omz(), (&a * &omz.pow(k)).valuation_omz()) {
                (Valuation::Finite(v), Valuation::Finite(w)) => w == v + k as i64,
                _ => false,
            }
        } else {
            true
        };
        if !(ok && round_trip && valuation) && failures.len() < 3 {
            failures.push(format!("q={}: identities {ok}, division {round_trip}, valuation {valuation}", r.q()));
        }
    }
    let mut index_ok = true;
    for (q, es) in [(3u32, 1..=3u32), (4, 1..=3), (8, 1..=2), (9, 1..=2)] {
        let r = RingContext::new(q)?;
        let p = r.prime().expect("prime power");
        for e in es {
            if ResidueLattice::new(&r, e).index() != BigInt::from(p).pow(e) {
                index_ok = false;
                failures.push(format!("lattice index wrong for q={q}, e={e}"));
            }
        }
    }
    let mut rational_ok = true;
    for f in 2..=4u32 {
        let r = RingContext::new(1 << f)?;
        for e in 0..=8 {
            let t = rational_intersection_exponent(&r, e)?;
            let lattice = ResidueLattice::new(&r, e);
            let mut v = vec![0i64; r.real_dim()];
            let smallest = (1i64..)
                .find(|&k| {
                    v[0] = k;
                    lattice.contains(&RealCoords::from_i64s(&v)).expect("same ring")
                })
                .expect("some multiple lies in the ideal");
            if smallest != 1 << t {
                rational_ok = false;
                failures.push(format!("rational elements: q={}, e={e}: formula 2^{t}, scan {smallest}", 1 << f));
            }
        }
    }
    let pass = failures.is_empty();
    let mut out = Outcome::new(
        pass,
        format!("{trials} identity trials, lattice indices {index_ok}, rational-element formula {rational_ok}"),
    );
    out.details = failures;
    Ok(out)
}

fn main() -> ExitCode {
    // Sanity check of the table the criteria compare against.
    assert_eq!(theorem_bound(2, 3, Parity::Even, Family::Hermitian).map(|b| b.value).ok(), Some(4u32.into()));

    let criteria: [(u32, &str, Check); 10] = [
        (1, "exhaustive bound, q = 2", exhaustive_q2),
        (2, "sampled bound, q = 4", sampled_q4),
        (3, "sharpness evidence, n = 21 (soft)", sharpness),
        (4, "coefficient congruence suite", congruences),
        (5, "walk identity suite", walks),
        (6, "orbit structure, exhaustive", orbits),
        (7, "Euler uniqueness and post-normalization congruences", euler),
        (8, "2-adic valuation lemmas", valuations),
        (9, "a_(4k-1) congruence, q = 4, n = 7, k = 2", a4k1),
        (10, "ring core properties", ring_core),
    ];
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut fatal = 0;
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let started = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let secs = started.elapsed().as_secs_f64();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {id:>2} {name}: {} ({secs:.1}s)", outcome.summary);
        for d in &outcome.details {
            println!("         {d}");
        }
        if !outcome.pass {
            failed.push(id);
            if strict || !KNOWN_FAILURES.contains(&id) {
                fatal += 1;
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed; failed: {failed:?}", 10 - failed.len());
    if fatal > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
