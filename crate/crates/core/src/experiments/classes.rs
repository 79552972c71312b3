use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{theorem_bound, BoundCase, Parity};
use crate::charpoly::{charpoly_real, CharPoly};
use crate::cyclotomic::{RealCoords, ResidueLattice, RingContext};
use crate::error::{Error, Result};
use crate::matrices::{Enumeration, Family, RootMatrix, Sampler};

/// Default cap on the number of distinct keys held in memory.
pub const KEY_CAP: usize = 10_000_000;

/// The coefficient residues a_1..a_n of a characteristic polynomial modulo
/// ρ^e, each in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueKey {
    pub e: u32,
    pub residues: Vec<RealCoords>,
}

impl ResidueKey {
    /// Byte encoding: per coordinate a length byte and the little-endian
    /// two's-complement bytes.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.residues.len() * 4 + 4);
        out.extend_from_slice(&self.e.to_le_bytes());
        for c in &self.residues {
            for x in c.coords() {
                let bytes = x.to_signed_bytes_le();
                out.push(bytes.len() as u8);
                out.extend_from_slice(&bytes);
            }
        }
        out
    }
}

impl fmt::Display for ResidueKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .residues
            .iter()
            .map(|c| c.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join(":"))
    }
}

/// Reduces a_1..a_n of `cp` against `lattice`.
pub fn residue_key(cp: &CharPoly, lattice: &ResidueLattice) -> Result<ResidueKey> {
    let residues = cp.coeffs()[1..].iter().map(|c| lattice.canonical_residue(c)).collect::<Result<_>>()?;
    Ok(ResidueKey { e: lattice.e(), residues })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sample,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sample" => Ok(Mode::Sample),
            other => Err(Error::Parse(format!("unknown mode {other:?}, expected exhaustive or sample"))),
        }
    }
}

/// How coefficients are turned into keys. `Unreduced` skips the reduction
/// and exists to check that bound violations are detected.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reducer {
    #[default]
    Canonical,
    Unreduced,
}

/// Parameters of a class-collection run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassConfig {
    pub n: usize,
    pub q: u32,
    pub e: u32,
    pub family: Family,
    pub mode: Mode,
    /// Exhaustive: the largest enumeration allowed. Sample: the number of draws.
    pub budget: u128,
    pub seed: Option<u64>,
    pub workers: usize,
    pub key_cap: usize,
    pub timings: bool,
    #[doc(hidden)]
    pub reducer: Reducer,
}

impl ClassConfig {
    pub fn new(n: usize, q: u32, e: u32, family: Family, mode: Mode, budget: u128) -> Self {
        Self {
            n,
            q,
            e,
            family,
            mode,
            budget,
            seed: None,
            workers: 1,
            key_cap: KEY_CAP,
            timings: false,
            reducer: Reducer::Canonical,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Outcome of one run, written as one JSON object per line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub n: usize,
    pub q: u32,
    pub e: u32,
    pub family: Family,
    pub mode: Mode,
    pub processed: u64,
    pub distinct: u64,
    pub bound_case: BoundCase,
    #[serde(serialize_with = "crate::serde_int::uint")]
    pub bound: BigUint,
    pub within_bound: bool,
    pub saturated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub workers: usize,
    /// Draws are uniform per entry, with replacement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<&'static str>,
    /// (draws, distinct) after each draw that produced a new key.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Vec<(u64, u64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

pub const CSV_HEADER: &str = "n,q,e,family,mode,draws,distinct,bound,saturated,seconds";

impl ExperimentReport {
    pub fn to_jsonl(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn to_csv_row(&self) -> String {
        let family = match self.family {
            Family::Hermitian => "hermitian",
            Family::Seidel => "seidel",
        };
        let mode = match self.mode {
            Mode::Exhaustive => "exhaustive",
            Mode::Sample => "sample",
        };
        let seconds = self.elapsed_seconds.map(|s| format!("{s:.3}")).unwrap_or_default();
        format!(
            "{},{},{},{family},{mode},{},{},{},{},{seconds}",
            self.n, self.q, self.e, self.processed, self.distinct, self.bound, self.saturated
        )
    }
}

struct Source {
    enumeration: Option<Enumeration>,
    sampler: Option<Sampler>,
    total: u64,
}

impl Source {
    fn new(cfg: &ClassConfig) -> Result<Self> {
        match cfg.mode {
            Mode::Exhaustive => {
                let en = Enumeration::new(cfg.n, cfg.q, cfg.family, cfg.budget)?;
                let total = u64::try_from(en.len()).map_err(|_| Error::Budget { needed: en.len(), budget: cfg.budget })?;
                Ok(Self { enumeration: Some(en), sampler: None, total })
            }
            Mode::Sample => {
                let seed = cfg.seed.ok_or_else(|| Error::domain("sampling needs an explicit seed"))?;
                let total = u64::try_from(cfg.budget).map_err(|_| Error::domain("draw count exceeds 2^64"))?;
                Ok(Self { enumeration: None, sampler: Some(Sampler::new(cfg.n, cfg.q, cfg.family, seed)?), total })
            }
        }
    }

    fn get(&self, i: u64) -> RootMatrix {
        match (&self.enumeration, &self.sampler) {
            (Some(en), _) => en.get(i as u128),
            (_, Some(s)) => s.draw(i),
            _ => unreachable!("a source has an enumeration or a sampler"),
        }
    }
}

struct KeyMaker {
    ring: RingContext,
    lattice: ResidueLattice,
    reducer: Reducer,
}

impl KeyMaker {
    fn new(cfg: &ClassConfig) -> Result<Self> {
        if cfg.e == 0 {
            return Err(Error::domain("the reduction exponent e must be at least 1"));
        }
        let ring = RingContext::new(cfg.q)?;
        let lattice = ResidueLattice::new(&ring, cfg.e);
        Ok(Self { ring, lattice, reducer: cfg.reducer })
    }

    fn key(&self, m: &RootMatrix) -> Result<Vec<u8>> {
        let cp = charpoly_real(m, &self.ring)?;
        let key = match self.reducer {
            Reducer::Canonical => residue_key(&cp, &self.lattice)?,
            Reducer::Unreduced => ResidueKey { e: self.lattice.e(), residues: cp.coeffs()[1..].to_vec() },
        };
        Ok(key.encode())
    }
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))
}

fn finish(
    cfg: &ClassConfig,
    processed: u64,
    distinct: u64,
    coverage: Option<Vec<(u64, u64)>>,
    started: Instant,
) -> Result<ExperimentReport> {
    let bound = theorem_bound(cfg.q, cfg.e, Parity::of(cfg.n), cfg.family)?;
    let distinct_big = BigUint::from(distinct);
    Ok(ExperimentReport {
        n: cfg.n,
        q: cfg.q,
        e: cfg.e,
        family: cfg.family,
        mode: cfg.mode,
        processed,
        distinct,
        bound_case: bound.case,
        within_bound: distinct_big <= bound.value,
        saturated: distinct_big == bound.value,
        bound: bound.value,
        seed: cfg.seed,
        workers: cfg.workers,
        sampling: (cfg.mode == Mode::Sample).then_some("uniform per entry, with replacement"),
        coverage,
        elapsed_seconds: cfg.timings.then(|| started.elapsed().as_secs_f64()),
    })
}

/// Streams the configured matrices, reduces each characteristic polynomial
/// modulo ρ^e and counts distinct keys.
///
/// Work is split into one contiguous block per worker and the key sets are
/// merged, so the result does not depend on the worker count.
pub fn collect_classes(cfg: &ClassConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let source = Source::new(cfg)?;
    let maker = KeyMaker::new(cfg)?;
    let workers = cfg.workers.max(1) as u64;
    let block = source.total.div_ceil(workers).max(1);
    let sets: Vec<HashSet<Vec<u8>>> = pool(cfg.workers)?.install(|| {
        (0..workers)
            .into_par_iter()
            .map(|w| {
                let mut set = HashSet::new();
                let start = w * block;
                let end = ((w + 1) * block).min(source.total);
                for i in start..end {
                    set.insert(maker.key(&source.get(i))?);
                    if set.len() > cfg.key_cap {
                        return Err(Error::KeyCap { cap: cfg.key_cap });
                    }
                }
                Ok(set)
            })
            .collect::<Result<_>>()
    })?;
    let mut all: HashSet<Vec<u8>> = HashSet::new();
    for s in sets {
        all.extend(s);
        if all.len() > cfg.key_cap {
            return Err(Error::KeyCap { cap: cfg.key_cap });
        }
    }
    finish(cfg, source.total, all.len() as u64, None, started)
}

/// Samples until the distinct count reaches the bound or `cfg.budget`
/// draws are used, recording when each new key appeared.
///
/// Keys are computed in parallel chunks and inserted in draw order, so the
/// coverage curve is deterministic.
pub fn sharpness_probe(cfg: &ClassConfig) -> Result<ExperimentReport> {
    if cfg.e < 3 {
        return Err(Error::domain("sharpness is only expected for e >= 3"));
    }
    let started = Instant::now();
    let cfg = ClassConfig { mode: Mode::Sample, ..cfg.clone() };
    let source = Source::new(&cfg)?;
    let maker = KeyMaker::new(&cfg)?;
    let bound = theorem_bound(cfg.q, cfg.e, Parity::of(cfg.n), cfg.family)?.value;
    let pool = pool(cfg.workers)?;
    let chunk = 256u64 * cfg.workers.max(1) as u64;
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut coverage = Vec::new();
    let mut drawn = 0u64;
    'outer: while drawn < source.total {
        let end = (drawn + chunk).min(source.total);
        let keys: Vec<Vec<u8>> =
            pool.install(|| (drawn..end).into_par_iter().map(|i| maker.key(&source.get(i))).collect::<Result<_>>())?;
        for key in keys {
            drawn += 1;
            if seen.insert(key) {
                coverage.push((drawn, seen.len() as u64));
                if seen.len() > cfg.key_cap {
                    return Err(Error::KeyCap { cap: cfg.key_cap });
                }
                if BigUint::from(seen.len()) >= bound {
                    break 'outer;
                }
            }
        }
    }
    finish(&cfg, drawn, seen.len() as u64, Some(coverage), started)
}
