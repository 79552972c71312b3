use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cyclocong::experiments::{
    collect_classes, sharpness_probe, theorem_bound, verify_a4k1, verify_congruences, verify_euler, verify_orbits,
    verify_walks, ClassConfig, Mode, Parity, Reducer, SuiteInput, SuiteReport, CSV_HEADER, KEY_CAP,
};
use cyclocong::matrices::io::{parse_any, to_json, to_text};
use cyclocong::matrices::{euler_normalize, Family, HermitianRootMatrix, RootMatrix};
use serde_json::{json, Value};

use crate::config::{parse, pick, require, FileConfig};
use crate::{BoundsArgs, ClassesArgs, CliError, NormalizeArgs, OutputArgs, Verdict, VerifyArgs};

const DEFAULT_BUDGET: u64 = 1_000_000;
const DEFAULT_SAMPLES: u64 = 100;
const DEFAULT_LENS: [usize; 4] = [3, 4, 5, 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "jsonl" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}, expected jsonl or csv")),
        }
    }
}

struct Sink {
    format: Format,
    out: Box<dyn Write>,
}

impl Sink {
    fn open(args: OutputArgs, file: &FileConfig) -> Result<Self, CliError> {
        let format = parse(args.format, file.format.clone(), "format")?.unwrap_or(Format::Jsonl);
        let out: Box<dyn Write> = match pick(args.out, file.out.clone()) {
            Some(path) => Box::new(BufWriter::new(create(&path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { format, out })
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.out.flush()?;
        Ok(())
    }
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<RootMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read matrix file {}: {e}", path.display())))?;
    Ok(parse_any(&text)?)
}

fn big_number(x: &impl ToString) -> Value {
    serde_json::from_str(&x.to_string()).expect("decimal integers are valid JSON numbers")
}

pub fn bounds(a: BoundsArgs, file: FileConfig) -> Result<Verdict, CliError> {
    let q = require(a.q, file.q, "q")?;
    let e = require(a.e, file.e, "e")?;
    let family = parse(a.family, file.family.clone(), "family")?.unwrap_or(Family::Hermitian);
    let parities = match parse::<Parity>(a.parity, file.parity.clone(), "parity")? {
        Some(p) => vec![p],
        None => vec![Parity::Even, Parity::Odd],
    };
    let mut sink = Sink::open(a.output, &file)?;
    if sink.format == Format::Csv {
        sink.line("q,e,parity,family,case,bound")?;
    }
    for parity in parities {
        let b = theorem_bound(q, e, parity, family)?;
        match sink.format {
            Format::Csv => sink.line(&format!("{q},{e},{parity},{family},{},{}", b.case, b.value))?,
            Format::Jsonl => {
                let row = json!({
                    "q": q, "e": e, "parity": parity.to_string(), "family": family.to_string(),
                    "case": b.case.to_string(), "bound": big_number(&b.value),
                });
                sink.line(&row.to_string())?;
            }
        }
    }
    sink.finish()?;
    Ok(Verdict::Pass)
}

pub fn classes(a: ClassesArgs, file: FileConfig) -> Result<Verdict, CliError> {
    let n = require(a.n, file.n, "n")?;
    let q = require(a.q, file.q, "q")?;
    let e = require(a.e, file.e, "e")?;
    let family = parse(a.family, file.family.clone(), "family")?.unwrap_or(Family::Hermitian);
    let probe = a.probe || file.probe.unwrap_or(false);
    let default_mode = if probe { Mode::Sample } else { Mode::Exhaustive };
    let mode = parse(a.mode, file.mode.clone(), "mode")?.unwrap_or(default_mode);
    if probe && mode != Mode::Sample {
        return Err(CliError::Config("--probe samples; it cannot run in exhaustive mode".into()));
    }
    let seed = pick(a.seed, file.seed);
    if mode == Mode::Sample && seed.is_none() {
        return Err(CliError::Config("sampling needs --seed".into()));
    }
    let budget = pick(a.budget, file.budget).unwrap_or(DEFAULT_BUDGET);
    let mut cfg = ClassConfig::new(n, q, e, family, mode, budget as u128)
        .with_workers(pick(a.workers, file.workers).unwrap_or(1));
    cfg.seed = seed;
    cfg.key_cap = pick(a.key_cap, file.key_cap).unwrap_or(KEY_CAP);
    cfg.timings = a.timings || file.timings.unwrap_or(false);
    match a.inject_fault.as_deref() {
        None => {}
        Some("corrupt-reducer") => cfg.reducer = Reducer::Unreduced,
        Some(other) => return Err(CliError::Config(format!("unknown fault {other:?}"))),
    }
    let mut sink = Sink::open(a.output, &file)?;
    let report = if probe { sharpness_probe(&cfg)? } else { collect_classes(&cfg)? };
    eprintln!(
        "classes: n={n} q={q} e={e} {family}: {} matrices, {} distinct keys, bound {} (case {})",
        report.processed, report.distinct, report.bound, report.bound_case
    );
    match sink.format {
        Format::Jsonl => sink.line(&report.to_jsonl()?)?,
        Format::Csv => {
            sink.line(CSV_HEADER)?;
            sink.line(&report.to_csv_row())?;
        }
    }
    sink.finish()?;
    if report.within_bound {
        if probe && !report.saturated {
            eprintln!("warning: the bound was not reached within {budget} draws");
        }
        Ok(Verdict::Pass)
    } else {
        eprintln!("bound violated: {} distinct keys exceed {}", report.distinct, report.bound);
        Ok(Verdict::Violation)
    }
}

const SUITE_CSV_HEADER: &str = "suite,q,n,seed,samples,checked,failed";

fn suite_csv_row(r: &SuiteReport) -> String {
    let opt = |x: Option<String>| x.unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{}",
        r.suite,
        opt(r.q.map(|v| v.to_string())),
        opt(r.n.map(|v| v.to_string())),
        opt(r.seed.map(|v| v.to_string())),
        r.samples,
        r.checked,
        r.failed
    )
}

pub fn verify(a: VerifyArgs, file: FileConfig) -> Result<Verdict, CliError> {
    let suite = require(a.suite, file.suite.clone(), "suite")?;
    let workers = pick(a.workers, file.workers).unwrap_or(1);
    let matrix: Option<PathBuf> = pick(a.matrix, file.matrix.clone());
    let input = || -> Result<SuiteInput, CliError> {
        if let Some(path) = &matrix {
            let h: HermitianRootMatrix = read_matrix(path)?.as_hermitian();
            return Ok(SuiteInput::Matrix(h));
        }
        let seed = a.seed.or(file.seed).ok_or_else(|| CliError::Config("random matrices need --seed".into()))?;
        Ok(SuiteInput::Random {
            n: require(a.n, file.n, "n")?,
            q: require(a.q, file.q, "q")?,
            samples: pick(a.samples, file.samples).unwrap_or(DEFAULT_SAMPLES),
            seed,
        })
    };
    let max_len = pick(a.max_len, file.max_len).unwrap_or(6);
    let report = match suite.as_str() {
        "congruences" => verify_congruences(&input()?, workers)?,
        "walks" => {
            let lens = pick(a.lens, file.lens.clone()).unwrap_or(DEFAULT_LENS.to_vec());
            verify_walks(&input()?, &lens, workers)?
        }
        "euler" => verify_euler(&input()?, max_len, workers)?,
        "a4k1" => verify_a4k1(&input()?, pick(a.k, file.k).unwrap_or(2), workers)?,
        "orbits" => verify_orbits(pick(a.max_vertices, file.max_vertices).unwrap_or(4), max_len, workers)?,
        other => {
            return Err(CliError::Config(format!(
                "unknown suite {other:?}, expected congruences, walks, orbits, euler or a4k1"
            )))
        }
    };
    eprintln!("verify {}: {} checks, {} failed", report.suite, report.checked, report.failed);
    let mut sink = Sink::open(a.output, &file)?;
    match sink.format {
        Format::Jsonl => sink.line(&report.to_jsonl()?)?,
        Format::Csv => {
            sink.line(SUITE_CSV_HEADER)?;
            sink.line(&suite_csv_row(&report))?;
        }
    }
    sink.finish()?;
    Ok(if report.passed() { Verdict::Pass } else { Verdict::Violation })
}

pub fn normalize(a: NormalizeArgs, file: FileConfig) -> Result<Verdict, CliError> {
    let path = require(a.matrix, file.matrix.clone(), "matrix")?;
    let h = read_matrix(&path)?.as_hermitian();
    let (g, d) = euler_normalize(&h)?;
    let normalized = RootMatrix::from(g);
    let record: Value = serde_json::from_str(&to_json(&normalized)?).map_err(cyclocong::Error::from)?;
    if let Some(out) = pick(a.matrix_out, file.matrix_out.clone()) {
        create(&out)?.write_all(to_text(&normalized).as_bytes())?;
    }
    let mut sink = Sink::open(a.output, &file)?;
    if sink.format == Format::Csv {
        return Err(CliError::Config("normalize writes jsonl only".into()));
    }
    let row = json!({ "matrix": record, "switching": d.codes(), "identity": d.is_identity() });
    sink.line(&row.to_string())?;
    sink.finish()?;
    Ok(Verdict::Pass)
}
