//! Text and JSON formats for matrices.
//!
//! Text: a header line `n q family`, then n rows of n tokens. Off-diagonal
//! tokens are exponent codes in [0, q); diagonal tokens are `1` or `-1` for
//! the hermitian family and `0` for seidel.

use serde::{Deserialize, Serialize};

use super::{Family, HermitianRootMatrix, RootMatrix, SeidelMatrix};
use crate::error::{Error, Result};

/// The JSON form; `entries` uses the same tokens as the text rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub n: usize,
    pub q: u32,
    pub family: Family,
    pub entries: Vec<Vec<i64>>,
}

impl From<&RootMatrix> for MatrixRecord {
    fn from(m: &RootMatrix) -> Self {
        let n = m.n();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { m.diag_value(i) as i64 } else { m.exp(i, j) as i64 }).collect())
            .collect();
        MatrixRecord { n, q: m.q(), family: m.family(), entries }
    }
}

impl TryFrom<&MatrixRecord> for RootMatrix {
    type Error = Error;
    fn try_from(r: &MatrixRecord) -> Result<Self> {
        let n = r.n;
        if r.entries.len() != n || r.entries.iter().any(|row| row.len() != n) {
            return Err(Error::Parse(format!("expected {n} rows of {n} entries")));
        }
        let mut exps = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let e = r.entries[i][j];
                    exps[i * n + j] = u32::try_from(e)
                        .ok()
                        .filter(|&e| e < r.q)
                        .ok_or_else(|| Error::Parse(format!("entry ({i}, {j}) = {e} is not an exponent code below {}", r.q)))?;
                }
            }
        }
        match r.family {
            Family::Seidel => {
                if let Some(i) = (0..n).find(|&i| r.entries[i][i] != 0) {
                    return Err(Error::Parse(format!("seidel diagonal entry {i} must be 0")));
                }
                Ok(SeidelMatrix::new(n, r.q, exps)?.into())
            }
            Family::Hermitian => {
                let diag = (0..n)
                    .map(|i| match r.entries[i][i] {
                        1 => Ok(1),
                        -1 => Ok(-1),
                        other => Err(Error::Parse(format!("hermitian diagonal entry {i} must be 1 or -1, got {other}"))),
                    })
                    .collect::<Result<Vec<i8>>>()?;
                Ok(HermitianRootMatrix::new(n, r.q, exps, diag)?.into())
            }
        }
    }
}

pub fn to_text(m: &RootMatrix) -> String {
    let rec = MatrixRecord::from(m);
    let mut out = format!("{} {} {}\n", rec.n, rec.q, rec.family);
    for row in &rec.entries {
        let toks: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_text(s: &str) -> Result<RootMatrix> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [n, q, family] = parts.as_slice() else {
        return Err(Error::Parse(format!("header must be `n q family`, got {header:?}")));
    };
    let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad order {n:?}")))?;
    let q: u32 = q.parse().map_err(|_| Error::Parse(format!("bad root order {q:?}")))?;
    let family: Family = family.parse()?;
    let mut entries = Vec::with_capacity(n);
    for line in lines {
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad token {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        entries.push(row);
    }
    RootMatrix::try_from(&MatrixRecord { n, q, family, entries })
}

pub fn to_json(m: &RootMatrix) -> Result<String> {
    Ok(serde_json::to_string(&MatrixRecord::from(m))?)
}

pub fn parse_json(s: &str) -> Result<RootMatrix> {
    let rec: MatrixRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    RootMatrix::try_from(&rec)
}

/// Reads either format, choosing JSON when the input starts with `{`.
pub fn parse_any(s: &str) -> Result<RootMatrix> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}
