//! Run settings read from a TOML file. Keys are the long flag names;
//! anything given on the command line wins.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub n: Option<usize>,
    pub q: Option<u32>,
    pub e: Option<u32>,
    pub family: Option<String>,
    pub mode: Option<String>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub suite: Option<String>,
    #[serde(rename = "N")]
    pub lens: Option<Vec<usize>>,
    pub parity: Option<String>,
    pub samples: Option<u64>,
    pub k: Option<usize>,
    pub max_vertices: Option<usize>,
    #[serde(rename = "max-N")]
    pub max_len: Option<usize>,
    pub matrix: Option<PathBuf>,
    pub matrix_out: Option<PathBuf>,
    pub probe: Option<bool>,
    pub key_cap: Option<usize>,
    pub timings: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// The flag value if given, else the file value.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

/// Like [`pick`], but the value must come from somewhere.
pub fn require<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(file).ok_or_else(|| CliError::Config(format!("--{name} is required (on the command line or in the config file)")))
}

/// Parses a string setting with the type's `FromStr`.
pub fn parse<T>(flag: Option<String>, file: Option<String>, name: &str) -> Result<Option<T>, CliError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    flag.or(file)
        .map(|s| s.parse::<T>().map_err(|e| CliError::Config(format!("--{name}: {e}"))))
        .transpose()
}
