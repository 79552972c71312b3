use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("ring mismatch: element of Z[zeta_{right}] used with Z[zeta_{left}]")]
    ContextMismatch { left: u32, right: u32 },

    #[error("element is not divisible by (1 - zeta)")]
    NotDivisible,

    #[error("element is not fixed by complex conjugation")]
    NotReal,

    #[error("enumeration budget exceeded: {needed} items requested, budget is {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("residue key set exceeded its cap of {cap} entries")]
    KeyCap { cap: usize },

    #[error("invalid walk: {0}")]
    Walk(String),

    /// A statement that holds for every valid input failed. Either the
    /// implementation is wrong or a genuine counterexample was found; the
    /// message carries everything needed to reproduce it.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
