//! Exact characteristic-polynomial congruences for Hermitian matrices whose
//! entries are roots of unity.
//!
//! The crate computes characteristic polynomials over cyclotomic integer
//! rings, reduces them modulo powers of ρ = (1 − ζ)(1 − ζ⁻¹), checks the
//! coefficient and trace congruences these polynomials satisfy, and counts
//! residue classes against closed-form bounds.

pub mod charpoly;
pub mod cyclotomic;
pub mod error;
pub mod experiments;
pub mod matrices;
pub mod walks;
mod serde_int;

pub use error::{Error, Result};
