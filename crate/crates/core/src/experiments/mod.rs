//! Counting residue classes of characteristic polynomials and comparing
//! the counts with closed-form upper bounds.

mod bounds;
mod classes;
mod verify;


pub use bounds::{theorem_bound, BoundCase, Parity, TheoremBound};
pub use classes::{
    collect_classes, residue_key, sharpness_probe, ClassConfig, ExperimentReport, Mode, Reducer, ResidueKey,
    CSV_HEADER, KEY_CAP,
};
pub use verify::{
    verify_a4k1, verify_congruences, verify_euler, verify_orbits, verify_walks, CheckTally, SuiteInput, SuiteReport,
    SuiteWitness, MAX_WITNESSES,
};
