//! Matrices in ℋ_n(q) and q-Seidel matrices: construction, sampling,
//! enumeration, the walk matrix A = (J − H)/(1 − ζ), graphs and switching.

mod cyc;
mod graph;
mod hermitian;
pub mod io;
mod sample;
mod switching;

pub use cyc::{CycMatrix, WalkMatrix};
pub use graph::{Graph, MAX_VERTICES};
pub use hermitian::{Family, HermitianRootMatrix, RootMatrix, SeidelMatrix};
pub use sample::{Enumeration, Sampler};
pub use switching::{
    euler_normalize, find_euler_switching, switching_class_residue_graphs, SwitchingVector, SWITCHING_BUDGET,
};
