//! Closed walks, the dihedral action on them and the trace congruences
//! that follow from counting weighted walks.

mod partition;
mod traces;
mod walk;

#[cfg(test)]
mod tests;

pub use partition::{orbit_partition_check, simple_orbit_u, OrbitCheckReport};
pub use traces::{
    bilinear_reverse_sum, burnside_two_ways, fix_trace_identities, fix_weight_sums, frak_w_count,
    frak_w_count_by_fix_filter, frak_w_count_by_matrix, hadamard_trace, harary_schwenk_check, rotation_sum,
    totient, trace_congruence_suite, IdentityRecord, IdentityReport,
};
pub use walk::{
    closed_walk_count, closed_walks, fix_set, open_walks, orbit, orbits, weight, Dihedral, OrbitRecord, Walk,
    WALK_BUDGET,
};
