//! Dyadic cubes, Whitney decompositions, and parabolic caps.

pub mod caps;
mod cube;

pub use caps::{
    cap_mask_indices, cap_project, cap_separation_test, partition_interval, CapSeparation,
    HypothesisShape, IntervalPartition, ParabolicCap,
};
pub use cube::{
    diagonal_decompose, whitney_decompose, CubePair, DyadicCube, WhitneyDecomposition,
    ACCEPT_FACTOR,
};
