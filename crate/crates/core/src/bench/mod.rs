//! Evaluation harness: structural Hamming distance, unfaithfulness volume of
//! the three-node linear-Gaussian family, and CI-count tables.

mod shd;
mod table;
mod volume;

pub use shd::{shd, skeleton_shd};
pub use table::{ci_count_benchmark, BenchRow, BenchTable, InstanceFamily, RunStatus};
pub use volume::{
    three_node_partial_correlations, unfaithful_volume, unfaithful_volume_grid, VolumeEstimate,
    DEFAULT_LAMBDA_GRID,
};
