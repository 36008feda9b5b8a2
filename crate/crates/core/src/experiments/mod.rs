//! Whole-family computations: sign-pattern searches over a master table,
//! moments and tails of `M(t_a)`, equidistribution sums, block moments.
//!
//! Every scan parallelizes over the parameter `a` and then reduces in
//! ascending `a`, so results do not depend on the worker count.

mod equidist;
mod moments;
mod signs;

pub use equidist::{equidist_matrix, EquidistReport, PairSum, SingleSum};
pub use moments::{
    block_moment, block_shape, max_moments, max_scan, moments_from_scan, tail_distribution,
    MaxScan, MomentReport, Sampling, DEFAULT_SAMPLE, DEFAULT_SEED, EXHAUSTIVE_CAP,
};
pub use signs::{
    detector_chain, detector_pattern, sign_pattern_search, DetectorReport, DetectorRow, Direction,
    SignCondition, SignPattern, SignSearchReport, DETECTOR_SLACK,
};
