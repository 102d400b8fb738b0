//! Empirical checks of the hybrid-argument inequalities and the box-problem
//! collision experiment.
//!
//! Bit strings of length `n ≤ 64` are packed into `u64` with coordinate `i`
//! in bit `i`.

mod boxes;
mod collision;
mod random_alg;
mod swap;

pub use boxes::{
    box_experiment, query_mean_estimate, AdvicePartition, AdviceScheme, BoxAlgorithm, BoxConfig,
    BoxStats, BoxTrial, MeanEstimate, ParityScheme, MAX_PARTITION_BITS,
};
pub use collision::{brute_force_collisions, collision_in_window};
pub use random_alg::RandomPairedAlgorithm;
pub use swap::{
    random_state, random_swap_instance, swapping_suite, tv_suite, verify_swapping, verify_tv,
    SwapCase, SwapInstance, SwapReport, TvReport, INEQUALITY_TOLERANCE,
};

use thiserror::Error;

use crate::advice::AdviceError;
use crate::qsim::QsimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HybridError {
    #[error("window has {found} indices, expected {expected}")]
    WindowSize { expected: usize, found: usize },
    #[error("index {index} out of range for strings of length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("no two strings agree outside the window")]
    NoCollision,
    #[error("exhaustive enumeration is capped at N <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("no advice class has at least 2^(N-m) members")]
    NoEligibleClass,
    #[error("invalid experiment parameters: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Advice(#[from] AdviceError),
}

pub(crate) fn unpack(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| (x >> i) & 1 == 1).collect()
}

