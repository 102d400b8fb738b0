//! Classical algorithms with advice: parity pads for the box problem and
//! Hellman iterate tables for permutation inversion.

mod hellman;
mod parity;

pub use hellman::{
    hellman_build, hellman_invert, iterate, measure_tradeoff, AnchorPair, CountingOracle,
    CycleAnchors, HellmanMemory, HellmanProgram, HellmanTable, TradeoffPoint,
};
pub use parity::{
    group_boundaries, parity_answer, parity_preprocess, ParityAdapter, ParityPad,
};

use thiserror::Error;

use crate::qsim::QsimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdviceError {
    #[error("group count m = {m} must satisfy 1 <= m < N = {n}")]
    InvalidGroupCount { m: usize, n: usize },
    #[error("box {j} out of range for N = {n}")]
    BoxOutOfRange { j: usize, n: usize },
    #[error("malformed parity pad: {0}")]
    MalformedPad(String),
    #[error("stride s = {s} must satisfy 1 <= s <= N = {len}")]
    InvalidStride { s: usize, len: usize },
    #[error("permutation size {len} is not a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("corrupt table: {0}")]
    CorruptTable(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}
