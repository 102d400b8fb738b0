//! Exact statevector simulation of query algorithms.
//!
//! States live on a `(position, answer, workspace)` basis. Oracles act by
//! XOR on the answer register, and every run records the query magnitude
//! `q_j(|φ_t>)` of each position before each query.

mod algorithm;
mod grover;
mod oracle;
mod state;

pub use algorithm::{run, ClassicalAdapter, ClassicalProgram, Idle, QueryAlgorithm, QueryTrace};
pub use grover::{
    closed_form_success, default_iterations, grover_invert, GroverInversion, GroverOutcome,
    GroverSearch,
};
pub use oracle::{apply_oracle, query_magnitudes, Oracle, FORBIDDEN_MASS_TOLERANCE};
pub use state::{
    euclidean_distance, measurement_distribution, tv_distance, BasisLayout, PureState, Register,
    NORM_TOLERANCE,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("invalid layout {num_positions} x {answer_dim} x {workspace_dim}")]
    InvalidLayout {
        num_positions: usize,
        answer_dim: usize,
        workspace_dim: usize,
    },
    #[error("basis coordinate ({position}, {answer}, {workspace}) out of range")]
    CoordinateOutOfRange {
        position: usize,
        answer: usize,
        workspace: usize,
    },
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("state layout does not match the oracle or the other state")]
    LayoutMismatch,
    #[error("oracle size {len} is not a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("oracle value {value} at {index} out of range for N = {len}")]
    OracleValueOutOfRange { index: usize, value: usize, len: usize },
    #[error("forbidden index {index} out of range for N = {len}")]
    ForbiddenOutOfRange { index: usize, len: usize },
    #[error("illegal query: mass {mass:e} on forbidden position {position}")]
    ForbiddenQuery { position: usize, mass: f64 },
    #[error("step {step} changed the norm to {norm}")]
    NonUnitaryStep { step: usize, norm: f64 },
    #[error("input {input} out of range for N = {len}")]
    InputOutOfRange { input: usize, len: usize },
}
