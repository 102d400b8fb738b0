//! Desk-scale laboratory for inverting permutations and answering Yao's box
//! problem with precomputed classical advice.
//!
//! The crate is organised around five pieces:
//!
//! - [`qsim`]: exact statevector simulation of query algorithms against
//!   permutation and bit-string oracles, with per-position query magnitudes.
//! - [`hybrid`]: empirical checks of the hybrid-argument inequalities and the
//!   box-problem collision experiment.
//! - [`advice`]: Yao's parity pad and Hellman iterate tables, plus their
//!   classical adapters for the simulator.
//! - [`compress`]: the randomized permutation encoder/decoder driven by an
//!   inverting query algorithm, with exact combinatorial rank codecs.
//! - [`harness`]: seeded experiment drivers emitting CSV/JSON rows; the
//!   `advice-lab` binary is a thin CLI over it.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/`
//! directory.

pub mod advice;
pub mod compress;
pub mod harness;
pub mod hybrid;
pub mod perm;
pub mod qsim;

pub use perm::{Permutation, PermutationError};
