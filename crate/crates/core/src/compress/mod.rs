//! Compressing a permutation with an algorithm that inverts it: a random
//! set `R` is drawn, elements of `R` the algorithm inverts while barely
//! querying the rest of `R` are dropped from the description, and the
//! decoder recovers them by simulating the algorithm against a hybrid
//! oracle.

mod codec;
mod counting;
mod encoding;
mod params;
mod scheme;

pub use codec::{
    binomial, ceil_log2, factorial, log2_big, log2_factorial, rank_perm, rank_set, unrank_perm,
    unrank_set,
};
pub use counting::{counting_check, good_family_log2, instance_relation, CountingCheck, InstanceRelation};
pub use encoding::{
    build_h, decode, encode, events, good_set, h_distance, inversion_runs, inversion_set,
    length_bound, ComponentBits, Encoding, InversionRun, TIE_TOLERANCE,
};
pub use params::{sample_r, sample_r_with, CompressionParams, KAPPA, SUCCESS_THRESHOLD};
pub use scheme::{
    BoxedAlgorithm, ConstantScheme, GroverScheme, HellmanScheme, InversionScheme, LookupScheme,
};

use thiserror::Error;

use crate::advice::AdviceError;
use crate::qsim::QsimError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompressError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("not a permutation")]
    InvalidPermutation,
    #[error("{what} rank with {bits} bits is out of range")]
    RankOutOfRange { what: &'static str, bits: u64 },
    #[error("only {good} good elements, need {min_good}")]
    TooFewGood { good: usize, min_good: usize },
    #[error("algorithm layout does not fit the permutation")]
    IncompatibleAlgorithm,
    #[error("no unique most likely preimage of {y}")]
    AmbiguousDecode { y: usize },
    #[error("decoded preimage {x} of {y} is outside R or already taken")]
    DecodeMismatch { y: usize, x: usize },
    #[error("malformed encoding: {0}")]
    MalformedEncoding(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Advice(#[from] AdviceError),
}
