//! Seeded experiment drivers behind the `advice-lab` binary.
//!
//! Every command takes a config, derives one generator per trial with
//! [`trial_rng`], runs trials on the rayon pool and returns rows in trial
//! order together with any invariant violations. Rows carry the seed and a
//! hash of the config so a single row can be replayed.

mod commands;

pub use commands::{
    cmd_box, cmd_compress, cmd_grover, cmd_hellman, cmd_verify, BoxCmdConfig, BoxRow,
    CompressConfig, CompressRow, GroverConfig, GroverRow, HellmanConfig, HellmanRow, SchemeChoice,
    Suite, VerifyConfig, VerifyRow, MAX_GROVER_N,
};

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::advice::AdviceError;
use crate::compress::CompressError;
use crate::hybrid::HybridError;
use crate::qsim::QsimError;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ADVICE_LAB_THREADS";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("output failed: {0}")]
    Output(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Advice(#[from] AdviceError),
    #[error(transparent)]
    Hybrid(#[from] HybridError),
    #[error(transparent)]
    Compress(#[from] CompressError),
}

/// Generator for trial `trial` of a run seeded with `seed`: the ChaCha8
/// stream `trial` under key `seed`. Trials draw from disjoint streams, so
/// results do not depend on execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// First 16 hex digits of the SHA-256 of the config's JSON form.
pub fn config_hash<T: Serialize + ?Sized>(config: &T) -> String {
    let json = serde_json::to_vec(config).expect("config serializes");
    Sha256::digest(&json)
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Runs `f` on a pool capped by `ADVICE_LAB_THREADS` when it is set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .parse()
            .map_err(|_| HarnessError::InvalidConfig(format!("{THREADS_ENV}={value} is not a count")))?;
        builder = builder.num_threads(threads);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::InvalidConfig(e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of one command plus what went wrong.
#[derive(Debug, Clone)]
pub struct Report<R> {
    pub rows: Vec<R>,
    /// Human-readable aggregate lines.
    pub summary: Vec<String>,
    pub violations: Vec<String>,
}

impl<R: Serialize> Report<R> {
    pub fn write<W: Write>(&self, out: W, format: Format) -> Result<(), HarnessError> {
        write_rows(out, &self.rows, format)
    }
}

/// CSV with a header row in struct field order, or a JSON array of the
/// same rows.
pub fn write_rows<W: Write, R: Serialize>(mut out: W, rows: &[R], format: Format) -> Result<(), HarnessError> {
    let err = |e: &dyn std::fmt::Display| HarnessError::Output(e.to_string());
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(|e| err(&e))?;
            }
            w.flush().map_err(|e| err(&e))
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| err(&e))?;
            writeln!(out).map_err(|e| err(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trial_streams_are_independent_of_order() {
        let a: Vec<u64> = (0..4).map(|t| trial_rng(7, t).gen()).collect();
        let b: Vec<u64> = (0..4).rev().map(|t| trial_rng(7, t).gen()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let h = config_hash(&("grover", 4, 1));
        assert_eq!(h.len(), 16);
        assert_eq!(h, config_hash(&("grover", 4, 1)));
        assert_ne!(h, config_hash(&("grover", 4, 2)));
    }

    #[derive(Serialize)]
    struct Row {
        a: u32,
        b: f64,
    }

    #[test]
    fn csv_and_json_rows() {
        let rows = [Row { a: 1, b: 0.5 }, Row { a: 2, b: 1.0 }];
        let mut csv = Vec::new();
        write_rows(&mut csv, &rows, Format::Csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "a,b\n1,0.5\n2,1.0\n");
        let mut json = Vec::new();
        write_rows(&mut json, &rows, Format::Json).unwrap();
        let back: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(back[1]["a"], 2);
    }
}
