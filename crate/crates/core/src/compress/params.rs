use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CompressError;

/// Probability threshold for "the algorithm inverts `y`".
pub const SUCCESS_THRESHOLD: f64 = 2.0 / 3.0;

/// Header slack `κ` in the length bound `S + log₂ N! − log₂ |G|! + κ·log₂ N`.
pub const KAPPA: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompressionParams {
    delta: f64,
    c: f64,
    min_good: usize,
}

impl CompressionParams {
    /// Requires `0 < δ < 1` and `0 < √c < 1/24`. The claim margin
    /// `δ/2 − 10δ²/c` is reported by [`Self::claim_margin`] but not
    /// required; see [`Self::strict`].
    pub fn new(delta: f64, c: f64) -> Result<Self, CompressError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(CompressError::InvalidParams(format!("delta = {delta} not in (0, 1)")));
        }
        if !(c > 0.0 && c.sqrt() < 1.0 / 24.0) {
            return Err(CompressError::InvalidParams(format!("sqrt(c) = {} not in (0, 1/24)", c.sqrt())));
        }
        Ok(Self {
            delta,
            c,
            min_good: 1,
        })
    }

    /// [`Self::new`] plus a positive claim margin.
    pub fn strict(delta: f64, c: f64) -> Result<Self, CompressError> {
        let params = Self::new(delta, c)?;
        if params.claim_margin() <= 0.0 {
            return Err(CompressError::InvalidParams(format!(
                "delta/2 - 10 delta^2/c = {} is not positive",
                params.claim_margin()
            )));
        }
        Ok(params)
    }

    pub fn with_min_good(mut self, min_good: usize) -> Self {
        self.min_good = min_good;
        self
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn min_good(&self) -> usize {
        self.min_good
    }

    /// `δ/2 − 10δ²/c`.
    pub fn claim_margin(&self) -> f64 {
        self.delta / 2.0 - 10.0 * self.delta * self.delta / self.c
    }

    /// `(|I| / T²)·(δ/2 − 10δ²/c)`, the size of `G` the counting argument
    /// expects; `+∞` for `T = 0`.
    pub fn expected_good(&self, inverted: usize, num_queries: usize) -> f64 {
        if num_queries == 0 {
            return f64::INFINITY;
        }
        inverted as f64 / (num_queries * num_queries) as f64 * self.claim_margin()
    }

    /// `c / T`, the event (B) threshold; `+∞` for `T = 0`.
    pub fn b_threshold(&self, num_queries: usize) -> f64 {
        if num_queries == 0 {
            f64::INFINITY
        } else {
            self.c / num_queries as f64
        }
    }
}

/// Each element of `[n]` independently with probability `δ/T²`.
pub fn sample_r(n: usize, delta: f64, num_queries: usize, seed: u64) -> Result<Vec<usize>, CompressError> {
    let p = delta / (num_queries * num_queries) as f64;
    if !(p > 0.0 && p <= 1.0) {
        return Err(CompressError::InvalidParams(format!("inclusion probability {p} not in (0, 1]")));
    }
    Ok(sample_r_with(n, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Each element of `[n]` independently with probability `p`.
pub fn sample_r_with<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}
