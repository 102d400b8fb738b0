use serde::Serialize;

use super::codec::log2_factorial;
use super::params::KAPPA;

/// Arithmetic of the counting bound `|Y| ≥ c·|X|` in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingCheck {
    pub x_size_log2: f64,
    pub enc_bits_max: f64,
    pub c: f64,
    /// `log₂ c + log₂ |X|`.
    pub required_bits: f64,
    /// `enc_bits_max − required_bits`.
    pub slack_bits: f64,
    pub holds: bool,
}

/// Checks `log₂ c + log₂ |X| ≤ enc_bits_max`: an encoding that succeeds
/// with probability `c` needs at least `c·|X|` codewords.
pub fn counting_check(x_size_log2: f64, enc_bits_max: f64, c: f64) -> CountingCheck {
    let required_bits = c.log2() + x_size_log2;
    CountingCheck {
        x_size_log2,
        enc_bits_max,
        c,
        required_bits,
        slack_bits: enc_bits_max - required_bits,
        holds: required_bits <= enc_bits_max + 1e-9,
    }
}

/// The relation an instance implies between `S`, `|G|`, `ε` and `N`:
/// `log₂(ε·N!/4) ≤ log₂ N! − log₂ |G|! + S + κ·log₂ N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InstanceRelation {
    pub n: usize,
    pub epsilon: f64,
    pub advice_bits: usize,
    pub good_count: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack_bits: f64,
    pub holds: bool,
}

pub fn instance_relation(n: usize, epsilon: f64, advice_bits: usize, good_count: usize) -> InstanceRelation {
    let log_n_fact = log2_factorial(n);
    let lhs = (epsilon / 4.0).log2() + log_n_fact;
    let rhs = log_n_fact - log2_factorial(good_count) + advice_bits as f64 + KAPPA * (n as f64).log2();
    InstanceRelation {
        n,
        epsilon,
        advice_bits,
        good_count,
        lhs,
        rhs,
        slack_bits: rhs - lhs,
        holds: lhs <= rhs + 1e-9,
    }
}

/// `log₂ |X|` for `|X| = ε′·N!`.
pub fn good_family_log2(n: usize, epsilon_prime: f64) -> f64 {
    epsilon_prime.log2() + log2_factorial(n)
}
