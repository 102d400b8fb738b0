use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::RandomPairedAlgorithm;
use crate::advice::{parity_preprocess, ParityAdapter};
use crate::harness::trial_rng;
use crate::qsim::{
    default_iterations, euclidean_distance, measurement_distribution, run, tv_distance,
    BasisLayout, GroverInversion, GroverSearch, Oracle, PureState, QsimError, QueryAlgorithm,
    QueryTrace, Register,
};
use crate::Permutation;

/// Slack allowed on every checked inequality.
pub const INEQUALITY_TOLERANCE: f64 = 1e-9;

/// Distance between the final states of one algorithm run against two
/// oracles, next to the query-magnitude bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapReport {
    pub num_queries: usize,
    /// Positions where the two oracles differ.
    pub delta_set: Vec<usize>,
    /// `Σ_{j ∈ Δ} q_j(x)` from the run against the first oracle.
    pub delta_mass: f64,
    /// `√(T · Σ_{j ∈ Δ} q_j(x))`.
    pub bound: f64,
    /// `2·√(T · Σ_{j ∈ Δ} q_j(x))`, which holds for every algorithm.
    pub general_bound: f64,
    /// `‖|φ_x> − |φ_y>‖`.
    pub actual: f64,
    pub holds: bool,
    pub holds_general: bool,
}

/// Runs `alg` on `input` against both oracles and compares the final
/// states.
///
/// `bound` is attained for algorithms whose queries come in
/// compute/uncompute pairs around a diagonal operation (Grover,
/// [`RandomPairedAlgorithm`]) and for classical programs making at least two
/// queries. A single classical query on `Δ` already moves the state by `√2`,
/// so a one-query algorithm can exceed it; `general_bound` covers that case.
pub fn verify_swapping<A: QueryAlgorithm + ?Sized>(
    alg: &A,
    oracle_x: &Oracle,
    oracle_y: &Oracle,
    input: usize,
) -> Result<SwapReport, QsimError> {
    swap_with_trace(alg, oracle_x, oracle_y, input).map(|(report, _)| report)
}

/// [`verify_swapping`], also returning the trace of the run against
/// `oracle_x`.
pub(crate) fn swap_with_trace<A: QueryAlgorithm + ?Sized>(
    alg: &A,
    oracle_x: &Oracle,
    oracle_y: &Oracle,
    input: usize,
) -> Result<(SwapReport, QueryTrace), QsimError> {
    let delta_set = oracle_x.differing_positions(oracle_y)?;
    let (phi_x, trace) = run(alg, oracle_x, input)?;
    let (phi_y, _) = run(alg, oracle_y, input)?;
    let t = trace.num_queries();
    let delta_mass = trace.mass_on(&delta_set);
    let bound = (t as f64 * delta_mass).sqrt();
    let actual = euclidean_distance(&phi_x, &phi_y)?;
    let report = SwapReport {
        num_queries: t,
        delta_set,
        delta_mass,
        bound,
        general_bound: 2.0 * bound,
        actual,
        holds: actual <= bound + INEQUALITY_TOLERANCE,
        holds_general: actual <= 2.0 * bound + INEQUALITY_TOLERANCE,
    };
    Ok((report, trace))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvReport {
    pub tv: f64,
    pub euclidean: f64,
    /// `4 · euclidean`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares the measurement distributions of `register` on two states with
/// four times their Euclidean distance.
pub fn verify_tv(a: &PureState, b: &PureState, register: Register) -> Result<TvReport, QsimError> {
    let euclidean = euclidean_distance(a, b)?;
    let tv = tv_distance(
        &measurement_distribution(a, register),
        &measurement_distribution(b, register),
    )?;
    Ok(TvReport {
        tv,
        euclidean,
        bound: 4.0 * euclidean,
        holds: tv <= 4.0 * euclidean + INEQUALITY_TOLERANCE,
    })
}

/// Random unit vector with independent uniform real and imaginary parts.
pub fn random_state<R: Rng + ?Sized>(layout: BasisLayout, rng: &mut R) -> PureState {
    let amps: Vec<Complex64> = (0..layout.dim())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalized(layout, amps)
}

fn normalized(layout: BasisLayout, mut amps: Vec<Complex64>) -> PureState {
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureState::from_amplitudes(layout, amps).expect("normalized amplitudes")
}

/// One randomly drawn algorithm with two oracles and an input.
pub struct SwapInstance {
    pub kind: &'static str,
    pub alg: Box<dyn QueryAlgorithm + Send + Sync>,
    pub oracle_x: Oracle,
    pub oracle_y: Oracle,
    pub input: usize,
}

fn swapped_pair<R: Rng + ?Sized>(f: &Permutation, hot: usize, rng: &mut R) -> Permutation {
    let n = f.len();
    let a = if rng.gen_bool(0.5) { hot } else { rng.gen_range(0..n) };
    let b = (a + rng.gen_range(1..n)) % n;
    f.with_swapped_images(a, b)
}

fn flipped<R: Rng + ?Sized>(x: &[bool], candidates: &[usize], rng: &mut R) -> Vec<bool> {
    let count = rng.gen_range(1..=candidates.len().min(3));
    let mut y = x.to_vec();
    for &i in candidates.choose_multiple(rng, count) {
        y[i] = !y[i];
    }
    y
}

fn random_bits<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<bool> {
    (0..n).map(|_| rng.gen()).collect()
}

/// Draws one of: Grover inversion against two permutations differing by a
/// swap of images, Grover search on two bit strings, a
/// [`RandomPairedAlgorithm`] against either oracle kind, or the parity
/// adapter (at least two queries) on two strings differing inside the
/// queried group. `n` must be a power of two, at least 8.
pub fn random_swap_instance<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SwapInstance, QsimError> {
    let all: Vec<usize> = (0..n).collect();
    Ok(match rng.gen_range(0..5) {
        0 => {
            let f = Permutation::random(n, rng);
            let y = rng.gen_range(0..n);
            let g = swapped_pair(&f, f.inverse().apply(y), rng);
            let k = rng.gen_range(1..=default_iterations(n));
            SwapInstance {
                kind: "grover-inversion",
                alg: Box::new(GroverInversion::new(n, k)?),
                oracle_x: Oracle::permutation(f)?,
                oracle_y: Oracle::permutation(g)?,
                input: y,
            }
        }
        1 => {
            let x = random_bits(n, rng);
            let j = rng.gen_range(0..n);
            let y = flipped(&x, &all, rng);
            SwapInstance {
                kind: "grover-search",
                alg: Box::new(GroverSearch::new(n, rng.gen_range(1..=3), true)?),
                oracle_x: Oracle::bit_string(x, Some(j))?,
                oracle_y: Oracle::bit_string(y, Some(j))?,
                input: j,
            }
        }
        2 => {
            let f = Permutation::random(n, rng);
            let input = rng.gen_range(0..n);
            let g = swapped_pair(&f, rng.gen_range(0..n), rng);
            let layout = BasisLayout::new(n, n, 2)?;
            SwapInstance {
                kind: "random-paired-permutation",
                alg: Box::new(RandomPairedAlgorithm::new(layout, rng.gen_range(1..=3), rng)),
                oracle_x: Oracle::permutation(f)?,
                oracle_y: Oracle::permutation(g)?,
                input,
            }
        }
        3 => {
            let x = random_bits(n, rng);
            let y = flipped(&x, &all, rng);
            let layout = BasisLayout::new(n, 2, 2)?;
            SwapInstance {
                kind: "random-paired-bits",
                alg: Box::new(RandomPairedAlgorithm::new(layout, rng.gen_range(1..=3), rng)),
                oracle_x: Oracle::bit_string(x, None)?,
                oracle_y: Oracle::bit_string(y, None)?,
                input: rng.gen_range(0..n),
            }
        }
        _ => {
            let x = random_bits(n, rng);
            let m = rng.gen_range(1..=n / 3);
            let pad = parity_preprocess(&x, m).expect("1 <= m < n");
            let j = rng.gen_range(0..n);
            let lids = pad.lids_for(j);
            let y = flipped(&x, &lids, rng);
            SwapInstance {
                kind: "parity-adapter",
                alg: Box::new(ParityAdapter::new(&pad, j).expect("j in range")),
                oracle_x: Oracle::bit_string(x, Some(j))?,
                oracle_y: Oracle::bit_string(y, Some(j))?,
                input: j,
            }
        }
    })
}

/// A swapping check tagged with its trial and instance kind.
#[derive(Debug, Clone, Serialize)]
pub struct SwapCase {
    pub trial: u64,
    pub n: usize,
    pub kind: &'static str,
    pub report: SwapReport,
}

/// `trials` random instances, with `N` drawn from `sizes` per trial.
pub fn swapping_suite(sizes: &[usize], trials: u64, seed: u64) -> Result<Vec<SwapCase>, QsimError> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = *sizes.choose(&mut rng).expect("at least one size");
            let inst = random_swap_instance(n, &mut rng)?;
            let report = verify_swapping(&inst.alg, &inst.oracle_x, &inst.oracle_y, inst.input)?;
            Ok(SwapCase {
                trial,
                n,
                kind: inst.kind,
                report,
            })
        })
        .collect()
}

/// `trials` random state pairs over small layouts. Half the pairs are
/// independent, half are small perturbations of each other.
pub fn tv_suite(trials: u64, seed: u64) -> Vec<TvReport> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let n = rng.gen_range(2..=8);
            let answer = if rng.gen_bool(0.5) { 2 } else { n };
            let layout = BasisLayout::new(n, answer, rng.gen_range(1..=2)).expect("valid layout");
            let a = random_state(layout, &mut rng);
            let b = if trial % 2 == 0 {
                random_state(layout, &mut rng)
            } else {
                let eps = 10f64.powf(rng.gen_range(-4.0..-1.0));
                let amps = a
                    .amplitudes()
                    .iter()
                    .map(|&z| {
                        z + Complex64::new(rng.gen_range(-eps..eps), rng.gen_range(-eps..eps))
                    })
                    .collect();
                normalized(layout, amps)
            };
            let register = *[Register::Position, Register::Answer, Register::Workspace, Register::Full]
                .choose(&mut rng)
                .expect("non-empty");
            verify_tv(&a, &b, register).expect("equal layouts")
        })
        .collect()
}
