//! Grover iterations in the XOR-oracle model.
//!
//! Every iteration spends two oracle calls: one computes the oracle value
//! into the answer register, a phase flips the marked answers, and the
//! second call uncomputes the answer register before the diffusion. A run
//! of `k` iterations therefore makes `T = 2k` queries.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::{
    measurement_distribution, run, BasisLayout, Oracle, PureState, QsimError, QueryAlgorithm,
    QueryTrace, Register,
};
use crate::Permutation;

/// `⌊(π/4)·√N⌋`.
pub fn default_iterations(num_positions: usize) -> usize {
    (FRAC_PI_4 * (num_positions as f64).sqrt()).floor() as usize
}

/// `sin²((2k + 1)·θ)` with `sin θ = 1/√N`: success probability of `k`
/// iterations with a single marked item among `N`.
pub fn closed_form_success(num_positions: usize, iterations: usize) -> f64 {
    let theta = (1.0 / (num_positions as f64).sqrt()).asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Householder reflection taking `|0>` to the real unit vector `target`,
/// applied to the position register of every `(answer, workspace)` slice.
fn prepare_positions(state: &mut PureState, target: &[f64]) {
    let layout = *state.layout();
    let mut v: Vec<f64> = target.iter().map(|x| -x).collect();
    v[0] += 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if vv < 1e-30 {
        return;
    }
    for_each_position_slice(state, &layout, |slice| {
        let dot: Complex64 = slice
            .iter()
            .zip(&v)
            .map(|(a, &vi)| *a * vi)
            .sum::<Complex64>();
        let scale = dot * (2.0 / vv);
        for (a, &vi) in slice.iter_mut().zip(&v) {
            *a -= scale * vi;
        }
    });
}

/// `2|u><u| − I` on the position register, `u` a real unit vector.
fn reflect_about(state: &mut PureState, u: &[f64]) {
    let layout = *state.layout();
    for_each_position_slice(state, &layout, |slice| {
        let dot: Complex64 = slice.iter().zip(u).map(|(a, &ui)| *a * ui).sum::<Complex64>();
        for (a, &ui) in slice.iter_mut().zip(u) {
            *a = dot * (2.0 * ui) - *a;
        }
    });
}

fn for_each_position_slice(
    state: &mut PureState,
    layout: &BasisLayout,
    mut f: impl FnMut(&mut [Complex64]),
) {
    let n = layout.num_positions();
    let block = layout.block();
    let amps = state.amplitudes_mut();
    let mut slice = vec![Complex64::new(0.0, 0.0); n];
    for offset in 0..block {
        for (p, s) in slice.iter_mut().enumerate() {
            *s = amps[p * block + offset];
        }
        f(&mut slice);
        for (p, s) in slice.iter().enumerate() {
            amps[p * block + offset] = *s;
        }
    }
}

/// Negates amplitudes whose answer register equals `marked`.
fn flip_answer(state: &mut PureState, marked: usize) {
    let layout = *state.layout();
    let ws = layout.workspace_dim();
    for chunk in state.amplitudes_mut().chunks_exact_mut(layout.block()) {
        for a in &mut chunk[marked * ws..(marked + 1) * ws] {
            *a = -*a;
        }
    }
}

fn uniform_vector(n: usize, support: impl Iterator<Item = usize>) -> Vec<f64> {
    let support: Vec<usize> = support.collect();
    let mut u = vec![0.0; n];
    let amp = 1.0 / (support.len() as f64).sqrt();
    for p in support {
        u[p] = amp;
    }
    u
}

/// Grover search for `x` with `f(x) = y` against a permutation oracle; the
/// input is `y`.
#[derive(Debug, Clone)]
pub struct GroverInversion {
    num_positions: usize,
    iterations: usize,
    uniform: Vec<f64>,
}

impl GroverInversion {
    pub fn new(num_positions: usize, iterations: usize) -> Result<Self, QsimError> {
        if num_positions < 2 || !num_positions.is_power_of_two() {
            return Err(QsimError::NotPowerOfTwo { len: num_positions });
        }
        Ok(Self {
            num_positions,
            iterations,
            uniform: uniform_vector(num_positions, 0..num_positions),
        })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

impl QueryAlgorithm for GroverInversion {
    fn layout(&self) -> BasisLayout {
        BasisLayout::new(self.num_positions, self.num_positions, 1).expect("valid layout")
    }

    fn num_queries(&self) -> usize {
        2 * self.iterations
    }

    fn step(&self, t: usize, input: usize, state: &mut PureState) {
        match t {
            0 => prepare_positions(state, &self.uniform),
            t if t % 2 == 1 => flip_answer(state, input),
            _ => reflect_about(state, &self.uniform),
        }
    }
}

/// Grover search for a position holding bit 1 in a bit-string oracle.
///
/// With `avoid_input` the input index `j` is excluded from the search space,
/// so the run never places amplitude on the box it is asked about.
#[derive(Debug, Clone)]
pub struct GroverSearch {
    num_positions: usize,
    iterations: usize,
    avoid_input: bool,
}

impl GroverSearch {
    pub fn new(num_positions: usize, iterations: usize, avoid_input: bool) -> Result<Self, QsimError> {
        BasisLayout::new(num_positions, 2, 1)?;
        Ok(Self {
            num_positions,
            iterations,
            avoid_input,
        })
    }

    fn uniform(&self, input: usize) -> Vec<f64> {
        let avoid = self.avoid_input;
        uniform_vector(
            self.num_positions,
            (0..self.num_positions).filter(|&p| !(avoid && p == input)),
        )
    }
}

impl QueryAlgorithm for GroverSearch {
    fn layout(&self) -> BasisLayout {
        BasisLayout::new(self.num_positions, 2, 1).expect("valid layout")
    }

    fn num_queries(&self) -> usize {
        2 * self.iterations
    }

    fn step(&self, t: usize, input: usize, state: &mut PureState) {
        match t {
            0 => prepare_positions(state, &self.uniform(input)),
            t if t % 2 == 1 => flip_answer(state, 1),
            _ => reflect_about(state, &self.uniform(input)),
        }
    }
}

/// Result of [`grover_invert`].
#[derive(Debug, Clone)]
pub struct GroverOutcome {
    pub iterations: usize,
    /// Most probable output.
    pub candidate: usize,
    /// Exact probability of `candidate`.
    pub candidate_probability: f64,
    /// Exact probability of outputting `f⁻¹(y)`.
    pub success_probability: f64,
    pub trace: QueryTrace,
}

/// Inverts `y` under `f` with Grover's algorithm, reading probabilities off
/// the final statevector. Defaults to `⌊(π/4)·√N⌋` iterations.
pub fn grover_invert(
    f: &Permutation,
    y: usize,
    iterations: Option<usize>,
) -> Result<GroverOutcome, QsimError> {
    let n = f.len();
    let iterations = iterations.unwrap_or_else(|| default_iterations(n));
    let alg = GroverInversion::new(n, iterations)?;
    let oracle = Oracle::permutation(f.clone())?;
    let (state, trace) = run(&alg, &oracle, y)?;
    let dist = measurement_distribution(&state, Register::Position);
    let (candidate, &candidate_probability) = dist
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty distribution");
    let target = f.inverse().apply(y);
    Ok(GroverOutcome {
        iterations,
        candidate,
        candidate_probability,
        success_probability: dist[target],
        trace,
    })
}
