use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::qsim::{BasisLayout, PureState, QueryAlgorithm};

#[derive(Debug, Clone)]
struct Rotation {
    a: usize,
    b: usize,
    cos: f64,
    sin: f64,
    phase: Complex64,
}

#[derive(Debug, Clone)]
enum Step {
    Mix(Vec<Rotation>),
    Diagonal(Vec<Complex64>),
}

/// A random query algorithm whose queries come in pairs around a random
/// diagonal phase.
///
/// Step 0 and every even step apply a random unitary built from Givens
/// rotations on random pairs of basis states. Every odd step applies a random
/// phase to each basis state, so each query pair acts as a diagonal unitary
/// that depends on the oracle only at the queried position.
#[derive(Debug, Clone)]
pub struct RandomPairedAlgorithm {
    layout: BasisLayout,
    steps: Vec<Step>,
}

impl RandomPairedAlgorithm {
    /// `pairs` query pairs, so `T = 2 · pairs`.
    pub fn new<R: Rng + ?Sized>(layout: BasisLayout, pairs: usize, rng: &mut R) -> Self {
        let dim = layout.dim();
        let steps = (0..=2 * pairs)
            .map(|t| {
                if t % 2 == 1 {
                    Step::Diagonal(
                        (0..dim)
                            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)))
                            .collect(),
                    )
                } else {
                    Step::Mix((0..2 * dim).map(|_| random_rotation(dim, rng)).collect())
                }
            })
            .collect();
        Self { layout, steps }
    }
}

fn random_rotation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Rotation {
    let a = rng.gen_range(0..dim);
    let b = (a + rng.gen_range(1..dim)) % dim;
    let theta = rng.gen_range(0.0..TAU);
    Rotation {
        a,
        b,
        cos: theta.cos(),
        sin: theta.sin(),
        phase: Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)),
    }
}

impl QueryAlgorithm for RandomPairedAlgorithm {
    fn layout(&self) -> BasisLayout {
        self.layout
    }

    fn num_queries(&self) -> usize {
        self.steps.len() - 1
    }

    fn step(&self, t: usize, _input: usize, state: &mut PureState) {
        let amps = state.amplitudes_mut();
        match &self.steps[t] {
            Step::Mix(rotations) => {
                for r in rotations {
                    let (x, y) = (amps[r.a], amps[r.b]);
                    amps[r.a] = x * r.cos - r.phase * y * r.sin;
                    amps[r.b] = r.phase.conj() * x * r.sin + y * r.cos;
                }
            }
            Step::Diagonal(phases) => {
                for (a, p) in amps.iter_mut().zip(phases) {
                    *a *= p;
                }
            }
        }
    }
}
