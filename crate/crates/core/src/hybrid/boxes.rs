use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::swap::swap_with_trace;
use super::{collision_in_window, unpack, HybridError, SwapReport};
use crate::advice::{group_boundaries, parity_preprocess, ParityAdapter, ParityPad};
use crate::harness::trial_rng;
use crate::qsim::{BasisLayout, GroverSearch, Idle, Oracle, QueryAlgorithm};

/// Largest `N` for which advice classes are enumerated.
pub const MAX_PARTITION_BITS: usize = 16;

/// Preprocessing that maps a box pattern to an advice string.
pub trait AdviceScheme: Sync {
    fn advice_bits(&self) -> usize;
    fn advise(&self, x: &[bool]) -> Result<Vec<bool>, HybridError>;
}

/// Yao's parity pad with `m` contiguous groups.
#[derive(Debug, Clone, Copy)]
pub struct ParityScheme {
    pub m: usize,
}

impl AdviceScheme for ParityScheme {
    fn advice_bits(&self) -> usize {
        self.m
    }

    fn advise(&self, x: &[bool]) -> Result<Vec<bool>, HybridError> {
        Ok(parity_preprocess(x, self.m)?.parities().to_vec())
    }
}

/// The class `D_α`: every pattern the scheme maps to `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdvicePartition {
    pub alpha: Vec<bool>,
    /// Packed patterns in increasing order.
    pub members: Vec<u64>,
}

impl AdvicePartition {
    /// All nonempty classes over `{0,1}^n`, ordered by `alpha`.
    pub fn enumerate<S: AdviceScheme + ?Sized>(scheme: &S, n: usize) -> Result<Vec<Self>, HybridError> {
        if n > MAX_PARTITION_BITS {
            return Err(HybridError::TooLarge {
                n,
                max: MAX_PARTITION_BITS,
            });
        }
        let mut classes: BTreeMap<Vec<bool>, Vec<u64>> = BTreeMap::new();
        for x in 0..1u64 << n {
            classes.entry(scheme.advise(&unpack(x, n))?).or_default().push(x);
        }
        Ok(classes
            .into_iter()
            .map(|(alpha, members)| Self { alpha, members })
            .collect())
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// `|D_α| ≥ 2^(n−m)`.
    pub fn is_eligible(&self, n: usize, m: usize) -> bool {
        self.members.len() >= 1 << (n - m)
    }
}

/// Algorithm answering box `j` from the advice string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum BoxAlgorithm {
    /// The parity adapter for the pad `alpha` under the equal split.
    Parity,
    /// Grover search for a 1 among the boxes other than `j`.
    Grover { iterations: usize },
    /// No queries.
    Idle,
    /// Lifts every lid except `j` once, ignoring the advice.
    Sweep,
}

impl BoxAlgorithm {
    pub fn build(
        &self,
        n: usize,
        alpha: &[bool],
        j: usize,
    ) -> Result<Box<dyn QueryAlgorithm + Send + Sync>, HybridError> {
        Ok(match *self {
            Self::Parity => {
                let pad = ParityPad::from_parts(group_boundaries(n, alpha.len()), alpha.to_vec())?;
                Box::new(ParityAdapter::new(&pad, j)?)
            }
            Self::Grover { iterations } => Box::new(GroverSearch::new(n, iterations, true)?),
            Self::Idle => Box::new(Idle::new(BasisLayout::new(n, 2, 1)?)),
            Self::Sweep => {
                let pad = ParityPad::from_parts(vec![0, n], vec![false])?;
                Box::new(ParityAdapter::new(&pad, j)?)
            }
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxConfig {
    pub n: usize,
    pub m: usize,
    pub algorithm: BoxAlgorithm,
    pub trials: u64,
    pub seed: u64,
    /// Uniform draws of `z ≠ j` per trial for the query-magnitude mean.
    pub z_samples: usize,
}

/// Sample mean of `q_z(x)` against its exact expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanEstimate {
    pub samples: usize,
    pub mean: f64,
    pub std_err: f64,
    pub expected: f64,
    /// `|mean − expected| ≤ 3·std_err` (plus `1e−12` for exact samples).
    pub within: bool,
}

pub fn query_mean_estimate(samples: &[f64], expected: f64) -> MeanEstimate {
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    let var = if samples.len() > 1 {
        samples.iter().map(|q| (q - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    let std_err = (var / k).sqrt();
    MeanEstimate {
        samples: samples.len(),
        mean,
        std_err,
        expected,
        within: (mean - expected).abs() <= 3.0 * std_err + 1e-12,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxTrial {
    pub trial: u64,
    pub j: usize,
    pub alpha: String,
    pub x: String,
    pub y: String,
    pub window: Vec<usize>,
    /// `Σ_{z ∈ I} q_z(x)`.
    pub window_mass: f64,
    pub report: SwapReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxStats {
    pub config: BoxConfig,
    pub num_queries: usize,
    /// `T·√((m+1)/(N−1))`.
    pub window_bound: f64,
    pub total_classes: usize,
    pub eligible_classes: usize,
    pub trials: Vec<BoxTrial>,
    pub query_mean: MeanEstimate,
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// The collision experiment on the box problem.
///
/// Each trial draws a pattern uniformly among those whose advice class has
/// at least `2^(N−m)` members, a box `j` and a window `I` of `m + 1`
/// indices. It then finds `x ≠ y` in the class agreeing outside `I`, runs
/// the algorithm for `(α, j)` against both and compares the final states.
/// The trace of the `x` run also feeds the estimate of `E[q_z(x)]` over
/// uniform `z ≠ j`.
pub fn box_experiment<S: AdviceScheme + ?Sized>(
    config: &BoxConfig,
    scheme: &S,
) -> Result<BoxStats, HybridError> {
    let (n, m) = (config.n, config.m);
    if m == 0 || m >= n || scheme.advice_bits() != m {
        return Err(HybridError::InvalidConfig(format!("need 1 <= m < N, got m = {m}, N = {n}")));
    }
    if config.trials == 0 || config.z_samples == 0 {
        return Err(HybridError::InvalidConfig("trials and z samples must be positive".into()));
    }
    let classes = AdvicePartition::enumerate(scheme, n)?;
    let mut class_of = vec![0usize; 1 << n];
    for (c, class) in classes.iter().enumerate() {
        for &x in &class.members {
            class_of[x as usize] = c;
        }
    }
    let eligible_classes = classes.iter().filter(|c| c.is_eligible(n, m)).count();
    if eligible_classes == 0 {
        return Err(HybridError::NoEligibleClass);
    }

    let outcomes: Vec<(BoxTrial, Vec<f64>, usize)> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let class = loop {
                let c = &classes[class_of[rng.gen_range(0..1usize << n)]];
                if c.is_eligible(n, m) {
                    break c;
                }
            };
            let j = rng.gen_range(0..n);
            let mut window = sample(&mut rng, n, m + 1).into_vec();
            window.sort_unstable();
            let (x, y) = collision_in_window(&class.members, n, &window)?;
            let (x_bits, y_bits) = (unpack(x, n), unpack(y, n));
            debug_assert_eq!(scheme.advise(&x_bits)?, class.alpha);
            let alg = config.algorithm.build(n, &class.alpha, j)?;
            let ox = Oracle::bit_string(x_bits.clone(), Some(j))?;
            let oy = Oracle::bit_string(y_bits.clone(), Some(j))?;
            let (report, trace) = swap_with_trace(&alg, &ox, &oy, j)?;
            let z_draws = (0..config.z_samples)
                .map(|_| {
                    let z = (j + rng.gen_range(1..n)) % n;
                    trace.totals[z]
                })
                .collect();
            let t = trace.num_queries();
            Ok((
                BoxTrial {
                    trial,
                    j,
                    alpha: bit_string(&class.alpha),
                    x: bit_string(&x_bits),
                    y: bit_string(&y_bits),
                    window_mass: trace.mass_on(&window),
                    window,
                    report,
                },
                z_draws,
                t,
            ))
        })
        .collect::<Result<_, HybridError>>()?;

    let num_queries = outcomes.iter().map(|o| o.2).max().unwrap_or(0);
    let z_draws: Vec<f64> = outcomes.iter().flat_map(|o| o.1.iter().copied()).collect();
    let trials: Vec<BoxTrial> = outcomes.into_iter().map(|o| o.0).collect();
    Ok(BoxStats {
        config: config.clone(),
        num_queries,
        window_bound: num_queries as f64 * ((m + 1) as f64 / (n - 1) as f64).sqrt(),
        total_classes: classes.len(),
        eligible_classes,
        query_mean: query_mean_estimate(&z_draws, num_queries as f64 / (n - 1) as f64),
        trials,
    })
}
