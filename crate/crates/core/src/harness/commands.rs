use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{config_hash, trial_rng, HarnessError, Report};
use crate::advice::measure_tradeoff;
use crate::compress::{
    decode, encode, events, h_distance, instance_relation, inversion_runs, sample_r_with,
    CompressError, CompressionParams, GroverScheme, HellmanScheme, InversionScheme, LookupScheme,
    SUCCESS_THRESHOLD,
};
use crate::hybrid::{box_experiment, swapping_suite, tv_suite, BoxAlgorithm, BoxConfig, ParityScheme};
use crate::qsim::{closed_form_success, grover_invert};
use crate::Permutation;

/// Largest `N` accepted by the Grover command.
pub const MAX_GROVER_N: usize = 256;

fn check_trials(trials: u64) -> Result<(), HarnessError> {
    if trials == 0 {
        return Err(HarnessError::InvalidConfig("trials must be at least 1".into()));
    }
    Ok(())
}

fn check_power_of_two(n: usize) -> Result<(), HarnessError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(HarnessError::InvalidConfig(format!("N = {n} is not a power of two >= 2")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct GroverConfig {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// `None` for `⌊(π/4)·√N⌋`.
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroverRow {
    pub seed: u64,
    pub config_hash: String,
    pub trial: u64,
    pub n: usize,
    pub iterations: usize,
    pub queries: usize,
    pub y: usize,
    pub success_probability: f64,
    pub closed_form: f64,
    pub candidate: usize,
    pub total_query_mass: f64,
}

/// Grover inversion of a random `y` under a random permutation per trial.
pub fn cmd_grover(config: &GroverConfig) -> Result<Report<GroverRow>, HarnessError> {
    check_power_of_two(config.n)?;
    check_trials(config.trials)?;
    if config.n > MAX_GROVER_N {
        return Err(HarnessError::InvalidConfig(format!("N = {} exceeds {MAX_GROVER_N}", config.n)));
    }
    let hash = config_hash(&("grover", config));
    let rows = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let f = Permutation::random(config.n, &mut rng);
            let y = rng.gen_range(0..config.n);
            let out = grover_invert(&f, y, config.iterations)?;
            Ok(GroverRow {
                seed: config.seed,
                config_hash: hash.clone(),
                trial,
                n: config.n,
                iterations: out.iterations,
                queries: out.trace.num_queries(),
                y,
                success_probability: out.success_probability,
                closed_form: closed_form_success(config.n, out.iterations),
                candidate: out.candidate,
                total_query_mass: out.trace.total_mass(),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut violations = Vec::new();
    for row in &rows {
        if (row.success_probability - row.closed_form).abs() > 1e-6 {
            violations.push(format!("trial {}: success {} vs closed form {}", row.trial, row.success_probability, row.closed_form));
        }
        if (row.total_query_mass - row.queries as f64).abs() > 1e-9 {
            violations.push(format!("trial {}: query mass {} != T", row.trial, row.total_query_mass));
        }
    }
    let first = &rows[0];
    Ok(Report {
        summary: vec![format!(
            "N = {}, {} iterations, T = {}, success {:.9}",
            first.n, first.iterations, first.queries, first.success_probability
        )],
        rows,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxCmdConfig {
    pub n: usize,
    pub m: usize,
    pub algorithm: BoxAlgorithm,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxRow {
    pub seed: u64,
    pub config_hash: String,
    pub trial: u64,
    pub n: usize,
    pub m: usize,
    pub queries: usize,
    pub j: usize,
    pub alpha: String,
    pub x: String,
    pub y: String,
    /// Window indices joined by `;`.
    pub window: String,
    pub window_mass: f64,
    pub distance: f64,
    pub swap_bound: f64,
    pub general_bound: f64,
    pub window_bound: f64,
    pub holds: bool,
    pub holds_general: bool,
}

fn join(items: &[usize]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

/// Box-problem collision experiment with the parity advice scheme.
/// Draws about 10⁴ values of `z` in total for the query-magnitude mean.
pub fn cmd_box(config: &BoxCmdConfig) -> Result<Report<BoxRow>, HarnessError> {
    check_trials(config.trials)?;
    let hash = config_hash(&("box", config));
    let stats = box_experiment(
        &BoxConfig {
            n: config.n,
            m: config.m,
            algorithm: config.algorithm,
            trials: config.trials,
            seed: config.seed,
            z_samples: 10_000usize.div_ceil(config.trials as usize).max(1),
        },
        &ParityScheme { m: config.m },
    )?;
    let rows: Vec<BoxRow> = stats
        .trials
        .iter()
        .map(|t| BoxRow {
            seed: config.seed,
            config_hash: hash.clone(),
            trial: t.trial,
            n: config.n,
            m: config.m,
            queries: t.report.num_queries,
            j: t.j,
            alpha: t.alpha.clone(),
            x: t.x.clone(),
            y: t.y.clone(),
            window: join(&t.window),
            window_mass: t.window_mass,
            distance: t.report.actual,
            swap_bound: t.report.bound,
            general_bound: t.report.general_bound,
            window_bound: stats.window_bound,
            holds: t.report.holds,
            holds_general: t.report.holds_general,
        })
        .collect();

    let mut violations: Vec<String> = rows
        .iter()
        .filter(|r| !r.holds_general)
        .map(|r| format!("trial {}: distance {} exceeds {}", r.trial, r.distance, r.general_bound))
        .collect();
    let q = &stats.query_mean;
    if !q.within {
        violations.push(format!(
            "mean q_z = {} is not within 3 SE ({}) of {}",
            q.mean, q.std_err, q.expected
        ));
    }
    let tight_misses = rows.iter().filter(|r| !r.holds).count();
    Ok(Report {
        summary: vec![
            format!(
                "classes {} (eligible {}), T = {}, window bound {:.6}",
                stats.total_classes, stats.eligible_classes, stats.num_queries, stats.window_bound
            ),
            format!(
                "mean q_z over {} draws: {:.6} ± {:.6} (expected {:.6})",
                q.samples, q.mean, q.std_err, q.expected
            ),
            format!("rows above the single-factor swap bound: {tight_misses}"),
        ],
        rows,
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HellmanConfig {
    pub n: usize,
    pub s: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HellmanRow {
    pub seed: u64,
    pub config_hash: String,
    pub trial: u64,
    pub n: usize,
    pub s: usize,
    pub entries: usize,
    /// `S_meas = entries × 2n`.
    pub advice_bits: usize,
    pub header_bits: usize,
    /// `T_meas`, worst case over all `y`.
    pub worst_calls: usize,
    pub mean_calls: f64,
    pub product: usize,
    /// `S·T / (N·2n)`.
    pub product_ratio: f64,
    pub correct_fraction: f64,
}

/// Hellman tradeoff sweep: one row per trial and stride, each inverting
/// every `y`.
pub fn cmd_hellman(config: &HellmanConfig) -> Result<Report<HellmanRow>, HarnessError> {
    check_power_of_two(config.n)?;
    check_trials(config.trials)?;
    if config.s.is_empty() {
        return Err(HarnessError::InvalidConfig("no strides given".into()));
    }
    let hash = config_hash(&("hellman", config));
    let n_bits = config.n.trailing_zeros() as usize;
    let rows: Vec<HellmanRow> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let f = Permutation::random(config.n, &mut trial_rng(config.seed, trial));
            config
                .s
                .iter()
                .map(|&s| {
                    let p = measure_tradeoff(&f, s)?;
                    Ok(HellmanRow {
                        seed: config.seed,
                        config_hash: hash.clone(),
                        trial,
                        n: config.n,
                        s,
                        entries: p.entries,
                        advice_bits: p.advice_bits,
                        header_bits: p.header_bits,
                        worst_calls: p.worst_calls,
                        mean_calls: p.mean_calls,
                        product: p.product(),
                        product_ratio: p.product() as f64 / (config.n * 2 * n_bits) as f64,
                        correct_fraction: p.correct_fraction,
                    })
                })
                .collect::<Result<Vec<_>, HarnessError>>()
        })
        .collect::<Result<Vec<_>, HarnessError>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut violations = Vec::new();
    for r in &rows {
        if r.correct_fraction < 1.0 {
            violations.push(format!("trial {} s {}: inverted {} of y", r.trial, r.s, r.correct_fraction));
        }
        if r.worst_calls > 2 * r.s + 2 {
            violations.push(format!("trial {} s {}: {} calls", r.trial, r.s, r.worst_calls));
        }
        if !(1.0 / 8.0..=8.0).contains(&r.product_ratio) {
            violations.push(format!("trial {} s {}: S·T ratio {}", r.trial, r.s, r.product_ratio));
        }
    }
    Ok(Report {
        summary: vec![format!("{} rows, N·2n = {}", rows.len(), config.n * 2 * n_bits)],
        rows,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum SchemeChoice {
    Hellman { s: usize },
    Grover { iterations: Option<usize> },
    Lookup,
}

impl SchemeChoice {
    fn build(self) -> Box<dyn InversionScheme> {
        match self {
            Self::Hellman { s } => Box::new(HellmanScheme { s }),
            Self::Grover { iterations } => Box::new(GroverScheme { iterations }),
            Self::Lookup => Box::new(LookupScheme),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompressConfig {
    pub n: usize,
    pub scheme: SchemeChoice,
    pub delta: f64,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressRow {
    pub seed: u64,
    pub config_hash: String,
    pub trial: u64,
    pub n: usize,
    pub scheme: String,
    pub delta: f64,
    pub c: f64,
    pub queries: usize,
    pub advice_bits: usize,
    /// `|I|`.
    pub inverted: usize,
    pub r_size: usize,
    pub good_count: usize,
    /// `(|I|/T²)·(δ/2 − 10δ²/c)`.
    pub expected_good: f64,
    pub encode_failed: bool,
    pub decode_success: bool,
    pub logical_bits: u64,
    pub bound_bits: f64,
    pub identity_holds: bool,
    /// Largest `‖φ_f − φ_h‖` over `x ∈ G`.
    pub max_h_distance: f64,
    pub sqrt_c: f64,
    /// Slack of `log₂(ε·N!/4) ≤ log₂ N! − log₂|G|! + S + κ·log₂ N`.
    pub relation_slack: f64,
}

/// Encode/decode round trips of one permutation over fresh draws of `R`.
///
/// The permutation comes from stream `u64::MAX` of the seed; trial `t`
/// draws `R` from stream `t`, each element with probability `δ/T²`
/// (`δ` for zero-query schemes).
pub fn cmd_compress(config: &CompressConfig) -> Result<Report<CompressRow>, HarnessError> {
    check_power_of_two(config.n)?;
    check_trials(config.trials)?;
    let n = config.n;
    let params = CompressionParams::new(config.delta, config.c)?;
    let hash = config_hash(&("compress", config));
    let scheme = config.scheme.build();
    let f = Permutation::random(n, &mut trial_rng(config.seed, u64::MAX));
    let advice = scheme.preprocess(&f)?;
    let alg = scheme.algorithm(n, &advice)?;
    let t = alg.num_queries();
    let runs = inversion_runs(&f, alg.as_ref())?;
    let inverted = runs.iter().filter(|r| r.success >= SUCCESS_THRESHOLD).count();
    let p = config.delta / (t.max(1) * t.max(1)) as f64;
    let epsilon = inverted as f64 / n as f64;

    let rows = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let r = sample_r_with(n, p, &mut trial_rng(config.seed, trial));
            let mut in_r = vec![false; n];
            for &x in &r {
                in_r[x] = true;
            }
            let good: Vec<usize> = runs
                .iter()
                .filter(|run| run.success >= SUCCESS_THRESHOLD)
                .filter(|run| events(run, &in_r, &params, t) == (true, true))
                .map(|run| run.x)
                .collect();
            let max_h_distance = good
                .iter()
                .map(|&x| h_distance(&f, alg.as_ref(), &r, x))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let mut row = CompressRow {
                seed: config.seed,
                config_hash: hash.clone(),
                trial,
                n,
                scheme: scheme.name(),
                delta: config.delta,
                c: config.c,
                queries: t,
                advice_bits: advice.len(),
                inverted,
                r_size: r.len(),
                good_count: good.len(),
                expected_good: params.expected_good(inverted, t),
                encode_failed: true,
                decode_success: false,
                logical_bits: 0,
                bound_bits: 0.0,
                identity_holds: true,
                max_h_distance,
                sqrt_c: config.c.sqrt(),
                relation_slack: instance_relation(n, epsilon, advice.len(), good.len()).slack_bits,
            };
            match encode(&f, scheme.as_ref(), &r, &params) {
                Ok(enc) => {
                    row.encode_failed = false;
                    row.logical_bits = enc.logical_bits;
                    row.bound_bits = enc.length_bound();
                    row.identity_holds = enc.logical_bits == enc.components().total();
                    row.decode_success = decode(&enc, &r, scheme.as_ref()).is_ok_and(|g| g == f);
                }
                Err(CompressError::TooFewGood { .. }) => {}
                Err(e) => return Err(e.into()),
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut violations = Vec::new();
    for r in &rows {
        if !r.encode_failed && !r.decode_success {
            violations.push(format!("trial {}: decode did not return f", r.trial));
        }
        if !r.identity_holds {
            violations.push(format!("trial {}: length identity fails", r.trial));
        }
        if !r.encode_failed && r.logical_bits as f64 > r.bound_bits {
            violations.push(format!("trial {}: {} bits exceed bound {}", r.trial, r.logical_bits, r.bound_bits));
        }
        if r.max_h_distance > r.sqrt_c + 1e-9 {
            violations.push(format!("trial {}: h distance {} > sqrt(c)", r.trial, r.max_h_distance));
        }
    }
    let successes = rows.iter().filter(|r| r.decode_success).count();
    Ok(Report {
        summary: vec![
            format!(
                "scheme {}, T = {}, S = {}, |I| = {}, claim margin {:.6}",
                scheme.name(),
                t,
                advice.len(),
                inverted,
                params.claim_margin()
            ),
            format!("decode(encode(f)) = f in {successes}/{}", rows.len()),
        ],
        rows,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Swapping,
    Tv,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Oracle sizes for the swapping suite.
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub seed: u64,
    pub config_hash: String,
    pub suite: &'static str,
    pub trial: u64,
    pub kind: String,
    pub n: usize,
    /// Distance checked: `‖φ_x − φ_y‖` or the TV distance.
    pub lhs: f64,
    /// Its bound: `√(T·Σ_Δ q)` or `4·‖a − b‖`.
    pub rhs: f64,
    pub holds: bool,
}

/// Random instances of the swapping and TV inequalities.
pub fn cmd_verify(config: &VerifyConfig) -> Result<Report<VerifyRow>, HarnessError> {
    check_trials(config.trials)?;
    for &n in &config.sizes {
        check_power_of_two(n)?;
        if n < 8 {
            return Err(HarnessError::InvalidConfig(format!("swapping suite needs N >= 8, got {n}")));
        }
    }
    if config.sizes.is_empty() {
        return Err(HarnessError::InvalidConfig("no sizes given".into()));
    }
    let hash = config_hash(&("verify", config));
    let mut rows = Vec::new();
    if matches!(config.suite, Suite::Swapping | Suite::All) {
        for case in swapping_suite(&config.sizes, config.trials, config.seed)? {
            rows.push(VerifyRow {
                seed: config.seed,
                config_hash: hash.clone(),
                suite: "swapping",
                trial: case.trial,
                kind: case.kind.to_string(),
                n: case.n,
                lhs: case.report.actual,
                rhs: case.report.bound,
                holds: case.report.holds,
            });
        }
    }
    if matches!(config.suite, Suite::Tv | Suite::All) {
        for (trial, r) in tv_suite(config.trials, config.seed).into_iter().enumerate() {
            rows.push(VerifyRow {
                seed: config.seed,
                config_hash: hash.clone(),
                suite: "tv",
                trial: trial as u64,
                kind: "random-states".into(),
                n: 0,
                lhs: r.tv,
                rhs: r.bound,
                holds: r.holds,
            });
        }
    }
    let violations: Vec<String> = rows
        .iter()
        .filter(|r| !r.holds)
        .map(|r| format!("{} trial {}: {} > {}", r.suite, r.trial, r.lhs, r.rhs))
        .collect();
    let held = rows.len() - violations.len();
    Ok(Report {
        summary: vec![format!("{held}/{} checks hold", rows.len())],
        rows,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{write_rows, Format};

    #[test]
    fn grover_rows_match_closed_form() {
        let report = cmd_grover(&GroverConfig {
            n: 4,
            trials: 3,
            seed: 1,
            iterations: None,
        })
        .unwrap();
        assert!(report.violations.is_empty());
        for row in &report.rows {
            assert_eq!((row.iterations, row.queries), (1, 2));
            assert!((row.success_probability - 1.0).abs() < 1e-9);
        }
        assert!(cmd_grover(&GroverConfig {
            n: 512,
            trials: 1,
            seed: 1,
            iterations: None
        })
        .is_err());
    }

    #[test]
    fn idle_box_rows_are_zero() {
        let report = cmd_box(&BoxCmdConfig {
            n: 8,
            m: 2,
            algorithm: BoxAlgorithm::Idle,
            trials: 10,
            seed: 3,
        })
        .unwrap();
        assert!(report.violations.is_empty());
        assert!(report.rows.iter().all(|r| r.distance == 0.0));
    }

    #[test]
    fn hellman_sweep_is_exact() {
        let report = cmd_hellman(&HellmanConfig {
            n: 256,
            s: vec![4, 16],
            trials: 2,
            seed: 4,
        })
        .unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!((report.rows[0].trial, report.rows[0].s), (0, 4));
        assert_eq!((report.rows[1].trial, report.rows[1].s), (0, 16));
    }

    #[test]
    fn compress_rows_are_reproducible() {
        let config = CompressConfig {
            n: 16,
            scheme: SchemeChoice::Hellman { s: 2 },
            delta: 0.9,
            c: 0.001,
            trials: 12,
            seed: 5,
        };
        let a = cmd_compress(&config).unwrap();
        assert!(a.violations.is_empty(), "{:?}", a.violations);
        let b = cmd_compress(&config).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_rows(&mut x, &a.rows, Format::Csv).unwrap();
        write_rows(&mut y, &b.rows, Format::Csv).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn verify_suites_hold() {
        let report = cmd_verify(&VerifyConfig {
            suite: Suite::All,
            sizes: vec![8],
            trials: 20,
            seed: 6,
        })
        .unwrap();
        assert_eq!(report.rows.len(), 40);
        assert!(report.violations.is_empty());
    }
}
