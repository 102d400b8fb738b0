//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits nonzero if any fails.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use advice_lab::advice::{
    hellman_build, measure_tradeoff, parity_answer, parity_preprocess, HellmanProgram, ParityAdapter,
};
use advice_lab::compress::{
    decode, encode, good_set, h_distance, inversion_set, rank_perm, rank_set, sample_r, unrank_perm,
    unrank_set, CompressError, CompressionParams, HellmanScheme, InversionScheme, LookupScheme, KAPPA,
};
use advice_lab::hybrid::{
    box_experiment, brute_force_collisions, collision_in_window, swapping_suite, tv_suite, BoxAlgorithm,
    BoxConfig, ParityScheme, RandomPairedAlgorithm,
};
use advice_lab::qsim::{
    grover_invert, run, BasisLayout, ClassicalAdapter, GroverInversion, GroverSearch, Idle, Oracle,
    QueryAlgorithm,
};
use advice_lab::Permutation;
use rand::seq::{index::sample, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grover_exact() -> Outcome {
    let start = Instant::now();
    let f64_ = Permutation::random(64, &mut rng(1));
    let big = grover_invert(&f64_, 17, Some(6)).expect("grover at N = 64");
    let expected = (13.0 * (1.0f64 / 8.0).asin()).sin().powi(2);
    let f4 = Permutation::random(4, &mut rng(2));
    let small = grover_invert(&f4, 3, Some(1)).expect("grover at N = 4");
    let elapsed = start.elapsed();
    let pass = (big.success_probability - expected).abs() <= 1e-6
        && (small.success_probability - 1.0).abs() <= 1e-9
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "N=64 k=6: {:.12} vs sin²(13·asin(1/8)) = {expected:.12}; N=4: {:.12}; {elapsed:.2?}",
            big.success_probability, small.success_probability
        ),
    )
}

/// `(Σ_j q_j(x), T, exact_equality_required)` for one random instance of
/// each built-in algorithm.
fn mass_audit() -> Outcome {
    type Check = (f64, usize, bool);
    type Maker = Box<dyn Fn(&mut ChaCha8Rng) -> Check + Sync>;
    let kinds: Vec<(&str, Maker)> = vec![
        (
            "grover-inversion",
            Box::new(|r| {
                let n = 1 << r.gen_range(2..=6);
                let alg = GroverInversion::new(n, r.gen_range(0..=4)).unwrap();
                let oracle = Oracle::permutation(Permutation::random(n, r)).unwrap();
                let (_, t) = run(&alg, &oracle, r.gen_range(0..n)).unwrap();
                (t.total_mass(), alg.num_queries(), false)
            }),
        ),
        (
            "grover-search",
            Box::new(|r| {
                let n = r.gen_range(3..=40);
                let alg = GroverSearch::new(n, r.gen_range(0..=4), true).unwrap();
                let j = r.gen_range(0..n);
                let bits: Vec<bool> = (0..n).map(|_| r.gen()).collect();
                let (_, t) = run(&alg, &Oracle::bit_string(bits, Some(j)).unwrap(), j).unwrap();
                (t.total_mass(), alg.num_queries(), false)
            }),
        ),
        (
            "random-paired",
            Box::new(|r| {
                let n = 1 << r.gen_range(2..=4);
                let layout = BasisLayout::new(n, n, r.gen_range(1..=3)).unwrap();
                let alg = RandomPairedAlgorithm::new(layout, r.gen_range(0..=3), r);
                let oracle = Oracle::permutation(Permutation::random(n, r)).unwrap();
                let (_, t) = run(&alg, &oracle, r.gen_range(0..n)).unwrap();
                (t.total_mass(), alg.num_queries(), false)
            }),
        ),
        (
            "idle",
            Box::new(|r| {
                let n = r.gen_range(2..=32);
                let alg = Idle::new(BasisLayout::new(n, 2, 1).unwrap());
                let bits: Vec<bool> = (0..n).map(|_| r.gen()).collect();
                let (_, t) = run(&alg, &Oracle::bit_string(bits, None).unwrap(), 0).unwrap();
                (t.total_mass(), alg.num_queries(), true)
            }),
        ),
        (
            "parity-adapter",
            Box::new(|r| {
                let n = r.gen_range(2..=48);
                let bits: Vec<bool> = (0..n).map(|_| r.gen()).collect();
                let pad = parity_preprocess(&bits, r.gen_range(1..n)).unwrap();
                let j = r.gen_range(0..n);
                let alg = ParityAdapter::new(&pad, j).unwrap();
                let (_, t) = run(&alg, &Oracle::bit_string(bits, Some(j)).unwrap(), j).unwrap();
                (t.total_mass(), alg.num_queries(), true)
            }),
        ),
        (
            "hellman-program",
            Box::new(|r| {
                let n = 1 << r.gen_range(1..=6);
                let f = Permutation::random(n, r);
                let alg = ClassicalAdapter::new(HellmanProgram::from_table(
                    &hellman_build(&f, r.gen_range(1..=n)).unwrap(),
                ));
                let (_, t) = run(&alg, &Oracle::permutation(f).unwrap(), r.gen_range(0..n)).unwrap();
                (t.total_mass(), alg.num_queries(), true)
            }),
        ),
        (
            "lookup-program",
            Box::new(|r| {
                let n = 1 << r.gen_range(1..=6);
                let f = Permutation::random(n, r);
                let alg = LookupScheme.instantiate(&f).unwrap();
                let (_, t) = run(alg.as_ref(), &Oracle::permutation(f).unwrap(), r.gen_range(0..n)).unwrap();
                (t.total_mass(), alg.num_queries(), true)
            }),
        ),
    ];
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (k, (name, make)) in kinds.iter().enumerate() {
        for i in 0..100u64 {
            let (mass, t, exact) = make(&mut rng(1000 * k as u64 + i));
            worst = worst.max(mass - t as f64);
            if mass > t as f64 + TOL || (exact && mass != t as f64) {
                failures.push(format!("{name} #{i}: {mass} vs T = {t}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} algorithms × 100 instances, max(Σq − T) = {worst:.2e}, classical exact; failures {:?}",
            kinds.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn swapping() -> Outcome {
    let cases = swapping_suite(&[8, 16], 100, 31).expect("swapping suite");
    let held = cases.iter().filter(|c| c.report.actual <= c.report.bound + TOL).count();
    let tightest = cases
        .iter()
        .filter(|c| c.report.bound > 0.0)
        .map(|c| c.report.actual / c.report.bound)
        .fold(0.0, f64::max);
    let kinds: HashSet<&str> = cases.iter().map(|c| c.kind).collect();
    let mut kinds: Vec<_> = kinds.into_iter().collect();
    kinds.sort_unstable();
    outcome(
        held == 100 && cases.len() == 100,
        format!("{held}/{} hold, max ratio {tightest:.6}, kinds {kinds:?}", cases.len()),
    )
}

fn total_variation() -> Outcome {
    let reports = tv_suite(100, 41);
    let held = reports.iter().filter(|r| r.tv <= 4.0 * r.euclidean + TOL).count();
    let tightest = reports.iter().map(|r| r.tv / (4.0 * r.euclidean)).fold(0.0, f64::max);
    outcome(
        held == 100 && reports.len() == 100,
        format!("{held}/{} hold, max TV/(4·dist) = {tightest:.4}", reports.len()),
    )
}

fn parity_exhaustive() -> Outcome {
    let start = Instant::now();
    let sizes: Vec<usize> = (3..=10).map(|b| 1 << b).collect();
    let jobs: Vec<(usize, usize)> = sizes.iter().flat_map(|&n| (1..n).map(move |m| (n, m))).collect();
    let failures: Vec<String> = jobs
        .par_iter()
        .filter_map(|&(n, m)| {
            let cap = n.div_ceil(m) - 1;
            for trial in 0..20u64 {
                let mut r = rng(((n as u64) << 32) | ((m as u64) << 8) | trial);
                let bits: Vec<bool> = (0..n).map(|_| r.gen()).collect();
                let pad = parity_preprocess(&bits, m).ok()?;
                let oracle = Oracle::bit_string(bits.clone(), None).ok()?;
                let mut most = 0;
                for (j, &bit) in bits.iter().enumerate() {
                    let (answer, queries) = match parity_answer(j, &pad, &oracle.with_forbidden(Some(j)).ok()?) {
                        Ok(v) => v,
                        Err(e) => return Some(format!("N={n} m={m} j={j}: {e}")),
                    };
                    if answer != bit || queries > cap {
                        return Some(format!("N={n} m={m} j={j}: answer {answer}, {queries} queries"));
                    }
                    most = most.max(queries);
                }
                if most != cap {
                    return Some(format!("N={n} m={m}: max queries {most} != {cap}"));
                }
            }
            None
        })
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{} (N, m) pairs × all j × 20 strings in {:.2?}; failures {:?}",
            jobs.len(),
            start.elapsed(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn hellman() -> Outcome {
    let start = Instant::now();
    let (n, n_bits) = (1024usize, 10usize);
    let reference = (n * 2 * n_bits) as f64;
    let strides = [8usize, 16, 32, 64];
    let results: Vec<Vec<(usize, f64, usize, f64)>> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let f = Permutation::random(n, &mut rng(6000 + i));
            strides
                .iter()
                .map(|&s| {
                    let p = measure_tradeoff(&f, s).expect("hellman");
                    (s, p.correct_fraction, p.worst_calls, p.product() as f64 / reference)
                })
                .collect()
        })
        .collect();
    let elapsed = start.elapsed();
    let rows: Vec<_> = results.into_iter().flatten().collect();
    let all_correct = rows.iter().all(|r| r.1 == 1.0);
    let calls_ok = rows.iter().all(|r| r.2 <= 2 * r.0 + 2);
    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.3), hi.max(r.3)));
    let worst_32 = rows.iter().filter(|r| r.0 == 32).map(|r| r.2).max().unwrap_or(0);
    outcome(
        all_correct && calls_ok && lo >= 1.0 / 8.0 && hi <= 8.0 && elapsed < Duration::from_secs(30),
        format!(
            "50 perms at N=1024: all inverted {all_correct}, worst calls at s=32 {worst_32} ≤ 66, S·T/(N·2n) in [{lo:.3}, {hi:.3}], {elapsed:.2?}"
        ),
    )
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn fact(n: u128) -> u128 {
    (1..=n).product()
}

fn clog2(m: u128) -> u64 {
    if m <= 1 {
        0
    } else {
        u64::from(128 - (m - 1).leading_zeros())
    }
}

/// Returns the roundtrip outcome and the h-closeness outcome for the same
/// runs.
fn compression() -> (Outcome, Outcome) {
    let n = 16usize;
    let f = Permutation::random(n, &mut rng(2718));
    let scheme = HellmanScheme { s: 2 };
    let params = CompressionParams::new(0.9, 0.001).expect("params");
    let alg = scheme.instantiate(&f).expect("algorithm");
    let t = alg.num_queries();
    let inverted = inversion_set(&f, alg.as_ref()).expect("runs").len();
    let sqrt_c = params.c().sqrt();
    let (mut ok, mut failed_encode, mut bad_len, mut worst_h, mut good_total) = (0, 0, Vec::new(), 0.0f64, 0);
    for seed in 0..100u64 {
        let r = sample_r(n, params.delta(), t, 50_000 + seed).expect("R");
        let good = good_set(&f, alg.as_ref(), &r, &params).expect("G");
        good_total += good.len();
        for &x in &good {
            worst_h = worst_h.max(h_distance(&f, alg.as_ref(), &r, x).expect("h"));
        }
        match encode(&f, &scheme, &r, &params) {
            Ok(enc) => {
                let (nn, s, rr, g) = (n as u128, enc.advice.len() as u64, r.len() as u128, good.len() as u128);
                let count = clog2(nn + 1);
                let expected = s
                    + 2 * count
                    + clog2(binom(nn, rr))
                    + clog2(fact(nn - rr))
                    + clog2(binom(rr, g))
                    + clog2(fact(rr - g));
                let log2_fact = |m: usize| (2..=m).map(|i| (i as f64).log2()).sum::<f64>();
                let bound = s as f64 + log2_fact(n) - log2_fact(good.len()) + KAPPA * (n as f64).log2();
                if enc.logical_bits != expected || enc.logical_bits as f64 > bound || enc.good_count != good.len() {
                    bad_len.push(seed);
                }
                if decode(&enc, &r, &scheme).is_ok_and(|back| back == f) {
                    ok += 1;
                }
            }
            Err(CompressError::TooFewGood { .. }) => failed_encode += 1,
            Err(e) => panic!("encode: {e}"),
        }
    }
    (
        outcome(
            ok >= 80 && bad_len.is_empty() && inverted == n,
            format!(
                "Hellman s=2 (T={t}), δ=0.9, c=0.001, |I|={inverted}/16: {ok}/100 decoded, {failed_encode} empty G, length failures {bad_len:?}"
            ),
        ),
        outcome(
            worst_h <= sqrt_c + TOL,
            format!("{good_total} good elements, max ‖φ_f − φ_h‖ = {worst_h:.3e} ≤ √c = {sqrt_c:.4}"),
        ),
    )
}

fn codecs() -> Outcome {
    let mut problems = Vec::new();
    let n = 8usize;
    for k in 0..=n {
        let masks: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() as usize == k).collect();
        for (expected, &mask) in masks.iter().enumerate() {
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let rank = rank_set(&set, n).unwrap();
            if rank != expected.into() || unrank_set(&rank, n, k).unwrap() != set {
                problems.push(format!("subset {set:?}"));
            }
        }
    }

    let mut seen = HashSet::new();
    let mut r = rng(9);
    for _ in 0..10_000 {
        let mut p: Vec<usize> = (0..8).collect();
        p.shuffle(&mut r);
        let rank = rank_perm(&p).unwrap();
        let value = u32::try_from(&rank).unwrap();
        if value >= 40_320 || unrank_perm(&rank, 8).unwrap() != p {
            problems.push(format!("perm {p:?}"));
        }
        seen.insert((p, value));
    }
    let distinct_ranks: HashSet<u32> = seen.iter().map(|e| e.1).collect();
    if distinct_ranks.len() != seen.len() {
        problems.push("two sampled permutations share a rank".into());
    }

    let mut ranks = HashSet::new();
    let mut p: Vec<usize> = (0..6).collect();
    loop {
        let rank = u32::try_from(&rank_perm(&p).unwrap()).unwrap();
        if rank >= 720 || !ranks.insert(rank) || unrank_perm(&rank.into(), 6).unwrap() != p {
            problems.push(format!("perm {p:?}"));
        }
        let Some(i) = (1..6).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..6).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    outcome(
        problems.is_empty() && ranks.len() == 720,
        format!(
            "256 subsets of [8], {} distinct sampled 8-perms, {} ranks of 6!; problems {:?}",
            seen.len(),
            ranks.len(),
            problems.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn collisions() -> Outcome {
    let mut problems = Vec::new();
    let mut draws = 0;
    for n in 1..=10usize {
        for m in 0..n {
            for i in 0..100u64 {
                let mut r = rng(((n as u64) << 40) | ((m as u64) << 20) | i);
                let min = 1usize << (n - m);
                let size = r.gen_range(min.max(2)..=(2 * min).min(1 << n)).max(min);
                let d: Vec<u64> = sample(&mut r, 1 << n, size).into_iter().map(|x| x as u64).collect();
                let window: Vec<usize> = sample(&mut r, n, m + 1).into_vec();
                let mask: u64 = window.iter().map(|&w| 1u64 << w).sum();
                let all = brute_force_collisions(&d, n, &window).unwrap();
                draws += 1;
                match collision_in_window(&d, n, &window) {
                    Ok((x, y)) => {
                        let valid = x != y && d.contains(&x) && d.contains(&y) && (x ^ y) & !mask == 0;
                        let listed = all.contains(&(x, y)) || all.contains(&(y, x));
                        if !valid || !listed {
                            problems.push(format!("n={n} m={m} #{i}: ({x}, {y})"));
                        }
                    }
                    Err(e) => problems.push(format!("n={n} m={m} #{i}: {e} with {} brute-force pairs", all.len())),
                }
            }
        }
    }
    outcome(
        problems.is_empty(),
        format!("{draws} draws over n ≤ 10; problems {:?}", problems.iter().take(3).collect::<Vec<_>>()),
    )
}

fn box_expectation() -> Outcome {
    let (n, m) = (16usize, 4usize);
    let mut lines = Vec::new();
    let mut pass = true;
    for algorithm in [BoxAlgorithm::Grover { iterations: 2 }, BoxAlgorithm::Parity, BoxAlgorithm::Sweep] {
        let stats = box_experiment(
            &BoxConfig {
                n,
                m,
                algorithm,
                trials: 100,
                seed: 1100,
                z_samples: 100,
            },
            &ParityScheme { m },
        )
        .expect("box experiment");
        let q = &stats.query_mean;
        let expected = stats.num_queries as f64 / (n - 1) as f64;
        let ok = q.samples == 10_000 && (q.mean - expected).abs() <= 3.0 * q.std_err + 1e-12;
        pass &= ok;
        lines.push(format!("{algorithm:?} {:.4}±{:.4} vs {expected:.4}", q.mean, q.std_err));
    }
    outcome(pass, lines.join("; "))
}

fn main() -> ExitCode {
    let (roundtrip, closeness) = compression();
    let checks = [
        ("grover-inversion-exact", grover_exact()),
        ("query-mass-audit", mass_audit()),
        ("swapping-bound", swapping()),
        ("tv-bound", total_variation()),
        ("parity-pad-exhaustive", parity_exhaustive()),
        ("hellman-tradeoff", hellman()),
        ("compression-roundtrip", roundtrip),
        ("h-closeness", closeness),
        ("codec-bijections", codecs()),
        ("collision-finder", collisions()),
        ("box-query-expectation", box_expectation()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in checks.iter().enumerate() {
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{}/{} passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
