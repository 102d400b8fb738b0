use advice_lab::advice::{hellman_build, hellman_invert, parity_answer, parity_preprocess, HellmanProgram};
use advice_lab::compress::{
    binomial, decode, encode, events, factorial, good_set, h_distance, inversion_runs, rank_perm, rank_set,
    sample_r, unrank_perm, unrank_set, CompressionParams, Encoding, HellmanScheme, InversionScheme,
};
use advice_lab::hybrid::{random_state, RandomPairedAlgorithm};
use advice_lab::qsim::{apply_oracle, run, ClassicalAdapter, GroverInversion, Oracle, QueryAlgorithm, NORM_TOLERANCE};
use advice_lab::Permutation;
use proptest::prelude::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pow2() -> impl Strategy<Value = usize> {
    (2u32..=5).prop_map(|b| 1usize << b)
}

fn check_run<A: QueryAlgorithm + ?Sized>(alg: &A, oracle: &Oracle, input: usize) -> Result<(), TestCaseError> {
    let (state, trace) = run(alg, oracle, input).unwrap();
    prop_assert!((state.norm() - 1.0).abs() <= NORM_TOLERANCE);
    for step in &trace.per_step {
        prop_assert!(step.iter().sum::<f64>() <= 1.0 + 1e-9);
    }
    prop_assert!(trace.total_mass() <= alg.num_queries() as f64 + 1e-9);
    let (again, again_trace) = run(alg, oracle, input).unwrap();
    prop_assert_eq!(state.amplitudes(), again.amplitudes());
    prop_assert_eq!(trace.totals, again_trace.totals);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn grover_runs_keep_norm_and_mass(n in pow2(), k in 0usize..5, seed: u64) {
        let mut r = rng(seed);
        let f = Permutation::random(n, &mut r);
        let alg = GroverInversion::new(n, k).unwrap();
        check_run(&alg, &Oracle::permutation(f).unwrap(), r.gen_range(0..n))?;
    }

    #[test]
    fn random_paired_runs_keep_norm_and_mass(n in pow2(), pairs in 0usize..4, seed: u64) {
        let mut r = rng(seed);
        let oracle = Oracle::permutation(Permutation::random(n, &mut r)).unwrap();
        let alg = RandomPairedAlgorithm::new(
            advice_lab::qsim::BasisLayout::new(n, n, 2).unwrap(),
            pairs,
            &mut r,
        );
        check_run(&alg, &oracle, r.gen_range(0..n))?;
    }

    #[test]
    fn oracle_is_an_involution(n in pow2(), seed: u64) {
        let mut r = rng(seed);
        let oracle = Oracle::permutation(Permutation::random(n, &mut r)).unwrap();
        let state = random_state(advice_lab::qsim::BasisLayout::new(n, n, 3).unwrap(), &mut r);
        let twice = apply_oracle(&apply_oracle(&state, &oracle).unwrap(), &oracle).unwrap();
        for (a, b) in state.amplitudes().iter().zip(twice.amplitudes()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn classical_hellman_matches_direct_inversion(n in pow2(), s in 1usize..=4, seed: u64) {
        let f = Permutation::random(n, &mut rng(seed));
        let table = hellman_build(&f, s).unwrap();
        let alg = ClassicalAdapter::new(HellmanProgram::from_table(&table));
        let oracle = Oracle::permutation(f.clone()).unwrap();
        for y in 0..n {
            let (state, trace) = run(&alg, &oracle, y).unwrap();
            prop_assert_eq!(trace.total_mass(), alg.num_queries() as f64);
            let dist = advice_lab::qsim::measurement_distribution(&state, alg.output_register());
            let (x, calls) = hellman_invert(y, &table, &f).unwrap();
            prop_assert_eq!(f.apply(x), y);
            prop_assert!(calls <= 2 * s + 2);
            prop_assert_eq!(dist[x], 1.0);
        }
    }

    #[test]
    fn parity_recovers_every_box(len in 2usize..40, m_frac in 0.0f64..1.0, seed: u64) {
        let mut r = rng(seed);
        let bits: Vec<bool> = (0..len).map(|_| r.gen()).collect();
        let m = 1 + ((len - 1) as f64 * m_frac) as usize;
        let m = m.min(len - 1);
        let pad = parity_preprocess(&bits, m).unwrap();
        let oracle = Oracle::bit_string(bits.clone(), None).unwrap();
        for (j, &bit) in bits.iter().enumerate() {
            let (answer, queries) = parity_answer(j, &pad, &oracle.with_forbidden(Some(j)).unwrap()).unwrap();
            prop_assert_eq!(answer, bit);
            prop_assert!(queries < len.div_ceil(m));
        }
    }

    #[test]
    fn subset_rank_roundtrip(n in 0usize..=64, seed: u64) {
        let mut r = rng(seed);
        let k = r.gen_range(0..=n);
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut r);
        let set = &pool[..k];
        let rank = rank_set(set, n).unwrap();
        prop_assert!(rank < binomial(n, k));
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(unrank_set(&rank, n, k).unwrap(), sorted);
    }

    #[test]
    fn perm_rank_roundtrip(m in 0usize..=64, seed: u64) {
        let p = Permutation::random(m.max(1), &mut rng(seed));
        let images = &p.images()[..m.min(p.len())];
        let images = if m == 0 { &[][..] } else { images };
        let rank = rank_perm(images).unwrap();
        prop_assert!(rank < factorial(m));
        prop_assert_eq!(unrank_perm(&rank, m).unwrap(), images.to_vec());
    }

    #[test]
    fn roundtrips_and_h_closeness(seed in 0u64..10_000) {
        let n = 16;
        let f = Permutation::random(n, &mut rng(seed));
        let scheme = HellmanScheme { s: 2 };
        let params = CompressionParams::new(0.9, 0.001).unwrap();
        let alg = scheme.instantiate(&f).unwrap();
        let r = sample_r(n, 0.9, alg.num_queries(), seed ^ 0xabcdef).unwrap();
        for x in good_set(&f, alg.as_ref(), &r, &params).unwrap() {
            prop_assert!(h_distance(&f, alg.as_ref(), &r, x).unwrap() <= params.c().sqrt() + 1e-9);
        }
        if let Ok(enc) = encode(&f, &scheme, &r, &params) {
            prop_assert_eq!(enc.logical_bits, enc.components().total());
            prop_assert!(enc.logical_bits as f64 <= enc.length_bound());
            let parsed = Encoding::from_json(&enc.to_json(), n).unwrap();
            prop_assert_eq!(decode(&parsed, &r, &scheme).unwrap(), f);
        }
    }
}

/// Membership of `x` in `R` and the mass on `R \ {x}` involve disjoint
/// coordinates of `R`, so the two events are independent.
#[test]
fn events_are_independent() {
    let n = 8;
    let f = Permutation::random(n, &mut rng(12));
    let alg = HellmanScheme { s: 2 }.instantiate(&f).unwrap();
    let t = alg.num_queries();
    let params = CompressionParams::new(0.9, 0.001).unwrap();
    let runs = inversion_runs(&f, alg.as_ref()).unwrap();
    let draws = 20_000u64;
    for run in runs.iter().filter(|r| r.totals.iter().any(|&q| q > 0.0)) {
        let (mut a, mut b, mut ab) = (0u64, 0u64, 0u64);
        for seed in 0..draws {
            let r = sample_r(n, params.delta(), t, seed).unwrap();
            let mut in_r = vec![false; n];
            for &z in &r {
                in_r[z] = true;
            }
            let (ea, eb) = events(run, &in_r, &params, t);
            a += u64::from(ea);
            b += u64::from(eb);
            ab += u64::from(ea && eb);
        }
        let k = draws as f64;
        let (pa, pb, pab) = (a as f64 / k, b as f64 / k, ab as f64 / k);
        let product = pa * pb;
        let sigma = (product * (1.0 - product) / k).sqrt();
        assert!(pb > 0.0 && pb < 1.0, "event B is trivial for x = {}", run.x);
        assert!(
            (pab - product).abs() <= 3.0 * sigma + 3.0 / k,
            "x = {}: P(A∧B) = {pab}, P(A)P(B) = {product}",
            run.x
        );
    }
}

/// With a positive claim margin `δ` is so small that `R` is almost always
/// empty at `N = 16`.
#[test]
fn strict_params_rarely_encode_at_small_n() {
    let n = 16;
    let f = Permutation::random(n, &mut rng(5));
    let scheme = HellmanScheme { s: 2 };
    let params = CompressionParams::strict(1e-5, 0.001).unwrap();
    let successes = (0..500)
        .filter(|&seed| {
            let r = sample_r(n, params.delta(), 2, seed).unwrap();
            encode(&f, &scheme, &r, &params).is_ok()
        })
        .count();
    assert!(successes <= 5, "{successes} of 500");
}
