//! The box problem: recover `x_j` from a short advice string plus queries
//! to every position except `j`.

use advice_lab::advice::{parity_answer, parity_preprocess};
use advice_lab::hybrid::{box_experiment, BoxAlgorithm, BoxConfig, ParityScheme};
use advice_lab::qsim::Oracle;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let bits: Vec<bool> = "1011001110001101".chars().map(|c| c == '1').collect();
    let pad = parity_preprocess(&bits, 4)?;
    println!("x = 1011001110001101, pad = {}", serde_json::to_string(&pad)?);
    let oracle = Oracle::bit_string(bits.clone(), None)?;
    for j in [0, 5, 15] {
        let (answer, queries) = parity_answer(j, &pad, &oracle.with_forbidden(Some(j))?)?;
        println!("box {j:>2}: answer {} with {queries} lids lifted (x_j = {})", u8::from(answer), u8::from(bits[j]));
    }

    for algorithm in [BoxAlgorithm::Parity, BoxAlgorithm::Grover { iterations: 1 }, BoxAlgorithm::Sweep] {
        let stats = box_experiment(
            &BoxConfig {
                n: 8,
                m: 2,
                algorithm,
                trials: 50,
                seed: 11,
                z_samples: 200,
            },
            &ParityScheme { m: 2 },
        )?;
        let worst = stats
            .trials
            .iter()
            .map(|t| t.report.actual / t.report.general_bound.max(f64::MIN_POSITIVE))
            .filter(|r| r.is_finite())
            .fold(0.0, f64::max);
        println!(
            "{algorithm:?}: T = {}, mean q_z = {:.4} (T/(N-1) = {:.4}), worst distance/bound = {worst:.3}",
            stats.num_queries, stats.query_mean.mean, stats.query_mean.expected,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
