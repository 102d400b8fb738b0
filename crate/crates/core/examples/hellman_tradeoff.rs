//! Hellman tables: storage times inversion cost stays near `N·2n` as the
//! stride varies.

use advice_lab::advice::{hellman_build, hellman_invert, measure_tradeoff};
use advice_lab::Permutation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let small = Permutation::shift(8, 1);
    let table = hellman_build(&small, 3)?;
    println!("x+1 mod 8, s = 3: {}", table.to_json());
    let (x, calls) = hellman_invert(5, &table, &small)?;
    println!("f^-1(5) = {x} after {calls} evaluations");

    let n = 1024;
    let f = Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(7));
    println!("{:>4} {:>8} {:>8} {:>6} {:>9} {:>7}", "s", "entries", "S bits", "T", "S*T", "ratio");
    for s in [1, 4, 8, 16, 32, 64, 128] {
        let p = measure_tradeoff(&f, s)?;
        println!(
            "{s:>4} {:>8} {:>8} {:>6} {:>9} {:>7.3}",
            p.entries,
            p.advice_bits,
            p.worst_calls,
            p.product(),
            p.product() as f64 / (n * 20) as f64
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
