//! Inverts a point of a random permutation with Grover's algorithm and
//! compares the simulated success probability with the closed form.

use advice_lab::qsim::{closed_form_success, default_iterations, grover_invert};
use advice_lab::Permutation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [4, 16, 64, 256] {
        let f = Permutation::random(n, &mut rng);
        let y = n / 3;
        let k = default_iterations(n);
        let out = grover_invert(&f, y, Some(k))?;
        println!(
            "N = {n:>3}  k = {k:>2}  T = {:>2}  success = {:.9}  closed form = {:.9}  candidate = {} (f^-1(y) = {})",
            out.trace.num_queries(),
            out.success_probability,
            closed_form_success(n, k),
            out.candidate,
            f.inverse().apply(y),
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
