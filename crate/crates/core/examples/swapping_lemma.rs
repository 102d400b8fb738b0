//! How far a query algorithm's final state moves when the oracle changes on
//! positions it rarely queries, and how that bounds the output distribution.

use advice_lab::hybrid::{random_swap_instance, verify_swapping, verify_tv};
use advice_lab::qsim::run;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..8 {
        let inst = random_swap_instance(16, &mut rng)?;
        let report = verify_swapping(inst.alg.as_ref(), &inst.oracle_x, &inst.oracle_y, inst.input)?;
        let (a, _) = run(inst.alg.as_ref(), &inst.oracle_x, inst.input)?;
        let (b, _) = run(inst.alg.as_ref(), &inst.oracle_y, inst.input)?;
        let tv = verify_tv(&a, &b, inst.alg.output_register())?;
        println!(
            "{:<26} T = {:>2} |Δ| = {:>2}  ‖φx−φy‖ = {:.4} ≤ {:.4}  TV = {:.4} ≤ {:.4}",
            inst.kind,
            report.num_queries,
            report.delta_set.len(),
            report.actual,
            report.bound,
            tv.tv,
            tv.bound,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
