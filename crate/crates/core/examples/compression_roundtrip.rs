//! Compresses a permutation using an inverter with advice, then rebuilds it
//! from the encoding and the shared random set `R`.

use advice_lab::compress::{
    decode, encode, sample_r, CompressionParams, Encoding, HellmanScheme, InversionScheme,
};
use advice_lab::Permutation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 16;
    let f = Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(3));
    let scheme = HellmanScheme { s: 2 };
    let params = CompressionParams::new(0.9, 0.001)?;
    let t = scheme.instantiate(&f)?.num_queries();

    let mut ok = 0;
    for seed in 0..20 {
        let r = sample_r(n, params.delta(), t, seed)?;
        match encode(&f, &scheme, &r, &params) {
            Ok(enc) => {
                let back = decode(&enc, &r, &scheme)?;
                ok += usize::from(back == f);
                if seed == 0 {
                    let wire = enc.to_json();
                    let parsed = Encoding::from_json(&wire, n)?;
                    println!("|R| = {}, |G| = {}, {} bits: {wire}", enc.r_size, enc.good_count, parsed.logical_bits);
                    println!("components {:?}, bound {:.2}", enc.components(), enc.length_bound());
                }
            }
            Err(e) => println!("seed {seed}: {e}"),
        }
    }
    println!("{ok}/20 round trips; log2 16! = {:.2}", advice_lab::compress::log2_factorial(n));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
