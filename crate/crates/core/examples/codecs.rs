//! Exact ranks for subsets and permutations, the building blocks of the
//! bit-exact encoding.

use advice_lab::compress::{binomial, ceil_log2, factorial, rank_perm, rank_set, unrank_perm, unrank_set};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let set = [1, 4, 6];
    let rank = rank_set(&set, 8)?;
    println!("{set:?} in [8] has rank {rank} of {}; back: {:?}", binomial(8, 3), unrank_set(&rank, 8, 3)?);

    let perm = [2, 0, 3, 1];
    let rank = rank_perm(&perm)?;
    println!("{perm:?} has rank {rank} of {}; back: {:?}", factorial(4), unrank_perm(&rank, 4)?);

    for n in [16usize, 64, 256] {
        let total = factorial(n);
        println!("N = {n:>3}: ⌈log2 N!⌉ = {}", ceil_log2(&total));
    }
    let big = factorial(64) - 1u32;
    let last = unrank_perm(&big, 64)?;
    println!("last permutation of [64] starts {:?}", &last[..5]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
