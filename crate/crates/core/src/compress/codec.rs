//! Exact ranks of subsets (colexicographic combinadic) and permutations
//! (Lehmer code, lexicographic order).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::CompressError;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `⌈log₂ m⌉`, with `0` for `m ≤ 1`.
pub fn ceil_log2(m: &BigUint) -> u64 {
    if *m <= BigUint::one() {
        0
    } else {
        (m - 1u32).bits()
    }
}

/// `log₂ n!` as a float.
pub fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).log2()).sum()
}

/// `log₂ m` as a float; `-∞` for zero.
pub fn log2_big(m: &BigUint) -> f64 {
    let bits = m.bits();
    if bits <= 1000 {
        return m.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    (m >> shift).to_f64().expect("fits").log2() + shift as f64
}

/// Rank of a `k`-subset of `[n]`: `Σ_i C(c_i, i + 1)` over its elements
/// `c_0 < c_1 < …`. Elements may be given in any order.
pub fn rank_set(set: &[usize], n: usize) -> Result<BigUint, CompressError> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&c| c >= n) {
        return Err(CompressError::InvalidSet(format!("{bad} is not in [{n}]")));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CompressError::InvalidSet("repeated element".into()));
    }
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1))
        .sum())
}

/// The `k`-subset of `[n]` with the given rank, in increasing order.
pub fn unrank_set(rank: &BigUint, n: usize, k: usize) -> Result<Vec<usize>, CompressError> {
    let total = binomial(n, k);
    if *rank >= total {
        return Err(CompressError::RankOutOfRange {
            what: "subset",
            bits: rank.bits(),
        });
    }
    let mut rest = rank.clone();
    let mut out = vec![0; k];
    let mut c = n;
    for i in (1..=k).rev() {
        // largest c with C(c, i) <= rest
        c -= 1;
        let mut b = binomial(c, i);
        while b > rest {
            c -= 1;
            b = binomial(c, i);
        }
        rest -= b;
        out[i - 1] = c;
    }
    Ok(out)
}

/// Lexicographic rank of a permutation of `[m]` given as its image list.
pub fn rank_perm(images: &[usize]) -> Result<BigUint, CompressError> {
    let m = images.len();
    let mut seen = vec![false; m];
    for &v in images {
        if v >= m || std::mem::replace(&mut seen[v], true) {
            return Err(CompressError::InvalidPermutation);
        }
    }
    let mut rank = BigUint::zero();
    for (i, &v) in images.iter().enumerate() {
        let smaller_later = images[i + 1..].iter().filter(|&&w| w < v).count();
        rank = rank * (m - i) + smaller_later;
    }
    Ok(rank)
}

/// The permutation of `[m]` with the given lexicographic rank.
pub fn unrank_perm(rank: &BigUint, m: usize) -> Result<Vec<usize>, CompressError> {
    if *rank >= factorial(m) {
        return Err(CompressError::RankOutOfRange {
            what: "permutation",
            bits: rank.bits(),
        });
    }
    let mut rest = rank.clone();
    let mut digits = vec![0usize; m];
    for radix in 1..=m {
        let d = &rest % radix;
        digits[m - radix] = d.to_usize().expect("digit below radix");
        rest /= radix;
    }
    let mut pool: Vec<usize> = (0..m).collect();
    Ok(digits.into_iter().map(|d| pool.remove(d)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(factorial(8), BigUint::from(40320u32));
        assert_eq!(ceil_log2(&BigUint::from(1u32)), 0);
        assert_eq!(ceil_log2(&BigUint::from(16u32)), 4);
        assert_eq!(ceil_log2(&BigUint::from(17u32)), 5);
        assert!((log2_factorial(16) - log2_big(&factorial(16))).abs() < 1e-9);
        assert!((log2_big(&factorial(400)) - log2_factorial(400)).abs() < 1e-6);
    }

    #[test]
    fn subset_examples() {
        assert_eq!(rank_set(&[0, 1], 4).unwrap(), BigUint::zero());
        assert_eq!(rank_set(&[0, 1, 2, 3, 4], 5).unwrap(), BigUint::zero());
        assert_eq!(unrank_set(&BigUint::zero(), 5, 0).unwrap(), Vec::<usize>::new());
        assert!(rank_set(&[1, 1], 4).is_err());
        assert!(rank_set(&[4], 4).is_err());
        assert!(unrank_set(&BigUint::from(20u32), 6, 3).is_err());
    }

    #[test]
    fn perm_examples() {
        assert_eq!(rank_perm(&[0, 1, 2, 3]).unwrap(), BigUint::zero());
        assert_eq!(rank_perm(&[3, 2, 1, 0]).unwrap(), BigUint::from(23u32));
        assert_eq!(unrank_perm(&BigUint::from(23u32), 4).unwrap(), vec![3, 2, 1, 0]);
        assert_eq!(rank_perm(&[]).unwrap(), BigUint::zero());
        assert!(rank_perm(&[0, 0]).is_err());
        assert!(unrank_perm(&BigUint::from(24u32), 4).is_err());
    }

    /// Colex order on k-subsets of [n] is numeric order on their bitmasks.
    #[test]
    fn colex_matches_bitmask_order() {
        for n in 0..=8usize {
            for k in 0..=n {
                let masks: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() as usize == k).collect();
                assert_eq!(BigUint::from(masks.len()), binomial(n, k));
                for (expected, &mask) in masks.iter().enumerate() {
                    let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                    let rank = rank_set(&set, n).unwrap();
                    assert_eq!(rank, BigUint::from(expected));
                    assert_eq!(unrank_set(&rank, n, k).unwrap(), set);
                }
            }
        }
    }

    fn next_lex(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn lehmer_matches_lex_enumeration() {
        for m in 0..=6usize {
            let mut p: Vec<usize> = (0..m).collect();
            let mut expected = 0u32;
            loop {
                let rank = rank_perm(&p).unwrap();
                assert_eq!(rank, BigUint::from(expected));
                assert_eq!(unrank_perm(&rank, m).unwrap(), p);
                expected += 1;
                if !next_lex(&mut p) {
                    break;
                }
            }
            assert_eq!(BigUint::from(expected), factorial(m));
        }
    }
}
