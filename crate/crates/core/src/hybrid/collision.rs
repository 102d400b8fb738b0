use std::collections::HashMap;

use super::HybridError;

fn window_mask(n: usize, window: &[usize]) -> Result<u64, HybridError> {
    let mut mask = 0u64;
    for &i in window {
        if i >= n {
            return Err(HybridError::IndexOutOfRange { index: i, n });
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Two distinct members of `d` that agree on every coordinate outside
/// `window`.
///
/// Buckets `d` by the coordinates outside the window and returns the first
/// pair to share a bucket, in the order of `d`. When `|d| ≥ 2^(n−m)` and the
/// window has `m + 1` distinct indices such a pair always exists; otherwise
/// the search may still succeed and only fails if no pair exists.
pub fn collision_in_window(d: &[u64], n: usize, window: &[usize]) -> Result<(u64, u64), HybridError> {
    if n == 0 || n > 64 {
        return Err(HybridError::IndexOutOfRange { index: n, n: 64 });
    }
    let mask = window_mask(n, window)?;
    let mut buckets: HashMap<u64, u64> = HashMap::with_capacity(d.len());
    for &x in d {
        match buckets.get(&(x & !mask)) {
            Some(&first) if first != x => return Ok((first, x)),
            Some(_) => {}
            None => {
                buckets.insert(x & !mask, x);
            }
        }
    }
    Err(HybridError::NoCollision)
}

/// Every unordered pair of distinct members of `d` agreeing outside
/// `window`, by direct comparison of all pairs.
pub fn brute_force_collisions(d: &[u64], n: usize, window: &[usize]) -> Result<Vec<(u64, u64)>, HybridError> {
    let mask = window_mask(n, window)?;
    let mut pairs = Vec::new();
    for (a, &x) in d.iter().enumerate() {
        for &y in &d[a + 1..] {
            if x != y && (x ^ y) & !mask == 0 {
                pairs.push((x, y));
            }
        }
    }
    Ok(pairs)
}
