//! Permutations of `[N] = {0, .., N-1}`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermutationError {
    #[error("permutation is empty")]
    Empty,
    #[error("value {value} at index {index} is out of range for N = {len}")]
    OutOfRange { index: usize, value: usize, len: usize },
    #[error("value {value} appears more than once")]
    Duplicate { value: usize },
}

/// A bijection on `[N]`, stored as its table of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermutationError> {
        if images.is_empty() {
            return Err(PermutationError::Empty);
        }
        let len = images.len();
        let mut seen = vec![false; len];
        for (index, &value) in images.iter().enumerate() {
            if value >= len {
                return Err(PermutationError::OutOfRange { index, value, len });
            }
            if std::mem::replace(&mut seen[value], true) {
                return Err(PermutationError::Duplicate { value });
            }
        }
        Ok(Self(images))
    }

    pub fn identity(len: usize) -> Self {
        Self((0..len).collect())
    }

    /// `x -> x + shift mod len`.
    pub fn shift(len: usize, shift: usize) -> Self {
        Self((0..len).map(|x| (x + shift) % len).collect())
    }

    /// Uniformly random permutation (Fisher–Yates).
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..len).collect();
        images.shuffle(rng);
        Self(images)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Self(inv)
    }

    /// The permutation with the images of `a` and `b` exchanged.
    pub fn with_swapped_images(&self, a: usize, b: usize) -> Self {
        let mut images = self.0.clone();
        images.swap(a, b);
        Self(images)
    }

    /// Cycle decomposition. Each cycle starts at its minimum element and
    /// cycles are listed in order of their minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut visited = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// `log2(N)` when `N` is a power of two.
    pub fn bit_width(&self) -> Option<u32> {
        self.len()
            .is_power_of_two()
            .then(|| self.len().trailing_zeros())
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermutationError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(Permutation::new(vec![]), Err(PermutationError::Empty));
        assert_eq!(
            Permutation::new(vec![0, 0]),
            Err(PermutationError::Duplicate { value: 0 })
        );
        assert!(matches!(
            Permutation::new(vec![0, 2]),
            Err(PermutationError::OutOfRange { .. })
        ));
    }

    #[test]
    fn cycles_start_at_minimum() {
        let p = Permutation::new(vec![2, 0, 1, 3, 5, 4]).unwrap();
        assert_eq!(p.cycles(), vec![vec![0, 2, 1], vec![3], vec![4, 5]]);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = Permutation::random(64, &mut rng);
        let inv = p.inverse();
        for x in 0..64 {
            assert_eq!(inv.apply(p.apply(x)), x);
        }
    }

    #[test]
    fn serde_validates() {
        let p: Permutation = serde_json::from_str("[1,0,2]").unwrap();
        assert_eq!(p.apply(0), 1);
        assert!(serde_json::from_str::<Permutation>("[1,1,2]").is_err());
    }
}
