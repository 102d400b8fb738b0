use std::sync::Arc;

use num_complex::Complex64;

use super::{PureState, QsimError};
use crate::Permutation;

/// Amplitude mass on a forbidden position above which a query is illegal.
pub const FORBIDDEN_MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Permutation(Permutation),
    /// Arbitrary map `[N] -> [N]`; used for the hybrid oracle of the decoder.
    Function(Vec<usize>),
    BitString {
        bits: Arc<[bool]>,
        forbidden: Option<usize>,
    },
}

/// A black box queried through the reversible XOR convention
/// `|i, a, w> -> |i, a ⊕ v(i), w>`.
///
/// Permutation and function oracles XOR an `n`-bit answer, so they require
/// `N = 2^n`. Bit-string oracles accept any `N ≥ 2` and may carry a
/// forbidden index that no query is allowed to touch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oracle {
    kind: Kind,
}

impl Oracle {
    pub fn permutation(f: Permutation) -> Result<Self, QsimError> {
        check_power_of_two(f.len())?;
        Ok(Self {
            kind: Kind::Permutation(f),
        })
    }

    pub fn function(values: Vec<usize>) -> Result<Self, QsimError> {
        check_power_of_two(values.len())?;
        let len = values.len();
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v >= len) {
            return Err(QsimError::OracleValueOutOfRange { index, value, len });
        }
        Ok(Self {
            kind: Kind::Function(values),
        })
    }

    pub fn bit_string(bits: Vec<bool>, forbidden: Option<usize>) -> Result<Self, QsimError> {
        if bits.len() < 2 {
            return Err(QsimError::InvalidLayout {
                num_positions: bits.len(),
                answer_dim: 2,
                workspace_dim: 1,
            });
        }
        if let Some(j) = forbidden {
            if j >= bits.len() {
                return Err(QsimError::ForbiddenOutOfRange {
                    index: j,
                    len: bits.len(),
                });
            }
        }
        Ok(Self {
            kind: Kind::BitString {
                bits: bits.into(),
                forbidden,
            },
        })
    }

    /// The same bit string with a different forbidden index; shares the bits.
    pub fn with_forbidden(&self, forbidden: Option<usize>) -> Result<Self, QsimError> {
        match &self.kind {
            Kind::BitString { bits, .. } => {
                if let Some(j) = forbidden.filter(|&j| j >= bits.len()) {
                    return Err(QsimError::ForbiddenOutOfRange {
                        index: j,
                        len: bits.len(),
                    });
                }
                Ok(Self {
                    kind: Kind::BitString {
                        bits: Arc::clone(bits),
                        forbidden,
                    },
                })
            }
            _ if forbidden.is_none() => Ok(self.clone()),
            _ => Err(QsimError::LayoutMismatch),
        }
    }

    pub fn num_positions(&self) -> usize {
        match &self.kind {
            Kind::Permutation(f) => f.len(),
            Kind::Function(v) => v.len(),
            Kind::BitString { bits, .. } => bits.len(),
        }
    }

    /// Size of the answer register this oracle writes into.
    pub fn answer_dim(&self) -> usize {
        match &self.kind {
            Kind::BitString { .. } => 2,
            _ => self.num_positions(),
        }
    }

    pub fn forbidden(&self) -> Option<usize> {
        match &self.kind {
            Kind::BitString { forbidden, .. } => *forbidden,
            _ => None,
        }
    }

    pub fn as_permutation(&self) -> Option<&Permutation> {
        match &self.kind {
            Kind::Permutation(f) => Some(f),
            _ => None,
        }
    }

    /// The oracle's value at `i`, ignoring any forbidden index.
    #[inline]
    pub fn value(&self, i: usize) -> usize {
        match &self.kind {
            Kind::Permutation(f) => f.apply(i),
            Kind::Function(v) => v[i],
            Kind::BitString { bits, .. } => bits[i] as usize,
        }
    }

    /// A classical query at `i`, refusing the forbidden index.
    pub fn query(&self, i: usize) -> Result<usize, QsimError> {
        if i >= self.num_positions() {
            return Err(QsimError::CoordinateOutOfRange {
                position: i,
                answer: 0,
                workspace: 0,
            });
        }
        if self.forbidden() == Some(i) {
            return Err(QsimError::ForbiddenQuery {
                position: i,
                mass: 1.0,
            });
        }
        Ok(self.value(i))
    }

    /// Positions where the two oracles answer differently, `Δ(x, y)`.
    pub fn differing_positions(&self, other: &Oracle) -> Result<Vec<usize>, QsimError> {
        if self.num_positions() != other.num_positions() || self.answer_dim() != other.answer_dim()
        {
            return Err(QsimError::LayoutMismatch);
        }
        Ok((0..self.num_positions())
            .filter(|&i| self.value(i) != other.value(i))
            .collect())
    }
}

fn check_power_of_two(len: usize) -> Result<(), QsimError> {
    if len < 2 || !len.is_power_of_two() {
        return Err(QsimError::NotPowerOfTwo { len });
    }
    Ok(())
}

/// `q_j(|φ>)`: the squared amplitude mass on basis states whose position
/// register holds `j`.
pub fn query_magnitudes(state: &PureState) -> Vec<f64> {
    let block = state.layout().block();
    state
        .amplitudes()
        .chunks_exact(block)
        .map(|chunk| chunk.iter().map(|a| a.norm_sqr()).sum())
        .collect()
}

/// One query: `|i, a, w> -> |i, a ⊕ v(i), w>`.
pub fn apply_oracle(state: &PureState, oracle: &Oracle) -> Result<PureState, QsimError> {
    let mut out = state.clone();
    apply_oracle_in_place(&mut out, oracle)?;
    Ok(out)
}

pub(crate) fn apply_oracle_in_place(
    state: &mut PureState,
    oracle: &Oracle,
) -> Result<(), QsimError> {
    let layout = *state.layout();
    if layout.num_positions() != oracle.num_positions() || layout.answer_dim() != oracle.answer_dim()
    {
        return Err(QsimError::LayoutMismatch);
    }
    if let Some(j) = oracle.forbidden() {
        let block = layout.block();
        let mass: f64 = state.amplitudes()[j * block..(j + 1) * block]
            .iter()
            .map(|a| a.norm_sqr())
            .sum();
        if mass > FORBIDDEN_MASS_TOLERANCE {
            return Err(QsimError::ForbiddenQuery { position: j, mass });
        }
    }

    let answers = layout.answer_dim();
    let ws = layout.workspace_dim();
    let block = layout.block();
    let mut scratch = vec![Complex64::new(0.0, 0.0); block];
    for (i, chunk) in state.amplitudes_mut().chunks_exact_mut(block).enumerate() {
        let v = oracle.value(i);
        if v == 0 {
            continue;
        }
        for a in 0..answers {
            let target = a ^ v;
            scratch[target * ws..(target + 1) * ws].copy_from_slice(&chunk[a * ws..(a + 1) * ws]);
        }
        chunk.copy_from_slice(&scratch);
    }
    Ok(())
}
