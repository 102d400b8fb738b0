use num_complex::Complex64;

use super::QsimError;

/// Tolerance on the Euclidean norm of a pure state.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Register structure of the computational basis: a query-position register
/// of size `N`, an answer register and a caller-sized workspace.
///
/// Basis index of `(position, answer, workspace)` is
/// `(position * answer_dim + answer) * workspace_dim + workspace`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLayout {
    num_positions: usize,
    answer_dim: usize,
    workspace_dim: usize,
}

impl BasisLayout {
    pub fn new(
        num_positions: usize,
        answer_dim: usize,
        workspace_dim: usize,
    ) -> Result<Self, QsimError> {
        if num_positions < 2 || answer_dim < 1 || workspace_dim < 1 {
            return Err(QsimError::InvalidLayout {
                num_positions,
                answer_dim,
                workspace_dim,
            });
        }
        num_positions
            .checked_mul(answer_dim)
            .and_then(|d| d.checked_mul(workspace_dim))
            .ok_or(QsimError::InvalidLayout {
                num_positions,
                answer_dim,
                workspace_dim,
            })?;
        Ok(Self {
            num_positions,
            answer_dim,
            workspace_dim,
        })
    }

    #[inline]
    pub fn num_positions(&self) -> usize {
        self.num_positions
    }

    #[inline]
    pub fn answer_dim(&self) -> usize {
        self.answer_dim
    }

    #[inline]
    pub fn workspace_dim(&self) -> usize {
        self.workspace_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.num_positions * self.answer_dim * self.workspace_dim
    }

    /// Number of basis states sharing one position value.
    #[inline]
    pub fn block(&self) -> usize {
        self.answer_dim * self.workspace_dim
    }

    #[inline]
    pub fn index(&self, position: usize, answer: usize, workspace: usize) -> usize {
        debug_assert!(position < self.num_positions);
        debug_assert!(answer < self.answer_dim);
        debug_assert!(workspace < self.workspace_dim);
        (position * self.answer_dim + answer) * self.workspace_dim + workspace
    }

    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize, usize) {
        let workspace = index % self.workspace_dim;
        let rest = index / self.workspace_dim;
        (rest / self.answer_dim, rest % self.answer_dim, workspace)
    }
}

/// Which coordinate of the basis a measurement reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Register {
    Position,
    Answer,
    Workspace,
    /// The whole computational basis.
    Full,
}

impl Register {
    fn outcomes(self, layout: &BasisLayout) -> usize {
        match self {
            Register::Position => layout.num_positions,
            Register::Answer => layout.answer_dim,
            Register::Workspace => layout.workspace_dim,
            Register::Full => layout.dim(),
        }
    }

    fn outcome(self, layout: &BasisLayout, index: usize) -> usize {
        let (p, a, w) = layout.coords(index);
        match self {
            Register::Position => p,
            Register::Answer => a,
            Register::Workspace => w,
            Register::Full => index,
        }
    }
}

/// A unit-norm amplitude vector over a [`BasisLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: BasisLayout,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// The basis state `|position, answer, workspace>`.
    pub fn basis(
        layout: BasisLayout,
        position: usize,
        answer: usize,
        workspace: usize,
    ) -> Result<Self, QsimError> {
        if position >= layout.num_positions()
            || answer >= layout.answer_dim()
            || workspace >= layout.workspace_dim()
        {
            return Err(QsimError::CoordinateOutOfRange {
                position,
                answer,
                workspace,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amplitudes[layout.index(position, answer, workspace)] = Complex64::new(1.0, 0.0);
        Ok(Self { layout, amplitudes })
    }

    /// Wraps an amplitude vector, rejecting it unless it has unit norm.
    pub fn from_amplitudes(
        layout: BasisLayout,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, QsimError> {
        if amplitudes.len() != layout.dim() {
            return Err(QsimError::DimensionMismatch {
                expected: layout.dim(),
                found: amplitudes.len(),
            });
        }
        let state = Self { layout, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized { norm });
        }
        Ok(state)
    }

    /// Uniform superposition over the listed positions with answer and
    /// workspace zero.
    pub fn uniform_over_positions(
        layout: BasisLayout,
        positions: &[usize],
    ) -> Result<Self, QsimError> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); layout.dim()];
        let amp = Complex64::new(1.0 / (positions.len() as f64).sqrt(), 0.0);
        for &p in positions {
            if p >= layout.num_positions() {
                return Err(QsimError::CoordinateOutOfRange {
                    position: p,
                    answer: 0,
                    workspace: 0,
                });
            }
            amplitudes[layout.index(p, 0, 0)] = amp;
        }
        Self::from_amplitudes(layout, amplitudes)
    }

    #[inline]
    pub fn layout(&self) -> &BasisLayout {
        &self.layout
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Mutable access for step transformations. Callers are responsible for
    /// preserving the norm; [`super::run`] checks it after every step.
    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub(crate) fn replace_amplitudes(&mut self, amplitudes: Vec<Complex64>) {
        debug_assert_eq!(amplitudes.len(), self.layout.dim());
        self.amplitudes = amplitudes;
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Marginal distribution of `register` when `state` is measured in the
/// computational basis.
pub fn measurement_distribution(state: &PureState, register: Register) -> Vec<f64> {
    let layout = state.layout();
    let mut probs = vec![0.0; register.outcomes(layout)];
    for (index, amp) in state.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p != 0.0 {
            probs[register.outcome(layout, index)] += p;
        }
    }
    probs
}

/// `‖a − b‖₂`.
pub fn euclidean_distance(a: &PureState, b: &PureState) -> Result<f64, QsimError> {
    if a.layout() != b.layout() {
        return Err(QsimError::LayoutMismatch);
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Total variation distance in the 1-norm convention, `Σ |p(x) − q(x)|`
/// (no factor one half).
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64, QsimError> {
    if p.len() != q.len() {
        return Err(QsimError::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(n: usize, a: usize, w: usize) -> BasisLayout {
        BasisLayout::new(n, a, w).unwrap()
    }

    #[test]
    fn layout_coordinates_round_trip() {
        let l = layout(5, 3, 2);
        assert_eq!(l.dim(), 30);
        for idx in 0..l.dim() {
            let (p, a, w) = l.coords(idx);
            assert_eq!(l.index(p, a, w), idx);
        }
    }

    #[test]
    fn layout_rejects_degenerate_sizes() {
        assert!(BasisLayout::new(1, 2, 1).is_err());
        assert!(BasisLayout::new(4, 0, 1).is_err());
        assert!(BasisLayout::new(4, 2, 0).is_err());
    }

    #[test]
    fn unnormalized_amplitudes_are_rejected() {
        let l = layout(2, 1, 1);
        let amps = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            PureState::from_amplitudes(l, amps),
            Err(QsimError::NotNormalized { .. })
        ));
    }

    #[test]
    fn basis_state_measures_to_point_mass() {
        let s = PureState::basis(layout(4, 2, 1), 3, 0, 0).unwrap();
        assert_eq!(
            measurement_distribution(&s, Register::Position),
            vec![0.0, 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn uniform_superposition_measures_uniform() {
        let l = layout(4, 2, 1);
        let s = PureState::uniform_over_positions(l, &[0, 1, 2, 3]).unwrap();
        let d = measurement_distribution(&s, Register::Position);
        for p in d {
            assert!((p - 0.25).abs() < 1e-12);
        }
        let full = measurement_distribution(&s, Register::Full);
        assert!((full.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distances_on_simple_states() {
        let l = layout(4, 2, 1);
        let a = PureState::basis(l, 0, 0, 0).unwrap();
        let b = PureState::basis(l, 1, 0, 0).unwrap();
        assert_eq!(euclidean_distance(&a, &a).unwrap(), 0.0);
        assert!((euclidean_distance(&a, &b).unwrap() - 2f64.sqrt()).abs() < 1e-15);

        let p = measurement_distribution(&a, Register::Position);
        let q = measurement_distribution(&b, Register::Position);
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(tv_distance(&p, &q).unwrap(), 2.0);
        assert!(tv_distance(&p, &q[..2]).is_err());
    }

    #[test]
    fn distance_rejects_layout_mismatch() {
        let a = PureState::basis(layout(4, 2, 1), 0, 0, 0).unwrap();
        let b = PureState::basis(layout(4, 4, 1), 0, 0, 0).unwrap();
        assert!(matches!(
            euclidean_distance(&a, &b),
            Err(QsimError::LayoutMismatch)
        ));
    }
}
