use num_complex::Complex64;

use super::oracle::apply_oracle_in_place;
use super::state::NORM_TOLERANCE;
use super::{query_magnitudes, BasisLayout, Oracle, PureState, QsimError, Register};

/// A query algorithm: `T + 1` norm-preserving step transformations
/// interleaved with `T` oracle calls.
///
/// The run starts from `|0, 0, 0>`, applies `step(0)`, then for each
/// `t = 1..=T` queries the oracle and applies `step(t)`. Steps may depend on
/// the input and on the algorithm's advice but never on the oracle.
pub trait QueryAlgorithm {
    fn layout(&self) -> BasisLayout;

    fn num_queries(&self) -> usize;

    fn step(&self, t: usize, input: usize, state: &mut PureState);

    /// Register measured for the answer.
    fn output_register(&self) -> Register {
        Register::Position
    }

    fn advice(&self) -> &[bool] {
        &[]
    }
}

impl<A: QueryAlgorithm + ?Sized> QueryAlgorithm for &A {
    fn layout(&self) -> BasisLayout {
        (**self).layout()
    }
    fn num_queries(&self) -> usize {
        (**self).num_queries()
    }
    fn step(&self, t: usize, input: usize, state: &mut PureState) {
        (**self).step(t, input, state)
    }
    fn output_register(&self) -> Register {
        (**self).output_register()
    }
    fn advice(&self) -> &[bool] {
        (**self).advice()
    }
}

impl<A: QueryAlgorithm + ?Sized> QueryAlgorithm for Box<A> {
    fn layout(&self) -> BasisLayout {
        (**self).layout()
    }
    fn num_queries(&self) -> usize {
        (**self).num_queries()
    }
    fn step(&self, t: usize, input: usize, state: &mut PureState) {
        (**self).step(t, input, state)
    }
    fn output_register(&self) -> Register {
        (**self).output_register()
    }
    fn advice(&self) -> &[bool] {
        (**self).advice()
    }
}

/// Query magnitudes recorded over a run.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryTrace {
    /// `per_step[t][j] = q_j(|φ_t>)`, the state just before query `t + 1`.
    pub per_step: Vec<Vec<f64>>,
    /// `totals[j] = q_j(x) = Σ_t per_step[t][j]`.
    pub totals: Vec<f64>,
}

impl QueryTrace {
    fn new(num_positions: usize) -> Self {
        Self {
            per_step: Vec::new(),
            totals: vec![0.0; num_positions],
        }
    }

    fn record(&mut self, magnitudes: Vec<f64>) {
        for (total, q) in self.totals.iter_mut().zip(&magnitudes) {
            *total += q;
        }
        self.per_step.push(magnitudes);
    }

    pub fn num_queries(&self) -> usize {
        self.per_step.len()
    }

    /// `Σ_j q_j(x)`, at most `T`.
    pub fn total_mass(&self) -> f64 {
        self.totals.iter().sum()
    }

    /// `Σ_{j ∈ positions} q_j(x)`.
    pub fn mass_on(&self, positions: &[usize]) -> f64 {
        positions.iter().map(|&j| self.totals[j]).sum()
    }
}

/// Runs `alg` against `oracle` on `input`, returning the final state and the
/// query trace.
pub fn run<A: QueryAlgorithm + ?Sized>(
    alg: &A,
    oracle: &Oracle,
    input: usize,
) -> Result<(PureState, QueryTrace), QsimError> {
    let layout = alg.layout();
    if layout.num_positions() != oracle.num_positions() || layout.answer_dim() != oracle.answer_dim()
    {
        return Err(QsimError::LayoutMismatch);
    }
    if input >= layout.num_positions() {
        return Err(QsimError::InputOutOfRange {
            input,
            len: layout.num_positions(),
        });
    }

    let mut state = PureState::basis(layout, 0, 0, 0)?;
    let mut trace = QueryTrace::new(layout.num_positions());
    apply_step(alg, 0, input, &mut state)?;
    for t in 1..=alg.num_queries() {
        trace.record(query_magnitudes(&state));
        apply_oracle_in_place(&mut state, oracle)?;
        apply_step(alg, t, input, &mut state)?;
    }
    Ok((state, trace))
}

fn apply_step<A: QueryAlgorithm + ?Sized>(
    alg: &A,
    t: usize,
    input: usize,
    state: &mut PureState,
) -> Result<(), QsimError> {
    alg.step(t, input, state);
    let norm = state.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(QsimError::NonUnitaryStep { step: t, norm });
    }
    Ok(())
}

/// Makes no queries and leaves the state untouched.
#[derive(Debug, Clone, Copy)]
pub struct Idle {
    layout: BasisLayout,
}

impl Idle {
    pub fn new(layout: BasisLayout) -> Self {
        Self { layout }
    }
}

impl QueryAlgorithm for Idle {
    fn layout(&self) -> BasisLayout {
        self.layout
    }
    fn num_queries(&self) -> usize {
        0
    }
    fn step(&self, _t: usize, _input: usize, _state: &mut PureState) {}
}

/// A deterministic classical query procedure.
///
/// Memory lives in the workspace register, the next query position in the
/// position register, and oracle answers arrive in the answer register.
/// After the last query the output is written to the position register.
pub trait ClassicalProgram {
    type Memory;

    fn num_positions(&self) -> usize;
    fn answer_dim(&self) -> usize;
    fn num_queries(&self) -> usize;
    fn workspace_dim(&self) -> usize;

    fn encode(&self, memory: &Self::Memory) -> usize;
    fn decode(&self, workspace: usize) -> Self::Memory;

    fn start(&self, input: usize) -> Self::Memory;
    fn next_query(&self, input: usize, memory: &Self::Memory) -> usize;
    fn absorb(
        &self,
        input: usize,
        memory: Self::Memory,
        position: usize,
        answer: usize,
    ) -> Self::Memory;
    fn output(&self, input: usize, memory: &Self::Memory) -> usize;

    fn advice(&self) -> &[bool] {
        &[]
    }
}

/// Embeds a [`ClassicalProgram`] as a [`QueryAlgorithm`].
///
/// Each step maps every basis state in the support to the basis state of the
/// program's next configuration. On the single-basis-state runs a classical
/// program produces this preserves the norm; [`run`] verifies it.
#[derive(Debug, Clone)]
pub struct ClassicalAdapter<P> {
    program: P,
}

impl<P: ClassicalProgram> ClassicalAdapter<P> {
    pub fn new(program: P) -> Self {
        Self { program }
    }

    pub fn program(&self) -> &P {
        &self.program
    }
}

impl<P: ClassicalProgram> QueryAlgorithm for ClassicalAdapter<P> {
    fn layout(&self) -> BasisLayout {
        BasisLayout::new(
            self.program.num_positions(),
            self.program.answer_dim(),
            self.program.workspace_dim(),
        )
        .expect("classical program declares a valid layout")
    }

    fn num_queries(&self) -> usize {
        self.program.num_queries()
    }

    fn step(&self, t: usize, input: usize, state: &mut PureState) {
        let layout = *state.layout();
        let last = t == self.program.num_queries();
        let mut next = vec![Complex64::new(0.0, 0.0); layout.dim()];
        for (index, &amp) in state.amplitudes().iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let memory = if t == 0 {
                self.program.start(input)
            } else {
                let (position, answer, workspace) = layout.coords(index);
                let memory = self.program.decode(workspace);
                self.program.absorb(input, memory, position, answer)
            };
            let position = if last {
                self.program.output(input, &memory)
            } else {
                self.program.next_query(input, &memory)
            };
            next[layout.index(position, 0, self.program.encode(&memory))] += amp;
        }
        state.replace_amplitudes(next);
    }

    fn advice(&self) -> &[bool] {
        self.program.advice()
    }
}
