use super::CompressError;
use crate::advice::{hellman_build, HellmanProgram};
use crate::qsim::{ClassicalAdapter, ClassicalProgram, GroverInversion, QueryAlgorithm};
use crate::Permutation;

pub type BoxedAlgorithm = Box<dyn QueryAlgorithm + Send + Sync>;

/// An inverter with advice: preprocessing produces `α(f)`, and the query
/// algorithm is rebuilt from `α` alone.
pub trait InversionScheme: Sync {
    fn name(&self) -> String;

    fn preprocess(&self, f: &Permutation) -> Result<Vec<bool>, CompressError>;

    fn algorithm(&self, n: usize, advice: &[bool]) -> Result<BoxedAlgorithm, CompressError>;

    /// Algorithm for `f` with its own advice.
    fn instantiate(&self, f: &Permutation) -> Result<BoxedAlgorithm, CompressError> {
        self.algorithm(f.len(), &self.preprocess(f)?)
    }
}

/// Hellman table with stride `s`; `T = s`.
#[derive(Debug, Clone, Copy)]
pub struct HellmanScheme {
    pub s: usize,
}

impl InversionScheme for HellmanScheme {
    fn name(&self) -> String {
        format!("hellman-s{}", self.s)
    }

    fn preprocess(&self, f: &Permutation) -> Result<Vec<bool>, CompressError> {
        Ok(hellman_build(f, self.s)?.to_advice_bits())
    }

    fn algorithm(&self, n: usize, advice: &[bool]) -> Result<BoxedAlgorithm, CompressError> {
        Ok(Box::new(ClassicalAdapter::new(HellmanProgram::from_advice(n, self.s, advice)?)))
    }
}

/// Grover inversion without advice; `T = 2k`.
#[derive(Debug, Clone, Copy)]
pub struct GroverScheme {
    /// `None` for `⌊(π/4)·√N⌋`.
    pub iterations: Option<usize>,
}

impl InversionScheme for GroverScheme {
    fn name(&self) -> String {
        match self.iterations {
            Some(k) => format!("grover-k{k}"),
            None => "grover".into(),
        }
    }

    fn preprocess(&self, _f: &Permutation) -> Result<Vec<bool>, CompressError> {
        Ok(Vec::new())
    }

    fn algorithm(&self, n: usize, _advice: &[bool]) -> Result<BoxedAlgorithm, CompressError> {
        let k = self
            .iterations
            .unwrap_or_else(|| crate::qsim::default_iterations(n));
        Ok(Box::new(GroverInversion::new(n, k)?))
    }
}

/// Reads the answer out of a full inverse table; no queries.
#[derive(Debug, Clone, Copy)]
pub struct LookupScheme;

/// Outputs a fixed element; no advice, no queries.
#[derive(Debug, Clone, Copy)]
pub struct ConstantScheme {
    pub output: usize,
}

/// Zero-query program answering `table[y]`.
#[derive(Debug, Clone)]
struct TableProgram {
    table: Vec<usize>,
    advice: Vec<bool>,
}

impl ClassicalProgram for TableProgram {
    type Memory = ();

    fn num_positions(&self) -> usize {
        self.table.len()
    }
    fn answer_dim(&self) -> usize {
        self.table.len()
    }
    fn num_queries(&self) -> usize {
        0
    }
    fn workspace_dim(&self) -> usize {
        1
    }
    fn encode(&self, _: &()) -> usize {
        0
    }
    fn decode(&self, _: usize) {}
    fn start(&self, _: usize) {}
    fn next_query(&self, _: usize, _: &()) -> usize {
        0
    }
    fn absorb(&self, _: usize, _: (), _: usize, _: usize) {}
    fn output(&self, y: usize, _: &()) -> usize {
        self.table[y]
    }
    fn advice(&self) -> &[bool] {
        &self.advice
    }
}

fn bit_width(n: usize) -> Result<usize, CompressError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(CompressError::InvalidPermutation);
    }
    Ok(n.trailing_zeros() as usize)
}

impl InversionScheme for LookupScheme {
    fn name(&self) -> String {
        "lookup".into()
    }

    fn preprocess(&self, f: &Permutation) -> Result<Vec<bool>, CompressError> {
        let width = bit_width(f.len())?;
        Ok(f
            .inverse()
            .images()
            .iter()
            .flat_map(|&x| (0..width).rev().map(move |b| (x >> b) & 1 == 1))
            .collect())
    }

    fn algorithm(&self, n: usize, advice: &[bool]) -> Result<BoxedAlgorithm, CompressError> {
        let width = bit_width(n)?;
        if advice.len() != n * width {
            return Err(CompressError::MalformedEncoding("lookup advice has the wrong length".into()));
        }
        let table = advice
            .chunks_exact(width)
            .map(|c| c.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b)))
            .collect();
        Ok(Box::new(ClassicalAdapter::new(TableProgram {
            table,
            advice: advice.to_vec(),
        })))
    }
}

impl InversionScheme for ConstantScheme {
    fn name(&self) -> String {
        format!("constant-{}", self.output)
    }

    fn preprocess(&self, _f: &Permutation) -> Result<Vec<bool>, CompressError> {
        Ok(Vec::new())
    }

    fn algorithm(&self, n: usize, _advice: &[bool]) -> Result<BoxedAlgorithm, CompressError> {
        bit_width(n)?;
        if self.output >= n {
            return Err(CompressError::InvalidSet(format!("{} is not in [{n}]", self.output)));
        }
        Ok(Box::new(ClassicalAdapter::new(TableProgram {
            table: vec![self.output; n],
            advice: Vec::new(),
        })))
    }
}
