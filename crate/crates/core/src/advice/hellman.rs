//! Hellman iterate tables for inverting a permutation.
//!
//! Every cycle of `f` gets anchors spaced `s` apart, starting from the
//! cycle's minimum element. Each stored pair `(x_i, x_next, stride)` has
//! `x_next = f^(stride)(x_i)`, with `stride = s` except possibly for the pair
//! that closes the cycle. Inversion walks forward from `y` until it meets a
//! stored right element, jumps to the matching left element and iterates
//! until the next value would be `y`.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::AdviceError;
use crate::qsim::ClassicalProgram;
use crate::Permutation;

/// Evaluates a permutation while counting calls.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    f: &'a Permutation,
    calls: Cell<usize>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(f: &'a Permutation) -> Self {
        Self {
            f,
            calls: Cell::new(0),
        }
    }

    pub fn eval(&self, x: usize) -> usize {
        self.calls.set(self.calls.get() + 1);
        self.f.apply(x)
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }
}

/// `f^(s)(x)`, evaluated with exactly `s` oracle calls.
pub fn iterate(f: &CountingOracle<'_>, x: usize, s: usize) -> usize {
    (0..s).fold(x, |v, _| f.eval(v))
}

/// `(x_i, x_next, stride)` with `x_next = f^(stride)(x_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorPair(pub usize, pub usize, pub usize);

impl AnchorPair {
    pub fn left(&self) -> usize {
        self.0
    }
    pub fn right(&self) -> usize {
        self.1
    }
    pub fn stride(&self) -> usize {
        self.2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleAnchors {
    pub anchors: Vec<AnchorPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HellmanTableRepr")]
pub struct HellmanTable {
    n: u32,
    s: usize,
    cycles: Vec<CycleAnchors>,
    /// `right -> left` for every stored pair.
    #[serde(skip)]
    lookup: Vec<Option<usize>>,
}

#[derive(Deserialize)]
struct HellmanTableRepr {
    n: u32,
    s: usize,
    cycles: Vec<CycleAnchors>,
}

impl TryFrom<HellmanTableRepr> for HellmanTable {
    type Error = AdviceError;

    fn try_from(repr: HellmanTableRepr) -> Result<Self, AdviceError> {
        if repr.n >= usize::BITS || repr.s == 0 {
            return Err(AdviceError::CorruptTable("bad header".into()));
        }
        let pairs = repr.cycles.iter().flat_map(|c| c.anchors.iter().map(|p| (p.0, p.1)));
        let lookup = build_lookup(1usize << repr.n, pairs)?;
        Ok(Self {
            n: repr.n,
            s: repr.s,
            cycles: repr.cycles,
            lookup,
        })
    }
}

fn build_lookup(
    len: usize,
    pairs: impl Iterator<Item = (usize, usize)>,
) -> Result<Vec<Option<usize>>, AdviceError> {
    let mut lookup = vec![None; len];
    for (left, right) in pairs {
        if left >= len || right >= len {
            return Err(AdviceError::CorruptTable(format!(
                "anchor ({left}, {right}) out of range"
            )));
        }
        if lookup[right].replace(left).is_some() {
            return Err(AdviceError::CorruptTable(format!(
                "right element {right} stored twice"
            )));
        }
    }
    Ok(lookup)
}

/// Builds the anchor table of `f` with spacing `s`, `1 ≤ s ≤ N`.
pub fn hellman_build(f: &Permutation, s: usize) -> Result<HellmanTable, AdviceError> {
    let n = f
        .bit_width()
        .filter(|&n| n > 0)
        .ok_or(AdviceError::NotPowerOfTwo { len: f.len() })?;
    if s == 0 || s > f.len() {
        return Err(AdviceError::InvalidStride { s, len: f.len() });
    }
    let oracle = CountingOracle::new(f);
    let cycles: Vec<CycleAnchors> = f
        .cycles()
        .into_iter()
        .map(|cycle| {
            let len = cycle.len();
            let anchors = (0..len)
                .step_by(s)
                .map(|offset| {
                    let stride = s.min(len - offset);
                    let left = cycle[offset];
                    AnchorPair(left, iterate(&oracle, left, stride), stride)
                })
                .collect();
            CycleAnchors { anchors }
        })
        .collect();
    let pairs = cycles.iter().flat_map(|c| c.anchors.iter().map(|p| (p.0, p.1)));
    let lookup = build_lookup(f.len(), pairs)?;
    Ok(HellmanTable {
        n,
        s,
        cycles,
        lookup,
    })
}

/// Finds `x` with `f(x) = y`. Returns `x` and the number of oracle calls.
pub fn hellman_invert(
    y: usize,
    table: &HellmanTable,
    f: &Permutation,
) -> Result<(usize, usize), AdviceError> {
    let len = table.num_elements();
    if f.len() != len || y >= len {
        return Err(AdviceError::CorruptTable("table does not match oracle".into()));
    }
    let oracle = CountingOracle::new(f);

    let mut v = y;
    let mut start = table.lookup[v];
    while start.is_none() {
        if oracle.calls() >= len {
            return Err(AdviceError::CorruptTable(format!("walk from {y} found no anchor")));
        }
        v = oracle.eval(v);
        start = table.lookup[v];
    }

    let mut u = start.expect("loop exits on an anchor");
    let mut steps = 0;
    loop {
        let next = oracle.eval(u);
        if next == y {
            return Ok((u, oracle.calls()));
        }
        steps += 1;
        if steps >= len {
            return Err(AdviceError::CorruptTable(format!(
                "iteration from anchor never reached {y}"
            )));
        }
        u = next;
    }
}

impl HellmanTable {
    /// `log2 N`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn num_elements(&self) -> usize {
        1 << self.n
    }

    pub fn cycles(&self) -> &[CycleAnchors] {
        &self.cycles
    }

    pub fn entries(&self) -> usize {
        self.cycles.iter().map(|c| c.anchors.len()).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &AnchorPair> {
        self.cycles.iter().flat_map(|c| c.anchors.iter())
    }

    /// Measured advice size `S`: `2n` bits per stored pair.
    pub fn pair_bits(&self) -> usize {
        self.entries() * 2 * self.n as usize
    }

    /// Bits for per-cycle headers (pair count of each cycle), reported
    /// apart from [`Self::pair_bits`].
    pub fn header_bits(&self) -> usize {
        self.cycles.len() * (self.n as usize + 1)
    }

    /// Checks the table against `f`: every stored stride reproduces its
    /// pair, every element lies fewer than `s` steps past an anchor, and the
    /// entry count is at most `⌈N/s⌉ + cycles`.
    pub fn verify(&self, f: &Permutation) -> Result<(), AdviceError> {
        if f.len() != self.num_elements() {
            return Err(AdviceError::CorruptTable("size mismatch".into()));
        }
        let oracle = CountingOracle::new(f);
        let mut covered = vec![false; f.len()];
        for pair in self.pairs() {
            if pair.stride() == 0 || pair.stride() > self.s {
                return Err(AdviceError::CorruptTable(format!("bad stride in {pair:?}")));
            }
            let mut v = pair.left();
            for _ in 0..pair.stride() {
                covered[v] = true;
                v = oracle.eval(v);
            }
            if v != pair.right() {
                return Err(AdviceError::CorruptTable(format!(
                    "{pair:?} does not match the oracle"
                )));
            }
        }
        if let Some(x) = covered.iter().position(|&c| !c) {
            return Err(AdviceError::CorruptTable(format!("{x} is not covered")));
        }
        let bound = f.len().div_ceil(self.s) + self.cycles.len();
        if self.entries() > bound {
            return Err(AdviceError::CorruptTable(format!(
                "{} entries exceed {bound}",
                self.entries()
            )));
        }
        Ok(())
    }

    /// The pairs as an advice string: `left` then `right`, `n` bits each,
    /// most significant bit first. Strides are not needed for inversion.
    pub fn to_advice_bits(&self) -> Vec<bool> {
        let n = self.n as usize;
        let mut bits = Vec::with_capacity(self.pair_bits());
        for pair in self.pairs() {
            push_bits(&mut bits, pair.left(), n);
            push_bits(&mut bits, pair.right(), n);
        }
        bits
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, AdviceError> {
        serde_json::from_str(json).map_err(|e| AdviceError::CorruptTable(e.to_string()))
    }
}

fn push_bits(out: &mut Vec<bool>, value: usize, width: usize) {
    out.extend((0..width).rev().map(|b| (value >> b) & 1 == 1));
}

fn read_bits(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

/// One point of the space/time tradeoff, measured exhaustively.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub s: usize,
    pub entries: usize,
    /// `S_meas = entries × 2n`.
    pub advice_bits: usize,
    pub header_bits: usize,
    /// `T_meas`: worst-case oracle calls over all `y`.
    pub worst_calls: usize,
    pub mean_calls: f64,
    /// Fraction of `y` inverted correctly.
    pub correct_fraction: f64,
}

impl TradeoffPoint {
    pub fn product(&self) -> usize {
        self.advice_bits * self.worst_calls
    }
}

/// Builds the table for `f` and stride `s`, then inverts every `y`.
pub fn measure_tradeoff(f: &Permutation, s: usize) -> Result<TradeoffPoint, AdviceError> {
    let table = hellman_build(f, s)?;
    let mut worst = 0;
    let mut total = 0;
    let mut correct = 0;
    for y in 0..f.len() {
        let (x, calls) = hellman_invert(y, &table, f)?;
        worst = worst.max(calls);
        total += calls;
        correct += usize::from(f.apply(x) == y);
    }
    Ok(TradeoffPoint {
        s,
        entries: table.entries(),
        advice_bits: table.pair_bits(),
        header_bits: table.header_bits(),
        worst_calls: worst,
        mean_calls: total as f64 / f.len() as f64,
        correct_fraction: correct as f64 / f.len() as f64,
    })
}

/// State of the classical Hellman inverter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HellmanMemory {
    /// Walking forward from `y`; the value is the next point to evaluate.
    Walk(usize),
    /// Iterating from an anchor; the value is the next point to evaluate.
    Iterate(usize),
    /// Found the preimage.
    Done(usize),
}

/// Hellman inversion as a classical query program over a permutation
/// oracle, rebuilt from the advice bits alone.
///
/// The program always spends exactly `s` query slots: an inversion never
/// needs more, and once done it re-queries the answer it found.
#[derive(Debug, Clone)]
pub struct HellmanProgram {
    len: usize,
    s: usize,
    lookup: Vec<Option<usize>>,
    advice: Vec<bool>,
}

impl HellmanProgram {
    pub fn from_table(table: &HellmanTable) -> Self {
        Self {
            len: table.num_elements(),
            s: table.s,
            lookup: table.lookup.clone(),
            advice: table.to_advice_bits(),
        }
    }

    pub fn from_advice(len: usize, s: usize, advice: &[bool]) -> Result<Self, AdviceError> {
        if !len.is_power_of_two() || len < 2 {
            return Err(AdviceError::NotPowerOfTwo { len });
        }
        if s == 0 {
            return Err(AdviceError::InvalidStride { s, len });
        }
        let n = len.trailing_zeros() as usize;
        if !advice.len().is_multiple_of(2 * n) {
            return Err(AdviceError::CorruptTable(format!(
                "advice length {} is not a multiple of {}",
                advice.len(),
                2 * n
            )));
        }
        let pairs = advice
            .chunks_exact(2 * n)
            .map(|c| (read_bits(&c[..n]), read_bits(&c[n..])));
        Ok(Self {
            len,
            s,
            lookup: build_lookup(len, pairs)?,
            advice: advice.to_vec(),
        })
    }
}

impl ClassicalProgram for HellmanProgram {
    type Memory = HellmanMemory;

    fn num_positions(&self) -> usize {
        self.len
    }

    fn answer_dim(&self) -> usize {
        self.len
    }

    fn num_queries(&self) -> usize {
        self.s
    }

    fn workspace_dim(&self) -> usize {
        3 * self.len
    }

    fn encode(&self, memory: &HellmanMemory) -> usize {
        match *memory {
            HellmanMemory::Walk(v) => v,
            HellmanMemory::Iterate(u) => self.len + u,
            HellmanMemory::Done(x) => 2 * self.len + x,
        }
    }

    fn decode(&self, w: usize) -> HellmanMemory {
        let v = w % self.len;
        match w / self.len {
            0 => HellmanMemory::Walk(v),
            1 => HellmanMemory::Iterate(v),
            _ => HellmanMemory::Done(v),
        }
    }

    fn start(&self, y: usize) -> HellmanMemory {
        match self.lookup[y] {
            Some(left) => HellmanMemory::Iterate(left),
            None => HellmanMemory::Walk(y),
        }
    }

    fn next_query(&self, _y: usize, memory: &HellmanMemory) -> usize {
        match *memory {
            HellmanMemory::Walk(v) | HellmanMemory::Iterate(v) | HellmanMemory::Done(v) => v,
        }
    }

    fn absorb(&self, y: usize, memory: HellmanMemory, _position: usize, answer: usize) -> HellmanMemory {
        match memory {
            HellmanMemory::Walk(_) => match self.lookup[answer] {
                Some(left) => HellmanMemory::Iterate(left),
                None => HellmanMemory::Walk(answer),
            },
            HellmanMemory::Iterate(u) if answer == y => HellmanMemory::Done(u),
            HellmanMemory::Iterate(_) => HellmanMemory::Iterate(answer),
            done @ HellmanMemory::Done(_) => done,
        }
    }

    fn output(&self, _y: usize, memory: &HellmanMemory) -> usize {
        match *memory {
            HellmanMemory::Walk(v) | HellmanMemory::Iterate(v) | HellmanMemory::Done(v) => v,
        }
    }

    fn advice(&self) -> &[bool] {
        &self.advice
    }
}
