//! Yao's divide-and-conquer strategy for the box problem: split the boxes
//! into `m` consecutive groups and remember one parity bit per group.

use serde::{Deserialize, Serialize};

use super::AdviceError;
use crate::qsim::{BasisLayout, Oracle, PureState, QueryAlgorithm, Register};

/// Per-group parities of an `N`-bit string.
///
/// `boundaries` holds the `m + 1` cut points of the contiguous groups, so
/// group `g` is `boundaries[g]..boundaries[g + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ParityPadRepr", into = "ParityPadRepr")]
pub struct ParityPad {
    boundaries: Vec<usize>,
    parities: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct ParityPadRepr {
    m: usize,
    boundaries: Vec<usize>,
    parities: String,
}

impl From<ParityPad> for ParityPadRepr {
    fn from(pad: ParityPad) -> Self {
        Self {
            m: pad.m(),
            parities: pad
                .parities
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect(),
            boundaries: pad.boundaries,
        }
    }
}

impl TryFrom<ParityPadRepr> for ParityPad {
    type Error = AdviceError;

    fn try_from(repr: ParityPadRepr) -> Result<Self, Self::Error> {
        let parities = parse_bits(&repr.parities)?;
        if parities.len() != repr.m {
            return Err(AdviceError::MalformedPad("group count mismatch".into()));
        }
        ParityPad::from_parts(repr.boundaries, parities)
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, AdviceError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(AdviceError::MalformedPad(format!("bad bit {other:?}"))),
        })
        .collect()
}

/// Equal split of `[n]` into `m` contiguous groups, earlier groups one
/// larger when `m` does not divide `n`.
pub fn group_boundaries(n: usize, m: usize) -> Vec<usize> {
    let (base, extra) = (n / m, n % m);
    let mut cuts = Vec::with_capacity(m + 1);
    let mut at = 0;
    cuts.push(0);
    for g in 0..m {
        at += base + usize::from(g < extra);
        cuts.push(at);
    }
    cuts
}

impl ParityPad {
    /// A pad from explicit cut points and parities.
    pub fn from_parts(boundaries: Vec<usize>, parities: Vec<bool>) -> Result<Self, AdviceError> {
        if parities.is_empty() || boundaries.len() != parities.len() + 1 {
            return Err(AdviceError::MalformedPad("group count mismatch".into()));
        }
        if boundaries[0] != 0 || boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AdviceError::MalformedPad("boundaries must increase from 0".into()));
        }
        Ok(Self {
            boundaries,
            parities,
        })
    }

    pub fn m(&self) -> usize {
        self.parities.len()
    }

    pub fn num_boxes(&self) -> usize {
        *self.boundaries.last().expect("at least one group")
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn parities(&self) -> &[bool] {
        &self.parities
    }

    /// Advice size in bits: one per group.
    pub fn bit_size(&self) -> usize {
        self.m()
    }

    pub fn group_of(&self, j: usize) -> usize {
        self.boundaries.partition_point(|&b| b <= j) - 1
    }

    pub fn group(&self, g: usize) -> std::ops::Range<usize> {
        self.boundaries[g]..self.boundaries[g + 1]
    }

    /// Positions a parity answer for box `j` reads: `j`'s group minus `j`.
    pub fn lids_for(&self, j: usize) -> Vec<usize> {
        self.group(self.group_of(j)).filter(|&i| i != j).collect()
    }

    /// Largest group size, `⌈N/m⌉` for the equal split.
    pub fn max_group_size(&self) -> usize {
        self.boundaries.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }
}

pub fn parity_preprocess(bits: &[bool], m: usize) -> Result<ParityPad, AdviceError> {
    let n = bits.len();
    if m == 0 || m >= n {
        return Err(AdviceError::InvalidGroupCount { m, n });
    }
    let boundaries = group_boundaries(n, m);
    let parities = boundaries
        .windows(2)
        .map(|w| bits[w[0]..w[1]].iter().fold(false, |acc, &b| acc ^ b))
        .collect();
    Ok(ParityPad {
        boundaries,
        parities,
    })
}

/// Answers box `j` as `a_k ⊕ b`, where `b` is the parity of the other boxes
/// in `j`'s group read through `oracle`. Returns the bit and the number of
/// queries made.
pub fn parity_answer(j: usize, pad: &ParityPad, oracle: &Oracle) -> Result<(bool, usize), AdviceError> {
    if j >= pad.num_boxes() || oracle.num_positions() != pad.num_boxes() {
        return Err(AdviceError::BoxOutOfRange {
            j,
            n: pad.num_boxes(),
        });
    }
    let k = pad.group_of(j);
    let mut bit = pad.parities[k];
    let mut queries = 0;
    for i in pad.group(k).filter(|&i| i != j) {
        bit ^= oracle.query(i)? == 1;
        queries += 1;
    }
    Ok((bit, queries))
}

/// The parity strategy for a fixed box `j` as a query algorithm on a
/// bit-string oracle.
///
/// The position register walks through `j`'s group (skipping `j`) by fixed
/// transpositions while the answer register accumulates the XOR of the
/// answers; the last step XORs in the group parity. The answer register
/// holds the output.
#[derive(Debug, Clone)]
pub struct ParityAdapter {
    num_boxes: usize,
    j: usize,
    lids: Vec<usize>,
    parity: bool,
    advice: Vec<bool>,
}

impl ParityAdapter {
    pub fn new(pad: &ParityPad, j: usize) -> Result<Self, AdviceError> {
        if j >= pad.num_boxes() {
            return Err(AdviceError::BoxOutOfRange {
                j,
                n: pad.num_boxes(),
            });
        }
        Ok(Self {
            num_boxes: pad.num_boxes(),
            j,
            lids: pad.lids_for(j),
            parity: pad.parities[pad.group_of(j)],
            advice: pad.parities.clone(),
        })
    }

    pub fn box_index(&self) -> usize {
        self.j
    }

    fn swap_positions(state: &mut PureState, a: usize, b: usize) {
        if a == b {
            return;
        }
        let block = state.layout().block();
        let amps = state.amplitudes_mut();
        for k in 0..block {
            amps.swap(a * block + k, b * block + k);
        }
    }

    fn flip_answer_bit(state: &mut PureState) {
        for pair in state.amplitudes_mut().chunks_exact_mut(2) {
            pair.swap(0, 1);
        }
    }
}

impl QueryAlgorithm for ParityAdapter {
    fn layout(&self) -> BasisLayout {
        BasisLayout::new(self.num_boxes, 2, 1).expect("valid layout")
    }

    fn num_queries(&self) -> usize {
        self.lids.len()
    }

    fn step(&self, t: usize, _input: usize, state: &mut PureState) {
        let last = self.lids.len();
        if t < last {
            let from = if t == 0 { 0 } else { self.lids[t - 1] };
            Self::swap_positions(state, from, self.lids[t]);
        }
        if t == last && self.parity {
            Self::flip_answer_bit(state);
        }
    }

    fn output_register(&self) -> Register {
        Register::Answer
    }

    fn advice(&self) -> &[bool] {
        &self.advice
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{measurement_distribution, run};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn parities_of_worked_example() {
        let pad = parity_preprocess(&bits("10110100"), 2).unwrap();
        assert_eq!(pad.parities(), &[true, true]);
        assert_eq!(pad.boundaries(), &[0, 4, 8]);
        assert_eq!(pad.bit_size(), 2);
    }

    #[test]
    fn zero_string_and_single_group() {
        let zeros = vec![false; 9];
        for m in 1..9 {
            assert!(parity_preprocess(&zeros, m).unwrap().parities().iter().all(|&p| !p));
        }
        let x = bits("110100111");
        let whole = x.iter().fold(false, |a, &b| a ^ b);
        assert_eq!(parity_preprocess(&x, 1).unwrap().parities(), &[whole]);
    }

    #[test]
    fn equal_split_puts_larger_groups_first() {
        assert_eq!(group_boundaries(10, 4), vec![0, 3, 6, 8, 10]);
        assert_eq!(group_boundaries(8, 7), vec![0, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn rejects_bad_group_counts() {
        assert!(parity_preprocess(&bits("1010"), 0).is_err());
        assert!(parity_preprocess(&bits("1010"), 4).is_err());
    }

    #[test]
    fn answer_for_third_box() {
        // box 3 counting from one is index 2
        let x = bits("10110100");
        let pad = parity_preprocess(&x, 2).unwrap();
        let oracle = Oracle::bit_string(x, Some(2)).unwrap();
        assert_eq!(parity_answer(2, &pad, &oracle).unwrap(), (true, 3));
    }

    #[test]
    fn singleton_group_needs_no_queries() {
        let x = bits("01101001");
        let pad = parity_preprocess(&x, 7).unwrap();
        let j = 7;
        let oracle = Oracle::bit_string(x.clone(), Some(j)).unwrap();
        assert_eq!(parity_answer(j, &pad, &oracle).unwrap(), (x[j], 0));
    }

    #[test]
    fn zero_string_answers_zero_with_three_lids() {
        let x = vec![false; 8];
        let pad = parity_preprocess(&x, 2).unwrap();
        for j in 0..8 {
            let oracle = Oracle::bit_string(x.clone(), Some(j)).unwrap();
            assert_eq!(parity_answer(j, &pad, &oracle).unwrap(), (false, 3));
        }
    }

    #[test]
    fn adapter_queries_each_lid_once_and_answers_correctly() {
        let x = bits("10110100");
        let pad = parity_preprocess(&x, 2).unwrap();
        let alg = ParityAdapter::new(&pad, 2).unwrap();
        let oracle = Oracle::bit_string(x.clone(), Some(2)).unwrap();
        let (state, trace) = run(&alg, &oracle, 2).unwrap();
        // positions {1, 2, 4} counting from one
        assert_eq!(trace.totals, vec![1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        for step in &trace.per_step {
            assert!(step.iter().all(|&q| q == 0.0 || q == 1.0));
        }
        let out = measurement_distribution(&state, Register::Answer);
        assert_eq!(out[x[2] as usize], 1.0);
    }

    #[test]
    fn pad_json_round_trips() {
        let pad = parity_preprocess(&bits("1011010011"), 3).unwrap();
        let json = serde_json::to_string(&pad).unwrap();
        assert_eq!(json, r#"{"m":3,"boundaries":[0,4,7,10],"parities":"110"}"#);
        let back: ParityPad = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pad);
        assert!(serde_json::from_str::<ParityPad>(r#"{"m":2,"boundaries":[0,4],"parities":"10"}"#).is_err());
    }
}
