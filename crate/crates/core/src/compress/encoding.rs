use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::codec::{binomial, ceil_log2, factorial, log2_factorial, rank_perm, rank_set, unrank_perm, unrank_set};
use super::params::{CompressionParams, KAPPA, SUCCESS_THRESHOLD};
use super::scheme::InversionScheme;
use super::CompressError;
use crate::qsim::{euclidean_distance, measurement_distribution, run, Oracle, PureState, QueryAlgorithm};
use crate::Permutation;

/// Top-two gap below which the decoder refuses to pick an output.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// The run of the inverter on input `f(x)`.
#[derive(Debug, Clone)]
pub struct InversionRun {
    pub x: usize,
    pub y: usize,
    /// Exact probability of outputting `x`.
    pub success: f64,
    /// `q_z(x)` for every `z`.
    pub totals: Vec<f64>,
    pub state: PureState,
}

fn check_layout(alg: &dyn QueryAlgorithm, n: usize) -> Result<(), CompressError> {
    let layout = alg.layout();
    let out = match alg.output_register() {
        crate::qsim::Register::Position => layout.num_positions(),
        crate::qsim::Register::Answer => layout.answer_dim(),
        crate::qsim::Register::Workspace => layout.workspace_dim(),
        crate::qsim::Register::Full => layout.dim(),
    };
    if layout.num_positions() != n || out < n {
        return Err(CompressError::IncompatibleAlgorithm);
    }
    Ok(())
}

/// Runs `alg` on every `y = f(x)` and reads success probabilities off the
/// final states. Indexed by `x`.
pub fn inversion_runs(f: &Permutation, alg: &dyn QueryAlgorithm) -> Result<Vec<InversionRun>, CompressError> {
    check_layout(alg, f.len())?;
    let oracle = Oracle::permutation(f.clone())?;
    (0..f.len())
        .map(|x| {
            let y = f.apply(x);
            let (state, trace) = run(alg, &oracle, y)?;
            let success = measurement_distribution(&state, alg.output_register())[x];
            Ok(InversionRun {
                x,
                y,
                success,
                totals: trace.totals,
                state,
            })
        })
        .collect()
}

/// `I`: the `x` whose image the algorithm inverts with probability at least
/// 2/3.
pub fn inversion_set(f: &Permutation, alg: &dyn QueryAlgorithm) -> Result<Vec<usize>, CompressError> {
    Ok(inverted(&inversion_runs(f, alg)?))
}

fn inverted(runs: &[InversionRun]) -> Vec<usize> {
    runs.iter()
        .filter(|r| r.success >= SUCCESS_THRESHOLD)
        .map(|r| r.x)
        .collect()
}

/// Whether `x ∈ R` and `Σ_{z ∈ R∖{x}} q_z(x) ≤ c/T`.
pub fn events(run: &InversionRun, in_r: &[bool], params: &CompressionParams, num_queries: usize) -> (bool, bool) {
    let a = in_r[run.x];
    let sum: f64 = run
        .totals
        .iter()
        .enumerate()
        .filter(|&(z, _)| z != run.x && in_r[z])
        .map(|(_, q)| q)
        .sum();
    (a, sum <= params.b_threshold(num_queries))
}

fn membership(n: usize, r: &[usize]) -> Result<Vec<bool>, CompressError> {
    let mut in_r = vec![false; n];
    for &x in r {
        if x >= n || std::mem::replace(&mut in_r[x], true) {
            return Err(CompressError::InvalidSet(format!("bad element {x} in R")));
        }
    }
    Ok(in_r)
}

fn good_from_runs(
    runs: &[InversionRun],
    in_r: &[bool],
    params: &CompressionParams,
    num_queries: usize,
) -> Vec<usize> {
    runs.iter()
        .filter(|run| run.success >= SUCCESS_THRESHOLD)
        .filter(|run| events(run, in_r, params, num_queries) == (true, true))
        .map(|run| run.x)
        .collect()
}

/// `G`: elements of `I ∩ R` whose query mass on `R∖{x}` is at most `c/T`.
pub fn good_set(
    f: &Permutation,
    alg: &dyn QueryAlgorithm,
    r: &[usize],
    params: &CompressionParams,
) -> Result<Vec<usize>, CompressError> {
    let in_r = membership(f.len(), r)?;
    Ok(good_from_runs(&inversion_runs(f, alg)?, &in_r, params, alg.num_queries()))
}

/// The compressed permutation. Ranks are exact; `logical_bits` counts each
/// component at `⌈log₂⌉` of its range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    pub n: usize,
    pub advice: Vec<bool>,
    pub good_count: usize,
    pub r_size: usize,
    pub fr_rank: BigUint,
    pub outer_rank: BigUint,
    pub fg_rank: BigUint,
    pub inner_rank: BigUint,
    pub logical_bits: u64,
}

/// Bits per component of an encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentBits {
    pub advice: u64,
    pub good_count: u64,
    pub fr: u64,
    pub outer: u64,
    pub fg: u64,
    pub inner: u64,
    pub r_size: u64,
}

impl ComponentBits {
    /// Widths for `N`, `S`, `|R| = r` and `|G| = g`. Both counts are written
    /// with `⌈log₂(N+1)⌉` bits so that the value `N` fits.
    pub fn new(n: usize, s: usize, r: usize, g: usize) -> Self {
        let count = ceil_log2(&BigUint::from(n + 1));
        Self {
            advice: s as u64,
            good_count: count,
            fr: ceil_log2(&binomial(n, r)),
            outer: ceil_log2(&factorial(n - r)),
            fg: ceil_log2(&binomial(r, g)),
            inner: ceil_log2(&factorial(r - g)),
            r_size: count,
        }
    }

    pub fn total(&self) -> u64 {
        self.advice + self.good_count + self.fr + self.outer + self.fg + self.inner + self.r_size
    }
}

/// `S + log₂ N! − log₂ |G|! + κ·log₂ N`.
pub fn length_bound(n: usize, s: usize, g: usize) -> f64 {
    s as f64 + log2_factorial(n) - log2_factorial(g) + KAPPA * (n as f64).log2()
}

impl Encoding {
    pub fn components(&self) -> ComponentBits {
        ComponentBits::new(self.n, self.advice.len(), self.r_size, self.good_count)
    }

    pub fn length_bound(&self) -> f64 {
        length_bound(self.n, self.advice.len(), self.good_count)
    }
}

fn sorted_complement(n: usize, members: &[bool]) -> Vec<usize> {
    (0..n).filter(|&i| !members[i]).collect()
}

/// Image list of the bijection `domain → codomain` induced by `f`, both
/// sides in increasing order: `g(i) = k` when `f` maps the `i`-th domain
/// element to the `k`-th codomain element.
fn index_map(f: &Permutation, domain: &[usize], codomain: &[usize]) -> Vec<usize> {
    domain
        .iter()
        .map(|&x| codomain.binary_search(&f.apply(x)).expect("codomain holds f(domain)"))
        .collect()
}

/// Compresses `f` given the shared random set `R`. Fails with
/// [`CompressError::TooFewGood`] when `|G|` is below the threshold.
pub fn encode<S: InversionScheme + ?Sized>(
    f: &Permutation,
    scheme: &S,
    r: &[usize],
    params: &CompressionParams,
) -> Result<Encoding, CompressError> {
    let n = f.len();
    let advice = scheme.preprocess(f)?;
    let alg = scheme.algorithm(n, &advice)?;
    let in_r = membership(n, r)?;
    let runs = inversion_runs(f, alg.as_ref())?;
    let good = good_from_runs(&runs, &in_r, params, alg.num_queries());
    if good.len() < params.min_good() || good.is_empty() {
        return Err(CompressError::TooFewGood {
            good: good.len(),
            min_good: params.min_good().max(1),
        });
    }
    encode_with_good(f, advice, &in_r, &good)
}

fn encode_with_good(
    f: &Permutation,
    advice: Vec<bool>,
    in_r: &[bool],
    good: &[usize],
) -> Result<Encoding, CompressError> {
    let n = f.len();
    let r: Vec<usize> = (0..n).filter(|&x| in_r[x]).collect();

    let mut f_r: Vec<usize> = r.iter().map(|&x| f.apply(x)).collect();
    f_r.sort_unstable();
    let mut in_fr = vec![false; n];
    for &y in &f_r {
        in_fr[y] = true;
    }
    let outer = index_map(f, &sorted_complement(n, in_r), &sorted_complement(n, &in_fr));

    let mut is_good = vec![false; n];
    for &x in good {
        is_good[x] = true;
    }
    let fg_positions: Vec<usize> = good
        .iter()
        .map(|&x| f_r.binary_search(&f.apply(x)).expect("f(G) inside f(R)"))
        .collect();
    let rest: Vec<usize> = r.iter().copied().filter(|&x| !is_good[x]).collect();
    let mut f_rest: Vec<usize> = rest.iter().map(|&x| f.apply(x)).collect();
    f_rest.sort_unstable();
    let inner = index_map(f, &rest, &f_rest);

    let components = ComponentBits::new(n, advice.len(), r.len(), good.len());
    Ok(Encoding {
        n,
        good_count: good.len(),
        r_size: r.len(),
        fr_rank: rank_set(&f_r, n)?,
        outer_rank: rank_perm(&outer)?,
        fg_rank: rank_set(&fg_positions, r.len())?,
        inner_rank: rank_perm(&inner)?,
        logical_bits: components.total(),
        advice,
    })
}

/// `h(z) = f(z)` off `R` and `h(z) = y` on `R`, from the values of `f` on
/// `[N]∖R` alone.
pub fn build_h(known: &[Option<usize>], r: &[usize], y: usize) -> Result<Oracle, CompressError> {
    let in_r = membership(known.len(), r)?;
    let values = known
        .iter()
        .enumerate()
        .map(|(z, v)| match (in_r[z], v) {
            (true, _) => Ok(y),
            (false, Some(v)) => Ok(*v),
            (false, None) => Err(CompressError::MalformedEncoding(format!("f({z}) unknown outside R"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Oracle::function(values)?)
}

/// Most likely output of `alg` on input `y` against `oracle`, refusing near
/// ties.
fn decode_one(alg: &dyn QueryAlgorithm, oracle: &Oracle, y: usize) -> Result<usize, CompressError> {
    let (state, _) = run(alg, oracle, y)?;
    let dist = measurement_distribution(&state, alg.output_register());
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]));
    let (best, second) = (order[0], order.get(1).map_or(0.0, |&i| dist[i]));
    if dist[best] - second <= TIE_TOLERANCE {
        return Err(CompressError::AmbiguousDecode { y });
    }
    Ok(best)
}

/// Rebuilds `f` from an encoding and the shared set `R`.
pub fn decode<S: InversionScheme + ?Sized>(
    enc: &Encoding,
    r: &[usize],
    scheme: &S,
) -> Result<Permutation, CompressError> {
    let n = enc.n;
    let in_r = membership(n, r)?;
    if enc.r_size != r.len() || enc.good_count > enc.r_size || enc.good_count == 0 {
        return Err(CompressError::MalformedEncoding("set sizes do not match R".into()));
    }

    let f_r = unrank_set(&enc.fr_rank, n, r.len())?;
    let mut in_fr = vec![false; n];
    for &y in &f_r {
        in_fr[y] = true;
    }
    let domain = sorted_complement(n, &in_r);
    let codomain = sorted_complement(n, &in_fr);
    let outer = unrank_perm(&enc.outer_rank, domain.len())?;
    let mut known: Vec<Option<usize>> = vec![None; n];
    for (i, &x) in domain.iter().enumerate() {
        known[x] = Some(codomain[outer[i]]);
    }

    let alg = scheme.algorithm(n, &enc.advice)?;
    check_layout(alg.as_ref(), n)?;
    let mut values = known.clone();
    let fg_positions = unrank_set(&enc.fg_rank, r.len(), enc.good_count)?;
    let mut in_fg = vec![false; n];
    for &p in &fg_positions {
        let y = f_r[p];
        in_fg[y] = true;
        let h = build_h(&known, r, y)?;
        let x = decode_one(alg.as_ref(), &h, y)?;
        if !in_r[x] || values[x].is_some() {
            return Err(CompressError::DecodeMismatch { y, x });
        }
        values[x] = Some(y);
    }

    let rest: Vec<usize> = r.iter().copied().filter(|&x| values[x].is_none()).collect();
    let f_rest: Vec<usize> = f_r.iter().copied().filter(|&y| !in_fg[y]).collect();
    let inner = unrank_perm(&enc.inner_rank, rest.len())?;
    for (i, &x) in rest.iter().enumerate() {
        values[x] = Some(f_rest[inner[i]]);
    }
    let images = values.into_iter().map(|v| v.expect("every element assigned")).collect();
    Permutation::new(images).map_err(|e| CompressError::MalformedEncoding(e.to_string()))
}

/// `‖|φ_f> − |φ_h>‖` for the run on input `f(x)`, with `h` built from `f`
/// and `R` as the decoder would.
pub fn h_distance(
    f: &Permutation,
    alg: &dyn QueryAlgorithm,
    r: &[usize],
    x: usize,
) -> Result<f64, CompressError> {
    let in_r = membership(f.len(), r)?;
    let known: Vec<Option<usize>> = (0..f.len())
        .map(|z| (!in_r[z]).then(|| f.apply(z)))
        .collect();
    let y = f.apply(x);
    let (phi_f, _) = run(alg, &Oracle::permutation(f.clone())?, y)?;
    let (phi_h, _) = run(alg, &build_h(&known, r, y)?, y)?;
    Ok(euclidean_distance(&phi_f, &phi_h)?)
}

#[derive(Serialize, Deserialize)]
struct Ranks {
    #[serde(rename = "fR")]
    fr: String,
    outer: String,
    #[serde(rename = "fG")]
    fg: String,
    inner: String,
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    #[serde(rename = "S")]
    s: usize,
    good_count: usize,
    r_size: usize,
    ranks: Ranks,
    advice: String,
    logical_bits: u64,
}

fn rank_bytes(rank: &BigUint) -> String {
    let magnitude = rank.to_bytes_be();
    let mut bytes = (magnitude.len() as u32).to_be_bytes().to_vec();
    bytes.extend(magnitude);
    B64.encode(bytes)
}

fn parse_rank(text: &str) -> Result<BigUint, CompressError> {
    let bytes = B64
        .decode(text)
        .map_err(|e| CompressError::MalformedEncoding(e.to_string()))?;
    let (len, magnitude) = bytes
        .split_first_chunk::<4>()
        .ok_or_else(|| CompressError::MalformedEncoding("rank shorter than its length prefix".into()))?;
    if u32::from_be_bytes(*len) as usize != magnitude.len() {
        return Err(CompressError::MalformedEncoding("rank length prefix mismatch".into()));
    }
    Ok(BigUint::from_bytes_be(magnitude))
}

fn pack_bits(bits: &[bool]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i))))
        .collect();
    B64.encode(bytes)
}

fn unpack_bits(text: &str, len: usize) -> Result<Vec<bool>, CompressError> {
    let bytes = B64
        .decode(text)
        .map_err(|e| CompressError::MalformedEncoding(e.to_string()))?;
    if bytes.len() != len.div_ceil(8) {
        return Err(CompressError::MalformedEncoding("advice length does not match S".into()));
    }
    Ok((0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1 == 1).collect())
}

impl Encoding {
    /// The JSON envelope. Ranks are base64 of a 4-byte big-endian length
    /// followed by the big-endian magnitude; advice bits are packed
    /// most significant bit first.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Envelope {
            s: self.advice.len(),
            good_count: self.good_count,
            r_size: self.r_size,
            ranks: Ranks {
                fr: rank_bytes(&self.fr_rank),
                outer: rank_bytes(&self.outer_rank),
                fg: rank_bytes(&self.fg_rank),
                inner: rank_bytes(&self.inner_rank),
            },
            advice: pack_bits(&self.advice),
            logical_bits: self.logical_bits,
        })
        .expect("envelope serializes")
    }

    /// Parses an envelope for a permutation of `[n]`, checking every rank
    /// against its range and the recorded length against the formula.
    pub fn from_json(json: &str, n: usize) -> Result<Self, CompressError> {
        let env: Envelope =
            serde_json::from_str(json).map_err(|e| CompressError::MalformedEncoding(e.to_string()))?;
        if env.r_size > n || env.good_count > env.r_size {
            return Err(CompressError::MalformedEncoding("set sizes out of range".into()));
        }
        let enc = Self {
            n,
            advice: unpack_bits(&env.advice, env.s)?,
            good_count: env.good_count,
            r_size: env.r_size,
            fr_rank: parse_rank(&env.ranks.fr)?,
            outer_rank: parse_rank(&env.ranks.outer)?,
            fg_rank: parse_rank(&env.ranks.fg)?,
            inner_rank: parse_rank(&env.ranks.inner)?,
            logical_bits: env.logical_bits,
        };
        let ranges = [
            (&enc.fr_rank, binomial(n, enc.r_size)),
            (&enc.outer_rank, factorial(n - enc.r_size)),
            (&enc.fg_rank, binomial(enc.r_size, enc.good_count)),
            (&enc.inner_rank, factorial(enc.r_size - enc.good_count)),
        ];
        for (rank, limit) in ranges {
            if *rank >= limit {
                return Err(CompressError::RankOutOfRange {
                    what: "envelope",
                    bits: rank.bits(),
                });
            }
        }
        if enc.components().total() != enc.logical_bits {
            return Err(CompressError::MalformedEncoding("logical_bits does not match the components".into()));
        }
        Ok(enc)
    }
}
