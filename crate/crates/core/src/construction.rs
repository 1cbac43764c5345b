//! Reliability profiles `Z^(i)` and frozen-set selection.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::bits::{BitVector, IndexSet};
use crate::channel::{combine_minus, combine_plus, BinaryInputChannel, ChannelKind, DEFAULT_ALPHABET_CAP};
use crate::codec::{fold_blocks, CodeSpec, Rounding, ScEngine};
use crate::rng::{stream, Purpose};
use crate::stats::Neumaier;
use crate::transform::{polar_transform, TransformSpec};
use crate::{Error, Result};

/// Default number of Monte Carlo trials per profile.
pub const DEFAULT_PROFILE_TRIALS: u64 = 100_000;

/// Largest exponent accepted by exhaustive enumeration.
pub const MAX_ENUM_EXPONENT: u32 = 3;

const ENUM_WORK_CAP: u64 = 1 << 28;
const MC_CLAMP: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileMethod {
    #[serde(rename = "bec-exact")]
    BecExact,
    #[serde(rename = "enum-exact")]
    EnumExact,
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

/// The values `Z^(0), …, Z^(N−1)` for one channel and blocklength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileFile", into = "ProfileFile")]
pub struct ReliabilityProfile {
    pub n: u32,
    pub channel: BinaryInputChannel,
    pub method: ProfileMethod,
    pub trials: u64,
    pub seed: Option<u64>,
    pub z: Vec<f64>,
    /// Standard errors of Monte Carlo estimates; not persisted.
    pub stderr: Option<Vec<f64>>,
    /// Number of Monte Carlo samples clamped to the upper bound; not persisted.
    pub clamped: u64,
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    version: u32,
    n: u32,
    channel: BinaryInputChannel,
    method: ProfileMethod,
    trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    z: Vec<f64>,
}

impl From<ReliabilityProfile> for ProfileFile {
    fn from(p: ReliabilityProfile) -> Self {
        ProfileFile {
            version: 1,
            n: p.n,
            channel: p.channel,
            method: p.method,
            trials: p.trials,
            seed: p.seed,
            z: p.z,
        }
    }
}

impl TryFrom<ProfileFile> for ReliabilityProfile {
    type Error = Error;
    fn try_from(f: ProfileFile) -> Result<Self> {
        if f.version != 1 {
            return Err(Error::Config(format!("unsupported profile version {}", f.version)));
        }
        TransformSpec::new(f.n)?;
        if f.z.len() != 1usize << f.n {
            return Err(Error::LengthMismatch {
                expected: 1 << f.n,
                actual: f.z.len(),
            });
        }
        if let Some(bad) = f.z.iter().find(|z| !(0.0..=1.0).contains(*z)) {
            return Err(Error::domain("z", *bad, "[0, 1]"));
        }
        Ok(ReliabilityProfile {
            n: f.n,
            channel: f.channel,
            method: f.method,
            trials: f.trials,
            seed: f.seed,
            z: f.z,
            stderr: None,
            clamped: 0,
        })
    }
}

impl ReliabilityProfile {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn transform(&self) -> TransformSpec {
        TransformSpec::new(self.n).expect("validated exponent")
    }

    /// `Σ_{i ∈ set} Z^(i)`.
    pub fn sum_over(&self, set: &IndexSet) -> f64 {
        set.iter().map(|i| self.z[i]).collect::<Neumaier>().value()
    }
}

/// Exact profile of BEC(ε): `z ↦ 2z − z²` for an index bit 0 and
/// `z ↦ z²` for a bit 1, most significant bit first.
pub fn z_profile_bec(epsilon: f64, n: u32) -> Result<ReliabilityProfile> {
    let channel = BinaryInputChannel::bec(epsilon)?;
    TransformSpec::new(n)?;
    let mut z = vec![epsilon];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * z.len());
        for &v in &z {
            next.push((2.0 * v - v * v).clamp(0.0, 1.0));
            next.push(v * v);
        }
        z = next;
    }
    Ok(ReliabilityProfile {
        n,
        channel,
        method: ProfileMethod::BecExact,
        trials: 0,
        seed: None,
        z,
        stderr: None,
        clamped: 0,
    })
}

/// Bit-channel tables `W^(i)(ȳ, u_0^{i−1} | u_i)` by exhaustive summation.
///
/// `table(i)` lists, for every observation `ȳ` (base-`m` digits, `y_0` most
/// significant) and prefix `u_0^{i}` (`u_0` most significant), the value
/// `2^{−(N−1)} Σ_{u_{i+1}^{N−1}} W^N(ȳ | ū H_n)`. Entries for `u_i = 0` and
/// `u_i = 1` sit next to each other.
pub struct BitChannelTables {
    n: u32,
    outputs: usize,
    tables: Vec<Vec<f64>>,
}

impl BitChannelTables {
    pub fn new(w: &BinaryInputChannel, n: u32) -> Result<Self> {
        if n > MAX_ENUM_EXPONENT {
            return Err(Error::Precondition(format!(
                "exhaustive enumeration supports n ≤ {MAX_ENUM_EXPONENT}, got {n}"
            )));
        }
        let len = 1usize << n;
        let m = w.outputs();
        let observations = (m as u64).checked_pow(len as u32).unwrap_or(u64::MAX);
        let work = observations.saturating_mul(1 << len);
        if work > ENUM_WORK_CAP {
            return Err(Error::Precondition(format!(
                "enumeration over {observations} observations is too large"
            )));
        }
        let spec = TransformSpec::new(n)?;
        // x̄ = ū H_n for every ū, with u_0 as the most significant bit.
        let codewords: Vec<Vec<u8>> = (0..1usize << len)
            .map(|code| {
                let bits: Vec<u8> = (0..len).map(|j| ((code >> (len - 1 - j)) & 1) as u8).collect();
                polar_transform(&BitVector::from_bits(&bits), spec).unwrap().to_bits()
            })
            .collect();
        let scale = 1.0 / (1u64 << (len - 1)) as f64;
        let mut tables: Vec<Vec<f64>> = (0..len)
            .map(|i| vec![0.0; observations as usize * (2usize << i)])
            .collect();
        let mut y = vec![0usize; len];
        let mut joint = vec![0.0; 1 << len];
        for obs in 0..observations as usize {
            let mut r = obs;
            for j in (0..len).rev() {
                y[j] = r % m;
                r /= m;
            }
            for (code, x) in codewords.iter().enumerate() {
                joint[code] = (0..len).map(|j| w.prob(y[j], x[j])).product::<f64>() * scale;
            }
            for (i, table) in tables.iter_mut().enumerate() {
                let width = 2usize << i;
                let block = (1usize << len) / width;
                let row = &mut table[obs * width..(obs + 1) * width];
                for (p, slot) in row.iter_mut().enumerate() {
                    *slot = joint[p * block..(p + 1) * block].iter().sum();
                }
            }
        }
        Ok(BitChannelTables {
            n,
            outputs: m,
            tables,
        })
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn observations(&self) -> usize {
        self.tables[0].len() / 2
    }

    /// Observation index of a symbol vector.
    pub fn observation_index(&self, y: &[usize]) -> usize {
        y.iter().fold(0, |acc, &s| acc * self.outputs + s)
    }

    /// `(W^(i)(ȳ, prefix | 0), W^(i)(ȳ, prefix | 1))`, prefix given as
    /// `u_0 … u_{i−1}`.
    pub fn pair(&self, i: usize, obs: usize, prefix: &[u8]) -> (f64, f64) {
        debug_assert_eq!(prefix.len(), i);
        let p = prefix.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let width = 2usize << i;
        let t = &self.tables[i][obs * width..];
        (t[2 * p], t[2 * p + 1])
    }

    fn pairs(&self, i: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.tables[i].chunks_exact(2).map(|c| (c[0], c[1]))
    }

    /// `Z^(i) = Σ √(W^(i)(·|0) W^(i)(·|1))`.
    pub fn z(&self) -> Vec<f64> {
        (0..self.tables.len())
            .map(|i| {
                self.pairs(i)
                    .map(|(a, b)| (a * b).sqrt())
                    .collect::<Neumaier>()
                    .value()
                    .clamp(0.0, 1.0)
            })
            .collect()
    }

    /// `E |1/2 − P(U_i = 0 | ȳ, u_0^{i−1})|` under uniform `ū`.
    pub fn posterior_bias(&self) -> Vec<f64> {
        (0..self.tables.len())
            .map(|i| {
                self.pairs(i)
                    .map(|(a, b)| 0.25 * (a - b).abs())
                    .collect::<Neumaier>()
                    .value()
            })
            .collect()
    }
}

/// Exact profile by exhaustive enumeration, `n ≤ 3`.
pub fn z_profile_enum(w: &BinaryInputChannel, n: u32) -> Result<ReliabilityProfile> {
    let tables = BitChannelTables::new(w, n)?;
    Ok(ReliabilityProfile {
        n,
        channel: w.clone(),
        method: ProfileMethod::EnumExact,
        trials: 0,
        seed: None,
        z: tables.z(),
        stderr: None,
        clamped: 0,
    })
}

/// Exact posterior bias per index, `n ≤ 3`.
pub fn posterior_bias_enum(w: &BinaryInputChannel, n: u32) -> Result<Vec<f64>> {
    Ok(BitChannelTables::new(w, n)?.posterior_bias())
}

struct McBlock {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    clamped: u64,
}

/// Monte Carlo profile: all-zero input, decisions forced to zero, per-index
/// average of `exp(−Λ_i / 2)` clamped to `[0, 10]`.
pub fn z_profile_monte_carlo(w: &BinaryInputChannel, n: u32, trials: u64, seed: u64) -> Result<ReliabilityProfile> {
    if !w.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let t = TransformSpec::new(n)?;
    let len = t.len();
    let spec = CodeSpec::zero_frozen(t, IndexSet::full(len), w.clone())?;
    let forced = vec![0u8; len];
    let blocks = fold_blocks(
        trials,
        || ScEngine::new(n),
        |eng, range| {
            let mut acc = McBlock {
                sum: vec![0.0; len],
                sum_sq: vec![0.0; len],
                clamped: 0,
            };
            for trial in range {
                let mut rng = stream(seed, Purpose::Profile, trial);
                let y: Vec<usize> = (0..len).map(|_| w.sample(0, &mut rng)).collect();
                let tr = eng.sc_pass(&y, &spec, Rounding::Forced(&forced))?;
                for (i, &lam) in tr.llr.iter().enumerate() {
                    if lam.is_nan() {
                        return Err(Error::Inconsistent { index: i });
                    }
                    let mut s = (-0.5 * lam).exp();
                    if s > MC_CLAMP {
                        s = MC_CLAMP;
                        acc.clamped += 1;
                    }
                    acc.sum[i] += s;
                    acc.sum_sq[i] += s * s;
                }
            }
            Ok(acc)
        },
    )?;
    let mut sum = vec![Neumaier::default(); len];
    let mut sum_sq = vec![Neumaier::default(); len];
    let mut clamped = 0;
    for b in blocks {
        for i in 0..len {
            sum[i].add(b.sum[i]);
            sum_sq[i].add(b.sum_sq[i]);
        }
        clamped += b.clamped;
    }
    let tf = trials as f64;
    let mut z = Vec::with_capacity(len);
    let mut stderr = Vec::with_capacity(len);
    for i in 0..len {
        let mean = sum[i].value() / tf;
        let var = if trials > 1 {
            ((sum_sq[i].value() - tf * mean * mean) / (tf - 1.0)).max(0.0)
        } else {
            0.0
        };
        z.push(mean.clamp(0.0, 1.0));
        stderr.push((var / tf).sqrt());
    }
    Ok(ReliabilityProfile {
        n,
        channel: w.clone(),
        method: ProfileMethod::MonteCarlo,
        trials,
        seed: Some(seed),
        z,
        stderr: Some(stderr),
        clamped,
    })
}

/// Picks the cheapest exact method available, falling back to Monte Carlo.
pub fn z_profile_auto(w: &BinaryInputChannel, n: u32, trials: u64, seed: u64) -> Result<ReliabilityProfile> {
    match w.kind() {
        ChannelKind::Bec { epsilon } => z_profile_bec(epsilon, n),
        _ if n <= MAX_ENUM_EXPONENT => z_profile_enum(w, n),
        _ => z_profile_monte_carlo(w, n, trials, seed),
    }
}

fn by_reliability(z: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| match z[b].total_cmp(&z[a]) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
    idx
}

/// The `num_frozen` indices with the largest `z`, ties toward the smaller index.
pub fn select_frozen(z: &[f64], num_frozen: usize) -> Result<IndexSet> {
    if num_frozen > z.len() {
        return Err(Error::IndexOutOfRange {
            index: num_frozen,
            len: z.len(),
        });
    }
    Ok(IndexSet::new(by_reliability(z).into_iter().take(num_frozen)))
}

/// Frozen-set size `N − round(R N)` for rate `R`.
pub fn frozen_count_for_rate(len: usize, rate: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::domain("rate", rate, "[0, 1]"));
    }
    Ok(len - (rate * len as f64).round() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub beta: f64,
    pub delta_n: f64,
    pub rate_target: f64,
}

impl ConstructionParams {
    /// `δ_N = 2^{−N^β} / (2N)`.
    pub fn for_blocklength(beta: f64, n: u32, rate_target: f64) -> Result<Self> {
        let len = (1u64 << n) as f64;
        let delta_n = (-(len.powf(beta))).exp2() / (2.0 * len);
        ConstructionParams::new(beta, delta_n, rate_target)
    }

    pub fn new(beta: f64, delta_n: f64, rate_target: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 0.5) {
            return Err(Error::domain("beta", beta, "(0, 1/2)"));
        }
        if !(delta_n > 0.0 && delta_n <= 1.0) {
            return Err(Error::domain("delta_n", delta_n, "(0, 1]"));
        }
        if !(0.0..=1.0).contains(&rate_target) {
            return Err(Error::domain("rate_target", rate_target, "[0, 1]"));
        }
        Ok(ConstructionParams {
            beta,
            delta_n,
            rate_target,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// `{i : z_i ≥ 1 − 2δ²}`.
    Source,
    /// `{i : z_i ≥ δ}`.
    Channel,
}

pub fn select_frozen_threshold(z: &[f64], params: &ConstructionParams, mode: ThresholdMode) -> IndexSet {
    let d = params.delta_n;
    let threshold = match mode {
        ThresholdMode::Source => 1.0 - 2.0 * d * d,
        ThresholdMode::Channel => d,
    };
    IndexSet::new((0..z.len()).filter(|&i| z[i] >= threshold))
}

/// A pair of frozen sets with `small ⊆ large`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedFrozen {
    pub small: IndexSet,
    pub large: IndexSet,
    /// Indices of `large` that `select_frozen` on its own profile would not
    /// have chosen.
    pub forced: usize,
}

/// `small` from `z_small`; `large` tops `small` up with the largest remaining
/// values of `z_large`.
pub fn nested_frozen(z_small: &[f64], z_large: &[f64], num_small: usize, num_large: usize) -> Result<NestedFrozen> {
    if z_small.len() != z_large.len() {
        return Err(Error::LengthMismatch {
            expected: z_small.len(),
            actual: z_large.len(),
        });
    }
    if num_small > num_large {
        return Err(Error::Precondition(format!(
            "inner frozen size {num_small} exceeds outer size {num_large}"
        )));
    }
    let small = select_frozen(z_small, num_small)?;
    if num_large > z_large.len() {
        return Err(Error::IndexOutOfRange {
            index: num_large,
            len: z_large.len(),
        });
    }
    let mut large: Vec<usize> = small.iter().collect();
    for i in by_reliability(z_large) {
        if large.len() >= num_large {
            break;
        }
        if !small.contains(i) {
            large.push(i);
        }
    }
    let large = IndexSet::new(large);
    let natural = select_frozen(z_large, num_large)?;
    let forced = large.difference(&natural).len();
    Ok(NestedFrozen { small, large, forced })
}

/// Cumulative sums of sorted Bhattacharyya values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapTable {
    /// `Z̃^(0) ≤ … ≤ Z̃^(N−1)`.
    pub sorted_z: Vec<f64>,
    /// `m^(i) = Σ_{j<i} Z̃^(j)` for `i = 0..=N`.
    pub m: Vec<f64>,
    /// `M^(i) = Σ_{j ≥ N−i} √(2(1 − Z̃^(j)))` for `i = 0..=N`.
    #[serde(rename = "M")]
    pub big_m: Vec<f64>,
}

pub fn gap_table(z: &[f64]) -> GapTable {
    let mut sorted_z = z.to_vec();
    sorted_z.sort_by(f64::total_cmp);
    let len = sorted_z.len();
    let mut m = Vec::with_capacity(len + 1);
    let mut acc = Neumaier::default();
    m.push(0.0);
    for &v in &sorted_z {
        acc.add(v);
        m.push(acc.value());
    }
    let mut big_m = Vec::with_capacity(len + 1);
    let mut acc = Neumaier::default();
    big_m.push(0.0);
    for &v in sorted_z.iter().rev() {
        acc.add((2.0 * (1.0 - v)).max(0.0).sqrt());
        big_m.push(acc.value());
    }
    GapTable { sorted_z, m, big_m }
}

/// One sampled path of the channel tree process.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeProcessTrace {
    pub depth: u32,
    pub branch_bits: Vec<u8>,
    pub z_path: Vec<f64>,
    /// `W_0, …, W_depth`; erasure channels are represented by their scalar
    /// equivalent BEC(`Z_k`).
    pub channels: Vec<BinaryInputChannel>,
}

/// Samples fair branch bits and evolves `W_{k+1} = W_k^[B_{k+1}]`.
pub fn tree_process_sample(w0: &BinaryInputChannel, depth: u32, seed: u64, cap: usize) -> Result<TreeProcessTrace> {
    let mut rng = stream(seed, Purpose::Tree, 0);
    let branch_bits: Vec<u8> = (0..depth).map(|_| (rand::RngCore::next_u64(&mut rng) >> 63) as u8).collect();
    let mut channels = vec![w0.clone()];
    let mut z_path = vec![w0.bhattacharyya()];
    for &b in &branch_bits {
        let w = channels.last().unwrap();
        let next = match w.kind() {
            ChannelKind::Bec { epsilon } => {
                let e = if b == 0 { 2.0 * epsilon - epsilon * epsilon } else { epsilon * epsilon };
                BinaryInputChannel::bec(e.clamp(0.0, 1.0))?
            }
            _ if b == 0 => combine_minus(w, w, cap)?,
            _ => combine_plus(w, w, cap)?,
        };
        z_path.push(next.bhattacharyya());
        channels.push(next);
    }
    Ok(TreeProcessTrace {
        depth,
        branch_bits,
        z_path,
        channels,
    })
}

/// [`tree_process_sample`] with the default alphabet cap.
pub fn tree_process_default(w0: &BinaryInputChannel, depth: u32, seed: u64) -> Result<TreeProcessTrace> {
    tree_process_sample(w0, depth, seed, DEFAULT_ALPHABET_CAP)
}
