use std::ops::Range;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distortion, source_decode, symbols, CodeSpec, Metric, ScEngine};
use crate::bits::BitVector;
use crate::channel::{ChannelKind, ERASURE};
use crate::rng::{stream, unit_draw, Purpose};
use crate::stats::{Estimate, Neumaier};
use crate::{Error, Result};

/// Trials per scheduling block. Blocks are the unit of parallel work and
/// their results are combined in block order, so output does not depend on
/// the worker count.
pub(crate) const BLOCK: u64 = 64;

/// Runs `per_block` over consecutive trial ranges in parallel and returns the
/// block results in order.
pub(crate) fn fold_blocks<A, S, I, F>(trials: u64, init: I, per_block: F) -> Result<Vec<A>>
where
    A: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, Range<u64>) -> Result<A> + Sync,
{
    let blocks = trials.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut state = init();
            per_block(&mut state, b * BLOCK..((b + 1) * BLOCK).min(trials))
        })
        .collect()
}

/// Per-trial values in trial order.
pub(crate) fn map_trials<T, S, I, F>(trials: u64, init: I, per_trial: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, u64) -> Result<T> + Sync,
{
    let blocks = fold_blocks(trials, init, |s, r| r.map(|t| per_trial(s, t)).collect::<Result<Vec<T>>>())?;
    Ok(blocks.into_iter().flatten().collect())
}

/// Source distributions for rate-distortion experiments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SourceModel {
    /// Binary symmetric source.
    Bss,
    /// Ternary source: `0` and `1` each with probability `p/2`, `∗` otherwise.
    Erasure { p: f64 },
}

impl SourceModel {
    pub fn metric(&self) -> Metric {
        match self {
            SourceModel::Bss => Metric::Hamming,
            SourceModel::Erasure { .. } => Metric::ErasureSource,
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<usize> {
        match *self {
            SourceModel::Bss => (0..len).map(|_| (rng.next_u64() >> 63) as usize).collect(),
            SourceModel::Erasure { p } => (0..len)
                .map(|_| {
                    let t = unit_draw(rng);
                    if t < p / 2.0 {
                        0
                    } else if t < p {
                        1
                    } else {
                        ERASURE
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    /// `R_N = 1 − |F|/N`.
    pub rate: f64,
    /// Per-symbol distortion `D_N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Estimate>,
    /// Block error probability `P_B`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_error: Option<Estimate>,
    pub trials: u64,
    pub master_seed: u64,
}

/// Per-trial normalized distortions of the Standard Model encoder.
pub(crate) fn rd_samples(spec: &CodeSpec, source: SourceModel, trials: u64, master_seed: u64) -> Result<Vec<f64>> {
    let len = spec.len();
    let metric = source.metric();
    map_trials(
        trials,
        || ScEngine::for_spec(spec),
        |eng, t| {
            let y = source.sample(len, &mut stream(master_seed, Purpose::Source, t));
            let mut rng = stream(master_seed, Purpose::Rounding, t);
            let info = eng.source_encode(&y, spec, &mut rng)?;
            let x = source_decode(&info, spec)?;
            Ok(distortion(&y, &symbols(&x), metric)? as f64 / len as f64)
        },
    )
}

/// Average distortion of SC encoding with randomized rounding over i.i.d.
/// source words.
pub fn measure_rd(spec: &CodeSpec, source: SourceModel, trials: u64, master_seed: u64) -> Result<ExperimentResult> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let samples = rd_samples(spec, source, trials, master_seed)?;
    Ok(ExperimentResult {
        rate: spec.rate(),
        distortion: Some(Estimate::from_samples(&samples)),
        block_error: None,
        trials,
        master_seed,
    })
}

/// Block error rate of SC decoding with uniformly random messages, the
/// transmission channel being the code's metric channel.
pub fn measure_bler(spec: &CodeSpec, trials: u64, master_seed: u64) -> Result<ExperimentResult> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let ch = spec.channel();
    let k = spec.info_len();
    let errors = map_trials(
        trials,
        || ScEngine::for_spec(spec),
        |eng, t| {
            let mut mrng = stream(master_seed, Purpose::Message, t);
            let msg = BitVector::from_bits(&(0..k).map(|_| (mrng.next_u64() >> 63) as u8).collect::<Vec<_>>());
            let x = source_decode(&msg, spec)?;
            let mut nrng = stream(master_seed, Purpose::Noise, t);
            let y: Vec<usize> = x.iter().map(|b| ch.sample(b, &mut nrng)).collect();
            let decoded = match eng.channel_decode(&y, spec) {
                Ok(d) => d,
                Err(Error::Inconsistent { .. }) => return Ok(true),
                Err(e) => return Err(e),
            };
            Ok(decoded != msg)
        },
    )?;
    let count = errors.iter().filter(|&&e| e).count() as u64;
    Ok(ExperimentResult {
        rate: spec.rate(),
        distortion: None,
        block_error: Some(Estimate::proportion(count, trials)),
        trials,
        master_seed,
    })
}

/// Empirical statistics of the quantization error `ȳ ⊕ x̄`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantNoiseStats {
    /// Design distortion `D` of the BSC metric.
    pub design: f64,
    /// Per-position frequency of a 1 in the error.
    pub freq: Vec<f64>,
    /// Per-position frequency of a 1 at both `i` and `i + 1`.
    pub pair_freq: Vec<f64>,
    /// `Σ_i (c_i − T D)² / (T D (1 − D))` against i.i.d. Ber(D); NaN when degenerate.
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// Largest `|freq_i − D|`.
    pub max_deviation: f64,
    /// Set when `D = 0`; source words are then drawn from the code itself.
    pub degenerate: bool,
    pub trials: u64,
    pub master_seed: u64,
}

pub fn quant_noise_stats(spec: &CodeSpec, trials: u64, master_seed: u64) -> Result<QuantNoiseStats> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    let d = match spec.channel().kind() {
        ChannelKind::Bsc { d } => d,
        _ => return Err(Error::Precondition("quantization noise statistics need a BSC metric".into())),
    };
    let len = spec.len();
    let degenerate = d == 0.0;
    let k = spec.info_len();
    let blocks = fold_blocks(
        trials,
        || ScEngine::for_spec(spec),
        |eng, range| {
            let mut ones = vec![0u64; len];
            let mut pairs = vec![0u64; len.saturating_sub(1)];
            for t in range {
                let mut srng = stream(master_seed, Purpose::Source, t);
                let y = if degenerate {
                    let info = BitVector::from_bits(&(0..k).map(|_| (srng.next_u64() >> 63) as u8).collect::<Vec<_>>());
                    symbols(&source_decode(&info, spec)?)
                } else {
                    SourceModel::Bss.sample(len, &mut srng)
                };
                let mut rng = stream(master_seed, Purpose::Rounding, t);
                let info = eng.source_encode(&y, spec, &mut rng)?;
                let x = source_decode(&info, spec)?;
                let e: Vec<u8> = y.iter().zip(x.iter()).map(|(&a, b)| (a as u8) ^ b).collect();
                for i in 0..len {
                    ones[i] += e[i] as u64;
                    if i + 1 < len {
                        pairs[i] += (e[i] & e[i + 1]) as u64;
                    }
                }
            }
            Ok((ones, pairs))
        },
    )?;
    let mut ones = vec![0u64; len];
    let mut pairs = vec![0u64; len.saturating_sub(1)];
    for (o, p) in blocks {
        ones.iter_mut().zip(o).for_each(|(a, b)| *a += b);
        pairs.iter_mut().zip(p).for_each(|(a, b)| *a += b);
    }
    let t = trials as f64;
    let freq: Vec<f64> = ones.iter().map(|&c| c as f64 / t).collect();
    let pair_freq = pairs.iter().map(|&c| c as f64 / t).collect();
    let chi_square = if degenerate {
        f64::NAN
    } else {
        let var = t * d * (1.0 - d);
        ones.iter()
            .map(|&c| (c as f64 - t * d).powi(2) / var)
            .collect::<Neumaier>()
            .value()
    };
    let max_deviation = freq.iter().map(|f| (f - d).abs()).fold(0.0, f64::max);
    Ok(QuantNoiseStats {
        design: d,
        freq,
        pair_freq,
        chi_square,
        degrees_of_freedom: len,
        max_deviation,
        degenerate,
        trials,
        master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::IndexSet;
    use crate::channel::BinaryInputChannel;
    use crate::transform::TransformSpec;

    fn bsc_spec(n: u32, frozen: IndexSet, d: f64) -> CodeSpec {
        CodeSpec::zero_frozen(TransformSpec::new(n).unwrap(), frozen, BinaryInputChannel::bsc(d).unwrap()).unwrap()
    }

    #[test]
    fn single_trial_is_reproducible() {
        let s = bsc_spec(6, IndexSet::new(0..20), 0.11);
        let a = measure_rd(&s, SourceModel::Bss, 1, 42).unwrap();
        let b = measure_rd(&s, SourceModel::Bss, 1, 42).unwrap();
        assert_eq!(a, b);
        assert!(measure_rd(&s, SourceModel::Bss, 0, 42).is_err());
    }

    #[test]
    fn all_frozen_code_never_errs() {
        let s = bsc_spec(5, IndexSet::full(32), 0.11);
        let r = measure_bler(&s, 200, 1).unwrap();
        assert_eq!(r.block_error.unwrap().mean, 0.0);
    }

    #[test]
    fn noiseless_channel_never_errs() {
        let s = bsc_spec(6, IndexSet::new(0..10), 0.0);
        let r = measure_bler(&s, 200, 1).unwrap();
        assert_eq!(r.block_error.unwrap().mean, 0.0);
    }

    #[test]
    fn degenerate_quantization_noise_is_zero() {
        let s = bsc_spec(6, IndexSet::new(0..30), 0.0);
        let q = quant_noise_stats(&s, 64, 3).unwrap();
        assert!(q.degenerate);
        assert!(q.freq.iter().all(|&f| f == 0.0));
    }

    #[test]
    fn erasure_source_frequencies() {
        let mut rng = stream(1, Purpose::Source, 0);
        let y = SourceModel::Erasure { p: 0.25 }.sample(200_000, &mut rng);
        let erased = y.iter().filter(|&&s| s == ERASURE).count() as f64 / 2e5;
        let ones = y.iter().filter(|&&s| s == 1).count() as f64 / 2e5;
        assert!((erased - 0.75).abs() < 0.005);
        assert!((ones - 0.125).abs() < 0.005);
    }
}
