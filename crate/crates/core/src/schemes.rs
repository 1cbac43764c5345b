//! Nested polar codes for Wyner-Ziv, Gelfand-Pinsker, storage with defects
//! and the one-helper problem.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::{BitVector, IndexSet};
use crate::channel::{rates, BinaryInputChannel, ERASURE};
use crate::codec::{distortion, source_decode, symbols, CodeSpec, Metric, ScEngine, SourceModel};
use crate::construction::{nested_frozen, ReliabilityProfile};
use crate::rng::{stream, unit_draw, Purpose};
use crate::stats::Estimate;
use crate::transform::{extract, polar_transform, scatter, TransformSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Containment {
    /// `F_s ⊆ F_c`: Wyner-Ziv and one-helper.
    SourceInChannel,
    /// `F_c ⊆ F_s`: Gelfand-Pinsker and storage.
    ChannelInSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Wz,
    Gp,
    Storage,
    OneHelper,
}

/// A source code `F_s` and a channel code `F_c` on the same blocklength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestedCodeSpec {
    pub n: TransformSpec,
    pub f_s: IndexSet,
    pub f_c: IndexSet,
    pub containment: Containment,
    /// Metric channel of the source code.
    pub source_metric: BinaryInputChannel,
    /// Metric channel of the channel code.
    pub channel_metric: BinaryInputChannel,
    /// Indices added to the larger set only to enforce containment.
    pub forced: usize,
}

impl NestedCodeSpec {
    pub fn new(
        n: TransformSpec,
        f_s: IndexSet,
        f_c: IndexSet,
        containment: Containment,
        source_metric: BinaryInputChannel,
        channel_metric: BinaryInputChannel,
    ) -> Result<Self> {
        let spec = NestedCodeSpec {
            n,
            f_s,
            f_c,
            containment,
            source_metric,
            channel_metric,
            forced: 0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let len = self.n.len();
        for set in [&self.f_s, &self.f_c] {
            if let Some(max) = set.max() {
                if max >= len {
                    return Err(Error::IndexOutOfRange { index: max, len });
                }
            }
        }
        let ok = match self.containment {
            Containment::SourceInChannel => self.f_s.is_subset(&self.f_c),
            Containment::ChannelInSource => self.f_c.is_subset(&self.f_s),
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "frozen sets violate the declared containment {:?}",
                self.containment
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The message or coset positions, `F_c \ F_s` or `F_s \ F_c`.
    pub fn message_set(&self) -> IndexSet {
        match self.containment {
            Containment::SourceInChannel => self.f_c.difference(&self.f_s),
            Containment::ChannelInSource => self.f_s.difference(&self.f_c),
        }
    }

    pub fn message_len(&self) -> usize {
        self.message_set().len()
    }

    /// `|message set| / N`.
    pub fn rate(&self) -> f64 {
        self.message_len() as f64 / self.len() as f64
    }

    fn inner(&self) -> &IndexSet {
        match self.containment {
            Containment::SourceInChannel => &self.f_s,
            Containment::ChannelInSource => &self.f_c,
        }
    }

    fn outer(&self) -> &IndexSet {
        match self.containment {
            Containment::SourceInChannel => &self.f_c,
            Containment::ChannelInSource => &self.f_s,
        }
    }

    /// Values on the outer frozen set: 0 on the inner set, `message` on the rest.
    fn outer_values(&self, message: &BitVector) -> Result<BitVector> {
        let msg_set = self.message_set();
        if message.len() != msg_set.len() {
            return Err(Error::LengthMismatch {
                expected: msg_set.len(),
                actual: message.len(),
            });
        }
        let mut full = BitVector::zeros(self.len());
        scatter(&mut full, &msg_set, message)?;
        extract(&full, self.outer())
    }

    fn source_spec(&self, frozen_values: BitVector) -> Result<CodeSpec> {
        CodeSpec::new(self.n, self.f_s.clone(), frozen_values, self.source_metric.clone())
    }

    fn channel_spec(&self, frozen_values: BitVector) -> Result<CodeSpec> {
        CodeSpec::new(self.n, self.f_c.clone(), frozen_values, self.channel_metric.clone())
    }

    fn zero_inner_spec(&self) -> Result<CodeSpec> {
        let k = self.inner().len();
        match self.containment {
            Containment::SourceInChannel => self.source_spec(BitVector::zeros(k)),
            Containment::ChannelInSource => self.channel_spec(BitVector::zeros(k)),
        }
    }
}

/// Frozen-set sizes `round(N x)` clamped to `[0, N]`.
fn frozen_size(len: usize, fraction: f64) -> usize {
    ((fraction * len as f64).round().max(0.0) as usize).min(len)
}

fn same_exponent(a: &ReliabilityProfile, b: &ReliabilityProfile) -> Result<TransformSpec> {
    if a.n != b.n {
        return Err(Error::Precondition(format!("profiles have exponents {} and {}", a.n, b.n)));
    }
    TransformSpec::new(a.n)
}

fn nest(
    containment: Containment,
    source: &ReliabilityProfile,
    channel: &ReliabilityProfile,
    k_s: usize,
    k_c: usize,
) -> Result<NestedCodeSpec> {
    let n = same_exponent(source, channel)?;
    let (f_s, f_c, forced) = match containment {
        Containment::SourceInChannel => {
            let nf = nested_frozen(&source.z, &channel.z, k_s, k_c.max(k_s))?;
            (nf.small, nf.large, nf.forced)
        }
        Containment::ChannelInSource => {
            let nf = nested_frozen(&channel.z, &source.z, k_c, k_s.max(k_c))?;
            (nf.large, nf.small, nf.forced)
        }
    };
    let mut spec = NestedCodeSpec::new(
        n,
        f_s,
        f_c,
        containment,
        source.channel.clone(),
        channel.channel.clone(),
    )?;
    spec.forced = forced;
    Ok(spec)
}

/// Wyner-Ziv: `|F_s| = N(h2(D) − ε/2)` from a BSC(D) profile and
/// `|F_c| = N(h2(D∗p) + ε/2)` from a BSC(D∗p) profile.
pub fn design_wz(d: f64, p: f64, margin: f64, source: &ReliabilityProfile, channel: &ReliabilityProfile) -> Result<NestedCodeSpec> {
    let len = source.len();
    let k_s = frozen_size(len, rates::binary_entropy(d)? - margin / 2.0);
    let k_c = frozen_size(len, rates::binary_entropy(rates::star(d, p)?)? + margin / 2.0);
    nest(Containment::SourceInChannel, source, channel, k_s, k_c)
}

/// Gelfand-Pinsker: `|F_s| = N(h2(D) − ε/2)` from BSC(D) and
/// `|F_c| = N(h2(p) + ε/2)` from BSC(p).
pub fn design_gp(d: f64, p: f64, margin: f64, source: &ReliabilityProfile, channel: &ReliabilityProfile) -> Result<NestedCodeSpec> {
    let len = source.len();
    let k_s = frozen_size(len, rates::binary_entropy(d)? - margin / 2.0);
    let k_c = frozen_size(len, rates::binary_entropy(p)? + margin / 2.0);
    nest(Containment::ChannelInSource, source, channel, k_s, k_c)
}

/// Storage: `|F_s| = N(1 − p(1 − h2(D)) − ε/2)` from BSEC(p, D) and
/// `|F_c| = N(h2(D) + ε/2)` from BSC(D).
pub fn design_storage(p: f64, d: f64, margin: f64, source: &ReliabilityProfile, channel: &ReliabilityProfile) -> Result<NestedCodeSpec> {
    let len = source.len();
    let h = rates::binary_entropy(d)?;
    let k_s = frozen_size(len, 1.0 - p * (1.0 - h) - margin / 2.0);
    let k_c = frozen_size(len, h + margin / 2.0);
    nest(Containment::ChannelInSource, source, channel, k_s, k_c)
}

/// One-helper: the helper's source code `|F_s| = N(h2(D) − ε/2)` from BSC(D)
/// and the syndrome set `|F| = N(h2(D∗p) + ε/2)` from BSC(D∗p).
pub fn design_helper(d: f64, p: f64, margin: f64, source: &ReliabilityProfile, channel: &ReliabilityProfile) -> Result<NestedCodeSpec> {
    design_wz(d, p, margin, source, channel)
}

fn require(containment: Containment, nested: &NestedCodeSpec) -> Result<()> {
    nested.validate()?;
    if nested.containment != containment {
        return Err(Error::Precondition(format!(
            "scheme needs containment {containment:?}, spec declares {:?}",
            nested.containment
        )));
    }
    Ok(())
}

fn bits_of(y: &[usize]) -> Result<BitVector> {
    if let Some(&s) = y.iter().find(|&&s| s > 1) {
        return Err(Error::AlphabetMismatch { symbol: s, alphabet: 2 });
    }
    Ok(BitVector::from_bits(&y.iter().map(|&s| s as u8).collect::<Vec<_>>()))
}

/// Source-encodes `y` with `F_s` frozen to 0 and returns `ū_{F_c \ F_s}`.
pub fn wz_encode(engine: &mut ScEngine, y: &[usize], nested: &NestedCodeSpec, rng: &mut dyn RngCore) -> Result<BitVector> {
    require(Containment::SourceInChannel, nested)?;
    let spec = nested.zero_inner_spec()?;
    let trace = engine.sc_pass(y, &spec, crate::codec::Rounding::Random(rng))?;
    Ok(trace.extract(&nested.message_set()))
}

/// Channel-decodes the side information with `F_c` frozen to `(0, v̄)` and
/// returns `x̂ = û H_n`.
pub fn wz_decode(engine: &mut ScEngine, y_side: &[usize], v: &BitVector, nested: &NestedCodeSpec) -> Result<BitVector> {
    require(Containment::SourceInChannel, nested)?;
    let spec = nested.channel_spec(nested.outer_values(v)?)?;
    let trace = engine.sc_pass(y_side, &spec, crate::codec::Rounding::Map)?;
    polar_transform(&trace.decisions, nested.n)
}

/// Source-encodes the state with `F_c` frozen to 0 and the message on
/// `F_s \ F_c`; returns `x̄ = s̄ ⊕ s̄'`.
pub fn gp_encode(
    engine: &mut ScEngine,
    s: &[usize],
    message: &BitVector,
    nested: &NestedCodeSpec,
    rng: &mut dyn RngCore,
) -> Result<BitVector> {
    require(Containment::ChannelInSource, nested)?;
    let spec = nested.source_spec(nested.outer_values(message)?)?;
    let info = engine.source_encode(s, &spec, rng)?;
    let s_prime = source_decode(&info, &spec)?;
    Ok(&bits_of(s)? ^ &s_prime)
}

/// Decodes `ū` with `F_c` frozen to 0 and reads the message on `F_s \ F_c`.
pub fn gp_decode(engine: &mut ScEngine, y: &[usize], nested: &NestedCodeSpec) -> Result<BitVector> {
    require(Containment::ChannelInSource, nested)?;
    decode_message(engine, y, nested)
}

fn decode_message(engine: &mut ScEngine, y: &[usize], nested: &NestedCodeSpec) -> Result<BitVector> {
    let spec = nested.zero_inner_spec()?;
    let trace = engine.sc_pass(y, &spec, crate::codec::Rounding::Map)?;
    Ok(trace.extract(&nested.message_set()))
}

/// Compresses the ternary state under the erasure-source metric and returns
/// the reconstruction to be written.
pub fn storage_write(
    engine: &mut ScEngine,
    state: &[usize],
    message: &BitVector,
    nested: &NestedCodeSpec,
    rng: &mut dyn RngCore,
) -> Result<BitVector> {
    require(Containment::ChannelInSource, nested)?;
    if let Some(&s) = state.iter().find(|&&s| s > ERASURE) {
        return Err(Error::AlphabetMismatch { symbol: s, alphabet: 3 });
    }
    let spec = nested.source_spec(nested.outer_values(message)?)?;
    let info = engine.source_encode(state, &spec, rng)?;
    source_decode(&info, &spec)
}

/// Decodes the read-out word with `F_c` frozen to 0.
pub fn storage_read(engine: &mut ScEngine, y: &[usize], nested: &NestedCodeSpec) -> Result<BitVector> {
    require(Containment::ChannelInSource, nested)?;
    decode_message(engine, y, nested)
}

/// The helper's source code: compressed bits and reconstruction of `ȳ'`.
pub fn helper_quantize(
    engine: &mut ScEngine,
    y_prime: &[usize],
    source: &CodeSpec,
    rng: &mut dyn RngCore,
) -> Result<(BitVector, BitVector)> {
    let bits = engine.source_encode(y_prime, source, rng)?;
    let x = source_decode(&bits, source)?;
    Ok((bits, x))
}

/// `(ȳ H_n⁻¹)_F`.
pub fn helper_syndrome(y: &BitVector, frozen: &IndexSet) -> Result<BitVector> {
    let t = TransformSpec::for_len(y.len())?;
    extract(&polar_transform(y, t)?, frozen)
}

/// Channel-decodes the helper's reconstruction with the syndrome as frozen
/// values and returns `ŷ = û H_n`.
pub fn helper_decode(engine: &mut ScEngine, x_prime: &BitVector, syndrome: &BitVector, channel: &CodeSpec) -> Result<BitVector> {
    let spec = channel.with_frozen_values(syndrome.clone())?;
    let trace = engine.sc_pass(&symbols(x_prime), &spec, crate::codec::Rounding::Map)?;
    polar_transform(&trace.decisions, spec.transform())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeResult {
    pub scheme: Scheme,
    pub n: u32,
    /// Encoder rate in bits per symbol.
    pub rate_encoder: f64,
    /// Helper rate, one-helper only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_helper: Option<f64>,
    /// Distortion: WZ against the source conditional on decoding success,
    /// one-helper at the helper.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Estimate>,
    pub block_error: Estimate,
    /// GP: `weight(x̄)/N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_weight: Option<Estimate>,
    /// Storage: fraction of stuck cells disagreeing with the stored word.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stuck_disagreement: Option<Estimate>,
    /// Containment top-up count.
    pub nesting_forced: usize,
    pub trials: u64,
    pub master_seed: u64,
}

struct Outcome {
    error: bool,
    distortion: Option<f64>,
    weight: Option<f64>,
    stuck: Option<f64>,
}

fn random_bits(k: usize, rng: &mut dyn RngCore) -> BitVector {
    BitVector::from_bits(&(0..k).map(|_| (rng.next_u64() >> 63) as u8).collect::<Vec<_>>())
}

fn flip_with(y: &BitVector, p: f64, rng: &mut dyn RngCore) -> BitVector {
    BitVector::from_bools(y.iter().map(|b| (b == 1) != (unit_draw(rng) < p)))
}

fn summarize(
    scheme: Scheme,
    nested: &NestedCodeSpec,
    rate_encoder: f64,
    rate_helper: Option<f64>,
    outcomes: Vec<Outcome>,
    trials: u64,
    master_seed: u64,
) -> SchemeResult {
    let errors = outcomes.iter().filter(|o| o.error).count() as u64;
    let collect = |f: &dyn Fn(&Outcome) -> Option<f64>| {
        let xs: Vec<f64> = outcomes.iter().filter_map(f).collect();
        if outcomes.iter().all(|o| f(o).is_none()) {
            None
        } else {
            Some(Estimate::from_samples(&xs))
        }
    };
    SchemeResult {
        scheme,
        n: nested.n.exponent(),
        rate_encoder,
        rate_helper,
        distortion: collect(&|o| o.distortion),
        block_error: Estimate::proportion(errors, trials),
        input_weight: collect(&|o| o.weight),
        stuck_disagreement: collect(&|o| o.stuck),
        nesting_forced: nested.forced,
        trials,
        master_seed,
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    Ok(())
}

/// Binary symmetric source `ȳ`, side information `ȳ' = ȳ ⊕ Ber(p)`.
pub fn simulate_wz(nested: &NestedCodeSpec, p: f64, trials: u64, master_seed: u64) -> Result<SchemeResult> {
    check_trials(trials)?;
    require(Containment::SourceInChannel, nested)?;
    let len = nested.len();
    let src = nested.zero_inner_spec()?;
    let outcomes = crate::codec::map_trials(
        trials,
        || ScEngine::new(nested.n.exponent()),
        |eng, t| {
            let y = SourceModel::Bss.sample(len, &mut stream(master_seed, Purpose::Source, t));
            let yb = bits_of(&y)?;
            let side = flip_with(&yb, p, &mut stream(master_seed, Purpose::Noise, t));
            let mut rng = stream(master_seed, Purpose::Rounding, t);
            let trace = eng.sc_pass(&y, &src, crate::codec::Rounding::Random(&mut rng))?;
            let x = polar_transform(&trace.decisions, nested.n)?;
            let v = trace.extract(&nested.message_set());
            let x_hat = match wz_decode(eng, &symbols(&side), &v, nested) {
                Ok(x_hat) => x_hat,
                Err(Error::Inconsistent { .. }) => {
                    return Ok(Outcome {
                        error: true,
                        distortion: None,
                        weight: None,
                        stuck: None,
                    })
                }
                Err(e) => return Err(e),
            };
            let error = x_hat != x;
            let distortion = if error {
                None
            } else {
                Some(distortion(&y, &symbols(&x_hat), Metric::Hamming)? as f64 / len as f64)
            };
            Ok(Outcome {
                error,
                distortion,
                weight: None,
                stuck: None,
            })
        },
    )?;
    Ok(summarize(Scheme::Wz, nested, nested.rate(), None, outcomes, trials, master_seed))
}

/// Uniform state, uniform message, channel `y = x ⊕ s ⊕ Ber(p)`.
pub fn simulate_gp(nested: &NestedCodeSpec, p: f64, trials: u64, master_seed: u64) -> Result<SchemeResult> {
    check_trials(trials)?;
    require(Containment::ChannelInSource, nested)?;
    let len = nested.len();
    let k = nested.message_len();
    let outcomes = crate::codec::map_trials(
        trials,
        || ScEngine::new(nested.n.exponent()),
        |eng, t| {
            let s = SourceModel::Bss.sample(len, &mut stream(master_seed, Purpose::Source, t));
            let msg = random_bits(k, &mut stream(master_seed, Purpose::Message, t));
            let mut rng = stream(master_seed, Purpose::Rounding, t);
            let x = gp_encode(eng, &s, &msg, nested, &mut rng)?;
            let weight = x.weight() as f64 / len as f64;
            let y = flip_with(&(&x ^ &bits_of(&s)?), p, &mut stream(master_seed, Purpose::Noise, t));
            let error = match gp_decode(eng, &symbols(&y), nested) {
                Ok(m) => m != msg,
                Err(Error::Inconsistent { .. }) => true,
                Err(e) => return Err(e),
            };
            Ok(Outcome {
                error,
                distortion: None,
                weight: Some(weight),
                stuck: None,
            })
        },
    )?;
    Ok(summarize(Scheme::Gp, nested, nested.rate(), None, outcomes, trials, master_seed))
}

/// Cells stuck with probability `p` (at a uniform value), free cells read
/// back through BSC(D).
pub fn simulate_storage(nested: &NestedCodeSpec, p: f64, d: f64, trials: u64, master_seed: u64) -> Result<SchemeResult> {
    check_trials(trials)?;
    require(Containment::ChannelInSource, nested)?;
    let len = nested.len();
    let k = nested.message_len();
    let model = SourceModel::Erasure { p };
    let outcomes = crate::codec::map_trials(
        trials,
        || ScEngine::new(nested.n.exponent()),
        |eng, t| {
            let state = model.sample(len, &mut stream(master_seed, Purpose::Source, t));
            let msg = random_bits(k, &mut stream(master_seed, Purpose::Message, t));
            let mut rng = stream(master_seed, Purpose::Rounding, t);
            let x = storage_write(eng, &state, &msg, nested, &mut rng)?;
            let mut noise = stream(master_seed, Purpose::Noise, t);
            let mut stuck = 0usize;
            let mut disagree = 0usize;
            let read: Vec<usize> = state
                .iter()
                .zip(x.iter())
                .map(|(&s, b)| {
                    if s == ERASURE {
                        (b ^ u8::from(unit_draw(&mut noise) < d)) as usize
                    } else {
                        stuck += 1;
                        disagree += usize::from(s != b as usize);
                        s
                    }
                })
                .collect();
            let error = match storage_read(eng, &read, nested) {
                Ok(m) => m != msg,
                Err(Error::Inconsistent { .. }) => true,
                Err(e) => return Err(e),
            };
            Ok(Outcome {
                error,
                distortion: None,
                weight: None,
                stuck: (stuck > 0).then(|| disagree as f64 / stuck as f64),
            })
        },
    )?;
    Ok(summarize(Scheme::Storage, nested, nested.rate(), None, outcomes, trials, master_seed))
}

/// Encoder sends `(ȳ H_n)_{F_c}`; the helper quantizes `ȳ' = ȳ ⊕ Ber(p)`
/// with `F_s`; the decoder recovers `ȳ`.
pub fn simulate_helper(nested: &NestedCodeSpec, p: f64, trials: u64, master_seed: u64) -> Result<SchemeResult> {
    check_trials(trials)?;
    nested.validate()?;
    let len = nested.len();
    let source = nested.source_spec(BitVector::zeros(nested.f_s.len()))?;
    let channel = nested.channel_spec(BitVector::zeros(nested.f_c.len()))?;
    let outcomes = crate::codec::map_trials(
        trials,
        || ScEngine::new(nested.n.exponent()),
        |eng, t| {
            let y = bits_of(&SourceModel::Bss.sample(len, &mut stream(master_seed, Purpose::Source, t)))?;
            let y_prime = flip_with(&y, p, &mut stream(master_seed, Purpose::Noise, t));
            let mut rng = stream(master_seed, Purpose::Rounding, t);
            let (_, x_prime) = helper_quantize(eng, &symbols(&y_prime), &source, &mut rng)?;
            let dist = distortion(&symbols(&y_prime), &symbols(&x_prime), Metric::Hamming)? as f64 / len as f64;
            let syndrome = helper_syndrome(&y, &nested.f_c)?;
            let error = match helper_decode(eng, &x_prime, &syndrome, &channel) {
                Ok(y_hat) => y_hat != y,
                Err(Error::Inconsistent { .. }) => true,
                Err(e) => return Err(e),
            };
            Ok(Outcome {
                error,
                distortion: Some(dist),
                weight: None,
                stuck: None,
            })
        },
    )?;
    let rate_encoder = nested.f_c.len() as f64 / len as f64;
    let rate_helper = 1.0 - nested.f_s.len() as f64 / len as f64;
    Ok(summarize(
        Scheme::OneHelper,
        nested,
        rate_encoder,
        Some(rate_helper),
        outcomes,
        trials,
        master_seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::z_profile_bec;

    fn bsc_profile(d: f64, n: u32) -> ReliabilityProfile {
        // Stand-in ordering for unit tests; the real constructions use the
        // channel's own profile.
        let mut p = z_profile_bec(0.5, n).unwrap();
        p.channel = BinaryInputChannel::bsc(d).unwrap();
        p
    }

    #[test]
    fn containment_is_validated() {
        let t = TransformSpec::new(2).unwrap();
        let w = BinaryInputChannel::bsc(0.1).unwrap();
        assert!(NestedCodeSpec::new(t, IndexSet::new([0, 1]), IndexSet::new([0]), Containment::SourceInChannel, w.clone(), w.clone()).is_err());
        let ok = NestedCodeSpec::new(t, IndexSet::new([0]), IndexSet::new([0, 1]), Containment::SourceInChannel, w.clone(), w).unwrap();
        assert_eq!(ok.message_set().as_slice(), &[1]);
        assert_eq!(ok.rate(), 0.25);
    }

    #[test]
    fn equal_sets_give_empty_message() {
        let n = 5;
        let p = bsc_profile(0.11, n);
        let nested = nest(Containment::SourceInChannel, &p, &p, 12, 12).unwrap();
        assert_eq!(nested.message_len(), 0);
        let mut eng = ScEngine::new(n);
        let y = vec![0usize; 32];
        let v = wz_encode(&mut eng, &y, &nested, &mut stream(1, Purpose::Rounding, 0)).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn wz_encoding_is_reproducible() {
        let n = 6;
        let nested = nest(Containment::SourceInChannel, &bsc_profile(0.11, n), &bsc_profile(0.3, n), 20, 40).unwrap();
        let y = SourceModel::Bss.sample(64, &mut stream(2, Purpose::Source, 0));
        let mut eng = ScEngine::new(n);
        let a = wz_encode(&mut eng, &y, &nested, &mut stream(2, Purpose::Rounding, 0)).unwrap();
        let b = wz_encode(&mut eng, &y, &nested, &mut stream(2, Purpose::Rounding, 0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
    }

    #[test]
    fn gp_noiseless_recovers_message() {
        let n = 6;
        let src = bsc_profile(0.25, n);
        let mut ch = z_profile_bec(0.5, n).unwrap();
        ch.channel = BinaryInputChannel::bsc(0.0).unwrap();
        let nested = nest(Containment::ChannelInSource, &src, &ch, 40, 10).unwrap();
        let mut eng = ScEngine::new(n);
        for t in 0..20 {
            let s = SourceModel::Bss.sample(64, &mut stream(5, Purpose::Source, t));
            let msg = random_bits(nested.message_len(), &mut stream(5, Purpose::Message, t));
            let x = gp_encode(&mut eng, &s, &msg, &nested, &mut stream(5, Purpose::Rounding, t)).unwrap();
            let y = &x ^ &bits_of(&s).unwrap();
            assert_eq!(gp_decode(&mut eng, &symbols(&y), &nested).unwrap(), msg);
        }
    }

    #[test]
    fn syndrome_examples() {
        let f = IndexSet::new([0, 1, 2, 4]);
        assert_eq!(helper_syndrome(&BitVector::zeros(8), &f).unwrap().weight(), 0);
        // A codeword with zero frozen part leaves the syndrome unchanged.
        let mut u = BitVector::zeros(8);
        u.set(7, 1);
        u.set(5, 1);
        let c = polar_transform(&u, TransformSpec::new(3).unwrap()).unwrap();
        let y = BitVector::from_bits(&[1, 0, 0, 1, 1, 1, 0, 0]);
        assert_eq!(helper_syndrome(&(&y ^ &c), &f).unwrap(), helper_syndrome(&y, &f).unwrap());
    }

    #[test]
    fn wrong_containment_rejected() {
        let n = 4;
        let p = bsc_profile(0.1, n);
        let nested = nest(Containment::ChannelInSource, &p, &p, 8, 4).unwrap();
        let mut eng = ScEngine::new(n);
        assert!(wz_encode(&mut eng, &[0; 16], &nested, &mut stream(0, Purpose::Rounding, 0)).is_err());
    }
}
