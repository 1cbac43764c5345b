//! Successive cancellation over the polar factor graph, used as a MAP
//! channel decoder and as a source encoder with randomized rounding.

mod experiment;
mod gauge;
mod payload;
mod sc;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::{BitVector, IndexSet};
use crate::channel::{BinaryInputChannel, ERASURE};
use crate::transform::{polar_transform, TransformSpec};
use crate::{Error, Result};

pub use experiment::{
    measure_bler, measure_rd, quant_noise_stats, ExperimentResult, QuantNoiseStats, SourceModel,
};
pub(crate) use experiment::{fold_blocks, map_trials};
pub use gauge::{coupled_distortions, gauge_check, gauge_shift, GaugeReport};
pub use payload::{decode_payload, encode_payload, Payload};
pub use sc::{check_node, ScEngine};

/// A polar code: frozen set, frozen values and the metric channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodeSpecFile", into = "CodeSpecFile")]
pub struct CodeSpec {
    transform: TransformSpec,
    frozen: IndexSet,
    frozen_values: BitVector,
    channel: BinaryInputChannel,
    profile: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CodeSpecFile {
    n: TransformSpec,
    frozen: IndexSet,
    frozen_values: BitVector,
    channel: BinaryInputChannel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    profile: Option<String>,
}

impl TryFrom<CodeSpecFile> for CodeSpec {
    type Error = Error;
    fn try_from(f: CodeSpecFile) -> Result<Self> {
        let mut spec = CodeSpec::new(f.n, f.frozen, f.frozen_values, f.channel)?;
        spec.profile = f.profile;
        Ok(spec)
    }
}

impl From<CodeSpec> for CodeSpecFile {
    fn from(s: CodeSpec) -> Self {
        CodeSpecFile {
            n: s.transform,
            frozen: s.frozen,
            frozen_values: s.frozen_values,
            channel: s.channel,
            profile: s.profile,
        }
    }
}

impl CodeSpec {
    pub fn new(
        transform: TransformSpec,
        frozen: IndexSet,
        frozen_values: BitVector,
        channel: BinaryInputChannel,
    ) -> Result<Self> {
        let len = transform.len();
        if let Some(max) = frozen.max() {
            if max >= len {
                return Err(Error::IndexOutOfRange { index: max, len });
            }
        }
        if frozen_values.len() != frozen.len() {
            return Err(Error::LengthMismatch {
                expected: frozen.len(),
                actual: frozen_values.len(),
            });
        }
        Ok(CodeSpec {
            transform,
            frozen,
            frozen_values,
            channel,
            profile: None,
        })
    }

    /// A code with every frozen bit set to 0.
    pub fn zero_frozen(
        transform: TransformSpec,
        frozen: IndexSet,
        channel: BinaryInputChannel,
    ) -> Result<Self> {
        let k = frozen.len();
        CodeSpec::new(transform, frozen, BitVector::zeros(k), channel)
    }

    /// Attaches the path of the profile the frozen set was selected from.
    pub fn with_profile_ref(mut self, path: impl Into<String>) -> Self {
        self.profile = Some(path.into());
        self
    }

    pub fn transform(&self) -> TransformSpec {
        self.transform
    }

    pub fn len(&self) -> usize {
        self.transform.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn frozen(&self) -> &IndexSet {
        &self.frozen
    }

    pub fn frozen_values(&self) -> &BitVector {
        &self.frozen_values
    }

    pub fn channel(&self) -> &BinaryInputChannel {
        &self.channel
    }

    pub fn profile_ref(&self) -> Option<&str> {
        self.profile.as_deref()
    }

    pub fn info_set(&self) -> IndexSet {
        self.frozen.complement(self.len())
    }

    pub fn info_len(&self) -> usize {
        self.len() - self.frozen.len()
    }

    /// `R_N = 1 − |F|/N`.
    pub fn rate(&self) -> f64 {
        self.info_len() as f64 / self.len() as f64
    }

    pub fn with_frozen_values(&self, values: BitVector) -> Result<Self> {
        let mut s = CodeSpec::new(self.transform, self.frozen.clone(), values, self.channel.clone())?;
        s.profile = self.profile.clone();
        Ok(s)
    }

    pub fn with_channel(&self, channel: BinaryInputChannel) -> Self {
        let mut s = self.clone();
        s.channel = channel;
        s
    }

    /// Full-length `ū` with `ũ_F` in place and zeros elsewhere.
    pub(crate) fn frozen_word(&self) -> BitVector {
        let mut u = BitVector::zeros(self.len());
        for (k, i) in self.frozen.iter().enumerate() {
            u.set(i, self.frozen_values.get(k));
        }
        u
    }
}

/// How non-frozen decisions are made during an SC pass.
pub enum Rounding<'a> {
    /// `u_i = 0` iff `Λ_i > 0`; a tie decides 1.
    Map,
    /// Randomized rounding, one uniform draw per non-frozen index in index order.
    Random(&'a mut dyn RngCore),
    /// Randomized rounding with the draws given per index (length `N`; entries
    /// at frozen indices are ignored).
    Draws(&'a [f64]),
    /// Every non-frozen decision prescribed (length `N`; entries at frozen
    /// indices are ignored).
    Forced(&'a [u8]),
}

/// Per-index LLRs and decisions from one SC pass.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecisionTrace {
    /// `Λ_i = ln l_i`, possibly infinite.
    pub llr: Vec<f64>,
    pub decisions: BitVector,
    /// The uniform draw consumed at each index; NaN where none was used.
    pub draws: Vec<f64>,
}

impl DecisionTrace {
    pub fn extract(&self, set: &IndexSet) -> BitVector {
        crate::transform::extract(&self.decisions, set).expect("trace covers the full block")
    }
}

/// Randomized rounding rule: `u = 0` iff `t < l/(1+l)`, evaluated as
/// `ln t − ln(1−t) < Λ`.
#[inline]
pub fn round_with_draw(llr: f64, t: f64) -> u8 {
    let logit = t.ln() - (1.0 - t).ln();
    if logit < llr {
        0
    } else {
        1
    }
}

/// MAP decision: `u = 0` iff `l > 1`.
#[inline]
pub fn map_decision(llr: f64) -> u8 {
    if llr > 0.0 {
        0
    } else {
        1
    }
}

/// Distortion measures on symbol vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// `d(a, b) = [a ≠ b]` on binary symbols.
    Hamming,
    /// Ternary source against binary reconstruction: an erased source symbol
    /// costs nothing.
    ErasureSource,
}

/// Total distortion between a source word `a` and a reconstruction `b`.
pub fn distortion(a: &[usize], b: &[usize], metric: Metric) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    let source_max = match metric {
        Metric::Hamming => 1,
        Metric::ErasureSource => ERASURE,
    };
    let mut d = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x > source_max {
            return Err(Error::AlphabetMismatch {
                symbol: x,
                alphabet: source_max + 1,
            });
        }
        if y > 1 {
            return Err(Error::AlphabetMismatch { symbol: y, alphabet: 2 });
        }
        if x != ERASURE && x != y {
            d += 1;
        }
    }
    Ok(d)
}

/// Symbols of a binary word.
pub fn symbols(bits: &BitVector) -> Vec<usize> {
    bits.iter().map(usize::from).collect()
}

/// Assembles `ū` from `ũ_F` and the payload and returns `x̄ = ū H_n`.
pub fn source_decode(u_info: &BitVector, spec: &CodeSpec) -> Result<BitVector> {
    let info = spec.info_set();
    if u_info.len() != info.len() {
        return Err(Error::LengthMismatch {
            expected: info.len(),
            actual: u_info.len(),
        });
    }
    let mut u = spec.frozen_word();
    crate::transform::scatter(&mut u, &info, u_info)?;
    polar_transform(&u, spec.transform)
}

/// `ū H_n` for a full-length `ū`.
pub fn reencode(u: &BitVector, spec: &CodeSpec) -> Result<BitVector> {
    polar_transform(u, spec.transform)
}
