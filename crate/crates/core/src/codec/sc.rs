use rand::RngCore;

use super::{map_decision, round_with_draw, CodeSpec, DecisionTrace, Rounding};
use crate::bits::BitVector;
use crate::rng::unit_draw;
use crate::transform::bit_reversal;
use crate::{Error, Result};

/// Check-node combination `2 atanh(tanh(a/2) tanh(b/2))`, evaluated as
/// `sgn(a) sgn(b) [min(|a|,|b|) − ln(1 + e^{−||a|−|b||}) + ln(1 + e^{−(|a|+|b|)})]`.
#[inline]
pub fn check_node(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        return f64::NAN;
    }
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let (x, y) = (a.abs(), b.abs());
    if x.is_infinite() && y.is_infinite() {
        return sign * f64::INFINITY;
    }
    let m = x.min(y);
    let v = m - (-(x - y).abs()).exp().ln_1p() + (-(x + y)).exp().ln_1p();
    sign * v.max(0.0)
}

/// Variable-node combination given the partial-sum bit of the upper branch.
#[inline]
fn bit_node(upper: f64, lower: f64, bit: u8) -> f64 {
    if bit == 0 {
        lower + upper
    } else {
        lower - upper
    }
}

/// SC engine with scratch buffers for one blocklength.
///
/// Buffers are laid out by level: level `k` holds `2^k` entries at offset
/// `2^k − 1`. Level `n` receives the channel LLRs in bit-reversed order, which
/// turns `ū A_n G2^{⊗n}` into the natural-order recursion on `G2^{⊗n}`.
#[derive(Clone, Debug)]
pub struct ScEngine {
    n: u32,
    llr: Vec<f64>,
    bits: Vec<u8>,
}

impl ScEngine {
    pub fn new(n: u32) -> Self {
        let len = 1usize << n;
        ScEngine {
            n,
            llr: vec![0.0; 2 * len - 1],
            bits: vec![0; 2 * len - 1],
        }
    }

    pub fn for_spec(spec: &CodeSpec) -> Self {
        ScEngine::new(spec.transform().exponent())
    }

    fn resize(&mut self, n: u32) {
        if n != self.n {
            *self = ScEngine::new(n);
        }
    }

    /// One SC pass over observation `y` (symbols of the metric channel).
    pub fn sc_pass(&mut self, y: &[usize], spec: &CodeSpec, rounding: Rounding<'_>) -> Result<DecisionTrace> {
        let len = spec.len();
        if y.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: y.len(),
            });
        }
        let ch = spec.channel();
        let m = ch.outputs();
        let table = ch.llr_table();
        let mut channel_llr = Vec::with_capacity(len);
        for &s in y {
            if s >= m {
                return Err(Error::AlphabetMismatch { symbol: s, alphabet: m });
            }
            channel_llr.push(table[s].ok_or(Error::InvalidObservation { symbol: s })?);
        }
        self.sc_pass_llr(&channel_llr, spec, rounding)
    }

    /// One SC pass from per-position channel LLRs `ln W(y_j|0)/W(y_j|1)`.
    pub fn sc_pass_llr(
        &mut self,
        channel_llr: &[f64],
        spec: &CodeSpec,
        mut rounding: Rounding<'_>,
    ) -> Result<DecisionTrace> {
        let len = spec.len();
        if channel_llr.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                actual: channel_llr.len(),
            });
        }
        match &rounding {
            Rounding::Draws(d) if d.len() != len => {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: d.len(),
                })
            }
            Rounding::Forced(f) if f.len() != len => {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: f.len(),
                })
            }
            _ => {}
        }
        let n = spec.transform().exponent();
        self.resize(n);

        let top = len - 1;
        for k in 0..len {
            self.llr[top + k] = channel_llr[bit_reversal(k, n)];
        }

        let mut frozen = vec![None; len];
        for (k, i) in spec.frozen().iter().enumerate() {
            frozen[i] = Some(spec.frozen_values().get(k));
        }

        let mut trace_llr = vec![0.0; len];
        let mut draws = vec![f64::NAN; len];
        let mut decisions = BitVector::zeros(len);

        let mut decide = |i: usize, lam: f64| -> Result<u8> {
            trace_llr[i] = lam;
            let u = match frozen[i] {
                Some(v) => v,
                None => match &mut rounding {
                    Rounding::Forced(f) => f[i] & 1,
                    Rounding::Map => {
                        if lam.is_nan() {
                            return Err(Error::Inconsistent { index: i });
                        }
                        map_decision(lam)
                    }
                    Rounding::Random(rng) => {
                        let t = unit_draw(&mut **rng);
                        if lam.is_nan() {
                            return Err(Error::Inconsistent { index: i });
                        }
                        draws[i] = t;
                        round_with_draw(lam, t)
                    }
                    Rounding::Draws(d) => {
                        if lam.is_nan() {
                            return Err(Error::Inconsistent { index: i });
                        }
                        draws[i] = d[i];
                        round_with_draw(lam, d[i])
                    }
                },
            };
            if u == 1 {
                decisions.set(i, 1);
            }
            Ok(u)
        };

        recurse(&mut self.llr, &mut self.bits, n, 0, &mut decide)?;
        Ok(DecisionTrace {
            llr: trace_llr,
            decisions,
            draws,
        })
    }

    /// Randomized-rounding encoding of `y`; returns `ū_{F^c}`.
    pub fn source_encode(&mut self, y: &[usize], spec: &CodeSpec, rng: &mut dyn RngCore) -> Result<BitVector> {
        let trace = self.sc_pass(y, spec, Rounding::Random(rng))?;
        Ok(trace.extract(&spec.info_set()))
    }

    /// MAP decoding of `y`; returns `û_{F^c}`.
    pub fn channel_decode(&mut self, y: &[usize], spec: &CodeSpec) -> Result<BitVector> {
        let trace = self.sc_pass(y, spec, Rounding::Map)?;
        Ok(trace.extract(&spec.info_set()))
    }
}

fn recurse<D>(llr: &mut [f64], bits: &mut [u8], k: u32, base: usize, decide: &mut D) -> Result<()>
where
    D: FnMut(usize, f64) -> Result<u8>,
{
    if k == 0 {
        bits[0] = decide(base, llr[0])?;
        return Ok(());
    }
    let h = 1usize << (k - 1);
    let off = 2 * h - 1;
    let child = h - 1;

    for j in 0..h {
        llr[child + j] = check_node(llr[off + j], llr[off + j + h]);
    }
    recurse(llr, bits, k - 1, base, decide)?;
    for j in 0..h {
        bits[off + j] = bits[child + j];
    }
    for j in 0..h {
        llr[child + j] = bit_node(llr[off + j], llr[off + j + h], bits[off + j]);
    }
    recurse(llr, bits, k - 1, base + h, decide)?;
    for j in 0..h {
        let w = bits[child + j];
        bits[off + j] ^= w;
        bits[off + j + h] = w;
    }
    Ok(())
}
