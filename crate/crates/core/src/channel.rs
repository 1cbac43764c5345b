//! Binary-input discrete memoryless channels with explicit output tables.
//!
//! A channel is a pair of probability rows `W(·|0)`, `W(·|1)` over a finite
//! output alphabet `0..m`. Named kinds fix the symbol order:
//!
//! * BSC(D): outputs `[0, 1]`.
//! * BEC(ε): outputs `[0, 1, ∗]`.
//! * BSEC(p, D): outputs `[0, 1, ∗]` with `W(0|0) = p(1−D)`, `W(1|0) = pD`,
//!   `W(∗|0) = 1−p`, mirrored for input 1.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::rng::unit_draw;
use crate::{Error, Result};

/// Default cap on output alphabets produced by [`combine_minus`] and
/// [`combine_plus`].
pub const DEFAULT_ALPHABET_CAP: usize = 1 << 16;

/// Output symbol index of the erasure in BEC and BSEC alphabets.
pub const ERASURE: usize = 2;

const ROW_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelKind {
    Bsc { d: f64 },
    Bec { epsilon: f64 },
    Bsec { p: f64, d: f64 },
    Generic,
}

impl ChannelKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ChannelKind::Bsc { .. } => "bsc",
            ChannelKind::Bec { .. } => "bec",
            ChannelKind::Bsec { .. } => "bsec",
            ChannelKind::Generic => "generic",
        }
    }
}

/// Scalar figures of merit of a channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelFigures {
    /// Bhattacharyya parameter.
    pub z: f64,
    /// Mutual information under uniform input, in bits.
    pub i_sym: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryInputChannel {
    kind: ChannelKind,
    p0: Vec<f64>,
    p1: Vec<f64>,
}

fn check_prob(name: &'static str, v: f64, hi: f64, domain: &'static str) -> Result<()> {
    if !(0.0..=hi).contains(&v) {
        return Err(Error::domain(name, v, domain));
    }
    Ok(())
}

impl BinaryInputChannel {
    pub fn bsc(d: f64) -> Result<Self> {
        check_prob("D", d, 0.5, "[0, 1/2]")?;
        Ok(BinaryInputChannel {
            kind: ChannelKind::Bsc { d },
            p0: vec![1.0 - d, d],
            p1: vec![d, 1.0 - d],
        })
    }

    pub fn bec(epsilon: f64) -> Result<Self> {
        check_prob("epsilon", epsilon, 1.0, "[0, 1]")?;
        Ok(BinaryInputChannel {
            kind: ChannelKind::Bec { epsilon },
            p0: vec![1.0 - epsilon, 0.0, epsilon],
            p1: vec![0.0, 1.0 - epsilon, epsilon],
        })
    }

    pub fn bsec(p: f64, d: f64) -> Result<Self> {
        check_prob("p", p, 1.0, "[0, 1]")?;
        check_prob("D", d, 0.5, "[0, 1/2]")?;
        Ok(BinaryInputChannel {
            kind: ChannelKind::Bsec { p, d },
            p0: vec![p * (1.0 - d), p * d, 1.0 - p],
            p1: vec![p * d, p * (1.0 - d), 1.0 - p],
        })
    }

    pub fn generic(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        let ch = BinaryInputChannel {
            kind: ChannelKind::Generic,
            p0,
            p1,
        };
        ch.validate()?;
        Ok(ch)
    }

    fn validate(&self) -> Result<()> {
        if self.p0.len() != self.p1.len() {
            return Err(Error::InvalidChannel(format!(
                "rows have different lengths {} and {}",
                self.p0.len(),
                self.p1.len()
            )));
        }
        if self.p0.is_empty() {
            return Err(Error::InvalidChannel("empty output alphabet".into()));
        }
        for (x, row) in [&self.p0, &self.p1].into_iter().enumerate() {
            if row.iter().any(|&v| v.is_nan() || v < 0.0 || !v.is_finite()) {
                return Err(Error::InvalidChannel(format!("row {x} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidChannel(format!("row {x} sums to {s}")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn outputs(&self) -> usize {
        self.p0.len()
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    #[inline]
    pub fn prob(&self, y: usize, x: u8) -> f64 {
        if x == 0 {
            self.p0[y]
        } else {
            self.p1[y]
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.bhattacharyya() == 0.0
    }

    /// `Z(W) = Σ_y √(W(y|0) W(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        self.p0
            .iter()
            .zip(&self.p1)
            .map(|(a, b)| (a * b).sqrt())
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// `I(X; Y)` in bits for uniform `X`.
    pub fn symmetric_mutual_info(&self) -> f64 {
        let mut acc = 0.0;
        for (&a, &b) in self.p0.iter().zip(&self.p1) {
            let q = 0.5 * (a + b);
            for w in [a, b] {
                if w > 0.0 {
                    acc += 0.5 * w * (w / q).log2();
                }
            }
        }
        acc.clamp(0.0, 1.0)
    }

    pub fn figures(&self) -> ChannelFigures {
        ChannelFigures {
            z: self.bhattacharyya(),
            i_sym: self.symmetric_mutual_info(),
        }
    }

    /// `ln(W(y|0) / W(y|1))`, infinite when one row vanishes at `y`.
    pub fn llr(&self, y: usize) -> Result<f64> {
        let (a, b) = (self.p0[y], self.p1[y]);
        if a == 0.0 && b == 0.0 {
            return Err(Error::InvalidObservation { symbol: y });
        }
        Ok(match self.kind {
            // Exact negation between the two symbols keeps gauge symmetry exact.
            ChannelKind::Bsc { d } if y == 1 => -llr_ratio(1.0 - d, d),
            ChannelKind::Bsec { p, d } if y == 1 => -llr_ratio(p * (1.0 - d), p * d),
            ChannelKind::Bec { epsilon } if y == 1 => -llr_ratio(1.0 - epsilon, 0.0),
            _ => llr_ratio(a, b),
        })
    }

    /// LLRs for every output symbol; `None` for symbols impossible under both inputs.
    pub fn llr_table(&self) -> Vec<Option<f64>> {
        (0..self.outputs()).map(|y| self.llr(y).ok()).collect()
    }

    /// Binary-input symmetry: an involution `π` on outputs with
    /// `W(y|1) = W(π(y)|0)`.
    pub fn is_symmetric(&self) -> bool {
        match self.kind {
            ChannelKind::Bsc { .. } | ChannelKind::Bec { .. } | ChannelKind::Bsec { .. } => true,
            ChannelKind::Generic => {
                let m = self.outputs();
                let mut used = vec![false; m];
                for y in 0..m {
                    if used[y] {
                        continue;
                    }
                    let partner = (y..m).find(|&z| {
                        !used[z]
                            && (self.p1[y] - self.p0[z]).abs() <= 1e-12
                            && (self.p0[y] - self.p1[z]).abs() <= 1e-12
                    });
                    match partner {
                        Some(z) => {
                            used[y] = true;
                            used[z] = true;
                        }
                        None => return false,
                    }
                }
                true
            }
        }
    }

    /// Draws an output for input `x`.
    pub fn sample<R: RngCore + ?Sized>(&self, x: u8, rng: &mut R) -> usize {
        let row = if x == 0 { &self.p0 } else { &self.p1 };
        let t = unit_draw(rng);
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (y, &w) in row.iter().enumerate() {
            if w > 0.0 {
                acc += w;
                last_positive = y;
                if t < acc {
                    return y;
                }
            }
        }
        last_positive
    }

    fn descriptor(&self) -> ChannelDescriptor {
        let params = match self.kind {
            ChannelKind::Bsc { d } => ChannelParams {
                d: Some(d),
                ..Default::default()
            },
            ChannelKind::Bec { epsilon } => ChannelParams {
                epsilon: Some(epsilon),
                ..Default::default()
            },
            ChannelKind::Bsec { p, d } => ChannelParams {
                p: Some(p),
                d: Some(d),
                ..Default::default()
            },
            ChannelKind::Generic => ChannelParams::default(),
        };
        ChannelDescriptor {
            kind: self.kind.tag().to_string(),
            params,
            p0: Some(self.p0.clone()),
            p1: Some(self.p1.clone()),
        }
    }

    fn from_descriptor(desc: ChannelDescriptor) -> Result<Self> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidChannel(format!("{} channel needs parameter {name}", desc.kind)))
        };
        let ch = match desc.kind.as_str() {
            "bsc" => BinaryInputChannel::bsc(need(desc.params.d, "D")?)?,
            "bec" => BinaryInputChannel::bec(need(desc.params.epsilon, "epsilon")?)?,
            "bsec" => BinaryInputChannel::bsec(need(desc.params.p, "p")?, need(desc.params.d, "D")?)?,
            "generic" => {
                let (Some(p0), Some(p1)) = (desc.p0.clone(), desc.p1.clone()) else {
                    return Err(Error::InvalidChannel("generic channel needs p0 and p1".into()));
                };
                return BinaryInputChannel::generic(p0, p1);
            }
            other => return Err(Error::InvalidChannel(format!("unknown channel kind {other:?}"))),
        };
        // Tables given alongside a named kind must agree with its parameters.
        for (given, own) in [(&desc.p0, &ch.p0), (&desc.p1, &ch.p1)] {
            if let Some(g) = given {
                if g.len() != own.len() || g.iter().zip(own).any(|(a, b)| (a - b).abs() > 1e-12) {
                    return Err(Error::InvalidChannel(format!(
                        "transition table disagrees with {} parameters",
                        desc.kind
                    )));
                }
            }
        }
        Ok(ch)
    }
}

fn llr_ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        f64::INFINITY
    } else if a == 0.0 {
        f64::NEG_INFINITY
    } else {
        (a / b).ln()
    }
}

#[derive(Serialize, Deserialize, Default)]
struct ChannelParams {
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChannelDescriptor {
    kind: String,
    #[serde(default)]
    params: ChannelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p1: Option<Vec<f64>>,
}

impl Serialize for BinaryInputChannel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryInputChannel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = ChannelDescriptor::deserialize(d)?;
        BinaryInputChannel::from_descriptor(desc).map_err(serde::de::Error::custom)
    }
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::AlphabetCap { size, cap });
    }
    Ok(())
}

/// `W^[0](y0, y1 | u0) = ½ Σ_{u1} W1(y0 | u0 ⊕ u1) W2(y1 | u1)`.
///
/// Output `(y0, y1)` is symbol `y0 * m2 + y1`.
pub fn combine_minus(
    w1: &BinaryInputChannel,
    w2: &BinaryInputChannel,
    cap: usize,
) -> Result<BinaryInputChannel> {
    let (m1, m2) = (w1.outputs(), w2.outputs());
    let size = m1.saturating_mul(m2);
    check_cap(size, cap)?;
    let mut p0 = Vec::with_capacity(size);
    let mut p1 = Vec::with_capacity(size);
    for y0 in 0..m1 {
        for y1 in 0..m2 {
            p0.push(0.5 * (w1.p0[y0] * w2.p0[y1] + w1.p1[y0] * w2.p1[y1]));
            p1.push(0.5 * (w1.p1[y0] * w2.p0[y1] + w1.p0[y0] * w2.p1[y1]));
        }
    }
    Ok(BinaryInputChannel {
        kind: ChannelKind::Generic,
        p0,
        p1,
    })
}

/// `W^[1](y0, y1, u0 | u1) = ½ W1(y0 | u0 ⊕ u1) W2(y1 | u1)`.
///
/// Output `(y0, y1, u0)` is symbol `(y0 * m2 + y1) * 2 + u0`.
pub fn combine_plus(
    w1: &BinaryInputChannel,
    w2: &BinaryInputChannel,
    cap: usize,
) -> Result<BinaryInputChannel> {
    let (m1, m2) = (w1.outputs(), w2.outputs());
    let size = m1
        .checked_mul(m2)
        .and_then(|s| s.checked_mul(2))
        .unwrap_or(usize::MAX);
    check_cap(size, cap)?;
    let mut p0 = Vec::with_capacity(size);
    let mut p1 = Vec::with_capacity(size);
    for y0 in 0..m1 {
        for y1 in 0..m2 {
            for u0 in 0..2u8 {
                p0.push(0.5 * w1.prob(y0, u0) * w2.p0[y1]);
                p1.push(0.5 * w1.prob(y0, u0 ^ 1) * w2.p1[y1]);
            }
        }
    }
    Ok(BinaryInputChannel {
        kind: ChannelKind::Generic,
        p0,
        p1,
    })
}

/// Closed-form rate expressions, in bits.
pub mod rates {
    use crate::{Error, Result};

    fn check_unit(name: &'static str, x: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(name, x, "[0, 1]"));
        }
        Ok(())
    }

    fn check_half(name: &'static str, x: f64) -> Result<()> {
        if !(0.0..=0.5).contains(&x) {
            return Err(Error::domain(name, x, "[0, 1/2]"));
        }
        Ok(())
    }

    /// `h2(x)` without domain checks; callers guarantee `x ∈ [0, 1]`.
    pub fn h2(x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }

    pub fn binary_entropy(x: f64) -> Result<f64> {
        check_unit("x", x)?;
        Ok(h2(x))
    }

    /// The preimage of `h` in `[0, 1/2]`, by bisection.
    pub fn inverse_binary_entropy(h: f64) -> Result<f64> {
        check_unit("h", h)?;
        let (mut lo, mut hi) = (0.0f64, 0.5f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h2(mid) < h {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `D ∗ p = D(1−p) + p(1−D)`.
    pub fn star(d: f64, p: f64) -> Result<f64> {
        check_unit("D", d)?;
        check_unit("p", p)?;
        Ok(d * (1.0 - p) + p * (1.0 - d))
    }

    /// `R(D) = 1 − h2(D)` for a binary symmetric source.
    pub fn rate_distortion_bss(d: f64) -> Result<f64> {
        check_half("D", d)?;
        Ok(1.0 - h2(d))
    }

    /// `R_WZ(D) = h2(D ∗ p) − h2(D)`.
    pub fn r_wz(d: f64, p: f64) -> Result<f64> {
        check_half("D", d)?;
        check_half("p", p)?;
        Ok(h2(star(d, p)?) - h2(d))
    }

    /// `R_GP(D) = h2(D) − h2(p)`.
    pub fn r_gp(d: f64, p: f64) -> Result<f64> {
        check_half("D", d)?;
        check_half("p", p)?;
        Ok(h2(d) - h2(p))
    }

    /// `(1 − p)(1 − h2(D))`.
    pub fn storage_capacity(p: f64, d: f64) -> Result<f64> {
        check_unit("p", p)?;
        check_half("D", d)?;
        Ok((1.0 - p) * (1.0 - h2(d)))
    }
}

#[cfg(test)]
mod tests {
    use super::rates::*;
    use super::*;
    use crate::rng::{stream, Purpose};
    use proptest::prelude::*;
    use rand::Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    // Direct evaluation of the defining sum, independent of the method.
    fn z_by_definition(p0: &[f64], p1: &[f64]) -> f64 {
        let mut s = 0.0;
        for y in 0..p0.len() {
            s += (p0[y] * p1[y]).sqrt();
        }
        s
    }

    fn mutual_info_by_definition(p0: &[f64], p1: &[f64]) -> f64 {
        let mut s = 0.0;
        for y in 0..p0.len() {
            let py = 0.5 * p0[y] + 0.5 * p1[y];
            for w in [p0[y], p1[y]] {
                if w > 0.0 {
                    s += 0.5 * w * (w.ln() - py.ln()) / std::f64::consts::LN_2;
                }
            }
        }
        s
    }

    #[test]
    fn bsc_examples() {
        let w = BinaryInputChannel::bsc(0.0).unwrap();
        assert_eq!(w.p0(), &[1.0, 0.0]);
        assert_eq!(w.p1(), &[0.0, 1.0]);
        let w = BinaryInputChannel::bsc(0.5).unwrap();
        assert_eq!(w.p0(), &[0.5, 0.5]);
        assert_eq!(w.p1(), &[0.5, 0.5]);
        let w = BinaryInputChannel::bsc(0.11).unwrap();
        assert_eq!(w.prob(1, 0), 0.11);
        assert_eq!(w.prob(0, 1), 0.11);
        assert!(BinaryInputChannel::bsc(0.6).is_err());
        assert!(BinaryInputChannel::bsc(-0.1).is_err());
    }

    #[test]
    fn bsec_examples() {
        let w = BinaryInputChannel::bsec(0.5, 0.1).unwrap();
        assert!(close(w.prob(0, 0), 0.45, 1e-15));
        assert!(close(w.prob(1, 0), 0.05, 1e-15));
        assert!(close(w.prob(ERASURE, 0), 0.5, 1e-15));
        let w = BinaryInputChannel::bsec(1.0, 0.2).unwrap();
        assert_eq!(w.prob(ERASURE, 0), 0.0);
        assert!(close(w.prob(1, 0), 0.2, 1e-15));
        assert!(close(w.bhattacharyya(), BinaryInputChannel::bsc(0.2).unwrap().bhattacharyya(), 1e-15));
        let w = BinaryInputChannel::bsec(0.0, 0.2).unwrap();
        assert_eq!(w.p0(), &[0.0, 0.0, 1.0]);
        assert_eq!(w.p1(), &[0.0, 0.0, 1.0]);
        assert!(BinaryInputChannel::bsec(1.1, 0.2).is_err());
        assert!(BinaryInputChannel::bsec(0.5, 0.7).is_err());
    }

    #[test]
    fn bhattacharyya_examples() {
        assert_eq!(BinaryInputChannel::bsc(0.0).unwrap().bhattacharyya(), 0.0);
        for eps in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let w = BinaryInputChannel::bec(eps).unwrap();
            assert!(close(w.bhattacharyya(), z_by_definition(w.p0(), w.p1()), 1e-15));
            assert!(close(w.bhattacharyya(), eps, 1e-15));
        }
        let w = BinaryInputChannel::bsc(0.11).unwrap();
        let oracle = z_by_definition(&[0.89, 0.11], &[0.11, 0.89]);
        assert!(close(w.bhattacharyya(), oracle, 1e-15));
        assert!(close(oracle, 0.625780, 1e-6));
    }

    #[test]
    fn mutual_info_examples() {
        for d in [0.0, 0.05, 0.11, 0.3, 0.5] {
            let w = BinaryInputChannel::bsc(d).unwrap();
            let oracle = mutual_info_by_definition(w.p0(), w.p1());
            assert!(close(w.symmetric_mutual_info(), oracle, 1e-12));
            assert!(close(oracle, 1.0 - h2(d), 1e-12));
        }
        for eps in [0.0, 0.3, 1.0] {
            let w = BinaryInputChannel::bec(eps).unwrap();
            assert!(close(w.symmetric_mutual_info(), 1.0 - eps, 1e-12));
        }
        assert_eq!(BinaryInputChannel::bsc(0.5).unwrap().symmetric_mutual_info(), 0.0);
    }

    #[test]
    fn z_and_i_extremes_agree() {
        let chans = [
            BinaryInputChannel::bsc(0.0).unwrap(),
            BinaryInputChannel::bsc(0.5).unwrap(),
            BinaryInputChannel::bec(0.0).unwrap(),
            BinaryInputChannel::bec(1.0).unwrap(),
            BinaryInputChannel::bsec(1.0, 0.0).unwrap(),
            BinaryInputChannel::bsec(0.0, 0.1).unwrap(),
            BinaryInputChannel::bsec(0.7, 0.5).unwrap(),
            BinaryInputChannel::bsc(0.2).unwrap(),
            BinaryInputChannel::bsec(0.5, 0.1).unwrap(),
        ];
        for w in &chans {
            let f = w.figures();
            assert_eq!(f.z == 0.0, close(f.i_sym, 1.0, 1e-12), "{w:?}");
            assert_eq!(close(f.z, 1.0, 1e-12), f.i_sym == 0.0 || f.i_sym < 1e-12, "{w:?}");
        }
    }

    #[test]
    fn combine_minus_examples() {
        let cap = DEFAULT_ALPHABET_CAP;
        for eps in [0.1, 0.5, 0.8] {
            let w = BinaryInputChannel::bec(eps).unwrap();
            let m = combine_minus(&w, &w, cap).unwrap();
            assert_eq!(m.outputs(), 9);
            assert!(close(m.bhattacharyya(), 2.0 * eps - eps * eps, 1e-15));
        }
        let w = BinaryInputChannel::bsc(0.11).unwrap();
        let m = combine_minus(&w, &w, cap).unwrap();
        assert!(close(m.bhattacharyya(), 0.793631, 1e-6));
        // The brute-force sum over the 4 output pairs.
        let a = 0.89f64 * 0.89 + 0.11 * 0.11;
        let b = 2.0 * 0.89 * 0.11;
        let oracle = 2.0 * (0.5 * a * 0.5 * b).sqrt() * 2.0;
        assert!(close(m.bhattacharyya(), oracle, 1e-15));
        // Noiseless second channel reveals u1.
        let w1 = BinaryInputChannel::bsc(0.2).unwrap();
        let m = combine_minus(&w1, &BinaryInputChannel::bsc(0.0).unwrap(), cap).unwrap();
        assert!(close(m.bhattacharyya(), w1.bhattacharyya(), 1e-15));
        assert!(close(m.symmetric_mutual_info(), w1.symmetric_mutual_info(), 1e-12));
    }

    #[test]
    fn combine_plus_examples() {
        let cap = DEFAULT_ALPHABET_CAP;
        for eps in [0.1, 0.5, 0.8] {
            let w = BinaryInputChannel::bec(eps).unwrap();
            let p = combine_plus(&w, &w, cap).unwrap();
            assert_eq!(p.outputs(), 18);
            assert!(close(p.bhattacharyya(), eps * eps, 1e-15));
        }
        let p = combine_plus(
            &BinaryInputChannel::bsc(0.0).unwrap(),
            &BinaryInputChannel::bsc(0.3).unwrap(),
            cap,
        )
        .unwrap();
        assert_eq!(p.bhattacharyya(), 0.0);
    }

    #[test]
    fn alphabet_cap_enforced() {
        let w = BinaryInputChannel::bsec(0.5, 0.1).unwrap();
        assert!(matches!(combine_minus(&w, &w, 8), Err(Error::AlphabetCap { size: 9, cap: 8 })));
        assert!(matches!(combine_plus(&w, &w, 17), Err(Error::AlphabetCap { size: 18, .. })));
    }

    #[test]
    fn sampling_frequencies() {
        let w = BinaryInputChannel::bsc(0.0).unwrap();
        let mut rng = stream(11, Purpose::Auxiliary, 0);
        assert!((0..1000).all(|_| w.sample(0, &mut rng) == 0));

        let draws = 1_000_000;
        let w = BinaryInputChannel::bsc(0.11).unwrap();
        let ones = (0..draws).filter(|_| w.sample(0, &mut rng) == 1).count();
        assert!(close(ones as f64 / draws as f64, 0.11, 0.001));

        let w = BinaryInputChannel::bsec(0.5, 0.2).unwrap();
        for x in [0u8, 1] {
            let erasures = (0..draws).filter(|_| w.sample(x, &mut rng) == ERASURE).count();
            assert!(close(erasures as f64 / draws as f64, 0.5, 0.002));
        }
    }

    #[test]
    fn rate_formula_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        let s = star(0.11, 0.25).unwrap();
        assert!(close(s, 0.11 * 0.75 + 0.25 * 0.89, 1e-15));
        assert!(close(s, 0.305, 1e-12));
        let oracle = h2(0.305) - h2(0.11);
        assert!(close(r_wz(0.11, 0.25).unwrap(), oracle, 1e-12));
        assert!(close(oracle, 0.3875, 5e-4));
        assert!(close(r_gp(0.25, 0.11).unwrap(), h2(0.25) - h2(0.11), 1e-15));
        assert!(close(storage_capacity(0.25, 0.11).unwrap(), 0.75 * (1.0 - h2(0.11)), 1e-15));
        assert!(close(rate_distortion_bss(0.11).unwrap(), 1.0 - h2(0.11), 1e-15));
        assert!(r_wz(0.6, 0.1).is_err());
        let inv = inverse_binary_entropy(0.4).unwrap();
        assert!(close(h2(inv), 0.4, 1e-12));
        assert!(inv < 0.5);
    }

    #[test]
    fn json_descriptor_round_trip() {
        let w = BinaryInputChannel::bsec(0.5, 0.1).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.starts_with(r#"{"kind":"bsec","params":{"D":0.1,"p":0.5},"p0":["#), "{s}");
        let back: BinaryInputChannel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let short: BinaryInputChannel = serde_json::from_str(r#"{"kind":"bsc","params":{"D":0.11}}"#).unwrap();
        assert_eq!(short, BinaryInputChannel::bsc(0.11).unwrap());
        let bad = serde_json::from_str::<BinaryInputChannel>(
            r#"{"kind":"bsc","params":{"D":0.11},"p0":[0.5,0.5],"p1":[0.11,0.89]}"#,
        );
        assert!(bad.is_err());
        let bad = serde_json::from_str::<BinaryInputChannel>(r#"{"kind":"generic","p0":[0.5,0.6],"p1":[0.5,0.5]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn symmetry_detection() {
        let sym = BinaryInputChannel::generic(vec![0.5, 0.3, 0.2], vec![0.3, 0.5, 0.2]).unwrap();
        assert!(sym.is_symmetric());
        let asym = BinaryInputChannel::generic(vec![1.0, 0.0], vec![0.3, 0.7]).unwrap();
        assert!(!asym.is_symmetric());
    }

    fn random_channel<R: Rng>(rng: &mut R) -> BinaryInputChannel {
        let m = rng.random_range(1..=6);
        let row = |rng: &mut R| {
            let mut v: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            let s: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= s);
            // Renormalize the tail so the row sums to 1 exactly enough.
            let rest: f64 = v[..m - 1].iter().sum();
            v[m - 1] = (1.0 - rest).max(0.0);
            v
        };
        let p0 = row(rng);
        let p1 = row(rng);
        BinaryInputChannel::generic(p0, p1).unwrap()
    }

    proptest! {
        #[test]
        fn plus_branch_squares_z(seed in any::<u64>()) {
            let mut rng = stream(seed, Purpose::Auxiliary, 0);
            let w = random_channel(&mut rng);
            let p = combine_plus(&w, &w, DEFAULT_ALPHABET_CAP).unwrap();
            let z = w.bhattacharyya();
            prop_assert!(close(p.bhattacharyya(), z * z, 1e-12));
        }

        #[test]
        fn mutual_information_is_conserved(seed in any::<u64>()) {
            let mut rng = stream(seed, Purpose::Auxiliary, 1);
            let w = random_channel(&mut rng);
            let minus = combine_minus(&w, &w, DEFAULT_ALPHABET_CAP).unwrap();
            let plus = combine_plus(&w, &w, DEFAULT_ALPHABET_CAP).unwrap();
            let lhs = minus.symmetric_mutual_info() + plus.symmetric_mutual_info();
            prop_assert!(close(lhs, 2.0 * w.symmetric_mutual_info(), 1e-9));
        }

        #[test]
        fn minus_branch_lower_bound(seed in any::<u64>()) {
            let mut rng = stream(seed, Purpose::Auxiliary, 2);
            let w1 = random_channel(&mut rng);
            let w2 = random_channel(&mut rng);
            let (z1, z2) = (w1.bhattacharyya(), w2.bhattacharyya());
            let z = combine_minus(&w1, &w2, DEFAULT_ALPHABET_CAP).unwrap().bhattacharyya();
            prop_assert!(z >= (z1 * z1 + z2 * z2 - z1 * z1 * z2 * z2).sqrt() - 1e-12);
        }
    }
}
