use serde::Serialize;

use super::experiment::map_trials;
use super::{distortion, symbols, CodeSpec, Metric, Rounding, ScEngine, SourceModel};
use crate::bits::BitVector;
use crate::rng::{stream, Purpose};
use crate::transform::polar_transform;
use crate::{Error, Result};

const LLR_TOLERANCE: f64 = 1e-9;

/// Outcome of a forced-coupling comparison of two SC runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaugeReport {
    pub pass: bool,
    /// First index whose LLRs break the sign rule.
    pub first_violation: Option<usize>,
    /// Largest `|Λ'_i ∓ Λ_i|` over indices with finite LLRs.
    pub max_abs_diff: f64,
    /// Whether the two payloads differ exactly by the shift on `F^c`.
    pub outputs_match: bool,
}

/// `(ȳ ⊕ ȳ') H_n⁻¹`, with `H_n⁻¹ = H_n`.
pub fn gauge_shift(y: &BitVector, y_prime: &BitVector, spec: &CodeSpec) -> Result<BitVector> {
    polar_transform(&y.xor(y_prime)?, spec.transform())
}

fn require_binary(spec: &CodeSpec) -> Result<()> {
    if spec.channel().outputs() != 2 || !spec.channel().is_symmetric() {
        return Err(Error::Precondition("gauge coupling needs a binary symmetric metric channel".into()));
    }
    Ok(())
}

/// Runs `spec` on `y` with `rounding`, then `spec_prime` on `y_prime` with
/// decisions forced to `u_i ⊕ s_i`, `s = (ȳ ⊕ ȳ') H_n⁻¹`, and checks
/// `Λ'_i = (−1)^{s_i} Λ_i` at every index.
pub fn gauge_check(
    engine: &mut ScEngine,
    y: &BitVector,
    y_prime: &BitVector,
    spec: &CodeSpec,
    spec_prime: &CodeSpec,
    rounding: Rounding<'_>,
) -> Result<GaugeReport> {
    require_binary(spec)?;
    if spec.frozen() != spec_prime.frozen() || spec.channel() != spec_prime.channel() {
        return Err(Error::Precondition("coupled codes must share frozen set and metric".into()));
    }
    let s = gauge_shift(y, y_prime, spec)?;
    let expected = spec.frozen_values() ^ &crate::transform::extract(&s, spec.frozen())?;
    if &expected != spec_prime.frozen_values() {
        return Err(Error::Precondition(
            "frozen values of the second code must equal the first shifted by the gauge".into(),
        ));
    }
    let t1 = engine.sc_pass(&symbols(y), spec, rounding)?;
    let forced = (&t1.decisions ^ &s).to_bits();
    let t2 = engine.sc_pass(&symbols(y_prime), spec_prime, Rounding::Forced(&forced))?;

    let mut first_violation = None;
    let mut max_abs_diff: f64 = 0.0;
    for i in 0..spec.len() {
        let want = if s.get(i) == 1 { -t1.llr[i] } else { t1.llr[i] };
        let got = t2.llr[i];
        let ok = if want.is_finite() && got.is_finite() {
            let diff = (got - want).abs();
            max_abs_diff = max_abs_diff.max(diff);
            diff <= LLR_TOLERANCE
        } else {
            got == want
        };
        if !ok && first_violation.is_none() {
            first_violation = Some(i);
        }
    }
    let info = spec.info_set();
    let outputs_match = t2.extract(&info) == &t1.extract(&info) ^ &crate::transform::extract(&s, &info)?;
    Ok(GaugeReport {
        pass: first_violation.is_none() && outputs_match,
        first_violation,
        max_abs_diff,
        outputs_match,
    })
}

/// Per-trial distortions of two codes that differ only in their frozen
/// values, run under the gauge coupling: the second code sees
/// `ȳ' = ȳ ⊕ v̄ H_n` with `v̄` the frozen-value difference, and its decisions
/// are forced to the coupled values.
pub fn coupled_distortions(
    spec: &CodeSpec,
    spec_prime: &CodeSpec,
    trials: u64,
    master_seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    require_binary(spec)?;
    if spec.frozen() != spec_prime.frozen() || spec.channel() != spec_prime.channel() {
        return Err(Error::Precondition("coupled codes must share frozen set and metric".into()));
    }
    let len = spec.len();
    let mut v = BitVector::zeros(len);
    let diff = spec.frozen_values() ^ spec_prime.frozen_values();
    crate::transform::scatter(&mut v, spec.frozen(), &diff)?;
    let offset = polar_transform(&v, spec.transform())?;
    let pairs = map_trials(
        trials,
        || ScEngine::for_spec(spec),
        |eng, t| {
            let y = BitVector::from_bits(
                &SourceModel::Bss
                    .sample(len, &mut stream(master_seed, Purpose::Source, t))
                    .iter()
                    .map(|&b| b as u8)
                    .collect::<Vec<_>>(),
            );
            let y_prime = &y ^ &offset;
            let mut rng = stream(master_seed, Purpose::Rounding, t);
            let t1 = eng.sc_pass(&symbols(&y), spec, Rounding::Random(&mut rng))?;
            let forced = (&t1.decisions ^ &v).to_bits();
            let t2 = eng.sc_pass(&symbols(&y_prime), spec_prime, Rounding::Forced(&forced))?;
            let x1 = polar_transform(&t1.decisions, spec.transform())?;
            let x2 = polar_transform(&t2.decisions, spec.transform())?;
            let d1 = distortion(&symbols(&y), &symbols(&x1), Metric::Hamming)? as f64 / len as f64;
            let d2 = distortion(&symbols(&y_prime), &symbols(&x2), Metric::Hamming)? as f64 / len as f64;
            Ok((d1, d2))
        },
    )?;
    Ok(pairs.into_iter().unzip())
}
