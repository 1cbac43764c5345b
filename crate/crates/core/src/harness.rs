//! Experiment drivers behind the `polarlab` commands.
//!
//! Every command maps a JSON configuration (plus an optional seed override)
//! to a deterministic text body. The worker count only affects scheduling.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bits::{BitVector, IndexSet};
use crate::channel::{combine_minus, combine_plus, rates, BinaryInputChannel, DEFAULT_ALPHABET_CAP};
use crate::codec::{measure_bler, measure_rd, CodeSpec, GaugeReport, Rounding, ScEngine, SourceModel};
use crate::construction::{
    frozen_count_for_rate, gap_table, select_frozen, tree_process_sample, z_profile_auto, z_profile_bec,
    z_profile_enum, BitChannelTables, ReliabilityProfile, DEFAULT_PROFILE_TRIALS,
};
use crate::json::{format_f64, to_string_pretty};
use crate::rng::{stream, unit_draw, Purpose};
use crate::schemes::{self, NestedCodeSpec, Scheme, SchemeResult};
use crate::transform::TransformSpec;
use crate::{Error, Result};

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Config("workers must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Parses a JSON configuration file.
pub fn load_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Text produced by a command, and whether its checks passed.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub success: bool,
}

impl CommandOutput {
    fn ok(body: String) -> Self {
        CommandOutput { body, success: true }
    }
}

fn default_seed() -> u64 {
    0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub channel: BinaryInputChannel,
    pub n: u32,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

/// Exact for BEC and `n ≤ 3`, Monte Carlo otherwise.
pub fn cmd_profile(cfg: &ProfileConfig, seed: Option<u64>) -> Result<CommandOutput> {
    let seed = seed.unwrap_or(cfg.seed);
    let p = z_profile_auto(&cfg.channel, cfg.n, cfg.trials.unwrap_or(DEFAULT_PROFILE_TRIALS), seed)?;
    Ok(CommandOutput::ok(to_string_pretty(&p)?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RdSweepConfig {
    pub n: Vec<u32>,
    pub rates: Vec<f64>,
    /// Test-channel crossover; per rate `h2⁻¹(1 − R)` when absent.
    #[serde(rename = "D", default)]
    pub d: Option<f64>,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub profile_trials: Option<u64>,
}

pub const RD_HEADER: &str = "n,N,rate,target_D,measured_D,stderr,trials,seed";

/// One row per `(n, R)`: `target_D` is the Shannon distortion `h2⁻¹(1 − R)`.
pub fn cmd_rd_sweep(cfg: &RdSweepConfig, seed: Option<u64>) -> Result<CommandOutput> {
    let seed = seed.unwrap_or(cfg.seed);
    if let Some(&r) = cfg.rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::Config(format!("rate {r} outside [0, 1]")));
    }
    let profile_trials = cfg.profile_trials.unwrap_or(DEFAULT_PROFILE_TRIALS);
    let mut out = String::from(RD_HEADER);
    out.push('\n');
    for &n in &cfg.n {
        let t = TransformSpec::new(n)?;
        let len = t.len();
        let mut cached: Option<(f64, ReliabilityProfile)> = None;
        for &r in &cfg.rates {
            let target = rates::inverse_binary_entropy(1.0 - r)?;
            let d = cfg.d.unwrap_or(target);
            let w = BinaryInputChannel::bsc(d)?;
            let profile = match &cached {
                Some((cd, p)) if *cd == d => p.clone(),
                _ => {
                    let p = z_profile_auto(&w, n, profile_trials, seed)?;
                    cached = Some((d, p.clone()));
                    p
                }
            };
            let frozen = select_frozen(&profile.z, frozen_count_for_rate(len, r)?)?;
            let spec = CodeSpec::zero_frozen(t, frozen, w)?;
            let res = measure_rd(&spec, SourceModel::Bss, cfg.trials, seed)?;
            let dist = res.distortion.expect("rate-distortion result");
            writeln!(
                out,
                "{n},{len},{},{},{},{},{},{seed}",
                format_f64(res.rate),
                format_f64(target),
                format_f64(dist.mean),
                format_f64(dist.stderr),
                cfg.trials
            )
            .unwrap();
        }
    }
    Ok(CommandOutput::ok(out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlerSweepConfig {
    pub channel: BinaryInputChannel,
    pub n: Vec<u32>,
    pub rates: Vec<f64>,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub profile_trials: Option<u64>,
}

pub const BLER_HEADER: &str = "n,rate,bler,union_bound,trials";

/// Block error rates against `Σ_{i ∈ F^c} Z^(i)`, which equals the gap-table
/// value `m^(|F^c|)`.
pub fn cmd_bler_sweep(cfg: &BlerSweepConfig, seed: Option<u64>) -> Result<CommandOutput> {
    let seed = seed.unwrap_or(cfg.seed);
    let mut out = String::from(BLER_HEADER);
    out.push('\n');
    for &n in &cfg.n {
        let t = TransformSpec::new(n)?;
        let profile = z_profile_auto(&cfg.channel, n, cfg.profile_trials.unwrap_or(DEFAULT_PROFILE_TRIALS), seed)?;
        for &r in &cfg.rates {
            let frozen = select_frozen(&profile.z, frozen_count_for_rate(t.len(), r)?)?;
            let spec = CodeSpec::zero_frozen(t, frozen, cfg.channel.clone())?;
            let bound = profile.sum_over(&spec.info_set()).min(1.0);
            let res = measure_bler(&spec, cfg.trials, seed)?;
            writeln!(
                out,
                "{n},{},{},{},{}",
                format_f64(res.rate),
                format_f64(res.block_error.expect("block error result").mean),
                format_f64(bound),
                cfg.trials
            )
            .unwrap();
        }
    }
    Ok(CommandOutput::ok(out))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeProfiles {
    pub source: PathBuf,
    pub channel: PathBuf,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub n: u32,
    #[serde(rename = "D")]
    pub d: f64,
    pub p: f64,
    pub rate_margin: f64,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Precomputed profiles; paths are relative to the configuration file.
    #[serde(default)]
    pub profiles: Option<SchemeProfiles>,
    #[serde(default)]
    pub profile_trials: Option<u64>,
}

/// Metric channels `(source, channel)` of each scheme.
pub fn scheme_channels(scheme: Scheme, d: f64, p: f64) -> Result<(BinaryInputChannel, BinaryInputChannel)> {
    Ok(match scheme {
        Scheme::Wz | Scheme::OneHelper => (BinaryInputChannel::bsc(d)?, BinaryInputChannel::bsc(rates::star(d, p)?)?),
        Scheme::Gp => (BinaryInputChannel::bsc(d)?, BinaryInputChannel::bsc(p)?),
        Scheme::Storage => (BinaryInputChannel::bsec(p, d)?, BinaryInputChannel::bsc(d)?),
    })
}

fn load_profile(path: &Path, expect: &BinaryInputChannel, n: u32) -> Result<ReliabilityProfile> {
    let p: ReliabilityProfile = load_config(path)?;
    if p.n != n {
        return Err(Error::Config(format!("{}: profile has n = {}, expected {n}", path.display(), p.n)));
    }
    if &p.channel != expect {
        return Err(Error::Config(format!("{}: profile channel does not match the scheme", path.display())));
    }
    Ok(p)
}

/// Builds the nested code of a scheme configuration.
pub fn scheme_design(cfg: &SchemeConfig, base: &Path, seed: u64) -> Result<NestedCodeSpec> {
    if !(0.0..1.0).contains(&cfg.rate_margin) {
        return Err(Error::Config(format!("rate_margin {} outside [0, 1)", cfg.rate_margin)));
    }
    let (ws, wc) = scheme_channels(cfg.scheme, cfg.d, cfg.p)?;
    let (ps, pc) = match &cfg.profiles {
        Some(paths) => (
            load_profile(&base.join(&paths.source), &ws, cfg.n)?,
            load_profile(&base.join(&paths.channel), &wc, cfg.n)?,
        ),
        None => {
            let trials = cfg.profile_trials.unwrap_or(DEFAULT_PROFILE_TRIALS);
            (z_profile_auto(&ws, cfg.n, trials, seed)?, z_profile_auto(&wc, cfg.n, trials, seed ^ 1)?)
        }
    };
    let (d, p, m) = (cfg.d, cfg.p, cfg.rate_margin);
    match cfg.scheme {
        Scheme::Wz => schemes::design_wz(d, p, m, &ps, &pc),
        Scheme::Gp => schemes::design_gp(d, p, m, &ps, &pc),
        Scheme::Storage => schemes::design_storage(p, d, m, &ps, &pc),
        Scheme::OneHelper => schemes::design_helper(d, p, m, &ps, &pc),
    }
}

pub fn run_scheme(cfg: &SchemeConfig, base: &Path, seed: Option<u64>) -> Result<SchemeResult> {
    let seed = seed.unwrap_or(cfg.seed);
    let nested = scheme_design(cfg, base, seed)?;
    match cfg.scheme {
        Scheme::Wz => schemes::simulate_wz(&nested, cfg.p, cfg.trials, seed),
        Scheme::Gp => schemes::simulate_gp(&nested, cfg.p, cfg.trials, seed),
        Scheme::Storage => schemes::simulate_storage(&nested, cfg.p, cfg.d, cfg.trials, seed),
        Scheme::OneHelper => schemes::simulate_helper(&nested, cfg.p, cfg.trials, seed),
    }
}

pub fn cmd_scheme(cfg: &SchemeConfig, base: &Path, seed: Option<u64>) -> Result<CommandOutput> {
    Ok(CommandOutput::ok(to_string_pretty(&run_scheme(cfg, base, seed)?)?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapTableConfig {
    pub channel: BinaryInputChannel,
    pub n: u32,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

pub const GAP_HEADER: &str = "i,rate,m,M";

/// `m^(i)` and `M^(i)` for `i = 0..=N`.
pub fn cmd_gap_table(cfg: &GapTableConfig, seed: Option<u64>) -> Result<CommandOutput> {
    let seed = seed.unwrap_or(cfg.seed);
    let p = z_profile_auto(&cfg.channel, cfg.n, cfg.trials.unwrap_or(DEFAULT_PROFILE_TRIALS), seed)?;
    let g = gap_table(&p.z);
    let len = p.len();
    let mut out = String::from(GAP_HEADER);
    out.push('\n');
    for i in 0..=len {
        writeln!(
            out,
            "{i},{},{},{}",
            format_f64(i as f64 / len as f64),
            format_f64(g.m[i]),
            format_f64(g.big_m[i])
        )
        .unwrap();
    }
    Ok(CommandOutput::ok(out))
}

fn default_validate_n() -> u32 {
    2
}

fn default_instances() -> u64 {
    100
}

fn default_pairs() -> u64 {
    10_000
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    /// Largest exponent exercised; each suite caps it at what it can afford.
    #[serde(default = "default_validate_n")]
    pub n: u32,
    /// Random instances for the gauge suite.
    #[serde(default = "default_instances")]
    pub instances: u64,
    /// Random channel pairs for the Bhattacharyya-bounds suite.
    #[serde(default = "default_pairs")]
    pub pairs: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Name of a suite whose computed quantity is deliberately perturbed.
    #[serde(default)]
    pub inject: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub status: SuiteStatus,
    pub checked: u64,
    pub violations: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: u32,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

pub const SUITES: [&str; 5] = ["oracle", "gauge", "posterior-bias", "bhattacharyya-bounds", "tree-process"];

fn suite(name: &'static str, checked: u64, violations: u64, detail: String) -> SuiteReport {
    SuiteReport {
        name,
        status: if violations == 0 { SuiteStatus::Pass } else { SuiteStatus::Fail },
        checked,
        violations,
        detail,
    }
}

fn skipped(name: &'static str, reason: &str) -> SuiteReport {
    SuiteReport {
        name,
        status: SuiteStatus::Skip,
        checked: 0,
        violations: 0,
        detail: reason.to_string(),
    }
}

/// A random stochastic row of length `m`.
fn random_row(m: usize, rng: &mut dyn RngCore) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m).map(|_| unit_draw(rng) + 1e-3).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    let head: f64 = v[..m - 1].iter().sum();
    v[m - 1] = (1.0 - head).max(0.0);
    v
}

/// A random binary-input channel with at most six outputs.
pub fn random_channel(rng: &mut dyn RngCore) -> Result<BinaryInputChannel> {
    let m = 1 + (rng.next_u32() % 6) as usize;
    let p0 = random_row(m, rng);
    let p1 = random_row(m, rng);
    BinaryInputChannel::generic(p0, p1)
}

fn validate_oracle(n: u32, perturb: bool) -> Result<SuiteReport> {
    let chans = [
        BinaryInputChannel::bsc(0.11)?,
        BinaryInputChannel::bsc(0.3)?,
        BinaryInputChannel::bec(0.5)?,
        BinaryInputChannel::bsec(0.5, 0.1)?,
    ];
    let mut checked = 0;
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for w in &chans {
        for k in 1..=n.min(2) {
            let tables = BitChannelTables::new(w, k)?;
            let t = TransformSpec::new(k)?;
            let len = t.len();
            let spec = CodeSpec::zero_frozen(t, IndexSet::empty(), w.clone())?;
            let mut eng = ScEngine::new(k);
            let m = w.outputs();
            for obs in 0..tables.observations() {
                let mut y = vec![0usize; len];
                let mut r = obs;
                for j in (0..len).rev() {
                    y[j] = r % m;
                    r /= m;
                }
                if y.iter().any(|&s| w.llr(s).is_err()) {
                    continue;
                }
                for prefix_code in 0..1usize << (len - 1) {
                    let forced: Vec<u8> = (0..len).map(|j| ((prefix_code >> j) & 1) as u8).collect();
                    let trace = eng.sc_pass(&y, &spec, Rounding::Forced(&forced))?;
                    for i in 0..len {
                        if i > 0 && prefix_code >> i != 0 {
                            continue;
                        }
                        let (a, b) = tables.pair(i, obs, &forced[..i]);
                        if a + b == 0.0 {
                            continue;
                        }
                        let mut got = trace.llr[i];
                        if perturb {
                            got += 1e-6;
                        }
                        let want = (a / b).ln();
                        checked += 1;
                        let ok = if want.is_finite() {
                            let diff = (got - want).abs();
                            worst = worst.max(diff);
                            diff <= 1e-9
                        } else {
                            got == want
                        };
                        if !ok {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    let bec = BinaryInputChannel::bec(0.5)?;
    for k in 0..=n.min(3) {
        checked += 1;
        if z_profile_enum(&bec, k)?.z != z_profile_bec(0.5, k)?.z {
            let a = z_profile_enum(&bec, k)?.z;
            let b = z_profile_bec(0.5, k)?.z;
            if a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-15) {
                violations += 1;
            }
        }
    }
    Ok(suite(
        "oracle",
        checked,
        violations,
        format!("max |Λ_sc − Λ_enum| = {worst:.3e} over BSC(0.11), BSC(0.3), BEC(0.5), BSEC(0.5, 0.1)"),
    ))
}

fn validate_gauge(n: u32, instances: u64, seed: u64, perturb: bool) -> Result<SuiteReport> {
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    let w = BinaryInputChannel::bsc(0.11)?;
    for t in 0..instances {
        let mut rng = stream(seed, Purpose::Auxiliary, t);
        let k = 1 + (rng.next_u32() % n.min(8));
        let ts = TransformSpec::new(k)?;
        let len = ts.len();
        let frozen = IndexSet::new((0..len).filter(|_| rng.next_u32() & 1 == 1));
        let vals = BitVector::from_bits(&(0..frozen.len()).map(|_| (rng.next_u32() & 1) as u8).collect::<Vec<_>>());
        let spec = CodeSpec::new(ts, frozen.clone(), vals, w.clone())?;
        let y = BitVector::from_bits(&(0..len).map(|_| (rng.next_u32() & 1) as u8).collect::<Vec<_>>());
        let mut y2 = BitVector::from_bits(&(0..len).map(|_| (rng.next_u32() & 1) as u8).collect::<Vec<_>>());
        let s = crate::codec::gauge_shift(&y, &y2, &spec)?;
        let shifted = spec.frozen_values() ^ &crate::transform::extract(&s, &frozen)?;
        let spec2 = spec.with_frozen_values(shifted)?;
        if perturb {
            y2.flip(0);
        }
        let mut eng = ScEngine::new(k);
        let mut rrng = stream(seed, Purpose::Rounding, t);
        let report: GaugeReport = match crate::codec::gauge_check(&mut eng, &y, &y2, &spec, &spec2, Rounding::Random(&mut rrng)) {
            Ok(r) => r,
            Err(Error::Precondition(_)) if perturb => {
                violations += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        worst = worst.max(report.max_abs_diff);
        if !report.pass {
            violations += 1;
        }
    }
    Ok(suite(
        "gauge",
        instances,
        violations,
        format!("{instances} coupled BSC(0.11) instances up to n = {}; max |Λ' ∓ Λ| = {worst:.3e}", n.min(8)),
    ))
}

fn validate_posterior_bias(n: u32, perturb: bool) -> Result<SuiteReport> {
    let mut checked = 0;
    let mut violations = 0;
    for d in [0.05, 0.11, 0.2, 0.3, 0.4] {
        let w = BinaryInputChannel::bsc(d)?;
        for k in 1..=n.min(3) {
            let tables = BitChannelTables::new(&w, k)?;
            let z = tables.z();
            let bias = tables.posterior_bias();
            for delta in [0.05, 0.1, 0.2] {
                for i in 0..z.len() {
                    let zi = if perturb { 1.0 } else { z[i] };
                    if zi >= 1.0 - 2.0 * delta * delta {
                        checked += 1;
                        if bias[i] > delta {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(suite(
        "posterior-bias",
        checked,
        violations,
        "z_i ≥ 1 − 2δ² implies E|1/2 − P(U_i = 0 | ·)| ≤ δ for δ ∈ {0.05, 0.1, 0.2}".into(),
    ))
}

fn validate_bhattacharyya_bounds(pairs: u64, seed: u64, perturb: bool) -> Result<SuiteReport> {
    let mut violations = 0;
    for t in 0..pairs {
        let mut rng = stream(seed, Purpose::Auxiliary, 1 << 32 | t);
        let w1 = random_channel(&mut rng)?;
        let w2 = random_channel(&mut rng)?;
        let (z1, z2) = (w1.bhattacharyya(), w2.bhattacharyya());
        let mut zm = combine_minus(&w1, &w2, DEFAULT_ALPHABET_CAP)?.bhattacharyya();
        if perturb {
            zm -= 0.05;
        }
        let zp = combine_plus(&w1, &w2, DEFAULT_ALPHABET_CAP)?.bhattacharyya();
        let bound = (z1 * z1 + z2 * z2 - z1 * z1 * z2 * z2).sqrt();
        if zm < bound - 1e-12 || (zp - z1 * z2).abs() > 1e-12 {
            violations += 1;
        }
    }
    Ok(suite(
        "bhattacharyya-bounds",
        pairs,
        violations,
        format!("{pairs} random channel pairs with at most 6 outputs"),
    ))
}

fn validate_tree(n: u32, seed: u64, perturb: bool) -> Result<SuiteReport> {
    let mut checked = 0;
    let mut violations = 0;
    let cases = [
        (BinaryInputChannel::bec(0.5)?, 10 * n),
        (BinaryInputChannel::bsc(0.11)?, n.min(3)),
        (BinaryInputChannel::bsec(0.5, 0.1)?, n.min(2)),
    ];
    for (w, depth) in &cases {
        for s in 0..8 {
            let tr = tree_process_sample(w, *depth, seed.wrapping_add(s), DEFAULT_ALPHABET_CAP)?;
            for k in 0..tr.branch_bits.len() {
                let a = tr.z_path[k];
                let mut b = tr.z_path[k + 1];
                if perturb {
                    b += 0.1;
                }
                checked += 1;
                let ok = if tr.branch_bits[k] == 1 {
                    (b - a * a).abs() <= 1e-12
                } else {
                    b >= (2.0 * a * a - a.powi(4)).sqrt() - 1e-12
                };
                if !ok {
                    violations += 1;
                }
            }
        }
    }
    Ok(suite(
        "tree-process",
        checked,
        violations,
        "Z_{k+1} = Z_k² on plus steps and Z_{k+1} ≥ √(2Z_k² − Z_k⁴) on minus steps".into(),
    ))
}

pub fn run_validate(cfg: &ValidateConfig, seed: Option<u64>) -> Result<ValidationReport> {
    let seed = seed.unwrap_or(cfg.seed);
    if let Some(name) = &cfg.inject {
        if !SUITES.contains(&name.as_str()) {
            return Err(Error::Config(format!("unknown suite {name:?} for fault injection")));
        }
    }
    let inject = |name: &str| cfg.inject.as_deref() == Some(name);
    let n = cfg.n;
    let reason = "n = 0: no synthetic channels to check";
    let mut suites = Vec::new();
    suites.push(if n == 0 { skipped("oracle", reason) } else { validate_oracle(n, inject("oracle"))? });
    suites.push(if n == 0 {
        skipped("gauge", reason)
    } else {
        validate_gauge(n, cfg.instances, seed, inject("gauge"))?
    });
    suites.push(if n == 0 {
        skipped("posterior-bias", reason)
    } else {
        validate_posterior_bias(n, inject("posterior-bias"))?
    });
    suites.push(validate_bhattacharyya_bounds(cfg.pairs, seed, inject("bhattacharyya-bounds"))?);
    suites.push(if n == 0 {
        skipped("tree-process", reason)
    } else {
        validate_tree(n, seed, inject("tree-process"))?
    });
    let pass = suites.iter().all(|s| s.status != SuiteStatus::Fail);
    Ok(ValidationReport { n, seed, suites, pass })
}

pub fn cmd_validate(cfg: &ValidateConfig, seed: Option<u64>) -> Result<CommandOutput> {
    let report = run_validate(cfg, seed)?;
    Ok(CommandOutput {
        body: to_string_pretty(&report)?,
        success: report.pass,
    })
}

/// Sidecar `<out>.meta.json` with the wall-clock fields kept out of the body.
pub fn write_sidecar(out: &Path, command: &str, workers: Option<usize>) -> Result<PathBuf> {
    #[derive(Serialize)]
    struct Meta<'a> {
        command: &'a str,
        created_unix: u64,
        workers: Option<usize>,
        version: &'a str,
    }
    let created_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = Meta {
        command,
        created_unix,
        workers,
        version: env!("CARGO_PKG_VERSION"),
    };
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    let path = PathBuf::from(name);
    fs::write(&path, to_string_pretty(&meta)?)?;
    Ok(path)
}
