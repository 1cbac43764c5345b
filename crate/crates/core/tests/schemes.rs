use polarlab_core::channel::rates;
use polarlab_core::construction::z_profile_monte_carlo;
use polarlab_core::schemes::{
    design_gp, design_helper, design_storage, design_wz, simulate_gp, simulate_helper, simulate_storage, simulate_wz,
};
use polarlab_core::{BinaryInputChannel, Containment, ReliabilityProfile};

const N: u32 = 8;
/// Wide enough that SC decoding at N = 256 rarely fails.
const WIDE: f64 = 0.4;

fn profile(w: BinaryInputChannel, seed: u64) -> ReliabilityProfile {
    z_profile_monte_carlo(&w, N, 3000, seed).unwrap()
}

fn bsc(d: f64) -> ReliabilityProfile {
    profile(BinaryInputChannel::bsc(d).unwrap(), 1)
}

#[test]
fn wz_without_side_noise_is_plain_source_coding() {
    let nested = design_wz(0.11, 0.0, WIDE, &bsc(0.11), &bsc(0.11)).unwrap();
    assert_eq!(nested.containment, Containment::SourceInChannel);
    assert!(nested.f_s.is_subset(&nested.f_c));
    let r = simulate_wz(&nested, 0.0, 300, 5).unwrap();
    assert!(r.block_error.mean < 0.05, "{r:?}");
    let d = r.distortion.unwrap();
    assert!((d.mean - 0.11).abs() < 0.06, "{d:?}");
    assert!((r.rate_encoder - WIDE).abs() <= 2.0 / 256.0);
}

#[test]
fn gp_with_equal_parameters_has_no_message() {
    let nested = design_gp(0.2, 0.2, 0.1, &bsc(0.2), &bsc(0.2)).unwrap();
    assert_eq!(nested.message_len(), 0);
    assert_eq!(nested.rate(), 0.0);
}

#[test]
fn gp_rate_and_weight() {
    let (d, p) = (0.3, 0.02);
    let nested = design_gp(d, p, 0.1, &bsc(d), &bsc(p)).unwrap();
    assert!(nested.f_c.is_subset(&nested.f_s));
    let target = rates::r_gp(d, p).unwrap() - 0.1;
    assert!((nested.rate() - target).abs() <= 2.0 / 256.0, "{}", nested.rate());
    let r = simulate_gp(&nested, p, 300, 6).unwrap();
    let wt = r.input_weight.unwrap();
    assert!(wt.mean < d + 0.06, "{wt:?}");

    let nested = design_gp(d, p, WIDE, &bsc(d), &bsc(p)).unwrap();
    let r = simulate_gp(&nested, p, 300, 6).unwrap();
    assert!(r.block_error.mean < 0.05, "{:?}", r.block_error);
}

#[test]
fn storage_rate_matches_capacity_minus_margin() {
    let (p, d) = (0.5, 0.02);
    let src = profile(BinaryInputChannel::bsec(p, d).unwrap(), 2);
    let nested = design_storage(p, d, 0.1, &src, &bsc(d)).unwrap();
    let target = rates::storage_capacity(p, d).unwrap() - 0.1;
    assert!((nested.rate() - target).abs() <= 2.0 / 256.0, "{}", nested.rate());
    let r = simulate_storage(&nested, p, d, 300, 7).unwrap();
    assert!(r.stuck_disagreement.unwrap().mean < 0.1, "{r:?}");

    let nested = design_storage(p, d, WIDE, &src, &bsc(d)).unwrap();
    let r = simulate_storage(&nested, p, d, 300, 7).unwrap();
    assert!(r.block_error.mean < 0.05, "{r:?}");
}

#[test]
fn helper_rates_and_recovery() {
    let (d, p) = (0.05, 0.05);
    let nested = design_helper(d, p, WIDE, &bsc(d), &bsc(rates::star(d, p).unwrap())).unwrap();
    let r = simulate_helper(&nested, p, 300, 8).unwrap();
    let len = 256.0;
    assert_eq!(r.rate_encoder, nested.f_c.len() as f64 / len);
    assert_eq!(r.rate_helper, Some(1.0 - nested.f_s.len() as f64 / len));
    assert!(r.distortion.unwrap().mean < d + 0.06);
    assert!(r.block_error.mean < 0.05, "{r:?}");
}

#[test]
fn simulations_are_reproducible() {
    let nested = design_wz(0.11, 0.1, 0.1, &bsc(0.11), &bsc(rates::star(0.11, 0.1).unwrap())).unwrap();
    assert_eq!(simulate_wz(&nested, 0.1, 100, 9).unwrap(), simulate_wz(&nested, 0.1, 100, 9).unwrap());
    assert!(simulate_gp(&nested, 0.1, 10, 9).is_err());
}
