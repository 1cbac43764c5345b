mod common;

use polarlab_core::channel::{combine_minus, combine_plus, rates};
use polarlab_core::BinaryInputChannel;
use proptest::prelude::*;

fn channel() -> impl Strategy<Value = BinaryInputChannel> {
    (1usize..5).prop_flat_map(|m| {
        (proptest::collection::vec(0.0f64..1.0, m), proptest::collection::vec(0.0f64..1.0, m)).prop_filter_map(
            "zero row",
            |(a, b)| {
                let norm = |v: Vec<f64>| -> Option<Vec<f64>> {
                    let s: f64 = v.iter().sum();
                    if s < 1e-6 {
                        return None;
                    }
                    let mut v: Vec<f64> = v.iter().map(|x| x / s).collect();
                    let head: f64 = v[..v.len() - 1].iter().sum();
                    *v.last_mut().unwrap() = (1.0 - head).max(0.0);
                    Some(v)
                };
                BinaryInputChannel::generic(norm(a)?, norm(b)?).ok()
            },
        )
    })
}

fn z_direct(w: &BinaryInputChannel) -> f64 {
    (0..w.outputs()).map(|y| (w.prob(y, 0) * w.prob(y, 1)).sqrt()).sum()
}

#[test]
fn named_channels_by_hand() {
    let bsc = BinaryInputChannel::bsc(0.11).unwrap();
    assert!((bsc.bhattacharyya() - 2.0 * (0.11f64 * 0.89).sqrt()).abs() < 1e-15);
    assert!((bsc.symmetric_mutual_info() - (1.0 - common::h2(0.11))).abs() < 1e-12);
    let bec = BinaryInputChannel::bec(0.3).unwrap();
    assert!((bec.bhattacharyya() - 0.3).abs() < 1e-15);
    assert!((bec.symmetric_mutual_info() - 0.7).abs() < 1e-12);
    let bsec = BinaryInputChannel::bsec(0.5, 0.1).unwrap();
    assert!((bsec.bhattacharyya() - (0.5 + 0.5 * 2.0 * (0.09f64).sqrt())).abs() < 1e-12);
    assert!(BinaryInputChannel::bsc(0.6).is_err());
    assert!(BinaryInputChannel::generic(vec![0.5, 0.6], vec![0.5, 0.5]).is_err());
}

#[test]
fn combinations_are_the_first_synthetic_channels() {
    for w in [
        BinaryInputChannel::bsc(0.11).unwrap(),
        BinaryInputChannel::bec(0.4).unwrap(),
        BinaryInputChannel::bsec(0.5, 0.1).unwrap(),
    ] {
        let z = common::z_brute(&w, 1);
        assert!((combine_minus(&w, &w, 1 << 16).unwrap().bhattacharyya() - z[0]).abs() < 1e-12);
        assert!((combine_plus(&w, &w, 1 << 16).unwrap().bhattacharyya() - z[1]).abs() < 1e-12);
    }
    let z = common::z_brute(&BinaryInputChannel::bsc(0.11).unwrap(), 1);
    assert!((z[0] - 0.793631).abs() < 1e-6 && (z[1] - 0.3916).abs() < 1e-12);
}

#[test]
fn alphabet_cap_is_enforced() {
    let w = BinaryInputChannel::bsec(0.5, 0.1).unwrap();
    assert!(combine_minus(&w, &w, 8).is_err());
    assert!(combine_plus(&w, &w, 17).is_err());
    assert!(combine_plus(&w, &w, 18).is_ok());
}

#[test]
fn rate_formulas_by_hand() {
    assert!((rates::binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(rates::binary_entropy(0.0).unwrap(), 0.0);
    assert!((rates::inverse_binary_entropy(0.4).unwrap() - common::h2_inverse(0.4)).abs() < 1e-9);
    assert!((rates::inverse_binary_entropy(0.4).unwrap() - 0.079_38).abs() < 1e-4);
    assert!((rates::star(0.11, 0.25).unwrap() - 0.305).abs() < 1e-12);
    assert!((rates::r_gp(0.25, 0.11).unwrap() - (common::h2(0.25) - common::h2(0.11))).abs() < 1e-12);
    assert!((rates::storage_capacity(0.5, 0.1).unwrap() - 0.5 * (1.0 - common::h2(0.1))).abs() < 1e-12);
    assert!(rates::inverse_binary_entropy(1.5).is_err());
}

proptest! {
    #[test]
    fn bhattacharyya_matches_definition(w in channel()) {
        prop_assert!((w.bhattacharyya() - z_direct(&w)).abs() < 1e-12);
        prop_assert!(w.bhattacharyya() <= 1.0 + 1e-12);
    }

    #[test]
    fn plus_and_minus_bounds(w1 in channel(), w2 in channel()) {
        let (z1, z2) = (w1.bhattacharyya(), w2.bhattacharyya());
        let minus = combine_minus(&w1, &w2, 1 << 16).unwrap();
        let plus = combine_plus(&w1, &w2, 1 << 16).unwrap();
        prop_assert!((plus.bhattacharyya() - z1 * z2).abs() < 1e-12);
        prop_assert!(minus.bhattacharyya() >= (z1 * z1 + z2 * z2 - z1 * z1 * z2 * z2).sqrt() - 1e-12);
        prop_assert!(minus.bhattacharyya() <= z1 + z2 - z1 * z2 + 1e-12);
    }

    #[test]
    fn combining_conserves_mutual_information(w in channel()) {
        let minus = combine_minus(&w, &w, 1 << 16).unwrap();
        let plus = combine_plus(&w, &w, 1 << 16).unwrap();
        let total = minus.symmetric_mutual_info() + plus.symmetric_mutual_info();
        prop_assert!((total - 2.0 * w.symmetric_mutual_info()).abs() < 1e-9);
    }

    #[test]
    fn inverse_entropy_inverts(p in 0.0f64..=0.5) {
        let h = rates::binary_entropy(p).unwrap();
        prop_assert!((rates::inverse_binary_entropy(h).unwrap() - p).abs() < 1e-7);
    }

    #[test]
    fn json_round_trip(w in channel()) {
        let s = serde_json::to_string(&w).unwrap();
        let back: BinaryInputChannel = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, w);
    }
}
