mod common;

use chaoscrypt::keys::KeySet;
use chaoscrypt::sequence::{
    derive_streams, diffusion_entry, generate_hybrid, quantize_byte, HybridSequence,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `⌊v·10⁹⌋ mod 256` from the exact decimal expansion of `v`.
fn decimal_oracle(v: f64) -> u8 {
    // Every finite double has a terminating expansion of at most 1074
    // fractional digits.
    let text = format!("{:.1074}", v);
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int_part, frac) = digits.split_once('.').unwrap();
    let (head, tail) = frac.split_at(9);
    let mut q: BigInt = format!("{int_part}{head}").parse().unwrap();
    let remainder = tail.bytes().any(|b| b != b'0');
    if negative {
        q = -q;
        if remainder {
            q -= 1;
        }
    }
    let r = ((q % 256) + 256) % 256;
    u8::try_from(r).unwrap()
}

#[test]
fn worked_quantisation_values() {
    assert_eq!(decimal_oracle(0.25), 128);
    assert_eq!(diffusion_entry(0.5 * 0.5), 129);
    assert_eq!(decimal_oracle(-0.3), 0);
    assert_eq!(diffusion_entry(-0.3), 1);
}

#[test]
fn products_near_integer_boundaries() {
    // Values whose scaled product sits just beside an integer, where
    // rounding v*1e9 in floating point would cross it.
    for k in [1u64, 7, 255, 256, 999_999_999, 123_456_789] {
        let centre = k as f64 / 1e9;
        let mut v = centre;
        for _ in 0..4 {
            v = f64::from_bits(v.to_bits() - 1);
        }
        for _ in 0..9 {
            assert_eq!(quantize_byte(v), decimal_oracle(v), "{v:e}");
            assert_eq!(quantize_byte(-v), decimal_oracle(-v), "{:e}", -v);
            v = f64::from_bits(v.to_bits() + 1);
        }
    }
}

proptest! {
    #[test]
    fn quantisation_matches_decimal_oracle(v in -1.0f64..=1.0) {
        prop_assert_eq!(quantize_byte(v), decimal_oracle(v));
    }

    #[test]
    fn quantisation_matches_on_wide_range(v in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL) {
        prop_assert_eq!(quantize_byte(v), decimal_oracle(v));
    }

    #[test]
    fn entries_stay_in_codomain(values in prop::collection::vec(-1.0f64..=1.0, 4 * 6)) {
        let (_, dm) = derive_streams(&HybridSequence::new(values, 2, 3).unwrap()).unwrap();
        for k in 0..3 {
            prop_assert!(dm.channel(k).iter().all(|&e| (1..=256).contains(&e)));
        }
    }
}

fn keys() -> KeySet {
    KeySet::new(0.318309886183791, 0.7071067811865476, 5521.25, 4096).unwrap()
}

#[test]
fn smallest_hybrid() {
    let model = common::small_model();
    let h = generate_hybrid(&keys(), model, 1, 1).unwrap();
    assert_eq!(h.values().len(), 4);
    let orbit = chaoscrypt::ChaoticMap::sqcm(keys().key_a)
        .unwrap()
        .iterate(keys().key_x1, keys().key_n0 as usize, 2)
        .unwrap();
    assert_eq!(h.map_part(), orbit.as_slice());
    assert!(h.network_part().iter().all(|v| v.abs() <= 1.0));
}

#[test]
fn hybrid_is_deterministic() {
    let model = common::small_model();
    assert_eq!(
        generate_hybrid(&keys(), model, 3, 5).unwrap(),
        generate_hybrid(&keys(), model, 3, 5).unwrap()
    );
}

#[test]
fn seed_window_comes_from_orbit_tail() {
    let model = common::small_model();
    let k = keys();
    let (m, n) = (4, 4);
    let h = generate_hybrid(&k, model, m, n).unwrap();
    let w = model.window();
    let seed: Vec<f64> = h.map_part()[2 * m * n - w..]
        .iter()
        .map(|&v| chaoscrypt::sequence::wrap_perturb(v, k.key_y1))
        .collect();
    assert_eq!(
        model.predict(&seed, 2 * m * n).unwrap().as_slice(),
        h.network_part()
    );
}

#[test]
fn short_orbit_borrows_seed_from_transient() {
    // 2mn = 2 is shorter than the window; the seed reaches back into the
    // discarded iterates.
    let model = common::small_model();
    let k = keys();
    let w = model.window();
    let h = generate_hybrid(&k, model, 1, 1).unwrap();
    let tail = chaoscrypt::ChaoticMap::sqcm(k.key_a)
        .unwrap()
        .iterate(k.key_x1, k.key_n0 as usize + 2 - w, w)
        .unwrap();
    let seed: Vec<f64> = tail
        .iter()
        .map(|&v| chaoscrypt::sequence::wrap_perturb(v, k.key_y1))
        .collect();
    assert_eq!(
        model.predict(&seed, 2).unwrap().as_slice(),
        h.network_part()
    );
}

#[test]
fn every_key_moves_the_derived_matrices() {
    let model = common::default_model();
    let base = keys();
    let (m, n) = (16, 16);
    let reference = derive_streams(&generate_hybrid(&base, model, m, n).unwrap())
        .unwrap()
        .1
        .to_bytes();
    let bump = |v: f64| f64::from_bits(v.to_bits() + 1);
    let variants = [
        KeySet {
            key_x1: bump(base.key_x1),
            ..base
        },
        KeySet {
            key_y1: bump(base.key_y1),
            ..base
        },
        KeySet {
            key_a: bump(base.key_a),
            ..base
        },
        KeySet {
            key_n0: base.key_n0 + 1,
            ..base
        },
    ];
    let weak: Vec<String> = ["x1", "y1", "a", "n0"]
        .iter()
        .zip(variants)
        .filter_map(|(name, v)| {
            let other = derive_streams(&generate_hybrid(&v, model, m, n).unwrap())
                .unwrap()
                .1
                .to_bytes();
            let changed = reference.iter().zip(&other).filter(|(a, b)| a != b).count();
            (changed * 2 < reference.len())
                .then(|| format!("{name}: {changed} of {}", reference.len()))
        })
        .collect();
    assert!(
        weak.is_empty(),
        "keys whose last-bit flip moved under half the entries: {weak:?}"
    );
}

#[test]
fn x1_offset_of_1e_12_decorrelates_the_matrices() {
    let model = common::default_model();
    let base = keys();
    let shifted = KeySet {
        key_x1: base.key_x1 + 1e-12,
        ..base
    };
    let derive = |k: &KeySet| {
        derive_streams(&generate_hybrid(k, model, 32, 32).unwrap())
            .unwrap()
            .1
            .to_bytes()
    };
    let (a, b) = (derive(&base), derive(&shifted));
    let changed = a.iter().zip(&b).filter(|(p, q)| p != q).count();
    let per_matrix: Vec<usize> = a
        .chunks(1024)
        .zip(b.chunks(1024))
        .map(|(p, q)| p.iter().zip(q).filter(|(u, v)| u != v).count())
        .collect();
    assert!(
        changed * 10 > a.len() * 9,
        "{changed} of {} changed; X, Y, Z of 1024 each: {per_matrix:?}",
        a.len()
    );
}
