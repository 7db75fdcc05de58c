//! Decrypting with a key that differs in one scalar by a tiny amount.
//!
//!     cargo run --release --example key_sensitivity -- [model.tdlm]

use chaoscrypt::metrics::npcr;
use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};
use chaoscrypt::{
    decrypt, encrypt, scene, train_model, BlstmModel, CipherConfig, KeySet, TrainConfig,
};

fn main() -> chaoscrypt::Result<()> {
    let model = match std::env::args().nth(1) {
        Some(path) => BlstmModel::load(path)?,
        None => train_model(
            DEFAULT_TRAIN_PARAM,
            DEFAULT_TRAIN_X0,
            TrainConfig {
                hidden_size: 8,
                window: 8,
                epochs: 1,
                ..TrainConfig::default()
            },
        )?,
    };
    let plain = scene::natural_scene(128, 128, 1, 3);
    let keys = KeySet::new(0.318309886183791, 0.7071067811865476, 5521.25, 4096)?;
    let cfg = CipherConfig::default();
    let cipher = encrypt(&plain, &keys, &model, &cfg)?;

    let bump = |v: f64| f64::from_bits(v.to_bits() + 1);
    let wrong = [
        (
            "x1 + 1e-12",
            KeySet {
                key_x1: keys.key_x1 + 1e-12,
                ..keys
            },
        ),
        (
            "x1 + 1 ulp",
            KeySet {
                key_x1: bump(keys.key_x1),
                ..keys
            },
        ),
        (
            "y1 + 1e-12",
            KeySet {
                key_y1: keys.key_y1 + 1e-12,
                ..keys
            },
        ),
        (
            "y1 + 1e-6",
            KeySet {
                key_y1: keys.key_y1 + 1e-6,
                ..keys
            },
        ),
        (
            "a + 1 ulp",
            KeySet {
                key_a: bump(keys.key_a),
                ..keys
            },
        ),
        (
            "n0 + 1",
            KeySet {
                key_n0: keys.key_n0 + 1,
                ..keys
            },
        ),
    ];
    println!("{:<12} {:>18}", "wrong key", "NPCR vs plain (%)");
    for (label, k) in wrong {
        let guess = decrypt(&cipher, &k, &model, &cfg)?;
        println!("{label:<12} {:>18.3}", npcr(&guess, &plain)?);
    }
    Ok(())
}
