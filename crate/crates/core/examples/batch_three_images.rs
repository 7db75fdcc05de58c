//! Three grayscale images of one size are stacked and encrypted as a single
//! three-channel cube, so each ciphertext depends on all three plaintexts.
//!
//!     cargo run --release --example batch_three_images -- [model.tdlm]

use chaoscrypt::cipher::{decrypt_batch, encrypt_batch, is_stackable};
use chaoscrypt::metrics::npcr;
use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};
use chaoscrypt::{scene, train_model, BlstmModel, CipherConfig, KeySet, TrainConfig};

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
    let keys = KeySet::new(0.25, 0.75, 2048.5, 2500)?;
    let cfg = CipherConfig::default();
    let images: Vec<_> = (0..3)
        .map(|s| scene::natural_scene(96, 128, 1, s))
        .collect();
    println!("stackable: {}", is_stackable(&images));

    let cipher = encrypt_batch(&images, &keys, &model, &cfg)?;
    let back = decrypt_batch(&cipher, &keys, &model, &cfg)?;
    println!("roundtrip exact: {}", back == images);

    // Changing only the third image also changes the first two ciphertexts.
    let mut changed = images.clone();
    changed[2].data_mut()[0] ^= 0x80;
    let cipher2 = encrypt_batch(&changed, &keys, &model, &cfg)?;
    for (i, (a, b)) in cipher.iter().zip(&cipher2).enumerate() {
        println!(
            "image {i}: {:.2} % of ciphertext pixels changed",
            npcr(a, b)?
        );
    }
    Ok(())
}
