//! Encrypts a PGM/PPM image (or a generated test scene), decrypts it again and
//! checks the roundtrip.
//!
//!     cargo run --release --example encrypt_image -- [input.ppm] [model.tdlm]
//!
//! Without a model file a small network is trained first; ciphertexts made
//! that way are only decryptable with the same small network.

use std::time::Instant;

use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};
use chaoscrypt::{
    decrypt, encrypt, netpbm, scene, train_model, BlstmModel, CipherConfig, KeySet, TrainConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> chaoscrypt::Result<()> {
    let mut args = std::env::args().skip(1);
    let plain = match args.next() {
        Some(path) => netpbm::read_image(path)?,
        None => scene::natural_scene(256, 256, 3, 1),
    };
    let model = match args.next() {
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
    let keys = KeySet::random(&mut ChaCha20Rng::seed_from_u64(42));
    print!("key:\n{keys}");

    let cfg = CipherConfig::default();
    let t = Instant::now();
    let cipher = encrypt(&plain, &keys, &model, &cfg)?;
    println!(
        "encrypted {:?} in {:.3} s",
        plain.dims(),
        t.elapsed().as_secs_f64()
    );
    let t = Instant::now();
    let back = decrypt(&cipher, &keys, &model, &cfg)?;
    println!(
        "decrypted in {:.3} s, roundtrip exact: {}",
        t.elapsed().as_secs_f64(),
        back == plain
    );

    let ext = if plain.channels() == 1 { "pgm" } else { "ppm" };
    let dir = std::env::temp_dir();
    for (name, img) in [("plain", &plain), ("cipher", &cipher)] {
        let path = dir.join(format!("chaoscrypt-{name}.{ext}"));
        std::fs::write(&path, netpbm::encode(img))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
