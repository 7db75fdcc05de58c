//! Histogram entropy, adjacent-pixel correlation and differential statistics
//! for a plain image and its ciphertext.
//!
//!     cargo run --release --example metrics_report -- [model.tdlm]

use chaoscrypt::metrics::{npcr, uaci, MetricsReport, DEFAULT_CORRELATION_PAIRS};
use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};
use chaoscrypt::{encrypt, scene, train_model, BlstmModel, CipherConfig, KeySet, TrainConfig};

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
    let keys = KeySet::new(0.1234, 0.5678, 3777.7, 3000)?;
    let cfg = CipherConfig::default();
    let plain = scene::natural_scene(256, 256, 1, 11);
    let cipher = encrypt(&plain, &keys, &model, &cfg)?;

    println!("plain image");
    MetricsReport::compute(&plain, None, DEFAULT_CORRELATION_PAIRS, 0)?
        .write_csv(std::io::stdout().lock())?;
    println!("\nciphertext against plain");
    MetricsReport::compute(&cipher, Some(&plain), DEFAULT_CORRELATION_PAIRS, 0)?
        .write_csv(std::io::stdout().lock())?;

    // Differential attack: flip one bit of one pixel.
    let mut tweaked = plain.clone();
    tweaked.data_mut()[128 * 256 + 128] ^= 1;
    let other = encrypt(&tweaked, &keys, &model, &cfg)?;
    println!(
        "\none-bit plaintext change: NPCR {:.3} %, UACI {:.3} %",
        npcr(&cipher, &other)?,
        uaci(&cipher, &other)?
    );
    Ok(())
}
