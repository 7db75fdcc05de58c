//! Runs the core statistical randomness tests on the keystream bytes that
//! feed the diffusion stage.
//!
//!     cargo run --release --example nist_report -- [bits] [model.tdlm]

use chaoscrypt::metrics::{nist_core, write_nist_csv};
use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};
use chaoscrypt::sequence::diffusion_bitstream;
use chaoscrypt::{train_model, BlstmModel, KeySet, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> chaoscrypt::Result<()> {
    let mut args = std::env::args().skip(1);
    let nbits = args
        .next()
        .map(|b| b.parse().expect("bits"))
        .unwrap_or(100_000);
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
    let keys = KeySet::random(&mut ChaCha20Rng::seed_from_u64(7));
    let bits = diffusion_bitstream(&keys, &model, nbits)?;
    let ones = bits.iter().filter(|&&b| b == 1).count();
    println!("{nbits} bits, {:.4} ones", ones as f64 / nbits as f64);

    let results = nist_core(&bits)?;
    write_nist_csv(std::io::stdout().lock(), &results)?;
    Ok(())
}
