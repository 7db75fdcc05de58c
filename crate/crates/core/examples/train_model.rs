//! Trains the default sequence model and reports how well it predicts the
//! orbit one step ahead and how quickly its free-running output drifts away.
//!
//!     cargo run --release --example train_model -- [out.tdlm] [epochs]

use std::time::Instant;

use chaoscrypt::maps::ChaoticMap;
use chaoscrypt::neural::{train_model, TrainConfig, TRAIN_DISCARD, TRAIN_LEN};
use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};

fn main() -> chaoscrypt::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "model.tdlm".into());
    let epochs = args
        .next()
        .map(|e| e.parse().expect("epochs"))
        .unwrap_or(50);

    let config = TrainConfig {
        epochs,
        ..TrainConfig::default()
    };
    let t = Instant::now();
    let model = train_model(DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0, config)?;
    println!(
        "trained {epochs} epochs in {:.1} s",
        t.elapsed().as_secs_f64()
    );
    println!(
        "final training mse  {:.6}",
        model.meta().final_loss.unwrap_or(f64::NAN)
    );
    println!(
        "held-out 1-step mse {:.6}",
        model.meta().holdout_mse.unwrap_or(f64::NAN)
    );

    // Free-running prediction from a window of the true orbit, past the corpus.
    let w = model.window();
    let horizon = 500;
    let orbit = ChaoticMap::sqcm(DEFAULT_TRAIN_PARAM)?.iterate(
        DEFAULT_TRAIN_X0,
        TRAIN_DISCARD + TRAIN_LEN,
        w + horizon,
    )?;
    let predicted = model.predict(&orbit[..w], horizon)?;
    let drift = orbit[w..]
        .iter()
        .zip(predicted.iter())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / horizon as f64;
    println!("mean |true - predicted| over {horizon} steps {drift:.4}");

    std::fs::write(&out, model.to_bytes())?;
    println!("wrote {out}");
    Ok(())
}
