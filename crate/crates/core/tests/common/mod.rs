#![allow(dead_code)]

use std::sync::OnceLock;

use chaoscrypt::neural::{train_model, BlstmModel, TrainConfig};
use chaoscrypt::neural::{DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0};

/// Direct transcription of the diffusion listing, 1-indexed, each statement
/// written out as printed. `a[i][j][k]` and `x`, `y`, `z` are indexed from 1;
/// index 0 is unused.
pub fn listing_forward(
    a: &[Vec<[u32; 4]>],
    x: &[Vec<u32>],
    y: &[Vec<u32>],
    z: &[Vec<u32>],
    m: usize,
    n: usize,
) -> Vec<Vec<[u32; 4]>> {
    let md = |v: u32| v % 256;
    let mut c = vec![vec![[0u32; 4]; n + 1]; m + 1];

    c[1][1][1] = md(a[1][1][1] + x[1][1]);
    c[1][1][2] = md(a[1][1][2] + y[1][1]);
    c[1][1][3] = md(a[1][1][3] + z[1][1]);

    for j in 2..=n {
        c[1][j][1] = md(a[1][j][1] + x[1][j] + c[1][j - 1][1] + c[1][j - 1][3]);
        c[1][j][2] = md(a[1][j][2] + y[1][j] + c[1][j - 1][2] + c[1][j - 1][1]);
        c[1][j][3] = md(a[1][j][3] + z[1][j] + c[1][j - 1][3] + c[1][j - 1][2]);
    }

    for i in 2..=m {
        c[i][1][1] = md(a[i][1][1] + x[i][1] + c[i - 1][1][1] + c[i - 1][1][3]);
        c[i][1][2] = md(a[i][1][2] + y[i][1] + c[i - 1][1][2] + c[i - 1][1][1]);
        c[i][1][3] = md(a[i][1][3] + z[i][1] + c[i - 1][1][3] + c[i - 1][1][2]);
    }

    for i in 2..=m {
        for j in 2..=n {
            c[i][j][1] = md(a[i][j][1] + x[i][j] + c[i][j - 1][3] + c[i - 1][j][3]);
            c[i][j][2] = md(a[i][j][2] + y[i][j] + c[i][j - 1][1] + c[i - 1][j][1]);
            c[i][j][3] = md(a[i][j][3] + z[i][j] + c[i][j - 1][2] + c[i - 1][j][2]);
        }
    }
    c
}

/// The default-configuration model. Training takes minutes, so the result
/// is cached under the cargo test scratch directory, keyed by a checksum of
/// the sources that determine it.
pub fn default_model() -> &'static BlstmModel {
    static MODEL: OnceLock<BlstmModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        let sources = [
            include_str!("../../src/neural/model.rs"),
            include_str!("../../src/neural/lstm.rs"),
            include_str!("../../src/maps.rs"),
        ];
        let mut h = crc32fast::Hasher::new();
        sources.iter().for_each(|s| h.update(s.as_bytes()));
        let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"))
            .join(format!("default-{:08x}.tdlm", h.finalize()));
        if let Ok(model) = BlstmModel::load(&path) {
            return model;
        }
        let model = train_model(
            DEFAULT_TRAIN_PARAM,
            DEFAULT_TRAIN_X0,
            TrainConfig::default(),
        )
        .expect("default training");
        let tmp = path.with_extension("partial");
        if std::fs::write(&tmp, model.to_bytes()).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
        model
    })
}

/// A small, quickly trained model for tests that only need some model.
pub fn small_model() -> &'static BlstmModel {
    static MODEL: OnceLock<BlstmModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        let cfg = TrainConfig {
            hidden_size: 6,
            window: 8,
            epochs: 1,
            learning_rate: 0.01,
            init_seed: 3,
        };
        train_model(DEFAULT_TRAIN_PARAM, DEFAULT_TRAIN_X0, cfg).expect("small training")
    })
}
