//! Procedural test images with the statistics of photographs: smooth
//! illumination, soft-edged objects, mild texture and strong correlation
//! between neighbouring pixels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cipher::ImageCube;

struct Blob {
    ci: f64,
    cj: f64,
    radius: f64,
    level: [f64; 3],
}

/// A deterministic `m × n` scene with `channels` ∈ {1, 3}.
pub fn natural_scene(m: usize, n: usize, channels: usize, seed: u64) -> ImageCube {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = m.max(n) as f64;
    let blobs: Vec<Blob> = (0..12)
        .map(|_| Blob {
            ci: rng.random_range(0.0..m as f64),
            cj: rng.random_range(0.0..n as f64),
            radius: rng.random_range(0.05..0.3) * scale,
            level: [
                rng.random_range(-90.0..90.0),
                rng.random_range(-90.0..90.0),
                rng.random_range(-90.0..90.0),
            ],
        })
        .collect();
    let waves: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.random_range(2.0..12.0),
                rng.random_range(0.0..std::f64::consts::TAU),
                rng.random_range(4.0..12.0),
            )
        })
        .collect();
    let tilt = [rng.random_range(-40.0..40.0), rng.random_range(-40.0..40.0)];

    let mut data = Vec::with_capacity(m * n * channels);
    for i in 0..m {
        for j in 0..n {
            let (u, v) = (i as f64 / scale, j as f64 / scale);
            let base = 120.0 + tilt[0] * u + tilt[1] * v;
            let texture: f64 = waves
                .iter()
                .map(|&(f, ph, amp)| amp * (f * (u * 1.3 + v) * std::f64::consts::TAU + ph).sin())
                .sum();
            for k in 0..channels {
                let mut val = base + texture;
                for b in &blobs {
                    let d =
                        ((i as f64 - b.ci).powi(2) + (j as f64 - b.cj).powi(2)).sqrt() / b.radius;
                    val += b.level[k] / (1.0 + (4.0 * (d - 1.0)).exp());
                }
                val += rng.random_range(-3.0..3.0);
                data.push(val.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    ImageCube::new(m, n, channels, data).expect("dimensions are consistent")
}

/// Uniformly random bytes.
pub fn random_image(m: usize, n: usize, channels: usize, seed: u64) -> ImageCube {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut data = vec![0u8; m * n * channels];
    rng.fill(data.as_mut_slice());
    ImageCube::new(m, n, channels, data).expect("dimensions are consistent")
}
