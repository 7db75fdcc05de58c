//! Image encryption from a sine-quadratic chaotic map whose orbit is extended
//! by a bidirectional LSTM, followed by index-shuffling permutation and
//! three-dimensional modular diffusion.
//!
//! The main entry points are [`cipher::encrypt`] / [`cipher::decrypt`], with
//! [`sequence::KeySchedule`] available to reuse key material across images of
//! one size. [`maps`] holds the chaotic maps and Lyapunov tools, [`neural`]
//! the network and its file format, and [`metrics`] the evaluation
//! statistics.

pub mod cipher;
pub mod cli;
pub mod error;
pub mod fmt;
pub mod keys;
pub mod maps;
pub mod metrics;
pub mod netpbm;
pub mod neural;
pub mod scene;
pub mod sequence;

pub use cipher::{decrypt, encrypt, CipherConfig, ImageCube};
pub use error::{Error, Result};
pub use keys::KeySet;
pub use maps::{ChaoticMap, MapKind};
pub use neural::{train_model, BlstmModel, TrainConfig};
pub use sequence::KeySchedule;
