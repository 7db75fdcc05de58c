//! Binary model file.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "TDLM"
//! 4       4     version (u32 LE, currently 1)
//! 8       4     hidden_size (u32 LE)
//! 12      4     window (u32 LE)
//! 16      8     metadata length in bytes (u64 LE, currently 56)
//! 24      56    metadata: epochs u64, learning_rate f64, init_seed u64,
//!               train_param f64, train_x0 f64, final_loss f64,
//!               holdout_mse f64 (unset losses are stored as NaN)
//! 80      ...   weights, f64 LE, in this order:
//!                 forward cell:  w_input[4H], w_hidden[4H*H], bias[4H]
//!                 backward cell: w_input[4H], w_hidden[4H*H], bias[4H]
//!                 head:          out_weights[2H], out_bias[1]
//! end-4   4     CRC-32 (IEEE) of every preceding byte, u32 LE
//! ```
//!
//! Gate blocks inside each cell are ordered input, forget, candidate, output.

use std::fs;
use std::path::Path;

use super::lstm::LstmCell;
use super::model::{BlstmModel, TrainingMeta};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"TDLM";
pub const VERSION: u32 = 1;
const META_LEN: u64 = 56;
const HEADER_LEN: usize = 24;
const TRAILER_LEN: usize = 4;

fn opt_to_f64(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn f64_to_opt(v: f64) -> Option<f64> {
    (!v.is_nan()).then_some(v)
}

/// Serialises `model` into the model file layout.
pub fn save_model(model: &BlstmModel) -> Vec<u8> {
    let hs = model.hidden_size();
    let mut buf = Vec::with_capacity(
        HEADER_LEN + META_LEN as usize + 8 * BlstmModel::param_count(hs) + TRAILER_LEN,
    );
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(hs as u32).to_le_bytes());
    buf.extend_from_slice(&(model.window as u32).to_le_bytes());
    buf.extend_from_slice(&META_LEN.to_le_bytes());

    let m = &model.meta;
    buf.extend_from_slice(&m.epochs.to_le_bytes());
    buf.extend_from_slice(&m.learning_rate.to_le_bytes());
    buf.extend_from_slice(&m.init_seed.to_le_bytes());
    buf.extend_from_slice(&m.train_param.to_le_bytes());
    buf.extend_from_slice(&m.train_x0.to_le_bytes());
    buf.extend_from_slice(&opt_to_f64(m.final_loss).to_le_bytes());
    buf.extend_from_slice(&opt_to_f64(m.holdout_mse).to_le_bytes());

    for w in model.params() {
        buf.extend_from_slice(&w.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out = self.bytes[self.pos..self.pos + N]
            .try_into()
            .expect("length checked by caller");
        self.pos += N;
        out
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn u64(&mut self) -> u64 {
        u64::from_le_bytes(self.take())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }
}

/// Parses and validates a model file.
///
/// A file shorter than its header claims is reported as
/// [`Error::TruncatedFile`] when its checksum does not hold (bytes were lost)
/// and as [`Error::ShapeMismatch`] when the checksum does hold (an intact file
/// whose header disagrees with its payload).
pub fn load_model(bytes: &[u8]) -> Result<BlstmModel> {
    if bytes.len() < 4 {
        return Err(Error::TruncatedFile);
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedFile);
    }
    let mut r = Reader { bytes, pos: 4 };
    let version = r.u32();
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let hidden = r.u32() as usize;
    let window = r.u32() as usize;
    let meta_len = r.u64();
    if hidden == 0 || window == 0 {
        return Err(Error::ShapeMismatch(format!(
            "hidden_size {hidden} and window {window} must be positive"
        )));
    }
    if meta_len != META_LEN {
        return Err(Error::ShapeMismatch(format!(
            "metadata length {meta_len}, expected {META_LEN}"
        )));
    }

    let expected =
        HEADER_LEN + META_LEN as usize + 8 * BlstmModel::param_count(hidden) + TRAILER_LEN;
    let checksum_ok = || {
        bytes.len() >= TRAILER_LEN && {
            let (body, trailer) = bytes.split_at(bytes.len() - TRAILER_LEN);
            crc32fast::hash(body) == u32::from_le_bytes(trailer.try_into().expect("4 bytes"))
        }
    };
    if bytes.len() != expected {
        if bytes.len() < expected && !checksum_ok() {
            return Err(Error::TruncatedFile);
        }
        return Err(Error::ShapeMismatch(format!(
            "hidden_size {hidden} / window {window} imply {expected} bytes, file has {}",
            bytes.len()
        )));
    }
    if !checksum_ok() {
        return Err(Error::ChecksumMismatch);
    }

    let meta = TrainingMeta {
        epochs: r.u64(),
        learning_rate: r.f64(),
        init_seed: r.u64(),
        train_param: r.f64(),
        train_x0: r.f64(),
        final_loss: f64_to_opt(r.f64()),
        holdout_mse: f64_to_opt(r.f64()),
    };
    let mut model = BlstmModel {
        window,
        forward: LstmCell::zeros(hidden),
        backward: LstmCell::zeros(hidden),
        out_weights: vec![0.0; 2 * hidden],
        out_bias: 0.0,
        meta,
    };
    for p in model.params_mut() {
        *p = r.f64();
    }
    if model.params().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("model weights".into()));
    }
    Ok(model)
}

impl BlstmModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        save_model(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        load_model(bytes)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        load_model(&fs::read(path)?)
    }
}
