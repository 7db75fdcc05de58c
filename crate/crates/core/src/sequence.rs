//! Key-driven sequence generation.
//!
//! A hybrid sequence of length `4mn` is the sine-quadratic orbit (first half)
//! followed by BLSTM predictions (second half). It is cut into four runs
//! `s, x, y, z` of length `L = mn`. `s` drives the pixel permutation and
//! `x, y, z` are quantised into the three diffusion matrices:
//!
//! ```text
//! X(i) = (⌊x(i)·y(L-i+1)·10⁹⌋ mod 256) + 1
//! Y(i) = (⌊x(L-i+1)·y(i)·10⁹⌋ mod 256) + 1
//! Z(i) = (⌊z(i)·10⁹⌋ mod 256) + 1
//! ```
//!
//! using the non-negative modulus, so every entry lies in `[1, 256]`.

use crate::error::{Error, Result};
use crate::keys::KeySet;
use crate::maps::ChaoticMap;
use crate::neural::BlstmModel;

const QUANT_SCALE: u128 = 1_000_000_000;

/// `(⌊v·10⁹⌋ mod 256)` with the non-negative modulus, computed exactly from
/// the binary value of `v` (no rounding of the product `v·10⁹`).
pub fn quantize_byte(v: f64) -> u8 {
    debug_assert!(v.is_finite());
    if !v.is_finite() || v == 0.0 {
        return 0;
    }
    let bits = v.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if biased == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), biased - 1075)
    };
    // |v|·10⁹ = mantissa·10⁹·2^exp, and mantissa·10⁹ < 2⁸³.
    let scaled = mantissa as u128 * QUANT_SCALE;
    let (whole, inexact) = if exp >= 0 {
        (if exp >= 8 { 0 } else { scaled << exp }, false)
    } else if exp <= -128 {
        (0, true)
    } else {
        let s = -exp as u32;
        (scaled >> s, scaled & ((1u128 << s) - 1) != 0)
    };
    if negative {
        (whole + inexact as u128).wrapping_neg() as u8
    } else {
        whole as u8
    }
}

/// Diffusion-matrix entry for an already formed product: `quantize_byte + 1`.
#[inline]
pub fn diffusion_entry(product: f64) -> u16 {
    quantize_byte(product) as u16 + 1
}

/// Wraps `w + shift` into `[-1, 1)`.
#[inline]
pub fn wrap_perturb(w: f64, shift: f64) -> f64 {
    (w + shift + 1.0).rem_euclid(2.0) - 1.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct HybridSequence {
    values: Vec<f64>,
    m: usize,
    n: usize,
}

impl HybridSequence {
    pub fn new(values: Vec<f64>, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(
                "image dimensions must be positive".into(),
            ));
        }
        if values.len() != 4 * m * n {
            return Err(Error::LengthMismatch {
                expected: 4 * m * n,
                got: values.len(),
            });
        }
        Ok(HybridSequence { values, m, n })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// The orbit half.
    pub fn map_part(&self) -> &[f64] {
        &self.values[..2 * self.m * self.n]
    }

    /// The network half.
    pub fn network_part(&self) -> &[f64] {
        &self.values[2 * self.m * self.n..]
    }
}

/// Builds the `4mn` hybrid sequence for an `m × n` image.
///
/// The orbit runs from `key_x1` with parameter `key_a`, discarding `key_n0`
/// iterates and keeping `2mn`. The network seed window is the last `window`
/// orbit states up to the end of that run, each shifted by `key_y1` and
/// wrapped into `[-1, 1)`; when `2mn < window` the window reaches back into
/// the discarded iterates.
pub fn generate_hybrid(
    keys: &KeySet,
    model: &BlstmModel,
    m: usize,
    n: usize,
) -> Result<HybridSequence> {
    keys.validate()?;
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "image dimensions must be positive".into(),
        ));
    }
    let half = 2 * m * n;
    let window = model.window();
    let discard = keys.key_n0 as usize;
    let pad = window.saturating_sub(half).min(discard);
    if half + pad < window {
        return Err(Error::InvalidArgument(format!(
            "key n0 = {discard} is too small to seed a window of {window}"
        )));
    }
    let orbit = ChaoticMap::sqcm(keys.key_a)?.iterate(keys.key_x1, discard - pad, half + pad)?;
    let orbit = orbit.as_slice();
    let seed: Vec<f64> = orbit[orbit.len() - window..]
        .iter()
        .map(|&w| wrap_perturb(w, keys.key_y1))
        .collect();

    let mut values = Vec::with_capacity(2 * half);
    values.extend_from_slice(&orbit[pad..]);
    values.extend(model.predictor(&seed)?.take(half));
    HybridSequence::new(values, m, n)
}

/// Per-pixel permutation driver `s`, of length `mn`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShuffleSequence(Vec<f64>);

impl ShuffleSequence {
    pub fn new(values: Vec<f64>) -> Self {
        ShuffleSequence(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The three `m × n` additive diffusion matrices, row-major, entries in
/// `[1, 256]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffusionMatrices {
    m: usize,
    n: usize,
    x2d: Vec<u16>,
    y2d: Vec<u16>,
    z2d: Vec<u16>,
}

impl DiffusionMatrices {
    pub fn new(m: usize, n: usize, x2d: Vec<u16>, y2d: Vec<u16>, z2d: Vec<u16>) -> Result<Self> {
        for (name, mat) in [("X", &x2d), ("Y", &y2d), ("Z", &z2d)] {
            if mat.len() != m * n {
                return Err(Error::ShapeMismatch(format!(
                    "{name} has {} entries, expected {}",
                    mat.len(),
                    m * n
                )));
            }
            if mat.iter().any(|&v| !(1..=256).contains(&v)) {
                return Err(Error::InvalidArgument(format!(
                    "{name} entries must lie in [1, 256]"
                )));
            }
        }
        Ok(DiffusionMatrices {
            m,
            n,
            x2d,
            y2d,
            z2d,
        })
    }

    /// A constant matrix set, mostly useful for worked examples.
    pub fn filled(m: usize, n: usize, value: u16) -> Result<Self> {
        Self::new(
            m,
            n,
            vec![value; m * n],
            vec![value; m * n],
            vec![value; m * n],
        )
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn x2d(&self) -> &[u16] {
        &self.x2d
    }

    pub fn y2d(&self) -> &[u16] {
        &self.y2d
    }

    pub fn z2d(&self) -> &[u16] {
        &self.z2d
    }

    /// Matrix for colour channel `k` (0 → X, 1 → Y, 2 → Z).
    pub fn channel(&self, k: usize) -> &[u16] {
        match k {
            0 => &self.x2d,
            1 => &self.y2d,
            2 => &self.z2d,
            _ => panic!("channel index {k} out of range"),
        }
    }

    /// All entries as bytes (`entry - 1`), X then Y then Z.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.x2d
            .iter()
            .chain(&self.y2d)
            .chain(&self.z2d)
            .map(|&v| (v - 1) as u8)
            .collect()
    }
}

/// Splits `h` into `s, x, y, z` and quantises `x, y, z` into the diffusion
/// matrices, reshaped row-major to the sequence's `m × n`.
pub fn derive_streams(h: &HybridSequence) -> Result<(ShuffleSequence, DiffusionMatrices)> {
    let v = h.values();
    if v.len() % 4 != 0 {
        return Err(Error::LengthMismatch {
            expected: 4 * (v.len() / 4 + 1),
            got: v.len(),
        });
    }
    let l = v.len() / 4;
    let (s, rest) = v.split_at(l);
    let (x, rest) = rest.split_at(l);
    let (y, z) = rest.split_at(l);

    let x2d = (0..l)
        .map(|i| diffusion_entry(x[i] * y[l - 1 - i]))
        .collect();
    let y2d = (0..l)
        .map(|i| diffusion_entry(x[l - 1 - i] * y[i]))
        .collect();
    let z2d = z.iter().map(|&zi| diffusion_entry(zi)).collect();
    let (m, n) = h.dims();
    Ok((
        ShuffleSequence(s.to_vec()),
        DiffusionMatrices::new(m, n, x2d, y2d, z2d)?,
    ))
}

/// A bijection on pixel positions, stored 0-based: output position `j`
/// takes the input pixel at `idx[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationVector(Vec<usize>);

impl PermutationVector {
    /// Indices that sort `s` ascending. Equal values keep their original
    /// relative order.
    pub fn argsort(s: &ShuffleSequence) -> Self {
        let s = s.as_slice();
        let mut idx: Vec<usize> = (0..s.len()).collect();
        idx.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
        PermutationVector(idx)
    }

    pub fn from_indices(idx: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; idx.len()];
        for &i in &idx {
            if i >= idx.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument(
                    "indices do not form a permutation".into(),
                ));
            }
        }
        Ok(PermutationVector(idx))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Everything the cipher needs for one key, model and image size. Generation
/// dominates the cost of encryption, so a schedule can be reused across
/// images of the same dimensions.
#[derive(Clone, Debug)]
pub struct KeySchedule {
    pub shuffle: ShuffleSequence,
    pub permutation: PermutationVector,
    pub matrices: DiffusionMatrices,
}

impl KeySchedule {
    pub fn derive(keys: &KeySet, model: &BlstmModel, m: usize, n: usize) -> Result<Self> {
        let hybrid = generate_hybrid(keys, model, m, n)?;
        Self::from_hybrid(&hybrid)
    }

    pub fn from_hybrid(hybrid: &HybridSequence) -> Result<Self> {
        let (shuffle, matrices) = derive_streams(hybrid)?;
        let permutation = PermutationVector::argsort(&shuffle);
        Ok(KeySchedule {
            shuffle,
            permutation,
            matrices,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.matrices.dims()
    }
}

/// At least `nbits` bits of diffusion-matrix material (X, then Y, then Z
/// bytes, most significant bit first) for the given key and model.
pub fn diffusion_bitstream(keys: &KeySet, model: &BlstmModel, nbits: usize) -> Result<Vec<u8>> {
    let bytes_needed = nbits.div_ceil(8);
    let l = bytes_needed.div_ceil(3).max(1);
    let schedule = KeySchedule::derive(keys, model, 1, l)?;
    let mut bits = crate::metrics::bits_from_bytes(&schedule.matrices.to_bytes());
    bits.truncate(nbits);
    Ok(bits)
}
