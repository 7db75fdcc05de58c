use super::image::ImageCube;
use super::isa::{permute, unpermute};
use super::tda::{sweep, unsweep, Direction};
use crate::error::{Error, Result};
use crate::keys::KeySet;
use crate::neural::BlstmModel;
use crate::sequence::KeySchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CipherConfig {
    /// Diffusion sweeps, alternating forward and backward starting forward.
    pub rounds: usize,
}

impl Default for CipherConfig {
    fn default() -> Self {
        CipherConfig { rounds: 2 }
    }
}

impl CipherConfig {
    pub fn new(rounds: usize) -> Result<Self> {
        let cfg = CipherConfig { rounds };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidArgument("rounds must be at least 1".into()));
        }
        Ok(())
    }

    fn direction(round: usize) -> Direction {
        if round % 2 == 0 {
            Direction::Forward
        } else {
            Direction::Backward
        }
    }
}

fn check_schedule(img: &ImageCube, schedule: &KeySchedule) -> Result<()> {
    let (m, n) = schedule.dims();
    img.check_plane(m, n)
}

/// Permutes then applies `cfg.rounds` diffusion sweeps.
pub fn encrypt_with_schedule(
    img: &ImageCube,
    schedule: &KeySchedule,
    cfg: &CipherConfig,
) -> Result<ImageCube> {
    cfg.validate()?;
    check_schedule(img, schedule)?;
    let mut cur = permute(img, &schedule.permutation)?;
    for r in 0..cfg.rounds {
        cur = sweep(&cur, &schedule.matrices, CipherConfig::direction(r))?;
    }
    Ok(cur)
}

pub fn decrypt_with_schedule(
    img: &ImageCube,
    schedule: &KeySchedule,
    cfg: &CipherConfig,
) -> Result<ImageCube> {
    cfg.validate()?;
    check_schedule(img, schedule)?;
    let mut cur = img.clone();
    for r in (0..cfg.rounds).rev() {
        cur = unsweep(&cur, &schedule.matrices, CipherConfig::direction(r))?;
    }
    unpermute(&cur, &schedule.permutation)
}

pub fn encrypt(
    img: &ImageCube,
    keys: &KeySet,
    model: &BlstmModel,
    cfg: &CipherConfig,
) -> Result<ImageCube> {
    cfg.validate()?;
    let schedule = KeySchedule::derive(keys, model, img.rows(), img.cols())?;
    encrypt_with_schedule(img, &schedule, cfg)
}

pub fn decrypt(
    img: &ImageCube,
    keys: &KeySet,
    model: &BlstmModel,
    cfg: &CipherConfig,
) -> Result<ImageCube> {
    cfg.validate()?;
    let schedule = KeySchedule::derive(keys, model, img.rows(), img.cols())?;
    decrypt_with_schedule(img, &schedule, cfg)
}

/// True when `images` is exactly three grayscale images of one size, the
/// case that [`encrypt_batch`] packs into a single colour cube.
pub fn is_stackable(images: &[ImageCube]) -> bool {
    images.len() == 3
        && images.iter().all(|im| {
            im.channels() == 1 && (im.rows(), im.cols()) == (images[0].rows(), images[0].cols())
        })
}

fn batch(
    images: &[ImageCube],
    keys: &KeySet,
    model: &BlstmModel,
    cfg: &CipherConfig,
    op: fn(&ImageCube, &KeySchedule, &CipherConfig) -> Result<ImageCube>,
) -> Result<Vec<ImageCube>> {
    cfg.validate()?;
    if is_stackable(images) {
        let cube = ImageCube::stack([&images[0], &images[1], &images[2]])?;
        let schedule = KeySchedule::derive(keys, model, cube.rows(), cube.cols())?;
        return Ok(op(&cube, &schedule, cfg)?.unstack()?.into());
    }
    let mut cache: Vec<KeySchedule> = Vec::new();
    images
        .iter()
        .map(|im| {
            let pos = cache
                .iter()
                .position(|s| s.dims() == (im.rows(), im.cols()));
            let idx = match pos {
                Some(i) => i,
                None => {
                    cache.push(KeySchedule::derive(keys, model, im.rows(), im.cols())?);
                    cache.len() - 1
                }
            };
            op(im, &cache[idx], cfg)
        })
        .collect()
}

/// Encrypts several images under one key. Three same-size grayscale images
/// are interleaved into one colour cube so the cross-channel diffusion
/// couples them; anything else is encrypted image by image.
pub fn encrypt_batch(
    images: &[ImageCube],
    keys: &KeySet,
    model: &BlstmModel,
    cfg: &CipherConfig,
) -> Result<Vec<ImageCube>> {
    batch(images, keys, model, cfg, encrypt_with_schedule)
}

pub fn decrypt_batch(
    images: &[ImageCube],
    keys: &KeySet,
    model: &BlstmModel,
    cfg: &CipherConfig,
) -> Result<Vec<ImageCube>> {
    batch(images, keys, model, cfg, decrypt_with_schedule)
}
