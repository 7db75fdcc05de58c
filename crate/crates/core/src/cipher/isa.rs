//! Index shuffling: a pixel permutation driven by the sort order of a
//! chaotic sequence. All channels move together.

use super::image::ImageCube;
use crate::error::{Error, Result};
use crate::sequence::{PermutationVector, ShuffleSequence};

fn check(img: &ImageCube, perm: &PermutationVector) -> Result<()> {
    if perm.len() != img.pixels() {
        return Err(Error::LengthMismatch {
            expected: img.pixels(),
            got: perm.len(),
        });
    }
    Ok(())
}

/// `out[j] = in[idx[j]]` for every channel.
pub fn permute(img: &ImageCube, perm: &PermutationVector) -> Result<ImageCube> {
    check(img, perm)?;
    let c = img.channels();
    let src = img.data();
    let mut out = vec![0u8; src.len()];
    for (dst, &from) in out.chunks_exact_mut(c).zip(perm.as_slice()) {
        dst.copy_from_slice(&src[from * c..(from + 1) * c]);
    }
    let (m, n, _) = img.dims();
    ImageCube::new(m, n, c, out)
}

/// `out[idx[j]] = in[j]`, undoing [`permute`].
pub fn unpermute(img: &ImageCube, perm: &PermutationVector) -> Result<ImageCube> {
    check(img, perm)?;
    let c = img.channels();
    let src = img.data();
    let mut out = vec![0u8; src.len()];
    for (from, &to) in src.chunks_exact(c).zip(perm.as_slice()) {
        out[to * c..(to + 1) * c].copy_from_slice(from);
    }
    let (m, n, _) = img.dims();
    ImageCube::new(m, n, c, out)
}

pub fn isa_forward(img: &ImageCube, s: &ShuffleSequence) -> Result<ImageCube> {
    if s.len() != img.pixels() {
        return Err(Error::LengthMismatch {
            expected: img.pixels(),
            got: s.len(),
        });
    }
    permute(img, &PermutationVector::argsort(s))
}

pub fn isa_inverse(img: &ImageCube, s: &ShuffleSequence) -> Result<ImageCube> {
    if s.len() != img.pixels() {
        return Err(Error::LengthMismatch {
            expected: img.pixels(),
            got: s.len(),
        });
    }
    unpermute(img, &PermutationVector::argsort(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascending_is_identity() {
        let img = ImageCube::new(2, 2, 1, vec![9, 8, 7, 6]).unwrap();
        let s = ShuffleSequence::new(vec![-0.5, 0.0, 0.1, 0.9]);
        assert_eq!(isa_forward(&img, &s).unwrap(), img);
    }

    #[test]
    fn descending_reverses() {
        let img = ImageCube::new(1, 4, 1, vec![10, 20, 30, 40]).unwrap();
        let s = ShuffleSequence::new(vec![0.4, 0.3, 0.2, 0.1]);
        assert_eq!(isa_forward(&img, &s).unwrap().data(), &[40, 30, 20, 10]);
    }

    #[test]
    fn channels_share_one_permutation() {
        let img = ImageCube::new(1, 2, 3, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let s = ShuffleSequence::new(vec![0.9, 0.1]);
        let out = isa_forward(&img, &s).unwrap();
        assert_eq!(out.data(), &[4, 5, 6, 1, 2, 3]);
        assert_eq!(isa_inverse(&out, &s).unwrap(), img);
    }

    #[test]
    fn length_mismatch() {
        let img = ImageCube::new(1, 3, 1, vec![1, 2, 3]).unwrap();
        let s = ShuffleSequence::new(vec![0.1, 0.2]);
        assert!(matches!(
            isa_forward(&img, &s),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
    }
}
