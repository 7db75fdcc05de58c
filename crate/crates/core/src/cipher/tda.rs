//! Three-dimensional diffusion: modular-addition chaining along rows,
//! columns and across colour channels.
//!
//! Channel `k` is coupled to channel `partner(k)`, the previous one in the
//! cycle 3 → 1 → 2 → 3 (0-based: 2 → 0 → 1 → 2). With `P` the partner:
//!
//! ```text
//! corner          C = A + M
//! first row       C(0,j,k) = A + M + C(0,j-1,k) + C(0,j-1,P)
//! first column    C(i,0,k) = A + M + C(i-1,0,k) + C(i-1,0,P)
//! interior        C(i,j,k) = A + M + C(i,j-1,P) + C(i-1,j,P)
//! ```
//!
//! all mod 256, where `M` is the channel's diffusion matrix (X, Y or Z). The
//! backward sweep is the same rule anchored at the bottom-right corner with
//! right and down neighbours. A grayscale image is its own partner and uses
//! the X matrix only.

use super::image::ImageCube;
use crate::error::{Error, Result};
use crate::sequence::DiffusionMatrices;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[inline]
fn partner(k: usize, channels: usize) -> usize {
    (k + channels - 1) % channels
}

fn check(img: &ImageCube, dm: &DiffusionMatrices, channels: usize) -> Result<()> {
    if img.channels() != channels {
        return Err(Error::ShapeMismatch(format!(
            "expected a {channels}-channel image, got {}",
            img.channels()
        )));
    }
    let (m, n) = dm.dims();
    img.check_plane(m, n)
}

/// Maps sweep coordinates to storage coordinates.
struct Frame {
    m: usize,
    n: usize,
    c: usize,
    dir: Direction,
}

impl Frame {
    #[inline]
    fn pixel(&self, i: usize, j: usize) -> usize {
        match self.dir {
            Direction::Forward => i * self.n + j,
            Direction::Backward => (self.m - 1 - i) * self.n + (self.n - 1 - j),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize, k: usize) -> usize {
        self.pixel(i, j) * self.c + k
    }
}

/// Sum of the neighbour terms for `(i, j, k)` in sweep coordinates, read
/// from `c`.
#[inline]
fn neighbours(f: &Frame, c: &[u8], i: usize, j: usize, k: usize) -> u8 {
    let p = partner(k, f.c);
    match (i, j) {
        (0, 0) => 0,
        (0, _) => c[f.at(0, j - 1, k)].wrapping_add(c[f.at(0, j - 1, p)]),
        (_, 0) => c[f.at(i - 1, 0, k)].wrapping_add(c[f.at(i - 1, 0, p)]),
        _ => c[f.at(i, j - 1, p)].wrapping_add(c[f.at(i - 1, j, p)]),
    }
}

fn matrices(dm: &DiffusionMatrices, channels: usize) -> Vec<&[u16]> {
    (0..channels).map(|k| dm.channel(k)).collect()
}

fn diffuse(
    img: &ImageCube,
    dm: &DiffusionMatrices,
    channels: usize,
    dir: Direction,
) -> Result<ImageCube> {
    check(img, dm, channels)?;
    let (m, n, c) = img.dims();
    let f = Frame { m, n, c, dir };
    let mats = matrices(dm, c);
    let mut out = img.clone();
    let data = out.data_mut();
    for i in 0..m {
        for j in 0..n {
            let px = f.pixel(i, j);
            for k in 0..c {
                let key = mats[k][px] as u8;
                let nb = neighbours(&f, data, i, j, k);
                let at = px * c + k;
                data[at] = data[at].wrapping_add(key).wrapping_add(nb);
            }
        }
    }
    Ok(out)
}

fn undiffuse(
    img: &ImageCube,
    dm: &DiffusionMatrices,
    channels: usize,
    dir: Direction,
) -> Result<ImageCube> {
    check(img, dm, channels)?;
    let (m, n, c) = img.dims();
    let f = Frame { m, n, c, dir };
    let mats = matrices(dm, c);
    let cipher = img.data();
    let mut out = img.clone();
    let data = out.data_mut();
    for i in 0..m {
        for j in 0..n {
            let px = f.pixel(i, j);
            for k in 0..c {
                let key = mats[k][px] as u8;
                let nb = neighbours(&f, cipher, i, j, k);
                let at = px * c + k;
                data[at] = cipher[at].wrapping_sub(key).wrapping_sub(nb);
            }
        }
    }
    Ok(out)
}

pub fn tda_forward(a: &ImageCube, dm: &DiffusionMatrices) -> Result<ImageCube> {
    diffuse(a, dm, 3, Direction::Forward)
}

pub fn tda_backward(a: &ImageCube, dm: &DiffusionMatrices) -> Result<ImageCube> {
    diffuse(a, dm, 3, Direction::Backward)
}

pub fn tda_inverse_forward(c: &ImageCube, dm: &DiffusionMatrices) -> Result<ImageCube> {
    undiffuse(c, dm, 3, Direction::Forward)
}

pub fn tda_inverse_backward(c: &ImageCube, dm: &DiffusionMatrices) -> Result<ImageCube> {
    undiffuse(c, dm, 3, Direction::Backward)
}

pub fn tda_gray(a: &ImageCube, dm: &DiffusionMatrices, dir: Direction) -> Result<ImageCube> {
    diffuse(a, dm, 1, dir)
}

pub fn tda_gray_inverse(
    c: &ImageCube,
    dm: &DiffusionMatrices,
    dir: Direction,
) -> Result<ImageCube> {
    undiffuse(c, dm, 1, dir)
}

/// One sweep in `dir`, choosing the colour or grayscale rule by channel count.
pub fn sweep(img: &ImageCube, dm: &DiffusionMatrices, dir: Direction) -> Result<ImageCube> {
    diffuse(img, dm, img.channels(), dir)
}

/// Inverse of [`sweep`].
pub fn unsweep(img: &ImageCube, dm: &DiffusionMatrices, dir: Direction) -> Result<ImageCube> {
    undiffuse(img, dm, img.channels(), dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(m: usize, n: usize) -> DiffusionMatrices {
        DiffusionMatrices::filled(m, n, 1).unwrap()
    }

    #[test]
    fn corner_only() {
        let a = ImageCube::zeros(1, 1, 3).unwrap();
        let fwd = tda_forward(&a, &ones(1, 1)).unwrap();
        assert_eq!(fwd.data(), &[1, 1, 1]);
        assert_eq!(tda_backward(&a, &ones(1, 1)).unwrap(), fwd);
    }

    #[test]
    fn one_by_two_forward_and_backward() {
        let a = ImageCube::zeros(1, 2, 3).unwrap();
        assert_eq!(
            tda_forward(&a, &ones(1, 2)).unwrap().data(),
            &[1, 1, 1, 3, 3, 3]
        );
        assert_eq!(
            tda_backward(&a, &ones(1, 2)).unwrap().data(),
            &[3, 3, 3, 1, 1, 1]
        );
    }

    #[test]
    fn gray_examples() {
        let a = ImageCube::new(1, 1, 1, vec![5]).unwrap();
        let dm = DiffusionMatrices::filled(1, 1, 10).unwrap();
        assert_eq!(tda_gray(&a, &dm, Direction::Forward).unwrap().data(), &[15]);

        let a = ImageCube::zeros(2, 2, 1).unwrap();
        let c = tda_gray(&a, &ones(2, 2), Direction::Forward).unwrap();
        assert_eq!(c.data(), &[1, 3, 3, 7]);
        assert_eq!(
            tda_gray_inverse(&c, &ones(2, 2), Direction::Forward).unwrap(),
            a
        );
    }

    #[test]
    fn corner_inverse() {
        let c = ImageCube::new(1, 1, 3, vec![1, 1, 1]).unwrap();
        assert_eq!(
            tda_inverse_forward(&c, &ones(1, 1)).unwrap().data(),
            &[0, 0, 0]
        );
    }

    #[test]
    fn entry_256_acts_as_zero() {
        let a = ImageCube::new(1, 1, 3, vec![7, 8, 9]).unwrap();
        let dm = DiffusionMatrices::filled(1, 1, 256).unwrap();
        assert_eq!(tda_forward(&a, &dm).unwrap(), a);
    }

    #[test]
    fn shape_checks() {
        let gray = ImageCube::zeros(2, 2, 1).unwrap();
        assert!(matches!(
            tda_forward(&gray, &ones(2, 2)),
            Err(Error::ShapeMismatch(_))
        ));
        let rgb = ImageCube::zeros(2, 3, 3).unwrap();
        assert!(matches!(
            tda_forward(&rgb, &ones(3, 2)),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
