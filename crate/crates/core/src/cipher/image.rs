use crate::error::{Error, Result};

/// An `m × n` image with one or three channels, stored row-major with
/// channels interleaved (`data[(i*n + j)*c + k]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageCube {
    m: usize,
    n: usize,
    channels: usize,
    data: Vec<u8>,
}

impl ImageCube {
    pub fn new(m: usize, n: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::ShapeMismatch(
                "image dimensions must be positive".into(),
            ));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::ShapeMismatch(format!(
                "{channels} channels; expected 1 or 3"
            )));
        }
        if data.len() != m * n * channels {
            return Err(Error::ShapeMismatch(format!(
                "{m}x{n}x{channels} image needs {} bytes, got {}",
                m * n * channels,
                data.len()
            )));
        }
        Ok(ImageCube {
            m,
            n,
            channels,
            data,
        })
    }

    pub fn zeros(m: usize, n: usize, channels: usize) -> Result<Self> {
        Self::new(m, n, channels, vec![0; m * n * channels])
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.channels)
    }

    pub fn pixels(&self) -> usize {
        self.m * self.n
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.channels + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u8 {
        self.data[self.index(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: u8) {
        let idx = self.index(i, j, k);
        self.data[idx] = v;
    }

    /// One channel as its own single-channel image.
    pub fn channel(&self, k: usize) -> ImageCube {
        assert!(k < self.channels, "channel {k} out of range");
        let data = self
            .data
            .iter()
            .skip(k)
            .step_by(self.channels)
            .copied()
            .collect();
        ImageCube {
            m: self.m,
            n: self.n,
            channels: 1,
            data,
        }
    }

    /// Interleaves three same-size grayscale images into one colour cube.
    pub fn stack(planes: [&ImageCube; 3]) -> Result<ImageCube> {
        let (m, n) = (planes[0].m, planes[0].n);
        for p in planes {
            if p.channels != 1 || p.m != m || p.n != n {
                return Err(Error::ShapeMismatch(
                    "stacking needs three grayscale images of one size".into(),
                ));
            }
        }
        let data = (0..m * n)
            .flat_map(|p| planes.map(|pl| pl.data[p]))
            .collect();
        ImageCube::new(m, n, 3, data)
    }

    /// Splits a colour cube into its three planes.
    pub fn unstack(&self) -> Result<[ImageCube; 3]> {
        if self.channels != 3 {
            return Err(Error::ShapeMismatch(
                "unstacking needs a 3-channel image".into(),
            ));
        }
        Ok([self.channel(0), self.channel(1), self.channel(2)])
    }

    pub(crate) fn check_plane(&self, m: usize, n: usize) -> Result<()> {
        if (self.m, self.n) != (m, n) {
            return Err(Error::ShapeMismatch(format!(
                "image is {}x{}, key material is {m}x{n}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}
