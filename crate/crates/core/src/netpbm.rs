//! Binary PGM (`P5`) and PPM (`P6`) with maxval 255.
//!
//! The reader accepts `#` comments anywhere whitespace is allowed in the
//! header; the writer emits `P5\n<w> <h>\n255\n` followed by raw bytes.

use std::fs;
use std::path::Path;

use crate::cipher::ImageCube;
use crate::error::{Error, Result};

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad or missing {what} in image header")))
    }
}

pub fn decode(bytes: &[u8]) -> Result<ImageCube> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => {
            return Err(Error::Format(
                "not a binary PGM (P5) or PPM (P6) file".into(),
            ))
        }
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Format(format!(
            "maxval {maxval} unsupported; only 255"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format("image has zero size".into()));
    }
    match bytes.get(h.pos) {
        Some(b) if b.is_ascii_whitespace() => h.pos += 1,
        _ => return Err(Error::Format("missing whitespace after maxval".into())),
    }
    let need = width * height * channels;
    let raster = &bytes[h.pos..];
    if raster.len() != need {
        return Err(Error::Format(format!(
            "raster has {} bytes, header implies {need}",
            raster.len()
        )));
    }
    ImageCube::new(height, width, channels, raster.to_vec())
}

pub fn encode(img: &ImageCube) -> Vec<u8> {
    let magic = if img.channels() == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

pub fn read_image(path: impl AsRef<Path>) -> Result<ImageCube> {
    decode(&fs::read(path)?)
}
