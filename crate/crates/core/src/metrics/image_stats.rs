use std::io::{self, Write};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cipher::ImageCube;
use crate::error::{Error, Result};
use crate::fmt::format_g;

pub const DEFAULT_CORRELATION_PAIRS: usize = 5_000;

fn same_shape(a: &ImageCube, b: &ImageCube) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// Percentage of positions at which the two images differ.
pub fn npcr(c1: &ImageCube, c2: &ImageCube) -> Result<f64> {
    same_shape(c1, c2)?;
    let diff = c1
        .data()
        .iter()
        .zip(c2.data())
        .filter(|(a, b)| a != b)
        .count();
    Ok(100.0 * diff as f64 / c1.data().len() as f64)
}

/// Mean absolute difference as a percentage of 255.
pub fn uaci(c1: &ImageCube, c2: &ImageCube) -> Result<f64> {
    same_shape(c1, c2)?;
    let total: u64 = c1
        .data()
        .iter()
        .zip(c2.data())
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum();
    Ok(100.0 * total as f64 / (255.0 * c1.data().len() as f64))
}

pub fn histogram(img: &ImageCube) -> [u64; 256] {
    let mut h = [0u64; 256];
    for &v in img.data() {
        h[v as usize] += 1;
    }
    h
}

/// Shannon entropy of the byte histogram, in bits per symbol.
pub fn entropy(img: &ImageCube) -> f64 {
    let total = img.data().len() as f64;
    -histogram(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjacency {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Adjacency {
    pub const ALL: [Adjacency; 3] = [
        Adjacency::Horizontal,
        Adjacency::Vertical,
        Adjacency::Diagonal,
    ];

    fn offset(self) -> (usize, usize) {
        match self {
            Adjacency::Horizontal => (0, 1),
            Adjacency::Vertical => (1, 0),
            Adjacency::Diagonal => (1, 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Adjacency::Horizontal => "h",
            Adjacency::Vertical => "v",
            Adjacency::Diagonal => "d",
        }
    }
}

/// Pearson correlation between `pairs` distinct adjacent-pixel pairs drawn
/// uniformly (over position and channel) with a ChaCha20 stream seeded by
/// `seed`.
pub fn correlation(img: &ImageCube, dir: Adjacency, pairs: usize, seed: u64) -> Result<f64> {
    let (m, n, c) = img.dims();
    let (di, dj) = dir.offset();
    let (rows, cols) = (m.saturating_sub(di), n.saturating_sub(dj));
    let available = rows * cols * c;
    if pairs == 0 || pairs > available {
        return Err(Error::InvalidArgument(format!(
            "{pairs} pairs requested, {available} adjacent pairs available"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (xs, ys): (Vec<f64>, Vec<f64>) = index::sample(&mut rng, available, pairs)
        .into_iter()
        .map(|p| {
            let (pix, k) = (p / c, p % c);
            let (i, j) = (pix / cols, pix % cols);
            (img.get(i, j, k) as f64, img.get(i + di, j + dj, k) as f64)
        })
        .unzip();
    pearson(&xs, &ys)
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Statistics of one image, optionally against a reference of equal size.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub npcr: Option<f64>,
    pub uaci: Option<f64>,
    pub entropy: f64,
    /// `None` where the sampled pixels have zero variance.
    pub corr_h: Option<f64>,
    pub corr_v: Option<f64>,
    pub corr_d: Option<f64>,
    pub sample_count: usize,
}

pub const ENTROPY_TARGET: f64 = 7.997;
pub const CORRELATION_LIMIT: f64 = 0.01;
pub const NPCR_BAND: (f64, f64) = (99.5, 99.7);
pub const UACI_BAND: (f64, f64) = (33.0, 33.9);

impl MetricsReport {
    /// Correlations use `min(pairs, available)` pairs per direction.
    pub fn compute(
        img: &ImageCube,
        reference: Option<&ImageCube>,
        pairs: usize,
        seed: u64,
    ) -> Result<Self> {
        let (npcr_v, uaci_v) = match reference {
            Some(r) => (Some(npcr(img, r)?), Some(uaci(img, r)?)),
            None => (None, None),
        };
        let mut corr = [None; 3];
        let mut sample_count = pairs;
        for (slot, dir) in corr.iter_mut().zip(Adjacency::ALL) {
            let (m, n, c) = img.dims();
            let (di, dj) = dir.offset();
            let available = m.saturating_sub(di) * n.saturating_sub(dj) * c;
            let k = pairs.min(available);
            sample_count = sample_count.min(k);
            if k == 0 {
                continue;
            }
            *slot = match correlation(img, dir, k, seed) {
                Ok(r) => Some(r),
                Err(Error::ZeroVariance) => None,
                Err(e) => return Err(e),
            };
        }
        Ok(MetricsReport {
            npcr: npcr_v,
            uaci: uaci_v,
            entropy: entropy(img),
            corr_h: corr[0],
            corr_v: corr[1],
            corr_d: corr[2],
            sample_count,
        })
    }

    /// `metric,value,status` rows. Status is `pass`/`fail` against the
    /// usual cipher-image targets, `undefined` for a missing value and
    /// `info` for the sample count.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let band = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
        let mut rows: Vec<(&str, Option<f64>, Option<bool>)> = Vec::new();
        if let Some(v) = self.npcr {
            rows.push(("npcr", Some(v), Some(band(v, NPCR_BAND))));
        }
        if let Some(v) = self.uaci {
            rows.push(("uaci", Some(v), Some(band(v, UACI_BAND))));
        }
        rows.push((
            "entropy",
            Some(self.entropy),
            Some(self.entropy >= ENTROPY_TARGET),
        ));
        for (name, v) in [
            ("corr_h", self.corr_h),
            ("corr_v", self.corr_v),
            ("corr_d", self.corr_d),
        ] {
            rows.push((name, v, v.map(|r| r.abs() < CORRELATION_LIMIT)));
        }
        writeln!(w, "metric,value,status")?;
        for (name, v, ok) in rows {
            let value = v.map(|x| format_g(x, 12)).unwrap_or_default();
            let status = match (v, ok) {
                (None, _) => "undefined",
                (_, Some(true)) => "pass",
                _ => "fail",
            };
            writeln!(w, "{name},{value},{status}")?;
        }
        writeln!(w, "sample_count,{},info", self.sample_count)
    }
}
