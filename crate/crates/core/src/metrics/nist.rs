//! The core statistical tests of NIST SP 800-22 rev. 1a.
//!
//! Bits are `u8` values 0 or 1. Every test returns p-values in `[0, 1]`;
//! a test passes when all of its p-values are at least [`ALPHA`].

use std::f64::consts::{LN_2, SQRT_2};
use std::io::{self, Write};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use crate::error::{Error, Result};
use crate::fmt::format_g;
use crate::sequence::quantize_byte;

pub const ALPHA: f64 = 0.01;
pub const MIN_BITS: usize = 100;
pub const BLOCK_FREQUENCY_M: usize = 128;
pub const SERIAL_M: usize = 2;
pub const APEN_M: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NistTest {
    Monobit,
    BlockFrequency,
    Runs,
    LongestRun,
    Dft,
    Serial,
    ApproximateEntropy,
    CumulativeSums,
}

impl NistTest {
    pub const ALL: [NistTest; 8] = [
        NistTest::Monobit,
        NistTest::BlockFrequency,
        NistTest::Runs,
        NistTest::LongestRun,
        NistTest::Dft,
        NistTest::Serial,
        NistTest::ApproximateEntropy,
        NistTest::CumulativeSums,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NistTest::Monobit => "monobit",
            NistTest::BlockFrequency => "block_frequency",
            NistTest::Runs => "runs",
            NistTest::LongestRun => "longest_run",
            NistTest::Dft => "dft",
            NistTest::Serial => "serial",
            NistTest::ApproximateEntropy => "approximate_entropy",
            NistTest::CumulativeSums => "cumulative_sums",
        }
    }
}

/// One p-value. Tests with two statistics (serial, cumulative sums) yield two
/// rows with distinct labels.
#[derive(Clone, Debug, PartialEq)]
pub struct NistResult {
    pub test: NistTest,
    pub label: &'static str,
    pub p_value: f64,
    pub pass: bool,
}

impl NistResult {
    fn new(test: NistTest, label: &'static str, p_value: f64) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        NistResult {
            test,
            label,
            p_value,
            pass: p_value >= ALPHA,
        }
    }
}

fn require(bits: &[u8], test: &'static str, required: usize) -> Result<()> {
    if bits.len() < required {
        return Err(Error::TooShort { test, required });
    }
    Ok(())
}

fn igamc(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        gamma_ur(a, x)
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

pub fn monobit(bits: &[u8]) -> Result<f64> {
    require(bits, "monobit", MIN_BITS)?;
    let n = bits.len() as f64;
    let s: i64 = bits.iter().map(|&b| if b == 1 { 1 } else { -1 }).sum();
    Ok(erfc((s.unsigned_abs() as f64 / n.sqrt()) / SQRT_2))
}

pub fn block_frequency(bits: &[u8], m: usize) -> Result<f64> {
    require(bits, "block_frequency", MIN_BITS.max(m))?;
    if m == 0 {
        return Err(Error::InvalidArgument(
            "block length must be positive".into(),
        ));
    }
    let blocks = bits.len() / m;
    let chi2: f64 = 4.0
        * m as f64
        * bits
            .chunks_exact(m)
            .map(|b| {
                let pi = b.iter().map(|&x| x as f64).sum::<f64>() / m as f64;
                (pi - 0.5).powi(2)
            })
            .sum::<f64>();
    Ok(igamc(blocks as f64 / 2.0, chi2 / 2.0))
}

pub fn runs(bits: &[u8]) -> Result<f64> {
    require(bits, "runs", MIN_BITS)?;
    let n = bits.len() as f64;
    let pi = bits.iter().map(|&b| b as f64).sum::<f64>() / n;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(0.0);
    }
    let v = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let num = (v as f64 - 2.0 * n * pi * (1.0 - pi)).abs();
    let den = 2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi);
    Ok(erfc(num / den))
}

struct LongestRunTable {
    block: usize,
    /// Run lengths `<= low` share the first class, `>= low + pi.len() - 1`
    /// the last.
    low: usize,
    pi: &'static [f64],
}

const LONGEST_RUN_TABLES: [(usize, LongestRunTable); 3] = [
    (
        128,
        LongestRunTable {
            block: 8,
            low: 1,
            pi: &[0.2148, 0.3672, 0.2305, 0.1875],
        },
    ),
    (
        6272,
        LongestRunTable {
            block: 128,
            low: 4,
            pi: &[0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124],
        },
    ),
    (
        750_000,
        LongestRunTable {
            block: 10_000,
            low: 10,
            pi: &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
        },
    ),
];

pub fn longest_run(bits: &[u8]) -> Result<f64> {
    require(bits, "longest_run", LONGEST_RUN_TABLES[0].0)?;
    let table = &LONGEST_RUN_TABLES
        .iter()
        .rev()
        .find(|(min, _)| bits.len() >= *min)
        .expect("length checked")
        .1;
    let k = table.pi.len();
    let mut v = vec![0usize; k];
    let blocks = bits.len() / table.block;
    for block in bits.chunks_exact(table.block) {
        let (mut best, mut cur) = (0, 0);
        for &b in block {
            cur = if b == 1 { cur + 1 } else { 0 };
            best = best.max(cur);
        }
        let class = best.clamp(table.low, table.low + k - 1) - table.low;
        v[class] += 1;
    }
    let nb = blocks as f64;
    let chi2: f64 = v
        .iter()
        .zip(table.pi)
        .map(|(&vi, &pi)| (vi as f64 - nb * pi).powi(2) / (nb * pi))
        .sum();
    Ok(igamc((k - 1) as f64 / 2.0, chi2 / 2.0))
}

/// Discrete Fourier transform (spectral) test with the rev. 1a threshold
/// `T = sqrt(ln(1/0.05) n)` and variance `n(0.95)(0.05)/4`.
pub fn dft(bits: &[u8]) -> Result<f64> {
    require(bits, "dft", MIN_BITS)?;
    let n = bits.len();
    let mut buf: Vec<Complex<f64>> = bits
        .iter()
        .map(|&b| Complex::new(if b == 1 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let nf = n as f64;
    let t = ((1.0f64 / 0.05).ln() * nf).sqrt();
    let n0 = 0.95 * nf / 2.0;
    let n1 = buf[..n / 2].iter().filter(|c| c.norm() < t).count() as f64;
    let d = (n1 - n0) / (nf * 0.95 * 0.05 / 4.0).sqrt();
    Ok(erfc(d.abs() / SQRT_2))
}

/// Counts of every overlapping `m`-bit pattern, wrapping around the end.
fn pattern_counts(bits: &[u8], m: usize) -> Vec<u64> {
    let mut counts = vec![0u64; 1 << m];
    if m == 0 {
        counts[0] = bits.len() as u64;
        return counts;
    }
    let n = bits.len();
    let mask = (1usize << m) - 1;
    let mut v = 0usize;
    for &b in &bits[..m - 1] {
        v = (v << 1) | b as usize;
    }
    for i in 0..n {
        v = ((v << 1) | bits[(i + m - 1) % n] as usize) & mask;
        counts[v] += 1;
    }
    counts
}

fn psi_sq(bits: &[u8], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    let sum: f64 = pattern_counts(bits, m)
        .iter()
        .map(|&c| (c as f64).powi(2))
        .sum();
    (1u64 << m) as f64 / n * sum - n
}

/// Serial test; returns `(p1, p2)`.
pub fn serial(bits: &[u8], m: usize) -> Result<(f64, f64)> {
    require(bits, "serial", MIN_BITS)?;
    if m < 2 {
        return Err(Error::InvalidArgument(
            "serial block length must be at least 2".into(),
        ));
    }
    let (p0, p1, p2) = (psi_sq(bits, m), psi_sq(bits, m - 1), psi_sq(bits, m - 2));
    let d1 = p0 - p1;
    let d2 = p0 - 2.0 * p1 + p2;
    let f = |e: i32| 2f64.powi(e);
    Ok((
        igamc(f(m as i32 - 2), d1 / 2.0),
        igamc(f(m as i32 - 3), d2 / 2.0),
    ))
}

fn phi(bits: &[u8], m: usize) -> f64 {
    let n = bits.len() as f64;
    pattern_counts(bits, m)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum()
}

/// Approximate entropy test; returns `(apen, p)`.
pub fn approximate_entropy(bits: &[u8], m: usize) -> Result<(f64, f64)> {
    require(bits, "approximate_entropy", MIN_BITS)?;
    let apen = phi(bits, m) - phi(bits, m + 1);
    let chi2 = 2.0 * bits.len() as f64 * (LN_2 - apen);
    Ok((apen, igamc(2f64.powi(m as i32 - 1), chi2 / 2.0)))
}

fn cusum_p(n: f64, z: f64) -> f64 {
    let sn = n.sqrt();
    let mut sum1 = 0.0;
    let lo = ((-n / z + 1.0) / 4.0).floor() as i64;
    let hi = ((n / z - 1.0) / 4.0).floor() as i64;
    for k in lo..=hi {
        let k = k as f64;
        sum1 += normal_cdf((4.0 * k + 1.0) * z / sn) - normal_cdf((4.0 * k - 1.0) * z / sn);
    }
    let mut sum2 = 0.0;
    let lo = ((-n / z - 3.0) / 4.0).floor() as i64;
    for k in lo..=hi {
        let k = k as f64;
        sum2 += normal_cdf((4.0 * k + 3.0) * z / sn) - normal_cdf((4.0 * k + 1.0) * z / sn);
    }
    1.0 - sum1 + sum2
}

/// Cumulative sums test; returns `(forward, reverse)`.
pub fn cumulative_sums(bits: &[u8]) -> Result<(f64, f64)> {
    require(bits, "cumulative_sums", MIN_BITS)?;
    let n = bits.len() as f64;
    let max_excursion = |it: &mut dyn Iterator<Item = &u8>| {
        let mut s = 0i64;
        let mut z = 0i64;
        for &b in it {
            s += if b == 1 { 1 } else { -1 };
            z = z.max(s.abs());
        }
        z as f64
    };
    let zf = max_excursion(&mut bits.iter());
    let zr = max_excursion(&mut bits.iter().rev());
    Ok((cusum_p(n, zf), cusum_p(n, zr)))
}

/// Runs all eight core tests with the standard parameters.
pub fn nist_core(bits: &[u8]) -> Result<Vec<NistResult>> {
    let serial_p = serial(bits, SERIAL_M)?;
    let cusum = cumulative_sums(bits)?;
    Ok(vec![
        NistResult::new(NistTest::Monobit, "monobit", monobit(bits)?),
        NistResult::new(
            NistTest::BlockFrequency,
            "block_frequency",
            block_frequency(bits, BLOCK_FREQUENCY_M)?,
        ),
        NistResult::new(NistTest::Runs, "runs", runs(bits)?),
        NistResult::new(NistTest::LongestRun, "longest_run", longest_run(bits)?),
        NistResult::new(NistTest::Dft, "dft", dft(bits)?),
        NistResult::new(NistTest::Serial, "serial_1", serial_p.0),
        NistResult::new(NistTest::Serial, "serial_2", serial_p.1),
        NistResult::new(
            NistTest::ApproximateEntropy,
            "approximate_entropy",
            approximate_entropy(bits, APEN_M)?.1,
        ),
        NistResult::new(NistTest::CumulativeSums, "cusum_forward", cusum.0),
        NistResult::new(NistTest::CumulativeSums, "cusum_reverse", cusum.1),
    ])
}

/// True when every p-value reported for `test` passes.
pub fn test_passed(results: &[NistResult], test: NistTest) -> bool {
    results.iter().filter(|r| r.test == test).all(|r| r.pass)
}

/// `test,p_value,pass` rows.
pub fn write_nist_csv<W: Write>(mut w: W, results: &[NistResult]) -> io::Result<()> {
    writeln!(w, "test,p_value,pass")?;
    for r in results {
        writeln!(w, "{},{},{}", r.label, format_g(r.p_value, 12), r.pass)?;
    }
    Ok(())
}

/// Bits of each byte, most significant first.
pub fn bits_from_bytes(bytes: &[u8]) -> Vec<u8> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
        .collect()
}

/// Quantises each value to `⌊v·10⁹⌋ mod 256` and emits the low
/// `bits_per_value` bits of that byte, most significant first.
pub fn bits_from_sequence(seq: &[f64], bits_per_value: usize) -> Result<Vec<u8>> {
    if !(1..=8).contains(&bits_per_value) {
        return Err(Error::InvalidArgument(
            "bits_per_value must lie in 1..=8".into(),
        ));
    }
    Ok(seq
        .iter()
        .flat_map(|&v| {
            let b = quantize_byte(v);
            (0..bits_per_value).rev().map(move |i| (b >> i) & 1)
        })
        .collect())
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|c| match c {
            b'0' => Ok(0),
            b'1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!(
                "'{}' is not a bit",
                c as char
            ))),
        })
        .collect()
}
