//! The four secret scalars and their flat-file encoding.
//!
//! Key file layout, four LF-terminated lines in this order:
//!
//! ```text
//! x1=0.318309886183791
//! y1=0.7071067811865476
//! a=5521.25
//! n0=4096
//! ```

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

pub const KEY_A_MAX: f64 = 1e4;
pub const KEY_N0_MIN: u64 = 2000;

/// Secret key material.
///
/// * `key_x1` seeds the sine-quadratic orbit.
/// * `key_y1` perturbs the network seed window.
/// * `key_a` is the map control parameter.
/// * `key_n0` is the number of orbit iterates discarded before use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeySet {
    pub key_x1: f64,
    pub key_y1: f64,
    pub key_a: f64,
    pub key_n0: u64,
}

impl KeySet {
    pub fn new(key_x1: f64, key_y1: f64, key_a: f64, key_n0: u64) -> Result<Self> {
        let keys = KeySet {
            key_x1,
            key_y1,
            key_a,
            key_n0,
        };
        keys.validate()?;
        Ok(keys)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.key_x1) {
            return Err(Error::InvalidKey(format!(
                "x1 must lie in (0, 1), got {}",
                self.key_x1
            )));
        }
        if !unit(self.key_y1) {
            return Err(Error::InvalidKey(format!(
                "y1 must lie in (0, 1), got {}",
                self.key_y1
            )));
        }
        if !(self.key_a > 0.0 && self.key_a <= KEY_A_MAX) {
            return Err(Error::InvalidKey(format!(
                "a must lie in (0, {KEY_A_MAX}], got {}",
                self.key_a
            )));
        }
        if self.key_n0 < KEY_N0_MIN {
            return Err(Error::InvalidKey(format!(
                "n0 must be at least {KEY_N0_MIN}, got {}",
                self.key_n0
            )));
        }
        Ok(())
    }

    /// Draws a key uniformly from the generator's strongly chaotic region:
    /// `a ∈ [10, 10⁴)`, `n0 ∈ [2000, 10000)`. Small `a` values are legal but
    /// the map has periodic windows below 10 and they are avoided here.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let unit = |rng: &mut R| loop {
            let v: f64 = rng.random();
            if v > 0.0 {
                return v;
            }
        };
        KeySet {
            key_x1: unit(rng),
            key_y1: unit(rng),
            key_a: rng.random_range(10.0..KEY_A_MAX),
            key_n0: rng.random_range(KEY_N0_MIN..10_000),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        fs::read_to_string(path)?.parse()
    }
}

impl fmt::Display for KeySet {
    /// Shortest round-trip decimal for each real (at most 17 significant digits).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x1={:?}", self.key_x1)?;
        writeln!(f, "y1={:?}", self.key_y1)?;
        writeln!(f, "a={:?}", self.key_a)?;
        writeln!(f, "n0={}", self.key_n0)
    }
}

impl FromStr for KeySet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_suffix('\n')
            .ok_or_else(|| Error::InvalidKey("key file must end with a newline".into()))?;
        let lines: Vec<&str> = body.split('\n').collect();
        if lines.len() != 4 {
            return Err(Error::InvalidKey(format!(
                "expected 4 lines, found {}",
                lines.len()
            )));
        }
        let field = |i: usize, name: &str| -> Result<&str> {
            lines[i]
                .strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| {
                    Error::InvalidKey(format!("line {} must start with '{name}='", i + 1))
                })
        };
        let real = |i: usize, name: &str| -> Result<f64> {
            let v = field(i, name)?;
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidKey(format!("{name}: '{v}' is not a finite decimal")))
        };
        let n0 = field(3, "n0")?;
        let n0 = n0
            .parse::<u64>()
            .map_err(|_| Error::InvalidKey(format!("n0: '{n0}' is not a non-negative integer")))?;
        KeySet::new(real(0, "x1")?, real(1, "y1")?, real(2, "a")?, n0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn file_roundtrip() {
        let k = KeySet::new(0.1 + 0.2, 1.0 / 3.0, 5521.25, 4096).unwrap();
        let text = k.to_string();
        assert_eq!(
            text,
            "x1=0.30000000000000004\ny1=0.3333333333333333\na=5521.25\nn0=4096\n"
        );
        assert_eq!(text.parse::<KeySet>().unwrap(), k);
    }

    #[test]
    fn range_checks() {
        assert!(KeySet::new(0.0, 0.5, 10.0, 2000).is_err());
        assert!(KeySet::new(0.5, 1.0, 10.0, 2000).is_err());
        assert!(KeySet::new(0.5, 0.5, 0.0, 2000).is_err());
        assert!(KeySet::new(0.5, 0.5, 10_000.5, 2000).is_err());
        assert!(KeySet::new(0.5, 0.5, 10_000.0, 1999).is_err());
        assert!(KeySet::new(0.5, 0.5, 10_000.0, 2000).is_ok());
    }

    #[test]
    fn malformed_files() {
        for bad in [
            "x1=0.5\ny1=0.5\na=10\nn0=2000",
            "y1=0.5\nx1=0.5\na=10\nn0=2000\n",
            "x1=0.5\ny1=0.5\na=10\n",
            "x1=0.5\ny1=0.5\na=ten\nn0=2000\n",
            "x1=0.5\ny1=0.5\na=10\nn0=2000.5\n",
            "x1=0.5\ny1=0.5\na=inf\nn0=2000\n",
        ] {
            assert!(bad.parse::<KeySet>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn random_keys_are_valid_and_seeded() {
        let mut a = ChaCha20Rng::seed_from_u64(5);
        let mut b = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..100 {
            let k = KeySet::random(&mut a);
            k.validate().unwrap();
            assert_eq!(k, KeySet::random(&mut b));
        }
    }
}
