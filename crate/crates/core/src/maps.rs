//! One-dimensional chaotic maps and Lyapunov-exponent estimation.
//!
//! Four maps are provided:
//!
//! | kind        | update rule                                       | parameter |
//! |-------------|---------------------------------------------------|-----------|
//! | `Sqcm`      | `x' = sin(a² / sin x)`                            | `a`       |
//! | `Sine`      | `x' = b · sin(π x)`                               | `b`       |
//! | `Dfcs`      | `x' = cos((ηx+1)²+1) / (sin((ηx+1)²+1) + 2)`      | `η`       |
//! | `Chebyshev` | `x' = cos(k · arccos x)`                          | `k`       |
//!
//! The sine-quadratic map is the generator used by the cipher. Its tabulated
//! comparison form `sin(a / sin x)` is available through [`SqcmForm::Linear`].

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};
use std::ops::Deref;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fmt::format_g;

/// `|sin x|` at or below this is treated as a singular state of the
/// sine-quadratic map.
pub const DIV_EPSILON: f64 = 1e-12;

pub const DEFAULT_LE_DISCARD: usize = 1_000;
pub const DEFAULT_LE_ITERATIONS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Sqcm,
    Sine,
    Dfcs,
    Chebyshev,
}

impl MapKind {
    pub const ALL: [MapKind; 4] = [
        MapKind::Sqcm,
        MapKind::Sine,
        MapKind::Dfcs,
        MapKind::Chebyshev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Sqcm => "sqcm",
            MapKind::Sine => "sine",
            MapKind::Dfcs => "dfcs",
            MapKind::Chebyshev => "chebyshev",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown map '{s}'")))
    }
}

/// Which algebraic form of the sine-quadratic map to use. `Squared` is the
/// generator form; `Linear` exists for side-by-side comparison sweeps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SqcmForm {
    #[default]
    Squared,
    Linear,
}

/// A map kind bound to its control parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChaoticMap {
    kind: MapKind,
    param: f64,
    form: SqcmForm,
}

impl ChaoticMap {
    pub fn new(kind: MapKind, param: f64) -> Result<Self> {
        if !(param.is_finite() && param > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "{kind} control parameter must be finite and > 0, got {param}"
            )));
        }
        Ok(ChaoticMap {
            kind,
            param,
            form: SqcmForm::Squared,
        })
    }

    pub fn sqcm(a: f64) -> Result<Self> {
        Self::new(MapKind::Sqcm, a)
    }

    /// Selects the sine-quadratic form. Has no effect on the other maps.
    pub fn with_form(mut self, form: SqcmForm) -> Self {
        self.form = form;
        self
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    pub fn form(&self) -> SqcmForm {
        self.form
    }

    fn sqcm_numerator(&self) -> f64 {
        match self.form {
            SqcmForm::Squared => self.param * self.param,
            SqcmForm::Linear => self.param,
        }
    }

    /// One application of the map.
    pub fn step(&self, x: f64) -> Result<f64> {
        self.step_at(x, 0)
    }

    fn step_at(&self, x: f64, iteration: usize) -> Result<f64> {
        let p = self.param;
        let next = match self.kind {
            MapKind::Sqcm => {
                let s = x.sin();
                if s.abs() <= DIV_EPSILON {
                    return Err(Error::DegenerateState { iteration });
                }
                (self.sqcm_numerator() / s).sin()
            }
            MapKind::Sine => p * (PI * x).sin(),
            MapKind::Dfcs => {
                let u = (p * x + 1.0).powi(2) + 1.0;
                u.cos() / (u.sin() + 2.0)
            }
            MapKind::Chebyshev => {
                if !(-1.0..=1.0).contains(&x) {
                    return Err(Error::DegenerateState { iteration });
                }
                (p * x.acos()).cos()
            }
        };
        if next.is_finite() {
            Ok(next)
        } else {
            Err(Error::DegenerateState { iteration })
        }
    }

    /// Analytic derivative `f'(x)`.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.derivative_at(x, 0)
    }

    fn derivative_at(&self, x: f64, iteration: usize) -> Result<f64> {
        let p = self.param;
        let d = match self.kind {
            MapKind::Sqcm => {
                let s = x.sin();
                if s.abs() <= DIV_EPSILON {
                    return Err(Error::DegenerateState { iteration });
                }
                let c = self.sqcm_numerator();
                (c / s).cos() * (-c * x.cos() / (s * s))
            }
            MapKind::Sine => p * PI * (PI * x).cos(),
            MapKind::Dfcs => {
                let v = p * x + 1.0;
                let u = v * v + 1.0;
                let (su, _) = u.sin_cos();
                -2.0 * p * v * (1.0 + 2.0 * su) / (su + 2.0).powi(2)
            }
            MapKind::Chebyshev => {
                let r = 1.0 - x * x;
                if !(-1.0..=1.0).contains(&x) || r <= DIV_EPSILON {
                    return Err(Error::DegenerateState { iteration });
                }
                p * (p * x.acos()).sin() / r.sqrt()
            }
        };
        Ok(d)
    }

    /// Runs `discard` silent steps from `x0`, then collects the next `take`
    /// states in order.
    pub fn iterate(&self, x0: f64, discard: usize, take: usize) -> Result<RealSequence> {
        if take == 0 {
            return Err(Error::InvalidArgument("take must be positive".into()));
        }
        let mut x = x0;
        for i in 0..discard {
            x = self.step_at(x, i)?;
        }
        let mut values = Vec::with_capacity(take);
        for i in discard..discard + take {
            x = self.step_at(x, i)?;
            values.push(x);
        }
        Ok(RealSequence(values))
    }

    /// Mean of `ln|f'(x_i)|` over `n` orbit points following `discard` steps
    /// from `x0`. The first term is evaluated at the state reached after the
    /// discard phase.
    pub fn lyapunov_exponent(&self, x0: f64, discard: usize, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let mut x = x0;
        for i in 0..discard {
            x = self.step_at(x, i)?;
        }
        let mut sum = KahanSum::default();
        for i in discard..discard + n {
            let d = self.derivative_at(x, i)?.abs();
            if d == 0.0 || !d.is_finite() {
                return Err(Error::NonFinite(format!("|f'| = {d} at iteration {i}")));
            }
            sum.add(d.ln());
            if i + 1 < discard + n {
                x = self.step_at(x, i)?;
            }
        }
        Ok(sum.total() / n as f64)
    }
}

/// An ordered, non-empty run of map states.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSequence(Vec<f64>);

impl RealSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("sequence must be non-empty".into()));
        }
        Ok(RealSequence(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for RealSequence {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepStatus {
    Ok,
    Degenerate,
    NonFinite,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepStatus::Ok => "ok",
            SweepStatus::Degenerate => "degenerate",
            SweepStatus::NonFinite => "nonfinite",
        }
    }
}

/// One grid point of a parameter sweep. `le` is `None` whenever `status`
/// is not [`SweepStatus::Ok`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub param: f64,
    pub le: Option<f64>,
    pub status: SweepStatus,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub spacing: Spacing,
    pub form: SqcmForm,
    pub discard: usize,
    pub iterations: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            spacing: Spacing::Linear,
            form: SqcmForm::Squared,
            discard: DEFAULT_LE_DISCARD,
            iterations: DEFAULT_LE_ITERATIONS,
        }
    }
}

/// `steps` grid points from `lo` to `hi` inclusive.
pub fn sweep_grid(lo: f64, hi: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sweep needs 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(
            "sweep needs at least 2 steps".into(),
        ));
    }
    let last = (steps - 1) as f64;
    let grid = (0..steps)
        .map(|i| {
            if i == 0 {
                return lo;
            }
            if i == steps - 1 {
                return hi;
            }
            let t = i as f64 / last;
            match spacing {
                Spacing::Linear => lo + (hi - lo) * t,
                Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
            }
        })
        .collect();
    Ok(grid)
}

/// Lyapunov exponent at every point of an evenly spaced parameter grid.
/// Grid points are evaluated in parallel; output stays in ascending order.
pub fn le_sweep(
    kind: MapKind,
    param_lo: f64,
    param_hi: f64,
    steps: usize,
    x0: f64,
    opts: SweepOptions,
) -> Result<Vec<SweepPoint>> {
    let grid = sweep_grid(param_lo, param_hi, steps, opts.spacing)?;
    Ok(le_sweep_grid(kind, &grid, x0, opts))
}

pub fn le_sweep_grid(
    kind: MapKind,
    params: &[f64],
    x0: f64,
    opts: SweepOptions,
) -> Vec<SweepPoint> {
    params
        .par_iter()
        .map(|&param| {
            let result = ChaoticMap::new(kind, param)
                .map(|m| m.with_form(opts.form))
                .and_then(|m| m.lyapunov_exponent(x0, opts.discard, opts.iterations));
            match result {
                Ok(le) => SweepPoint {
                    param,
                    le: Some(le),
                    status: SweepStatus::Ok,
                },
                Err(Error::NonFinite(_)) => SweepPoint {
                    param,
                    le: None,
                    status: SweepStatus::NonFinite,
                },
                Err(_) => SweepPoint {
                    param,
                    le: None,
                    status: SweepStatus::Degenerate,
                },
            }
        })
        .collect()
}

/// Writes `param,le,status` rows with LF line endings.
pub fn write_sweep_csv<W: Write>(mut out: W, points: &[SweepPoint]) -> io::Result<()> {
    out.write_all(b"param,le,status\n")?;
    for p in points {
        let le = p.le.map(|v| format_g(v, 12)).unwrap_or_default();
        writeln!(
            out,
            "{},{},{}",
            format_g(p.param, 12),
            le,
            p.status.as_str()
        )?;
    }
    Ok(())
}
