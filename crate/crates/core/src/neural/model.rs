//! Bidirectional LSTM that learns one-step prediction of a scalar orbit.
//!
//! The forward cell reads a window oldest-to-newest, the backward cell reads
//! it newest-to-oldest, and an affine head maps the two final hidden states
//! to the predicted next value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::lstm::{LstmCell, Trace, GATES};
use crate::error::{Error, Result};
use crate::maps::{ChaoticMap, RealSequence};

/// Transient iterates dropped before the training corpus is collected.
pub const TRAIN_DISCARD: usize = 6_000;
/// Length of the training corpus.
pub const TRAIN_LEN: usize = 24_000;
/// Default training orbit: a parameter at which the map is chaotic yet
/// smooth enough for one-step prediction to be learnable.
pub const DEFAULT_TRAIN_PARAM: f64 = 1.804;
pub const DEFAULT_TRAIN_X0: f64 = 0.3;
/// Fraction of supervised pairs (taken from the end) held out for evaluation.
pub const HOLDOUT_FRACTION: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub hidden_size: usize,
    pub window: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub init_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden_size: 32,
            window: 16,
            epochs: 50,
            learning_rate: 0.01,
            init_seed: 0,
        }
    }
}

/// Provenance recorded with a model. Losses are `None` until at least one
/// epoch has run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainingMeta {
    pub epochs: u64,
    pub learning_rate: f64,
    pub init_seed: u64,
    pub train_param: f64,
    pub train_x0: f64,
    /// Mean squared error over the training pairs in the final epoch.
    pub final_loss: Option<f64>,
    /// One-step mean squared error on the held-out tail of the corpus.
    pub holdout_mse: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlstmModel {
    pub(crate) window: usize,
    pub(crate) forward: LstmCell,
    pub(crate) backward: LstmCell,
    /// `2H` head weights: forward-state block then backward-state block.
    pub(crate) out_weights: Vec<f64>,
    pub(crate) out_bias: f64,
    pub(crate) meta: TrainingMeta,
}

impl BlstmModel {
    /// Freshly initialised weights drawn from a ChaCha20 stream seeded with
    /// `init_seed`, in the order forward cell, backward cell, head.
    pub fn initialize(hidden_size: usize, window: usize, init_seed: u64) -> Result<Self> {
        if hidden_size == 0 || window == 0 {
            return Err(Error::InvalidArgument(
                "hidden_size and window must be positive".into(),
            ));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(init_seed);
        let forward = LstmCell::random(hidden_size, &mut rng);
        let backward = LstmCell::random(hidden_size, &mut rng);
        let k = 1.0 / ((2 * hidden_size) as f64).sqrt();
        let out_weights = (0..2 * hidden_size)
            .map(|_| rng.random_range(-k..k))
            .collect();
        let out_bias = rng.random_range(-k..k);
        Ok(BlstmModel {
            window,
            forward,
            backward,
            out_weights,
            out_bias,
            meta: TrainingMeta {
                epochs: 0,
                learning_rate: 0.0,
                init_seed,
                train_param: f64::NAN,
                train_x0: f64::NAN,
                final_loss: None,
                holdout_mse: None,
            },
        })
    }

    pub fn hidden_size(&self) -> usize {
        self.forward.hidden
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn meta(&self) -> &TrainingMeta {
        &self.meta
    }

    pub(crate) fn param_count(hidden: usize) -> usize {
        2 * LstmCell::param_count(hidden) + 2 * hidden + 1
    }

    /// Raw (unclamped) one-step prediction for a full window.
    pub fn predict_next(&self, window: &[f64]) -> Result<f64> {
        if window.len() != self.window {
            return Err(Error::WindowMismatch {
                expected: self.window,
                got: window.len(),
            });
        }
        let mut scratch = Scratch::new(self);
        Ok(self.forward_pass(window, &mut scratch))
    }

    fn forward_pass(&self, window: &[f64], s: &mut Scratch) -> f64 {
        let hs = self.hidden_size();
        s.clear();
        for &x in window {
            self.forward
                .step(x, &s.wt_f, &mut s.hf, &mut s.cf, &mut s.z);
        }
        for &x in window.iter().rev() {
            self.backward
                .step(x, &s.wt_b, &mut s.hb, &mut s.cb, &mut s.z);
        }
        let (wf, wb) = self.out_weights.split_at(hs);
        let yf: f64 = wf.iter().zip(&s.hf).map(|(w, h)| w * h).sum();
        let yb: f64 = wb.iter().zip(&s.hb).map(|(w, h)| w * h).sum();
        self.out_bias + yf + yb
    }

    /// Autoregressive generator seeded with `seed_window`. Each output is
    /// clamped to `[-1, 1]` before it is fed back.
    pub fn predictor(&self, seed_window: &[f64]) -> Result<Predictor<'_>> {
        if seed_window.len() != self.window {
            return Err(Error::WindowMismatch {
                expected: self.window,
                got: seed_window.len(),
            });
        }
        Ok(Predictor {
            model: self,
            window: seed_window.to_vec(),
            scratch: Scratch::new(self),
        })
    }

    /// Emits `count` autoregressive predictions following `seed_window`.
    pub fn predict(&self, seed_window: &[f64], count: usize) -> Result<RealSequence> {
        let values: Vec<f64> = self.predictor(seed_window)?.take(count).collect();
        RealSequence::new(values)
    }

    /// Squared error and parameter gradients for one supervised pair.
    fn accumulate_gradient(
        &self,
        window: &[f64],
        target: f64,
        traces: &mut (Trace, Trace),
        grads: &mut BlstmModel,
    ) -> f64 {
        let hs = self.hidden_size();
        self.forward
            .run_traced(window.iter().copied(), &mut traces.0);
        self.backward
            .run_traced(window.iter().rev().copied(), &mut traces.1);
        let hf = traces.0.final_hidden(hs);
        let hb = traces.1.final_hidden(hs);
        let (wf, wb) = self.out_weights.split_at(hs);
        let y = self.out_bias
            + wf.iter().zip(hf).map(|(w, h)| w * h).sum::<f64>()
            + wb.iter().zip(hb).map(|(w, h)| w * h).sum::<f64>();
        let err = y - target;
        let dy = 2.0 * err;

        grads.out_bias += dy;
        for (g, h) in grads.out_weights.iter_mut().zip(hf.iter().chain(hb)) {
            *g += dy * h;
        }
        let dhf: Vec<f64> = wf.iter().map(|w| dy * w).collect();
        let dhb: Vec<f64> = wb.iter().map(|w| dy * w).collect();
        self.forward.backward(&traces.0, &dhf, &mut grads.forward);
        self.backward.backward(&traces.1, &dhb, &mut grads.backward);
        err * err
    }

    fn zero_like(&self) -> BlstmModel {
        let hs = self.hidden_size();
        BlstmModel {
            window: self.window,
            forward: LstmCell::zeros(hs),
            backward: LstmCell::zeros(hs),
            out_weights: vec![0.0; 2 * hs],
            out_bias: 0.0,
            meta: self.meta,
        }
    }

    pub(crate) fn params(&self) -> impl Iterator<Item = &f64> {
        self.forward
            .params()
            .chain(self.backward.params())
            .chain(&self.out_weights)
            .chain(std::iter::once(&self.out_bias))
    }

    pub(crate) fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.forward
            .params_mut()
            .chain(self.backward.params_mut())
            .chain(self.out_weights.iter_mut())
            .chain(std::iter::once(&mut self.out_bias))
    }

    fn sgd_update(&mut self, grads: &mut BlstmModel, lr: f64) {
        for (p, g) in self.params_mut().zip(grads.params_mut()) {
            *p -= lr * *g;
            *g = 0.0;
        }
    }

    /// Mean squared one-step error over consecutive `(window -> next)` pairs
    /// of `series`.
    pub fn one_step_mse(&self, series: &[f64]) -> Result<f64> {
        let w = self.window;
        if series.len() <= w {
            return Err(Error::LengthMismatch {
                expected: w + 1,
                got: series.len(),
            });
        }
        let mut s = Scratch::new(self);
        let pairs = series.len() - w;
        let total: f64 = (0..pairs)
            .map(|i| {
                let e = self.forward_pass(&series[i..i + w], &mut s) - series[i + w];
                e * e
            })
            .sum();
        Ok(total / pairs as f64)
    }

    /// Plain per-pair gradient descent over `series`, visiting pairs in order.
    /// Returns the mean training loss of the last epoch.
    pub fn fit(
        &mut self,
        series: &[f64],
        epochs: usize,
        learning_rate: f64,
    ) -> Result<Option<f64>> {
        let w = self.window;
        if series.len() <= w {
            return Err(Error::LengthMismatch {
                expected: w + 1,
                got: series.len(),
            });
        }
        let pairs = series.len() - w;
        let mut grads = self.zero_like();
        let mut traces = (Trace::default(), Trace::default());
        let mut last = None;
        for epoch in 0..epochs {
            let mut total = 0.0;
            for i in 0..pairs {
                total += self.accumulate_gradient(
                    &series[i..i + w],
                    series[i + w],
                    &mut traces,
                    &mut grads,
                );
                self.sgd_update(&mut grads, learning_rate);
            }
            let mean = total / pairs as f64;
            if !mean.is_finite() || self.params().any(|p| !p.is_finite()) {
                return Err(Error::NonFiniteLoss { epoch });
            }
            last = Some(mean);
        }
        Ok(last)
    }
}

/// Trains a model on the sine-quadratic orbit started at `train_x0` with
/// control parameter `train_param`: the first [`TRAIN_DISCARD`] iterates are
/// dropped, the next [`TRAIN_LEN`] form the corpus, and the last
/// [`HOLDOUT_FRACTION`] of the supervised pairs is kept out of training.
pub fn train_model(train_param: f64, train_x0: f64, config: TrainConfig) -> Result<BlstmModel> {
    if config.epochs > 0 && !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::InvalidArgument(
            "learning rate must be positive".into(),
        ));
    }
    let corpus = ChaoticMap::sqcm(train_param)?.iterate(train_x0, TRAIN_DISCARD, TRAIN_LEN)?;
    let mut model = BlstmModel::initialize(config.hidden_size, config.window, config.init_seed)?;
    model.meta.train_param = train_param;
    model.meta.train_x0 = train_x0;
    model.meta.learning_rate = config.learning_rate;
    if config.epochs == 0 {
        return Ok(model);
    }

    let (train, holdout) = split_corpus(&corpus, config.window);
    let final_loss = model.fit(train, config.epochs, config.learning_rate)?;
    model.meta.epochs = config.epochs as u64;
    model.meta.final_loss = final_loss;
    model.meta.holdout_mse = Some(model.one_step_mse(holdout)?);
    Ok(model)
}

/// Splits a corpus into training and held-out series. The held-out series
/// starts `window` values early so that its first target is the first value
/// not used as a training target.
pub fn split_corpus(corpus: &[f64], window: usize) -> (&[f64], &[f64]) {
    let pairs = corpus.len().saturating_sub(window);
    let holdout_pairs = ((pairs as f64) * HOLDOUT_FRACTION).round() as usize;
    let train_pairs = pairs - holdout_pairs;
    let train = &corpus[..train_pairs + window];
    let holdout = &corpus[train_pairs..];
    (train, holdout)
}

struct Scratch {
    wt_f: Vec<f64>,
    wt_b: Vec<f64>,
    hf: Vec<f64>,
    cf: Vec<f64>,
    hb: Vec<f64>,
    cb: Vec<f64>,
    z: Vec<f64>,
}

impl Scratch {
    fn new(model: &BlstmModel) -> Self {
        let hidden = model.hidden_size();
        Scratch {
            wt_f: model.forward.transposed_hidden(),
            wt_b: model.backward.transposed_hidden(),
            hf: vec![0.0; hidden],
            cf: vec![0.0; hidden],
            hb: vec![0.0; hidden],
            cb: vec![0.0; hidden],
            z: vec![0.0; GATES * hidden],
        }
    }

    fn clear(&mut self) {
        for v in [&mut self.hf, &mut self.cf, &mut self.hb, &mut self.cb] {
            v.iter_mut().for_each(|x| *x = 0.0);
        }
    }
}

/// Streaming autoregressive predictor; see [`BlstmModel::predictor`].
pub struct Predictor<'a> {
    model: &'a BlstmModel,
    window: Vec<f64>,
    scratch: Scratch,
}

impl Iterator for Predictor<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let y = self
            .model
            .forward_pass(&self.window, &mut self.scratch)
            .clamp(-1.0, 1.0);
        self.window.copy_within(1.., 0);
        *self.window.last_mut().expect("non-empty window") = y;
        Some(y)
    }
}

/// Free-function form of [`BlstmModel::predict`].
pub fn blstm_predict(
    model: &BlstmModel,
    seed_window: &[f64],
    count: usize,
) -> Result<RealSequence> {
    model.predict(seed_window, count)
}
