//! A single-input LSTM cell with full backpropagation through time.
//!
//! Gate rows are stacked in the order input, forget, candidate, output; each
//! block has `hidden` rows. The input dimension is fixed at one because the
//! cell only ever consumes scalar map states.

use rand::Rng;

pub(crate) const GATES: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct LstmCell {
    pub(crate) hidden: usize,
    /// `4H` input weights.
    pub(crate) w_input: Vec<f64>,
    /// `4H × H` recurrent weights, row-major.
    pub(crate) w_hidden: Vec<f64>,
    /// `4H` biases.
    pub(crate) bias: Vec<f64>,
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl LstmCell {
    pub(crate) fn zeros(hidden: usize) -> Self {
        LstmCell {
            hidden,
            w_input: vec![0.0; GATES * hidden],
            w_hidden: vec![0.0; GATES * hidden * hidden],
            bias: vec![0.0; GATES * hidden],
        }
    }

    /// Uniform initialisation in `±1/sqrt(H)` drawn in field order.
    pub(crate) fn random<R: Rng>(hidden: usize, rng: &mut R) -> Self {
        let k = 1.0 / (hidden as f64).sqrt();
        let mut cell = Self::zeros(hidden);
        for v in cell
            .w_input
            .iter_mut()
            .chain(cell.w_hidden.iter_mut())
            .chain(cell.bias.iter_mut())
        {
            *v = rng.random_range(-k..k);
        }
        cell
    }

    pub(crate) fn param_count(hidden: usize) -> usize {
        GATES * hidden * (hidden + 2)
    }

    pub(crate) fn params(&self) -> impl Iterator<Item = &f64> {
        self.w_input.iter().chain(&self.w_hidden).chain(&self.bias)
    }

    pub(crate) fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.w_input
            .iter_mut()
            .chain(self.w_hidden.iter_mut())
            .chain(self.bias.iter_mut())
    }

    /// Pre-activations `z = w_input·x + w_hidden·h + bias`.
    #[inline]
    fn preactivate(&self, x: f64, h: &[f64], z: &mut [f64]) {
        let hs = self.hidden;
        for (r, zr) in z.iter_mut().enumerate() {
            let row = &self.w_hidden[r * hs..(r + 1) * hs];
            let dot: f64 = row.iter().zip(h).map(|(w, hv)| w * hv).sum();
            *zr = self.bias[r] + self.w_input[r] * x + dot;
        }
    }

    /// `w_hidden` stored column-major (`H × 4H`), for [`LstmCell::step`].
    pub(crate) fn transposed_hidden(&self) -> Vec<f64> {
        let (hs, rows) = (self.hidden, GATES * self.hidden);
        let mut wt = vec![0.0; rows * hs];
        for r in 0..rows {
            for j in 0..hs {
                wt[j * rows + r] = self.w_hidden[r * hs + j];
            }
        }
        wt
    }

    /// Advances `(h, c)` by one input without recording anything. `wt` is
    /// [`LstmCell::transposed_hidden`]; accumulating column by column keeps
    /// each row's summation order, so results equal the traced run bit for
    /// bit while the inner loop vectorises across rows.
    pub(crate) fn step(&self, x: f64, wt: &[f64], h: &mut [f64], c: &mut [f64], z: &mut [f64]) {
        let hs = self.hidden;
        z.fill(-0.0);
        for (col, &hj) in wt.chunks_exact(z.len()).zip(h.iter()) {
            for (zr, &w) in z.iter_mut().zip(col) {
                *zr += w * hj;
            }
        }
        for ((zr, &b), &wi) in z.iter_mut().zip(&self.bias).zip(&self.w_input) {
            *zr = b + wi * x + *zr;
        }
        for u in 0..hs {
            let i = sigmoid(z[u]);
            let f = sigmoid(z[hs + u]);
            let g = z[2 * hs + u].tanh();
            let o = sigmoid(z[3 * hs + u]);
            c[u] = f * c[u] + i * g;
            h[u] = o * c[u].tanh();
        }
    }

    /// Runs the cell over `xs` from a zero state, recording everything needed
    /// for the backward pass.
    pub(crate) fn run_traced(&self, xs: impl Iterator<Item = f64>, trace: &mut Trace) {
        let hs = self.hidden;
        trace.reset(hs);
        let mut z = vec![0.0; GATES * hs];
        for x in xs {
            let t = trace.xs.len();
            trace.xs.push(x);
            self.preactivate(x, &trace.h[t * hs..(t + 1) * hs], &mut z);
            let gate_base = trace.gates.len();
            trace.gates.resize(gate_base + GATES * hs, 0.0);
            let tc_base = trace.tanh_c.len();
            trace.tanh_c.resize(tc_base + hs, 0.0);
            trace.h.resize((t + 2) * hs, 0.0);
            trace.c.resize((t + 2) * hs, 0.0);
            for u in 0..hs {
                let i = sigmoid(z[u]);
                let f = sigmoid(z[hs + u]);
                let g = z[2 * hs + u].tanh();
                let o = sigmoid(z[3 * hs + u]);
                let c_prev = trace.c[t * hs + u];
                let c = f * c_prev + i * g;
                let tc = c.tanh();
                trace.gates[gate_base + u] = i;
                trace.gates[gate_base + hs + u] = f;
                trace.gates[gate_base + 2 * hs + u] = g;
                trace.gates[gate_base + 3 * hs + u] = o;
                trace.tanh_c[tc_base + u] = tc;
                trace.c[(t + 1) * hs + u] = c;
                trace.h[(t + 1) * hs + u] = o * tc;
            }
        }
    }

    /// Backpropagates a gradient on the final hidden state through the whole
    /// recorded trace, accumulating parameter gradients into `grads`.
    pub(crate) fn backward(&self, trace: &Trace, dh_final: &[f64], grads: &mut LstmCell) {
        let hs = self.hidden;
        let steps = trace.xs.len();
        let mut dh = dh_final.to_vec();
        let mut dc = vec![0.0; hs];
        let mut dz = vec![0.0; GATES * hs];
        let mut dh_prev = vec![0.0; hs];
        for t in (0..steps).rev() {
            let gates = &trace.gates[t * GATES * hs..(t + 1) * GATES * hs];
            let tanh_c = &trace.tanh_c[t * hs..(t + 1) * hs];
            let c_prev = &trace.c[t * hs..(t + 1) * hs];
            for u in 0..hs {
                let i = gates[u];
                let f = gates[hs + u];
                let g = gates[2 * hs + u];
                let o = gates[3 * hs + u];
                let tc = tanh_c[u];
                let d_o = dh[u] * tc;
                let dcu = dc[u] + dh[u] * o * (1.0 - tc * tc);
                dz[u] = dcu * g * i * (1.0 - i);
                dz[hs + u] = dcu * c_prev[u] * f * (1.0 - f);
                dz[2 * hs + u] = dcu * i * (1.0 - g * g);
                dz[3 * hs + u] = d_o * o * (1.0 - o);
                dc[u] = dcu * f;
            }
            let x = trace.xs[t];
            let h_prev = &trace.h[t * hs..(t + 1) * hs];
            dh_prev.iter_mut().for_each(|v| *v = 0.0);
            for (r, &dzr) in dz.iter().enumerate() {
                grads.w_input[r] += dzr * x;
                grads.bias[r] += dzr;
                let row = r * hs..(r + 1) * hs;
                for ((gw, &hp), (dhp, &w)) in grads.w_hidden[row.clone()]
                    .iter_mut()
                    .zip(h_prev)
                    .zip(dh_prev.iter_mut().zip(&self.w_hidden[row]))
                {
                    *gw += dzr * hp;
                    *dhp += dzr * w;
                }
            }
            std::mem::swap(&mut dh, &mut dh_prev);
        }
    }
}

/// Per-step activations recorded during a traced forward run. `h` and `c`
/// hold `steps + 1` states (the zero initial state first).
#[derive(Default)]
pub(crate) struct Trace {
    pub(crate) xs: Vec<f64>,
    pub(crate) h: Vec<f64>,
    pub(crate) c: Vec<f64>,
    gates: Vec<f64>,
    tanh_c: Vec<f64>,
}

impl Trace {
    fn reset(&mut self, hidden: usize) {
        self.xs.clear();
        self.gates.clear();
        self.tanh_c.clear();
        self.h.clear();
        self.c.clear();
        self.h.resize(hidden, 0.0);
        self.c.resize(hidden, 0.0);
    }

    pub(crate) fn final_hidden(&self, hidden: usize) -> &[f64] {
        &self.h[self.h.len() - hidden..]
    }
}
