//! From-scratch DQN: a small feed-forward Q-network trained by manual
//! backpropagation on the mean squared TD error, with experience replay and
//! a periodically synchronized target network.
//!
//! States enter the network one-hot encoded, so the approximator can
//! represent anything the Q-table can.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::agents::{argmax, select_random};
use crate::env_simple::SimpleEnv;
use crate::error::DomainError;

/// Hidden layout of the Q-network: two layers of width 64.
pub const HIDDEN_LAYERS: [usize; 2] = [64, 64];

pub fn one_hot(index: usize, len: usize) -> Vec<f64> {
    let mut x = vec![0.0; len];
    x[index] = 1.0;
    x
}

#[derive(Debug, Clone, PartialEq)]
struct Dense {
    input: usize,
    output: usize,
    /// Row-major by output: `w[o * input + i]`.
    w: Vec<f64>,
    b: Vec<f64>,
}

impl Dense {
    fn forward_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.output {
            let row = &self.w[o * self.input..(o + 1) * self.input];
            let mut acc = self.b[o];
            for (wi, xi) in row.iter().zip(x) {
                acc += wi * xi;
            }
            out.push(acc);
        }
    }
}

/// Feed-forward Q-value approximator: one-hot state in, one Q-value per
/// action out. Hidden layers use ReLU; the output layer is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layers: Vec<Dense>,
}

impl Mlp {
    /// He-uniform initialization from `rng`.
    pub fn new(input: usize, hidden: &[usize], output: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut layers = Vec::new();
        let mut fan_in = input;
        let sizes = hidden.iter().copied().chain(core::iter::once(output));
        for fan_out in sizes {
            let limit = libm::sqrt(6.0 / fan_in as f64);
            let w = (0..fan_in * fan_out)
                .map(|_| rng.random_range(-limit..limit))
                .collect();
            layers.push(Dense {
                input: fan_in,
                output: fan_out,
                w,
                b: vec![0.0; fan_out],
            });
            fan_in = fan_out;
        }
        Mlp { layers }
    }

    /// Layer widths from input to output, e.g. `[24, 64, 64, 7]`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.layers[0].input];
        sizes.extend(self.layers.iter().map(|l| l.output));
        sizes
    }

    pub fn input_len(&self) -> usize {
        self.layers[0].input
    }

    pub fn output_len(&self) -> usize {
        self.layers.last().expect("at least one layer").output
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.input_len());
        let mut current = x.to_vec();
        let mut next = Vec::new();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            layer.forward_into(&current, &mut next);
            if l != last {
                for v in next.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            }
            core::mem::swap(&mut current, &mut next);
        }
        current
    }

    /// Post-activation outputs of every layer, for backpropagation.
    fn forward_cached(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut activations = Vec::with_capacity(self.layers.len());
        let mut current = x.to_vec();
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut next = Vec::new();
            layer.forward_into(&current, &mut next);
            if l != last {
                for v in next.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            }
            activations.push(next.clone());
            current = next;
        }
        activations
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    /// All parameters flattened layer by layer, weights before biases.
    pub fn flat_params(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            flat.extend_from_slice(&layer.w);
            flat.extend_from_slice(&layer.b);
        }
        flat
    }

    pub fn set_flat_params(&mut self, flat: &[f64]) -> Result<(), DomainError> {
        if flat.len() != self.param_count() {
            return Err(DomainError::InvalidConfig(alloc::format!(
                "expected {} parameters, got {}",
                self.param_count(),
                flat.len()
            )));
        }
        let mut off = 0;
        for layer in &mut self.layers {
            let w_len = layer.w.len();
            layer.w.copy_from_slice(&flat[off..off + w_len]);
            off += w_len;
            let b_len = layer.b.len();
            layer.b.copy_from_slice(&flat[off..off + b_len]);
            off += b_len;
        }
        Ok(())
    }

    /// Rebuilds a network from its layer sizes and flat parameters.
    pub fn from_flat(sizes: &[usize], flat: &[f64]) -> Result<Self, DomainError> {
        if sizes.len() < 2 {
            return Err(DomainError::InvalidConfig(
                "network needs at least input and output sizes".into(),
            ));
        }
        let layers = sizes
            .windows(2)
            .map(|pair| Dense {
                input: pair[0],
                output: pair[1],
                w: vec![0.0; pair[0] * pair[1]],
                b: vec![0.0; pair[1]],
            })
            .collect();
        let mut net = Mlp { layers };
        net.set_flat_params(flat)?;
        Ok(net)
    }

    pub fn all_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.w.iter().chain(&l.b).all(|v| v.is_finite()))
    }
}

/// Loss and prediction statistics of one training batch.
#[derive(Debug, Clone, Copy)]
pub struct BatchStats {
    /// Mean squared TD error.
    pub loss: f64,
    /// Mean |Q(s,a)| of the taken actions; used for divergence detection.
    pub mean_abs_q: f64,
}

/// Mean-squared-error loss over `(input, action, target)` triples and its
/// gradient with respect to every parameter, flattened like
/// [`Mlp::flat_params`].
pub fn loss_and_gradients(
    net: &Mlp,
    inputs: &[Vec<f64>],
    actions: &[usize],
    targets: &[f64],
) -> (BatchStats, Vec<f64>) {
    debug_assert_eq!(inputs.len(), actions.len());
    debug_assert_eq!(inputs.len(), targets.len());
    let batch = inputs.len();
    let scale = 1.0 / batch as f64;
    let mut grads = vec![0.0; net.param_count()];
    let mut loss = 0.0;
    let mut abs_q = 0.0;

    // Offsets of each layer's weight block in the flat gradient vector.
    let mut offsets = Vec::with_capacity(net.layers.len());
    let mut off = 0;
    for layer in &net.layers {
        offsets.push(off);
        off += layer.w.len() + layer.b.len();
    }

    for ((x, &action), &target) in inputs.iter().zip(actions).zip(targets) {
        let activations = net.forward_cached(x);
        let q = activations.last().expect("network has layers");
        let err = q[action] - target;
        loss += scale * err * err;
        abs_q += scale * libm::fabs(q[action]);

        // dL/dq is nonzero only at the taken action.
        let mut delta = vec![0.0; q.len()];
        delta[action] = 2.0 * scale * err;

        for l in (0..net.layers.len()).rev() {
            let layer = &net.layers[l];
            let input: &[f64] = if l == 0 { x } else { &activations[l - 1] };
            let base = offsets[l];
            let bias_base = base + layer.w.len();
            for o in 0..layer.output {
                let d = delta[o];
                if d != 0.0 {
                    let row = base + o * layer.input;
                    for (i, xi) in input.iter().enumerate() {
                        grads[row + i] += d * xi;
                    }
                    grads[bias_base + o] += d;
                }
            }
            if l > 0 {
                let mut prev = vec![0.0; layer.input];
                for o in 0..layer.output {
                    let d = delta[o];
                    if d != 0.0 {
                        let row = &layer.w[o * layer.input..(o + 1) * layer.input];
                        for (p, wi) in prev.iter_mut().zip(row) {
                            *p += d * wi;
                        }
                    }
                }
                // ReLU gate: units that were clamped pass no gradient.
                for (p, a) in prev.iter_mut().zip(&activations[l - 1]) {
                    if *a <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
    }

    (BatchStats { loss, mean_abs_q: abs_q }, grads)
}

/// Adam with the usual decay constants; the learning rate scales the whole
/// step, so a zero rate leaves parameters untouched.
#[derive(Debug, Clone)]
pub struct AdamOptimizer {
    learning_rate: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl AdamOptimizer {
    pub fn new(learning_rate: f64, param_count: usize) -> Self {
        AdamOptimizer {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: vec![0.0; param_count],
            v: vec![0.0; param_count],
        }
    }

    pub fn step(&mut self, net: &mut Mlp, grads: &[f64]) {
        self.t += 1;
        let mut params = net.flat_params();
        let bc1 = 1.0 - powi(self.beta1, self.t);
        let bc2 = 1.0 - powi(self.beta2, self.t);
        for i in 0..params.len() {
            let g = grads[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.learning_rate * m_hat / (libm::sqrt(v_hat) + self.eps);
        }
        net.set_flat_params(&params).expect("same shape");
    }
}

fn powi(base: f64, exp: u64) -> f64 {
    let mut acc = 1.0;
    let mut base = base;
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// One optimizer step on the mean squared TD error of a batch.
pub fn gradient_step(
    net: &mut Mlp,
    optimizer: &mut AdamOptimizer,
    inputs: &[Vec<f64>],
    actions: &[usize],
    targets: &[f64],
) -> Result<BatchStats, DomainError> {
    let (stats, grads) = loss_and_gradients(net, inputs, actions, targets);
    if !stats.loss.is_finite() {
        return Err(DomainError::Numeric(alloc::format!(
            "non-finite loss {} in gradient step",
            stats.loss
        )));
    }
    optimizer.step(net, &grads);
    Ok(stats)
}

/// One stored interaction, in observation-index form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
    pub done: bool,
}

/// Fixed-capacity FIFO experience store with uniform sampling.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    entries: VecDeque<Transition>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        ReplayBuffer {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        }
    }

    pub fn push(&mut self, transition: Transition) {
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(transition);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sample(&self, batch_size: usize, rng: &mut ChaCha8Rng) -> Vec<Transition> {
        (0..batch_size)
            .map(|_| self.entries[rng.random_range(0..self.entries.len())])
            .collect()
    }
}

/// TD targets `r + gamma * max_a' Q_target(s', a')`, truncated to `r` at
/// terminal transitions.
pub fn td_targets(batch: &[Transition], target_net: &Mlp, gamma: f64) -> Vec<f64> {
    let states = target_net.input_len();
    batch
        .iter()
        .map(|tr| {
            if tr.done {
                tr.reward
            } else {
                let q_next = target_net.forward(&one_hot(tr.next_state, states));
                tr.reward + gamma * q_next.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            }
        })
        .collect()
}

/// DQN hyperparameters. Epsilon decays linearly from `epsilon_initial` to
/// `epsilon_final` over the first `exploration_fraction` of all timesteps.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct DqnParams {
    pub gamma: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    /// Copy the online net into the target net every this many env steps.
    pub target_sync_interval: u32,
    /// Take one gradient step every this many env steps.
    pub train_freq: u32,
    pub total_timesteps: u64,
    pub epsilon_initial: f64,
    pub epsilon_final: f64,
    pub exploration_fraction: f64,
}

impl Default for DqnParams {
    fn default() -> Self {
        DqnParams {
            gamma: 0.9,
            learning_rate: 1e-3,
            batch_size: 64,
            buffer_capacity: 50_000,
            target_sync_interval: 1000,
            train_freq: 4,
            total_timesteps: 1_800_000,
            epsilon_initial: 1.0,
            epsilon_final: 0.05,
            exploration_fraction: 0.1,
        }
    }
}

impl DqnParams {
    pub fn validate(&self) -> Result<(), DomainError> {
        let ok = self.gamma > 0.0
            && self.gamma <= 1.0
            && self.learning_rate >= 0.0
            && self.batch_size > 0
            && self.buffer_capacity >= self.batch_size
            && self.target_sync_interval > 0
            && self.train_freq > 0
            && self.epsilon_initial > 0.0
            && self.epsilon_initial <= 1.0
            && self.epsilon_final >= 0.0
            && self.epsilon_final <= self.epsilon_initial
            && self.exploration_fraction > 0.0
            && self.exploration_fraction <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(DomainError::InvalidConfig("dqn parameters out of range".into()))
        }
    }

    pub fn epsilon_by_step(&self, step: u64) -> f64 {
        let decay_steps = (self.total_timesteps as f64 * self.exploration_fraction).max(1.0);
        let progress = (step as f64 / decay_steps).min(1.0);
        self.epsilon_initial - (self.epsilon_initial - self.epsilon_final) * progress
    }
}

#[derive(Debug, Clone)]
pub struct DqnTrainResult {
    pub net: Mlp,
    /// Total reward of each completed training episode.
    pub episode_returns: Vec<f64>,
    pub episode_lengths: Vec<u32>,
}

/// Standard DQN loop: act epsilon-greedy with the online net, store
/// transitions, periodically fit sampled batches toward target-net TD
/// values, and sync the target net at a fixed cadence.
///
/// Aborts with a numeric error if the loss goes non-finite or the running
/// mean |Q| exceeds 1e6.
pub fn dqn_train(
    env: &mut SimpleEnv,
    params: &DqnParams,
    rng: &mut ChaCha8Rng,
) -> Result<DqnTrainResult, DomainError> {
    params.validate()?;
    let num_states = env.config().experiment.num_observations();
    let space = env.action_space().clone();
    let num_actions = space.len();

    let mut online = Mlp::new(num_states, &HIDDEN_LAYERS, num_actions, rng);
    let mut target = online.clone();
    let mut optimizer = AdamOptimizer::new(params.learning_rate, online.param_count());
    let mut buffer = ReplayBuffer::new(params.buffer_capacity);

    let mut obs = env.reset();
    let mut episode_return = 0.0;
    let mut episode_steps = 0u32;
    let mut episode_returns = Vec::new();
    let mut episode_lengths = Vec::new();
    let mut mean_abs_q_ema = 0.0;

    for step in 0..params.total_timesteps {
        let epsilon = params.epsilon_by_step(step);
        let action_id = if rng.random_bool(epsilon) {
            select_random(num_actions, rng)
        } else {
            argmax(&online.forward(&one_hot(obs.index, num_states)))
        };
        let action = space.get(action_id).expect("id within action space");
        let outcome = env.step(action)?;

        buffer.push(Transition {
            state: obs.index,
            action: action_id,
            reward: outcome.reward,
            next_state: outcome.obs.index,
            done: outcome.terminated,
        });
        episode_return += outcome.reward;
        episode_steps += 1;

        if outcome.done() {
            episode_returns.push(episode_return);
            episode_lengths.push(episode_steps);
            episode_return = 0.0;
            episode_steps = 0;
            obs = env.reset();
        } else {
            obs = outcome.obs;
        }

        if (step + 1) % u64::from(params.train_freq) == 0 && buffer.len() >= params.batch_size {
            let batch = buffer.sample(params.batch_size, rng);
            let targets = td_targets(&batch, &target, params.gamma);
            let inputs: Vec<Vec<f64>> = batch
                .iter()
                .map(|tr| one_hot(tr.state, num_states))
                .collect();
            let actions: Vec<usize> = batch.iter().map(|tr| tr.action).collect();
            let stats = gradient_step(&mut online, &mut optimizer, &inputs, &actions, &targets)?;
            mean_abs_q_ema = 0.99 * mean_abs_q_ema + 0.01 * stats.mean_abs_q;
            if mean_abs_q_ema > 1e6 {
                return Err(DomainError::Numeric(alloc::format!(
                    "dqn diverged: running mean |Q| = {mean_abs_q_ema:.3e}"
                )));
            }
        }

        if (step + 1) % u64::from(params.target_sync_interval) == 0 {
            target = online.clone();
        }
    }

    Ok(DqnTrainResult {
        net: online,
        episode_returns,
        episode_lengths,
    })
}
