//! Single-qubit variational classifier under depolarizing noise.
//!
//! A sample `x = (x₀, x₁)` (radians) is encoded as `RX(x₁)RY(x₀)|0⟩`, then
//! passed through `depth` trainable rotations alternating RY, RX, RY, …. By
//! default the modified channel follows every trainable gate, so the channel
//! is applied `depth` times. The prediction is `⟨Z⟩` and the class is its sign.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{
    check_rate, depolarize_raw, first_order_modified_raw, ChannelKind, DensityMatrix,
};
use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::gates::{apply_unitary, conjugate, Gate};
use crate::linalg2::Mat2;

pub const TRAIN_CSV_HEADER: &str = "epoch,train_loss,train_acc,test_acc,precision,f1";
pub const BOUNDARY_CSV_HEADER: &str = "x0,x1,f";

/// Which channel the forward pass uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseChannel {
    #[default]
    Modified,
    Standard,
    /// Gates first, then the first-order `m`-fold modified channel once.
    /// Placement is ignored.
    FirstOrder,
}

impl fmt::Display for NoiseChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseChannel::Modified => "modified",
            NoiseChannel::Standard => "standard",
            NoiseChannel::FirstOrder => "first-order",
        })
    }
}

impl FromStr for NoiseChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "modified" => Ok(NoiseChannel::Modified),
            "standard" => Ok(NoiseChannel::Standard),
            "first-order" | "first_order" => Ok(NoiseChannel::FirstOrder),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoisePlacement {
    /// One channel application after each trainable gate.
    #[default]
    PerLayer,
    /// All trainable gates, then the channel `m` times.
    Terminal,
}

impl fmt::Display for NoisePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoisePlacement::PerLayer => "per-layer",
            NoisePlacement::Terminal => "terminal",
        })
    }
}

impl FromStr for NoisePlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per-layer" | "per_layer" => Ok(NoisePlacement::PerLayer),
            "terminal" => Ok(NoisePlacement::Terminal),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Noise configuration of a forward pass. The rate is validated on
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p: f64,
    channel: NoiseChannel,
    placement: NoisePlacement,
    repetitions: Option<usize>,
}

impl NoiseModel {
    /// `repetitions` sets `m` for terminal and first-order noise; `None`
    /// means `m = depth`. Per-layer noise always applies `depth` channels.
    pub fn new(
        p: f64,
        channel: NoiseChannel,
        placement: NoisePlacement,
        repetitions: Option<usize>,
    ) -> Result<Self> {
        check_rate(p)?;
        Ok(Self {
            p,
            channel,
            placement,
            repetitions,
        })
    }

    /// Modified channel after every trainable gate.
    pub fn per_layer(p: f64) -> Result<Self> {
        Self::new(p, NoiseChannel::Modified, NoisePlacement::PerLayer, None)
    }

    pub fn noiseless() -> Self {
        Self {
            p: 0.0,
            channel: NoiseChannel::Modified,
            placement: NoisePlacement::PerLayer,
            repetitions: None,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn channel(&self) -> NoiseChannel {
        self.channel
    }

    pub fn placement(&self) -> NoisePlacement {
        self.placement
    }

    pub fn repetitions(&self, depth: usize) -> usize {
        self.repetitions.unwrap_or(depth)
    }
}

/// Trainable angles; gate `i` is RY for even `i` and RX for odd `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    theta: Vec<f64>,
}

impl ModelParams {
    pub fn new(theta: Vec<f64>) -> Self {
        Self { theta }
    }

    /// Angles uniform in `[0, 2π)`.
    pub fn random(depth: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            theta: (0..depth).map(|_| rng.gen_range(0.0..TAU)).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn gate(&self, i: usize) -> Gate {
        if i.is_multiple_of(2) {
            Gate::ry(self.theta[i])
        } else {
            Gate::rx(self.theta[i])
        }
    }

    fn shifted(&self, j: usize, delta: f64) -> Self {
        let mut theta = self.theta.clone();
        theta[j] += delta;
        Self { theta }
    }
}

/// `RX(x₁)RY(x₀)|0⟩` as a density matrix.
pub fn encode(x0: f64, x1: f64) -> DensityMatrix {
    let rho = apply_unitary(&Gate::ry(x0), &DensityMatrix::ket0(), None);
    apply_unitary(&Gate::rx(x1), &rho, None)
}

/// `Re Tr(Zρ) = ρ₀₀ − ρ₁₁`
fn z_expectation(rho: &Mat2) -> f64 {
    (rho.get(0, 0) - rho.get(1, 1)).re
}

/// Model output for an already-prepared state.
pub fn forward_state(rho: &DensityMatrix, params: &ModelParams, noise: &NoiseModel) -> f64 {
    let depth = params.depth();
    let p = noise.p;
    let exact = match noise.channel {
        NoiseChannel::Modified => Some(ChannelKind::Modified),
        NoiseChannel::Standard => Some(ChannelKind::Standard),
        NoiseChannel::FirstOrder => None,
    };
    let per_layer = exact.filter(|_| noise.placement == NoisePlacement::PerLayer);
    let mut state = *rho.mat();
    for i in 0..depth {
        state = conjugate(params.gate(i).matrix(), &state, None);
        if let Some(kind) = per_layer {
            state = depolarize_raw(kind, &state, p);
        }
    }
    let m = noise.repetitions(depth);
    match (exact, noise.placement) {
        (Some(kind), NoisePlacement::Terminal) => {
            for _ in 0..m {
                state = depolarize_raw(kind, &state, p);
            }
        }
        (None, _) => state = first_order_modified_raw(&state, p, m, None),
        _ => {}
    }
    z_expectation(&state)
}

/// `f(x, θ) = Tr{Zρ'}` for a scaled sample.
pub fn forward(x: [f64; 2], params: &ModelParams, noise: &NoiseModel) -> f64 {
    forward_state(&encode(x[0], x[1]), params, noise)
}

/// Mean of `(fᵢ − yᵢ)²`.
pub fn square_loss(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::Input(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::Input("square loss of an empty set".into()));
    }
    let total: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(f, y)| (f - y) * (f - y))
        .sum();
    Ok(total / predictions.len() as f64)
}

/// `∂f/∂θⱼ = [f(θⱼ + π/2) − f(θⱼ − π/2)] / 2`
pub fn parameter_shift_grad(
    x: [f64; 2],
    params: &ModelParams,
    noise: &NoiseModel,
    j: usize,
) -> Result<f64> {
    if j >= params.depth() {
        return Err(Error::Input(format!(
            "parameter index {j} out of range for depth {}",
            params.depth()
        )));
    }
    let rho = encode(x[0], x[1]);
    Ok(shift_grad_state(&rho, params, noise, j))
}

fn shift_grad_state(
    rho: &DensityMatrix,
    params: &ModelParams,
    noise: &NoiseModel,
    j: usize,
) -> f64 {
    let plus = forward_state(rho, &params.shifted(j, FRAC_PI_2), noise);
    let minus = forward_state(rho, &params.shifted(j, -FRAC_PI_2), noise);
    0.5 * (plus - minus)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            first_moment: vec![0.0; len],
            second_moment: vec![0.0; len],
            step_count: 0,
        }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(
    state: &mut AdamState,
    grads: &[f64],
    params: &mut ModelParams,
    config: &AdamConfig,
) -> Result<()> {
    let n = params.depth();
    if grads.len() != n || state.first_moment.len() != n || state.second_moment.len() != n {
        return Err(Error::Input(
            "Adam state, gradient and parameter lengths differ".into(),
        ));
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let correction1 = 1.0 - config.beta1.powi(t);
    let correction2 = 1.0 - config.beta2.powi(t);
    for (i, &g) in grads.iter().enumerate() {
        let m = &mut state.first_moment[i];
        let v = &mut state.second_moment[i];
        *m = config.beta1 * *m + (1.0 - config.beta1) * g;
        *v = config.beta2 * *v + (1.0 - config.beta2) * g * g;
        let m_hat = *m / correction1;
        let v_hat = *v / correction2;
        params.theta[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.eps);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub p: f64,
    /// Number of trainable gates; also the per-layer channel count.
    pub depth: usize,
    pub seed: u64,
    pub split_fraction: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub channel: NoiseChannel,
    pub placement: NoisePlacement,
    pub repetitions: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        let adam = AdamConfig::default();
        Self {
            epochs: 30,
            learning_rate: adam.learning_rate,
            p: 0.0,
            depth: 1,
            seed: 42,
            split_fraction: 0.7,
            adam_beta1: adam.beta1,
            adam_beta2: adam.beta2,
            adam_eps: adam.eps,
            channel: NoiseChannel::Modified,
            placement: NoisePlacement::PerLayer,
            repetitions: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Input("epochs must be at least 1".into()));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::Input("split fraction must lie in (0, 1)".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Input("learning rate must be positive".into()));
        }
        check_rate(self.p)
    }

    pub fn noise(&self) -> Result<NoiseModel> {
        NoiseModel::new(self.p, self.channel, self.placement, self.repetitions)
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Metrics {
    /// Positive class is +1; a ratio with a zero denominator is 0.
    pub fn from_predictions(predicted: &[Label], actual: &[Label]) -> Metrics {
        let (mut tp, mut fp, mut fneg, mut correct) = (0usize, 0usize, 0usize, 0usize);
        for (p, a) in predicted.iter().zip(actual) {
            match (p, a) {
                (Label::Positive, Label::Positive) => tp += 1,
                (Label::Positive, Label::Negative) => fp += 1,
                (Label::Negative, Label::Positive) => fneg += 1,
                (Label::Negative, Label::Negative) => {}
            }
            if p == a {
                correct += 1;
            }
        }
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fneg);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Metrics {
            accuracy: ratio(correct, predicted.len()),
            precision,
            recall,
            f1,
        }
    }
}

pub fn evaluate(params: &ModelParams, noise: &NoiseModel, dataset: &Dataset) -> Result<Metrics> {
    if dataset.is_empty() {
        return Err(Error::Input("cannot evaluate on an empty dataset".into()));
    }
    let predicted: Vec<Label> = dataset
        .samples
        .iter()
        .map(|s| Label::from_output(forward(s.features, params, noise)))
        .collect();
    let actual: Vec<Label> = dataset.samples.iter().map(|s| s.label).collect();
    Ok(Metrics::from_predictions(&predicted, &actual))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub precision: f64,
    pub f1: f64,
}

/// Full-batch training with parameter-shift gradients and Adam.
///
/// Angles start uniform in `[0, 2π)` from `config.seed`. Each record is taken
/// after that epoch's update; precision and F1 refer to the test set.
pub fn train(
    config: &TrainConfig,
    train_set: &Dataset,
    test_set: &Dataset,
) -> Result<(ModelParams, Vec<TrainRecord>)> {
    config.validate()?;
    if train_set.is_empty() || test_set.is_empty() {
        return Err(Error::Input(
            "training and test sets must be nonempty".into(),
        ));
    }
    let noise = config.noise()?;
    let adam = config.adam();
    let mut params = ModelParams::random(config.depth, config.seed);
    let mut state = AdamState::new(config.depth);

    let encoded: Vec<DensityMatrix> = train_set
        .samples
        .iter()
        .map(|s| encode(s.features[0], s.features[1]))
        .collect();
    let labels: Vec<f64> = train_set.samples.iter().map(|s| s.label.value()).collect();
    let n = encoded.len() as f64;

    let mut records = Vec::with_capacity(config.epochs);
    for epoch in 1..=config.epochs {
        let mut grads = vec![0.0; config.depth];
        for (rho, y) in encoded.iter().zip(&labels) {
            let residual = forward_state(rho, &params, &noise) - y;
            for (j, g) in grads.iter_mut().enumerate() {
                *g += 2.0 * residual * shift_grad_state(rho, &params, &noise, j);
            }
        }
        grads.iter_mut().for_each(|g| *g /= n);
        adam_step(&mut state, &grads, &mut params, &adam)?;

        let predictions: Vec<f64> = encoded
            .iter()
            .map(|rho| forward_state(rho, &params, &noise))
            .collect();
        let train_loss = square_loss(&predictions, &labels)?;
        let train_labels: Vec<Label> = predictions.iter().map(|&f| Label::from_output(f)).collect();
        let train_actual: Vec<Label> = train_set.samples.iter().map(|s| s.label).collect();
        let train_metrics = Metrics::from_predictions(&train_labels, &train_actual);
        let test_metrics = evaluate(&params, &noise, test_set)?;
        records.push(TrainRecord {
            epoch,
            train_loss,
            train_accuracy: train_metrics.accuracy,
            test_accuracy: test_metrics.accuracy,
            precision: test_metrics.precision,
            f1: test_metrics.f1,
        });
    }
    Ok((params, records))
}

pub fn records_csv(records: &[TrainRecord]) -> String {
    let mut out = String::from(TRAIN_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.epoch,
            fmt_f64(r.train_loss),
            fmt_f64(r.train_accuracy),
            fmt_f64(r.test_accuracy),
            fmt_f64(r.precision),
            fmt_f64(r.f1)
        );
    }
    out
}

/// Axis-aligned rectangle in scaled feature space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x0: (f64, f64),
    pub x1: (f64, f64),
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            x0: (0.0, std::f64::consts::PI),
            x1: (0.0, std::f64::consts::PI),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub x0: f64,
    pub x1: f64,
    pub f: f64,
}

/// Model outputs on a `resolution × resolution` lattice, row-major with `x1`
/// indexing rows and `x0` columns.
pub fn decision_boundary_grid(
    params: &ModelParams,
    noise: &NoiseModel,
    bounds: Bounds,
    resolution: usize,
) -> Result<Vec<BoundaryPoint>> {
    if resolution < 2 {
        return Err(Error::Input("grid resolution must be at least 2".into()));
    }
    let lerp = |(lo, hi): (f64, f64), k: usize| lo + (hi - lo) * k as f64 / (resolution - 1) as f64;
    let mut points = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let x1 = lerp(bounds.x1, row);
        for col in 0..resolution {
            let x0 = lerp(bounds.x0, col);
            points.push(BoundaryPoint {
                x0,
                x1,
                f: forward([x0, x1], params, noise),
            });
        }
    }
    Ok(points)
}

pub fn boundary_csv(points: &[BoundaryPoint]) -> String {
    let mut out = String::from(BOUNDARY_CSV_HEADER);
    out.push('\n');
    for pt in points {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(pt.x0),
            fmt_f64(pt.x1),
            fmt_f64(pt.f)
        );
    }
    out
}
