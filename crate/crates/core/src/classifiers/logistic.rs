use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{accuracy, check_labels, sigmoid, BinaryClassifier};
use crate::datasets::LabeledPoint;
use crate::encoding::BoundedVector;
use crate::hadamard::{gqht, EstimatorConfig};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self { learning_rate: 0.5, batch_size: 16, epochs: 100, seed: 0 }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Argument(format!("learning_rate must be positive, got {}", self.learning_rate)));
        }
        if self.batch_size == 0 {
            return Err(Error::Argument("batch_size must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::Argument("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// `h(x) = sigmoid(<w, x> + w0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyperparams: Hyperparams,
}

impl LogisticModel {
    pub fn zeros(dim: usize, hyperparams: Hyperparams) -> Self {
        Self { weights: vec![0.0; dim], bias: 0.0, hyperparams }
    }

    /// Smallest admissible rescale: `max(1, |w_i|, |w0|)`.
    pub fn weight_scale(&self) -> f64 {
        self.weights.iter().fold(self.bias.abs().max(1.0), |m, w| m.max(w.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean binary cross-entropy of each epoch's forward passes.
    pub loss_curve: Vec<f64>,
    pub final_accuracy_train: f64,
    pub final_accuracy_test: Option<f64>,
    pub inner_product_calls: u64,
}

/// `<w, x> + w0` with the bias folded in as an extra component: the GQHT
/// evaluates `<(w, w0) / s, (x, 1)>` and the result is multiplied back by `s`,
/// which keeps the weight vector inside `[-1, 1]` for any `s >= max|w|`.
pub fn logit_with_scale(x: &[f64], model: &LogisticModel, cfg: &EstimatorConfig, scale: f64) -> Result<f64> {
    if x.len() != model.weights.len() {
        return Err(Error::Argument(format!(
            "input has {} features, model has {}",
            x.len(),
            model.weights.len()
        )));
    }
    if scale.is_nan() || scale < model.weight_scale() {
        return Err(Error::Argument(format!("scale {scale} is below the weight magnitude {}", model.weight_scale())));
    }
    let w: Vec<f64> = model.weights.iter().chain([&model.bias]).map(|v| v / scale).collect();
    let xa: Vec<f64> = x.iter().copied().chain([1.0]).collect();
    let r = gqht(&BoundedVector::new(&w)?, &BoundedVector::new(&xa)?, cfg)?;
    Ok(r.value * scale)
}

pub fn logit(x: &[f64], model: &LogisticModel, cfg: &EstimatorConfig) -> Result<f64> {
    logit_with_scale(x, model, cfg, model.weight_scale())
}

pub fn hypothesis(x: &[f64], model: &LogisticModel, cfg: &EstimatorConfig) -> Result<f64> {
    Ok(sigmoid(logit(x, model, cfg)?))
}

/// `1` iff `h > 0.5`; a tie goes to class 0.
pub fn logistic_label(h: f64) -> u8 {
    (h > 0.5) as u8
}

pub fn predict_logistic(model: &LogisticModel, x: &[f64], cfg: &EstimatorConfig) -> Result<u8> {
    Ok(logistic_label(hypothesis(x, model, cfg)?))
}

impl BinaryClassifier for LogisticModel {
    fn score(&self, x: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
        hypothesis(x, self, cfg)
    }

    fn label(&self, score: f64) -> u8 {
        logistic_label(score)
    }
}

/// Binary cross-entropy from the logit: `softplus(z) - y z`.
fn bce_from_logit(z: f64, y: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p() - y * z
}

fn batch_logits(model: &LogisticModel, batch: &[LabeledPoint], cfg: &EstimatorConfig, first_call: u64) -> Result<Vec<f64>> {
    batch
        .iter()
        .enumerate()
        .map(|(k, p)| logit(&p.features, model, &cfg.derive(first_call + k as u64)))
        .collect()
}

/// Mean cross-entropy `J` over a batch.
pub fn batch_loss(model: &LogisticModel, batch: &[LabeledPoint], cfg: &EstimatorConfig) -> Result<f64> {
    let z = batch_logits(model, batch, cfg, 0)?;
    Ok(z.iter().zip(batch).map(|(&z, p)| bce_from_logit(z, p.label as f64)).sum::<f64>() / batch.len() as f64)
}

fn gradient_from_logits(logits: &[f64], batch: &[LabeledPoint], dim: usize) -> (Vec<f64>, f64) {
    let inv = 1.0 / batch.len() as f64;
    let mut gw = vec![0.0; dim];
    let mut gb = 0.0;
    for (&z, p) in logits.iter().zip(batch) {
        let r = sigmoid(z) - p.label as f64;
        for (g, x) in gw.iter_mut().zip(&p.features) {
            *g += r * x * inv;
        }
        gb += r * inv;
    }
    (gw, gb)
}

/// `dJ/dw = mean (h - y) x`, `dJ/dw0 = mean (h - y)`.
pub fn batch_gradient(model: &LogisticModel, batch: &[LabeledPoint], cfg: &EstimatorConfig) -> Result<(Vec<f64>, f64)> {
    let z = batch_logits(model, batch, cfg, 0)?;
    Ok(gradient_from_logits(&z, batch, model.weights.len()))
}

/// Mini-batch gradient descent from `w = 0, w0 = 0`.
///
/// Each epoch reshuffles the training indices with a generator seeded by
/// `hyperparams.seed` and walks through them in batches of `batch_size`
/// (the last batch may be smaller). Forward logits come from the GQHT; the
/// update itself is classical.
pub fn train_logistic(
    train: &[LabeledPoint],
    hyperparams: &Hyperparams,
    cfg: &EstimatorConfig,
) -> Result<(LogisticModel, TrainReport)> {
    check_labels(train)?;
    hyperparams.validate()?;
    cfg.validate()?;
    let dim = train[0].features.len();
    let mut model = LogisticModel::zeros(dim, hyperparams.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(hyperparams.seed);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut loss_curve = Vec::with_capacity(hyperparams.epochs);
    let mut calls = 0u64;
    let mut batch = Vec::with_capacity(hyperparams.batch_size);

    for _ in 0..hyperparams.epochs {
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(hyperparams.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| train[i].clone()));
            let z = batch_logits(&model, &batch, cfg, calls)?;
            calls += batch.len() as u64;
            epoch_loss += z.iter().zip(&batch).map(|(&z, p)| bce_from_logit(z, p.label as f64)).sum::<f64>();
            let (gw, gb) = gradient_from_logits(&z, &batch, dim);
            for (w, g) in model.weights.iter_mut().zip(&gw) {
                *w -= hyperparams.learning_rate * g;
            }
            model.bias -= hyperparams.learning_rate * gb;
        }
        loss_curve.push(epoch_loss / train.len() as f64);
    }

    let final_accuracy_train = accuracy(&model, train, &cfg.derive(calls))?;
    calls += train.len() as u64;
    let report = TrainReport { loss_curve, final_accuracy_train, final_accuracy_test: None, inner_product_calls: calls };
    Ok((model, report))
}
