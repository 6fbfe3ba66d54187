//! Binary classifiers whose inner products run through the GQHT.

mod centroid;
mod logistic;

pub use centroid::{centroid_label, fit_centroid, predict_centroid, CentroidClassifier, CentroidModel};
pub use logistic::{
    batch_gradient, batch_loss, hypothesis, logistic_label, logit, logit_with_scale, predict_logistic, train_logistic,
    Hyperparams, LogisticModel, TrainReport,
};

use rayon::prelude::*;

use crate::datasets::LabeledPoint;
use crate::hadamard::EstimatorConfig;
use crate::{Error, Result};

/// Logistic function, stable for large `|z|`.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub trait BinaryClassifier: Sync {
    /// Real-valued decision score for `x` (raw, unpadded features).
    fn score(&self, x: &[f64], cfg: &EstimatorConfig) -> Result<f64>;

    /// Label assigned to a score.
    fn label(&self, score: f64) -> u8;

    fn predict(&self, x: &[f64], cfg: &EstimatorConfig) -> Result<u8> {
        Ok(self.label(self.score(x, cfg)?))
    }
}

/// `(label, score)` for every input, evaluated in parallel. Input `k` uses
/// `cfg.derive(k)`, so results do not depend on scheduling.
pub fn predict_all<C: BinaryClassifier + ?Sized>(
    clf: &C,
    inputs: &[Vec<f64>],
    cfg: &EstimatorConfig,
) -> Result<Vec<(u8, f64)>> {
    inputs
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let s = clf.score(x, &cfg.derive(k as u64))?;
            Ok((clf.label(s), s))
        })
        .collect()
}

/// Fraction of correctly labelled points.
pub fn accuracy<C: BinaryClassifier + ?Sized>(clf: &C, test: &[LabeledPoint], cfg: &EstimatorConfig) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::Argument("accuracy of an empty set is undefined".into()));
    }
    let inputs: Vec<Vec<f64>> = test.iter().map(|p| p.features.clone()).collect();
    let preds = predict_all(clf, &inputs, cfg)?;
    let correct = preds.iter().zip(test).filter(|((l, _), p)| *l == p.label).count();
    Ok(correct as f64 / test.len() as f64)
}

pub(crate) fn check_labels(points: &[LabeledPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Argument("training set is empty".into()));
    }
    if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.label > 1) {
        return Err(Error::Data(format!("point {i} has label {}; labels must be 0 or 1", p.label)));
    }
    let dim = points[0].features.len();
    if points.iter().any(|p| p.features.len() != dim) {
        return Err(Error::Data("points have different feature counts".into()));
    }
    Ok(())
}
