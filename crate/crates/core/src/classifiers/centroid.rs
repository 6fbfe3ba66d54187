use serde::{Deserialize, Serialize};

use super::{check_labels, BinaryClassifier};
use crate::datasets::LabeledPoint;
use crate::encoding::BoundedVector;
use crate::hadamard::{BatchedEstimator, EstimatorConfig};
use crate::{Error, Result};

/// Class centroids and the offset of the kernel-expanded decision rule
/// `sgn(<x, c0> - <x, c1> + b)`, `b = (|c1|^2 - |c0|^2) / 2`, which is
/// `sgn(<x - c_mid, w_diff>)` written in inner products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "CentroidRecord", into = "CentroidRecord")]
pub struct CentroidModel {
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
    /// `c0 - c1`.
    pub w_diff: Vec<f64>,
    /// `(c0 + c1) / 2`.
    pub c_mid: Vec<f64>,
    pub offset_b: f64,
}

#[derive(Serialize, Deserialize)]
struct CentroidRecord {
    c0: Vec<f64>,
    c1: Vec<f64>,
    b: f64,
}

impl From<CentroidRecord> for CentroidModel {
    fn from(r: CentroidRecord) -> Self {
        CentroidModel::from_parts(r.c0, r.c1, r.b)
    }
}

impl From<CentroidModel> for CentroidRecord {
    fn from(m: CentroidModel) -> Self {
        CentroidRecord { c0: m.c0, c1: m.c1, b: m.offset_b }
    }
}

impl CentroidModel {
    pub fn from_parts(c0: Vec<f64>, c1: Vec<f64>, offset_b: f64) -> Self {
        let w_diff = c0.iter().zip(&c1).map(|(a, b)| a - b).collect();
        let c_mid = c0.iter().zip(&c1).map(|(a, b)| 0.5 * (a + b)).collect();
        Self { c0, c1, w_diff, c_mid, offset_b }
    }

    /// `<x - c_mid, w_diff>`, the centroid form of the decision score.
    pub fn geometric_score(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.c_mid).zip(&self.w_diff).map(|((x, c), w)| (x - c) * w).sum()
    }
}

/// Label `0` for a strictly positive score, `1` otherwise.
pub fn centroid_label(score: f64) -> u8 {
    if score > 0.0 {
        0
    } else {
        1
    }
}

fn split_classes(train: &[LabeledPoint]) -> Result<[Vec<&LabeledPoint>; 2]> {
    check_labels(train)?;
    let classes = [0u8, 1].map(|c| train.iter().filter(|p| p.label == c).collect::<Vec<_>>());
    if classes[0].len() != classes[1].len() {
        return Err(Error::Unbalanced { class0: classes[0].len(), class1: classes[1].len() });
    }
    Ok(classes)
}

/// Bounded vectors of one class, padded with zero vectors to a power-of-two
/// count; zero rows add nothing to the summed inner products.
fn padded_class(points: &[&LabeledPoint]) -> Result<Vec<BoundedVector>> {
    let mut out = points.iter().map(|p| BoundedVector::new(&p.features)).collect::<Result<Vec<_>>>()?;
    let dim = points[0].features.len();
    out.resize(points.len().next_power_of_two(), BoundedVector::zeros(dim)?);
    Ok(out)
}

/// Centroid classifier with the training half of each class's batched
/// circuit prepared once.
#[derive(Clone, Debug)]
pub struct CentroidClassifier {
    pub model: CentroidModel,
    estimators: [BatchedEstimator; 2],
    per_class: usize,
}

impl CentroidClassifier {
    /// Requires equal class counts. `b` is assembled from within-class
    /// inner products, each class summed by one batched GQHT per point.
    pub fn fit(train: &[LabeledPoint], cfg: &EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        let classes = split_classes(train)?;
        let m = classes[0].len();
        let dim = train[0].features.len();
        let estimators = [BatchedEstimator::new(&padded_class(&classes[0])?)?, BatchedEstimator::new(&padded_class(&classes[1])?)?];

        let mut centroids = [vec![0.0; dim], vec![0.0; dim]];
        for (c, pts) in classes.iter().enumerate() {
            for p in pts {
                for (acc, v) in centroids[c].iter_mut().zip(&p.features) {
                    *acc += v / m as f64;
                }
            }
        }

        let mut within = [0.0; 2];
        let mut call = 0u64;
        for (c, pts) in classes.iter().enumerate() {
            for p in pts {
                within[c] += estimators[c].estimate(&BoundedVector::new(&p.features)?, &cfg.derive(call))?.value;
                call += 1;
            }
        }
        let m2 = (m * m) as f64;
        let offset_b = 0.5 * (within[1] / m2 - within[0] / m2);
        let [c0, c1] = centroids;
        Ok(Self { model: CentroidModel::from_parts(c0, c1, offset_b), estimators, per_class: m })
    }

    /// Reattaches a stored model to its training set. Only the per-class
    /// estimators are rebuilt; `b` is taken from the model.
    pub fn from_model(model: CentroidModel, train: &[LabeledPoint]) -> Result<Self> {
        let classes = split_classes(train)?;
        if train[0].features.len() != model.c0.len() {
            return Err(Error::Argument(format!(
                "model has {} features, training set has {}",
                model.c0.len(),
                train[0].features.len()
            )));
        }
        let estimators = [BatchedEstimator::new(&padded_class(&classes[0])?)?, BatchedEstimator::new(&padded_class(&classes[1])?)?];
        Ok(Self { model, estimators, per_class: classes[0].len() })
    }

    /// `(1/M) sum_{class 0} <x_m, x> - (1/M) sum_{class 1} <x_m, x> + b`.
    pub fn kernel_score(&self, x: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
        let bx = BoundedVector::new(x)?;
        let s0 = self.estimators[0].estimate(&bx, &cfg.derive(0))?.value;
        let s1 = self.estimators[1].estimate(&bx, &cfg.derive(1))?.value;
        let m = self.per_class as f64;
        Ok(s0 / m - s1 / m + self.model.offset_b)
    }
}

impl BinaryClassifier for CentroidClassifier {
    fn score(&self, x: &[f64], cfg: &EstimatorConfig) -> Result<f64> {
        self.kernel_score(x, cfg)
    }

    fn label(&self, score: f64) -> u8 {
        centroid_label(score)
    }
}

pub fn fit_centroid(train: &[LabeledPoint], cfg: &EstimatorConfig) -> Result<CentroidModel> {
    Ok(CentroidClassifier::fit(train, cfg)?.model)
}

/// Kernel-form prediction for a stored model; the per-class sums are
/// recomputed against `train`.
pub fn predict_centroid(model: &CentroidModel, x: &[f64], train: &[LabeledPoint], cfg: &EstimatorConfig) -> Result<u8> {
    let classes = split_classes(train)?;
    let bx = BoundedVector::new(x)?;
    let m = classes[0].len() as f64;
    let s0 = BatchedEstimator::new(&padded_class(&classes[0])?)?.estimate(&bx, &cfg.derive(0))?.value;
    let s1 = BatchedEstimator::new(&padded_class(&classes[1])?)?.estimate(&bx, &cfg.derive(1))?.value;
    Ok(centroid_label(s0 / m - s1 / m + model.offset_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(f: &[f64], l: u8) -> LabeledPoint {
        LabeledPoint::new(f.to_vec(), l)
    }

    #[test]
    fn two_point_example() {
        let train = vec![lp(&[1.0, 0.0], 0), lp(&[0.0, 1.0], 1)];
        let clf = CentroidClassifier::fit(&train, &EstimatorConfig::Exact).unwrap();
        let m = &clf.model;
        assert_eq!(m.c0, vec![1.0, 0.0]);
        assert_eq!(m.c1, vec![0.0, 1.0]);
        assert_eq!(m.w_diff, vec![1.0, -1.0]);
        assert_eq!(m.c_mid, vec![0.5, 0.5]);
        assert!(m.offset_b.abs() < 1e-12);
        let s = clf.kernel_score(&[1.0, 0.0], &EstimatorConfig::Exact).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(clf.predict(&[1.0, 0.0], &EstimatorConfig::Exact).unwrap(), 0);
        assert_eq!(predict_centroid(m, &[1.0, 0.0], &train, &EstimatorConfig::Exact).unwrap(), 0);
    }

    #[test]
    fn identical_classes_and_ties() {
        let train = vec![lp(&[0.3, -0.2], 0), lp(&[0.3, -0.2], 1)];
        let m = fit_centroid(&train, &EstimatorConfig::Exact).unwrap();
        assert_eq!(m.w_diff, vec![0.0, 0.0]);
        assert!(m.offset_b.abs() < 1e-12);

        // symmetric classes around the origin: the midpoint scores 0 and goes to class 1
        let sym = vec![lp(&[0.5, 0.5], 0), lp(&[-0.5, -0.5], 1)];
        let clf = CentroidClassifier::fit(&sym, &EstimatorConfig::Exact).unwrap();
        let s = clf.kernel_score(&clf.model.c_mid.clone(), &EstimatorConfig::Exact).unwrap();
        assert!(s.abs() < 1e-12);
        assert_eq!(centroid_label(0.0), 1);
        assert_eq!(centroid_label(1e-300), 0);
    }

    #[test]
    fn unbalanced_is_rejected() {
        let train = vec![lp(&[0.1], 0), lp(&[0.2], 0), lp(&[0.3], 1)];
        assert!(matches!(
            fit_centroid(&train, &EstimatorConfig::Exact),
            Err(Error::Unbalanced { class0: 2, class1: 1 })
        ));
    }

    #[test]
    fn offset_matches_classical() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let train: Vec<LabeledPoint> = (0..8)
                .map(|k| lp(&[rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)], (k % 2) as u8))
                .collect();
            let m = fit_centroid(&train, &EstimatorConfig::Exact).unwrap();
            let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            let mut sums = [0.0; 2];
            for a in &train {
                for b in &train {
                    if a.label == b.label {
                        sums[a.label as usize] += dot(&a.features, &b.features);
                    }
                }
            }
            let b = 0.5 * (sums[1] - sums[0]) / 16.0;
            assert!((m.offset_b - b).abs() < 1e-8);
            let clf = CentroidClassifier::fit(&train, &EstimatorConfig::Exact).unwrap();
            for p in &train {
                let k = clf.kernel_score(&p.features, &EstimatorConfig::Exact).unwrap();
                assert!((k - m.geometric_score(&p.features)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn model_json_has_c0_c1_b() {
        let m = CentroidModel::from_parts(vec![0.5], vec![-0.5], 0.25);
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v, serde_json::json!({"c0": [0.5], "c1": [-0.5], "b": 0.25}));
        let back: CentroidModel = serde_json::from_value(v).unwrap();
        assert_eq!(back, m);
    }
}
