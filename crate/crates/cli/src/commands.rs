use std::path::{Path, PathBuf};

use gqht::classifiers::{
    accuracy, train_logistic, BinaryClassifier, CentroidClassifier, CentroidModel, Hyperparams, LogisticModel,
};
use gqht::datasets::{self, balance_classes, prepare, LabeledPoint, Prepared};
use gqht::encoding::{self, BoundedVector, NormalizedVector, QubitLayout};
use gqht::hadamard::{gqht, gqht_batched, interference_tail, qht};
use gqht::{Circuit, EstimatorConfig};
use serde::{Deserialize, Serialize};

use crate::config::{self, ClassifierKind, DatasetKind, Overrides, Resolved, Task};
use crate::{plot, repro, CliError};

/// A command-line vector argument.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(pub Vec<f64>);

/// Comma-separated reals, e.g. `0.1,-1,0.9`.
pub fn parse_vector(s: &str) -> Result<Vector, String> {
    let values = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("'{}' is not a number", t.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(Vector(values))
}

#[derive(Clone, Debug, clap::Args)]
pub struct EstimatorArgs {
    /// Read <Z> from the amplitudes (default).
    #[arg(long, conflicts_with = "shots")]
    pub exact: bool,
    /// Estimate <Z> from this many simulated measurements.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Sampling seed for `--shots`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl EstimatorArgs {
    pub fn config(&self) -> EstimatorConfig {
        match self.shots {
            Some(shots) if !self.exact => EstimatorConfig::Shots { shots, seed: self.seed },
            _ => EstimatorConfig::Exact,
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| CliError::Internal(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}

pub fn inner(p: &[f64], q: &[f64], est: &EstimatorArgs, use_qht: bool) -> Result<String, CliError> {
    let cfg = est.config();
    let r = if use_qht {
        qht(&NormalizedVector::normalize(p)?, &NormalizedVector::normalize(q)?, &cfg)?
    } else {
        gqht(&BoundedVector::new(p)?, &BoundedVector::new(q)?, &cfg)?
    };
    to_json(&r)
}

fn bounded_all(vs: &[Vec<f64>]) -> Result<Vec<BoundedVector>, CliError> {
    Ok(vs.iter().map(|v| BoundedVector::new(v)).collect::<gqht::Result<Vec<_>>>()?)
}

pub fn batch_inner(train: &[Vec<f64>], test: &[f64], est: &EstimatorArgs) -> Result<String, CliError> {
    let r = gqht_batched(&bounded_all(train)?, &BoundedVector::new(test)?, &est.config())?;
    to_json(&r)
}

pub fn export_qasm(
    p: Option<&[f64]>,
    q: Option<&[f64]>,
    train: &[Vec<f64>],
    test: Option<&[f64]>,
) -> Result<String, CliError> {
    let circuit = match (p, q, train.is_empty(), test) {
        (Some(p), Some(q), true, None) => {
            let (bp, bq) = (BoundedVector::new(p)?, BoundedVector::new(q)?);
            let mut c = encoding::encode_pair(&bp, &bq)?;
            append_tail(&mut c, &QubitLayout::pairwise(bp.index_qubits()))?;
            c
        }
        (None, None, false, Some(test)) => {
            let bt = bounded_all(train)?;
            let (sp, sn) = encoding::batch_shape(&bt)?;
            let mut c = encoding::encode_batch(&bt, &BoundedVector::new(test)?)?;
            append_tail(&mut c, &QubitLayout::batched(sp, sn))?;
            c
        }
        _ => {
            return Err(CliError::Invalid(
                "export-qasm needs either --p and --q, or one or more --train with --test".into(),
            ))
        }
    };
    Ok(circuit.to_qasm()?)
}

fn append_tail(c: &mut Circuit, layout: &QubitLayout) -> gqht::Result<()> {
    for g in interference_tail(layout) {
        c.push(g)?;
    }
    Ok(())
}

pub fn repro() -> Result<(String, bool), CliError> {
    let r = repro::run()?;
    Ok((to_json(&r)?, r.all_pass))
}

/// Model file; the `classifier` field tells the two kinds apart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "classifier", rename_all = "lowercase")]
pub enum ModelFile {
    Logistic { weights: Vec<f64>, bias: f64, hyperparams: Hyperparams, seed: u64 },
    Centroid(CentroidModel),
}

impl ModelFile {
    fn dim(&self) -> usize {
        match self {
            ModelFile::Logistic { weights, .. } => weights.len(),
            ModelFile::Centroid(m) => m.c0.len(),
        }
    }
}

enum Predictor {
    Logistic(LogisticModel),
    Centroid(Box<CentroidClassifier>),
}

impl BinaryClassifier for Predictor {
    fn score(&self, x: &[f64], cfg: &EstimatorConfig) -> gqht::Result<f64> {
        match self {
            Predictor::Logistic(m) => m.score(x, cfg),
            Predictor::Centroid(c) => c.score(x, cfg),
        }
    }

    fn label(&self, score: f64) -> u8 {
        match self {
            Predictor::Logistic(m) => m.label(score),
            Predictor::Centroid(c) => c.label(score),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Metrics {
    pub classifier: ClassifierKind,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub loss_curve: Vec<f64>,
    pub seed: u64,
    pub estimator: EstimatorConfig,
    pub n_train: usize,
    pub n_test: usize,
    /// Test values clipped into [-1, 1] after scaling with training statistics.
    pub test_clamped: usize,
    pub inner_product_calls: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub classifier: ClassifierKind,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub seed: u64,
    pub estimator: EstimatorConfig,
    pub n_train: usize,
    pub n_test: usize,
}

fn load_prepared(r: &Resolved) -> Result<Prepared, CliError> {
    let points = r.load_points()?;
    Ok(prepare(&points, &r.split)?)
}

/// The centroid rule needs equal class counts, so its training split is
/// subsampled to the smaller class.
fn centroid_train(r: &Resolved, data: &Prepared) -> Result<Vec<LabeledPoint>, CliError> {
    Ok(balance_classes(&data.train, r.split.seed)?)
}

fn fit(r: &Resolved, data: &Prepared) -> Result<(Predictor, ModelFile, Vec<f64>, Option<u64>), CliError> {
    match r.classifier {
        ClassifierKind::Logistic => {
            let (m, report) = train_logistic(&data.train, &r.hyperparams, &r.estimator)?;
            let file = ModelFile::Logistic {
                weights: m.weights.clone(),
                bias: m.bias,
                hyperparams: m.hyperparams.clone(),
                seed: m.hyperparams.seed,
            };
            Ok((Predictor::Logistic(m), file, report.loss_curve, Some(report.inner_product_calls)))
        }
        ClassifierKind::Centroid => {
            let c = CentroidClassifier::fit(&centroid_train(r, data)?, &r.estimator)?;
            let file = ModelFile::Centroid(c.model.clone());
            Ok((Predictor::Centroid(Box::new(c)), file, Vec::new(), None))
        }
    }
}

fn predictor_from_file(r: &Resolved, data: &Prepared, file: ModelFile) -> Result<Predictor, CliError> {
    let dim = data.train[0].features.len();
    if file.dim() != dim {
        return Err(CliError::Invalid(format!("model has {} features, dataset has {dim}", file.dim())));
    }
    Ok(match file {
        ModelFile::Logistic { weights, bias, hyperparams, .. } => {
            Predictor::Logistic(LogisticModel { weights, bias, hyperparams })
        }
        ModelFile::Centroid(m) => {
            Predictor::Centroid(Box::new(CentroidClassifier::from_model(m, &centroid_train(r, data)?)?))
        }
    })
}

fn read_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read model {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("model {}: {e}", path.display())))
}

fn classifier_of(file: &ModelFile) -> ClassifierKind {
    match file {
        ModelFile::Logistic { .. } => ClassifierKind::Logistic,
        ModelFile::Centroid(_) => ClassifierKind::Centroid,
    }
}

pub fn train(o: &Overrides) -> Result<String, CliError> {
    let r = config::resolve(o, Task::Train)?;
    let data = load_prepared(&r)?;
    let (pred, file, loss_curve, calls) = fit(&r, &data)?;
    let metrics = Metrics {
        classifier: r.classifier,
        train_accuracy: accuracy(&pred, &data.train, &r.estimator.derive(1))?,
        test_accuracy: accuracy(&pred, &data.test, &r.estimator.derive(2))?,
        loss_curve,
        seed: r.hyperparams.seed,
        estimator: r.estimator,
        n_train: data.train.len(),
        n_test: data.test.len(),
        test_clamped: data.test_clamped,
        inner_product_calls: calls,
    };
    let (model_path, metrics_path) = (r.model_path(), r.metrics_path());
    write_file(&model_path, &to_json(&file)?)?;
    write_file(&metrics_path, &to_json(&metrics)?)?;
    Ok(format!(
        "train accuracy {:.4}, test accuracy {:.4}\nmodel: {}\nmetrics: {}\n",
        metrics.train_accuracy,
        metrics.test_accuracy,
        model_path.display(),
        metrics_path.display()
    ))
}

pub fn evaluate(o: &Overrides, model: Option<&PathBuf>) -> Result<String, CliError> {
    let r = config::resolve(o, Task::Evaluate)?;
    let data = load_prepared(&r)?;
    let model_path = model.cloned().unwrap_or_else(|| r.model_path());
    let file = read_model(&model_path)?;
    let classifier = classifier_of(&file);
    let pred = predictor_from_file(&r, &data, file)?;
    let eval = Evaluation {
        classifier,
        train_accuracy: accuracy(&pred, &data.train, &r.estimator.derive(1))?,
        test_accuracy: accuracy(&pred, &data.test, &r.estimator.derive(2))?,
        seed: r.hyperparams.seed,
        estimator: r.estimator,
        n_train: data.train.len(),
        n_test: data.test.len(),
    };
    let path = r.evaluation_path();
    write_file(&path, &to_json(&eval)?)?;
    Ok(format!("test accuracy {:.4}\nevaluation: {}\n", eval.test_accuracy, path.display()))
}

pub fn boundary(o: &Overrides, model: Option<&PathBuf>, resolution: Option<usize>) -> Result<String, CliError> {
    let mut r = config::resolve(o, Task::Boundary)?;
    if let Some(g) = resolution {
        if g < 2 {
            return Err(CliError::Invalid(format!("grid_resolution: must be at least 2, got {g}")));
        }
        r.grid_resolution = g;
    }
    let data = load_prepared(&r)?;
    let pred = match model {
        Some(p) => predictor_from_file(&r, &data, read_model(p)?)?,
        None => fit(&r, &data)?.0,
    };
    let dim = data.train[0].features.len();
    if dim != 2 {
        return Err(CliError::Invalid(format!("boundary plots need 2 features, the model has {dim}")));
    }
    let g = r.grid_resolution;
    let cells = plot::evaluate_grid(&pred, g, &r.estimator)?;
    let (grid_path, svg_path) = (r.grid_path(), r.svg_path());
    write_file(&grid_path, &plot::grid_csv(&cells))?;
    write_file(&svg_path, &plot::grid_svg(&cells, g, &data.test))?;
    Ok(format!("grid: {}\nsvg: {}\n", grid_path.display(), svg_path.display()))
}

#[derive(Clone, Debug, clap::Args)]
pub struct GenDataArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<DatasetKind>,
    #[arg(long)]
    pub n_per_class: Option<usize>,
    /// Blob standard deviation.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Moon noise standard deviation.
    #[arg(long, allow_hyphen_values = true)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn gen_data(a: &GenDataArgs) -> Result<String, CliError> {
    let mut cfg = match &a.config {
        Some(p) => config::ExperimentConfig::load(p)?,
        None => config::ExperimentConfig::default(),
    };
    let d = &mut cfg.dataset;
    if a.kind.is_some() {
        d.kind = a.kind;
    }
    d.n_per_class = a.n_per_class.or(d.n_per_class);
    d.sigma = a.sigma.or(d.sigma);
    d.noise = a.noise.or(d.noise);
    d.seed = a.seed.or(d.seed);
    let r = cfg.resolve(Task::GenData)?;
    if r.dataset.kind == Some(DatasetKind::Csv) {
        return Err(CliError::Invalid("dataset.kind: gen-data generates blobs or moons".into()));
    }
    let points = r.load_points()?;
    let path = a.out.clone().unwrap_or_else(|| r.data_path());
    write_file(&path, &datasets::write_csv(&points))?;
    Ok(format!("{} points: {}\n", points.len(), path.display()))
}
