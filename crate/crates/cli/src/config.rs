//! Experiment configuration: JSON file plus command-line overrides.

use std::path::{Path, PathBuf};

use gqht::classifiers::Hyperparams;
use gqht::datasets::{self, CsvSpec, LabeledPoint, SplitSpec};
use gqht::EstimatorConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Inner,
    BatchInner,
    Train,
    Evaluate,
    Boundary,
    GenData,
    Repro,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    #[default]
    Logistic,
    Centroid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Blobs,
    Moons,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CsvFormat {
    Iris,
    Seeds,
    Custom,
}

/// Every field is optional so that missing ones can be reported by path.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub kind: Option<DatasetKind>,
    pub n_per_class: Option<usize>,
    pub centers: Option<[[f64; 2]; 2]>,
    pub sigma: Option<f64>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    pub path: Option<PathBuf>,
    pub format: Option<CsvFormat>,
    pub has_header: Option<bool>,
    pub feature_columns: Option<Vec<usize>>,
    pub label_column: Option<usize>,
    pub class_pair: Option<[String; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub dir: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    pub evaluation: Option<PathBuf>,
    pub grid: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub data: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Option<Task>,
    #[serde(default)]
    pub dataset: DatasetConfig,
    pub split: Option<SplitSpec>,
    pub classifier: Option<ClassifierKind>,
    pub estimator: Option<EstimatorConfig>,
    pub hyperparams: Option<Hyperparams>,
    #[serde(default)]
    pub outputs: Outputs,
    pub grid_resolution: Option<usize>,
}

/// Flags shared by the config-driven commands. Set flags win over the file.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Experiment config (JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub classifier: Option<ClassifierKind>,
    #[arg(long, value_enum)]
    pub dataset: Option<DatasetKind>,
    /// Dataset CSV path (implies `--dataset csv` when no kind is set).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Column layout of `--data`; without it the file is read as written by gen-data.
    #[arg(long, value_enum)]
    pub format: Option<CsvFormat>,
    /// Sets the data, split, training and sampling seeds at once.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, conflicts_with = "shots")]
    pub exact: bool,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Config after defaults, overrides and validation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resolved {
    pub dataset: DatasetConfig,
    pub split: SplitSpec,
    pub classifier: ClassifierKind,
    pub estimator: EstimatorConfig,
    pub hyperparams: Hyperparams,
    pub out_dir: PathBuf,
    pub outputs: Outputs,
    pub grid_resolution: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("config {}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(c) = o.classifier {
            self.classifier = Some(c);
        }
        if let Some(k) = o.dataset {
            self.dataset.kind = Some(k);
        }
        if let Some(p) = &o.data {
            self.dataset.path = Some(p.clone());
            self.dataset.kind.get_or_insert(DatasetKind::Csv);
        }
        if let Some(f) = o.format {
            self.dataset.format = Some(f);
        }
        if let Some(s) = o.seed {
            self.dataset.seed = Some(s);
            self.split.get_or_insert_with(SplitSpec::default).seed = s;
            self.hyperparams.get_or_insert_with(Hyperparams::default).seed = s;
            if let Some(EstimatorConfig::Shots { seed, .. }) = &mut self.estimator {
                *seed = s;
            }
        }
        if o.exact {
            self.estimator = Some(EstimatorConfig::Exact);
        }
        if let Some(n) = o.shots {
            let seed = match self.estimator {
                Some(EstimatorConfig::Shots { seed, .. }) => seed,
                _ => o.seed.unwrap_or(0),
            };
            self.estimator = Some(EstimatorConfig::Shots { shots: n, seed });
        }
        let hp = || Hyperparams::default();
        if let Some(e) = o.epochs {
            self.hyperparams.get_or_insert_with(hp).epochs = e;
        }
        if let Some(r) = o.learning_rate {
            self.hyperparams.get_or_insert_with(hp).learning_rate = r;
        }
        if let Some(b) = o.batch_size {
            self.hyperparams.get_or_insert_with(hp).batch_size = b;
        }
        if let Some(d) = &o.out_dir {
            self.outputs.dir = Some(d.clone());
        }
    }

    /// Fills defaults and checks every field, reporting all problems at once.
    pub fn resolve(&self, task: Task) -> Result<Resolved, CliError> {
        let mut errs = Vec::new();
        if let Some(t) = self.task {
            if t != task {
                errs.push(format!("task: config is for {t:?} but the command is {task:?}"));
            }
        }
        let d = &self.dataset;
        match d.kind {
            None => errs.push("dataset.kind: required (blobs, moons or csv)".into()),
            Some(DatasetKind::Blobs) => {
                if d.sigma.is_some_and(|s| !(s > 0.0 && s.is_finite())) {
                    errs.push(format!("dataset.sigma: must be > 0, got {}", d.sigma.unwrap()));
                }
                if d.centers.is_some_and(|c| c.iter().flatten().any(|v| !v.is_finite())) {
                    errs.push("dataset.centers: must be finite".into());
                }
            }
            Some(DatasetKind::Moons) => {
                if d.noise.is_some_and(|s| !(s >= 0.0 && s.is_finite())) {
                    errs.push(format!("dataset.noise: must be >= 0, got {}", d.noise.unwrap()));
                }
            }
            Some(DatasetKind::Csv) => {
                if d.path.is_none() {
                    errs.push("dataset.path: required when dataset.kind is csv".into());
                }
                if d.format == Some(CsvFormat::Custom) {
                    for (field, missing) in [
                        ("feature_columns", d.feature_columns.is_none()),
                        ("label_column", d.label_column.is_none()),
                        ("class_pair", d.class_pair.is_none()),
                    ] {
                        if missing {
                            errs.push(format!("dataset.{field}: required when dataset.format is custom"));
                        }
                    }
                }
                if d.feature_columns.as_ref().is_some_and(|c| c.is_empty()) {
                    errs.push("dataset.feature_columns: must not be empty".into());
                }
            }
        }
        if matches!(d.kind, Some(DatasetKind::Blobs | DatasetKind::Moons)) && d.n_per_class == Some(0) {
            errs.push("dataset.n_per_class: must be at least 1".into());
        }
        let split = self.split.clone().unwrap_or_default();
        if !(split.train_fraction > 0.0 && split.train_fraction < 1.0) {
            errs.push(format!("split.train_fraction: must lie in (0, 1), got {}", split.train_fraction));
        }
        let estimator = self.estimator.unwrap_or_default();
        if let EstimatorConfig::Shots { shots: 0, .. } = estimator {
            errs.push("estimator.shots: must be at least 1".into());
        }
        let hyperparams = self.hyperparams.clone().unwrap_or_default();
        if !(hyperparams.learning_rate > 0.0 && hyperparams.learning_rate.is_finite()) {
            errs.push(format!("hyperparams.learning_rate: must be > 0, got {}", hyperparams.learning_rate));
        }
        if hyperparams.batch_size == 0 {
            errs.push("hyperparams.batch_size: must be at least 1".into());
        }
        if hyperparams.epochs == 0 {
            errs.push("hyperparams.epochs: must be at least 1".into());
        }
        let grid_resolution = self.grid_resolution.unwrap_or(50);
        if grid_resolution < 2 {
            errs.push(format!("grid_resolution: must be at least 2, got {grid_resolution}"));
        }
        if !errs.is_empty() {
            return Err(CliError::Invalid(format!("invalid config:\n  {}", errs.join("\n  "))));
        }
        Ok(Resolved {
            dataset: d.clone(),
            split,
            classifier: self.classifier.unwrap_or_default(),
            estimator,
            hyperparams,
            out_dir: self.outputs.dir.clone().unwrap_or_else(|| PathBuf::from(".")),
            outputs: self.outputs.clone(),
            grid_resolution,
        })
    }
}

/// Reads `--config` (if any), applies the flags and validates for `task`.
pub fn resolve(o: &Overrides, task: Task) -> Result<Resolved, CliError> {
    let mut cfg = match &o.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(o);
    cfg.resolve(task)
}

impl Resolved {
    fn output(&self, chosen: &Option<PathBuf>, default: &str) -> PathBuf {
        let name = chosen.clone().unwrap_or_else(|| PathBuf::from(default));
        if name.is_absolute() {
            name
        } else {
            self.out_dir.join(name)
        }
    }

    pub fn model_path(&self) -> PathBuf {
        self.output(&self.outputs.model, "model.json")
    }

    pub fn metrics_path(&self) -> PathBuf {
        self.output(&self.outputs.metrics, "metrics.json")
    }

    pub fn evaluation_path(&self) -> PathBuf {
        self.output(&self.outputs.evaluation, "evaluation.json")
    }

    pub fn grid_path(&self) -> PathBuf {
        self.output(&self.outputs.grid, "grid.csv")
    }

    pub fn svg_path(&self) -> PathBuf {
        self.output(&self.outputs.svg, "boundary.svg")
    }

    pub fn data_path(&self) -> PathBuf {
        self.output(&self.outputs.data, "data.csv")
    }

    /// Raw (unscaled) labelled points.
    pub fn load_points(&self) -> Result<Vec<LabeledPoint>, CliError> {
        let d = &self.dataset;
        let seed = d.seed.unwrap_or(0);
        let points = match d.kind.expect("validated") {
            DatasetKind::Blobs => datasets::make_blobs(
                d.n_per_class.unwrap_or(40),
                d.centers.unwrap_or([[-1.5, -1.5], [1.5, 1.5]]),
                d.sigma.unwrap_or(0.6),
                seed,
            )?,
            DatasetKind::Moons => datasets::make_moons(d.n_per_class.unwrap_or(50), d.noise.unwrap_or(0.1), seed)?,
            DatasetKind::Csv => {
                let path = d.path.as_ref().expect("validated");
                if !path.exists() {
                    return Err(CliError::Invalid(format!("dataset.path: {} does not exist", path.display())));
                }
                let mut spec = match d.format {
                    Some(CsvFormat::Iris) => CsvSpec::iris_default(),
                    Some(CsvFormat::Seeds) => CsvSpec::seeds_default(),
                    Some(CsvFormat::Custom) | None => CsvSpec {
                        has_header: true,
                        feature_columns: vec![],
                        label_column: 0,
                        class_pair: ["0".into(), "1".into()],
                    },
                };
                if d.format.is_none() {
                    // plain dataset file as written by gen-data
                    let file = std::fs::File::open(path).map_err(gqht::Error::from)?;
                    return Ok(datasets::read_dataset_csv(file)?);
                }
                if let Some(h) = d.has_header {
                    spec.has_header = h;
                }
                if let Some(c) = &d.feature_columns {
                    spec.feature_columns = c.clone();
                }
                if let Some(l) = d.label_column {
                    spec.label_column = l;
                }
                if let Some(p) = &d.class_pair {
                    spec.class_pair = p.clone();
                }
                datasets::load_csv(path, &spec)?
            }
        };
        Ok(points)
    }
}
