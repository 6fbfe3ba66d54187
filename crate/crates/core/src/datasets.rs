//! Data loading, synthetic generators and preprocessing into the bounded domain.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::{log2_ceil, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub features: Vec<f64>,
    pub label: u8,
}

impl LabeledPoint {
    pub fn new(features: Vec<f64>, label: u8) -> Self {
        Self { features, label }
    }
}

/// Column selection for [`load_csv`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvSpec {
    pub has_header: bool,
    pub feature_columns: Vec<usize>,
    pub label_column: usize,
    /// Raw label values mapped to class 0 and class 1. Other rows are dropped.
    pub class_pair: [String; 2],
}

impl CsvSpec {
    /// Iris file with a header: setosa vs versicolor, first two features.
    pub fn iris_default() -> Self {
        Self {
            has_header: true,
            feature_columns: vec![0, 1],
            label_column: 4,
            class_pair: ["setosa".into(), "versicolor".into()],
        }
    }

    /// Headerless Seeds file (7 features, class in column 7): classes 1 vs 2, first two features.
    pub fn seeds_default() -> Self {
        Self {
            has_header: false,
            feature_columns: vec![0, 1],
            label_column: 7,
            class_pair: ["1".into(), "2".into()],
        }
    }
}

fn label_matches(cell: &str, class: &str) -> bool {
    match (cell.parse::<f64>(), class.trim().parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => cell == class.trim(),
    }
}

pub fn load_csv(path: impl AsRef<Path>, spec: &CsvSpec) -> Result<Vec<LabeledPoint>> {
    let file = std::fs::File::open(path)?;
    parse_csv(file, spec)
}

/// Parses comma-separated rows. Fields may be padded with whitespace;
/// rows whose label is in neither class are skipped.
pub fn parse_csv<R: Read>(reader: R, spec: &CsvSpec) -> Result<Vec<LabeledPoint>> {
    if spec.feature_columns.is_empty() {
        return Err(Error::Data("no feature columns selected".into()));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(spec.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut points = Vec::new();
    let mut seen = [false, false];
    let mut rows = 0usize;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rows == 0 {
            let width = record.len();
            if spec.label_column >= width {
                return Err(Error::Data(format!(
                    "label column {} out of range for {width} columns",
                    spec.label_column
                )));
            }
            if let Some(c) = spec.feature_columns.iter().find(|&&c| c >= width) {
                return Err(Error::Data(format!("feature column {c} out of range for {width} columns")));
            }
        }
        rows += 1;
        let needed = spec.feature_columns.iter().copied().chain([spec.label_column]).max().unwrap_or(0);
        if record.len() <= needed {
            return Err(Error::Parse { line, message: format!("expected at least {} fields, found {}", needed + 1, record.len()) });
        }
        let cell = &record[spec.label_column];
        let label = if label_matches(cell, &spec.class_pair[0]) {
            0
        } else if label_matches(cell, &spec.class_pair[1]) {
            1
        } else {
            continue;
        };
        seen[label as usize] = true;
        let features = spec
            .feature_columns
            .iter()
            .map(|&c| match record[c].parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse { line, message: format!("column {c}: '{}' is not a finite number", &record[c]) }),
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(LabeledPoint { features, label });
    }
    if rows == 0 {
        return Err(Error::Parse { line: 1, message: "no data rows".into() });
    }
    for (k, present) in seen.iter().enumerate() {
        if !present {
            return Err(Error::Data(format!("class '{}' does not occur in the label column", spec.class_pair[k])));
        }
    }
    Ok(points)
}

/// Writes `f0,f1,...,label` with a header row.
pub fn write_csv(points: &[LabeledPoint]) -> String {
    let dim = points.first().map_or(0, |p| p.features.len());
    let mut out = String::new();
    for k in 0..dim {
        let _ = write!(out, "f{k},");
    }
    out.push_str("label\n");
    for p in points {
        for v in &p.features {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", p.label);
    }
    out
}

/// Reads the format produced by [`write_csv`].
pub fn read_dataset_csv<R: Read>(reader: R) -> Result<Vec<LabeledPoint>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let width = rdr.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?.len();
    if width < 2 {
        return Err(Error::Parse { line: 1, message: "need at least one feature and a label".into() });
    }
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse { line: e.position().map(|p| p.line()).unwrap_or(0), message: e.to_string() })?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let number = |c: usize| {
            rec[c].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                line,
                message: format!("column {c}: '{}' is not a finite number", &rec[c]),
            })
        };
        let label = match number(width - 1)? {
            0.0 => 0,
            1.0 => 1,
            v => return Err(Error::Data(format!("line {line}: label {v} is not 0 or 1"))),
        };
        let features = (0..width - 1).map(number).collect::<Result<Vec<f64>>>()?;
        points.push(LabeledPoint { features, label });
    }
    Ok(points)
}

/// Per-feature min-max scaling into `[-1, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxParams {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxParams {
    pub fn fit(points: &[LabeledPoint]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Data(format!("min-max fit needs at least 2 points, got {}", points.len())));
        }
        let dim = points[0].features.len();
        let mut min = vec![f64::INFINITY; dim];
        let mut max = vec![f64::NEG_INFINITY; dim];
        for p in points {
            if p.features.len() != dim {
                return Err(Error::Data("points have different feature counts".into()));
            }
            for (k, &v) in p.features.iter().enumerate() {
                min[k] = min[k].min(v);
                max[k] = max[k].max(v);
            }
        }
        if let Some(k) = (0..dim).find(|&k| max[k] <= min[k]) {
            return Err(Error::Data(format!("feature {k} is constant ({}) and cannot be min-max scaled", min[k])));
        }
        Ok(Self { min, max })
    }

    /// Maps each feature with `2 (x - min) / (max - min) - 1`, clamping to
    /// `[-1, 1]`. Returns the points and how many components were clamped.
    pub fn transform(&self, points: &[LabeledPoint]) -> (Vec<LabeledPoint>, usize) {
        let mut clamped = 0;
        let out = points
            .iter()
            .map(|p| {
                let features = p
                    .features
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        let y = 2.0 * (v - self.min[k]) / (self.max[k] - self.min[k]) - 1.0;
                        if !(-1.0..=1.0).contains(&y) {
                            clamped += 1;
                        }
                        y.clamp(-1.0, 1.0)
                    })
                    .collect();
                LabeledPoint { features, label: p.label }
            })
            .collect();
        (out, clamped)
    }
}

/// Training and test sets after scaling with statistics fitted on the training set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prepared {
    pub train: Vec<LabeledPoint>,
    pub test: Vec<LabeledPoint>,
    pub params: MinMaxParams,
    pub test_clamped: usize,
}

/// Fits on `train` only, transforms both splits.
pub fn minmax_fit_transform(train: &[LabeledPoint], test: &[LabeledPoint]) -> Result<Prepared> {
    let params = MinMaxParams::fit(train)?;
    let (train, _) = params.transform(train);
    let (test, test_clamped) = params.transform(test);
    Ok(Prepared { train, test, params, test_clamped })
}

/// Split then scale.
pub fn prepare(points: &[LabeledPoint], split: &SplitSpec) -> Result<Prepared> {
    let (train, test) = train_test_split(points, split)?;
    minmax_fit_transform(&train, &test)
}

fn check_sigma(name: &str, v: f64, allow_zero: bool) -> Result<()> {
    let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Argument(format!("{name} must be {}, got {v}", if allow_zero { ">= 0" } else { "> 0" })))
    }
}

/// Isotropic Gaussian blobs around two centers; class 0 first.
pub fn make_blobs(n_per_class: usize, centers: [[f64; 2]; 2], sigma: f64, seed: u64) -> Result<Vec<LabeledPoint>> {
    check_sigma("sigma", sigma, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Argument(e.to_string()))?;
    let mut out = Vec::with_capacity(2 * n_per_class);
    for (label, c) in centers.iter().enumerate() {
        for _ in 0..n_per_class {
            let features = vec![c[0] + normal.sample(&mut rng), c[1] + normal.sample(&mut rng)];
            out.push(LabeledPoint { features, label: label as u8 });
        }
    }
    Ok(out)
}

/// Two interleaved half circles: class 0 on `(cos t, sin t)`, class 1 on
/// `(1 - cos t, 0.5 - sin t)`, `t ~ U[0, pi]`, plus Gaussian noise.
pub fn make_moons(n_per_class: usize, noise_sigma: f64, seed: u64) -> Result<Vec<LabeledPoint>> {
    check_sigma("noise", noise_sigma, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = if noise_sigma > 0.0 { Some(Normal::new(0.0, noise_sigma).map_err(|e| Error::Argument(e.to_string()))?) } else { None };
    let mut out = Vec::with_capacity(2 * n_per_class);
    for label in 0..2u8 {
        for _ in 0..n_per_class {
            let t: f64 = rng.random_range(0.0..=PI);
            let (s, c) = t.sin_cos();
            let (mut x, mut y) = if label == 0 { (c, s) } else { (1.0 - c, 0.5 - s) };
            if let Some(nd) = &normal {
                x += nd.sample(&mut rng);
                y += nd.sample(&mut rng);
            }
            out.push(LabeledPoint { features: vec![x, y], label });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self { train_fraction: 0.7, seed: 0, stratified: true }
    }
}

fn train_count(fraction: f64, total: usize) -> usize {
    ((fraction * total as f64).round() as usize).clamp(1, total - 1)
}

/// Seeded shuffle and split. Stratified mode splits each class separately.
pub fn train_test_split(points: &[LabeledPoint], spec: &SplitSpec) -> Result<(Vec<LabeledPoint>, Vec<LabeledPoint>)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::Argument(format!("train_fraction must lie in (0, 1), got {}", spec.train_fraction)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    let groups: Vec<Vec<usize>> = if spec.stratified {
        (0..2u8).map(|c| (0..points.len()).filter(|&i| points[i].label == c).collect()).collect()
    } else {
        vec![(0..points.len()).collect()]
    };
    for (c, mut idx) in groups.into_iter().enumerate() {
        if idx.len() < 2 {
            let what = if spec.stratified { format!("class {c}") } else { "dataset".to_string() };
            return Err(Error::Data(format!("{what} has {} points; at least 2 are needed to split", idx.len())));
        }
        idx.shuffle(&mut rng);
        let k = train_count(spec.train_fraction, idx.len());
        train_idx.extend_from_slice(&idx[..k]);
        test_idx.extend_from_slice(&idx[k..]);
    }
    train_idx.shuffle(&mut rng);
    test_idx.shuffle(&mut rng);
    let pick = |ids: &[usize]| ids.iter().map(|&i| points[i].clone()).collect();
    Ok((pick(&train_idx), pick(&test_idx)))
}

/// Subsamples the majority class down to the minority count, keeping input order.
pub fn balance_classes(points: &[LabeledPoint], seed: u64) -> Result<Vec<LabeledPoint>> {
    let idx: [Vec<usize>; 2] = [0u8, 1].map(|c| (0..points.len()).filter(|&i| points[i].label == c).collect());
    if idx[0].is_empty() || idx[1].is_empty() {
        return Err(Error::Data(format!(
            "both classes must be present (class 0: {}, class 1: {})",
            idx[0].len(),
            idx[1].len()
        )));
    }
    if idx[0].len() == idx[1].len() {
        return Ok(points.to_vec());
    }
    let (major, minor) = if idx[0].len() > idx[1].len() { (0, 1) } else { (1, 0) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = idx[major].clone();
    keep.shuffle(&mut rng);
    keep.truncate(idx[minor].len());
    keep.extend_from_slice(&idx[minor]);
    keep.sort_unstable();
    Ok(keep.into_iter().map(|i| points[i].clone()).collect())
}

/// Appends zero features up to the next power of two.
pub fn pad_to_pow2(points: &[LabeledPoint]) -> Vec<LabeledPoint> {
    points
        .iter()
        .map(|p| {
            let mut features = p.features.clone();
            features.resize(1 << log2_ceil(features.len()), 0.0);
            LabeledPoint { features, label: p.label }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(cols: &[&[f64]], labels: &[u8]) -> Vec<LabeledPoint> {
        cols.iter().zip(labels).map(|(f, &l)| LabeledPoint::new(f.to_vec(), l)).collect()
    }

    #[test]
    fn minmax_examples() {
        let p = pts(&[&[0.0, -1.0], &[5.0, 1.0], &[10.0, 0.0]], &[0, 1, 0]);
        let params = MinMaxParams::fit(&p).unwrap();
        let (t, clamped) = params.transform(&p);
        assert_eq!(clamped, 0);
        let col0: Vec<f64> = t.iter().map(|q| q.features[0]).collect();
        let col1: Vec<f64> = t.iter().map(|q| q.features[1]).collect();
        assert_eq!(col0, vec![-1.0, 0.0, 1.0]);
        assert_eq!(col1, vec![-1.0, 1.0, 0.0]);

        let (test, clamped) = params.transform(&pts(&[&[20.0, 0.0]], &[1]));
        assert_eq!(clamped, 1);
        assert_eq!(test[0].features[0], 1.0);
    }

    #[test]
    fn minmax_rejects_constant_feature() {
        let p = pts(&[&[1.0, 3.0], &[2.0, 3.0]], &[0, 1]);
        match MinMaxParams::fit(&p) {
            Err(Error::Data(msg)) => assert!(msg.contains("feature 1")),
            other => panic!("{other:?}"),
        }
        assert!(MinMaxParams::fit(&p[..1]).is_err());
    }

    #[test]
    fn csv_parsing() {
        let text = "a,b,class\n1.0,2.0,x\n3.0,4.0,y\n5.0,6.0,z\n";
        let spec = CsvSpec { has_header: true, feature_columns: vec![0, 1], label_column: 2, class_pair: ["x".into(), "y".into()] };
        let p = parse_csv(text.as_bytes(), &spec).unwrap();
        assert_eq!(p, pts(&[&[1.0, 2.0], &[3.0, 4.0]], &[0, 1]));

        assert!(matches!(parse_csv("".as_bytes(), &spec), Err(Error::Parse { .. })));
        let bad_col = CsvSpec { label_column: 9, ..spec.clone() };
        assert!(matches!(parse_csv(text.as_bytes(), &bad_col), Err(Error::Data(_))));
        let unknown = CsvSpec { class_pair: ["x".into(), "w".into()], ..spec.clone() };
        assert!(matches!(parse_csv(text.as_bytes(), &unknown), Err(Error::Data(_))));
        match parse_csv("a,b,class\n1,2,x\n3,oops,y\n".as_bytes(), &spec) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_csv("a,b,class\n1,2,x\n3,y\n".as_bytes(), &spec) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn numeric_labels_match_by_value() {
        let text = "1.0 , 2.0, 1\n3.0,4.0,2.0\n5,6,3\n";
        let p = parse_csv(text.as_bytes(), &CsvSpec { label_column: 2, ..CsvSpec::seeds_default() }).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p[1].label, 1);
    }

    #[test]
    fn dataset_csv_round_trip() {
        let p = make_moons(5, 0.1, 3).unwrap();
        let text = write_csv(&p);
        assert!(text.starts_with("f0,f1,label\n"));
        assert_eq!(read_dataset_csv(text.as_bytes()).unwrap(), p);
    }

    #[test]
    fn blobs_examples() {
        let c = [[1.0, 2.0], [-3.0, 0.5]];
        let p = make_blobs(20, c, 1e-9, 4).unwrap();
        assert_eq!(p.len(), 40);
        for q in &p {
            let ctr = c[q.label as usize];
            assert!((q.features[0] - ctr[0]).abs() < 1e-6 && (q.features[1] - ctr[1]).abs() < 1e-6);
        }
        assert_eq!(make_blobs(10, c, 0.5, 9).unwrap(), make_blobs(10, c, 0.5, 9).unwrap());
        assert!(make_blobs(10, c, -1.0, 0).is_err());
        assert!(make_blobs(10, c, 0.0, 0).is_err());

        let (n, sigma) = (400, 0.7);
        let p = make_blobs(n, c, sigma, 12).unwrap();
        for label in 0..2u8 {
            for axis in 0..2 {
                let mean = p.iter().filter(|q| q.label == label).map(|q| q.features[axis]).sum::<f64>() / n as f64;
                assert!((mean - c[label as usize][axis]).abs() < 4.0 * sigma / (n as f64).sqrt());
            }
        }
    }

    #[test]
    fn moons_examples() {
        let p = make_moons(50, 0.0, 1).unwrap();
        for q in p.iter().filter(|q| q.label == 0) {
            assert!((q.features[0].powi(2) + q.features[1].powi(2) - 1.0).abs() < 1e-12);
        }
        for q in p.iter().filter(|q| q.label == 1) {
            assert!(q.features[1] >= -0.5 - 1e-12 && q.features[1] <= 0.5 + 1e-12);
        }
        assert_eq!(make_moons(10, 0.2, 5).unwrap(), make_moons(10, 0.2, 5).unwrap());
        assert!(make_moons(10, -0.1, 5).is_err());
    }

    #[test]
    fn split_examples() {
        let p = make_blobs(50, [[0.0, 0.0], [1.0, 1.0]], 0.3, 0).unwrap();
        let spec = SplitSpec { seed: 8, ..Default::default() };
        let (tr, te) = train_test_split(&p, &spec).unwrap();
        assert_eq!((tr.len(), te.len()), (70, 30));
        assert_eq!(tr.iter().filter(|q| q.label == 0).count(), 35);
        assert_eq!(train_test_split(&p, &spec).unwrap(), (tr, te));

        let flat = SplitSpec { stratified: false, ..spec.clone() };
        let (tr, te) = train_test_split(&p, &flat).unwrap();
        assert_eq!((tr.len(), te.len()), (70, 30));

        let lonely = pts(&[&[0.0], &[1.0], &[2.0]], &[0, 0, 1]);
        assert!(matches!(train_test_split(&lonely, &spec), Err(Error::Data(_))));
        assert!(train_test_split(&p, &SplitSpec { train_fraction: 1.0, ..spec }).is_err());
    }

    #[test]
    fn balance_examples() {
        let mut p = make_blobs(10, [[0.0, 0.0], [1.0, 1.0]], 0.3, 0).unwrap();
        p.truncate(16); // 10 vs 6
        let b = balance_classes(&p, 2).unwrap();
        assert_eq!(b.iter().filter(|q| q.label == 0).count(), 6);
        assert_eq!(b.iter().filter(|q| q.label == 1).count(), 6);
        assert_eq!(balance_classes(&b, 3).unwrap(), b);
        assert!(balance_classes(&p[..5], 0).is_err());
    }

    #[test]
    fn padding() {
        let p = pad_to_pow2(&pts(&[&[0.1, 0.2, 0.3], &[0.4, 0.5, 0.6, 0.7]], &[0, 1]));
        assert_eq!(p[0].features, vec![0.1, 0.2, 0.3, 0.0]);
        assert_eq!(p[1].features.len(), 4);
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert_eq!(dot(&[0.1, 0.2, 0.3], &[0.3, 0.2, 0.1]), dot(&p[0].features, &[0.3, 0.2, 0.1, 0.0]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn minmax_is_monotone_and_bounded(col in prop::collection::vec(-100.0..100.0f64, 3..30)) {
                let p: Vec<LabeledPoint> = col.iter().map(|&v| LabeledPoint::new(vec![v], 0)).collect();
                prop_assume!(MinMaxParams::fit(&p).is_ok());
                let (t, _) = MinMaxParams::fit(&p).unwrap().transform(&p);
                for i in 0..p.len() {
                    prop_assert!(t[i].features[0].abs() <= 1.0);
                    for j in 0..p.len() {
                        if col[i] < col[j] {
                            prop_assert!(t[i].features[0] <= t[j].features[0]);
                        }
                    }
                }
            }
        }
    }
}
