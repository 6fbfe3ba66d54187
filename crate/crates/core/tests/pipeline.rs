use std::path::Path;

use gqht::classifiers::{accuracy, train_logistic, CentroidClassifier, Hyperparams};
use gqht::datasets::{self, balance_classes, load_csv, prepare, CsvSpec, SplitSpec};
use gqht::EstimatorConfig;

fn iris() -> Vec<datasets::LabeledPoint> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/iris.csv");
    load_csv(path, &CsvSpec::iris_default()).unwrap()
}

#[test]
fn iris_loads_setosa_and_versicolor() {
    let pts = iris();
    assert_eq!(pts.len(), 100);
    assert_eq!(pts.iter().filter(|p| p.label == 0).count(), 50);
    assert!(pts.iter().all(|p| p.features.len() == 2));
    assert_eq!(pts[0].features, vec![5.1, 3.5]);
}

#[test]
fn iris_split_is_bounded_and_stratified() {
    let data = prepare(&iris(), &SplitSpec { seed: 2, ..Default::default() }).unwrap();
    assert_eq!(data.train.len(), 70);
    assert_eq!(data.test.len(), 30);
    assert_eq!(data.train.iter().filter(|p| p.label == 1).count(), 35);
    for p in &data.train {
        assert!(p.features.iter().all(|v| (-1.0..=1.0).contains(v)));
    }
}

#[test]
fn both_classifiers_separate_iris() {
    let data = prepare(&iris(), &SplitSpec { seed: 3, ..Default::default() }).unwrap();
    let exact = EstimatorConfig::Exact;
    let hp = Hyperparams { learning_rate: 0.5, batch_size: 16, epochs: 100, seed: 3 };
    let (model, report) = train_logistic(&data.train, &hp, &exact).unwrap();
    assert!(report.loss_curve.last().unwrap() < &report.loss_curve[0]);
    assert!(accuracy(&model, &data.test, &exact).unwrap() >= 0.95);

    let train = balance_classes(&data.train, 3).unwrap();
    let clf = CentroidClassifier::fit(&train, &exact).unwrap();
    assert!(accuracy(&clf, &data.test, &exact).unwrap() >= 0.9);
}

#[test]
fn shot_based_training_still_learns_blobs() {
    let pts = datasets::make_blobs(30, [[-1.5, -1.5], [1.5, 1.5]], 0.5, 11).unwrap();
    let data = prepare(&pts, &SplitSpec { seed: 11, ..Default::default() }).unwrap();
    let hp = Hyperparams { learning_rate: 0.5, batch_size: 8, epochs: 30, seed: 11 };
    let shots = EstimatorConfig::shots(4096, 5);
    let (m1, _) = train_logistic(&data.train, &hp, &shots).unwrap();
    let (m2, _) = train_logistic(&data.train, &hp, &shots).unwrap();
    assert_eq!(m1, m2);
    assert!(accuracy(&m1, &data.test, &EstimatorConfig::Exact).unwrap() >= 0.9);
}

#[test]
fn generated_data_round_trips_through_csv() {
    let pts = datasets::make_moons(15, 0.2, 4).unwrap();
    let text = datasets::write_csv(&pts);
    assert_eq!(datasets::read_dataset_csv(text.as_bytes()).unwrap(), pts);
}
