//! Reruns the two worked circuit examples against classical oracles.

use gqht::encoding::BoundedVector;
use gqht::hadamard::{gqht, gqht_batched};
use gqht::EstimatorConfig;
use serde::Serialize;

const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct ReproCase {
    pub name: &'static str,
    /// Value printed with the original worked example.
    pub reported: f64,
    pub computed: f64,
    pub oracle: f64,
    pub abs_error: f64,
    pub status: &'static str,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ReproReport {
    pub tolerance: f64,
    pub cases: Vec<ReproCase>,
    pub all_pass: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn case(name: &'static str, reported: f64, computed: f64, oracle: f64, report_tol: f64) -> ReproCase {
    let abs_error = (computed - oracle).abs();
    let pass = abs_error <= TOLERANCE;
    let reported_agrees = (reported - oracle).abs() <= report_tol;
    let (status, note) = match (pass, reported_agrees) {
        (false, _) => ("FAIL", None),
        (true, true) => ("PASS", Some(format!("reported value {reported} is the oracle rounded"))),
        (true, false) => (
            "PASS-with-note",
            Some(format!(
                "reported value {reported} disagrees with both the simulated circuit and the classical oracle {oracle}"
            )),
        ),
    };
    ReproCase { name, reported, computed, oracle, abs_error, status, note }
}

pub fn run() -> gqht::Result<ReproReport> {
    let exact = EstimatorConfig::Exact;

    let p = [0.1, 0.25, -1.0, 0.9];
    let q = [-1.0, 0.75, 0.65, 0.89];
    let r = gqht(&BoundedVector::new(&p)?, &BoundedVector::new(&q)?, &exact)?;
    let pair = case("four-component pair, ancilla <Z>", 0.06, r.raw_expectation, dot(&p, &q) / 4.0, 0.005);

    let train = [[1.0, 0.25, -0.36, -0.98], [-0.1, 0.37, 0.65, 0.45]];
    let test = [0.75, 0.1, 0.25, 0.25];
    let bounded = train.iter().map(|t| BoundedVector::new(t)).collect::<gqht::Result<Vec<_>>>()?;
    let r = gqht_batched(&bounded, &BoundedVector::new(&test)?, &exact)?;
    let oracle = train.iter().map(|t| dot(t, &test)).sum::<f64>() / 8.0;
    let batch = case("two-sample batch, ancilla <Z>", 0.069, r.raw_expectation, oracle, 0.0005);

    let cases = vec![pair, batch];
    let all_pass = cases.iter().all(|c| c.status != "FAIL");
    Ok(ReproReport { tolerance: TOLERANCE, cases, all_pass })
}
