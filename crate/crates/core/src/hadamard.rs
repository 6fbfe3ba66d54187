//! Hadamard-test inner-product estimators.
//!
//! [`gqht`] prepares `(|0>|x_p> + |1>|x_q>)/sqrt(2)` with the bounded feature
//! map, swaps the component qubit with a fresh utility qubit under the
//! ancilla, and applies a Hadamard to the ancilla. The ancilla then reads
//! `<Z> = <x_p, x_q> / 2^n`. [`gqht_batched`] does the same against a whole
//! training set at once and reads `sum_m <x_m, x> / 2^{p+n}`. [`qht`] is the
//! amplitude-encoded baseline, which reads the cosine similarity directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{self, BoundedVector, NormalizedVector, QubitLayout};
use crate::statevector::{Gate, StateVector};
use crate::{log2_ceil, Error, Result};

/// How `<Z>` on the ancilla is turned into a number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum EstimatorConfig {
    /// Read `<Z>` from the amplitudes.
    #[default]
    Exact,
    /// Binomial sampling of `shots` measurements, seeded.
    Shots { shots: u64, seed: u64 },
}

impl EstimatorConfig {
    pub fn shots(shots: u64, seed: u64) -> Self {
        EstimatorConfig::Shots { shots, seed }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EstimatorConfig::Shots { shots: 0, .. } => Err(Error::Argument("shots must be at least 1".into())),
            _ => Ok(()),
        }
    }

    /// An independent sampling stream for the `stream`-th call of a batch.
    /// Exact mode is returned unchanged.
    pub fn derive(&self, stream: u64) -> Self {
        match *self {
            EstimatorConfig::Exact => EstimatorConfig::Exact,
            EstimatorConfig::Shots { shots, seed } => EstimatorConfig::Shots {
                shots,
                seed: splitmix64(seed ^ splitmix64(stream.wrapping_add(0x9E37_79B9_7F4A_7C15))),
            },
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerProductResult {
    /// `raw_expectation * scale`.
    pub value: f64,
    /// Ancilla `<Z>`, exact or estimated.
    pub raw_expectation: f64,
    pub scale: f64,
    /// Zero in exact mode.
    pub stderr: f64,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

/// Reads the ancilla (qubit 0) and rescales.
fn read_ancilla(state: &StateVector, scale: f64, cfg: &EstimatorConfig) -> Result<InnerProductResult> {
    match *cfg {
        EstimatorConfig::Exact => {
            let z = state.expectation_z(0)?;
            Ok(InnerProductResult { value: z * scale, raw_expectation: z, scale, stderr: 0.0, shots: None, seed: None })
        }
        EstimatorConfig::Shots { shots, seed } => {
            let record = state.sample_z(0, shots, seed)?;
            let z = record.estimate();
            let stderr = scale * ((1.0 - z * z).max(0.0) / shots as f64).sqrt();
            Ok(InnerProductResult { value: z * scale, raw_expectation: z, scale, stderr, shots: Some(shots), seed: Some(seed) })
        }
    }
}

/// Controlled swap of component and utility qubits, then H on the ancilla.
pub fn interference_tail(layout: &QubitLayout) -> [Gate; 2] {
    [Gate::cswap(layout.ancilla, layout.component, layout.utility), Gate::h(layout.ancilla)]
}

/// Inner product of two bounded vectors with equal padded dimension.
pub fn gqht(x_p: &BoundedVector, x_q: &BoundedVector, cfg: &EstimatorConfig) -> Result<InnerProductResult> {
    cfg.validate()?;
    let mut circuit = encoding::encode_pair(x_p, x_q)?;
    let layout = QubitLayout::pairwise(x_p.index_qubits());
    for g in interference_tail(&layout) {
        circuit.push(g)?;
    }
    let state = circuit.simulate()?;
    read_ancilla(&state, x_p.components().len() as f64, cfg)
}

/// [`gqht`] over many pairs in parallel; output order follows input order.
/// In shots mode pair `k` samples with `cfg.derive(k)`.
pub fn gqht_many(pairs: &[(BoundedVector, BoundedVector)], cfg: &EstimatorConfig) -> Result<Vec<InnerProductResult>> {
    pairs
        .par_iter()
        .enumerate()
        .map(|(k, (p, q))| gqht(p, q, &cfg.derive(k as u64)))
        .collect()
}

/// Batched GQHT with the training half of the circuit simulated once.
///
/// The training encoding does not depend on the test point, so its state
/// is cached and each [`estimate`](Self::estimate) only runs the test
/// encoding and the interference tail.
#[derive(Clone, Debug)]
pub struct BatchedEstimator {
    layout: QubitLayout,
    prepared: StateVector,
    scale: f64,
}

impl BatchedEstimator {
    /// `training.len()` must be a power of two.
    pub fn new(training: &[BoundedVector]) -> Result<Self> {
        let (layout, circuit) = encoding::encode_training(training)?;
        let prepared = circuit.simulate()?;
        let scale = (training.len() * training[0].components().len()) as f64;
        Ok(Self { layout, prepared, scale })
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    /// `2^{p+n}`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `sum_m <x_m, test>`.
    pub fn estimate(&self, test: &BoundedVector, cfg: &EstimatorConfig) -> Result<InnerProductResult> {
        cfg.validate()?;
        let mut state = self.prepared.clone();
        encoding::encode_test(&self.layout, test)?.apply_to(&mut state)?;
        for g in interference_tail(&self.layout) {
            state.apply(&g)?;
        }
        read_ancilla(&state, self.scale, cfg)
    }
}

/// `sum_m <x_m, test>` over a training set of `2^p` vectors.
pub fn gqht_batched(training: &[BoundedVector], test: &BoundedVector, cfg: &EstimatorConfig) -> Result<InnerProductResult> {
    BatchedEstimator::new(training)?.estimate(test, cfg)
}

/// Amplitude-encoded Hadamard test; reads `<x_p, x_q>` for unit vectors.
///
/// Uses `n + 1` qubits: the ancilla and the amplitude register. The joint
/// state `(|0>|x_p> + |1>|x_q>)/sqrt(2)` is prepared by one amplitude tree
/// over ancilla and register, whose top rotation is `RY(pi/2)` on the ancilla
/// and whose lower levels are controlled by it.
pub fn qht(x_p: &NormalizedVector, x_q: &NormalizedVector, cfg: &EstimatorConfig) -> Result<InnerProductResult> {
    cfg.validate()?;
    if x_p.components().len() != x_q.components().len() {
        return Err(Error::Argument(format!(
            "padded dimensions differ: {} vs {}",
            x_p.components().len(),
            x_q.components().len()
        )));
    }
    let n = x_p.index_qubits();
    let m = n + 1;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let joint: Vec<f64> = x_p.components().iter().chain(x_q.components()).map(|v| v * h).collect();
    let qubits: Vec<usize> = (0..m).collect();
    let mut circuit = encoding::amplitude_tree(m, &qubits, &joint)?;
    circuit.push(Gate::h(0))?;
    let state = circuit.simulate()?;
    read_ancilla(&state, 1.0, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitBudget {
    pub gqht_qubits: usize,
    pub qht_qubits: usize,
}

/// Register sizes for `N`-component inputs.
pub fn compare_qubit_budget(dim: usize) -> QubitBudget {
    let n = log2_ceil(dim);
    QubitBudget { gqht_qubits: n + 3, qht_qubits: n + 1 }
}
