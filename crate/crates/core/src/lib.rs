//! Statevector simulation of the generalized quantum Hadamard test (GQHT).
//!
//! The GQHT estimates the inner product of two real vectors whose components
//! lie in `[-1, 1]`, without requiring L2 normalization. Each component `x_j`
//! is written into a dedicated qubit as `x_j|0> + sqrt(1 - x_j^2)|1>`, indexed
//! by a register in uniform superposition; a controlled swap against a fresh
//! utility qubit decouples the `sqrt(1 - x^2)` branches, so the ancilla's
//! Pauli-Z expectation becomes `<x_p, x_q> / 2^n`.
//!
//! Layout of the crate:
//!
//! - [`statevector`]: exact complex statevector simulator and single-qubit sampling.
//! - [`circuit`]: ordered gate lists and OpenQASM 2.0 export.
//! - [`ucr`]: Gray-code angle transform and uniformly-controlled RY synthesis.
//! - [`encoding`]: bounded-vector feature map, pair/batch encodings, amplitude encoding.
//! - [`hadamard`]: GQHT, batched GQHT and the amplitude-encoded baseline test.
//! - [`classifiers`]: logistic-regression and centroid classifiers backed by the GQHT.
//! - [`datasets`]: CSV loading, synthetic generators, min-max scaling and splits.

pub mod circuit;
pub mod classifiers;
pub mod datasets;
pub mod encoding;
mod error;
pub mod hadamard;
pub mod statevector;
pub mod ucr;

#[cfg(test)]
mod oracle;

pub use circuit::Circuit;
pub use encoding::{BoundedVector, NormalizedVector, QubitLayout};
pub use error::{Error, Result};
pub use hadamard::{EstimatorConfig, InnerProductResult};
pub use statevector::{Control, Gate, GateKind, MeasurementRecord, StateVector};
pub use ucr::AngleVector;

/// Smallest `n` with `2^n >= len` (`len = 0` maps to 0).
pub fn log2_ceil(len: usize) -> usize {
    if len <= 1 {
        0
    } else {
        (usize::BITS - (len - 1).leading_zeros()) as usize
    }
}
