//! Uniformly-controlled RY synthesis.
//!
//! A uniformly-controlled rotation applies `RY(theta_j)` to a target whenever
//! the controls are in basis state `|j>`. It decomposes into the alternating
//! sequence `RY(alpha_0) CNOT RY(alpha_1) CNOT ...`, where the CNOT after step
//! `q` is driven by the control whose bit flips between Gray codes `g_q` and
//! `g_{q+1}`. Pushing the X gates through the rotations gives
//! `theta_j = sum_q (-1)^{j . g_q} alpha_q`, i.e. `theta = A alpha` with the
//! unscaled sign matrix `A`. Since `A A^T = 2^n I`,
//! `alpha = A^T theta / 2^n`, which is a Walsh-Hadamard transform of `theta`
//! read out in Gray order.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::statevector::Gate;
use crate::{Error, Result};

/// Rotation angles indexed by the basis state of `n_controls` control qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleVector {
    values: Vec<f64>,
}

impl AngleVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(Error::Size(format!(
                "angle vector length {} is not a power of two",
                values.len()
            )));
        }
        Ok(Self { values })
    }

    pub fn n_controls(&self) -> usize {
        self.values.len().trailing_zeros() as usize
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Binary-reflected Gray code `k ^ (k >> 1)`.
pub fn gray_code(k: usize) -> usize {
    k ^ (k >> 1)
}

/// `gray_code(k)` as an `n`-character bit string, most significant bit first.
pub fn gray_bits(k: usize, n: usize) -> String {
    format!("{:0width$b}", gray_code(k), width = n)
}

/// Gray order over `n`-bit strings: `order[q]` is the binary value of `g_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayTable {
    n: usize,
    order: Vec<usize>,
}

impl GrayTable {
    pub fn new(n: usize) -> Self {
        Self { n, order: (0..1usize << n).map(gray_code).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Bit position (0 = least significant) that flips from `g_q` to
    /// `g_{q+1}`, wrapping from the last code back to `g_0`.
    pub fn flip_bit(&self, q: usize) -> usize {
        let next = self.order[(q + 1) % self.order.len()];
        (self.order[q] ^ next).trailing_zeros() as usize
    }
}

/// `M[s][q] = (-1)^{popcount(s & g_q)} / 2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformMatrix {
    n: usize,
    entries: Vec<Vec<f64>>,
}

impl TransformMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    /// The same matrix without the `1/2^n` factor (entries are exactly +-1).
    pub fn unscaled(&self) -> Vec<Vec<f64>> {
        let k = (1usize << self.n) as f64;
        self.entries.iter().map(|r| r.iter().map(|v| v * k).collect()).collect()
    }

    /// `M^T theta` by explicit matrix-vector product.
    pub fn transpose_apply(&self, theta: &[f64]) -> Vec<f64> {
        let d = self.entries.len();
        (0..d).map(|q| (0..d).map(|s| self.entries[s][q] * theta[s]).sum()).collect()
    }
}

pub const MAX_TRANSFORM_BITS: usize = 12;

pub fn build_matrix(n: usize) -> Result<TransformMatrix> {
    if !(1..=MAX_TRANSFORM_BITS).contains(&n) {
        return Err(Error::Size(format!("transform size n must be in 1..={MAX_TRANSFORM_BITS}, got {n}")));
    }
    let d = 1usize << n;
    let scale = 1.0 / d as f64;
    let entries = (0..d)
        .map(|s| {
            (0..d)
                .map(|q| if (s & gray_code(q)).count_ones().is_multiple_of(2) { scale } else { -scale })
                .collect()
        })
        .collect();
    Ok(TransformMatrix { n, entries })
}

/// In-place unnormalized Walsh-Hadamard transform in natural (Sylvester) order.
pub fn fwht(values: &mut [f64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in values.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Circuit angles `alpha = A^T theta / 2^n` for target angles `theta`, in `O(2^n n)`.
pub fn angle_transform(theta: &AngleVector) -> AngleVector {
    let d = theta.values.len();
    let mut w = theta.values.clone();
    fwht(&mut w);
    let scale = 1.0 / d as f64;
    let values = (0..d).map(|q| w[gray_code(q)] * scale).collect();
    AngleVector { values }
}

/// Emits `RY(alpha_0), CNOT, RY(alpha_1), CNOT, ...` on `target`.
///
/// `controls[0]` is the most significant bit of the control index. With no
/// controls the result is a single `RY(alpha_0)`.
pub fn synthesize_ucry(
    num_qubits: usize,
    controls: &[usize],
    target: usize,
    alpha: &AngleVector,
) -> Result<Circuit> {
    let n = controls.len();
    if alpha.n_controls() != n {
        return Err(Error::Argument(format!(
            "{} angles need {} controls, got {n}",
            alpha.values.len(),
            alpha.n_controls()
        )));
    }
    for (i, c) in controls.iter().enumerate() {
        if *c == target || controls[i + 1..].contains(c) {
            return Err(Error::Argument(format!("qubit {c} repeated among controls and target")));
        }
    }
    let mut circuit = Circuit::new(num_qubits);
    if n == 0 {
        circuit.push(Gate::ry(target, alpha.values[0]))?;
        return Ok(circuit);
    }
    let table = GrayTable::new(n);
    for (q, &a) in alpha.values.iter().enumerate() {
        circuit.push(Gate::ry(target, a))?;
        let bit = table.flip_bit(q);
        circuit.push(Gate::cnot(controls[n - 1 - bit], target))?;
    }
    Ok(circuit)
}

/// Uniformly-controlled RY for target angles `theta`.
pub fn ucry(num_qubits: usize, controls: &[usize], target: usize, theta: &AngleVector) -> Result<Circuit> {
    synthesize_ucry(num_qubits, controls, target, &angle_transform(theta))
}
