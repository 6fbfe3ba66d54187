//! Dense complex statevector simulator.
//!
//! Qubit 0 is the most significant bit of the basis-state index, so a circuit
//! drawn top-to-bottom reads left-to-right in the index. Gates are applied by
//! iterating over amplitude pairs that satisfy the control pattern; no gate
//! matrix is ever expanded to the full register.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// A control condition: the gate fires only when `qubit` is in basis state `state`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub state: bool,
}

impl Control {
    pub fn on_one(qubit: usize) -> Self {
        Self { qubit, state: true }
    }

    pub fn on_zero(qubit: usize) -> Self {
        Self { qubit, state: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    /// `RY(theta) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]`.
    Ry(f64),
    /// Exchange the target with the given partner qubit.
    Swap(usize),
}

/// A (possibly controlled) gate. CNOT, controlled-RY and CSWAP are the
/// X, RY and Swap kinds with a non-empty control list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Self { kind: GateKind::H, target, controls: Vec::new() }
    }

    pub fn x(target: usize) -> Self {
        Self { kind: GateKind::X, target, controls: Vec::new() }
    }

    pub fn ry(target: usize, angle: f64) -> Self {
        Self { kind: GateKind::Ry(angle), target, controls: Vec::new() }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::X, target, controls: vec![Control::on_one(control)] }
    }

    pub fn cswap(control: usize, a: usize, b: usize) -> Self {
        Self { kind: GateKind::Swap(b), target: a, controls: vec![Control::on_one(control)] }
    }

    pub fn controlled_ry(controls: Vec<Control>, target: usize, angle: f64) -> Self {
        Self { kind: GateKind::Ry(angle), target, controls }
    }

    /// Every qubit the gate touches, target(s) first.
    pub fn qubits(&self) -> Vec<usize> {
        let mut qs = vec![self.target];
        if let GateKind::Swap(other) = self.kind {
            qs.push(other);
        }
        qs.extend(self.controls.iter().map(|c| c.qubit));
        qs
    }

    /// Checks indices against a register size and rejects overlapping roles.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= num_qubits {
                return Err(Error::Index { index: q, num_qubits });
            }
        }
        for (i, a) in qs.iter().enumerate() {
            if qs[i + 1..].contains(a) {
                return Err(Error::Argument(format!("qubit {a} used twice in one gate")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn init_zero(num_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::Size(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Size(format!("amplitude count {len} is not a power of two >= 2")));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("state norm {norm} differs from 1")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Size(format!("{num_qubits} qubits exceeds {MAX_QUBITS}")));
        }
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born-rule probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;

        let mut ctrl_mask = 0usize;
        let mut ctrl_value = 0usize;
        for c in &gate.controls {
            let b = self.bit(c.qubit);
            ctrl_mask |= b;
            if c.state {
                ctrl_value |= b;
            }
        }
        let tbit = self.bit(gate.target);

        match gate.kind {
            GateKind::Swap(other) => {
                let obit = self.bit(other);
                for i in 0..self.amplitudes.len() {
                    if i & tbit != 0 && i & obit == 0 && i & ctrl_mask == ctrl_value {
                        self.amplitudes.swap(i, i ^ tbit ^ obit);
                    }
                }
            }
            GateKind::X => {
                for i in 0..self.amplitudes.len() {
                    if i & tbit == 0 && i & ctrl_mask == ctrl_value {
                        self.amplitudes.swap(i, i | tbit);
                    }
                }
            }
            GateKind::H => {
                self.apply_real_2x2(tbit, ctrl_mask, ctrl_value, [FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
            }
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                self.apply_real_2x2(tbit, ctrl_mask, ctrl_value, [c, -s, s, c])
            }
        }
        Ok(())
    }

    /// Row-major real 2x2 matrix `[m00, m01, m10, m11]` on the target pair.
    fn apply_real_2x2(&mut self, tbit: usize, ctrl_mask: usize, ctrl_value: usize, m: [f64; 4]) {
        for i in 0..self.amplitudes.len() {
            if i & tbit == 0 && i & ctrl_mask == ctrl_value {
                let j = i | tbit;
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[j];
                self.amplitudes[i] = a0 * m[0] + a1 * m[1];
                self.amplitudes[j] = a0 * m[2] + a1 * m[3];
            }
        }
    }

    /// Marginal probability of reading `0` on `qubit`.
    pub fn prob_zero(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let b = self.bit(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & b == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `<Z>` on one qubit: `P(0) - P(1)`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let b = self.bit(qubit);
        let (mut p0, mut p1) = (0.0, 0.0);
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i & b == 0 {
                p0 += a.norm_sqr();
            } else {
                p1 += a.norm_sqr();
            }
        }
        Ok(p0 - p1)
    }

    /// Measures `qubit` `shots` times without collapsing the state.
    pub fn sample_z(&self, qubit: usize, shots: u64, seed: u64) -> Result<MeasurementRecord> {
        if shots == 0 {
            return Err(Error::Argument("shots must be at least 1".into()));
        }
        let p0 = self.prob_zero(qubit)?.clamp(0.0, 1.0);
        let count_zero = sample_binomial(shots, p0, seed)?;
        Ok(MeasurementRecord { qubit, shots, count_zero, count_one: shots - count_zero, seed })
    }

    /// Debug dump, one `basis_index,re,im` row per amplitude.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("basis_index,re,im\n");
        for (i, a) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(out, "{i},{:e},{:e}", a.re, a.im);
        }
        out
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            Err(Error::Index { index: qubit, num_qubits: self.num_qubits })
        } else {
            Ok(())
        }
    }
}

/// Draws from `Binomial(shots, p)` with a ChaCha8 stream keyed by `seed`.
pub(crate) fn sample_binomial(shots: u64, p: f64, seed: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Binomial::new(shots, p).map_err(|e| Error::Argument(e.to_string()))?;
    Ok(dist.sample(&mut rng))
}

/// Outcome counts of repeated single-qubit Z measurements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub shots: u64,
    pub count_zero: u64,
    pub count_one: u64,
    pub seed: u64,
}

impl MeasurementRecord {
    /// Shot estimate of `<Z>`.
    pub fn estimate(&self) -> f64 {
        (self.count_zero as f64 - self.count_one as f64) / self.shots as f64
    }
}
