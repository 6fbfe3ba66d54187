use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::statevector::{Gate, GateKind, StateVector};
use crate::{Error, Result};

/// An ordered gate list over a fixed register size.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must fit this register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits > self.num_qubits {
            return Err(Error::Size(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::Size(format!(
                "circuit has {} qubits but the state has {}",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        for g in &self.gates {
            state.apply(g)?;
        }
        Ok(())
    }

    /// Runs the circuit from `|0...0>`.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::init_zero(self.num_qubits)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// Number of gates acting on two or more qubits.
    pub fn multi_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.qubits().len() > 1).count()
    }

    /// OpenQASM 2.0 text. Angles carry 17 significant digits.
    ///
    /// Zero-state controls are wrapped in X gates; controlled RY with more
    /// than one control has no `qelib1.inc` counterpart and is rejected.
    pub fn to_qasm(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.num_qubits);
        for g in &self.gates {
            let flips: Vec<usize> = g.controls.iter().filter(|c| !c.state).map(|c| c.qubit).collect();
            for q in &flips {
                let _ = writeln!(out, "x q[{q}];");
            }
            let ctl: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
            let t = g.target;
            let line = match (g.kind, ctl.as_slice()) {
                (GateKind::H, []) => format!("h q[{t}];"),
                (GateKind::H, [c]) => format!("ch q[{c}],q[{t}];"),
                (GateKind::X, []) => format!("x q[{t}];"),
                (GateKind::X, [c]) => format!("cx q[{c}],q[{t}];"),
                (GateKind::X, [c1, c2]) => format!("ccx q[{c1}],q[{c2}],q[{t}];"),
                (GateKind::Ry(a), []) => format!("ry({}) q[{t}];", fmt_angle(a)),
                (GateKind::Ry(a), [c]) => format!("cry({}) q[{c}],q[{t}];", fmt_angle(a)),
                (GateKind::Swap(o), []) => format!("swap q[{t}],q[{o}];"),
                (GateKind::Swap(o), [c]) => format!("cswap q[{c}],q[{t}],q[{o}];"),
                _ => {
                    return Err(Error::Argument(format!(
                        "gate {:?} with {} controls has no qelib1 equivalent",
                        g.kind,
                        ctl.len()
                    )))
                }
            };
            out.push_str(&line);
            out.push('\n');
            for q in &flips {
                let _ = writeln!(out, "x q[{q}];");
            }
        }
        Ok(out)
    }
}

/// 17 significant digits in scientific notation, e.g. `1.5707963267948966e0`.
pub fn fmt_angle(a: f64) -> String {
    format!("{a:.16e}")
}
