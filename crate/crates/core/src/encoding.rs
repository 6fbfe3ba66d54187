//! Quantum feature maps.
//!
//! A [`BoundedVector`] `x` with `2^n` components is written as
//! `2^{-n/2} sum_j |j> (x_j|0> + sqrt(1 - x_j^2)|1>)`: an index register in
//! uniform superposition and one component qubit rotated by `RY(2 acos x_j)`
//! under the index. The `|1>` branch carries a plus sign here; flipping it
//! does not change any overlap the Hadamard tests read out, because those
//! branches end up on different qubits after the controlled swap.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::statevector::{Control, Gate, GateKind};
use crate::ucr::{self, AngleVector};
use crate::{log2_ceil, Error, Result};

/// Real vector with every component in `[-1, 1]`, zero-padded to a power-of-two length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedVector {
    raw_dim: usize,
    components: Vec<f64>,
}

impl BoundedVector {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Argument("vector must have at least one component".into()));
        }
        for (index, &value) in values.iter().enumerate() {
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::OutOfBounds { index, value });
            }
        }
        let mut components = values.to_vec();
        components.resize(1 << log2_ceil(values.len()), 0.0);
        Ok(Self { raw_dim: values.len(), components })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(&vec![0.0; dim])
    }

    pub fn raw_dim(&self) -> usize {
        self.raw_dim
    }

    /// Padded components (length `2^n`).
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn raw(&self) -> &[f64] {
        &self.components[..self.raw_dim]
    }

    /// Number of index qubits `n`.
    pub fn index_qubits(&self) -> usize {
        self.components.len().trailing_zeros() as usize
    }

    pub fn dot(&self, other: &BoundedVector) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }
}

/// Unit-norm real vector, zero-padded to a power-of-two length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedVector {
    components: Vec<f64>,
}

impl NormalizedVector {
    /// Accepts values whose squared norm is 1 within 1e-12.
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Argument("vector must have at least one component".into()));
        }
        let norm_sqr: f64 = values.iter().map(|v| v * v).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("squared norm {norm_sqr} is not 1")));
        }
        let mut components = values.to_vec();
        components.resize(1 << log2_ceil(values.len()), 0.0);
        Ok(Self { components })
    }

    /// Divides by the L2 norm; the zero vector is rejected.
    pub fn normalize(values: &[f64]) -> Result<Self> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        let scaled: Vec<f64> = values.iter().map(|v| v / norm).collect();
        let mut components = scaled;
        components.resize(1 << log2_ceil(values.len()), 0.0);
        Ok(Self { components })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn index_qubits(&self) -> usize {
        self.components.len().trailing_zeros() as usize
    }
}

/// Register roles. Qubit 0 is the ancilla; the sample-index register is
/// empty for pairwise encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    pub ancilla: usize,
    pub sample_index: Vec<usize>,
    pub component_index: Vec<usize>,
    pub component: usize,
    pub utility: usize,
}

impl QubitLayout {
    pub fn pairwise(n: usize) -> Self {
        Self::batched(0, n)
    }

    /// `p` sample-index qubits followed by `n` component-index qubits.
    pub fn batched(p: usize, n: usize) -> Self {
        Self {
            ancilla: 0,
            sample_index: (1..=p).collect(),
            component_index: (p + 1..=p + n).collect(),
            component: p + n + 1,
            utility: p + n + 2,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.sample_index.len() + self.component_index.len() + 3
    }
}

/// Target angles `2 acos(x_j)`, so `RY(angle_j)|0>` has `<0|` amplitude `x_j`.
pub fn to_angles(x: &BoundedVector) -> AngleVector {
    AngleVector::new(x.components().iter().map(|v| 2.0 * v.acos()).collect())
        .expect("padded length is a power of two")
}

/// Prepares `(|0>|x_p> + |1>|x_q>)/sqrt(2)` on `n + 3` qubits (utility left in `|0>`).
///
/// One Hadamard on the ancilla and on each index qubit, then a single
/// uniformly-controlled RY on the component qubit, controlled by the ancilla
/// and the index register, with angles `theta_p ++ theta_q`.
pub fn encode_pair(x_p: &BoundedVector, x_q: &BoundedVector) -> Result<Circuit> {
    if x_p.components().len() != x_q.components().len() {
        return Err(Error::Argument(format!(
            "padded dimensions differ: {} vs {}",
            x_p.components().len(),
            x_q.components().len()
        )));
    }
    let n = x_p.index_qubits();
    let layout = QubitLayout::pairwise(n);
    let mut circuit = Circuit::new(layout.num_qubits());
    circuit.push(Gate::h(layout.ancilla))?;
    for &q in &layout.component_index {
        circuit.push(Gate::h(q))?;
    }
    let mut theta = to_angles(x_p).into_values();
    theta.extend(to_angles(x_q).into_values());
    let mut controls = vec![layout.ancilla];
    controls.extend(&layout.component_index);
    let rotations = ucr::ucry(layout.num_qubits(), &controls, layout.component, &AngleVector::new(theta)?)?;
    circuit.append(&rotations)?;
    Ok(circuit)
}

/// Training-set encoding split into the part that depends only on the
/// training vectors and the part that depends only on the test vector.
#[derive(Clone, Debug)]
pub struct BatchEncoding {
    pub layout: QubitLayout,
    /// Hadamard layer followed by the ancilla-`|0>` controlled training encoding.
    pub training: Circuit,
    /// Ancilla-`|1>` controlled test encoding.
    pub test: Circuit,
}

impl BatchEncoding {
    pub fn circuit(&self) -> Result<Circuit> {
        let mut c = self.training.clone();
        c.append(&self.test)?;
        Ok(c)
    }
}

/// Checks sizes and returns `(p, n)` for a training set.
pub fn batch_shape(training: &[BoundedVector]) -> Result<(usize, usize)> {
    let m = training.len();
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::Size(format!(
            "training set has {m} vectors; the batched encoding needs a power of two, \
             so subsample or pad with zero vectors explicitly"
        )));
    }
    let dim = training[0].components().len();
    if training.iter().any(|x| x.components().len() != dim) {
        return Err(Error::Argument("training vectors have different padded dimensions".into()));
    }
    Ok((m.trailing_zeros() as usize, training[0].index_qubits()))
}

/// The training half of the batched encoding.
pub fn encode_training(training: &[BoundedVector]) -> Result<(QubitLayout, Circuit)> {
    let (p, n) = batch_shape(training)?;
    let layout = QubitLayout::batched(p, n);
    let m = layout.num_qubits();
    let mut circuit = Circuit::new(m);
    circuit.push(Gate::h(layout.ancilla))?;
    for &q in layout.sample_index.iter().chain(&layout.component_index) {
        circuit.push(Gate::h(q))?;
    }
    let theta: Vec<f64> = training.iter().flat_map(|x| to_angles(x).into_values()).collect();
    let mut controls = layout.sample_index.clone();
    controls.extend(&layout.component_index);
    let ucr = ucr::ucry(m, &controls, layout.component, &AngleVector::new(theta)?)?;
    circuit.append(&condition_rotations(&ucr, Control::on_zero(layout.ancilla))?)?;
    Ok((layout, circuit))
}

/// The test half of the batched encoding for a given layout.
pub fn encode_test(layout: &QubitLayout, test: &BoundedVector) -> Result<Circuit> {
    if test.index_qubits() != layout.component_index.len() {
        return Err(Error::Argument(format!(
            "test vector has {} index qubits, layout expects {}",
            test.index_qubits(),
            layout.component_index.len()
        )));
    }
    let ucr = ucr::ucry(layout.num_qubits(), &layout.component_index, layout.component, &to_angles(test))?;
    condition_rotations(&ucr, Control::on_one(layout.ancilla))
}

/// Prepares `(|0>|D> + |1>|test>)/sqrt(2)` on `p + n + 3` qubits, where `|D>`
/// indexes the `2^p` training vectors and the test branch leaves the
/// sample-index register in uniform superposition.
pub fn encode_batch(training: &[BoundedVector], test: &BoundedVector) -> Result<Circuit> {
    let (layout, training) = encode_training(training)?;
    let test = encode_test(&layout, test)?;
    BatchEncoding { layout, training, test }.circuit()
}

/// Makes every RY of a synthesized uniformly-controlled rotation conditional
/// on `ctrl`. Each rotation becomes `RY(a/2) CNOT RY(+-a/2) CNOT` with the
/// CNOT driven by the control qubit: for a `|0>` control both half-angles are
/// positive, for a `|1>` control the second is negated. The CNOTs of the
/// uniformly-controlled rotation itself stay unconditional; when the
/// rotations are switched off they multiply to the identity because every
/// control bit flips an even number of times around the Gray cycle.
fn condition_rotations(ucr: &Circuit, ctrl: Control) -> Result<Circuit> {
    let mut out = Circuit::new(ucr.num_qubits());
    for g in ucr.gates() {
        match g.kind {
            GateKind::Ry(a) if g.controls.is_empty() => {
                let second = if ctrl.state { -a / 2.0 } else { a / 2.0 };
                out.push(Gate::ry(g.target, a / 2.0))?;
                out.push(Gate::cnot(ctrl.qubit, g.target))?;
                out.push(Gate::ry(g.target, second))?;
                out.push(Gate::cnot(ctrl.qubit, g.target))?;
            }
            _ => out.push(g.clone())?,
        }
    }
    Ok(out)
}

/// Prepares `sum_j x_j |j>` on `n >= 1` qubits with a tree of
/// uniformly-controlled RY gates. Intermediate levels split probability mass
/// between halves; the last level uses `2 atan2(x_{2j+1}, x_{2j})`, whose
/// range covers negative amplitudes.
pub fn amplitude_encode(x: &NormalizedVector) -> Result<Circuit> {
    let n = x.index_qubits();
    if n == 0 {
        return Err(Error::Size("amplitude encoding needs at least two components".into()));
    }
    let qubits: Vec<usize> = (0..n).collect();
    amplitude_tree(n, &qubits, x.components())
}

/// Amplitude-encoding tree for `values` on `qubits` (most significant first)
/// inside an `num_qubits`-qubit register.
pub(crate) fn amplitude_tree(num_qubits: usize, qubits: &[usize], values: &[f64]) -> Result<Circuit> {
    let n = qubits.len();
    let mut circuit = Circuit::new(num_qubits);
    for level in 0..n {
        let block = 1usize << (n - level);
        let half = block / 2;
        let angles: Vec<f64> = values
            .chunks(block)
            .map(|chunk| {
                if level == n - 1 {
                    2.0 * chunk[1].atan2(chunk[0])
                } else {
                    let left = chunk[..half].iter().map(|v| v * v).sum::<f64>().sqrt();
                    let right = chunk[half..].iter().map(|v| v * v).sum::<f64>().sqrt();
                    2.0 * right.atan2(left)
                }
            })
            .collect();
        let rot = ucr::ucry(num_qubits, &qubits[..level], qubits[level], &AngleVector::new(angles)?)?;
        circuit.append(&rot)?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    /// Closed-form pair state with the plus-sign `|1>` branch, utility in `|0>`.
    fn pair_reference(xp: &[f64], xq: &[f64]) -> Vec<f64> {
        let d = xp.len();
        let n = d.trailing_zeros() as usize;
        let norm = FRAC_1_SQRT_2 / (d as f64).sqrt();
        let mut out = vec![0.0; 1 << (n + 3)];
        for (a, x) in [xp, xq].into_iter().enumerate() {
            for (j, &v) in x.iter().enumerate() {
                let base = ((a << n) | j) << 2;
                out[base] = norm * v; // component 0, utility 0
                out[base | 0b10] = norm * (1.0 - v * v).sqrt();
            }
        }
        out
    }

    #[test]
    fn bounded_vector_pads_and_rejects() {
        let v = BoundedVector::new(&[0.5, -1.0, 1.0]).unwrap();
        assert_eq!(v.components(), &[0.5, -1.0, 1.0, 0.0]);
        assert_eq!(v.raw_dim(), 3);
        assert_eq!(v.index_qubits(), 2);
        assert_eq!(BoundedVector::new(&[0.3]).unwrap().index_qubits(), 0);
        match BoundedVector::new(&[0.0, 1.5]) {
            Err(Error::OutOfBounds { index: 1, value }) => assert_eq!(value, 1.5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(BoundedVector::new(&[f64::NAN]).is_err());
    }

    #[test]
    fn angle_examples() {
        let a = to_angles(&BoundedVector::new(&[1.0; 4]).unwrap());
        assert_eq!(a.values(), &[0.0; 4]);
        let a = to_angles(&BoundedVector::new(&[0.0; 4]).unwrap());
        assert!(a.values().iter().all(|v| (v - PI).abs() < 1e-15));
        let a = to_angles(&BoundedVector::new(&[-1.0, 0.5, 0.0, 1.0]).unwrap());
        let expect = [2.0 * PI, 2.0 * PI / 3.0, PI, 0.0];
        for (v, e) in a.values().iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn pair_encoding_matches_closed_form() {
        let xp = [0.1, 0.25, -1.0, 0.9];
        let xq = [-1.0, 0.75, 0.65, 0.89];
        let c = encode_pair(&BoundedVector::new(&xp).unwrap(), &BoundedVector::new(&xq).unwrap()).unwrap();
        assert_eq!(c.num_qubits(), 5);
        let s = c.simulate().unwrap();
        for (a, r) in s.amplitudes().iter().zip(pair_reference(&xp, &xq)) {
            assert!((a - Complex64::new(r, 0.0)).norm() < 1e-10);
        }
        // H layer (1 + n) plus 2^{n+2} gates of the rotation block
        assert_eq!(c.len(), 3 + 16);
    }

    #[test]
    fn pair_encoding_edge_cases() {
        let e = BoundedVector::new(&[1.0, 0.0, 0.0]).unwrap();
        let s = encode_pair(&e, &e).unwrap().simulate().unwrap();
        let amp = 1.0 / (2.0 * 4.0f64).sqrt();
        assert!((s.amplitudes()[0].re - amp).abs() < 1e-12);
        assert!((s.amplitudes()[0b10000].re - amp).abs() < 1e-12);

        let z = BoundedVector::zeros(4).unwrap();
        let s = encode_pair(&z, &z).unwrap().simulate().unwrap();
        for (i, a) in s.amplitudes().iter().enumerate() {
            if i & 0b10 == 0 {
                assert!(a.norm() < 1e-12, "component qubit must be |1> everywhere");
            }
        }

        let short = BoundedVector::new(&[0.1, 0.2]).unwrap();
        assert!(matches!(encode_pair(&short, &z), Err(Error::Argument(_))));
    }

    #[test]
    fn pair_encoding_matches_dense_oracle() {
        let xp = BoundedVector::new(&[0.3, -0.7]).unwrap();
        let xq = BoundedVector::new(&[-0.2, 0.9]).unwrap();
        let c = encode_pair(&xp, &xq).unwrap();
        let dense = oracle::run_from_zero(c.num_qubits(), c.gates());
        for (a, b) in c.simulate().unwrap().amplitudes().iter().zip(&dense) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn batch_layout_and_errors() {
        let t = BoundedVector::new(&[0.75, 0.1, 0.25, 0.25]).unwrap();
        let train = vec![
            BoundedVector::new(&[1.0, 0.25, -0.36, -0.98]).unwrap(),
            BoundedVector::new(&[-0.1, 0.37, 0.65, 0.45]).unwrap(),
        ];
        let c = encode_batch(&train, &t).unwrap();
        assert_eq!(c.num_qubits(), 6);
        let three = vec![t.clone(), t.clone(), t.clone()];
        assert!(matches!(encode_batch(&three, &t), Err(Error::Size(_))));
        assert!(matches!(encode_batch(&[], &t), Err(Error::Size(_))));
        let short = BoundedVector::new(&[0.1, 0.2]).unwrap();
        assert!(encode_batch(&train, &short).is_err());
    }

    #[test]
    fn batch_state_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (p, n) = (2usize, 1usize);
        let train: Vec<Vec<f64>> = (0..1 << p).map(|_| (0..1 << n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let test: Vec<f64> = (0..1 << n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let bv: Vec<BoundedVector> = train.iter().map(|v| BoundedVector::new(v).unwrap()).collect();
        let c = encode_batch(&bv, &BoundedVector::new(&test).unwrap()).unwrap();
        let s = c.simulate().unwrap();
        let norm = FRAC_1_SQRT_2 / ((1 << (p + n)) as f64).sqrt();
        for m in 0..1 << p {
            for j in 0..1 << n {
                for a in 0..2 {
                    let x = if a == 0 { train[m][j] } else { test[j] };
                    let base = ((a << p | m) << n | j) << 2;
                    assert!((s.amplitudes()[base].re - norm * x).abs() < 1e-10);
                    assert!((s.amplitudes()[base | 0b10].re - norm * (1.0 - x * x).sqrt()).abs() < 1e-10);
                    assert!(s.amplitudes()[base | 0b01].norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn zero_training_leaves_test_branch_alone() {
        let test = BoundedVector::new(&[0.4, -0.6]).unwrap();
        let zeros = vec![BoundedVector::zeros(2).unwrap(); 2];
        let other = vec![BoundedVector::new(&[0.9, 0.1]).unwrap(); 2];
        let a = encode_batch(&zeros, &test).unwrap().simulate().unwrap();
        let b = encode_batch(&other, &test).unwrap().simulate().unwrap();
        let half = a.amplitudes().len() / 2;
        for (x, y) in a.amplitudes()[half..].iter().zip(&b.amplitudes()[half..]) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn amplitude_encoding_examples() {
        let s = amplitude_encode(&NormalizedVector::new(&[1.0, 0.0]).unwrap()).unwrap().simulate().unwrap();
        assert!((s.amplitudes()[0].re - 1.0).abs() < 1e-15);
        let v = NormalizedVector::new(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap();
        let c = amplitude_encode(&v).unwrap();
        assert_eq!(c.len(), 1);
        let s = c.simulate().unwrap();
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitudes()[1].re + FRAC_1_SQRT_2).abs() < 1e-15);

        assert!(matches!(NormalizedVector::new(&[0.5, 0.5]), Err(Error::Domain(_))));
        assert!(amplitude_encode(&NormalizedVector::new(&[-1.0]).unwrap()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn amplitude_readback(n in 1usize..=4, raw in prop::collection::vec(-1.0..1.0f64, 16)) {
            let v = NormalizedVector::normalize(&raw[..1 << n]);
            prop_assume!(v.is_ok());
            let v = v.unwrap();
            let s = amplitude_encode(&v).unwrap().simulate().unwrap();
            let probs = s.probabilities();
            for (i, (a, x)) in s.amplitudes().iter().zip(v.components()).enumerate() {
                prop_assert!((a - Complex64::new(*x, 0.0)).norm() < 1e-10);
                prop_assert!((probs[i] - x * x).abs() < 1e-12);
            }
        }

        #[test]
        fn pair_readback(n in 0usize..=3, raw in prop::collection::vec(-1.0..=1.0f64, 16)) {
            let d = 1 << n;
            let (xp, xq) = (&raw[..d], &raw[8..8 + d]);
            let c = encode_pair(&BoundedVector::new(xp).unwrap(), &BoundedVector::new(xq).unwrap()).unwrap();
            prop_assert_eq!(c.num_qubits(), n + 3);
            let s = c.simulate().unwrap();
            for (a, r) in s.amplitudes().iter().zip(pair_reference(xp, xq)) {
                prop_assert!((a - Complex64::new(r, 0.0)).norm() < 1e-10);
            }
        }
    }
}
