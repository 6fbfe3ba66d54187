// Dense reference for circuits: every gate is expanded to a full 2^m x 2^m
// matrix built from Kronecker products of 2x2 factors, then multiplied out.
// Test-only; shared with the integration tests through #[path].

#![allow(dead_code)]

use num_complex::Complex64;

use super::{Gate, GateKind};

pub type Mat = Vec<Vec<Complex64>>;
type M2 = [[Complex64; 2]; 2];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I2: M2 = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];

fn proj(bit: bool) -> M2 {
    if bit {
        [[c(0.0), c(0.0)], [c(0.0), c(1.0)]]
    } else {
        [[c(1.0), c(0.0)], [c(0.0), c(0.0)]]
    }
}

pub fn ry2(theta: f64) -> M2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [[c(co), c(-s)], [c(s), c(co)]]
}

fn pauli(k: usize) -> M2 {
    let z = c(0.0);
    match k {
        0 => I2,
        1 => [[z, c(1.0)], [c(1.0), z]],
        2 => [[z, Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), z]],
        _ => [[c(1.0), z], [z, c(-1.0)]],
    }
}

/// Kronecker product of one 2x2 factor per qubit, qubit 0 leftmost.
pub fn kron_all(factors: &[M2]) -> Mat {
    let mut out: Mat = vec![vec![c(1.0)]];
    for f in factors {
        let d = out.len();
        let mut next = vec![vec![c(0.0); 2 * d]; 2 * d];
        for i in 0..d {
            for j in 0..d {
                for a in 0..2 {
                    for b in 0..2 {
                        next[2 * i + a][2 * j + b] = out[i][j] * f[a][b];
                    }
                }
            }
        }
        out = next;
    }
    out
}

fn add_scaled(acc: &mut Mat, m: &Mat, k: Complex64) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (a, b) in ra.iter_mut().zip(rm) {
            *a += k * b;
        }
    }
}

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| c(if i == j { 1.0 } else { 0.0 })).collect()).collect()
}

/// Full matrix of one gate on an `m`-qubit register:
/// `P_ctrl (x) U + (I - P_ctrl) (x) I`.
pub fn gate_matrix(g: &Gate, m: usize) -> Mat {
    // `terms` lists (coefficient, per-qubit factors) whose sum is the
    // un-controlled operator acting on the target(s).
    let mut terms: Vec<(Complex64, Vec<M2>)> = Vec::new();
    match g.kind {
        GateKind::H => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let mut f = vec![I2; m];
            f[g.target] = [[c(h), c(h)], [c(h), c(-h)]];
            terms.push((c(1.0), f));
        }
        GateKind::X => {
            let mut f = vec![I2; m];
            f[g.target] = pauli(1);
            terms.push((c(1.0), f));
        }
        GateKind::Ry(t) => {
            let mut f = vec![I2; m];
            f[g.target] = ry2(t);
            terms.push((c(1.0), f));
        }
        GateKind::Swap(other) => {
            // SWAP = (II + XX + YY + ZZ) / 2
            for k in 0..4 {
                let mut f = vec![I2; m];
                f[g.target] = pauli(k);
                f[other] = pauli(k);
                terms.push((c(0.5), f));
            }
        }
    }
    let d = 1usize << m;
    let mut ctrl_proj = vec![I2; m];
    for ctl in &g.controls {
        ctrl_proj[ctl.qubit] = proj(ctl.state);
    }
    let mut out = vec![vec![c(0.0); d]; d];
    for (k, mut f) in terms {
        for ctl in &g.controls {
            f[ctl.qubit] = proj(ctl.state);
        }
        add_scaled(&mut out, &kron_all(&f), k);
    }
    add_scaled(&mut out, &identity(d), c(1.0));
    add_scaled(&mut out, &kron_all(&ctrl_proj), c(-1.0));
    out
}

/// `a * b`, skipping structural zeros of `a`.
pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    let mut out = vec![vec![c(0.0); b[0].len()]; d];
    for i in 0..d {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for (o, bkj) in out[i].iter_mut().zip(&b[k]) {
                *o += aik * bkj;
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Product of all gate matrices, first gate rightmost.
pub fn circuit_unitary(m: usize, gates: &[Gate]) -> Mat {
    let mut u = identity(1 << m);
    for g in gates {
        u = mat_mul(&gate_matrix(g, m), &u);
    }
    u
}

/// State reached from `|0...0>`.
pub fn run_from_zero(m: usize, gates: &[Gate]) -> Vec<Complex64> {
    let mut v = vec![c(0.0); 1 << m];
    v[0] = c(1.0);
    for g in gates {
        v = mat_vec(&gate_matrix(g, m), &v);
    }
    v
}

/// `<Z>` on `qubit` of a dense state, qubit 0 most significant.
pub fn expectation_z(m: usize, v: &[Complex64], qubit: usize) -> f64 {
    let b = 1 << (m - 1 - qubit);
    v.iter()
        .enumerate()
        .map(|(i, a)| if i & b == 0 { a.norm_sqr() } else { -a.norm_sqr() })
        .sum()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm()))
        .fold(0.0, f64::max)
}

/// Block-diagonal `(+)_j RY(theta_j)` with the target as the least significant qubit.
pub fn block_diag_ry(thetas: &[f64]) -> Mat {
    let d = 2 * thetas.len();
    let mut out = vec![vec![c(0.0); d]; d];
    for (j, &t) in thetas.iter().enumerate() {
        let r = ry2(t);
        for a in 0..2 {
            for b in 0..2 {
                out[2 * j + a][2 * j + b] = r[a][b];
            }
        }
    }
    out
}
