// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Dense density-matrix simulation for a handful of qubits.
//!
//! This is a reference implementation that shares no code with the
//! symplectic machinery: gates and Paulis are explicit 2×2 matrices (or the
//! CNOT basis permutation) applied to a `2^n × 2^n` complex matrix. Basis
//! index bit `q` is qubit `q`.

use num_complex::Complex64;

use crate::circuit::{LayeredCircuit, OneQubitGate};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::pauli::{Pauli, PauliString};

pub const MAX_DENSE_QUBITS: usize = 6;

type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli_matrix_1q(p: Pauli) -> Mat2 {
    match p {
        Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

pub fn hadamard() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn phase_s() -> Mat2 {
    [[ONE, ZERO], [ZERO, I]]
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Left-multiplies by `u` acting on qubit `q`.
    fn apply_left(&mut self, u: &Mat2, q: usize) {
        let d = self.dim;
        let bit = 1 << q;
        for r0 in (0..d).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..d {
                let a = self.data[r0 * d + c];
                let b = self.data[r1 * d + c];
                self.data[r0 * d + c] = u[0][0] * a + u[0][1] * b;
                self.data[r1 * d + c] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    /// Right-multiplies by `u†` acting on qubit `q`.
    fn apply_right_adjoint(&mut self, u: &Mat2, q: usize) {
        let d = self.dim;
        let bit = 1 << q;
        for r in 0..d {
            for c0 in (0..d).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let a = self.data[r * d + c0];
                let b = self.data[r * d + c1];
                self.data[r * d + c0] = a * u[0][0].conj() + b * u[0][1].conj();
                self.data[r * d + c1] = a * u[1][0].conj() + b * u[1][1].conj();
            }
        }
    }

    /// `ρ ↦ U ρ U†` for a single-qubit `U`.
    pub fn conjugate_1q(&mut self, u: &Mat2, q: usize) {
        self.apply_left(u, q);
        self.apply_right_adjoint(u, q);
    }

    /// `ρ ↦ CNOT ρ CNOT`.
    pub fn conjugate_cnot(&mut self, control: usize, target: usize) {
        let d = self.dim;
        let perm = |i: usize| {
            if i & (1 << control) != 0 {
                i ^ (1 << target)
            } else {
                i
            }
        };
        let old = self.data.clone();
        for r in 0..d {
            for c in 0..d {
                self.data[r * d + c] = old[perm(r) * d + perm(c)];
            }
        }
    }

    /// `ρ ↦ P ρ P†`.
    pub fn conjugate_pauli(&mut self, p: &PauliString) {
        for q in 0..p.num_qubits() {
            let f = p.get(q);
            if f != Pauli::I {
                self.conjugate_1q(&pauli_matrix_1q(f), q);
            }
        }
    }

    /// `ρ ↦ (1 - prob) ρ + prob P ρ P`.
    pub fn pauli_channel(&mut self, p: &PauliString, prob: f64) {
        let mut flipped = self.clone();
        flipped.conjugate_pauli(p);
        for (a, b) in self.data.iter_mut().zip(&flipped.data) {
            *a = *a * (1.0 - prob) + b * prob;
        }
    }
}

/// Full `2^n × 2^n` matrix of a signed Pauli string.
pub fn pauli_matrix(p: &PauliString) -> DenseMatrix {
    let dim = 1 << p.num_qubits();
    let mut m = DenseMatrix::identity(dim);
    for q in 0..p.num_qubits() {
        m.apply_left(&pauli_matrix_1q(p.get(q)), q);
    }
    m.scale(Complex64::new(p.sign() as f64, 0.0))
}

/// Full unitary of one Clifford gate on `n` qubits.
pub fn gate_matrix(gate: crate::pauli::CliffordGate, n: usize) -> DenseMatrix {
    use crate::pauli::CliffordGate;
    let dim = 1 << n;
    let mut m = DenseMatrix::identity(dim);
    match gate {
        CliffordGate::H(q) => m.apply_left(&hadamard(), q),
        CliffordGate::S(q) => m.apply_left(&phase_s(), q),
        CliffordGate::Cnot { control, target } => {
            let mut p = DenseMatrix::zeros(dim);
            for i in 0..dim {
                let j = if i & (1 << control) != 0 {
                    i ^ (1 << target)
                } else {
                    i
                };
                p.set(j, i, ONE);
            }
            m = p;
        }
    }
    m
}

fn check_dense(circuit: &LayeredCircuit, model: &NoiseModel) -> Result<usize> {
    let n = circuit.num_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    model.check_depth(circuit.depth())?;
    if model.num_qubits() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: model.num_qubits(),
        });
    }
    Ok(n)
}

/// Final density matrix of the noisy circuit on `|0…0⟩` with error
/// probabilities scaled by `gain`.
pub fn final_state(circuit: &LayeredCircuit, model: &NoiseModel, gain: f64) -> Result<DenseMatrix> {
    let n = check_dense(circuit, model)?;
    let mut rho = DenseMatrix::zeros(1 << n);
    rho.set(0, 0, ONE);
    for (i, layer) in circuit.layers().iter().enumerate() {
        for t in model.layer(i) {
            rho.pauli_channel(&t.pauli, gain * t.p());
        }
        for &(c, t) in &layer.cnots {
            rho.conjugate_cnot(c, t);
        }
        for (&q, g) in &layer.one_qubit {
            let u = match g {
                OneQubitGate::H => hadamard(),
                OneQubitGate::S => phase_s(),
            };
            rho.conjugate_1q(&u, q);
        }
    }
    Ok(rho)
}

/// `Tr(O ρ_final)` by dense simulation; `n <= 6`.
pub fn dense_oracle(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    gain: f64,
    observable: &PauliString,
) -> Result<f64> {
    circuit.check_size(observable)?;
    let rho = final_state(circuit, model, gain)?;
    Ok(pauli_matrix(observable).matmul(&rho).trace().re)
}

/// Computational-basis outcome probabilities of the noisy circuit.
pub fn outcome_distribution(circuit: &LayeredCircuit, model: &NoiseModel) -> Result<Vec<f64>> {
    let rho = final_state(circuit, model, 1.0)?;
    Ok((0..rho.dim()).map(|i| rho.get(i, i).re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseTerm;

    #[test]
    fn identity_circuit_matches_initial_state() {
        let c = LayeredCircuit::identity(3, 2);
        let m = NoiseModel::noiseless(3, 2);
        for (text, want) in [("+ZII", 1.0), ("-IZZ", -1.0), ("+XII", 0.0), ("+IYZ", 0.0)] {
            let o: PauliString = text.parse().unwrap();
            assert!((dense_oracle(&c, &m, 1.0, &o).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_gain_switches_noise_off() {
        let c = LayeredCircuit::identity(1, 1);
        let m = NoiseModel::new(
            1,
            vec![vec![NoiseTerm::from_probability("X".parse().unwrap(), 0.2).unwrap()]],
        )
        .unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert!((dense_oracle(&c, &m, 0.0, &z).unwrap() - 1.0).abs() < 1e-15);
        assert!((dense_oracle(&c, &m, 1.0, &z).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn s_conjugation_by_matrices() {
        // S† X S = -Y
        let s = gate_matrix(crate::pauli::CliffordGate::S(0), 1);
        let x = pauli_matrix(&"X".parse().unwrap());
        let got = s.adjoint().matmul(&x).matmul(&s);
        assert!(got.max_abs_diff(&pauli_matrix(&"-Y".parse().unwrap())) < 1e-15);
    }

    #[test]
    fn rejects_large_registers() {
        let c = LayeredCircuit::identity(7, 1);
        let m = NoiseModel::noiseless(7, 1);
        let o = PauliString::identity(7);
        assert!(matches!(
            dense_oracle(&c, &m, 1.0, &o),
            Err(Error::TooManyQubits { n: 7, .. })
        ));
    }
}
