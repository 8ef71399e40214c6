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

//! Aaronson-Gottesman stabilizer tableau and a sampler for the
//! computational-basis outcome distribution of a stabilizer state.

use rand::Rng;

use crate::circuit::LayeredCircuit;
use crate::pauli::{mask_to_indices, CliffordGate, Pauli, PauliString};

/// Destabilizer rows `0..n`, stabilizer rows `n..2n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl Tableau {
    /// The state `|0...0⟩`: destabilizers `X_q`, stabilizers `Z_q`.
    pub fn zero_state(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliString::single(n, q, Pauli::X).expect("in range"));
        }
        for q in 0..n {
            rows.push(PauliString::single(n, q, Pauli::Z).expect("in range"));
        }
        Tableau { n, rows }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.n..]
    }

    /// Applies a gate that has already been validated against `n`.
    pub fn apply(&mut self, gate: CliffordGate) {
        for row in &mut self.rows {
            row.apply_unchecked(gate, true);
        }
    }

    pub fn apply_circuit(&mut self, circuit: &LayeredCircuit) {
        for layer in circuit.layers() {
            for gate in layer.gates() {
                self.apply(gate);
            }
        }
    }

    fn x_bit(&self, row: usize, q: usize) -> bool {
        (self.rows[row].x_words()[q / 64] >> (q % 64)) & 1 == 1
    }

    /// Row `h` becomes `row_i * row_h`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let product = self.rows[i]
            .multiply(&self.rows[h])
            .expect("rows share a size");
        // Destabilizer phases are irrelevant and may pick up a factor of i.
        self.rows[h] = product.pauli;
    }

    /// Measures qubit `q` in the Z basis. `choose` supplies the outcome
    /// when it is random.
    pub fn measure_with(&mut self, q: usize, choose: impl FnOnce() -> bool) -> bool {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&r| self.x_bit(r, q)) {
            for r in 0..2 * n {
                if r != p && self.x_bit(r, q) {
                    self.rowsum(r, p);
                }
            }
            let outcome = choose();
            self.rows[p - n] = self.rows[p].clone();
            self.rows[p] = PauliString::single(n, q, Pauli::Z)
                .expect("in range")
                .with_sign(outcome);
            outcome
        } else {
            let mut scratch = PauliString::identity(n);
            for r in 0..n {
                if self.x_bit(r, q) {
                    scratch = self.rows[r + n]
                        .multiply(&scratch)
                        .expect("rows share a size")
                        .pauli;
                }
            }
            scratch.is_negative()
        }
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> bool {
        self.measure_with(q, || rng.gen())
    }

    /// Measures every qubit in order, destroying the state.
    pub fn measure_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<bool> {
        (0..self.n).map(|q| self.measure(q, rng)).collect()
    }
}

/// Uniform sampler over the computational-basis support of a stabilizer
/// state, which is the affine space `z0 ⊕ span{x-parts of stabilizers}`.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    n: usize,
    offset: Vec<u64>,
    basis: Vec<Vec<u64>>,
}

impl OutcomeSampler {
    pub fn new(tableau: &Tableau) -> Self {
        let n = tableau.num_qubits();
        let mut scratch = tableau.clone();
        let mut offset = vec![0u64; n.div_ceil(64)];
        for q in 0..n {
            if scratch.measure_with(q, || false) {
                offset[q / 64] |= 1 << (q % 64);
            }
        }
        // Row-reduce the x-parts to an independent basis.
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for row in tableau.stabilizers() {
            let mut v = row.x_words().to_vec();
            for (b, &pivot) in basis.iter().zip(&pivots) {
                if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                    for (w, bw) in v.iter_mut().zip(b) {
                        *w ^= bw;
                    }
                }
            }
            if let Some(&pivot) = mask_to_indices(&v).first() {
                basis.push(v);
                pivots.push(pivot);
            }
        }
        OutcomeSampler { n, offset, basis }
    }

    /// Sampler for the output of a noiseless circuit applied to `|0...0⟩`.
    pub fn for_circuit(circuit: &LayeredCircuit) -> Self {
        let mut t = Tableau::zero_state(circuit.num_qubits());
        t.apply_circuit(circuit);
        Self::new(&t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Number of uniformly random outcome bits.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u64]) {
        out.copy_from_slice(&self.offset);
        let mut bits = 0u64;
        for (k, v) in self.basis.iter().enumerate() {
            if k % 64 == 0 {
                bits = rng.gen();
            }
            if (bits >> (k % 64)) & 1 == 1 {
                for (w, vw) in out.iter_mut().zip(v) {
                    *w ^= vw;
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        let mut out = vec![0; self.offset.len()];
        self.sample_into(rng, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn zero_state_measures_zero() {
        let mut t = Tableau::zero_state(3);
        let mut r = rng::stream(0, 0);
        assert_eq!(t.measure_all(&mut r), vec![false; 3]);
    }

    #[test]
    fn bell_pair_outcomes_are_correlated() {
        let mut r = rng::stream(1, 0);
        let mut ones = 0;
        for _ in 0..200 {
            let mut t = Tableau::zero_state(2);
            t.apply(CliffordGate::H(0));
            t.apply(CliffordGate::Cnot {
                control: 0,
                target: 1,
            });
            let m = t.measure_all(&mut r);
            assert_eq!(m[0], m[1]);
            ones += m[0] as usize;
        }
        assert!(ones > 60 && ones < 140);
    }

    #[test]
    fn deterministic_phase_is_tracked() {
        // H S S H |0> = H Z H |0> = X |0> = |1>.
        let mut t = Tableau::zero_state(1);
        for g in [CliffordGate::H(0), CliffordGate::S(0), CliffordGate::S(0), CliffordGate::H(0)] {
            t.apply(g);
        }
        assert!(t.measure_with(0, || panic!("outcome should be deterministic")));
    }

    #[test]
    fn sampler_support_of_ghz_state() {
        let mut t = Tableau::zero_state(3);
        t.apply(CliffordGate::H(0));
        t.apply(CliffordGate::Cnot { control: 0, target: 1 });
        t.apply(CliffordGate::Cnot { control: 1, target: 2 });
        let s = OutcomeSampler::new(&t);
        assert_eq!(s.rank(), 1);
        let mut r = rng::stream(2, 0);
        for _ in 0..50 {
            let z = s.sample(&mut r)[0];
            assert!(z == 0 || z == 0b111);
        }
    }
}
