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

//! Noisy Clifford circuit evaluation: sampled shots and the exact
//! Heisenberg-picture expectation.
//!
//! Shots use a Pauli frame. The noiseless output distribution is sampled
//! from the stabilizer tableau once per circuit; each shot then tracks the
//! product of injected and physical Pauli errors forward through the ideal
//! layers and flips the outcome bits covered by the frame's X part.

use rand::Rng;

use crate::circuit::LayeredCircuit;
use crate::error::{Error, Result};
use crate::noise::{EventSampler, NoiseModel, PecSigns};
use crate::pauli::PauliString;
use crate::tableau::OutcomeSampler;

/// One computational-basis sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotOutcome {
    n: usize,
    z: Vec<u64>,
    pub sigma: PecSigns,
}

impl ShotOutcome {
    pub fn bits(&self) -> &[u64] {
        &self.z
    }

    pub fn bit(&self, q: usize) -> bool {
        (self.z[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.n).map(|q| if self.bit(q) { '1' } else { '0' }).collect()
    }

    /// `o_z`: the eigenvalue of a diagonal Pauli observable on this outcome.
    pub fn eigenvalue(&self, observable: &PauliString) -> Result<i8> {
        check_measurable(observable, self.n)?;
        Ok(diagonal_eigenvalue(observable, &self.z))
    }
}

fn check_measurable(observable: &PauliString, n: usize) -> Result<()> {
    if observable.num_qubits() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: observable.num_qubits(),
        });
    }
    if !observable.is_diagonal() {
        return Err(Error::InvalidParameter(format!(
            "observable {observable} is not Z-type and cannot be read from computational-basis samples"
        )));
    }
    Ok(())
}

#[inline]
fn diagonal_eigenvalue(observable: &PauliString, z: &[u64]) -> i8 {
    let parity = observable
        .z_words()
        .iter()
        .zip(z)
        .map(|(m, b)| (m & b).count_ones())
        .sum::<u32>()
        % 2;
    let value = if parity == 1 { -1 } else { 1 };
    value * observable.sign()
}

/// Precompiled shot sampler for one circuit and noise model.
#[derive(Debug, Clone)]
pub struct ShotSimulator {
    circuit: LayeredCircuit,
    model: NoiseModel,
    ideal: OutcomeSampler,
    physical: EventSampler,
    terms: Vec<PauliString>,
    layer_of: Vec<usize>,
}

impl ShotSimulator {
    pub fn new(circuit: &LayeredCircuit, model: &NoiseModel) -> Result<Self> {
        model.check_depth(circuit.depth())?;
        if model.num_qubits() != circuit.num_qubits() {
            return Err(Error::SizeMismatch {
                left: circuit.num_qubits(),
                right: model.num_qubits(),
            });
        }
        Ok(ShotSimulator {
            circuit: circuit.clone(),
            model: model.clone(),
            ideal: OutcomeSampler::for_circuit(circuit),
            physical: EventSampler::new(model.probabilities()),
            terms: model.iter().map(|(_, t)| t.pauli.clone()).collect(),
            layer_of: model.iter().map(|(id, _)| id.layer).collect(),
        })
    }

    pub fn circuit(&self) -> &LayeredCircuit {
        &self.circuit
    }

    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    /// One noisy shot with extra Paulis injected before the given layers.
    ///
    /// Per layer: injections, then physical noise drawn with probabilities
    /// `p_{i,j}`, then the ideal gates; all qubits are measured at the end.
    pub fn run_shot<R: Rng + ?Sized>(
        &self,
        injections: &[(usize, PauliString)],
        rng: &mut R,
    ) -> Result<ShotOutcome> {
        let n = self.num_qubits();
        for (layer, p) in injections {
            if *layer >= self.circuit.depth() {
                return Err(Error::InvalidParameter(format!(
                    "injection on layer {layer} of a depth-{} circuit",
                    self.circuit.depth()
                )));
            }
            if p.num_qubits() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: p.num_qubits(),
                });
            }
        }
        let physical = self.physical.sample(rng);
        let z = self.propagate(&physical, &[], injections, rng);
        Ok(ShotOutcome {
            n,
            z,
            sigma: PecSigns::all_positive(self.terms.len()),
        })
    }

    /// One shot of the PEC circuit: `σ` is drawn, the Paulis with `σ = -1`
    /// are injected, and the noisy circuit is sampled.
    pub fn run_pec_shot<R: Rng + ?Sized>(&self, rng: &mut R) -> ShotOutcome {
        let flipped = self.physical.sample(rng);
        let physical = self.physical.sample(rng);
        let z = self.propagate(&physical, &flipped, &[], rng);
        ShotOutcome {
            n: self.num_qubits(),
            z,
            sigma: PecSigns::new(self.terms.len(), flipped),
        }
    }

    /// One shot where term `k` is additionally injected with probability
    /// `extra.probs[k]` (noise amplification).
    pub fn run_injected_shot<R: Rng + ?Sized>(&self, extra: &EventSampler, rng: &mut R) -> Vec<u64> {
        let injected = extra.sample(rng);
        let physical = self.physical.sample(rng);
        self.propagate(&physical, &injected, &[], rng)
    }

    /// Eigenvalue of a diagonal observable on a raw outcome from this simulator.
    pub fn eigenvalue(&self, observable: &PauliString, z: &[u64]) -> Result<i8> {
        check_measurable(observable, self.num_qubits())?;
        Ok(diagonal_eigenvalue(observable, z))
    }

    pub(crate) fn eigenvalue_unchecked(observable: &PauliString, z: &[u64]) -> i8 {
        diagonal_eigenvalue(observable, z)
    }

    /// Both event lists hold sorted flat term indices.
    fn propagate<R: Rng + ?Sized>(
        &self,
        events_a: &[usize],
        events_b: &[usize],
        injections: &[(usize, PauliString)],
        rng: &mut R,
    ) -> Vec<u64> {
        let n = self.num_qubits();
        let mut z = self.ideal.sample(rng);
        if events_a.is_empty() && events_b.is_empty() && injections.is_empty() {
            return z;
        }
        let mut frame = PauliString::identity(n);
        let mut active = false;
        let (mut ia, mut ib) = (0, 0);
        for (i, layer) in self.circuit.layers().iter().enumerate() {
            for (l, p) in injections {
                if *l == i {
                    frame.mul_assign_unsigned(p);
                    active = true;
                }
            }
            while ia < events_a.len() && self.layer_of[events_a[ia]] == i {
                frame.mul_assign_unsigned(&self.terms[events_a[ia]]);
                active = true;
                ia += 1;
            }
            while ib < events_b.len() && self.layer_of[events_b[ib]] == i {
                frame.mul_assign_unsigned(&self.terms[events_b[ib]]);
                active = true;
                ib += 1;
            }
            if active {
                layer.conjugate_forward(&mut frame);
            }
        }
        for (w, fx) in z.iter_mut().zip(frame.x_words()) {
            *w ^= fx;
        }
        z
    }
}

/// Convenience wrapper around [`ShotSimulator::run_shot`].
pub fn run_shot<R: Rng + ?Sized>(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    injections: &[(usize, PauliString)],
    rng: &mut R,
) -> Result<ShotOutcome> {
    ShotSimulator::new(circuit, model)?.run_shot(injections, rng)
}

/// `f(g)` for one observable as a polynomial in the gain:
/// `ideal · Π_{k ∈ A} (1 - 2 g p_k)`, where `A` holds the terms that
/// anticommute with the backward-propagated observable at their layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationPolynomial {
    /// `Tr(ρ U†(O))`, one of `-1, 0, 1`.
    pub ideal: f64,
    /// Flat indices of the anticommuting terms.
    pub anticommuting: Vec<usize>,
    /// Their error probabilities.
    pub probs: Vec<f64>,
}

impl ExpectationPolynomial {
    pub fn new(circuit: &LayeredCircuit, model: &NoiseModel, observable: &PauliString) -> Result<Self> {
        circuit.check_size(observable)?;
        model.check_depth(circuit.depth())?;
        if model.num_qubits() != circuit.num_qubits() {
            return Err(Error::SizeMismatch {
                left: circuit.num_qubits(),
                right: model.num_qubits(),
            });
        }
        let mut current = observable.clone();
        let mut anticommuting = Vec::new();
        let mut probs = Vec::new();
        for (i, layer) in circuit.layers().iter().enumerate().rev() {
            layer.conjugate_backward(&mut current);
            let offset = model.layer_offset(i);
            for (j, t) in model.layer(i).iter().enumerate() {
                if t.pauli.anticommutes_unchecked(&current) {
                    anticommuting.push(offset + j);
                    probs.push(t.p());
                }
            }
        }
        let ideal = if current.is_diagonal() {
            current.sign() as f64
        } else {
            0.0
        };
        Ok(ExpectationPolynomial {
            ideal,
            anticommuting,
            probs,
        })
    }

    pub fn eval(&self, gain: f64) -> f64 {
        if self.ideal == 0.0 {
            return 0.0;
        }
        self.probs
            .iter()
            .fold(self.ideal, |acc, &p| acc * (1.0 - 2.0 * gain * p))
    }
}

/// `Tr(ρ Ũ_g†(O))` for `ρ = |0…0⟩⟨0…0|` with every error probability scaled
/// by `gain`. `gain = 0` gives the noiseless value; the result is a
/// polynomial in `gain`, so any finite gain is accepted.
pub fn exact_expectation(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    gain: f64,
    observable: &PauliString,
) -> Result<f64> {
    Ok(ExpectationPolynomial::new(circuit, model, observable)?.eval(gain))
}

/// Noiseless expectation `Tr(ρ U†(O))`.
pub fn ideal_expectation(circuit: &LayeredCircuit, observable: &PauliString) -> Result<f64> {
    let p = circuit.conjugate_backward(observable)?;
    Ok(if p.is_diagonal() { p.sign() as f64 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseTerm;
    use crate::pauli::Pauli;
    use crate::rng;

    fn single(n: usize, q: usize, f: Pauli) -> PauliString {
        PauliString::single(n, q, f).unwrap()
    }

    #[test]
    fn noiseless_identity_circuit_gives_zeros() {
        let c = LayeredCircuit::identity(5, 3);
        let m = NoiseModel::noiseless(5, 3);
        let mut r = rng::stream(0, 0);
        for _ in 0..20 {
            let shot = run_shot(&c, &m, &[], &mut r).unwrap();
            assert_eq!(shot.to_bitstring(), "00000");
        }
    }

    #[test]
    fn deterministic_injection_flips_the_bit() {
        let c = LayeredCircuit::identity(3, 2);
        let m = NoiseModel::noiseless(3, 2);
        let sim = ShotSimulator::new(&c, &m).unwrap();
        let mut r = rng::stream(0, 1);
        let shot = sim.run_shot(&[(1, single(3, 0, Pauli::X))], &mut r).unwrap();
        assert!(shot.bit(0));
        assert_eq!(shot.eigenvalue(&single(3, 0, Pauli::Z)).unwrap(), -1);
        assert!(sim.run_shot(&[(2, single(3, 0, Pauli::X))], &mut r).is_err());
        assert!(shot.eigenvalue(&single(3, 0, Pauli::X)).is_err());
    }

    #[test]
    fn exact_expectation_examples() {
        let c = LayeredCircuit::identity(2, 1);
        let z0 = single(2, 0, Pauli::Z);
        let clean = NoiseModel::noiseless(2, 1);
        assert_eq!(exact_expectation(&c, &clean, 1.0, &z0).unwrap(), 1.0);

        let p = 0.07;
        let x_noise = NoiseModel::new(
            2,
            vec![vec![NoiseTerm::from_probability(single(2, 0, Pauli::X), p).unwrap()]],
        )
        .unwrap();
        let f = exact_expectation(&c, &x_noise, 1.0, &z0).unwrap();
        assert!((f - (1.0 - 2.0 * p)).abs() < 1e-15);

        let z_noise = NoiseModel::new(
            2,
            vec![vec![NoiseTerm::from_probability(z0.clone(), p).unwrap()]],
        )
        .unwrap();
        assert_eq!(exact_expectation(&c, &z_noise, 1.0, &z0).unwrap(), 1.0);
        assert_eq!(exact_expectation(&c, &x_noise, 0.0, &z0).unwrap(), 1.0);
        assert!(exact_expectation(&c, &NoiseModel::noiseless(2, 2), 1.0, &z0).is_err());
    }
}
