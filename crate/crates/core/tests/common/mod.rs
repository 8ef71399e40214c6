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

//! Random small instances shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lcem::{GateLayer, LayeredCircuit, NoiseModel, NoiseTerm, OneQubitGate, Pauli, PauliString};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)])
            .unwrap();
    }
    if rng.gen_bool(0.5) {
        p.negate();
    }
    p
}

pub fn random_non_identity<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    loop {
        let p = random_pauli(rng, n);
        if !p.is_identity() {
            return p.with_sign(false);
        }
    }
}

pub fn random_diagonal<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    loop {
        let mut p = PauliString::identity(n);
        for q in 0..n {
            if rng.gen_bool(0.5) {
                p.set(q, Pauli::Z).unwrap();
            }
        }
        if !p.is_identity() {
            return p;
        }
    }
}

/// Random CNOT matching with random orientation, plus a random sprinkling
/// of H and S gates.
pub fn random_layer<R: Rng>(rng: &mut R, n: usize) -> GateLayer {
    let mut qubits: Vec<usize> = (0..n).collect();
    qubits.shuffle(rng);
    let pairs = rng.gen_range(0..=n / 2);
    let cnots = qubits
        .chunks_exact(2)
        .take(pairs)
        .map(|c| (c[0], c[1]))
        .collect();
    let mut one_qubit = BTreeMap::new();
    for q in 0..n {
        match rng.gen_range(0..4) {
            0 => {
                one_qubit.insert(q, OneQubitGate::H);
            }
            1 => {
                one_qubit.insert(q, OneQubitGate::S);
            }
            _ => {}
        }
    }
    GateLayer { cnots, one_qubit }
}

pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, depth: usize) -> LayeredCircuit {
    let layers = (0..depth).map(|_| random_layer(rng, n)).collect();
    LayeredCircuit::new(n, layers).unwrap()
}

pub fn random_model<R: Rng>(
    rng: &mut R,
    n: usize,
    depth: usize,
    terms_per_layer: usize,
    p_max: f64,
) -> NoiseModel {
    let layers = (0..depth)
        .map(|_| {
            (0..terms_per_layer)
                .map(|_| {
                    let p = rng.gen_range(0.0..p_max);
                    NoiseTerm::from_probability(random_non_identity(rng, n), p).unwrap()
                })
                .collect()
        })
        .collect();
    NoiseModel::new(n, layers).unwrap()
}

pub struct Small {
    pub circuit: LayeredCircuit,
    pub model: NoiseModel,
}

/// `n` in `1..=max_n`, depth in `1..=max_d`, up to `3n` terms per layer with
/// `p < 0.2`.
pub fn random_small<R: Rng>(rng: &mut R, max_n: usize, max_d: usize) -> Small {
    let n = rng.gen_range(1..=max_n);
    let depth = rng.gen_range(1..=max_d);
    let terms = rng.gen_range(0..=3 * n);
    Small {
        circuit: random_circuit(rng, n, depth),
        model: random_model(rng, n, depth, terms, 0.2),
    }
}
