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

//! Random benchmark instances on the heavy-hex lattice and their JSON form.
//!
//! # Generation procedure
//!
//! All draws come from [`rng::stream`]`(seed, INSTANCE_STREAM)`. For each
//! layer `i = 0..d`, in order:
//!
//! 1. CNOTs are preset `i mod 3` of [`heavy_hex_presets`].
//! 2. `J = terms_per_qubit * n` noise terms are drawn. For each term, every
//!    qubit is occupied independently with probability `ρ` and, if occupied,
//!    gets X, Y or Z uniformly. An all-identity draw is discarded and
//!    redrawn. `ρ` is chosen so that the weight conditioned on being
//!    non-identity has mean `mean_weight`. The error probability is uniform
//!    on `[0, p_max)` and the stored rate is its exact inverse.
//! 3. If `(i + 1)` is a multiple of `one_qubit_period`, every qubit gets H or
//!    S with equal probability, applied after the layer's CNOTs.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{GateLayer, LayeredCircuit, OneQubitGate};
use crate::error::{Error, Result};
use crate::noise::{lambda_from_p, NoiseModel, NoiseTerm};
use crate::pauli::{Pauli, PauliString};
use crate::rng;
use crate::topology::heavy_hex_presets;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    /// `J / n`.
    pub terms_per_qubit: usize,
    pub p_max: f64,
    pub mean_weight: f64,
    /// One random H/S layer after every this many CNOT layers; 0 disables them.
    pub one_qubit_period: usize,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            terms_per_qubit: 10,
            p_max: 8e-4,
            mean_weight: 2.0,
            one_qubit_period: 3,
        }
    }
}

impl InstanceParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.p_max) {
            return Err(Error::InvalidParameter(format!(
                "p_max must lie in [0, 1/2), got {}",
                self.p_max
            )));
        }
        if !self.mean_weight.is_finite() || self.mean_weight < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "mean Pauli weight must be at least 1, got {}",
                self.mean_weight
            )));
        }
        Ok(())
    }
}

/// Per-qubit occupancy giving mean weight `target` among non-identity draws.
pub fn occupancy_for_mean_weight(n: usize, target: f64) -> f64 {
    let nf = n as f64;
    if target >= nf {
        return 1.0;
    }
    let mean = |rho: f64| nf * rho / -(nf * (-rho).ln_1p()).exp_m1();
    let (mut lo, mut hi) = (1e-12, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A circuit with its noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub seed: u64,
    pub circuit: LayeredCircuit,
    pub noise: NoiseModel,
}

impl Instance {
    pub fn new(seed: u64, circuit: LayeredCircuit, noise: NoiseModel) -> Result<Self> {
        noise.check_depth(circuit.depth())?;
        if noise.num_qubits() != circuit.num_qubits() {
            return Err(Error::SizeMismatch {
                left: circuit.num_qubits(),
                right: noise.num_qubits(),
            });
        }
        Ok(Instance {
            seed,
            circuit,
            noise,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    pub fn depth(&self) -> usize {
        self.circuit.depth()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceDoc::from(self)).expect("instance serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("instance document: {e}")))?;
        doc.try_into()
    }
}

/// Builds a random heavy-hex instance with `depth` CNOT layers.
pub fn generate_instance(n: usize, depth: usize, seed: u64, params: &InstanceParams) -> Result<Instance> {
    params.validate()?;
    let presets = heavy_hex_presets(n)?;
    let mut rng = rng::stream(seed, rng::INSTANCE_STREAM);
    let rho = occupancy_for_mean_weight(n, params.mean_weight);
    let terms = params.terms_per_qubit * n;

    let mut layers = Vec::with_capacity(depth);
    let mut noise = Vec::with_capacity(depth);
    for i in 0..depth {
        let mut layer_noise = Vec::with_capacity(terms);
        for _ in 0..terms {
            let pauli = random_sparse_pauli(n, rho, &mut rng);
            let p = rng.gen::<f64>() * params.p_max;
            layer_noise.push(NoiseTerm::new(pauli, lambda_from_p(p)?)?);
        }
        noise.push(layer_noise);

        let mut layer = GateLayer::new(presets[i % 3].clone());
        if params.one_qubit_period > 0 && (i + 1) % params.one_qubit_period == 0 {
            layer.one_qubit = (0..n)
                .map(|q| {
                    let g = if rng.gen::<bool>() {
                        OneQubitGate::H
                    } else {
                        OneQubitGate::S
                    };
                    (q, g)
                })
                .collect::<BTreeMap<_, _>>();
        }
        layers.push(layer);
    }
    Instance::new(
        seed,
        LayeredCircuit::new(n, layers)?,
        NoiseModel::new(n, noise)?,
    )
}

fn random_sparse_pauli<R: Rng>(n: usize, rho: f64, rng: &mut R) -> PauliString {
    loop {
        let mut p = PauliString::identity(n);
        for q in 0..n {
            if rng.gen::<f64>() < rho {
                let f = match rng.gen_range(0..3) {
                    0 => Pauli::X,
                    1 => Pauli::Y,
                    _ => Pauli::Z,
                };
                p.set(q, f).expect("index in range");
            }
        }
        if !p.is_identity() {
            return p;
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceDoc {
    n: usize,
    d: usize,
    seed: u64,
    layers: Vec<GateLayer>,
    noise: Vec<NoiseDoc>,
}

#[derive(Serialize, Deserialize)]
struct NoiseDoc {
    layer: usize,
    pauli: PauliString,
    lambda: f64,
}

impl From<&Instance> for InstanceDoc {
    fn from(inst: &Instance) -> Self {
        InstanceDoc {
            n: inst.num_qubits(),
            d: inst.depth(),
            seed: inst.seed,
            layers: inst.circuit.layers().to_vec(),
            noise: inst
                .noise
                .iter()
                .map(|(id, t)| NoiseDoc {
                    layer: id.layer,
                    pauli: t.pauli.clone(),
                    lambda: t.lambda(),
                })
                .collect(),
        }
    }
}

impl TryFrom<InstanceDoc> for Instance {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        if doc.layers.len() != doc.d {
            return Err(Error::LayerMismatch {
                circuit: doc.layers.len(),
                noise: doc.d,
            });
        }
        let mut grouped: Vec<Vec<NoiseTerm>> = vec![Vec::new(); doc.d];
        for t in doc.noise {
            if t.layer >= doc.d {
                return Err(Error::InvalidParameter(format!(
                    "noise term on layer {} but d = {}",
                    t.layer, doc.d
                )));
            }
            grouped[t.layer].push(NoiseTerm::new(t.pauli, t.lambda)?);
        }
        Instance::new(
            doc.seed,
            LayeredCircuit::new(doc.n, doc.layers)?,
            NoiseModel::new(doc.n, grouped)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupancy_hits_target_mean() {
        for n in [3usize, 10, 65] {
            let rho = occupancy_for_mean_weight(n, 2.0);
            let nf = n as f64;
            let mean = nf * rho / (1.0 - (1.0 - rho).powi(n as i32));
            assert!((mean - 2.0).abs() < 1e-9, "n = {n}");
        }
        assert_eq!(occupancy_for_mean_weight(1, 2.0), 1.0);
        assert_eq!(occupancy_for_mean_weight(2, 2.0), 1.0);
    }

    #[test]
    fn empty_depth() {
        let inst = generate_instance(7, 0, 1, &InstanceParams::default()).unwrap();
        assert_eq!(inst.depth(), 0);
        assert_eq!(inst.noise.num_terms(), 0);
    }

    #[test]
    fn bad_params() {
        for p_max in [0.5, -1e-3, f64::NAN] {
            let params = InstanceParams {
                p_max,
                ..InstanceParams::default()
            };
            assert!(generate_instance(5, 2, 0, &params).is_err());
        }
        assert!(generate_instance(66, 2, 0, &InstanceParams::default()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let inst = generate_instance(10, 4, 42, &InstanceParams::default()).unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_inconsistent_documents() {
        let text = r#"{"n":2,"d":1,"seed":0,"layers":[],"noise":[]}"#;
        assert!(Instance::from_json(text).is_err());
        let text = r#"{"n":2,"d":1,"seed":0,"layers":[{"cnots":[]}],
            "noise":[{"layer":3,"pauli":"+XX","lambda":0.1}]}"#;
        assert!(Instance::from_json(text).is_err());
        let text = r#"{"n":2,"d":1,"seed":0,"layers":[{"cnots":[]}],
            "noise":[{"layer":0,"pauli":"+XXX","lambda":0.1}]}"#;
        assert!(Instance::from_json(text).is_err());
    }
}
