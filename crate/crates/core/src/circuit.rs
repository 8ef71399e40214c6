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

//! Layered Clifford circuits.
//!
//! A layer applies its CNOTs first and then its single-qubit gates. Layers
//! are stored in application order, so `layers[0]` acts on the input state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{CliffordGate, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OneQubitGate {
    H,
    S,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateLayer {
    /// `(control, target)` pairs with pairwise disjoint supports.
    pub cnots: Vec<(usize, usize)>,
    #[serde(default)]
    pub one_qubit: BTreeMap<usize, OneQubitGate>,
}

impl GateLayer {
    pub fn new(cnots: Vec<(usize, usize)>) -> Self {
        GateLayer {
            cnots,
            one_qubit: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cnots.is_empty() && self.one_qubit.is_empty()
    }

    /// Gates in application order.
    pub fn gates(&self) -> impl Iterator<Item = CliffordGate> + '_ {
        self.cnots
            .iter()
            .map(|&(control, target)| CliffordGate::Cnot { control, target })
            .chain(self.one_qubit.iter().map(|(&q, g)| match g {
                OneQubitGate::H => CliffordGate::H(q),
                OneQubitGate::S => CliffordGate::S(q),
            }))
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut used = vec![false; n];
        for &(control, target) in &self.cnots {
            CliffordGate::Cnot { control, target }.validate(n)?;
            for q in [control, target] {
                if std::mem::replace(&mut used[q], true) {
                    return Err(Error::InvalidGate(format!(
                        "qubit {q} used by two CNOTs in one layer"
                    )));
                }
            }
        }
        for &q in self.one_qubit.keys() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        Ok(())
    }

    /// `U† P U` for this layer's unitary `U`.
    pub(crate) fn conjugate_backward(&self, p: &mut PauliString) {
        // U = (one-qubit) ∘ (CNOTs), so U† P U undoes the later gates first.
        for (&q, g) in &self.one_qubit {
            let gate = match g {
                OneQubitGate::H => CliffordGate::H(q),
                OneQubitGate::S => CliffordGate::S(q),
            };
            p.apply_unchecked(gate, false);
        }
        for &(control, target) in &self.cnots {
            p.apply_unchecked(CliffordGate::Cnot { control, target }, false);
        }
    }

    /// `U P U†` for this layer's unitary `U`.
    pub(crate) fn conjugate_forward(&self, p: &mut PauliString) {
        for gate in self.gates() {
            p.apply_unchecked(gate, true);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit", into = "RawCircuit")]
pub struct LayeredCircuit {
    n: usize,
    layers: Vec<GateLayer>,
}

#[derive(Serialize, Deserialize)]
struct RawCircuit {
    n: usize,
    layers: Vec<GateLayer>,
}

impl TryFrom<RawCircuit> for LayeredCircuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        LayeredCircuit::new(raw.n, raw.layers)
    }
}

impl From<LayeredCircuit> for RawCircuit {
    fn from(c: LayeredCircuit) -> Self {
        RawCircuit {
            n: c.n,
            layers: c.layers,
        }
    }
}

impl LayeredCircuit {
    pub fn new(n: usize, layers: Vec<GateLayer>) -> Result<Self> {
        for layer in &layers {
            layer.validate(n)?;
        }
        Ok(LayeredCircuit { n, layers })
    }

    /// `depth` layers with no gates.
    pub fn identity(n: usize, depth: usize) -> Self {
        LayeredCircuit {
            n,
            layers: vec![GateLayer::default(); depth],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[GateLayer] {
        &self.layers
    }

    pub fn cnot_count(&self) -> usize {
        self.layers.iter().map(|l| l.cnots.len()).sum()
    }

    /// Heisenberg propagation of `p` through the whole circuit: `U† P U`.
    pub fn conjugate_backward(&self, p: &PauliString) -> Result<PauliString> {
        self.check_size(p)?;
        let mut out = p.clone();
        for layer in self.layers.iter().rev() {
            layer.conjugate_backward(&mut out);
        }
        Ok(out)
    }

    pub(crate) fn check_size(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: p.num_qubits(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_overlapping_cnots() {
        let err = LayeredCircuit::new(3, vec![GateLayer::new(vec![(0, 1), (1, 2)])]);
        assert!(matches!(err, Err(Error::InvalidGate(_))));
        assert!(LayeredCircuit::new(2, vec![GateLayer::new(vec![(0, 2)])]).is_err());
        assert!(LayeredCircuit::new(2, vec![GateLayer::new(vec![(1, 1)])]).is_err());
    }

    #[test]
    fn backward_conjugation_orders_gates() {
        // Layer: CNOT(0,1) then H on qubit 1. U† Z1 U = CNOT (H Z1 H) CNOT = CNOT X1 CNOT = X1.
        let mut layer = GateLayer::new(vec![(0, 1)]);
        layer.one_qubit.insert(1, OneQubitGate::H);
        let c = LayeredCircuit::new(2, vec![layer]).unwrap();
        let z1: PauliString = "IZ".parse().unwrap();
        assert_eq!(c.conjugate_backward(&z1).unwrap().to_string(), "+IX");
        // U† X1 U = CNOT Z1 CNOT = Z0 Z1.
        let x1: PauliString = "IX".parse().unwrap();
        assert_eq!(c.conjugate_backward(&x1).unwrap().to_string(), "+ZZ");
    }

    #[test]
    fn json_validates_on_load() {
        let bad = r#"{"n":2,"layers":[{"cnots":[[0,5]]}]}"#;
        assert!(serde_json::from_str::<LayeredCircuit>(bad).is_err());
        let good = r#"{"n":2,"layers":[{"cnots":[[0,1]],"one_qubit":{"1":"S"}}]}"#;
        let c: LayeredCircuit = serde_json::from_str(good).unwrap();
        assert_eq!(c.layers()[0].one_qubit[&1], OneQubitGate::S);
    }
}
