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

//! Observable light cones of layered Clifford circuits.
//!
//! For observable `O` and layer `i`, the cone set `μ_i` is the exact support
//! of `U_i† ⋯ U_{d-1}† (O)`, the observable propagated back to just before
//! the ideal gates of layer `i`. Noise term `(i, j)` is inside the cone iff
//! its Pauli touches `μ_i`.

use serde::Serialize;

use crate::circuit::LayeredCircuit;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::pauli::PauliString;

/// One weighted Pauli term of an observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub pauli: PauliString,
    pub coefficient: f64,
}

impl Observable {
    pub fn new(pauli: PauliString) -> Self {
        Observable {
            pauli,
            coefficient: 1.0,
        }
    }

    /// Parses a weighted sum such as `Z1 + 0.5*Z1Z10 - Z4`.
    ///
    /// Each term is a Pauli in either accepted text form, optionally
    /// prefixed by `coefficient*`.
    pub fn parse_sum(n: usize, text: &str) -> Result<Vec<Observable>> {
        let mut terms = Vec::new();
        let mut sign = 1.0;
        let mut current = String::new();
        let flush = |current: &mut String, sign: f64, terms: &mut Vec<Observable>| -> Result<()> {
            let body = current.trim();
            if body.is_empty() {
                return Err(Error::PauliParse {
                    text: text.to_string(),
                    reason: "empty term".into(),
                });
            }
            let (coefficient, pauli) = match body.split_once('*') {
                Some((c, p)) => {
                    let c: f64 = c.trim().parse().map_err(|_| Error::PauliParse {
                        text: text.to_string(),
                        reason: format!("bad coefficient {c:?}"),
                    })?;
                    (c, p.trim())
                }
                None => (1.0, body),
            };
            terms.push(Observable {
                pauli: PauliString::parse_observable(n, pauli)?,
                coefficient: sign * coefficient,
            });
            current.clear();
            Ok(())
        };
        for (k, c) in text.trim().chars().enumerate() {
            match c {
                '+' | '-'
                    if k > 0
                        && !current.trim().is_empty()
                        && !current.trim_end().ends_with(['*', 'e', 'E']) =>
                {
                    flush(&mut current, sign, &mut terms)?;
                    sign = if c == '-' { -1.0 } else { 1.0 };
                }
                '+' if current.trim().is_empty() => sign = 1.0,
                '-' if current.trim().is_empty() => sign = -sign,
                _ => current.push(c),
            }
        }
        flush(&mut current, sign, &mut terms)?;
        Ok(terms)
    }
}

/// Per-layer cone sets, indexed by layer in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct LightCone {
    propagated: Vec<PauliString>,
    masks: Vec<Vec<u64>>,
}

impl LightCone {
    pub fn depth(&self) -> usize {
        self.propagated.len()
    }

    /// Sorted qubits of `μ_i`.
    pub fn mu(&self, layer: usize) -> Vec<usize> {
        self.propagated[layer].support()
    }

    pub fn mu_sets(&self) -> Vec<Vec<usize>> {
        (0..self.depth()).map(|i| self.mu(i)).collect()
    }

    pub fn mu_mask(&self, layer: usize) -> &[u64] {
        &self.masks[layer]
    }

    /// Observable propagated back to just before layer `layer`'s gates.
    pub fn propagated(&self, layer: usize) -> &PauliString {
        &self.propagated[layer]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.propagated.iter().map(PauliString::weight).collect()
    }

    pub fn summary(&self) -> LightConeSummary {
        LightConeSummary {
            mu: self.mu_sets(),
            sizes: self.sizes(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LightConeSummary {
    pub mu: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
}

pub fn compute_lightcone(circuit: &LayeredCircuit, observable: &PauliString) -> Result<LightCone> {
    circuit.check_size(observable)?;
    let d = circuit.depth();
    let mut propagated = vec![PauliString::identity(circuit.num_qubits()); d];
    let mut current = observable.clone();
    for (i, layer) in circuit.layers().iter().enumerate().rev() {
        layer.conjugate_backward(&mut current);
        propagated[i] = current.clone();
    }
    let masks = propagated.iter().map(PauliString::support_mask).collect();
    Ok(LightCone { propagated, masks })
}

/// Flat-indexed membership of noise terms in a light cone (the set `μ`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTerms {
    inside: Vec<bool>,
}

impl ConeTerms {
    pub fn from_flags(inside: Vec<bool>) -> Self {
        ConeTerms { inside }
    }

    /// Every term inside (what the standard estimator implicitly assumes).
    pub fn all(len: usize) -> Self {
        ConeTerms {
            inside: vec![true; len],
        }
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.inside[flat]
    }

    pub fn flags(&self) -> &[bool] {
        &self.inside
    }

    pub fn len(&self) -> usize {
        self.inside.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inside.is_empty()
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.inside
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Probabilities with out-of-cone entries zeroed.
    pub fn mask_probabilities(&self, probs: &[f64]) -> Vec<f64> {
        probs
            .iter()
            .zip(&self.inside)
            .map(|(&p, &inside)| if inside { p } else { 0.0 })
            .collect()
    }
}

pub fn classify_terms(cone: &LightCone, model: &NoiseModel) -> Result<ConeTerms> {
    if cone.depth() != model.depth() {
        return Err(Error::LayerMismatch {
            circuit: cone.depth(),
            noise: model.depth(),
        });
    }
    let inside = model
        .iter()
        .map(|(id, t)| t.pauli.overlaps_mask(cone.mu_mask(id.layer)))
        .collect();
    Ok(ConeTerms { inside })
}
