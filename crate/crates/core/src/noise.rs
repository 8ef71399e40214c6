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

//! Pauli-Lindblad noise: per-term rate/probability/normalisation algebra,
//! gain amplification, and sampling of Pauli events.

use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Error probability of the two-point channel generated by rate `lambda`:
/// `p = (1 - exp(-2 lambda)) / 2`.
pub fn p_from_lambda(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rate must be finite and non-negative, got {lambda}"
        )));
    }
    Ok(-(-2.0 * lambda).exp_m1() / 2.0)
}

/// Inverse of [`p_from_lambda`]; only defined on `0 <= p < 1/2`.
pub fn lambda_from_p(p: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::ProbabilityDomain { p });
    }
    Ok(-(-2.0 * p).ln_1p() / 2.0)
}

/// Quasi-probability normalisation `gamma = exp(2 lambda)`.
pub fn gamma_from_lambda(lambda: f64) -> Result<f64> {
    p_from_lambda(lambda)?;
    Ok((2.0 * lambda).exp())
}

/// One factor `(1 - p) rho + p P rho P` of a layer's noise channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTerm {
    pub pauli: PauliString,
    lambda: f64,
    p: f64,
    gamma: f64,
}

impl NoiseTerm {
    pub fn new(pauli: PauliString, lambda: f64) -> Result<Self> {
        let p = p_from_lambda(lambda)?;
        let gamma = gamma_from_lambda(lambda)?;
        Ok(NoiseTerm {
            pauli,
            lambda,
            p,
            gamma,
        })
    }

    pub fn from_probability(pauli: PauliString, p: f64) -> Result<Self> {
        Self::new(pauli, lambda_from_p(p)?)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Flat position of a term: layer `i`, index `j` within the layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId {
    pub layer: usize,
    pub index: usize,
}

/// Noise terms grouped by circuit layer. Layer `i`'s terms act just before
/// the ideal gates of layer `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    n: usize,
    layers: Vec<Vec<NoiseTerm>>,
    offsets: Vec<usize>,
}

impl NoiseModel {
    pub fn new(n: usize, layers: Vec<Vec<NoiseTerm>>) -> Result<Self> {
        for term in layers.iter().flatten() {
            if term.pauli.num_qubits() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: term.pauli.num_qubits(),
                });
            }
        }
        let mut offsets = Vec::with_capacity(layers.len() + 1);
        let mut total = 0;
        offsets.push(0);
        for layer in &layers {
            total += layer.len();
            offsets.push(total);
        }
        Ok(NoiseModel { n, layers, offsets })
    }

    /// `depth` layers without any terms.
    pub fn noiseless(n: usize, depth: usize) -> Self {
        Self::new(n, vec![Vec::new(); depth]).expect("empty layers are valid")
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<NoiseTerm>] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &[NoiseTerm] {
        &self.layers[i]
    }

    /// Total number of terms, the `dJ` of a uniform model.
    pub fn num_terms(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Terms per layer when every layer has the same count.
    pub fn terms_per_layer(&self) -> Option<usize> {
        let first = self.layers.first().map_or(0, Vec::len);
        self.layers
            .iter()
            .all(|l| l.len() == first)
            .then_some(first)
    }

    pub fn flat_index(&self, id: TermId) -> usize {
        self.offsets[id.layer] + id.index
    }

    /// Offset of layer `i` in flat term order.
    pub fn layer_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn term_id(&self, flat: usize) -> TermId {
        let layer = self.offsets.partition_point(|&o| o <= flat) - 1;
        TermId {
            layer,
            index: flat - self.offsets[layer],
        }
    }

    /// Terms in flat order with their ids.
    pub fn iter(&self) -> impl Iterator<Item = (TermId, &NoiseTerm)> + '_ {
        self.layers.iter().enumerate().flat_map(|(layer, terms)| {
            terms
                .iter()
                .enumerate()
                .map(move |(index, t)| (TermId { layer, index }, t))
        })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.iter().map(|(_, t)| t.p).collect()
    }

    pub fn total_lambda(&self) -> f64 {
        self.iter().map(|(_, t)| t.lambda).sum()
    }

    /// `ln Π γ` over all terms, i.e. `2 λ_total`.
    pub fn log_gamma_product(&self) -> f64 {
        2.0 * self.total_lambda()
    }

    pub fn max_p(&self) -> f64 {
        self.iter().map(|(_, t)| t.p).fold(0.0, f64::max)
    }

    /// Every error probability multiplied by `factor` (which may be below 1).
    pub fn scaled(&self, factor: f64) -> Result<NoiseModel> {
        if !factor.is_finite() || factor < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be finite and non-negative, got {factor}"
            )));
        }
        let mut layers = Vec::with_capacity(self.layers.len());
        for (i, terms) in self.layers.iter().enumerate() {
            let mut out = Vec::with_capacity(terms.len());
            for (j, t) in terms.iter().enumerate() {
                let p = factor * t.p;
                if p >= 0.5 {
                    return Err(Error::Amplification {
                        gain: factor,
                        layer: i,
                        index: j,
                        p: t.p,
                        reason: "scaled probability reaches 1/2",
                    });
                }
                out.push(NoiseTerm::from_probability(t.pauli.clone(), p)?);
            }
            layers.push(out);
        }
        NoiseModel::new(self.n, layers)
    }

    /// Amplifies every error probability by `gain >= 1`.
    ///
    /// Returns the amplified model together with the probability `q` of the
    /// extra Pauli that must be injected next to each physical term so that
    /// the composite flip probability `p + q - 2pq` equals `gain * p`.
    pub fn amplify(&self, gain: f64) -> Result<Amplified> {
        if !gain.is_finite() || gain < 1.0 {
            return Err(Error::Amplification {
                gain,
                layer: 0,
                index: 0,
                p: 0.0,
                reason: "gain must be at least 1",
            });
        }
        let model = self.scaled(gain)?;
        let injection = self
            .iter()
            .map(|(_, t)| (gain - 1.0) / (1.0 - 2.0 * t.p) * t.p)
            .collect();
        Ok(Amplified {
            gain,
            model,
            injection,
        })
    }

    pub fn check_depth(&self, circuit_depth: usize) -> Result<()> {
        if circuit_depth != self.depth() {
            return Err(Error::LayerMismatch {
                circuit: circuit_depth,
                noise: self.depth(),
            });
        }
        Ok(())
    }
}

/// Output of [`NoiseModel::amplify`].
#[derive(Debug, Clone)]
pub struct Amplified {
    pub gain: f64,
    pub model: NoiseModel,
    /// Injection probability per term, in flat order.
    pub injection: Vec<f64>,
}

impl Amplified {
    /// `δg = (g - 1) / (1 - 2p)`, the gain of the injected channel.
    pub fn delta_gain(&self, p: f64) -> f64 {
        (self.gain - 1.0) / (1.0 - 2.0 * p)
    }
}

/// Independent Bernoulli events over a fixed list of probabilities.
///
/// Sampling thins a Bernoulli(`p_max`) process: geometric skips between
/// candidate events, each accepted with probability `p_i / p_max`. The cost
/// is proportional to the expected number of candidates rather than to the
/// list length.
#[derive(Debug, Clone)]
pub struct EventSampler {
    probs: Vec<f64>,
    p_max: f64,
    log_miss: f64,
}

impl EventSampler {
    pub fn new(probs: Vec<f64>) -> Self {
        let p_max = probs.iter().copied().fold(0.0, f64::max);
        EventSampler {
            log_miss: (-p_max).ln_1p(),
            probs,
            p_max,
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Sorted indices of the events that fired.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut fired = Vec::new();
        self.sample_into(rng, &mut fired);
        fired
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, fired: &mut Vec<usize>) {
        fired.clear();
        if self.p_max <= 0.0 {
            return;
        }
        let len = self.probs.len();
        let mut i = 0usize;
        loop {
            if self.p_max < 1.0 {
                // 1 - u lies in (0, 1], so the log is finite.
                let u: f64 = 1.0 - rng.gen::<f64>();
                let skip = (u.ln() / self.log_miss).floor();
                if skip >= (len - i) as f64 {
                    return;
                }
                i += skip as usize;
            }
            if i >= len {
                return;
            }
            let accept = self.probs[i] / self.p_max;
            if accept >= 1.0 || rng.gen::<f64>() < accept {
                fired.push(i);
            }
            i += 1;
        }
    }
}

/// PEC sign vector `σ`, stored sparsely as the flat indices with `σ = -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PecSigns {
    len: usize,
    flipped: Vec<usize>,
}

impl PecSigns {
    pub fn new(len: usize, mut flipped: Vec<usize>) -> Self {
        flipped.sort_unstable();
        flipped.dedup();
        PecSigns { len, flipped }
    }

    pub fn all_positive(len: usize) -> Self {
        PecSigns {
            len,
            flipped: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Indices with `σ = -1`, ascending.
    pub fn flipped(&self) -> &[usize] {
        &self.flipped
    }

    pub fn sign(&self, flat: usize) -> i8 {
        if self.flipped.binary_search(&flat).is_ok() {
            -1
        } else {
            1
        }
    }

    pub fn to_dense(&self) -> Vec<i8> {
        let mut out = vec![1; self.len];
        for &i in &self.flipped {
            out[i] = -1;
        }
        out
    }
}

/// Draws `σ_{i,j} = -1` independently with probability `p_{i,j}`.
pub fn sample_pec_signs<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> PecSigns {
    let sampler = EventSampler::new(model.probabilities());
    PecSigns {
        len: sampler.len(),
        flipped: sampler.sample(rng),
    }
}
