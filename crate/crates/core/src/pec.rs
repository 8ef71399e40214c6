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

//! Standard and light-cone PEC estimators evaluated on one shared shot
//! stream, with exact variance formulas.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::LayeredCircuit;
use crate::engine::{ideal_expectation, ShotSimulator};
use crate::error::{Error, Result};
use crate::lightcone::{classify_terms, compute_lightcone, ConeTerms};
use crate::noise::{NoiseModel, PecSigns};
use crate::pauli::PauliString;
use crate::rng;

pub const DEFAULT_EPSILON: f64 = 0.01;

/// Shots per parallel work item.
const CHUNK: usize = 4096;

/// Streaming mean/variance (Welford), mergeable across workers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningStats {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        RunningStats { count, mean, m2 }
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// `Π γσ` over all terms.
pub fn pec_weight(sigma: &PecSigns, model: &NoiseModel) -> f64 {
    let sign = if sigma.flipped().len() % 2 == 1 { -1.0 } else { 1.0 };
    sign * model.log_gamma_product().exp()
}

/// `Π γσ` over the terms inside the light cone.
pub fn lopec_weight(sigma: &PecSigns, model: &NoiseModel, cone: &ConeTerms) -> f64 {
    let flips = sigma
        .flipped()
        .iter()
        .filter(|&&k| cone.contains(k))
        .count();
    let sign = if flips % 2 == 1 { -1.0 } else { 1.0 };
    sign * log_gamma_in_cone(model, cone).exp()
}

fn log_gamma_in_cone(model: &NoiseModel, cone: &ConeTerms) -> f64 {
    model
        .iter()
        .enumerate()
        .filter(|(k, _)| cone.contains(*k))
        .map(|(_, (_, t))| 2.0 * t.lambda())
        .sum()
}

/// Exact estimator variances `Π γ² - a₀²` (all terms, then in-cone terms).
///
/// Exact because `σ² = 1` and `o_z² = 1` make the second moment
/// deterministic.
pub fn exact_variances(model: &NoiseModel, cone: &ConeTerms, ideal: f64) -> (f64, f64) {
    let a2 = ideal * ideal;
    let standard = (2.0 * model.log_gamma_product()).exp() - a2;
    let local = (2.0 * log_gamma_in_cone(model, cone)).exp() - a2;
    (standard, local)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PecConfig {
    pub shots: usize,
    pub batches: usize,
    pub seed: u64,
    pub epsilon: f64,
}

impl Default for PecConfig {
    fn default() -> Self {
        PecConfig {
            shots: 100_000,
            batches: 10,
            seed: 0,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchMean {
    pub standard: f64,
    pub local: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PecReport {
    pub ideal: f64,
    pub mean_standard: f64,
    pub mean_local: f64,
    pub var_standard_empirical: f64,
    pub var_local_empirical: f64,
    pub var_standard_exact: f64,
    pub var_local_exact: f64,
    /// Exact variance over `ε²`.
    pub overhead_standard: f64,
    pub overhead_local: f64,
    pub m: usize,
    pub epsilon: f64,
    pub terms_total: usize,
    pub terms_in_cone: usize,
    pub batch_means: Vec<BatchMean>,
}

impl PecReport {
    pub fn standard_error_standard(&self) -> f64 {
        (self.var_standard_exact / self.m as f64).sqrt()
    }

    pub fn standard_error_local(&self) -> f64 {
        (self.var_local_exact / self.m as f64).sqrt()
    }
}

/// Exact quantities for a PEC run that need no sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PecAnalysis {
    pub ideal: f64,
    pub var_standard: f64,
    pub var_local: f64,
    pub overhead_standard: f64,
    pub overhead_local: f64,
    pub terms_total: usize,
    pub terms_in_cone: usize,
}

pub fn analyze_pec(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    observable: &PauliString,
    epsilon: f64,
) -> Result<PecAnalysis> {
    check_epsilon(epsilon)?;
    let cone = compute_lightcone(circuit, observable)?;
    let terms = classify_terms(&cone, model)?;
    let ideal = ideal_expectation(circuit, observable)?;
    let (var_standard, var_local) = exact_variances(model, &terms, ideal);
    let eps2 = epsilon * epsilon;
    Ok(PecAnalysis {
        ideal,
        var_standard,
        var_local,
        overhead_standard: var_standard / eps2,
        overhead_local: var_local / eps2,
        terms_total: model.num_terms(),
        terms_in_cone: terms.count(),
    })
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "precision must be positive, got {epsilon}"
        )));
    }
    Ok(())
}

/// Runs the PEC experiment and evaluates both estimators on every shot.
///
/// Shot `k` draws from stream `k` of `config.seed`; shots are split into
/// `config.batches` contiguous batches whose means are reported. Results do
/// not depend on the number of worker threads.
pub fn run_pec(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    observable: &PauliString,
    config: &PecConfig,
) -> Result<PecReport> {
    if config.shots == 0 {
        return Err(Error::ZeroShots);
    }
    if config.batches == 0 || config.batches > config.shots {
        return Err(Error::InvalidParameter(format!(
            "batch count must be in 1..={}, got {}",
            config.shots, config.batches
        )));
    }
    if !observable.is_diagonal() {
        return Err(Error::InvalidParameter(format!(
            "PEC observable {observable} must be Z-type"
        )));
    }
    let analysis = analyze_pec(circuit, model, observable, config.epsilon)?;
    let sim = ShotSimulator::new(circuit, model)?;
    let cone = classify_terms(&compute_lightcone(circuit, observable)?, model)?;
    let gamma_all = model.log_gamma_product().exp();
    let gamma_cone = log_gamma_in_cone(model, &cone).exp();

    // Work items: (batch, start, end), chunked inside each batch.
    let m = config.shots;
    let b = config.batches;
    let mut items = Vec::new();
    for batch in 0..b {
        let (start, end) = (batch * m / b, (batch + 1) * m / b);
        let mut s = start;
        while s < end {
            let e = (s + CHUNK).min(end);
            items.push((batch, s, e));
            s = e;
        }
    }
    let partials: Vec<(usize, RunningStats, RunningStats)> = items
        .par_iter()
        .map(|&(batch, start, end)| {
            let mut standard = RunningStats::default();
            let mut local = RunningStats::default();
            for shot in start..end {
                let mut r = rng::stream(config.seed, shot as u64);
                let outcome = sim.run_pec_shot(&mut r);
                let o = ShotSimulator::eigenvalue_unchecked(observable, outcome.bits()) as f64;
                let flips = outcome.sigma.flipped();
                let in_cone = flips.iter().filter(|&&k| cone.contains(k)).count();
                let s_all = if flips.len() % 2 == 1 { -1.0 } else { 1.0 };
                let s_cone = if in_cone % 2 == 1 { -1.0 } else { 1.0 };
                standard.push(o * s_all * gamma_all);
                local.push(o * s_cone * gamma_cone);
            }
            (batch, standard, local)
        })
        .collect();

    let mut per_batch = vec![(RunningStats::default(), RunningStats::default()); b];
    for (batch, s, l) in &partials {
        let slot = &mut per_batch[*batch];
        slot.0 = slot.0.merge(s);
        slot.1 = slot.1.merge(l);
    }
    let (total_s, total_l) = per_batch.iter().fold(
        (RunningStats::default(), RunningStats::default()),
        |(a, c), (s, l)| (a.merge(s), c.merge(l)),
    );

    Ok(PecReport {
        ideal: analysis.ideal,
        mean_standard: total_s.mean,
        mean_local: total_l.mean,
        var_standard_empirical: total_s.variance(),
        var_local_empirical: total_l.variance(),
        var_standard_exact: analysis.var_standard,
        var_local_exact: analysis.var_local,
        overhead_standard: analysis.overhead_standard,
        overhead_local: analysis.overhead_local,
        m,
        epsilon: config.epsilon,
        terms_total: analysis.terms_total,
        terms_in_cone: analysis.terms_in_cone,
        batch_means: per_batch
            .iter()
            .map(|(s, l)| BatchMean {
                standard: s.mean,
                local: l.mean,
            })
            .collect(),
    })
}
