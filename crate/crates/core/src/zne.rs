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

//! Zero-noise extrapolation: Richardson coefficients, exact bias, and the
//! remainder bounds (standard, light-cone and compact).
//!
//! The remainder bounds are sums over `k > K` of
//! `2^k |Σ_ℓ β_ℓ g_ℓ^k| e_k(p)`, with `e_k` the elementary symmetric
//! polynomials of the error probabilities. Because `Σ_ℓ β_ℓ g_ℓ^k` has sign
//! `(-1)^K` for every `k > K`, the absolute value can be pulled out and the
//! sum over `k` collapses to `Σ_ℓ β_ℓ T(2 g_ℓ)`, where
//! `T(c) = Π(1 + c p) - Σ_{k<=K} c^k e_k` is the tail of the generating
//! function. [`generating_tail`] evaluates `T` with a recurrence whose terms
//! are all non-negative, so no cancellation occurs.

use std::fmt::Debug;

use num_traits::Num;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::LayeredCircuit;
use crate::engine::{ExpectationPolynomial, ShotSimulator};
use crate::error::{Error, Result};
use crate::lightcone::{classify_terms, compute_lightcone};
use crate::noise::{EventSampler, NoiseModel};
use crate::pauli::PauliString;
use crate::rng;

/// Gain factors used in the benchmark sweeps.
pub const DEFAULT_GAINS: [f64; 3] = [1.0, 2.0, 4.0];

/// `β_ℓ = Π_{m≠ℓ} g_m / (g_m - g_ℓ)`.
///
/// Generic over the number type so the coefficients can be checked in
/// exact rational arithmetic.
pub fn richardson_coefficients<T>(gains: &[T]) -> Result<Vec<T>>
where
    T: Num + Copy + Debug,
{
    for (a, ga) in gains.iter().enumerate() {
        if gains[..a].contains(ga) {
            return Err(Error::DuplicateGain(format!("{ga:?}")));
        }
    }
    Ok((0..gains.len())
        .map(|l| {
            gains
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != l)
                .fold(T::one(), |acc, (_, &gm)| acc * gm / (gm - gains[l]))
        })
        .collect())
}

pub fn extrapolate(f_values: &[f64], beta: &[f64]) -> f64 {
    f_values.iter().zip(beta).map(|(f, b)| f * b).sum()
}

/// `Σ_ℓ β_ℓ g_ℓ^k`.
pub fn gain_moment(beta: &[f64], gains: &[f64], k: i32) -> f64 {
    beta.iter().zip(gains).map(|(b, g)| b * g.powi(k)).sum()
}

/// `e_0 .. e_K` of the given probabilities.
pub fn elementary_symmetric_sums(probs: &[f64], order: usize) -> Vec<f64> {
    let mut e = vec![0.0; order + 1];
    e[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        for k in (1..=order.min(i + 1)).rev() {
            e[k] += p * e[k - 1];
        }
    }
    e
}

/// `Σ_{k > order} c^k e_k(probs)`.
pub fn generating_tail(probs: &[f64], c: f64, order: usize) -> f64 {
    // Track e_0..e_order and the tail; adding p maps the tail T to
    // (1 + c p) T + c^(order+1) p e_order.
    let mut e = vec![0.0; order + 1];
    e[0] = 1.0;
    let c_top = c.powi(order as i32 + 1);
    let mut tail = 0.0;
    for &p in probs {
        tail = (1.0 + c * p) * tail + c_top * p * e[order];
        for k in (1..=order).rev() {
            e[k] += p * e[k - 1];
        }
    }
    tail
}

fn check_gains(gains: &[f64]) -> Result<()> {
    if gains.is_empty() {
        return Err(Error::InvalidParameter("at least one gain is required".into()));
    }
    if gains[0] != 1.0 {
        return Err(Error::InvalidParameter(format!(
            "the first gain must be 1 (the bare circuit), got {}",
            gains[0]
        )));
    }
    for w in gains.windows(2) {
        if w[1] == w[0] {
            return Err(Error::DuplicateGain(format!("{}", w[0])));
        }
        if !w[1].is_finite() || w[1] <= w[0] {
            return Err(Error::InvalidParameter(format!(
                "gains must be strictly increasing, got {gains:?}"
            )));
        }
    }
    Ok(())
}

/// Remainder bound `Σ_{k>K} 2^k |Σ_ℓ β_ℓ g_ℓ^k| e_k(probs)` with
/// `K = gains.len() - 1`.
pub fn remainder_bound(probs: &[f64], gains: &[f64]) -> Result<f64> {
    check_gains(gains)?;
    let order = gains.len() - 1;
    let beta = richardson_coefficients(gains)?;
    let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
    let total: f64 = beta
        .iter()
        .zip(gains)
        .map(|(b, g)| b * generating_tail(probs, 2.0 * g, order))
        .sum();
    Ok((sign * total).max(0.0))
}

/// Bound on the extrapolation bias using every noise term.
pub fn bound_standard(model: &NoiseModel, gains: &[f64]) -> Result<f64> {
    remainder_bound(&model.probabilities(), gains)
}

/// Bound using only terms inside the observable's light cone.
pub fn bound_local(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    observable: &PauliString,
    gains: &[f64],
) -> Result<f64> {
    let cone = classify_terms(&compute_lightcone(circuit, observable)?, model)?;
    remainder_bound(&cone.mask_probabilities(&model.probabilities()), gains)
}

/// `Σ_{k>K} Γ_k C(N, k) (2 p_max)^k` with `N` the number of terms, summed in
/// log space. Returns `+∞` when the series overflows.
pub fn compact_bound(probs: &[f64], gains: &[f64]) -> Result<f64> {
    check_gains(gains)?;
    let order = gains.len() - 1;
    let beta = richardson_coefficients(gains)?;
    let n = probs.len();
    let p = probs.iter().copied().fold(0.0, f64::max);
    if p == 0.0 || n <= order {
        return Ok(0.0);
    }
    let g_max = gains[gains.len() - 1];
    let ln_two_p = (2.0 * p).ln();
    let mut ln_binom = 0.0;
    let mut ln_total = f64::NEG_INFINITY;
    for k in 1..=n {
        ln_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        if k <= order {
            continue;
        }
        let scaled: f64 = beta
            .iter()
            .zip(gains)
            .map(|(b, g)| b * (g / g_max).powi(k as i32))
            .sum();
        if scaled == 0.0 {
            continue;
        }
        let ln_term = k as f64 * g_max.ln() + scaled.abs().ln() + ln_binom + k as f64 * ln_two_p;
        ln_total = log_add_exp(ln_total, ln_term);
    }
    Ok(ln_total.exp())
}

pub fn bound_compact(model: &NoiseModel, gains: &[f64]) -> Result<f64> {
    compact_bound(&model.probabilities(), gains)
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Shot-noise bound `sqrt(Σ β_ℓ² / m_ℓ)`.
pub fn stat_error(beta: &[f64], shots: &[usize]) -> Result<f64> {
    if beta.len() != shots.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients but {} shot counts",
            beta.len(),
            shots.len()
        )));
    }
    if shots.contains(&0) {
        return Err(Error::ZeroShots);
    }
    Ok(beta
        .iter()
        .zip(shots)
        .map(|(b, &m)| b * b / m as f64)
        .sum::<f64>()
        .sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZneConfig {
    pub gains: Vec<f64>,
    /// Shots per gain. Empty, or all zero, selects the exact oracle.
    #[serde(default)]
    pub shots: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl ZneConfig {
    pub fn oracle(gains: Vec<f64>) -> Self {
        ZneConfig {
            gains,
            shots: Vec::new(),
            seed: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.gains.len().saturating_sub(1)
    }

    pub fn is_oracle(&self) -> bool {
        self.shots.iter().all(|&m| m == 0)
    }

    pub fn validate(&self) -> Result<()> {
        check_gains(&self.gains)?;
        if !self.is_oracle() {
            if self.shots.len() != self.gains.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} gains but {} shot counts",
                    self.gains.len(),
                    self.shots.len()
                )));
            }
            if self.shots.contains(&0) {
                return Err(Error::ZeroShots);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub gains: Vec<f64>,
    pub order: usize,
    pub beta: Vec<f64>,
    /// `f(g_ℓ)`: exact in oracle mode, shot averages otherwise.
    pub f_values: Vec<f64>,
    pub f_zne: f64,
    /// Noiseless value `f(0)`.
    pub ideal: f64,
    /// Exact remainder `Σ β_ℓ f(g_ℓ) - f(0)` from the oracle, in either mode.
    pub exact_bias: f64,
    pub bound_standard: f64,
    pub bound_local: f64,
    pub bound_compact: f64,
    /// `sqrt(Σ β²/m)`; zero in oracle mode.
    pub stat_error: f64,
    /// `stat_error + bound_local`.
    pub total_error_bound: f64,
    pub symmetric_sums: Vec<f64>,
    pub symmetric_sums_local: Vec<f64>,
    pub terms_total: usize,
    pub terms_in_cone: usize,
    pub shots: Vec<usize>,
}

/// Runs ZNE on one instance and evaluates every bound.
pub fn zne_run(
    circuit: &LayeredCircuit,
    model: &NoiseModel,
    observable: &PauliString,
    config: &ZneConfig,
) -> Result<BoundReport> {
    config.validate()?;
    let gains = &config.gains;
    let order = config.order();
    let beta = richardson_coefficients(gains)?;
    let amplified = gains
        .iter()
        .map(|&g| model.amplify(g))
        .collect::<Result<Vec<_>>>()?;

    let poly = ExpectationPolynomial::new(circuit, model, observable)?;
    let ideal = poly.eval(0.0);
    let exact_values: Vec<f64> = gains.iter().map(|&g| poly.eval(g)).collect();
    let exact_bias = extrapolate(&exact_values, &beta) - ideal;

    let (f_values, stat) = if config.is_oracle() {
        (exact_values, 0.0)
    } else {
        if !observable.is_diagonal() {
            return Err(Error::InvalidParameter(format!(
                "sampled ZNE needs a Z-type observable, got {observable}"
            )));
        }
        let sim = ShotSimulator::new(circuit, model)?;
        let values = amplified
            .iter()
            .enumerate()
            .map(|(l, amp)| {
                let extra = EventSampler::new(amp.injection.clone());
                let seed = rng::derive_seed(config.seed, l as u64);
                sample_mean(&sim, &extra, observable, config.shots[l], seed)
            })
            .collect();
        (values, stat_error(&beta, &config.shots)?)
    };
    let f_zne = extrapolate(&f_values, &beta);

    let probs = model.probabilities();
    let cone = classify_terms(&compute_lightcone(circuit, observable)?, model)?;
    let local_probs = cone.mask_probabilities(&probs);
    let bound_local = remainder_bound(&local_probs, gains)?;
    Ok(BoundReport {
        gains: gains.clone(),
        order,
        beta,
        f_values,
        f_zne,
        ideal,
        exact_bias,
        bound_standard: remainder_bound(&probs, gains)?,
        bound_local,
        bound_compact: compact_bound(&probs, gains)?,
        stat_error: stat,
        total_error_bound: stat + bound_local,
        symmetric_sums: elementary_symmetric_sums(&probs, order),
        symmetric_sums_local: elementary_symmetric_sums(&local_probs, order),
        terms_total: model.num_terms(),
        terms_in_cone: cone.count(),
        shots: config.shots.clone(),
    })
}

fn sample_mean(
    sim: &ShotSimulator,
    extra: &EventSampler,
    observable: &PauliString,
    shots: usize,
    seed: u64,
) -> f64 {
    let sum: i64 = (0..shots)
        .into_par_iter()
        .map(|k| {
            let mut r = rng::stream(seed, k as u64);
            let z = sim.run_injected_shot(extra, &mut r);
            ShotSimulator::eigenvalue_unchecked(observable, &z) as i64
        })
        .sum();
    sum as f64 / shots as f64
}
