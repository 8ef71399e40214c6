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

use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Variants split into two families: input/configuration problems (bad
/// sizes, malformed text, invalid parameters) and numeric domain problems
/// (a channel leaving its invertible regime, an amplification that cannot be
/// realised). Callers that need to tell them apart use [`Error::is_domain`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("cannot parse Pauli string {text:?}: {reason}")]
    PauliParse { text: String, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("layer mismatch: circuit has {circuit} layers, noise model has {noise}")]
    LayerMismatch { circuit: usize, noise: usize },
    #[error("probability {p} is outside [0, 1/2)")]
    ProbabilityDomain { p: f64 },
    #[error("amplification by {gain} invalid for term ({layer}, {index}) with p = {p}: {reason}")]
    Amplification {
        gain: f64,
        layer: usize,
        index: usize,
        p: f64,
        reason: &'static str,
    },
    #[error("duplicate gain factor {0}")]
    DuplicateGain(String),
    #[error("too many qubits for dense simulation: {n} > {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("shot count must be positive")]
    ZeroShots,
}

impl Error {
    /// True for numeric/domain failures, false for malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::ProbabilityDomain { .. } | Error::Amplification { .. } | Error::DuplicateGain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
