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

//! Light-cone error mitigation for noisy Clifford circuits.
//!
//! The crate models layered Clifford circuits under sparse Pauli-Lindblad
//! noise and provides two mitigation estimators on top of a stabilizer
//! simulator: probabilistic error cancellation restricted to the light cone
//! of an observable, and zero-noise extrapolation with computable bias
//! bounds. A dense density-matrix simulator for a handful of qubits serves
//! as a cross-check.

pub mod circuit;
pub mod dense;
pub mod engine;
pub mod error;
pub mod instance;
pub mod lightcone;
pub mod noise;
pub mod pauli;
pub mod pec;
pub mod rng;
pub mod tableau;
pub mod topology;
pub mod zne;

pub use circuit::{GateLayer, LayeredCircuit, OneQubitGate};
pub use engine::{exact_expectation, ideal_expectation, ExpectationPolynomial, ShotOutcome, ShotSimulator};
pub use error::{Error, Result};
pub use instance::{generate_instance, Instance, InstanceParams};
pub use lightcone::{classify_terms, compute_lightcone, ConeTerms, LightCone, Observable};
pub use noise::{EventSampler, NoiseModel, NoiseTerm, PecSigns};
pub use pauli::{CliffordGate, Pauli, PauliString};
pub use pec::{analyze_pec, run_pec, PecConfig, PecReport};
pub use topology::Topology;
pub use zne::{zne_run, BoundReport, ZneConfig};

/// Version string embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
