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

//! Seeded random streams.
//!
//! Every random draw in the toolkit comes from ChaCha20 (`rand_chacha`),
//! keyed by `seed_from_u64(seed)` and selected by a 64-bit stream number.
//! Streams are independent, so shot `k` of a run always sees stream `k`
//! regardless of how shots are split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

/// Stream used when generating random instances.
pub const INSTANCE_STREAM: u64 = u64::MAX;

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a sub-seed, e.g. one per gain factor of a ZNE run.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // SplitMix64 finaliser over the combined value.
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
