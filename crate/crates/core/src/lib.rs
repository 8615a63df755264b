//! Scenario generation and cross-simulator reproduction analysis for a
//! pedestrian-detection driver-assistance function.
//!
//! The crate is `no_std` (with `alloc`) and contains only pure computation:
//!
//! * [`scene`]: the five-gene test-input space, the fixed straight-road scene
//!   and coordinate-frame translation between simulator backends.
//! * [`simulator`]: two deterministic kinematic backends (`alpha`, `beta`)
//!   that deliberately differ in integration, gait, sensing and frames, plus
//!   a lossy sample channel with repeat-and-mode mitigation.
//! * [`adas`]: the warning function under test (acute warning area + TTC).
//! * [`fitness`]: TTC, warning-area distance and end-to-end scenario
//!   evaluation into the three minimised objectives.
//! * [`search`]: NSGA-II and a random-search baseline.
//! * [`analysis`]: criticality oracles, hypervolume, Mann-Whitney U,
//!   CART diagnosis trees and the cross-simulator reproduction report.
//!
//! File formats, configuration parsing and the command-line front-end live
//! in the `xsim` companion crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adas;
pub mod analysis;
mod error;
pub mod fitness;
pub mod geometry;
pub mod scene;
pub mod search;
pub mod simulator;

pub use error::{Error, Result};

/// Random source used throughout the crate. ChaCha8 gives a stable stream for
/// a given seed regardless of platform.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the crate's random source from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}

/// Mixes a master seed with a stream index (run number, scenario number, ...)
/// so derived streams are independent and reproducible piecewise.
///
/// This is the SplitMix64 finaliser applied to `master + (index + 1) * gamma`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
