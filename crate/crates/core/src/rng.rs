//! Seed derivation.
//!
//! All randomness descends from one master seed. A substream is a ChaCha8
//! generator seeded with the parent seed and switched to stream
//! `(tag << 48) | index`, so every (tag, index) pair is independent and a
//! partial re-run reproduces exactly the same draws.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    /// Bootstrap and stump draws of tree `i`.
    Tree = 1,
    /// Master seed of the forest for sweep point `i`.
    Alpha = 2,
    /// Master seed of repeat `i`.
    Repeat = 3,
    /// Train/validation/test shuffles.
    Split = 4,
    /// Random oracle instances.
    Instance = 5,
    /// Synthetic data generators.
    Synthetic = 6,
}

pub fn stream(seed: u64, tag: Stream, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((tag as u64) << 48) | (index & 0xffff_ffff_ffff));
    rng
}

/// Child seed for nested derivations (repeat -> alpha -> tree).
pub fn derive_seed(seed: u64, tag: Stream, index: u64) -> u64 {
    stream(seed, tag, index).next_u64()
}
