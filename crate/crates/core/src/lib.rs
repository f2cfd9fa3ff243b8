//! Private simultaneous quantum messages (PSQM).
//!
//! Exact, distribution-level simulation of the GHZ-based `Sum2` and `GEQ`
//! protocols and the entanglement-assisted Deutsch-Jozsa protocol, together
//! with machine checks of correctness, perfect privacy and the purity-based
//! lower-bound machinery, and brute-force rectangle/clique computations on
//! small function tables.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command-line front end live in the `psqm` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
pub mod bounds;
pub mod gf2m;
pub mod protocols;
pub mod qsim;
pub mod verify;

pub use bits::Bits;

/// Seeded generator used for every sampled sweep and random table.
pub type SeededRng = rand_chacha::ChaCha8Rng;

/// Builds the crate's generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
