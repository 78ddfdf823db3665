//! Exact-arithmetic toolkit for Hodge-special cubic fourfolds and
//! Gushel-Mukai fourfolds.
//!
//! Everything is computed over a prime field (default `F_65521`) with
//! deterministic seeded randomness, so results are exact and reruns are
//! reproducible. The building blocks are a Groebner engine
//! ([`groebner`]), projective varieties and rational maps with cached
//! invariants ([`varieties`]), the Grassmannian `G(1,4)` with its Schubert
//! cycles ([`grassmann`]), and on top of those the fourfold constructions,
//! discriminant and parameter counts, congruence detection, and the
//! associated-K3 arithmetic ([`fourfolds`], [`nlarith`]).

pub mod grassmann;
pub mod groebner;
pub mod planemodel;
pub mod polycore;
pub mod ratmaps;
pub mod rng;
pub mod varieties;

pub use polycore::{PrimeField, Poly, PolyRing};

/// Placeholder entry point; replaced by the real command-line interface.
pub fn cli_main() {
    eprintln!("command-line interface not wired up yet");
    std::process::exit(4);
}
