//! Exact computation and construction checking for permutation pattern waves.
//!
//! A `pi`-wave is an increasing integer sequence whose consecutive differences
//! are ordered like `pi`. This crate decides wave membership, searches sets
//! for waves, computes `g(pi, n)` (largest wave-free subset of `[n]`) and
//! `P(pi, r)` (least `M` forcing a monochromatic wave in every `r`-coloring
//! of `[M]`) exactly at small sizes, runs the lower-bound coloring
//! constructions and the wave-extraction procedures, and classifies patterns
//! by their known polylogarithmic exponents.

pub mod constructions;
pub mod perm;
pub mod solvers;
pub mod store;
pub mod waves;

pub use perm::{classify, normalize, Classification, PermError, Permutation};
pub use solvers::{
    exact_g, exact_p, recursive_upper_bound_g, Coloring, ColoringResult, DensityResult,
    SearchLimits, Status,
};
pub use waves::{find_wave, is_pi_wave, is_weak_pi_wave, IntSet, Mode, WaveWitness};
