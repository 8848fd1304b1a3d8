//! Shared fixtures for the engine benchmarks.

use mufix_core::{random_monotone, LatticeSpec, VectorFn};

/// `n` copies of the `k`-point chain.
pub fn chain_domain(k: usize, n: usize) -> Vec<LatticeSpec> {
    vec![LatticeSpec::chain(k).expect("k >= 1"); n]
}

/// A seeded monotone table function on `chain(k)^n`.
pub fn seeded_fn(k: usize, n: usize, seed: u64) -> VectorFn {
    random_monotone(&chain_domain(k, n), seed).expect("desk-scale carrier")
}
