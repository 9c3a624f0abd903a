//! Effort and reproducibility knobs shared by the expensive operations.

use crate::rng::DEFAULT_SEED;

/// Tunable limits for randomized and potentially long-running subroutines.
///
/// Every limit has a deterministic failure mode: exceeding it produces an
/// explicit error or an `undetermined` outcome, never a wrong answer.
#[derive(Debug, Clone)]
pub struct CoreConfig {
    /// Seed for equal-degree splitting, Pollard rho and conjugacy search.
    pub seed: u64,
    /// Pollard rho iterations per factor before giving up.
    pub rho_max_iters: u64,
    /// Node budget for the isometry backtracking search.
    pub isometry_node_cap: u64,
    /// Largest prime scanned when searching for a completely split prime
    /// during the conjugacy lifting phase.
    pub conjugacy_prime_bound: u64,
    /// Bound on the p-adic precision (in bits of `p^k`) for conjugacy lifting.
    pub conjugacy_max_bits: u64,
    /// Primes below this bound are used for negative conjugacy certificates.
    pub certificate_prime_bound: u64,
}

impl Default for CoreConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            rho_max_iters: 100_000_000,
            isometry_node_cap: 10_000_000,
            conjugacy_prime_bound: 1_000_000,
            conjugacy_max_bits: 20_000,
            certificate_prime_bound: 10_000,
        }
    }
}

impl CoreConfig {
    /// Scale the effort-related caps by `factor` (seed is left alone).
    pub fn with_effort(mut self, factor: f64) -> Self {
        let scale = |v: u64| -> u64 { ((v as f64) * factor).max(1.0) as u64 };
        self.rho_max_iters = scale(self.rho_max_iters);
        self.isometry_node_cap = scale(self.isometry_node_cap);
        self.conjugacy_max_bits = scale(self.conjugacy_max_bits);
        self
    }
}
