use crate::exact::DEFAULT_RHO_BUDGET;

/// Budgets and the seed shared by every randomized or potentially expensive step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Seed for Cantor-Zassenhaus splitting and extension-field searches.
    pub seed: u64,
    /// Pollard rho iterations per cofactor.
    pub rho_budget: u64,
    /// Subsets tried during Zassenhaus recombination before giving up.
    pub subset_budget: u64,
    /// Largest extension degree built for explicit orbit construction.
    pub ext_degree_budget: u32,
    /// Largest prime `l` for which psi_l / delta_l are factored over Q.
    pub exact_l_max: u64,
    /// How many good primes the isogeny shortcut tries before falling back to exact work.
    pub reduction_primes: usize,
    /// Largest prime used by the reduction shortcuts; division by large l may scan all of them.
    pub reduction_prime_limit: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            rho_budget: DEFAULT_RHO_BUDGET,
            subset_budget: 1 << 20,
            ext_degree_budget: 24,
            exact_l_max: 13,
            reduction_primes: 200,
            reduction_prime_limit: 20_000,
        }
    }
}
