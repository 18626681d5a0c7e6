/// Caps and thresholds shared by the enumerating operations.
///
/// Every field can be overridden from the command line or from a `BK_*`
/// environment variable; see the `cli` module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest tuple length for which all `2^L` subsets are enumerated.
    pub subset_cap: usize,
    /// Largest divisibility antichain handed to inclusion–exclusion.
    pub antichain_cap: usize,
    /// Largest Fermat index `ℓ + n` that may be generated.
    pub fermat_cap: u32,
    /// Direct multiple counting runs when its range is at most this long.
    pub direct_count_limit: u64,
    /// Largest number of candidate tuples a sphere search may visit.
    pub search_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subset_cap: 24,
            antichain_cap: 24,
            fermat_cap: 12,
            direct_count_limit: 1_000_000,
            search_budget: 50_000_000,
        }
    }
}
