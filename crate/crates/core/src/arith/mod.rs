//! Sieve tables and pointwise divisor-type functions.

mod divisor;
mod erdos;
mod exceptional;
mod sieve;

pub use divisor::{pow_le, tau_gamma_tilde, tau_tilde, truncated_divisor_count};
pub use erdos::{classify_alternatives, erdos_classify, erdos_hypothesis, Alternative};
pub use exceptional::{
    cluster_range_positive, in_superdyadic, is_rough_s1, is_smooth_s2, max_interval_index,
    meets_cluster_threshold, omega_in_interval, ExceptionalThresholds,
};
pub use sieve::{
    build_tables, build_tables_with_budget, FactorTables, Factorization, DEFAULT_MEMORY_BUDGET,
};
