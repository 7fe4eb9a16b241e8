use crate::arith::divisor::truncated_divisor_count;
use crate::arith::exceptional::{
    in_superdyadic, max_interval_index, meets_cluster_threshold, ExceptionalThresholds,
};
use crate::arith::sieve::{FactorTables, Factorization};
use crate::error::Result;
use crate::params::{min_cluster_index, MajorantParams};

/// Outcome of the three-alternative classification of an integer with many
/// more divisors than small divisors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alternative {
    /// The hypothesis `τ̃(n) >= 2^s τ̃_γ(n)` with `s > 2/γ` does not hold.
    NotApplicable,
    Rough,
    Smooth,
    /// `count` distinct primes of `n` lie in `I_i`, none of them squared.
    Cluster { i: u32, count: u32 },
    /// None of the alternatives holds. Never expected; callers treat it as a bug.
    Unclassified,
}

/// Whether `τ(n) >= 2^s · g · τ_γ(n)` and `s > 2g`, which is the hypothesis
/// `τ̃(n) >= 2^s τ̃_γ(n)` with the common `1/log N` cancelled.
pub fn erdos_hypothesis(f: &Factorization, big_n: u64, params: &MajorantParams, s: u32) -> bool {
    let g = params.gamma.reciprocal();
    if s <= 2 * g || s >= 120 {
        return false;
    }
    let tau = f.divisor_count() as u128;
    let trunc = truncated_divisor_count(f, big_n, params.gamma) as u128;
    tau >= (1u128 << s) * g as u128 * trunc
}

/// Evaluates the alternatives without checking the hypothesis.
pub fn classify_alternatives(
    f: &Factorization,
    big_n: u64,
    params: &MajorantParams,
    s: u32,
) -> Alternative {
    let th = ExceptionalThresholds::new(big_n, params.c1, params.gamma);
    if th.is_rough(f) {
        return Alternative::Rough;
    }
    if th.is_smooth(f) {
        return Alternative::Smooth;
    }
    let top = max_interval_index(big_n);
    for i in min_cluster_index(s)..=top {
        let mut count = 0u32;
        let mut squared = false;
        for &(p, a) in f.pairs() {
            if in_superdyadic(p, i, big_n) {
                count += 1;
                squared |= a >= 2;
            }
        }
        if !squared && count > 0 && meets_cluster_threshold(count as u64, s, i, params.gamma) {
            return Alternative::Cluster { i, count };
        }
    }
    Alternative::Unclassified
}

/// Classifies `n <= N` under the hypothesis `τ̃(n) >= 2^s τ̃_γ(n)`, `s > 2/γ`.
pub fn erdos_classify(
    n: u64,
    big_n: u64,
    params: &MajorantParams,
    s: u32,
    tables: &FactorTables,
) -> Result<Alternative> {
    let f = tables.factorize(n)?;
    if n > big_n || !erdos_hypothesis(&f, big_n, params, s) {
        return Ok(Alternative::NotApplicable);
    }
    Ok(classify_alternatives(&f, big_n, params, s))
}
