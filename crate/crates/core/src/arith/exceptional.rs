//! Membership in the exceptional sets S₁ (rough) and S₂ (smooth), and the
//! superdyadic intervals `I_i = [N^{1/2^{i+1}}, N^{1/2^i}]`.
//!
//! Thresholds with integer exponents (`p^{2^i}` against `N`) are compared
//! exactly. The S₁/S₂ thresholds involve `log N` and `log log N`, which are
//! transcendental, and are compared in the log domain.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::divisor::pow_le;
use crate::arith::sieve::{FactorTables, Factorization};
use crate::params::{loglog, Gamma};

/// Precomputed S₁/S₂ thresholds for one `(N, C1, γ)`.
#[derive(Debug, Clone, Copy)]
pub struct ExceptionalThresholds {
    /// `C1 · log log N`: `p^a` is large when `a log p` exceeds this.
    rough_log: f64,
    /// `log N / (log log N)^3`: primes with `log p` at most this are small.
    smooth_prime_log: f64,
    /// `γ log N / log log N`: the small part is large when its log reaches this.
    smooth_log: f64,
    degenerate: bool,
}

impl ExceptionalThresholds {
    pub fn new(big_n: u64, c1: f64, gamma: Gamma) -> Self {
        let ln = (big_n as f64).ln();
        let ll = loglog(big_n);
        let degenerate = !(ll > 0.0);
        ExceptionalThresholds {
            rough_log: c1 * ll,
            smooth_prime_log: if degenerate { f64::NEG_INFINITY } else { ln / ll.powi(3) },
            smooth_log: if degenerate { f64::INFINITY } else { gamma.value() * ln / ll },
            degenerate,
        }
    }

    /// True when `N` is so small that `N^{γ/log log N} <= 1`; S₂ is then empty
    /// by convention and reports should say so.
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn is_rough(&self, f: &Factorization) -> bool {
        if self.rough_log.is_nan() {
            return false;
        }
        f.pairs()
            .iter()
            .any(|&(p, a)| a >= 2 && a as f64 * (p as f64).ln() > self.rough_log)
    }

    pub fn is_smooth(&self, f: &Factorization) -> bool {
        if self.degenerate {
            return false;
        }
        let log_small: f64 = f
            .pairs()
            .iter()
            .filter(|&&(p, _)| (p as f64).ln() <= self.smooth_prime_log)
            .map(|&(p, a)| a as f64 * (p as f64).ln())
            .sum();
        log_small >= self.smooth_log
    }

    pub fn is_exceptional(&self, f: &Factorization) -> bool {
        self.is_rough(f) || self.is_smooth(f)
    }
}

/// `n ∈ S₁`: some `p^a ‖ n` with `a >= 2` and `p^a > (log N)^{C1}`.
pub fn is_rough_s1(n: u64, big_n: u64, c1: f64, tables: &FactorTables) -> bool {
    let f = match tables.factorize(n) {
        Ok(f) => f,
        Err(_) => return false,
    };
    ExceptionalThresholds::new(big_n, c1, Gamma::from_reciprocal(2).unwrap()).is_rough(&f)
}

/// `n ∈ S₂`: the `N^{1/(log log N)^3}`-smooth part of `n` is at least `N^{γ/log log N}`.
pub fn is_smooth_s2(n: u64, big_n: u64, gamma: Gamma, tables: &FactorTables) -> bool {
    let f = match tables.factorize(n) {
        Ok(f) => f,
        Err(_) => return false,
    };
    ExceptionalThresholds::new(big_n, 1.0, gamma).is_smooth(&f)
}

/// Whether prime `p` lies in `I_i`.
///
/// Intervals are taken half-open, `N^{1/2^{i+1}} < p <= N^{1/2^i}`, so a prime
/// sitting exactly on the shared endpoint `N^{1/2^i}` belongs to `I_i` only and
/// the family `{I_i}` partitions `(1, N]`.
pub fn in_superdyadic(p: u64, i: u32, big_n: u64) -> bool {
    if i >= 63 {
        return false;
    }
    let upper = 1u64 << i;
    pow_le(p, upper, big_n) && !pow_le(p, upper << 1, big_n)
}

/// Number of distinct primes of `n` in `I_i`.
pub fn omega_in_interval(f: &Factorization, i: u32, big_n: u64) -> u32 {
    f.pairs()
        .iter()
        .filter(|&&(p, _)| in_superdyadic(p, i, big_n))
        .count() as u32
}

/// Largest `i` for which `I_i` can contain a prime (`2^{2^i} <= N`).
pub fn max_interval_index(big_n: u64) -> u32 {
    let mut i = 0;
    while i < 62 && pow_le(2, 1u64 << (i + 1), big_n) {
        i += 1;
    }
    i
}

/// Exact test of `count >= γ s (i + 3 − log₂ s) / 100` with `γ = 1/g`.
///
/// Rearranged to `s·log₂ s >= s(i+3) − 100·g·count`, then to
/// `s^s >= 2^{s(i+3) − 100 g count}` in big integers.
pub fn meets_cluster_threshold(count: u64, s: u32, i: u32, gamma: Gamma) -> bool {
    let k = s as i128 * (i as i128 + 3) - 100 * gamma.reciprocal() as i128 * count as i128;
    if k <= 0 {
        return true;
    }
    let lhs = BigUint::from(s).pow(s);
    let rhs = BigUint::one() << (k as usize);
    lhs >= rhs
}

/// Whether `γ s (i + 3 − log₂ s) > 0`, i.e. `2^{i+3} > s`.
pub fn cluster_range_positive(s: u32, i: u32) -> bool {
    i >= 61 || (1u64 << (i + 3)) > s as u64
}
