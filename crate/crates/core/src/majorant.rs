//! The pseudorandom majorant `ν` for `τ̃`, its W-tricked variant `ν′`, the
//! cluster counts over `U(i,s)`, `X(i,s)` densities and the weight `σ_m`.
//!
//! Every weight here is an integer divided by a common positive scale, so the
//! engine can sum products exactly. `ν_raw(n)·log N` is the integer
//! `g·τ_γ(n)·Σ_{s,i} 2^s·C(ω_i(n), m0(i,s)) + 1_{n∈S₁∪S₂}·τ(n)`, where the
//! `s = 2/γ` term is the base term `2^{2/γ}` (taking `U(i, 2/γ) = {1}`).

use serde::Serialize;

use crate::arith::{
    cluster_range_positive, in_superdyadic, max_interval_index, meets_cluster_threshold, pow_le,
    truncated_divisor_count, ExceptionalThresholds, FactorTables, Factorization,
};
use crate::error::{Error, Result};
use crate::params::{Gamma, MajorantParams, RangeMode};
use crate::wtrick::WContext;

/// `m0(i,s) = ⌈γ s (i + 3 − log₂ s)/100⌉`, or `None` when `i + 3 − log₂ s <= 0`.
pub fn m0(i: u32, s: u32, gamma: Gamma) -> Option<u32> {
    if !cluster_range_positive(s, i) {
        return None;
    }
    let mut m = 1u32;
    while !meets_cluster_threshold(m as u64, s, i, gamma) {
        m += 1;
    }
    Some(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClusterSpec {
    pub i: u32,
    pub s: u32,
    pub m0: u32,
}

impl ClusterSpec {
    pub fn new(i: u32, s: u32, gamma: Gamma) -> Option<Self> {
        m0(i, s, gamma).map(|m0| ClusterSpec { i, s, m0 })
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc as u64
}

/// Distinct primes of `n` in each `I_i`, `i = 0..=top`.
pub fn interval_profile(f: &Factorization, big_n: u64, top: u32) -> Vec<u32> {
    let mut out = vec![0u32; top as usize + 1];
    for &(p, _) in f.pairs() {
        for i in 0..=top {
            if in_superdyadic(p, i, big_n) {
                out[i as usize] += 1;
                break;
            }
        }
    }
    out
}

/// `Σ_{u ∈ U(i,s)} 1_{u|n} = C(ω_i(n), m0)`.
pub fn cluster_count(f: &Factorization, spec: &ClusterSpec, big_n: u64) -> u64 {
    let omega = f
        .pairs()
        .iter()
        .filter(|&&(p, _)| in_superdyadic(p, spec.i, big_n))
        .count() as u64;
    binomial(omega, spec.m0 as u64)
}

/// Every element of `U(i,s)` not exceeding `bound`, by explicit enumeration.
/// Only used to check [`cluster_count`].
pub fn cluster_set_upto(spec: &ClusterSpec, big_n: u64, bound: u64, tables: &FactorTables) -> Vec<u64> {
    let primes: Vec<u64> = tables
        .primes_up_to(bound.min(tables.limit()))
        .iter()
        .map(|&p| p as u64)
        .filter(|&p| in_superdyadic(p, spec.i, big_n))
        .collect();
    let mut out = Vec::new();
    fn go(start: usize, left: u32, acc: u64, primes: &[u64], bound: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for j in start..primes.len() {
            match acc.checked_mul(primes[j]) {
                Some(v) if v <= bound => go(j + 1, left - 1, v, primes, bound, out),
                _ => break,
            }
        }
    }
    go(0, spec.m0, 1, &primes, bound, &mut out);
    out.sort_unstable();
    out
}

/// Cluster terms and thresholds for one `(N, params)`.
#[derive(Debug, Clone, Serialize)]
pub struct Majorant {
    pub big_n: u64,
    pub params: MajorantParams,
    /// Base level `s = 2/γ` plus every `(s, i)` cluster term in range.
    pub terms: Vec<ClusterSpec>,
    pub top_interval: u32,
    /// S₂ threshold collapsed at this `N`.
    pub degenerate: bool,
    /// No cluster terms beyond the base term.
    pub clusters_empty: bool,
    pub manual_ranges: bool,
    #[serde(skip)]
    thresholds: ExceptionalThresholds,
}

impl Majorant {
    pub fn new(big_n: u64, params: MajorantParams) -> Result<Self> {
        params.validate()?;
        if big_n < 3 {
            return Err(Error::InvalidArgument(format!("N must be >= 3, got {big_n}")));
        }
        let gamma = params.gamma;
        let mut terms = Vec::new();
        for s in params.s_levels(big_n) {
            for i in params.i_indices(s, big_n) {
                if let Some(spec) = ClusterSpec::new(i, s, gamma) {
                    terms.push(spec);
                }
            }
        }
        let thresholds = ExceptionalThresholds::new(big_n, params.c1, gamma);
        Ok(Majorant {
            big_n,
            params,
            clusters_empty: terms.is_empty(),
            terms,
            top_interval: max_interval_index(big_n),
            degenerate: thresholds.degenerate(),
            manual_ranges: matches!(params.s_range, RangeMode::Manual { .. })
                || matches!(params.i_range, RangeMode::Manual { .. }),
            thresholds,
        })
    }

    pub fn gamma(&self) -> Gamma {
        self.params.gamma
    }

    /// `2^{2/γ} + Σ_{(s,i)} 2^s C(ω_i(n), m0(i,s))`.
    pub fn cluster_weight(&self, f: &Factorization) -> Result<u128> {
        let g = self.params.gamma.reciprocal();
        let mut total: u128 = 1u128
            .checked_shl(2 * g)
            .filter(|_| 2 * g < 127)
            .ok_or_else(|| Error::Overflow("2^(2/gamma)".into()))?;
        if self.terms.is_empty() {
            return Ok(total);
        }
        let profile = interval_profile(f, self.big_n, self.top_interval);
        for t in &self.terms {
            let omega = profile.get(t.i as usize).copied().unwrap_or(0) as u64;
            let c = binomial(omega, t.m0 as u64) as u128;
            if c == 0 {
                continue;
            }
            if t.s >= 127 {
                return Err(Error::Overflow(format!("2^{}", t.s)));
            }
            total = (1u128 << t.s)
                .checked_mul(c)
                .and_then(|x| total.checked_add(x))
                .ok_or_else(|| Error::Overflow("cluster weight".into()))?;
        }
        Ok(total)
    }

    pub fn is_exceptional(&self, f: &Factorization) -> bool {
        self.thresholds.is_exceptional(f)
    }

    /// `ν_raw(n)·log N` as an exact integer.
    pub fn nu_raw_scaled(&self, f: &Factorization) -> Result<u128> {
        let g = self.params.gamma.reciprocal() as u128;
        let trunc = truncated_divisor_count(f, self.big_n, self.params.gamma) as u128;
        let mut v = self
            .cluster_weight(f)?
            .checked_mul(g * trunc)
            .ok_or_else(|| Error::Overflow("nu".into()))?;
        if self.is_exceptional(f) {
            v += f.divisor_count() as u128;
        }
        Ok(v)
    }

    /// `ν′_raw(n)·log N·φ(W)/W` as an exact integer: the cluster sums against
    /// the coprime truncated divisor count, no exceptional term.
    pub fn nu_prime_raw_scaled(&self, f: &Factorization, ctx: &WContext) -> Result<u128> {
        let g = self.params.gamma.reciprocal() as u128;
        let trunc = ctx.coprime_truncated_count(f, self.params.gamma) as u128;
        self.cluster_weight(f)?
            .checked_mul(g * trunc)
            .ok_or_else(|| Error::Overflow("nu prime".into()))
    }

    pub fn nu_raw(&self, n: u64, tables: &FactorTables) -> Result<f64> {
        self.check(n)?;
        let f = tables.factorize(n)?;
        Ok(self.nu_raw_scaled(&f)? as f64 / (self.big_n as f64).ln())
    }

    /// `ν′_raw(n)`; `n` may exceed `N` (it is usually `𝒲m + b`) but must lie
    /// within the tables.
    pub fn nu_prime_raw(&self, n: u64, ctx: &WContext, tables: &FactorTables) -> Result<f64> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        let f = tables.factorize(n)?;
        Ok(self.nu_prime_raw_scaled(&f, ctx)? as f64 * ctx.prime_scale())
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.big_n {
            return Err(Error::OutOfRange {
                value: n as i64,
                lo: 1,
                hi: self.big_n as i64,
            });
        }
        Ok(())
    }
}

/// Density of `X(i,s)`: `n <= N` with at least `m0(i,s)` distinct primes in `I_i`.
pub fn xis_density(spec: &ClusterSpec, big_n: u64, tables: &FactorTables) -> Result<f64> {
    if tables.limit() < big_n {
        return Err(Error::Capacity(format!(
            "tables reach {} < N = {big_n}",
            tables.limit()
        )));
    }
    let mut hits = 0u64;
    for n in 1..=big_n {
        let f = tables.factorize(n)?;
        let omega = f
            .pairs()
            .iter()
            .filter(|&&(p, _)| in_superdyadic(p, spec.i, big_n))
            .count() as u32;
        if omega >= spec.m0 {
            hits += 1;
        }
    }
    Ok(hits as f64 / big_n as f64)
}

/// `(1/m0!)(Σ_{p∈I_i} 1/p)^{m0}`.
pub fn xis_bound(spec: &ClusterSpec, big_n: u64, tables: &FactorTables) -> f64 {
    let recip: f64 = tables
        .primes_up_to(big_n.min(tables.limit()))
        .iter()
        .filter(|&&p| in_superdyadic(p as u64, spec.i, big_n))
        .map(|&p| 1.0 / p as f64)
        .sum();
    let fact: f64 = (1..=spec.m0).map(|k| k as f64).product();
    recip.powi(spec.m0 as i32) / fact
}

/// Parameters of `σ_m(h) = exp(c_σ Σ_{p > w, p | Δ} p^{−1/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaParams {
    pub w: f64,
    pub c_sigma: f64,
    pub m: u32,
    /// Value used for `σ(0)`, where `Δ` vanishes.
    pub sigma_zero: f64,
}

impl SigmaParams {
    pub fn new(w: f64, c_sigma: f64, m: u32) -> Result<Self> {
        if !(c_sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("c_sigma must be > 0, got {c_sigma}")));
        }
        Ok(SigmaParams {
            w,
            c_sigma,
            m,
            sigma_zero: 1.0,
        })
    }
}

/// `σ_m` at one argument, with a flag when `Δ` had a cofactor beyond the tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaValue {
    pub value: f64,
    /// `Σ_{p > w, p | Δ} p^{−1/2}`.
    pub prime_sum: f64,
    /// Some factor of `Δ` could not be resolved; `value` is then a lower bound.
    pub partial: bool,
}

/// `Δ(h) = ∏_{j ≠ j′} (𝒲h + b_j − b_{j′})` over the configured pairs, as
/// `|Δ|`, with `None` when it vanishes.
pub fn delta_value(h: i64, big_w: u64, b: &[i64]) -> Result<Option<u128>> {
    let mut acc: u128 = 1;
    for j in 0..b.len() {
        for k in 0..b.len() {
            if j == k {
                continue;
            }
            let v = (big_w as i128)
                .checked_mul(h as i128)
                .and_then(|x| x.checked_add(b[j] as i128 - b[k] as i128))
                .ok_or_else(|| Error::Overflow("delta factor".into()))?;
            if v == 0 {
                return Ok(None);
            }
            acc = acc
                .checked_mul(v.unsigned_abs())
                .ok_or_else(|| Error::Overflow("delta product".into()))?;
        }
    }
    Ok(Some(acc))
}

/// `σ_m(h)` for the pattern `b`; distinct prime factors are collected per
/// factor of `Δ` so no product needs full factorisation.
pub fn sigma_m(h: i64, big_w: u64, b: &[i64], params: &SigmaParams, tables: &FactorTables) -> Result<SigmaValue> {
    if delta_value(h, big_w, b)?.is_none() {
        return Ok(SigmaValue {
            value: params.sigma_zero,
            prime_sum: f64::NAN,
            partial: false,
        });
    }
    let mut seen: Vec<u64> = Vec::new();
    let mut partial = false;
    for j in 0..b.len() {
        for k in 0..b.len() {
            if j == k {
                continue;
            }
            let v = (big_w as i128 * h as i128 + b[j] as i128 - b[k] as i128).unsigned_abs();
            let (f, rest) = tables.factorize_any(v as u64);
            seen.extend(f.pairs().iter().map(|&(p, _)| p));
            if rest > 1 {
                let biggest = *tables.primes().last().unwrap_or(&1) as u128;
                if biggest * biggest >= rest as u128 {
                    seen.push(rest);
                } else {
                    partial = true;
                }
            }
        }
    }
    seen.sort_unstable();
    seen.dedup();
    let prime_sum: f64 = seen
        .iter()
        .filter(|&&p| p as f64 > params.w)
        .map(|&p| 1.0 / (p as f64).sqrt())
        .sum();
    Ok(SigmaValue {
        value: (params.c_sigma * prime_sum).exp(),
        prime_sum,
        partial,
    })
}

/// Whether `d <= N^γ`, for callers that test the divisor truncation directly.
pub fn within_truncation(d: u64, big_n: u64, gamma: Gamma) -> bool {
    pow_le(d, gamma.reciprocal() as u64, big_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{build_tables, tau_tilde};
    use crate::params::WMode;
    use crate::wtrick::make_context;

    fn g(k: u32) -> Gamma {
        Gamma::from_reciprocal(k).unwrap()
    }

    #[test]
    fn m0_examples() {
        assert_eq!(m0(1, 8, g(4)), Some(1));
        // 0.25·8·(51 + 3 − 3)/100 = 1.02
        assert_eq!(m0(51, 8, g(4)), Some(2));
        assert_eq!(m0(100, 16, g(2)), Some(8));
        // i + 3 − log₂ s <= 0
        assert_eq!(m0(0, 8, g(4)), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 1), 0);
        assert_eq!(binomial(3, 3), 1);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn cluster_count_matches_enumeration() {
        let big_n = 10_000u64;
        let t = build_tables(big_n).unwrap();
        for s in [8u32, 16] {
            for i in 1..=4 {
                let spec = match ClusterSpec::new(i, s, g(4)) {
                    Some(x) => x,
                    None => continue,
                };
                let set = cluster_set_upto(&spec, big_n, big_n, &t);
                for n in 1..=big_n {
                    let f = t.factorize(n).unwrap();
                    let direct = set.iter().filter(|&&u| n % u == 0).count() as u64;
                    assert_eq!(cluster_count(&f, &spec, big_n), direct, "n={n} i={i} s={s}");
                }
            }
        }
    }

    #[test]
    fn nu_at_one() {
        let t = build_tables(1000).unwrap();
        let m = Majorant::new(1000, MajorantParams::default()).unwrap();
        let v = m.nu_raw(1, &t).unwrap();
        let want = 256.0 * 4.0 / 1000f64.ln();
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn majorises_small_range() {
        let big_n = 20_000u64;
        let t = build_tables(big_n).unwrap();
        let m = Majorant::new(big_n, MajorantParams::default()).unwrap();
        for n in 1..=big_n {
            assert!(tau_tilde(n, big_n, &t).unwrap() <= m.nu_raw(n, &t).unwrap());
        }
    }

    #[test]
    fn nu_prime_with_trivial_w() {
        let big_n = 5000u64;
        let t = build_tables(big_n).unwrap();
        let params = MajorantParams {
            s_range: RangeMode::Manual { lo: 1, hi: 0 },
            ..Default::default()
        };
        let m = Majorant::new(big_n, params).unwrap();
        assert!(m.clusters_empty);
        let ctx = make_context(big_n, 2.0, WMode::Asymptotic).unwrap();
        for n in 1..=big_n {
            let f = t.factorize(n).unwrap();
            let exc = if m.is_exceptional(&f) { f.divisor_count() as u128 } else { 0 };
            assert_eq!(m.nu_prime_raw_scaled(&f, &ctx).unwrap(), m.nu_raw_scaled(&f).unwrap() - exc);
        }
    }

    #[test]
    fn sigma_examples() {
        let t = build_tables(1000).unwrap();
        let p = SigmaParams::new(5.0, 1.0, 2).unwrap();
        // Δ(h) = (h)(−h) with 𝒲 = 1, b = 0: primes of h
        let v = sigma_m(8, 1, &[0, 0], &p, &t).unwrap();
        assert_eq!(v.value, 1.0);
        let v = sigma_m(13, 1, &[0, 0], &p, &t).unwrap();
        assert!((v.value - (1.0 / 13f64.sqrt()).exp()).abs() < 1e-15);
        let v = sigma_m(0, 1, &[0, 0], &p, &t).unwrap();
        assert_eq!(v.value, p.sigma_zero);
    }

    #[test]
    fn xis_examples() {
        let big_n = 10_000u64;
        let t = build_tables(big_n).unwrap();
        let spec = ClusterSpec::new(1, 8, g(4)).unwrap();
        let d = xis_density(&spec, big_n, &t).unwrap();
        let brute = (1..=big_n)
            .filter(|&n| (11..=100).any(|p: u64| t.is_prime(p) && n % p == 0))
            .count() as f64
            / big_n as f64;
        assert_eq!(d, brute);
    }
}
