use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{small_primes, AffineForm, AffineSystem};
use crate::error::{Error, Result};
use crate::local::alpha::{is_prime, single_form_density_exponent, MinorProfile, PrimeProfile};
use crate::local::rational::ExactRational;

/// Truncated local factor with a certified bound on the omitted mass:
/// `value <= β_p <= value + tail_bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaP {
    pub p: u64,
    pub a_cap: u32,
    pub value: ExactRational,
    pub tail_bound: ExactRational,
}

impl BetaP {
    pub fn upper(&self) -> ExactRational {
        &self.value + &self.tail_bound
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.value <= x && x <= &self.upper()
    }
}

/// Exponent cap per prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum Truncation {
    Fixed(u32),
    /// `max(10, ⌈log N / log p⌉)`.
    FromN(u64),
}

impl Truncation {
    pub fn cap(self, p: u64) -> u32 {
        match self {
            Truncation::Fixed(a) => a,
            Truncation::FromN(n) => {
                let mut a = 0u32;
                let mut pa: u128 = 1;
                while pa < n as u128 {
                    pa *= p as u128;
                    a += 1;
                }
                a.max(10)
            }
        }
    }
}

/// `(1 − 1/p)^t` as an exact rational.
fn euler_factor(p: u64, t: usize) -> ExactRational {
    let num = BigInt::from(p - 1).pow(t as u32);
    let den = BigInt::from(p).pow(t as u32);
    ExactRational::new(num, den)
}

/// `Σ counts[m] p^{−m}` exactly.
fn sum_inverse_powers(p: u64, counts: &[u64]) -> ExactRational {
    let top = counts.len().saturating_sub(1) as u32;
    let pb = BigUint::from(p);
    // Horner: Σ c_m p^{top−m}
    let mut num = BigUint::zero();
    for &c in counts {
        num = num * &pb + BigUint::from(c);
    }
    ExactRational::new(BigInt::from(num), BigInt::from(pb.pow(top)))
}

/// Certified bound on `Σ_{tuples with max exponent > A} α` using
/// `#{tuples with max exactly j} <= t(j+1)^{t−1}` and `α <= D_j`.
fn tail_mass(system: &AffineSystem, p: u64, a_cap: u32) -> ExactRational {
    let t = system.len();
    let forms = system.forms();
    let g_max = forms
        .iter()
        .map(|f| {
            f.coeffs
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| {
                    let (mut c, mut v) = (c.unsigned_abs(), 0u32);
                    while c % p == 0 {
                        c /= p;
                        v += 1;
                    }
                    v
                })
                .min()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let d_j = |j: u32| -> Option<u32> {
        forms
            .iter()
            .filter_map(|f| single_form_density_exponent(&f.coeffs, f.constant, p, j))
            .min()
    };
    let term = |j: u32, m: u32| -> ExactRational {
        let count = BigInt::from(t as u64) * BigInt::from(j as u64 + 1).pow(t as u32 - 1);
        ExactRational::new(count, BigInt::from(BigUint::from(p).pow(m)))
    };
    let mut total = ExactRational::zero();
    let mut j = a_cap + 1;
    loop {
        let m = match d_j(j) {
            Some(m) => m,
            None => {
                if j > g_max {
                    // no form is ever divisible by p^j again
                    return total;
                }
                j += 1;
                continue;
            }
        };
        let tj = term(j, m);
        if j > g_max {
            // T_{i+1}/T_i = ((i+2)/(i+1))^{t−1}/p, decreasing in i
            let ratio = ExactRational::new(
                BigInt::from(j as u64 + 2).pow(t as u32 - 1),
                BigInt::from(j as u64 + 1).pow(t as u32 - 1) * BigInt::from(p),
            );
            if ratio < ExactRational::one() {
                let closing = ExactRational::new(
                    tj.numer() * ratio.denom(),
                    tj.denom() * (ratio.denom() - ratio.numer()),
                );
                return &total + &closing;
            }
        }
        total = &total + &tj;
        j += 1;
    }
}

/// `β_p` truncated at exponent cap `a_cap`, given the prime's minor valuations.
pub fn beta_p_with_profile(
    system: &AffineSystem,
    profile: &PrimeProfile,
    a_cap: u32,
) -> BetaP {
    let p = profile.p;
    let t = system.len();
    let mut counts = vec![0u64; t * a_cap as usize + 1];
    let mut exps = vec![0u32; t];
    loop {
        if let Some(m) = profile.alpha_exponent(&exps) {
            counts[m as usize] += 1;
        }
        let mut i = t;
        loop {
            if i == 0 {
                let factor = euler_factor(p, t);
                let value = &factor * &sum_inverse_powers(p, &counts);
                let tail_bound = &factor * &tail_mass(system, p, a_cap);
                return BetaP {
                    p,
                    a_cap,
                    value,
                    tail_bound,
                };
            }
            i -= 1;
            if exps[i] < a_cap {
                exps[i] += 1;
                for e in exps.iter_mut().skip(i + 1) {
                    *e = 0;
                }
                break;
            }
        }
    }
}

pub fn beta_p(system: &AffineSystem, p: u64, a_cap: u32) -> Result<BetaP> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if a_cap == 0 {
        return Err(Error::InvalidArgument("truncation cap A must be >= 1".into()));
    }
    let profile = MinorProfile::new(system)?.at_prime(p);
    Ok(beta_p_with_profile(system, &profile, a_cap))
}

type CacheKey = (Vec<AffineForm>, u64, u32);

/// Memo of `β_p` values keyed by (sorted forms, p, A). Concurrent inserts of
/// the same key store equal values, so races are harmless.
#[derive(Debug, Default)]
pub struct BetaCache {
    map: RwLock<HashMap<CacheKey, Arc<BetaP>>>,
}

impl BetaCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get_or_compute(
        &self,
        key: &[AffineForm],
        system: &AffineSystem,
        profile: &MinorProfile,
        p: u64,
        a_cap: u32,
    ) -> Arc<BetaP> {
        let k = (key.to_vec(), p, a_cap);
        if let Some(v) = self.map.read().get(&k) {
            return v.clone();
        }
        let v = Arc::new(beta_p_with_profile(system, &profile.at_prime(p), a_cap));
        self.map.write().entry(k).or_insert(v).clone()
    }

    pub fn beta_p(&self, system: &AffineSystem, p: u64, a_cap: u32) -> Result<Arc<BetaP>> {
        if !is_prime(p) || a_cap == 0 {
            return Err(Error::InvalidArgument(format!(
                "need prime p and A >= 1, got p = {p}, A = {a_cap}"
            )));
        }
        let profile = MinorProfile::new(system)?;
        Ok(self.get_or_compute(&system.canonical_key(), system, &profile, p, a_cap))
    }
}

/// Least-squares fit of `log|β_p − 1| = log C − e·log p` over primes above
/// the largest exceptional prime.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub primes_used: usize,
    pub exponent: f64,
    pub constant: f64,
    /// `max |β_p − 1|·p²` over the same primes.
    pub max_scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularProduct {
    /// `∏_{p <= P_max}` of the truncated values.
    pub value: f64,
    /// Certified enclosure of `∏_{p <= P_max} β_p`.
    pub lower: f64,
    pub upper: f64,
    pub p_max: u64,
    pub per_prime: Vec<BetaP>,
    /// `(p, partial product)` at powers of ten and at `P_max`.
    pub partial_products: Vec<(u64, f64)>,
    /// Largest exceptional prime `<= P_max`; `None` for systems of infinite
    /// complexity, where every prime is exceptional.
    pub largest_exceptional_prime: Option<u64>,
    /// Primes above this are used for the decay fit.
    pub fit_threshold: u64,
    /// Systems of infinite complexity (e.g. `(n, n + 1)`) still have a
    /// convergent product, but the Main Theorem does not cover them.
    pub finite_complexity: bool,
    pub fit: Option<DecayFit>,
    /// Uncertified guess at `∏_p β_p`, extrapolating `(β_p − 1)p²` beyond `P_max`.
    pub extrapolated: f64,
}

const EPS: f64 = f64::EPSILON;

/// `∏_{p <= P_max} β_p` with per-prime certified truncation intervals.
pub fn singular_product(
    system: &AffineSystem,
    p_max: u64,
    trunc: Truncation,
    cache: &BetaCache,
) -> Result<SingularProduct> {
    if p_max < 2 {
        return Err(Error::InvalidArgument("P_max must be >= 2".into()));
    }
    if let Truncation::Fixed(0) = trunc {
        return Err(Error::InvalidArgument("truncation cap A must be >= 1".into()));
    }
    let profile = MinorProfile::new(system)?;
    let key = system.canonical_key();
    let primes = small_primes(p_max);
    let per_prime: Vec<BetaP> = primes
        .par_iter()
        .map(|&p| (*cache.get_or_compute(&key, system, &profile, p, trunc.cap(p))).clone())
        .collect();

    let mut value = 1.0f64;
    let mut lower = 1.0f64;
    let mut upper = 1.0f64;
    let mut partial_products = Vec::new();
    let mut mark = 10u64;
    let mut deviations = Vec::with_capacity(per_prime.len());
    for (idx, b) in per_prime.iter().enumerate() {
        let v = b.value.to_f64();
        value *= v;
        lower *= v * (1.0 - 2.0 * EPS);
        lower *= 1.0 - 2.0 * EPS;
        upper *= b.upper().to_f64() * (1.0 + 2.0 * EPS);
        upper *= 1.0 + 2.0 * EPS;
        let next = primes.get(idx + 1).copied();
        if next.map_or(true, |q| q > mark) {
            partial_products.push((b.p, value));
            while next.map_or(false, |q| q > mark) {
                mark = mark.saturating_mul(10);
            }
        }
        deviations.push((&b.value - &ExactRational::one()).to_f64());
    }

    let finite_complexity = system.has_finite_complexity();
    let exceptional = if finite_complexity {
        system.exceptional_primes(p_max).last().copied()
    } else {
        None
    };
    let threshold = system.largest_special_prime().unwrap_or(1);
    let fit = fit_decay(&primes, &deviations, threshold);

    // mean of (β_p − 1)p² over the last decade of primes, times Σ_{p > P} p^{−2} ≈ 1/(P log P)
    let last = p_max as f64;
    let recent: Vec<f64> = primes
        .iter()
        .zip(&deviations)
        .filter(|(&p, _)| p as f64 > last / 10.0 && p > threshold)
        .map(|(&p, &dv)| dv * (p as f64).powi(2))
        .collect();
    let k = if recent.is_empty() {
        0.0
    } else {
        recent.iter().sum::<f64>() / recent.len() as f64
    };
    let extrapolated = value * (k / (last * last.ln())).exp();

    Ok(SingularProduct {
        value,
        lower,
        upper,
        p_max,
        per_prime,
        partial_products,
        largest_exceptional_prime: exceptional,
        fit_threshold: threshold,
        finite_complexity,
        fit,
        extrapolated,
    })
}

fn fit_decay(primes: &[u64], deviations: &[f64], p0: u64) -> Option<DecayFit> {
    let pts: Vec<(f64, f64, f64)> = primes
        .iter()
        .zip(deviations)
        .filter(|(&p, &d)| p > p0 && d != 0.0)
        .map(|(&p, &d)| ((p as f64).ln(), d.abs().ln(), d.abs() * (p as f64).powi(2)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|x| x.0).sum::<f64>() / n;
    let my = pts.iter().map(|x| x.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|x| (x.0 - mx) * (x.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|x| (x.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(DecayFit {
        primes_used: pts.len(),
        exponent: -slope,
        constant: (my - slope * mx).exp(),
        max_scaled: pts.iter().map(|x| x.2).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[i64]]) -> AffineSystem {
        AffineSystem::from_rows(rows).unwrap()
    }

    #[test]
    fn independent_forms_are_one() {
        let s = sys(&[&[1, 0, 0], &[0, 1, 0]]);
        for p in [2, 3, 5, 101] {
            for a in [1, 3, 8] {
                let b = beta_p(&s, p, a).unwrap();
                assert!(b.value < ExactRational::one());
                assert!(b.contains(&ExactRational::one()), "p={p} A={a}");
            }
        }
        let sp = singular_product(&s, 1000, Truncation::Fixed(10), &BetaCache::new()).unwrap();
        assert!(sp.lower <= 1.0 && 1.0 <= sp.upper);
        // the truncated value is (1 − p^{−11})^2 per prime
        assert!((sp.value - 1.0).abs() < 2e-3);
    }

    #[test]
    fn consecutive_pair() {
        let s = sys(&[&[1, 0], &[1, 1]]);
        for p in [2u64, 3, 7] {
            let b = beta_p(&s, p, 10).unwrap();
            let closed = &ExactRational::one() - &ExactRational::inv_pow(p, 2);
            assert!(b.contains(&closed), "p={p}");
        }
        let b = beta_p(&s, 2, 10).unwrap();
        assert!((b.value.to_f64() - 0.75).abs() <= b.tail_bound.to_f64());
    }

    #[test]
    fn nested_intervals() {
        for rows in [
            vec![vec![1i64, 0], vec![1, 1]],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]],
            vec![vec![2, 0, 1], vec![4, 2, 0]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let s = AffineSystem::from_rows(&refs).unwrap();
            for p in [2u64, 3, 5] {
                let mut prev: Option<BetaP> = None;
                for a in 1..9 {
                    let b = beta_p(&s, p, a).unwrap();
                    if let Some(q) = &prev {
                        assert!(q.value <= b.value);
                        assert!(b.upper() <= q.upper(), "{rows:?} p={p} A={a}");
                    }
                    prev = Some(b);
                }
            }
        }
    }

    #[test]
    fn cache_reuses_values() {
        let s = sys(&[&[1, 0], &[1, 2]]);
        let cache = BetaCache::new();
        let a = singular_product(&s, 100, Truncation::Fixed(6), &cache).unwrap();
        let n = cache.len();
        let b = singular_product(&s, 100, Truncation::Fixed(6), &cache).unwrap();
        assert_eq!(cache.len(), n);
        assert_eq!(a.value, b.value);
        let swapped = sys(&[&[1, 2], &[1, 0]]);
        singular_product(&swapped, 100, Truncation::Fixed(6), &cache).unwrap();
        assert_eq!(cache.len(), n);
    }

    #[test]
    fn infinite_complexity_is_flagged() {
        let s = sys(&[&[1, 0], &[1, 1]]);
        let sp = singular_product(&s, 100, Truncation::Fixed(8), &BetaCache::new()).unwrap();
        assert!(!sp.finite_complexity);
        assert_eq!(sp.partial_products.iter().map(|x| x.0).collect::<Vec<_>>(), vec![7, 97]);
        let s = sys(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        let sp = singular_product(&s, 100, Truncation::Fixed(8), &BetaCache::new()).unwrap();
        assert!(sp.finite_complexity);
        assert!(sp.lower <= sp.value && sp.value <= sp.upper);
    }

    #[test]
    fn truncation_from_n() {
        assert_eq!(Truncation::FromN(1_000_000).cap(2), 20);
        assert_eq!(Truncation::FromN(1_000_000).cap(101), 10);
    }
}
