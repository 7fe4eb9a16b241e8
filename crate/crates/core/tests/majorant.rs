use divcorr_core::arith::{build_tables, tau_tilde};
use divcorr_core::majorant::{cluster_set_upto, m0, xis_bound, xis_density, ClusterSpec, Majorant};
use divcorr_core::params::{Gamma, MajorantParams, RangeMode, WMode};
use divcorr_core::wtrick::make_context;
use proptest::prelude::*;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `p ∈ (N^{1/2^{i+1}}, N^{1/2^i}]`, checked in 128-bit integers.
fn in_interval(p: u64, i: u32, big_n: u64) -> bool {
    let pow = |e: u32| -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..(1u64 << e) {
            acc = acc.checked_mul(p as u128)?;
            if acc > big_n as u128 {
                return None;
            }
        }
        Some(acc)
    };
    pow(i).is_some() && pow(i + 1).is_none()
}

/// Squarefree products of `k` distinct primes from `primes`.
fn products(primes: &[u64], k: u32, bound: u64) -> Vec<u64> {
    let mut out = vec![];
    fn go(ps: &[u64], k: u32, acc: u64, bound: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for (j, &p) in ps.iter().enumerate() {
            if acc * p > bound {
                break;
            }
            go(&ps[j + 1..], k - 1, acc * p, bound, out);
        }
    }
    go(primes, k, 1, bound, &mut out);
    out
}

#[test]
fn nu_prime_matches_definition() {
    let big_n = 1000u64;
    let t = build_tables(big_n).unwrap();
    let gamma = Gamma::from_reciprocal(4).unwrap();
    let params = MajorantParams {
        s_range: RangeMode::Manual { lo: 9, hi: 12 },
        i_range: RangeMode::Manual { lo: 0, hi: 3 },
        w_mode: WMode::Manual(5.0),
        ..Default::default()
    };
    let maj = Majorant::new(big_n, params).unwrap();
    assert!(!maj.clusters_empty);
    let ctx = make_context(big_n, 2.0, WMode::Manual(5.0)).unwrap();
    for n in 1..=big_n {
        let trunc = (1..=n)
            .filter(|&d| n % d == 0 && d % 2 != 0 && d % 3 != 0 && d.pow(4) <= big_n)
            .count() as u128;
        let mut cluster: u128 = 256;
        for s in 9..=12u32 {
            for i in 0..=3u32 {
                if (1u64 << (i + 2)) < s as u64 {
                    continue;
                }
                let Some(k) = m0(i, s, gamma) else { continue };
                let ps: Vec<u64> = (2..=big_n).filter(|&p| is_prime(p) && in_interval(p, i, big_n)).collect();
                let hits = products(&ps, k, big_n).iter().filter(|&&u| n % u == 0).count() as u128;
                cluster += (1u128 << s) * hits;
            }
        }
        let f = t.factorize(n).unwrap();
        assert_eq!(maj.nu_prime_raw_scaled(&f, &ctx).unwrap(), cluster * 4 * trunc, "n = {n}");
    }
}

#[test]
fn enumeration_oracle_is_exhaustive() {
    let big_n = 10_000;
    let t = build_tables(big_n).unwrap();
    let spec = ClusterSpec::new(2, 8, Gamma::from_reciprocal(4).unwrap()).unwrap();
    let ps: Vec<u64> = (2..=big_n).filter(|&p| is_prime(p) && in_interval(p, 2, big_n)).collect();
    let mut want = products(&ps, spec.m0, big_n);
    want.sort_unstable();
    assert_eq!(cluster_set_upto(&spec, big_n, big_n, &t), want);
}

#[test]
fn xis_density_monotone_in_level() {
    let big_n = 100_000;
    let t = build_tables(big_n).unwrap();
    let gamma = Gamma::from_reciprocal(4).unwrap();
    for i in 1..=3u32 {
        let mut last = f64::INFINITY;
        let mut last_m0 = 0;
        for s in [8u32, 16, 32, 64, 128] {
            let Some(spec) = ClusterSpec::new(i, s, gamma) else { continue };
            assert!(spec.m0 >= last_m0);
            let d = xis_density(&spec, big_n, &t).unwrap();
            assert!(d <= last, "i={i} s={s}");
            last = d;
            last_m0 = spec.m0;
        }
    }
}

#[test]
fn xis_bound_for_single_prime_clusters() {
    // m0 = 1: the density is at most Σ 1/p over the interval
    let big_n = 100_000;
    let t = build_tables(big_n).unwrap();
    let spec = ClusterSpec::new(1, 8, Gamma::from_reciprocal(4).unwrap()).unwrap();
    assert_eq!(spec.m0, 1);
    assert!(xis_density(&spec, big_n, &t).unwrap() <= xis_bound(&spec, big_n, &t));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn majorises_pointwise(big_n in 100u64..200_000, frac in 0.0f64..1.0) {
        let t = build_tables(big_n).unwrap();
        let m = Majorant::new(big_n, MajorantParams::default()).unwrap();
        let n = 1 + ((big_n - 1) as f64 * frac) as u64;
        prop_assert!(tau_tilde(n, big_n, &t).unwrap() <= m.nu_raw(n, &t).unwrap());
    }

    #[test]
    fn m0_is_least_integer_above_threshold(i in 0u32..80, k in 3u32..8, g in 2u32..8) {
        let s = 1u32 << k;
        let gamma = Gamma::from_reciprocal(g).unwrap();
        // for s a power of two the threshold is the rational s(i + 3 − k)/(100 g)
        let num = s as i64 * (i as i64 + 3 - k as i64);
        let den = 100 * g as i64;
        let got = m0(i, s, gamma);
        if num <= 0 {
            prop_assert_eq!(got, None);
        } else {
            prop_assert_eq!(got, Some(((num + den - 1) / den).max(1) as u32));
        }
    }
}
