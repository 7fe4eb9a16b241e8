use crate::arith::sieve::{FactorTables, Factorization};
use crate::error::{Error, Result};
use crate::params::Gamma;

/// `base^exp <= bound`, decided without overflow.
pub fn pow_le(base: u64, exp: u64, bound: u64) -> bool {
    if base <= 1 || exp == 0 {
        return 1 <= bound || base == 0 && exp > 0;
    }
    let mut acc: u64 = 1;
    for _ in 0..exp {
        match acc.checked_mul(base) {
            Some(v) if v <= bound => acc = v,
            _ => return false,
        }
    }
    true
}

fn log_n(big_n: u64) -> Result<f64> {
    if big_n < 2 {
        return Err(Error::InvalidArgument(format!("N must be >= 2, got {big_n}")));
    }
    Ok((big_n as f64).ln())
}

fn check_n(n: u64, big_n: u64) -> Result<()> {
    if n == 0 || n > big_n {
        return Err(Error::OutOfRange {
            value: n as i64,
            lo: 1,
            hi: big_n as i64,
        });
    }
    Ok(())
}

/// `τ(n) / log N`.
pub fn tau_tilde(n: u64, big_n: u64, tables: &FactorTables) -> Result<f64> {
    check_n(n, big_n)?;
    Ok(tables.tau(n)? as f64 / log_n(big_n)?)
}

/// Number of divisors `d | n` with `d^g <= N` (i.e. `d <= N^γ`).
pub fn truncated_divisor_count(f: &Factorization, big_n: u64, gamma: Gamma) -> u64 {
    let g = gamma.reciprocal() as u64;
    f.divisors()
        .into_iter()
        .filter(|&d| pow_le(d, g, big_n))
        .count() as u64
}

/// `τ̃_γ(n) = (γ log N)^{-1} #{d | n : d <= N^γ}`.
pub fn tau_gamma_tilde(n: u64, big_n: u64, gamma: Gamma, tables: &FactorTables) -> Result<f64> {
    check_n(n, big_n)?;
    let f = tables.factorize(n)?;
    let count = truncated_divisor_count(&f, big_n, gamma);
    Ok(count as f64 * gamma.reciprocal() as f64 / log_n(big_n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_tables;

    #[test]
    fn pow_le_edges() {
        assert!(pow_le(2, 10, 1024));
        assert!(!pow_le(2, 10, 1023));
        assert!(pow_le(1, 1000, 1));
        assert!(!pow_le(10, 40, u64::MAX));
        assert!(pow_le(7, 0, 1));
    }

    #[test]
    fn tau_tilde_examples() {
        let t = build_tables(100).unwrap();
        let v = tau_tilde(1, 20, &t).unwrap();
        assert!((v - 1.0 / 20f64.ln()).abs() < 1e-15);
        let v = tau_tilde(12, 100, &t).unwrap();
        assert!((v - 6.0 / 100f64.ln()).abs() < 1e-15);
        assert!(tau_tilde(101, 100, &t).is_err());
    }

    #[test]
    fn tau_gamma_examples() {
        let t = build_tables(30_000).unwrap();
        let quarter = Gamma::from_reciprocal(4).unwrap();
        // prime with p^4 > N: only d = 1
        let v = tau_gamma_tilde(29_989, 30_000, quarter, &t).unwrap();
        assert!((v - 4.0 / 30_000f64.ln()).abs() < 1e-15);
        // N = 12^4: every divisor of 12 is <= 12
        let v = tau_gamma_tilde(12, 20_736, quarter, &t).unwrap();
        assert!((v - 6.0 * 4.0 / 20_736f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn tau_gamma_matches_divisor_scan() {
        let big_n = 200_001u64;
        let t = build_tables(big_n).unwrap();
        let gamma = Gamma::from_reciprocal(3).unwrap();
        for n in (100_000..=big_n).step_by(997) {
            let brute = (1..=n)
                .filter(|d| n % d == 0 && (d * d * d) as u128 <= big_n as u128)
                .count() as u64;
            let f = t.factorize(n).unwrap();
            assert_eq!(truncated_divisor_count(&f, big_n, gamma), brute, "n={n}");
        }
    }
}
