use crate::error::{Error, Result};

/// Default memory budget for sieve tables: 2 GiB.
pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

const BYTES_PER_ENTRY: usize = std::mem::size_of::<u32>() + std::mem::size_of::<u16>();

/// Smallest-prime-factor and divisor-count tables for `[1, limit]`.
///
/// Built once, then read-only; every query is a pure lookup or a short walk
/// down the `spf` chain.
#[derive(Debug, Clone)]
pub struct FactorTables {
    limit: u64,
    spf: Vec<u32>,
    tau: Vec<u16>,
    primes: Vec<u32>,
}

/// Prime factorisation as `(p, a)` pairs, strictly increasing in `p`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies the factorisation back out.
    pub fn value(&self) -> u128 {
        self.0
            .iter()
            .fold(1u128, |acc, &(p, a)| acc * (p as u128).pow(a))
    }

    pub fn divisor_count(&self) -> u64 {
        self.0.iter().map(|&(_, a)| a as u64 + 1).product()
    }

    /// All divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, a) in &self.0 {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..a {
                pk *= p;
                for j in 0..len {
                    out.push(out[j] * pk);
                }
            }
        }
        out
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, a)| a)
            .unwrap_or(0)
    }
}

/// Builds the tables with the default memory budget.
pub fn build_tables(limit: u64) -> Result<FactorTables> {
    build_tables_with_budget(limit, DEFAULT_MEMORY_BUDGET)
}

/// Linear sieve for `spf`, then `tau` by exponent recursion over `spf`.
pub fn build_tables_with_budget(limit: u64, budget_bytes: usize) -> Result<FactorTables> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!(
            "sieve limit must be >= 2, got {limit}"
        )));
    }
    if limit > u32::MAX as u64 {
        return Err(Error::Capacity(format!("sieve limit {limit} exceeds u32 range")));
    }
    let need = (limit as usize + 1).saturating_mul(BYTES_PER_ENTRY);
    if need > budget_bytes {
        return Err(Error::Capacity(format!(
            "sieve to {limit} needs {need} bytes, budget is {budget_bytes}"
        )));
    }

    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > n {
                break;
            }
            spf[m] = p;
        }
    }

    // exp[n] = exponent of spf[n] in n
    let mut exp = vec![0u8; n + 1];
    let mut tau = vec![0u16; n + 1];
    tau[1] = 1;
    for i in 2..=n {
        let p = spf[i] as usize;
        let m = i / p;
        if m > 1 && spf[m] as usize == p {
            exp[i] = exp[m] + 1;
            let e = exp[m] as u16;
            tau[i] = tau[m] / (e + 1) * (e + 2);
        } else {
            exp[i] = 1;
            tau[i] = tau[m] * 2;
        }
    }

    Ok(FactorTables {
        limit,
        spf,
        tau,
        primes,
    })
}

impl FactorTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `<= bound` (bound clipped to the sieve limit).
    pub fn primes_up_to(&self, bound: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| (p as u64) <= bound);
        &self.primes[..end]
    }

    fn check(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            Err(Error::OutOfRange {
                value: n as i64,
                lo: 1,
                hi: self.limit as i64,
            })
        } else {
            Ok(())
        }
    }

    pub fn spf(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        if n < 2 {
            return Err(Error::OutOfRange {
                value: n as i64,
                lo: 2,
                hi: self.limit as i64,
            });
        }
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    pub fn tau(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        Ok(self.tau[n as usize] as u64)
    }

    /// Unchecked divisor count for hot loops; `n` must lie in `[1, limit]`.
    #[inline]
    pub fn tau_unchecked(&self, n: usize) -> u16 {
        self.tau[n]
    }

    pub fn tau_slice(&self) -> &[u16] {
        &self.tau
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        let mut out = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut a = 0;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            out.push((p as u64, a));
        }
        Ok(Factorization(out))
    }

    /// Factorises `n` of any size: `spf` lookups inside the sieve, trial
    /// division by the sieved primes above it. Returns the factorisation and
    /// a leftover cofactor that could not be resolved (1 when complete).
    pub fn factorize_any(&self, n: u64) -> (Factorization, u64) {
        if n == 0 {
            return (Factorization::default(), 0);
        }
        if n <= self.limit {
            return (self.factorize(n).expect("in range"), 1);
        }
        let mut out = Vec::new();
        let mut m = n;
        for &p in &self.primes {
            let p = p as u64;
            if p.saturating_mul(p) > m {
                break;
            }
            if m % p == 0 {
                let mut a = 0;
                while m % p == 0 {
                    m /= p;
                    a += 1;
                }
                out.push((p, a));
                if m <= self.limit {
                    break;
                }
            }
        }
        if m > 1 && m <= self.limit {
            let rest = self.factorize(m).expect("in range");
            out.extend(rest.0);
            out.sort_unstable();
            return (Factorization(out), 1);
        }
        let lim = self.limit as u128;
        if m > 1 && (m as u128) <= lim * lim {
            // no factor <= sqrt(m) survived, so m is prime
            out.push((m, 1));
            return (Factorization(out), 1);
        }
        (Factorization(out), m)
    }
}
