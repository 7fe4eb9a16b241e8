//! Dense weight tables over `[1, limit]`. Every weight is an integer numerator
//! times a common positive scale, so sweeps can sum exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{truncated_divisor_count, FactorTables, Factorization};
use crate::error::{Error, Result};
use crate::majorant::Majorant;
use crate::params::Gamma;
use crate::wtrick::WContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    Unit,
    Tau,
    TauTilde,
    TauTildeGamma,
    TauTildePrime,
    TauTildePrimeGamma,
    TauBar,
    Nu,
    NuPrime,
}

impl WeightKind {
    pub const ALL: [WeightKind; 9] = [
        WeightKind::Unit,
        WeightKind::Tau,
        WeightKind::TauTilde,
        WeightKind::TauTildeGamma,
        WeightKind::TauTildePrime,
        WeightKind::TauTildePrimeGamma,
        WeightKind::TauBar,
        WeightKind::Nu,
        WeightKind::NuPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Unit => "unit",
            WeightKind::Tau => "tau",
            WeightKind::TauTilde => "tau-tilde",
            WeightKind::TauTildeGamma => "tau-tilde-gamma",
            WeightKind::TauTildePrime => "tau-tilde-prime",
            WeightKind::TauTildePrimeGamma => "tau-tilde-prime-gamma",
            WeightKind::TauBar => "tau-bar",
            WeightKind::Nu => "nu",
            WeightKind::NuPrime => "nu-prime",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        WeightKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown weight '{s}'")))
    }

    pub fn needs_context(self) -> bool {
        matches!(
            self,
            WeightKind::TauTildePrime
                | WeightKind::TauTildePrimeGamma
                | WeightKind::TauBar
                | WeightKind::NuPrime
        )
    }
}

/// Numerators indexed by `n`, entry 0 unused.
#[derive(Debug, Clone)]
pub enum Numerators {
    Narrow(Vec<u32>),
    Wide(Vec<u64>),
}

impl Numerators {
    #[inline]
    pub fn get(&self, n: usize) -> u64 {
        match self {
            Numerators::Narrow(v) => v[n] as u64,
            Numerators::Wide(v) => v[n],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Numerators::Narrow(v) => v.len(),
            Numerators::Wide(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest valid index.
    pub fn limit(&self) -> u64 {
        self.len().saturating_sub(1) as u64
    }

    fn from_wide(v: Vec<u64>) -> Self {
        if v.iter().all(|&x| x <= u32::MAX as u64) {
            Numerators::Narrow(v.into_iter().map(|x| x as u32).collect())
        } else {
            Numerators::Wide(v)
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightTable {
    pub kind: WeightKind,
    pub numer: Numerators,
    /// `weight(n) = numer[n] · scale`.
    pub scale: f64,
}

/// What a table needs beyond the factor tables.
#[derive(Debug, Clone, Copy)]
pub struct WeightInputs<'a> {
    /// Normalising `N` (for `log N`, `N^γ` and the exceptional sets).
    pub big_n: u64,
    pub gamma: Gamma,
    pub ctx: Option<&'a WContext>,
    pub majorant: Option<&'a Majorant>,
}

const CHUNK: usize = 1 << 12;

fn tabulate<F>(limit: u64, tables: &FactorTables, f: F) -> Result<Vec<u64>>
where
    F: Fn(&Factorization) -> Result<u64> + Sync,
{
    if tables.limit() < limit {
        return Err(Error::Capacity(format!(
            "tables reach {} < {limit}",
            tables.limit()
        )));
    }
    let mut out = vec![0u64; limit as usize + 1];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .try_for_each(|(c, chunk)| -> Result<()> {
            for (j, slot) in chunk.iter_mut().enumerate() {
                let n = (c * CHUNK + j) as u64;
                if n == 0 {
                    continue;
                }
                *slot = f(&tables.factorize(n)?)?;
            }
            Ok(())
        })?;
    Ok(out)
}

fn require<T>(x: Option<T>, what: &str) -> Result<T> {
    x.ok_or_else(|| Error::InvalidArgument(format!("weight needs {what}")))
}

fn narrow(x: u128) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::Overflow("weight numerator".into()))
}

impl WeightTable {
    /// `τ(n)` read straight from the sieve.
    pub fn tau_numerators(limit: u64, tables: &FactorTables) -> Result<Numerators> {
        if tables.limit() < limit {
            return Err(Error::Capacity(format!(
                "tables reach {} < {limit}",
                tables.limit()
            )));
        }
        let s = &tables.tau_slice()[..=limit as usize];
        Ok(Numerators::Narrow(s.iter().map(|&t| t as u32).collect()))
    }

    pub fn build(kind: WeightKind, limit: u64, tables: &FactorTables, inp: WeightInputs) -> Result<Self> {
        let ln = (inp.big_n as f64).ln();
        let g = inp.gamma.reciprocal() as u64;
        let big_n = inp.big_n;
        let gamma = inp.gamma;
        let (numer, scale) = match kind {
            WeightKind::Unit => {
                let mut v = vec![1u32; limit as usize + 1];
                v[0] = 0;
                (Numerators::Narrow(v), 1.0)
            }
            WeightKind::Tau => (Self::tau_numerators(limit, tables)?, 1.0),
            WeightKind::TauTilde => (Self::tau_numerators(limit, tables)?, 1.0 / ln),
            WeightKind::TauTildeGamma => (
                Numerators::from_wide(tabulate(limit, tables, |f| {
                    Ok(truncated_divisor_count(f, big_n, gamma))
                })?),
                g as f64 / ln,
            ),
            WeightKind::TauTildePrime => {
                let ctx = require(inp.ctx, "a W-trick context")?;
                (
                    Numerators::from_wide(tabulate(limit, tables, |f| Ok(ctx.coprime_divisor_count(f)))?),
                    ctx.prime_scale(),
                )
            }
            WeightKind::TauTildePrimeGamma => {
                let ctx = require(inp.ctx, "a W-trick context")?;
                (
                    Numerators::from_wide(tabulate(limit, tables, |f| {
                        Ok(ctx.coprime_truncated_count(f, gamma))
                    })?),
                    g as f64 * ctx.prime_scale(),
                )
            }
            WeightKind::TauBar => {
                let ctx = require(inp.ctx, "a W-trick context")?;
                (
                    Numerators::from_wide(tabulate(limit, tables, |f| Ok(ctx.tau_bar_scaled(f)))?),
                    1.0 / ln,
                )
            }
            WeightKind::Nu => {
                let m = require(inp.majorant, "majorant parameters")?;
                if limit > m.big_n {
                    return Err(Error::OutOfRange {
                        value: limit as i64,
                        lo: 1,
                        hi: m.big_n as i64,
                    });
                }
                (
                    Numerators::from_wide(tabulate(limit, tables, |f| narrow(m.nu_raw_scaled(f)?))?),
                    1.0 / (m.big_n as f64).ln(),
                )
            }
            WeightKind::NuPrime => {
                let m = require(inp.majorant, "majorant parameters")?;
                let ctx = require(inp.ctx, "a W-trick context")?;
                (
                    Numerators::from_wide(tabulate(limit, tables, |f| {
                        narrow(m.nu_prime_raw_scaled(f, ctx)?)
                    })?),
                    ctx.prime_scale(),
                )
            }
        };
        Ok(WeightTable { kind, numer, scale })
    }

    pub fn limit(&self) -> u64 {
        self.numer.limit()
    }

    pub fn value(&self, n: u64) -> f64 {
        self.numer.get(n as usize) as f64 * self.scale
    }

    /// `Σ_{n ∈ [lo, hi]} numer[n]`.
    pub fn numerator_sum(&self, lo: u64, hi: u64) -> u128 {
        (lo..=hi).map(|n| self.numer.get(n as usize) as u128).sum()
    }
}
