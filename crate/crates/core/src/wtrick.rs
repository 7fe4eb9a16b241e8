//! W-trick quantities: `W`, `𝒲`, `φ(W)`, the smooth part `ϖ`, the W-tricked
//! divisor functions and the mean-value constant `μ_{𝒲,b}`.
//!
//! All three of `W`, `𝒲` and `ϖ` run over primes `p < w`. With the same
//! strict cutoff everywhere, `W | 𝒲`, `ϖ(n)` is exactly the part of `n`
//! supported on primes dividing `W`, and `τ = τ_{(·,W)=1} · τ_{smooth}`.

use serde::Serialize;

use crate::affine::small_primes;
use crate::arith::{pow_le, FactorTables, Factorization};
use crate::error::{Error, Result};
use crate::params::{loglog, Gamma, WMode};
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, Serialize)]
pub struct WContext {
    pub big_n: u64,
    pub w: f64,
    pub manual_w: bool,
    /// `(p, e_p)` with `𝒲 = ∏ p^{e_p}` over primes `p < w`.
    pub factors: Vec<(u64, u32)>,
    /// `W = ∏_{p<w} p`.
    pub w_prod: u64,
    /// `𝒲`.
    pub big_w: u64,
    pub phi_w: u64,
    /// `W = 1`: the W-trick is vacuous.
    pub trivial: bool,
}

/// Largest `e` with `e·log p <= C1·log log N`, floored at 1 so that `W | 𝒲`.
fn enriched_exponent(p: u64, c1: f64, big_n: u64) -> u32 {
    let budget = c1 * loglog(big_n);
    let lp = (p as f64).ln();
    let mut e = 1u32;
    while (e + 1) as f64 * lp <= budget {
        e += 1;
    }
    e
}

pub fn make_context(big_n: u64, c1: f64, w_mode: WMode) -> Result<WContext> {
    if big_n < 3 {
        return Err(Error::InvalidArgument(format!("N must be >= 3, got {big_n}")));
    }
    let (w, manual_w) = match w_mode {
        WMode::Asymptotic => (0.5 * loglog(big_n), false),
        WMode::Manual(w) => {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidArgument(format!("manual w must be > 0, got {w}")));
            }
            (w, true)
        }
    };
    let bound = if w > 2.0 { w.ceil() as u64 } else { 1 };
    let primes: Vec<u64> = small_primes(bound)
        .into_iter()
        .filter(|&p| (p as f64) < w)
        .collect();
    let mut factors = Vec::with_capacity(primes.len());
    let mut w_prod: u64 = 1;
    let mut big_w: u64 = 1;
    let mut phi_w: u64 = 1;
    let overflow = || Error::Capacity("W-trick modulus exceeds 64 bits".into());
    for &p in &primes {
        let e = enriched_exponent(p, c1, big_n);
        factors.push((p, e));
        w_prod = w_prod.checked_mul(p).ok_or_else(overflow)?;
        phi_w *= p - 1;
        big_w = p
            .checked_pow(e)
            .and_then(|pe| big_w.checked_mul(pe))
            .ok_or_else(overflow)?;
    }
    Ok(WContext {
        big_n,
        w,
        manual_w,
        factors,
        w_prod,
        big_w,
        phi_w,
        trivial: w_prod == 1,
    })
}

impl WContext {
    pub fn divides_w(&self, p: u64) -> bool {
        self.factors.iter().any(|&(q, _)| q == p)
    }

    fn enriched(&self, p: u64) -> Option<u32> {
        self.factors.iter().find(|&&(q, _)| q == p).map(|&(_, e)| e)
    }

    /// `W / (φ(W) log N)`.
    pub fn prime_scale(&self) -> f64 {
        self.w_prod as f64 / (self.phi_w as f64 * (self.big_n as f64).ln())
    }

    /// Number of divisors of `n` coprime to `W`.
    pub fn coprime_divisor_count(&self, f: &Factorization) -> u64 {
        f.pairs()
            .iter()
            .filter(|&&(p, _)| !self.divides_w(p))
            .map(|&(_, a)| a as u64 + 1)
            .product()
    }

    /// Number of divisors `d | n` with `(d, W) = 1` and `d^g <= N`.
    pub fn coprime_truncated_count(&self, f: &Factorization, gamma: Gamma) -> u64 {
        let g = gamma.reciprocal() as u64;
        let rough = Factorization(
            f.pairs()
                .iter()
                .copied()
                .filter(|&(p, _)| !self.divides_w(p))
                .collect(),
        );
        rough
            .divisors()
            .into_iter()
            .filter(|&d| pow_le(d, g, self.big_n))
            .count() as u64
    }

    /// Number of divisors of `n` supported on primes `p < w`.
    pub fn smooth_divisor_count(&self, f: &Factorization) -> u64 {
        f.pairs()
            .iter()
            .filter(|&&(p, _)| self.divides_w(p))
            .map(|&(_, a)| a as u64 + 1)
            .product()
    }

    /// `ϖ(n)`: the part of `n` supported on primes `p < w`.
    pub fn varpi(&self, f: &Factorization) -> u128 {
        f.pairs()
            .iter()
            .filter(|&&(p, _)| self.divides_w(p))
            .map(|&(p, a)| (p as u128).pow(a))
            .product()
    }

    /// Whether `ϖ(n) | 𝒲`.
    pub fn varpi_divides_big_w(&self, f: &Factorization) -> bool {
        f.pairs()
            .iter()
            .all(|&(p, a)| self.enriched(p).map_or(true, |e| a <= e))
    }

    /// Whether `ϖ(n) | 𝒲/W`.
    pub fn varpi_divides_quotient(&self, f: &Factorization) -> bool {
        f.pairs()
            .iter()
            .all(|&(p, a)| self.enriched(p).map_or(true, |e| a < e))
    }

    /// `τ̄(n)·log N`, an integer: the coprime divisor count times
    /// `1_{ϖ(n)|𝒲} ∏_{p<w} (min(v_p(n), v_p(𝒲)) + 1)`.
    pub fn tau_bar_scaled(&self, f: &Factorization) -> u64 {
        if !self.varpi_divides_big_w(f) {
            return 0;
        }
        let smooth: u64 = self
            .factors
            .iter()
            .map(|&(p, e)| f.valuation(p).min(e) as u64 + 1)
            .product();
        self.coprime_divisor_count(f) * smooth
    }
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

/// `τ̃′(n) = (W/φ(W)) (log N)^{−1} #{d | n : (d, W) = 1}`.
pub fn tau_tilde_prime(n: u64, ctx: &WContext, tables: &FactorTables) -> Result<f64> {
    check_n(n, ctx.big_n)?;
    let f = tables.factorize(n)?;
    Ok(ctx.coprime_divisor_count(&f) as f64 * ctx.prime_scale())
}

/// `τ̃′_γ(n) = (W/φ(W)) (γ log N)^{−1} #{d | n : d <= N^γ, (d, W) = 1}`.
pub fn tau_tilde_prime_gamma(
    n: u64,
    ctx: &WContext,
    gamma: Gamma,
    tables: &FactorTables,
) -> Result<f64> {
    check_n(n, ctx.big_n)?;
    let f = tables.factorize(n)?;
    Ok(ctx.coprime_truncated_count(&f, gamma) as f64
        * gamma.reciprocal() as f64
        * ctx.prime_scale())
}

pub fn varpi(n: u64, ctx: &WContext, tables: &FactorTables) -> Result<u128> {
    if n == 0 {
        return Err(Error::InvalidArgument("varpi needs n >= 1".into()));
    }
    Ok(ctx.varpi(&tables.factorize(n)?))
}

/// `τ̄(n)`; equals `τ̃(n)` when `ϖ(n) | 𝒲` and 0 otherwise.
pub fn tau_bar(n: u64, ctx: &WContext, tables: &FactorTables) -> Result<f64> {
    check_n(n, ctx.big_n)?;
    let f = tables.factorize(n)?;
    Ok(ctx.tau_bar_scaled(&f) as f64 / (ctx.big_n as f64).ln())
}

/// `ϖ(b)` for `b` given directly, using trial division by the primes `p < w`.
fn varpi_direct(b: u64, ctx: &WContext) -> (u64, bool) {
    let mut smooth = 1u64;
    let mut ok = true;
    for &(p, e) in &ctx.factors {
        let mut a = 0;
        let mut m = b;
        while m % p == 0 {
            m /= p;
            a += 1;
            smooth *= p;
        }
        ok &= a < e;
    }
    (smooth, ok)
}

/// `μ_{𝒲,b} = (W/(φ(W) log N)) Σ_{d <= (N/ϖ(b))^{1/2}, (d,W)=1} 2(1/d − ϖ(b)d/N)`.
pub fn mu_wb(b: u64, ctx: &WContext) -> Result<f64> {
    if b == 0 || b > ctx.big_w {
        return Err(Error::OutOfRange {
            value: b as i64,
            lo: 1,
            hi: ctx.big_w as i64,
        });
    }
    let (vb, ok) = varpi_direct(b, ctx);
    if !ok {
        return Err(Error::InvalidArgument(format!(
            "varpi({b}) = {vb} does not divide bigW/W"
        )));
    }
    let big_n = ctx.big_n as f64;
    let vbf = vb as f64;
    // largest d with d^2 · ϖ(b) <= N
    let mut d_max = ((ctx.big_n / vb) as f64).sqrt() as u64;
    while (d_max + 1) * (d_max + 1) * vb <= ctx.big_n {
        d_max += 1;
    }
    while d_max > 0 && d_max * d_max * vb > ctx.big_n {
        d_max -= 1;
    }
    let mut acc = CompensatedSum::default();
    for d in 1..=d_max {
        if ctx.factors.iter().any(|&(p, _)| d % p == 0) {
            continue;
        }
        let df = d as f64;
        acc.add(2.0 * (1.0 / df - vbf * df / big_n));
    }
    Ok(ctx.prime_scale() * acc.value())
}
