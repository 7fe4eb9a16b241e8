//! Lattice correlation sums and the experiments built on them.

mod gowers;
mod sweep;
mod weights;

use std::time::Instant;

use serde::Serialize;

pub use gowers::{
    gowers_norm, gowers_norm_direct, GowersValue, DIRECT_WORK_CAP, U2_FAST_CAP, U3_FAST_CAP,
};
pub use sweep::{naive_sum, sweep, SweepTotals};
pub use weights::{Numerators, WeightInputs, WeightKind, WeightTable};

use crate::affine::{check_range, AffineSystem, ConvexBody};
use crate::arith::{FactorTables, Factorization};
use crate::error::{Error, Result};
use crate::local::{singular_product, BetaCache, SingularProduct, Truncation};
use crate::majorant::{sigma_m, Majorant, SigmaParams};
use crate::wtrick::WContext;

/// Rows of a system as `coeffs ++ [constant]`.
pub fn system_rows(system: &AffineSystem) -> Vec<Vec<i64>> {
    system
        .forms()
        .iter()
        .map(|f| {
            let mut r = f.coeffs.clone();
            r.push(f.constant);
            r
        })
        .collect()
}

pub fn describe_body(body: &ConvexBody) -> String {
    match body {
        ConvexBody::Box { lo, hi } => {
            let parts: Vec<String> = lo.iter().zip(hi).map(|(l, h)| format!("[{l},{h}]")).collect();
            format!("box{}", parts.join("x"))
        }
        ConvexBody::Polytope(p) => format!("polytope(d={},rows={})", p.dim(), p.constraints().0.len()),
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ModeFlags {
    /// S₂ thresholds collapse at this `N`.
    pub degenerate: bool,
    pub manual_w: bool,
    pub override_ranges: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub system: Vec<Vec<i64>>,
    pub body: String,
    pub big_n: u64,
    pub weight: WeightKind,
    /// Exact sum of weight numerators; the weighted sum is `raw · scale^t`.
    #[serde(serialize_with = "ser_u128")]
    pub raw: u128,
    pub scale: f64,
    #[serde(serialize_with = "ser_u128")]
    pub points: u128,
    pub volume: f64,
    pub volume_exact: bool,
    /// `raw · scale^t / volume`.
    pub normalized: f64,
    pub reference: Option<f64>,
    pub reference_lower: Option<f64>,
    pub reference_upper: Option<f64>,
    /// `|normalized/reference − 1|`.
    pub deviation: Option<f64>,
    pub flags: ModeFlags,
    #[serde(skip)]
    pub runtime_secs: f64,
}

fn ser_u128<S: serde::Serializer>(x: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl CorrelationReport {
    pub fn with_reference(mut self, sp: &SingularProduct) -> Self {
        self.reference = Some(sp.value);
        self.reference_lower = Some(sp.lower);
        self.reference_upper = Some(sp.upper);
        self.deviation = (sp.value != 0.0).then(|| (self.normalized / sp.value - 1.0).abs());
        self
    }
}

/// `Σ_{n∈K∩ℤ^d} ∏_i weight(ψ_i(n))` for a prepared table.
pub fn correlate(
    system: &AffineSystem,
    body: &ConvexBody,
    big_n: u64,
    table: &WeightTable,
    workers: usize,
) -> Result<CorrelationReport> {
    let start = Instant::now();
    if !check_range(system, body, big_n)? {
        return Err(Error::Range(format!("forms leave [1, {big_n}] on the body")));
    }
    if table.limit() < big_n {
        return Err(Error::Capacity(format!(
            "weight table reaches {} < N = {big_n}",
            table.limit()
        )));
    }
    let totals = sweep(system, body, &table.numer, None, workers)?;
    let vol = body.volume();
    let t = system.len() as i32;
    let normalized = if vol.value > 0.0 {
        totals.total as f64 * table.scale.powi(t) / vol.value
    } else {
        f64::NAN
    };
    Ok(CorrelationReport {
        system: system_rows(system),
        body: describe_body(body),
        big_n,
        weight: table.kind,
        raw: totals.total,
        scale: table.scale,
        points: totals.points,
        volume: vol.value,
        volume_exact: vol.exact,
        normalized,
        reference: None,
        reference_lower: None,
        reference_upper: None,
        deviation: None,
        flags: ModeFlags::default(),
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

/// Settings for the singular product used as the reference value.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceSettings {
    pub p_max: u64,
    pub truncation: Truncation,
}

impl Default for ReferenceSettings {
    fn default() -> Self {
        ReferenceSettings {
            p_max: 100_000,
            truncation: Truncation::Fixed(12),
        }
    }
}

/// Normalised `τ̃`-correlations against `∏ β_p` over a grid of `(N, K)`.
pub fn verify_main_theorem(
    system: &AffineSystem,
    grid: &[(u64, ConvexBody)],
    reference: ReferenceSettings,
    tables: &FactorTables,
    workers: usize,
) -> Result<(SingularProduct, Vec<CorrelationReport>)> {
    let sp = singular_product(system, reference.p_max, reference.truncation, &BetaCache::new())?;
    let top = grid.iter().map(|(n, _)| *n).max().unwrap_or(0);
    let tau = WeightTable::tau_numerators(top, tables)?;
    let mut out = Vec::with_capacity(grid.len());
    for (big_n, body) in grid {
        let table = WeightTable {
            kind: WeightKind::TauTilde,
            numer: tau.clone(),
            scale: 1.0 / (*big_n as f64).ln(),
        };
        let mut r = correlate(system, body, *big_n, &table, workers)?;
        r.big_n = *big_n;
        out.push(r.with_reference(&sp));
    }
    Ok((sp, out))
}

/// `σ_{−1}(a) = Σ_{d|a} 1/d`.
pub fn sigma_minus_one(a: u64) -> f64 {
    let mut s = 0.0;
    let mut d = 1u64;
    while d * d <= a {
        if a % d == 0 {
            s += 1.0 / d as f64;
            if d * d != a {
                s += d as f64 / a as f64;
            }
        }
        d += 1;
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct InghamReport {
    pub a: u64,
    pub big_n: u64,
    #[serde(serialize_with = "ser_u128")]
    pub numerator: u128,
    pub main_term: f64,
    pub ratio: f64,
}

/// `Σ_{n<=N} τ(n)τ(n+a) / ((6/π²) σ_{−1}(a) N log² N)`.
pub fn ingham(a: u64, big_n: u64, tables: &FactorTables) -> Result<InghamReport> {
    if a == 0 || big_n < 2 {
        return Err(Error::InvalidArgument(format!("need a >= 1 and N >= 2, got a={a}, N={big_n}")));
    }
    let top = big_n + a;
    if tables.limit() < top {
        return Err(Error::Capacity(format!("tables reach {} < N + a = {top}", tables.limit())));
    }
    let tau = tables.tau_slice();
    let numerator: u128 = (1..=big_n as usize)
        .map(|n| tau[n] as u128 * tau[n + a as usize] as u128)
        .sum();
    let ln = (big_n as f64).ln();
    let main_term = 6.0 / std::f64::consts::PI.powi(2) * sigma_minus_one(a) * big_n as f64 * ln * ln;
    Ok(InghamReport {
        a,
        big_n,
        numerator,
        main_term,
        ratio: numerator as f64 / main_term,
    })
}

/// The mean of `ν′_raw(𝒲m + b)` over `1 <= m <= (N − b)/𝒲`, as a numerator
/// average (the common scale cancels in every ratio below).
fn one_form_mean(nu: &Numerators, big_w: u64, b: u64, big_n: u64) -> Result<f64> {
    let m_max = (big_n - b) / big_w;
    if m_max == 0 {
        return Err(Error::Range(format!("no m with 𝒲m + {b} <= {big_n}")));
    }
    let s: u128 = (1..=m_max).map(|m| nu.get((big_w * m + b) as usize) as u128).sum();
    Ok(s as f64 / m_max as f64)
}

fn check_residues(b: &[u64], ctx: &WContext, tables: &FactorTables) -> Result<()> {
    for &bj in b {
        if bj == 0 || bj > ctx.big_w {
            return Err(Error::OutOfRange {
                value: bj as i64,
                lo: 1,
                hi: ctx.big_w as i64,
            });
        }
        let f: Factorization = tables.factorize(bj)?;
        if !ctx.varpi_divides_quotient(&f) {
            return Err(Error::InvalidArgument(format!("varpi({bj}) does not divide bigW/W")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearFormsReport {
    pub system: Vec<Vec<i64>>,
    pub body: String,
    pub big_n: u64,
    pub w: f64,
    pub big_w: u64,
    pub b: Vec<u64>,
    #[serde(serialize_with = "ser_u128")]
    pub points: u128,
    /// `C′` per form, measured from the one-form mean at its residue.
    pub c_prime: Vec<f64>,
    /// `E ∏ ν′(𝒲ψ_j(n) + b_j) / ∏ C′_j`.
    pub normalized: f64,
    pub deviation: f64,
    pub clusters_empty: bool,
}

/// Prepared `ν′` numerators over `[1, N]`.
pub fn nu_prime_table(majorant: &Majorant, ctx: &WContext, tables: &FactorTables) -> Result<WeightTable> {
    WeightTable::build(
        WeightKind::NuPrime,
        majorant.big_n,
        tables,
        WeightInputs {
            big_n: majorant.big_n,
            gamma: majorant.gamma(),
            ctx: Some(ctx),
            majorant: Some(majorant),
        },
    )
}

/// Empirical linear-forms estimate for `ν′` along `𝒲ψ_j + b_j`.
pub fn linear_forms_check(
    system: &AffineSystem,
    body: &ConvexBody,
    b: &[u64],
    ctx: &WContext,
    nu: &WeightTable,
    tables: &FactorTables,
    workers: usize,
) -> Result<LinearFormsReport> {
    system.require_finite_complexity()?;
    check_residues(b, ctx, tables)?;
    let big_n = ctx.big_n;
    if nu.limit() < big_n {
        return Err(Error::Capacity("nu-prime table shorter than N".into()));
    }
    let shifts: Vec<i64> = b.iter().map(|&x| x as i64).collect();
    let lifted = system.scaled_shifted(ctx.big_w as i64, &shifts)?;
    if !check_range(&lifted, body, big_n)? {
        return Err(Error::Range(format!("𝒲ψ(K) + b leaves [1, {big_n}]")));
    }
    let totals = sweep(&lifted, body, &nu.numer, None, workers)?;
    let c_prime = b
        .iter()
        .map(|&bj| one_form_mean(&nu.numer, ctx.big_w, bj, big_n))
        .collect::<Result<Vec<_>>>()?;
    let mean = totals.total as f64 / totals.points as f64;
    let normalized = mean / c_prime.iter().product::<f64>();
    Ok(LinearFormsReport {
        system: system_rows(system),
        body: describe_body(body),
        big_n,
        w: ctx.w,
        big_w: ctx.big_w,
        b: b.to_vec(),
        points: totals.points,
        c_prime,
        normalized,
        deviation: (normalized - 1.0).abs(),
        clusters_empty: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationConditionReport {
    pub shifts: Vec<i64>,
    pub b: Vec<u64>,
    pub interval: (u64, u64),
    /// `E_{n∈I} ∏_j ν′(𝒲(n + h_j) + b_j)/C′_j`.
    pub lhs: f64,
    /// `Σ_{i<j} σ(h_i − h_j)` at the configured `c_σ`.
    pub rhs: f64,
    pub c_sigma: f64,
    /// False when fewer than two shifts are given.
    pub applicable: bool,
    pub holds: bool,
    /// Least `c_σ >= 0` for which the inequality holds, `None` if none does.
    pub min_c_sigma: Option<f64>,
    /// Some `Δ` could not be fully factorised; `rhs` is then a lower bound.
    pub partial: bool,
}

/// Checks `E_{n∈I} ∏ ν′(𝒲(n+h_j) + b_j) <= Σ_{i<j} σ(h_i − h_j)`.
#[allow(clippy::too_many_arguments)]
pub fn correlation_condition_check(
    shifts: &[i64],
    b: &[u64],
    interval: (u64, u64),
    ctx: &WContext,
    nu: &WeightTable,
    sigma: &SigmaParams,
    tables: &FactorTables,
) -> Result<CorrelationConditionReport> {
    if shifts.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: shifts.len(),
            got: b.len(),
        });
    }
    check_residues(b, ctx, tables)?;
    let (lo, hi) = interval;
    if lo == 0 || hi < lo {
        return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
    }
    let big_w = ctx.big_w as i128;
    let limit = nu.limit() as i128;
    let c_prime = b
        .iter()
        .map(|&bj| one_form_mean(&nu.numer, ctx.big_w, bj, ctx.big_n))
        .collect::<Result<Vec<_>>>()?;
    let norm: f64 = c_prime.iter().product();
    let mut total: u128 = 0;
    for n in lo..=hi {
        let mut prod: u128 = 1;
        for (&h, &bj) in shifts.iter().zip(b) {
            let v = big_w * (n as i128 + h as i128) + bj as i128;
            if v < 1 || v > limit {
                return Err(Error::Range(format!("𝒲(n+h)+b = {v} outside [1, {limit}]")));
            }
            prod = prod
                .checked_mul(nu.numer.get(v as usize) as u128)
                .ok_or_else(|| Error::Overflow("correlation product".into()))?;
        }
        total = total
            .checked_add(prod)
            .ok_or_else(|| Error::Overflow("correlation sum".into()))?;
    }
    let lhs = total as f64 / (hi - lo + 1) as f64 / norm;
    let signed_b: Vec<i64> = b.iter().map(|&x| x as i64).collect();
    let mut prime_sums = Vec::new();
    let mut partial = false;
    for i in 0..shifts.len() {
        for j in (i + 1)..shifts.len() {
            let v = sigma_m(shifts[i] - shifts[j], ctx.big_w, &signed_b, sigma, tables)?;
            partial |= v.partial;
            prime_sums.push(if v.prime_sum.is_nan() { None } else { Some(v.prime_sum) });
        }
    }
    let rhs_at = |c: f64| -> f64 {
        prime_sums
            .iter()
            .map(|s| match s {
                Some(x) => (c * x).exp(),
                None => sigma.sigma_zero,
            })
            .sum()
    };
    let applicable = shifts.len() >= 2;
    let rhs = rhs_at(sigma.c_sigma);
    let min_c_sigma = if !applicable {
        None
    } else if lhs <= rhs_at(0.0) {
        Some(0.0)
    } else if prime_sums.iter().all(|s| s.map_or(true, |x| x == 0.0)) {
        None
    } else {
        let mut hi_c = 1.0;
        while rhs_at(hi_c) < lhs {
            hi_c *= 2.0;
        }
        let mut lo_c = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo_c + hi_c);
            if rhs_at(mid) >= lhs {
                hi_c = mid;
            } else {
                lo_c = mid;
            }
        }
        Some(hi_c)
    };
    Ok(CorrelationConditionReport {
        shifts: shifts.to_vec(),
        b: b.to_vec(),
        interval,
        lhs,
        rhs,
        c_sigma: sigma.c_sigma,
        applicable,
        holds: applicable && lhs <= rhs,
        min_c_sigma,
        partial,
    })
}

/// `E_{n∈K∩ℤ^d} ∏_i τ(ψ_i(n))^k`.
pub fn kth_moment(
    system: &AffineSystem,
    body: &ConvexBody,
    big_n: u64,
    k: u32,
    tables: &FactorTables,
    workers: usize,
) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let tau = WeightTable::tau_numerators(big_n, tables)?;
    let powered = match tau {
        Numerators::Narrow(v) => v
            .into_iter()
            .map(|x| (x as u64).checked_pow(k).ok_or_else(|| Error::Overflow("tau^k".into())))
            .collect::<Result<Vec<u64>>>()?,
        Numerators::Wide(v) => v,
    };
    let totals = sweep(system, body, &Numerators::Wide(powered), None, workers)?;
    Ok(totals.total as f64 / totals.points as f64)
}

/// Least-squares slope of `log y` against `log log N`.
pub fn loglog_slope(points: &[(u64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Serialize)]
pub struct PaucityReport {
    pub big_n: u64,
    #[serde(serialize_with = "ser_u128")]
    pub total: u128,
    #[serde(serialize_with = "ser_u128")]
    pub exceptional: u128,
    pub fraction: f64,
}

/// Share of a `τ`-correlation carried by points where some `ψ_i(n) ∈ S₁ ∪ S₂`.
pub fn exceptional_share(
    system: &AffineSystem,
    body: &ConvexBody,
    big_n: u64,
    majorant: &Majorant,
    tables: &FactorTables,
    workers: usize,
) -> Result<PaucityReport> {
    let tau = WeightTable::tau_numerators(big_n, tables)?;
    let mut mask = vec![false; big_n as usize + 1];
    for (n, slot) in mask.iter_mut().enumerate().skip(1) {
        *slot = majorant.is_exceptional(&tables.factorize(n as u64)?);
    }
    let t = sweep(system, body, &tau, Some(&mask), workers)?;
    Ok(PaucityReport {
        big_n,
        total: t.total,
        exceptional: t.flagged,
        fraction: t.flagged as f64 / t.total as f64,
    })
}
