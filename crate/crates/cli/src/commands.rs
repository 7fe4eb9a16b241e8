//! One function per subcommand. Each returns the CSV body plus a JSON summary;
//! nothing time-dependent goes into the CSV.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use divcorr_core::affine::{AffineSystem, ConvexBody, Polytope};
use divcorr_core::arith::{build_tables, ExceptionalThresholds, FactorTables};
use divcorr_core::engine::{
    correlate, correlation_condition_check, gowers_norm, ingham, linear_forms_check,
    naive_sum, nu_prime_table, system_rows, describe_body, verify_main_theorem,
    CorrelationReport, Numerators, ReferenceSettings, WeightInputs, WeightKind, WeightTable,
};
use divcorr_core::local::{alpha, singular_product, BetaCache, Truncation};
use divcorr_core::majorant::{xis_bound, xis_density, ClusterSpec, Majorant, SigmaParams};
use divcorr_core::params::{Gamma, MajorantParams, RangeMode, WMode};
use divcorr_core::wtrick::{make_context, WContext};
use divcorr_core::Error;

use crate::config::{BodySpec, Bound, Command, RunConfig};
use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub csv: String,
    pub summary: Value,
    /// Mode flags: degenerate regime, manual w, override ranges.
    pub flags: BTreeMap<String, Value>,
    /// SHA-256 of input tables.
    pub checksums: BTreeMap<String, String>,
}

type Res<T> = Result<T, CliError>;

fn missing(key: &str) -> CliError {
    CliError::Config(format!("missing required key '{key}'"))
}

fn to_csv<T: Serialize>(rows: &[T]) -> Res<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn rows_string(rows: &[Vec<i64>]) -> String {
    rows.iter().map(|r| join(r, ",")).collect::<Vec<_>>().join(";")
}

pub fn tau_checksum(tables: &FactorTables, limit: u64) -> String {
    let mut h = Sha256::new();
    for &t in &tables.tau_slice()[..=limit as usize] {
        h.update(t.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

struct Env<'a> {
    cfg: &'a RunConfig,
}

impl Env<'_> {
    fn n(&self) -> Res<u64> {
        let n = self.cfg.n.ok_or_else(|| missing("n"))?;
        if n < 3 {
            return Err(CliError::Config(format!("n must be >= 3, got {n}")));
        }
        Ok(n)
    }

    fn grid(&self) -> Res<Vec<u64>> {
        match &self.cfg.grid {
            Some(g) if !g.is_empty() => {
                if g.iter().any(|&n| n < 3) {
                    return Err(CliError::Config("grid values must be >= 3".into()));
                }
                Ok(g.clone())
            }
            _ => Ok(vec![self.n()?]),
        }
    }

    fn system(&self) -> Res<AffineSystem> {
        let rows = self.cfg.system.as_ref().ok_or_else(|| missing("system"))?;
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        if refs.is_empty() {
            return Err(CliError::Config("system needs at least one form".into()));
        }
        Ok(AffineSystem::from_rows(&refs)?)
    }

    fn gamma(&self) -> Res<Gamma> {
        Ok(Gamma::parse(self.cfg.gamma.as_deref().unwrap_or("1/4"))?)
    }

    fn c1(&self) -> f64 {
        self.cfg.c1.unwrap_or(2.0)
    }

    fn w_mode(&self) -> WMode {
        self.cfg.w.map_or(WMode::Asymptotic, WMode::Manual)
    }

    fn trunc(&self) -> u32 {
        self.cfg.trunc.unwrap_or(12)
    }

    fn pmax(&self) -> u64 {
        self.cfg.pmax.unwrap_or(100_000)
    }

    fn params(&self) -> Res<MajorantParams> {
        let range = |r: Option<[u32; 2]>| {
            r.map_or(RangeMode::Asymptotic, |[lo, hi]| RangeMode::Manual { lo, hi })
        };
        let p = MajorantParams {
            gamma: self.gamma()?,
            c1: self.c1(),
            s_range: range(self.cfg.s_range),
            i_range: range(self.cfg.i_range),
            w_mode: self.w_mode(),
        };
        p.validate()?;
        Ok(p)
    }

    fn seed(&self) -> u64 {
        self.cfg.seed.unwrap_or(DEFAULT_SEED)
    }

    fn weight(&self, default: WeightKind) -> Res<WeightKind> {
        match &self.cfg.weight {
            Some(s) => Ok(WeightKind::parse(s)?),
            None => Ok(default),
        }
    }

    fn body(&self, d: usize, n: u64) -> Res<ConvexBody> {
        let default;
        let spec: &BodySpec = match &self.cfg.body {
            Some(b) => b,
            None if d == 1 => {
                default = BodySpec {
                    lo: Some(vec![Bound::Int(1)]),
                    hi: Some(vec![Bound::Expr("N-1".into())]),
                    ..Default::default()
                };
                &default
            }
            None => return Err(missing("body")),
        };
        let eval = |v: &Vec<Bound>| v.iter().map(|b| b.eval(n)).collect::<Res<Vec<i64>>>();
        match (&spec.lo, &spec.hi, &spec.a, &spec.b) {
            (Some(lo), Some(hi), None, None) => Ok(ConvexBody::new_box(eval(lo)?, eval(hi)?)?),
            (None, None, Some(a), Some(b)) => {
                Ok(ConvexBody::Polytope(Polytope::new(a.clone(), eval(b)?)?))
            }
            _ => Err(CliError::Config("body needs either lo/hi or a/b".into())),
        }
    }

    fn context(&self, n: u64) -> Res<WContext> {
        Ok(make_context(n, self.c1(), self.w_mode())?)
    }
}

fn mode_flags(out: &mut RunOutput, cfg: &RunConfig, degenerate: bool) {
    out.flags.insert("degenerate_regime".into(), json!(degenerate));
    out.flags.insert("manual_w".into(), json!(cfg.w.is_some()));
    out.flags.insert(
        "override_ranges".into(),
        json!(cfg.s_range.is_some() || cfg.i_range.is_some()),
    );
}

fn tables_for(limit: u64, out: &mut RunOutput) -> Res<FactorTables> {
    let t = build_tables(limit)?;
    out.checksums.insert(format!("tau[1..={limit}]"), tau_checksum(&t, limit));
    Ok(t)
}

pub fn run(command: Command, cfg: &RunConfig) -> Res<RunOutput> {
    let cfg = &cfg.with_defaults();
    let env = Env { cfg };
    let body = || -> Res<RunOutput> {
        match command {
            Command::Sieve => sieve(&env),
            Command::Alpha => alpha_cmd(&env),
            Command::Beta => beta_cmd(&env),
            Command::SingularProduct => singular_product_cmd(&env),
            Command::Correlate => correlate_cmd(&env),
            Command::VerifyMainTheorem => verify_cmd(&env),
            Command::Ingham => ingham_cmd(&env),
            Command::MajorantCheck => majorant_cmd(&env),
            Command::ExceptionalDensity => exceptional_cmd(&env),
            Command::LinearFormsCheck => linear_forms_cmd(&env),
            Command::CorrelationCheck => correlation_cmd(&env),
            Command::Gowers => gowers_cmd(&env),
            Command::Oracle => oracle_cmd(&env),
        }
    };
    match cfg.workers {
        Some(w) if w > 0 => divcorr_core::summation::pool(w).install(body),
        _ => body(),
    }
}

#[derive(Serialize)]
struct SieveRow {
    n: u64,
    primes: usize,
    tau_sum: String,
    max_tau: u64,
    argmax_tau: u64,
}

fn sieve(env: &Env) -> Res<RunOutput> {
    let n = env.n()?;
    let mut out = RunOutput::default();
    let t = tables_for(n, &mut out)?;
    let tau = &t.tau_slice()[..=n as usize];
    let (mut best, mut arg) = (0u64, 1u64);
    let mut sum: u128 = 0;
    for (k, &v) in tau.iter().enumerate().skip(1) {
        sum += v as u128;
        if v as u64 > best {
            best = v as u64;
            arg = k as u64;
        }
    }
    let row = SieveRow {
        n,
        primes: t.primes_up_to(n).len(),
        tau_sum: sum.to_string(),
        max_tau: best,
        argmax_tau: arg,
    };
    out.csv = to_csv(&[row])?;
    out.summary = json!({ "n": n });
    Ok(out)
}

#[derive(Serialize)]
struct AlphaRow {
    moduli: String,
    alpha: String,
    alpha_f64: f64,
}

fn alpha_cmd(env: &Env) -> Res<RunOutput> {
    let s = env.system()?;
    let moduli: Vec<u64> = match (&env.cfg.moduli, env.cfg.p, &env.cfg.exps) {
        (Some(m), _, _) => m.clone(),
        (None, Some(p), Some(e)) => e
            .iter()
            .map(|&a| p.checked_pow(a).ok_or_else(|| CliError::Core(Error::Overflow("p^a".into()))))
            .collect::<Res<_>>()?,
        _ => return Err(CliError::Config("alpha needs 'moduli' or 'p' with 'exps'".into())),
    };
    let v = alpha(&s, &moduli)?;
    let row = AlphaRow {
        moduli: join(&moduli, ";"),
        alpha: v.to_string(),
        alpha_f64: v.to_f64(),
    };
    let mut out = RunOutput::default();
    out.csv = to_csv(&[row])?;
    out.summary = json!({ "system": system_rows(&s) });
    Ok(out)
}

#[derive(Serialize)]
struct BetaRow {
    p: u64,
    a_cap: u32,
    lower: f64,
    upper: f64,
    exact_lower: Option<String>,
    exact_tail: Option<String>,
}

fn beta_cmd(env: &Env) -> Res<RunOutput> {
    let s = env.system()?;
    let a = env.trunc();
    let primes: Vec<u64> = match env.cfg.p {
        Some(p) => vec![p],
        None => divcorr_core::affine::small_primes(env.pmax()),
    };
    let cache = BetaCache::new();
    let single = primes.len() == 1;
    let mut rows = Vec::with_capacity(primes.len());
    for p in primes {
        let b = cache.beta_p(&s, p, a)?;
        rows.push(BetaRow {
            p,
            a_cap: b.a_cap,
            lower: b.value.to_f64(),
            upper: b.upper().to_f64(),
            exact_lower: single.then(|| b.value.to_string()),
            exact_tail: single.then(|| b.tail_bound.to_string()),
        });
    }
    let mut out = RunOutput::default();
    out.csv = to_csv(&rows)?;
    out.summary = json!({ "system": system_rows(&s), "trunc": a });
    Ok(out)
}

#[derive(Serialize)]
struct ProductRow {
    kind: &'static str,
    p: u64,
    value: f64,
    lower: Option<f64>,
    upper: Option<f64>,
}

fn singular_product_cmd(env: &Env) -> Res<RunOutput> {
    let s = env.system()?;
    let sp = singular_product(&s, env.pmax(), Truncation::Fixed(env.trunc()), &BetaCache::new())?;
    let mut rows: Vec<ProductRow> = sp
        .partial_products
        .iter()
        .map(|&(p, v)| ProductRow {
            kind: "partial",
            p,
            value: v,
            lower: None,
            upper: None,
        })
        .collect();
    rows.push(ProductRow {
        kind: "final",
        p: sp.p_max,
        value: sp.value,
        lower: Some(sp.lower),
        upper: Some(sp.upper),
    });
    let mut out = RunOutput::default();
    out.csv = to_csv(&rows)?;
    out.summary = json!({
        "system": system_rows(&s),
        "value": sp.value,
        "lower": sp.lower,
        "upper": sp.upper,
        "finite_complexity": sp.finite_complexity,
        "largest_exceptional_prime": sp.largest_exceptional_prime,
        "fit": sp.fit,
        "extrapolated": sp.extrapolated,
    });
    Ok(out)
}

#[derive(Serialize)]
struct CorrelationRow {
    system: String,
    body: String,
    n: u64,
    weight: &'static str,
    raw: String,
    scale: f64,
    points: String,
    volume: f64,
    volume_exact: bool,
    normalized: f64,
    reference: Option<f64>,
    reference_lower: Option<f64>,
    reference_upper: Option<f64>,
    deviation: Option<f64>,
}

impl From<&CorrelationReport> for CorrelationRow {
    fn from(r: &CorrelationReport) -> Self {
        CorrelationRow {
            system: rows_string(&r.system),
            body: r.body.clone(),
            n: r.big_n,
            weight: r.weight.name(),
            raw: r.raw.to_string(),
            scale: r.scale,
            points: r.points.to_string(),
            volume: r.volume,
            volume_exact: r.volume_exact,
            normalized: r.normalized,
            reference: r.reference,
            reference_lower: r.reference_lower,
            reference_upper: r.reference_upper,
            deviation: r.deviation,
        }
    }
}

fn correlate_cmd(env: &Env) -> Res<RunOutput> {
    let s = env.system()?;
    let n = env.n()?;
    let body = env.body(s.dim(), n)?;
    let kind = env.weight(WeightKind::TauTilde)?;
    let mut out = RunOutput::default();
    let t = tables_for(n, &mut out)?;
    let params = env.params()?;
    let needs_majorant = matches!(kind, WeightKind::Nu | WeightKind::NuPrime);
    let majorant = needs_majorant.then(|| Majorant::new(n, params)).transpose()?;
    let ctx = kind.needs_context().then(|| env.context(n)).transpose()?;
    let table = WeightTable::build(
        kind,
        n,
        &t,
        WeightInputs {
            big_n: n,
            gamma: params.gamma,
            ctx: ctx.as_ref(),
            majorant: majorant.as_ref(),
        },
    )?;
    let r = correlate(&s, &body, n, &table, 0)?;
    let degenerate = ExceptionalThresholds::new(n, params.c1, params.gamma).degenerate();
    mode_flags(&mut out, env.cfg, degenerate);
    out.csv = to_csv(&[CorrelationRow::from(&r)])?;
    out.summary = json!({ "raw": r.raw.to_string(), "normalized": r.normalized });
    Ok(out)
}

fn verify_cmd(env: &Env) -> Res<RunOutput> {
    let s = env.system()?;
    let grid = env.grid()?;
    let mut out = RunOutput::default();
    let top = *grid.iter().max().expect("nonempty grid");
    let t = tables_for(top, &mut out)?;
    let bodies = grid
        .iter()
        .map(|&n| Ok((n, env.body(s.dim(), n)?)))
        .collect::<Res<Vec<_>>>()?;
    let reference = ReferenceSettings {
        p_max: env.pmax(),
        truncation: Truncation::Fixed(env.trunc()),
    };
    let (sp, reports) = verify_main_theorem(&s, &bodies, reference, &t, 0)?;
    let rows: Vec<CorrelationRow> = reports.iter().map(CorrelationRow::from).collect();
    let devs: Vec<Option<f64>> = reports.iter().map(|r| r.deviation).collect();
    let decreasing = devs.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b < a));
    let runtimes: Vec<f64> = reports.iter().map(|r| r.runtime_secs).collect();
    mode_flags(&mut out, env.cfg, false);
    out.csv = to_csv(&rows)?;
    out.summary = json!({
        "singular_product": sp.value,
        "deviations": devs,
        "strictly_decreasing": decreasing,
        "sweep_runtimes_secs": runtimes,
    });
    Ok(out)
}

#[derive(Serialize)]
struct InghamRow {
    a: u64,
    n: u64,
    numerator: String,
    main_term: f64,
    ratio: f64,
}

fn ingham_cmd(env: &Env) -> Res<RunOutput> {
    let a = env.cfg.a.unwrap_or(1);
    let grid = env.grid()?;
    let mut out = RunOutput::default();
    let top = grid.iter().max().expect("nonempty grid") + a;
    let t = tables_for(top, &mut out)?;
    let rows = grid
        .iter()
        .map(|&n| {
            let r = ingham(a, n, &t)?;
            Ok(InghamRow {
                a,
                n,
                numerator: r.numerator.to_string(),
                main_term: r.main_term,
                ratio: r.ratio,
            })
        })
        .collect::<Res<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    out.csv = to_csv(&rows)?;
    out.summary = json!({ "a": a, "ratios": ratios });
    Ok(out)
}

#[derive(Serialize)]
struct MajorantRow {
    n: u64,
    gamma: f64,
    c1: f64,
    ranges: &'static str,
    cluster_terms: usize,
    clusters_empty: bool,
    degenerate: bool,
    violations: u64,
    mean_tau_tilde: f64,
    mean_nu: f64,
}

/// Exhaustive majorisation count and the mean of `ν_raw` at one `N`.
pub fn majorant_row(n: u64, params: MajorantParams, t: &FactorTables) -> Res<(u64, f64, f64, Majorant)> {
    let m = Majorant::new(n, params)?;
    let nu = WeightTable::build(
        WeightKind::Nu,
        n,
        t,
        WeightInputs {
            big_n: n,
            gamma: params.gamma,
            ctx: None,
            majorant: Some(&m),
        },
    )?;
    let tau = t.tau_slice();
    let mut violations = 0u64;
    let mut nu_sum: u128 = 0;
    let mut tau_sum: u128 = 0;
    for k in 1..=n as usize {
        let v = nu.numer.get(k);
        // both sides carry the factor 1/log N
        if (tau[k] as u64) > v {
            violations += 1;
        }
        nu_sum += v as u128;
        tau_sum += tau[k] as u128;
    }
    let ln = (n as f64).ln();
    Ok((
        violations,
        tau_sum as f64 / n as f64 / ln,
        nu_sum as f64 / n as f64 / ln,
        m,
    ))
}

fn majorant_cmd(env: &Env) -> Res<RunOutput> {
    let grid = env.grid()?;
    let params = env.params()?;
    let mut out = RunOutput::default();
    let t = tables_for(*grid.iter().max().expect("nonempty grid"), &mut out)?;
    let mut rows = Vec::new();
    for &n in &grid {
        let (violations, mean_tau, mean_nu, m) = majorant_row(n, params, &t)?;
        rows.push(MajorantRow {
            n,
            gamma: params.gamma.value(),
            c1: params.c1,
            ranges: if m.manual_ranges { "manual" } else { "asymptotic" },
            cluster_terms: m.terms.len(),
            clusters_empty: m.clusters_empty,
            degenerate: m.degenerate,
            violations,
            mean_tau_tilde: mean_tau,
            mean_nu,
        });
    }
    let means: Vec<f64> = rows.iter().map(|r| r.mean_nu).collect();
    let c = means.iter().cloned().fold(f64::MIN, f64::max);
    let lo = means.iter().cloned().fold(f64::MAX, f64::min);
    mode_flags(&mut out, env.cfg, rows.iter().any(|r| r.degenerate));
    out.csv = to_csv(&rows)?;
    out.summary = json!({
        "measured_c": c,
        "mass_ratio": c / lo,
        "total_violations": rows.iter().map(|r| r.violations).sum::<u64>(),
    });
    Ok(out)
}

#[derive(Serialize)]
struct DensityRow {
    kind: &'static str,
    n: u64,
    i: Option<u32>,
    s: Option<u32>,
    m0: Option<u32>,
    density: f64,
    bound: Option<f64>,
}

/// Densities of S₁ and S₂ among `n <= N`.
pub fn exceptional_densities(n: u64, c1: f64, gamma: Gamma, t: &FactorTables) -> Res<(f64, f64, bool)> {
    let th = ExceptionalThresholds::new(n, c1, gamma);
    let (mut s1, mut s2) = (0u64, 0u64);
    for k in 1..=n {
        let f = t.factorize(k)?;
        s1 += th.is_rough(&f) as u64;
        s2 += th.is_smooth(&f) as u64;
    }
    Ok((s1 as f64 / n as f64, s2 as f64 / n as f64, th.degenerate()))
}

fn exceptional_cmd(env: &Env) -> Res<RunOutput> {
    let grid = env.grid()?;
    let gamma = env.gamma()?;
    let mut out = RunOutput::default();
    let t = tables_for(*grid.iter().max().expect("nonempty grid"), &mut out)?;
    let levels = env.cfg.levels.clone().unwrap_or_else(|| vec![8, 16]);
    let intervals = env.cfg.intervals.clone().unwrap_or_else(|| vec![1, 2, 3, 4]);
    let mut rows = Vec::new();
    let mut degenerate = false;
    for &n in &grid {
        let (s1, s2, deg) = exceptional_densities(n, env.c1(), gamma, &t)?;
        degenerate |= deg;
        for (kind, d) in [("s1", s1), ("s2", s2)] {
            rows.push(DensityRow { kind, n, i: None, s: None, m0: None, density: d, bound: None });
        }
        for &s in &levels {
            for &i in &intervals {
                let Some(spec) = ClusterSpec::new(i, s, gamma) else { continue };
                rows.push(DensityRow {
                    kind: "xis",
                    n,
                    i: Some(i),
                    s: Some(s),
                    m0: Some(spec.m0),
                    density: xis_density(&spec, n, &t)?,
                    bound: Some(xis_bound(&spec, n, &t)),
                });
            }
        }
    }
    mode_flags(&mut out, env.cfg, degenerate);
    out.csv = to_csv(&rows)?;
    out.summary = json!({ "grid": grid, "levels": levels, "intervals": intervals });
    Ok(out)
}

fn residues(env: &Env, t: usize) -> Vec<u64> {
    env.cfg.b.clone().unwrap_or_else(|| vec![1; t])
}

#[derive(Serialize)]
struct LinearFormsRow {
    system: String,
    body: String,
    n: u64,
    w: f64,
    big_w: u64,
    b: String,
    points: String,
    c_prime: String,
    normalized: f64,
    deviation: f64,
}

fn linear_forms_cmd(env: &Env) -> Res<RunOutput> {
    let s = env.system()?;
    let n = env.n()?;
    let body = env.body(s.dim(), n)?;
    let b = residues(env, s.len());
    let params = env.params()?;
    let mut out = RunOutput::default();
    let t = tables_for(n, &mut out)?;
    let ctx = env.context(n)?;
    let m = Majorant::new(n, params)?;
    let nu = nu_prime_table(&m, &ctx, &t)?;
    let r = linear_forms_check(&s, &body, &b, &ctx, &nu, &t, 0)?;
    mode_flags(&mut out, env.cfg, m.degenerate);
    out.flags.insert("clusters_empty".into(), json!(m.clusters_empty));
    out.csv = to_csv(&[LinearFormsRow {
        system: rows_string(&r.system),
        body: r.body.clone(),
        n,
        w: r.w,
        big_w: r.big_w,
        b: join(&r.b, ";"),
        points: r.points.to_string(),
        c_prime: join(&r.c_prime, ";"),
        normalized: r.normalized,
        deviation: r.deviation,
    }])?;
    out.summary = json!({ "deviation": r.deviation, "big_w": ctx.big_w, "w_prod": ctx.w_prod });
    Ok(out)
}

#[derive(Serialize)]
struct CorrelationCheckRow {
    shifts: String,
    b: String,
    lo: u64,
    hi: u64,
    lhs: f64,
    rhs: f64,
    c_sigma: f64,
    applicable: bool,
    holds: bool,
    min_c_sigma: Option<f64>,
    partial: bool,
}

/// `count` tuples of `size` distinct shifts in `[0, max_shift]`.
pub fn random_shift_tuples(seed: u64, count: usize, size: usize, max_shift: i64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<i64> = (0..=max_shift).collect();
    (0..count)
        .map(|_| {
            let mut v: Vec<i64> = pool.choose_multiple(&mut rng, size).copied().collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn correlation_cmd(env: &Env) -> Res<RunOutput> {
    let n = env.n()?;
    let params = env.params()?;
    let max_shift = env.cfg.max_shift.unwrap_or(100);
    let tuples = match &env.cfg.shifts {
        Some(s) => s.clone(),
        None => {
            let size = env.cfg.tuple_size.unwrap_or(2);
            if size as i64 > max_shift + 1 {
                return Err(CliError::Config("tuple_size exceeds the shift range".into()));
            }
            random_shift_tuples(env.seed(), env.cfg.tuples.unwrap_or(50), size, max_shift)
        }
    };
    let mut out = RunOutput::default();
    let t = tables_for(n, &mut out)?;
    let ctx = env.context(n)?;
    let m = Majorant::new(n, params)?;
    let nu = nu_prime_table(&m, &ctx, &t)?;
    let mut rows = Vec::new();
    for h in &tuples {
        let b = env.cfg.b.clone().unwrap_or_else(|| vec![1; h.len()]);
        let bmax = *b.iter().max().unwrap_or(&1);
        let hmax = *h.iter().max().unwrap_or(&0);
        let hmin = *h.iter().min().unwrap_or(&0);
        let top = ((n - bmax) / ctx.big_w) as i64 - hmax;
        let lo = (1 - hmin).max(1);
        if top < lo {
            return Err(CliError::Core(Error::Range("no n keeps 𝒲(n+h)+b inside [1, N]".into())));
        }
        let mut sigma = SigmaParams::new(ctx.w, env.cfg.c_sigma.unwrap_or(1.0), h.len() as u32)?;
        if let Some(z) = env.cfg.sigma_zero {
            sigma.sigma_zero = z;
        }
        let r = correlation_condition_check(h, &b, (lo as u64, top as u64), &ctx, &nu, &sigma, &t)?;
        rows.push(CorrelationCheckRow {
            shifts: join(h, ";"),
            b: join(&b, ";"),
            lo: lo as u64,
            hi: top as u64,
            lhs: r.lhs,
            rhs: r.rhs,
            c_sigma: r.c_sigma,
            applicable: r.applicable,
            holds: r.holds,
            min_c_sigma: r.min_c_sigma,
            partial: r.partial,
        });
    }
    let applicable: Vec<&CorrelationCheckRow> = rows.iter().filter(|r| r.applicable).collect();
    let worst = applicable
        .iter()
        .map(|r| r.min_c_sigma.unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    mode_flags(&mut out, env.cfg, m.degenerate);
    out.csv = to_csv(&rows)?;
    out.summary = json!({
        "all_hold": applicable.iter().all(|r| r.holds),
        "minimal_c_sigma": worst,
        "tuples": rows.len(),
    });
    Ok(out)
}

#[derive(Serialize)]
struct GowersRow {
    n: u64,
    s: u32,
    weight: &'static str,
    w: f64,
    average: f64,
    norm: f64,
}

/// `weight − mean` on `[1, N]`.
pub fn centred_weight(kind: WeightKind, n: u64, inp: WeightInputs, t: &FactorTables) -> Res<Vec<f64>> {
    let table = WeightTable::build(kind, n, t, inp)?;
    let f: Vec<f64> = (1..=n).map(|k| table.value(k)).collect();
    let mean = divcorr_core::summation::pairwise_mean(&f);
    Ok(f.into_iter().map(|x| x - mean).collect())
}

fn gowers_cmd(env: &Env) -> Res<RunOutput> {
    let grid = env.grid()?;
    let s = env.cfg.s.unwrap_or(2);
    let kind = env.weight(WeightKind::TauTildePrime)?;
    let params = env.params()?;
    let mut out = RunOutput::default();
    let t = tables_for(*grid.iter().max().expect("nonempty grid"), &mut out)?;
    let mut rows = Vec::new();
    for &n in &grid {
        let ctx = env.context(n)?;
        let m = matches!(kind, WeightKind::Nu | WeightKind::NuPrime)
            .then(|| Majorant::new(n, params))
            .transpose()?;
        let inp = WeightInputs {
            big_n: n,
            gamma: params.gamma,
            ctx: Some(&ctx),
            majorant: m.as_ref(),
        };
        let f = centred_weight(kind, n, inp, &t)?;
        let g = gowers_norm(&f, s)?;
        rows.push(GowersRow {
            n,
            s,
            weight: kind.name(),
            w: ctx.w,
            average: g.average,
            norm: g.norm,
        });
    }
    let norms: Vec<f64> = rows.iter().map(|r| r.norm).collect();
    mode_flags(&mut out, env.cfg, false);
    out.csv = to_csv(&rows)?;
    out.summary = json!({
        "norms": norms,
        "non_increasing": norms.windows(2).all(|w| w[1] <= w[0]),
        "extension": "zero outside [N]",
    });
    Ok(out)
}

/// `τ(n)` by trial division.
pub fn naive_tau(n: u64) -> u64 {
    let mut c = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            c += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    c
}

#[derive(Serialize)]
struct OracleRow {
    target: String,
    system: String,
    body: String,
    n: u64,
    weight: &'static str,
    raw: String,
}

fn oracle_cmd(env: &Env) -> Res<RunOutput> {
    let target = env.cfg.target.clone().unwrap_or_else(|| "correlate".into());
    let mut out = RunOutput::default();
    let row = match target.as_str() {
        "correlate" => {
            let s = env.system()?;
            let n = env.n()?;
            let body = env.body(s.dim(), n)?;
            let kind = env.weight(WeightKind::Tau)?;
            let numer: Vec<u64> = match kind {
                WeightKind::Tau | WeightKind::TauTilde => (0..=n).map(|k| if k == 0 { 0 } else { naive_tau(k) }).collect(),
                WeightKind::Unit => (0..=n).map(|k| (k > 0) as u64).collect(),
                other => {
                    return Err(CliError::Config(format!(
                        "oracle supports tau and unit weights, not {}",
                        other.name()
                    )))
                }
            };
            let raw = naive_sum(&s, &body, &Numerators::Wide(numer))?;
            OracleRow {
                target,
                system: rows_string(&system_rows(&s)),
                body: describe_body(&body),
                n,
                weight: kind.name(),
                raw: raw.to_string(),
            }
        }
        "ingham" => {
            let a = env.cfg.a.unwrap_or(1);
            let n = env.n()?;
            let raw: u128 = (1..=n).map(|k| naive_tau(k) as u128 * naive_tau(k + a) as u128).sum();
            OracleRow {
                target,
                system: format!("1,0;1,{a}"),
                body: format!("box[1,{n}]"),
                n,
                weight: WeightKind::Tau.name(),
                raw: raw.to_string(),
            }
        }
        other => return Err(CliError::Config(format!("unknown oracle target '{other}'"))),
    };
    out.summary = json!({ "raw": row.raw });
    out.csv = to_csv(&[row])?;
    Ok(out)
}
