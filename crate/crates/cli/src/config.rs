//! Run configuration: a TOML file and command-line flags with the same keys.
//! Flags win over the file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sieve,
    Alpha,
    Beta,
    SingularProduct,
    Correlate,
    VerifyMainTheorem,
    Ingham,
    MajorantCheck,
    ExceptionalDensity,
    LinearFormsCheck,
    CorrelationCheck,
    Gowers,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Sieve => "sieve",
            Command::Alpha => "alpha",
            Command::Beta => "beta",
            Command::SingularProduct => "singular-product",
            Command::Correlate => "correlate",
            Command::VerifyMainTheorem => "verify-main-theorem",
            Command::Ingham => "ingham",
            Command::MajorantCheck => "majorant-check",
            Command::ExceptionalDensity => "exceptional-density",
            Command::LinearFormsCheck => "linear-forms-check",
            Command::CorrelationCheck => "correlation-check",
            Command::Gowers => "gowers",
            Command::Oracle => "oracle",
        }
    }
}

/// A body bound: an integer or an expression in `N` (see [`crate::expr`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Int(i64),
    Expr(String),
}

impl Bound {
    pub fn eval(&self, n: u64) -> Result<i64, CliError> {
        match self {
            Bound::Int(v) => Ok(*v),
            Bound::Expr(s) => Ok(crate::expr::eval(s, n as i64)?),
        }
    }
}

/// Either a box (`lo`, `hi`) or a polytope `Ax <= b`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub lo: Option<Vec<Bound>>,
    pub hi: Option<Vec<Bound>>,
    pub a: Option<Vec<Vec<i64>>>,
    pub b: Option<Vec<Bound>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: Option<u64>,
    pub grid: Option<Vec<u64>>,
    /// Rows `coeffs ++ [constant]`.
    pub system: Option<Vec<Vec<i64>>>,
    pub body: Option<BodySpec>,
    pub gamma: Option<String>,
    pub c1: Option<f64>,
    /// Manual `w`; absent means `w(N) = ½ log log N`.
    pub w: Option<f64>,
    pub trunc: Option<u32>,
    pub pmax: Option<u64>,
    pub s_range: Option<[u32; 2]>,
    pub i_range: Option<[u32; 2]>,
    pub c_sigma: Option<f64>,
    pub sigma_zero: Option<f64>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub weight: Option<String>,
    /// Ingham shift.
    pub a: Option<u64>,
    pub p: Option<u64>,
    pub exps: Option<Vec<u32>>,
    pub moduli: Option<Vec<u64>>,
    /// Residues `b_j`.
    pub b: Option<Vec<u64>>,
    pub shifts: Option<Vec<Vec<i64>>>,
    pub tuples: Option<usize>,
    pub tuple_size: Option<usize>,
    pub max_shift: Option<i64>,
    /// Gowers order.
    pub s: Option<u32>,
    /// Cluster levels and intervals for the `X(i,s)` rows.
    pub levels: Option<Vec<u32>>,
    pub intervals: Option<Vec<u32>>,
    pub target: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        RunConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fills the keys that have a default, so manifests list every
    /// effective parameter.
    pub fn with_defaults(&self) -> RunConfig {
        let mut c = self.clone();
        c.gamma.get_or_insert_with(|| "1/4".into());
        c.c1.get_or_insert(2.0);
        c.trunc.get_or_insert(12);
        c.pmax.get_or_insert(100_000);
        c.seed.get_or_insert(crate::commands::DEFAULT_SEED);
        c.workers.get_or_insert(0);
        c.c_sigma.get_or_insert(1.0);
        c.sigma_zero.get_or_insert(1.0);
        c
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: RunConfig) -> RunConfig {
        let base = self;
        overlay!(
            base, top, n, grid, system, body, gamma, c1, w, trunc, pmax, s_range, i_range,
            c_sigma, sigma_zero, workers, seed, out, weight, a, p, exps, moduli, b, shifts,
            tuples, tuple_size, max_shift, s, levels, intervals, target
        )
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, sep: char) -> Result<Vec<T>, CliError> {
    s.split(sep)
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<T>()
                .map_err(|_| CliError::Config(format!("cannot parse '{x}' in '{s}'")))
        })
        .collect()
}

fn parse_rows(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    s.split(';').map(|r| parse_list(r, ',')).collect()
}

fn parse_count(s: &str) -> Result<u64, CliError> {
    let v = crate::expr::eval(s, 0)?;
    u64::try_from(v).map_err(|_| CliError::Config(format!("'{s}' must be nonnegative")))
}

fn parse_bounds(s: &str) -> Vec<Bound> {
    s.split(',').map(|x| Bound::Expr(x.trim().to_string())).collect()
}

fn parse_pair(s: &str) -> Result<[u32; 2], CliError> {
    let v: Vec<u32> = parse_list(s, ',')?;
    match v.as_slice() {
        [lo, hi] => Ok([*lo, *hi]),
        _ => Err(CliError::Config(format!("expected 'lo,hi', got '{s}'"))),
    }
}

/// Flags mirroring [`RunConfig`]. Lists are comma separated; rows of a
/// matrix are separated by `;`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, help = "N (accepts 1e6)")]
    pub n: Option<String>,
    #[arg(long, help = "comma-separated N values")]
    pub grid: Option<String>,
    #[arg(long, help = "rows 'c1,..,cd,const' separated by ';'")]
    pub system: Option<String>,
    #[arg(long, help = "box lower corner, expressions in N")]
    pub body_lo: Option<String>,
    #[arg(long, help = "box upper corner, expressions in N")]
    pub body_hi: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub trunc: Option<u32>,
    #[arg(long)]
    pub pmax: Option<String>,
    #[arg(long)]
    pub s_range: Option<String>,
    #[arg(long)]
    pub i_range: Option<String>,
    #[arg(long)]
    pub c_sigma: Option<f64>,
    #[arg(long)]
    pub sigma_zero: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub exps: Option<String>,
    #[arg(long)]
    pub moduli: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long, help = "shift tuples separated by ';'")]
    pub shifts: Option<String>,
    #[arg(long)]
    pub tuples: Option<usize>,
    #[arg(long)]
    pub tuple_size: Option<usize>,
    #[arg(long)]
    pub max_shift: Option<i64>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub intervals: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
}

impl Flags {
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let body = match (&self.body_lo, &self.body_hi) {
            (None, None) => None,
            (Some(lo), Some(hi)) => Some(BodySpec {
                lo: Some(parse_bounds(lo)),
                hi: Some(parse_bounds(hi)),
                ..Default::default()
            }),
            _ => return Err(CliError::Config("--body-lo and --body-hi go together".into())),
        };
        Ok(RunConfig {
            n: self.n.as_deref().map(parse_count).transpose()?,
            grid: self
                .grid
                .as_deref()
                .map(|g| g.split(',').map(parse_count).collect::<Result<Vec<_>, _>>())
                .transpose()?,
            system: self.system.as_deref().map(parse_rows).transpose()?,
            body,
            gamma: self.gamma.clone(),
            c1: self.c1,
            w: self.w,
            trunc: self.trunc,
            pmax: self.pmax.as_deref().map(parse_count).transpose()?,
            s_range: self.s_range.as_deref().map(parse_pair).transpose()?,
            i_range: self.i_range.as_deref().map(parse_pair).transpose()?,
            c_sigma: self.c_sigma,
            sigma_zero: self.sigma_zero,
            workers: self.workers,
            seed: self.seed,
            out: self.out.clone(),
            weight: self.weight.clone(),
            a: self.a,
            p: self.p,
            exps: self.exps.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            moduli: self.moduli.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            b: self.b.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            shifts: self.shifts.as_deref().map(parse_rows).transpose()?,
            tuples: self.tuples,
            tuple_size: self.tuple_size,
            max_shift: self.max_shift,
            s: self.s,
            levels: self.levels.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            intervals: self.intervals.as_deref().map(|s| parse_list(s, ',')).transpose()?,
            target: self.target.clone(),
        })
    }

    /// File configuration (if any) overlaid with the flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        Ok(file.overlay(self.to_config()?))
    }
}
