//! Parameters shared by the majorant and W-trick modules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation exponent `γ = 1/g` with `g >= 2` an integer.
///
/// Keeping γ as the reciprocal of an integer lets every threshold `d <= N^γ`
/// be decided exactly as `d^g <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Gamma(u32);

impl Gamma {
    pub fn from_reciprocal(g: u32) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidArgument(format!(
                "gamma must be 1/g with integer g >= 2, got g = {g}"
            )));
        }
        Ok(Gamma(g))
    }

    /// Parses `"1/4"`, `"0.25"` or `"4"` (interpreted as the reciprocal).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse gamma {s:?} as 1/g"));
        if let Some(rest) = s.strip_prefix("1/") {
            return Self::from_reciprocal(rest.trim().parse().map_err(|_| bad())?);
        }
        if let Ok(g) = s.parse::<u32>() {
            return Self::from_reciprocal(g);
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        if !(x > 0.0 && x < 1.0) {
            return Err(bad());
        }
        let g = (1.0 / x).round();
        if ((1.0 / g) - x).abs() > 1e-12 {
            return Err(bad());
        }
        Self::from_reciprocal(g as u32)
    }

    /// The integer `g = 1/γ`.
    pub fn reciprocal(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        1.0 / self.0 as f64
    }
}

impl TryFrom<u32> for Gamma {
    type Error = Error;
    fn try_from(g: u32) -> Result<Self> {
        Gamma::from_reciprocal(g)
    }
}

impl From<Gamma> for u32 {
    fn from(g: Gamma) -> u32 {
        g.0
    }
}

/// How a summation range is chosen: from the asymptotic formula in `N`, or
/// pinned by hand. `Manual { lo, hi }` with `lo > hi` is an explicitly empty range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum RangeMode {
    #[default]
    Asymptotic,
    Manual { lo: u32, hi: u32 },
}

/// Choice of the small-prime cutoff `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum WMode {
    /// `w(N) = ½ log log N`.
    #[default]
    Asymptotic,
    Manual(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorantParams {
    pub gamma: Gamma,
    pub c1: f64,
    #[serde(default)]
    pub s_range: RangeMode,
    #[serde(default)]
    pub i_range: RangeMode,
    #[serde(default)]
    pub w_mode: WMode,
}

impl Default for MajorantParams {
    fn default() -> Self {
        MajorantParams {
            gamma: Gamma(4),
            c1: 2.0,
            s_range: RangeMode::Asymptotic,
            i_range: RangeMode::Asymptotic,
            w_mode: WMode::Asymptotic,
        }
    }
}

impl MajorantParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0) || !self.c1.is_finite() {
            return Err(Error::InvalidArgument(format!("C1 must be > 0, got {}", self.c1)));
        }
        if let WMode::Manual(w) = self.w_mode {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidArgument(format!("manual w must be > 0, got {w}")));
            }
        }
        Ok(())
    }

    /// Levels `s` of the cluster sum, i.e. `2/γ < s <= (log log N)^3`
    /// (or the manual range intersected with `s > 2/γ`).
    pub fn s_levels(&self, big_n: u64) -> Vec<u32> {
        let base = 2 * self.gamma.reciprocal();
        let (lo, hi) = match self.s_range {
            RangeMode::Manual { lo, hi } => (lo, hi),
            RangeMode::Asymptotic => {
                let ll = loglog(big_n);
                if ll <= 0.0 {
                    return Vec::new();
                }
                (0, ll.powi(3).floor() as u32)
            }
        };
        (lo.max(base + 1)..=hi).collect()
    }

    /// Interval indices `i` used with level `s`: from `⌈log₂ s − 2⌉` up to
    /// `⌊6 log log log N⌋` (or the manual range, clipped below the same way).
    pub fn i_indices(&self, s: u32, big_n: u64) -> Vec<u32> {
        let lo_struct = min_cluster_index(s);
        let (lo, hi) = match self.i_range {
            RangeMode::Manual { lo, hi } => (lo, hi),
            RangeMode::Asymptotic => {
                let ll = loglog(big_n);
                if ll <= 1.0 {
                    return Vec::new();
                }
                (0, (6.0 * ll.ln()).floor() as u32)
            }
        };
        (lo.max(lo_struct)..=hi).collect()
    }

    /// Whether the asymptotic ranges leave no cluster terms at this `N`.
    pub fn cluster_sum_empty(&self, big_n: u64) -> bool {
        self.s_levels(big_n)
            .iter()
            .all(|&s| self.i_indices(s, big_n).is_empty())
    }
}

/// Smallest `i >= 0` with `i >= log₂ s − 2`, i.e. `2^(i+2) >= s`.
pub fn min_cluster_index(s: u32) -> u32 {
    let mut i = 0u32;
    while (1u64 << (i + 2)) < s as u64 {
        i += 1;
    }
    i
}

/// `ln ln N`, or a non-positive value when `N < e^e`.
pub fn loglog(big_n: u64) -> f64 {
    let l = (big_n as f64).ln();
    if l <= 0.0 {
        f64::NEG_INFINITY
    } else {
        l.ln()
    }
}
