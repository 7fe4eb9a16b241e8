use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ψ(n) = ψ̇·n + ψ(0)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineForm {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl AffineForm {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("affine form needs at least one coefficient".into()));
        }
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::Degenerate(format!(
                "form with linear part {coeffs:?} is constant"
            )));
        }
        Ok(AffineForm { coeffs, constant })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, n: &[i64]) -> Result<i64> {
        if n.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                got: n.len(),
            });
        }
        let mut acc = self.constant as i128;
        for (c, x) in self.coeffs.iter().zip(n) {
            acc += *c as i128 * *x as i128;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow(format!("form value {acc} exceeds i64")))
    }

    /// Evaluation without the dimension check, for hot loops.
    #[inline]
    pub fn eval_unchecked(&self, n: &[i64]) -> i64 {
        let mut acc = self.constant;
        for (c, x) in self.coeffs.iter().zip(n) {
            acc += c * x;
        }
        acc
    }
}

/// A nondegenerate system `Ψ = (ψ_1, …, ψ_t)` of affine-linear forms on `ℤ^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SystemSpec", into = "SystemSpec")]
pub struct AffineSystem {
    dim: usize,
    forms: Vec<AffineForm>,
    max_coeff: u64,
}

/// Plain serialisable shape of a system: one `[c_1, …, c_d, constant]` row per form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemSpec {
    pub forms: Vec<Vec<i64>>,
}

impl TryFrom<SystemSpec> for AffineSystem {
    type Error = Error;
    fn try_from(spec: SystemSpec) -> Result<Self> {
        let mut forms = Vec::with_capacity(spec.forms.len());
        for row in spec.forms {
            if row.len() < 2 {
                return Err(Error::InvalidArgument(format!(
                    "form row {row:?} needs d coefficients plus a constant"
                )));
            }
            let (c, k) = row.split_at(row.len() - 1);
            forms.push(AffineForm::new(c.to_vec(), k[0])?);
        }
        AffineSystem::new(forms)
    }
}

impl From<AffineSystem> for SystemSpec {
    fn from(s: AffineSystem) -> Self {
        SystemSpec {
            forms: s
                .forms
                .into_iter()
                .map(|f| {
                    let mut row = f.coeffs;
                    row.push(f.constant);
                    row
                })
                .collect(),
        }
    }
}

fn minors_vanish(a: &[i64], b: &[i64], modulus: Option<i64>) -> bool {
    for j in 0..a.len() {
        for k in (j + 1)..a.len() {
            let m = a[j] as i128 * b[k] as i128 - a[k] as i128 * b[j] as i128;
            let zero = match modulus {
                None => m == 0,
                Some(p) => m.rem_euclid(p as i128) == 0,
            };
            if !zero {
                return false;
            }
        }
    }
    true
}

impl AffineSystem {
    /// Validates non-degeneracy: no constant form, every variable used by some
    /// form, and no two forms rational multiples of each other.
    pub fn new(forms: Vec<AffineForm>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::InvalidArgument("system needs at least one form (t >= 1)".into()));
        }
        let dim = forms[0].dim();
        for f in &forms {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.dim(),
                });
            }
        }
        for j in 0..dim {
            if forms.iter().all(|f| f.coeffs[j] == 0) {
                return Err(Error::Degenerate(format!("variable {j} appears in no form")));
            }
        }
        for i in 0..forms.len() {
            for j in (i + 1)..forms.len() {
                let mut a = forms[i].coeffs.clone();
                a.push(forms[i].constant);
                let mut b = forms[j].coeffs.clone();
                b.push(forms[j].constant);
                if minors_vanish(&a, &b, None) {
                    return Err(Error::Degenerate(format!(
                        "forms {i} and {j} are rational multiples of each other"
                    )));
                }
            }
        }
        let max_coeff = forms
            .iter()
            .flat_map(|f| f.coeffs.iter())
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        Ok(AffineSystem {
            dim,
            forms,
            max_coeff,
        })
    }

    /// Convenience constructor from `[c_1, …, c_d, constant]` rows.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        SystemSpec {
            forms: rows.iter().map(|r| r.to_vec()).collect(),
        }
        .try_into()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    /// `L`: largest absolute linear coefficient.
    pub fn max_coeff(&self) -> u64 {
        self.max_coeff
    }

    /// First pair `(i, j)` whose linear parts are linearly dependent over ℚ.
    pub fn dependent_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.forms.len() {
            for j in (i + 1)..self.forms.len() {
                if minors_vanish(&self.forms[i].coeffs, &self.forms[j].coeffs, None) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// True iff no two linear parts are linearly dependent.
    pub fn has_finite_complexity(&self) -> bool {
        self.dependent_pair().is_none()
    }

    pub fn require_finite_complexity(&self) -> Result<()> {
        match self.dependent_pair() {
            Some((i, j)) => Err(Error::InfiniteComplexity(i, j)),
            None => Ok(()),
        }
    }

    /// Whether `p` is exceptional: some linear part vanishes mod `p`, or two
    /// linear parts are proportional mod `p` (all 2×2 minors divisible by `p`).
    pub fn is_exceptional_prime(&self, p: u64) -> bool {
        let p = p as i64;
        let zero_row = |f: &AffineForm| f.coeffs.iter().all(|c| c.rem_euclid(p) == 0);
        if self.forms.iter().any(zero_row) {
            return true;
        }
        for i in 0..self.forms.len() {
            for j in (i + 1)..self.forms.len() {
                if minors_vanish(&self.forms[i].coeffs, &self.forms[j].coeffs, Some(p)) {
                    return true;
                }
            }
        }
        false
    }

    /// All exceptional primes `<= p_max`.
    pub fn exceptional_primes(&self, p_max: u64) -> Vec<u64> {
        small_primes(p_max)
            .into_iter()
            .filter(|&p| self.is_exceptional_prime(p))
            .collect()
    }

    /// Largest absolute nonzero 2×2 minor over all pairs, or 0 if none.
    pub fn max_abs_minor(&self) -> u128 {
        let mut best = 0u128;
        for i in 0..self.forms.len() {
            for j in (i + 1)..self.forms.len() {
                let a = &self.forms[i].coeffs;
                let b = &self.forms[j].coeffs;
                for x in 0..self.dim {
                    for y in (x + 1)..self.dim {
                        let m = a[x] as i128 * b[y] as i128 - a[y] as i128 * b[x] as i128;
                        best = best.max(m.unsigned_abs());
                    }
                }
            }
        }
        best
    }

    /// Largest prime dividing a nonzero coefficient or a nonzero 2×2 minor of
    /// the linear parts or of the full `[ψ̇ | ψ(0)]` rows. Above it every
    /// local factor sees the forms in general position.
    pub fn largest_special_prime(&self) -> Option<u64> {
        let mut nums: Vec<u128> = Vec::new();
        for f in &self.forms {
            nums.extend(f.coeffs.iter().filter(|&&c| c != 0).map(|c| c.unsigned_abs() as u128));
        }
        for i in 0..self.forms.len() {
            for j in (i + 1)..self.forms.len() {
                let a: Vec<i64> = self.forms[i].coeffs.iter().copied().chain([self.forms[i].constant]).collect();
                let b: Vec<i64> = self.forms[j].coeffs.iter().copied().chain([self.forms[j].constant]).collect();
                for x in 0..a.len() {
                    for y in (x + 1)..a.len() {
                        let m = a[x] as i128 * b[y] as i128 - a[y] as i128 * b[x] as i128;
                        if m != 0 {
                            nums.push(m.unsigned_abs());
                        }
                    }
                }
            }
        }
        nums.into_iter().filter_map(largest_prime_factor).max()
    }

    /// Order-independent key: the forms sorted. Local densities are symmetric
    /// under permuting forms, so this is a valid memo key for them.
    pub fn canonical_key(&self) -> Vec<AffineForm> {
        let mut f = self.forms.clone();
        f.sort();
        f
    }

    /// System `𝒲ψ_j + b_j`, used by the W-tricked checks.
    pub fn scaled_shifted(&self, scale: i64, shifts: &[i64]) -> Result<AffineSystem> {
        if shifts.len() != self.forms.len() {
            return Err(Error::DimensionMismatch {
                expected: self.forms.len(),
                got: shifts.len(),
            });
        }
        let forms = self
            .forms
            .iter()
            .zip(shifts)
            .map(|(f, &b)| {
                let coeffs = f
                    .coeffs
                    .iter()
                    .map(|&c| c.checked_mul(scale))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Overflow("scaled coefficient".into()))?;
                let constant = f
                    .constant
                    .checked_mul(scale)
                    .and_then(|c| c.checked_add(b))
                    .ok_or_else(|| Error::Overflow("scaled constant".into()))?;
                Ok(AffineForm { coeffs, constant })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AffineSystem {
            dim: self.dim,
            max_coeff: self.max_coeff * scale.unsigned_abs(),
            forms,
        })
    }
}

fn largest_prime_factor(mut n: u128) -> Option<u64> {
    let mut best = None;
    let mut d = 2u128;
    while d * d <= n {
        while n % d == 0 {
            n /= d;
            best = Some(d as u64);
        }
        d += 1;
    }
    if n > 1 {
        best = Some(n as u64);
    }
    best
}

/// Primes `<= bound` by a plain Eratosthenes sieve.
pub fn small_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
