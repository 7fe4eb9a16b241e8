//! Local divisor densities `α(p^{a_1}, …, p^{a_t})`: the proportion of
//! `n ∈ (ℤ/p^Aℤ)^d` with `p^{a_i} | ψ_i(n)` for every `i`.
//!
//! Three implementations are kept and checked against each other:
//! brute enumeration, Smith-style elimination over `ℤ/p^Aℤ`, and a
//! determinantal-divisor formula that needs only the `p`-adic valuations of
//! minors of the coefficient matrix.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::affine::AffineSystem;
use crate::error::{Error, Result};
use crate::local::rational::ExactRational;

/// Default cap on `p^{Ad}·t` for brute enumeration.
pub const DEFAULT_WORK_CAP: u128 = 1 << 27;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_args(system: &AffineSystem, p: u64, exps: &[u32]) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if exps.len() != system.len() {
        return Err(Error::DimensionMismatch {
            expected: system.len(),
            got: exps.len(),
        });
    }
    Ok(())
}

/// Brute-force count over `(ℤ/p^Aℤ)^d` with `A = max a_i`.
pub fn alpha_prime_power_brute(
    system: &AffineSystem,
    p: u64,
    exps: &[u32],
    work_cap: u128,
) -> Result<ExactRational> {
    check_args(system, p, exps)?;
    let a_max = exps.iter().copied().max().unwrap_or(0);
    if a_max == 0 {
        return Ok(ExactRational::one());
    }
    let d = system.dim();
    let q = (p as u128)
        .checked_pow(a_max)
        .filter(|&q| q < 1 << 62)
        .ok_or(Error::WorkCapExceeded {
            work: u128::MAX,
            cap: work_cap,
        })?;
    let work = q
        .checked_pow(d as u32)
        .and_then(|w| w.checked_mul(system.len() as u128))
        .unwrap_or(u128::MAX);
    if work > work_cap {
        return Err(Error::WorkCapExceeded {
            work,
            cap: work_cap,
        });
    }
    let q = q as i64;
    let forms: Vec<usize> = (0..system.len()).filter(|&i| exps[i] > 0).collect();
    let moduli: Vec<i64> = forms.iter().map(|&i| (p as i64).pow(exps[i])).collect();
    // step[j][k]: change in form k when coordinate j increments and all later ones wrap
    let step: Vec<Vec<i64>> = (0..d)
        .map(|j| {
            forms
                .iter()
                .map(|&i| {
                    system.forms()[i].coeffs[j..]
                        .iter()
                        .fold(0i64, |acc, &c| (acc + c.rem_euclid(q)) % q)
                })
                .collect()
        })
        .collect();
    let mut vals: Vec<i64> = forms
        .iter()
        .map(|&i| system.forms()[i].constant.rem_euclid(q))
        .collect();
    let mut x = vec![0i64; d];
    let mut count: u128 = 0;
    loop {
        if vals.iter().zip(&moduli).all(|(v, m)| v % m == 0) {
            count += 1;
        }
        let mut j = d;
        loop {
            if j == 0 {
                let total = (q as u128).pow(d as u32);
                return Ok(ExactRational::new(
                    BigInt::from(count),
                    BigInt::from(total),
                ));
            }
            j -= 1;
            if x[j] + 1 < q {
                x[j] += 1;
                for l in (j + 1)..d {
                    x[l] = 0;
                }
                for (v, s) in vals.iter_mut().zip(&step[j]) {
                    *v = (*v + s) % q;
                }
                break;
            }
        }
    }
}

/// Arithmetic in `ℤ/p^kℤ` needed by the elimination.
trait PrimePowerRing {
    type E: Clone;
    fn k(&self) -> u32;
    fn from_i64(&self, x: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// `v_p(a)`, or `k` for zero.
    fn val(&self, a: &Self::E) -> u32;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a / p^v` for `p^v | a` (as a representative in `[0, q)`).
    fn div_pv(&self, a: &Self::E, v: u32) -> Self::E;
    fn inv_unit(&self, a: &Self::E) -> Self::E;
    fn p_pow(&self, v: u32) -> Self::E;
}

struct SmallRing {
    p: u64,
    k: u32,
    q: u64,
}

impl PrimePowerRing for SmallRing {
    type E = u64;
    fn k(&self) -> u32 {
        self.k
    }
    fn from_i64(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.q as i128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn val(&self, a: &u64) -> u32 {
        if *a == 0 {
            return self.k;
        }
        let (mut a, mut v) = (*a, 0);
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.q as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.q as u128 - *b as u128) % self.q as u128) as u64
    }
    fn div_pv(&self, a: &u64, v: u32) -> u64 {
        a / self.p.pow(v)
    }
    fn inv_unit(&self, a: &u64) -> u64 {
        let e = (*a as i128).extended_gcd(&(self.q as i128));
        e.x.rem_euclid(self.q as i128) as u64
    }
    fn p_pow(&self, v: u32) -> u64 {
        self.p.pow(v) % self.q
    }
}

struct BigRing {
    p: BigUint,
    k: u32,
    q: BigUint,
}

impl PrimePowerRing for BigRing {
    type E = BigUint;
    fn k(&self) -> u32 {
        self.k
    }
    fn from_i64(&self, x: i64) -> BigUint {
        let q = BigInt::from(self.q.clone());
        BigInt::from(x).mod_floor(&q).to_biguint().unwrap()
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn val(&self, a: &BigUint) -> u32 {
        if a.is_zero() {
            return self.k;
        }
        let (mut a, mut v) = (a.clone(), 0);
        loop {
            let (d, r) = a.div_rem(&self.p);
            if !r.is_zero() {
                return v;
            }
            a = d;
            v += 1;
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.q
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        ((a + &self.q) - b) % &self.q
    }
    fn div_pv(&self, a: &BigUint, v: u32) -> BigUint {
        a / self.p.pow(v)
    }
    fn inv_unit(&self, a: &BigUint) -> BigUint {
        let q = BigInt::from(self.q.clone());
        let e = BigInt::from(a.clone()).extended_gcd(&q);
        e.x.mod_floor(&q).to_biguint().unwrap()
    }
    fn p_pow(&self, v: u32) -> BigUint {
        self.p.pow(v) % &self.q
    }
}

/// Solves `M n ≡ rhs (mod p^k)` by diagonalising with unimodular row and
/// column operations. Returns the exponent `m` with density `p^{−m}`, or
/// `None` if there is no solution.
fn eliminate<R: PrimePowerRing>(ring: &R, mut m: Vec<Vec<R::E>>, mut rhs: Vec<R::E>) -> Option<u32> {
    let k = ring.k();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut exponent = 0u32;
    let mut s = 0usize;
    while s < rows.min(cols) {
        // pivot of least valuation in the trailing block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(s) {
            for (j, e) in row.iter().enumerate().skip(s) {
                if !ring.is_zero(e) {
                    let v = ring.val(e);
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, pi, pj) = match best {
            Some(b) => b,
            None => break,
        };
        m.swap(s, pi);
        rhs.swap(s, pi);
        for row in m.iter_mut() {
            row.swap(s, pj);
        }
        let unit = ring.div_pv(&m[s][s], v);
        let inv = ring.inv_unit(&unit);
        for e in m[s].iter_mut() {
            *e = ring.mul(e, &inv);
        }
        rhs[s] = ring.mul(&rhs[s], &inv);
        for i in (s + 1)..rows {
            if ring.is_zero(&m[i][s]) {
                continue;
            }
            let f = ring.div_pv(&m[i][s], v);
            for j in s..cols {
                let t = ring.mul(&f, &m[s][j]);
                m[i][j] = ring.sub(&m[i][j], &t);
            }
            let t = ring.mul(&f, &rhs[s]);
            rhs[i] = ring.sub(&rhs[i], &t);
        }
        // column operations clear the pivot row; they only relabel variables
        for j in (s + 1)..cols {
            if ring.is_zero(&m[s][j]) {
                continue;
            }
            let g = ring.div_pv(&m[s][j], v);
            for row in m.iter_mut() {
                let t = ring.mul(&g, &row[s]);
                row[j] = ring.sub(&row[j], &t);
            }
        }
        if ring.val(&rhs[s]) < v {
            return None;
        }
        exponent += k - v;
        s += 1;
    }
    if rhs[s..].iter().any(|r| !ring.is_zero(r)) {
        return None;
    }
    Some(exponent)
}

fn eliminate_system(system: &AffineSystem, p: u64, exps: &[u32]) -> Option<u32> {
    let k = exps.iter().copied().max().unwrap_or(0);
    let active: Vec<usize> = (0..system.len()).filter(|&i| exps[i] > 0).collect();
    macro_rules! run {
        ($ring:expr) => {{
            let ring = $ring;
            let mut mat = Vec::with_capacity(active.len());
            let mut rhs = Vec::with_capacity(active.len());
            for &i in &active {
                let f = &system.forms()[i];
                let scale = ring.p_pow(k - exps[i]);
                mat.push(
                    f.coeffs
                        .iter()
                        .map(|&c| ring.mul(&ring.from_i64(c), &scale))
                        .collect::<Vec<_>>(),
                );
                rhs.push(ring.mul(&ring.from_i64(-f.constant), &scale));
            }
            eliminate(&ring, mat, rhs)
        }};
    }
    match p.checked_pow(k).filter(|&q| q < 1 << 63) {
        Some(q) => run!(SmallRing { p, k, q }),
        None => run!(BigRing {
            p: BigUint::from(p),
            k,
            q: BigUint::from(p).pow(k),
        }),
    }
}

/// `α(p^{a_1}, …, p^{a_t})` by elimination over `ℤ/p^Aℤ`.
pub fn alpha_prime_power_fast(system: &AffineSystem, p: u64, exps: &[u32]) -> Result<ExactRational> {
    check_args(system, p, exps)?;
    if exps.iter().all(|&a| a == 0) {
        return Ok(ExactRational::one());
    }
    Ok(match eliminate_system(system, p, exps) {
        Some(m) => ExactRational::inv_pow(p, m),
        None => ExactRational::zero(),
    })
}

/// Same as [`alpha_prime_power_fast`].
pub fn alpha_prime_power(system: &AffineSystem, p: u64, exps: &[u32]) -> Result<ExactRational> {
    alpha_prime_power_fast(system, p, exps)
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

/// Nonzero minors of the coefficient matrix, grouped by row subset. These are
/// independent of `p`; [`MinorProfile::at_prime`] turns them into valuations.
#[derive(Debug, Clone)]
pub struct MinorProfile {
    t: usize,
    /// For row subset mask `R`: nonzero `|R|×|R|` minors of the linear parts.
    linear: Vec<Vec<u128>>,
    /// Same for the matrix augmented by the constants column.
    augmented: Vec<Vec<u128>>,
}

/// Valuations `δ_R = min v_p(minor)` for one prime (`u32::MAX` when all minors vanish).
#[derive(Debug, Clone)]
pub struct PrimeProfile {
    pub p: u64,
    t: usize,
    delta: Vec<u32>,
    delta_aug: Vec<u32>,
}

fn vp(mut x: u128, p: u64) -> u32 {
    let p = p as u128;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

impl MinorProfile {
    pub fn new(system: &AffineSystem) -> Result<Self> {
        let t = system.len();
        if t > 16 {
            return Err(Error::Capacity(format!("{t} forms is too many for minor enumeration")));
        }
        let d = system.dim();
        let rows: Vec<Vec<i128>> = system
            .forms()
            .iter()
            .map(|f| f.coeffs.iter().map(|&c| c as i128).chain([f.constant as i128]).collect())
            .collect();
        let mut linear = vec![Vec::new(); 1 << t];
        let mut augmented = vec![Vec::new(); 1 << t];
        for mask in 1usize..(1 << t) {
            let rs: Vec<usize> = (0..t).filter(|i| mask >> i & 1 == 1).collect();
            let r = rs.len();
            for (cols, target, width) in [(d, &mut linear, d), (d + 1, &mut augmented, d + 1)] {
                if r > cols {
                    continue;
                }
                for cs in combinations(width, r) {
                    let sub: Vec<Vec<i128>> =
                        rs.iter().map(|&i| cs.iter().map(|&c| rows[i][c]).collect()).collect();
                    let m = det(&sub);
                    if m != 0 {
                        target[mask].push(m.unsigned_abs());
                    }
                }
                target[mask].sort_unstable();
                target[mask].dedup();
            }
        }
        Ok(MinorProfile {
            t,
            linear,
            augmented,
        })
    }

    pub fn at_prime(&self, p: u64) -> PrimeProfile {
        let dv = |ms: &Vec<u128>| ms.iter().map(|&m| vp(m, p)).min().unwrap_or(u32::MAX);
        let mut delta: Vec<u32> = self.linear.iter().map(dv).collect();
        let mut delta_aug: Vec<u32> = self.augmented.iter().map(dv).collect();
        delta[0] = 0;
        delta_aug[0] = 0;
        PrimeProfile {
            p,
            t: self.t,
            delta,
            delta_aug,
        }
    }
}

impl PrimeProfile {
    /// Exponent `m` with `α = p^{−m}`, or `None` when `α = 0`.
    ///
    /// With `H` the subgroup of `ℤ^t` spanned by the columns of `[M | diag(p^{a_i})]`,
    /// the congruences cut out a coset of index `p^{Σa_i}/[ℤ^t : H]`, and the
    /// index of `H` is the gcd of its `t×t` minors. Expanding those minors
    /// along the diagonal block gives `m = max_R (Σ_{i∈R} a_i − δ_R)`. The
    /// system is solvable iff adding the constants column does not change it.
    pub fn alpha_exponent(&self, exps: &[u32]) -> Option<u32> {
        let mut best = 0i64;
        let mut best_aug = 0i64;
        for mask in 1usize..(1 << self.t) {
            let sum: i64 = (0..self.t)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| exps[i] as i64)
                .sum();
            if self.delta[mask] != u32::MAX {
                best = best.max(sum - self.delta[mask] as i64);
            }
            if self.delta_aug[mask] != u32::MAX {
                best_aug = best_aug.max(sum - self.delta_aug[mask] as i64);
            }
        }
        (best == best_aug).then_some(best as u32)
    }

    pub fn alpha(&self, exps: &[u32]) -> ExactRational {
        match self.alpha_exponent(exps) {
            Some(m) => ExactRational::inv_pow(self.p, m),
            None => ExactRational::zero(),
        }
    }
}

/// Trial-division factorisation for the small moduli passed to [`alpha`].
fn factor_small(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `α(d_1, …, d_t)` via multiplicativity over the primes dividing the `d_i`.
pub fn alpha(system: &AffineSystem, ds: &[u64]) -> Result<ExactRational> {
    if ds.len() != system.len() {
        return Err(Error::DimensionMismatch {
            expected: system.len(),
            got: ds.len(),
        });
    }
    if let Some(&0) = ds.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidArgument("moduli must be positive".into()));
    }
    let mut primes: Vec<u64> = ds.iter().flat_map(|&d| factor_small(d)).map(|(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut acc = ExactRational::one();
    for p in primes {
        let exps: Vec<u32> = ds
            .iter()
            .map(|&d| {
                let (mut d, mut a) = (d, 0);
                while d % p == 0 {
                    d /= p;
                    a += 1;
                }
                a
            })
            .collect();
        let a = alpha_prime_power_fast(system, p, &exps)?;
        if a.is_zero() {
            return Ok(a);
        }
        acc = &acc * &a;
    }
    Ok(acc)
}

/// `α(d_1, …, d_t)` by direct enumeration over `(ℤ/lcm(d)ℤ)^d`; a test oracle.
pub fn alpha_direct(system: &AffineSystem, ds: &[u64], work_cap: u128) -> Result<ExactRational> {
    let l = ds.iter().fold(1u64, |l, &d| l.lcm(&d));
    let d = system.dim();
    let work = (l as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if work > work_cap {
        return Err(Error::WorkCapExceeded { work, cap: work_cap });
    }
    let mut x = vec![0i64; d];
    let mut count = 0u128;
    'outer: loop {
        if system
            .forms()
            .iter()
            .zip(ds)
            .all(|(f, &m)| f.eval_unchecked(&x).rem_euclid(m as i64) == 0)
        {
            count += 1;
        }
        for j in (0..d).rev() {
            if x[j] + 1 < l as i64 {
                x[j] += 1;
                continue 'outer;
            }
            x[j] = 0;
        }
        break;
    }
    Ok(ExactRational::new(BigInt::from(count), BigInt::from(work)))
}

/// Density of `p^j | ψ(n)` for a single form: `p^{−(j−g)}` once `j` exceeds
/// `g = v_p(gcd of coefficients)`, provided `p^g` divides the constant.
pub fn single_form_density_exponent(coeffs: &[i64], constant: i64, p: u64, j: u32) -> Option<u32> {
    let g = coeffs
        .iter()
        .filter(|&&c| c != 0)
        .map(|&c| vp(c.unsigned_abs() as u128, p))
        .min()
        .unwrap_or(u32::MAX);
    let v = if constant == 0 {
        u32::MAX
    } else {
        vp(constant.unsigned_abs() as u128, p)
    };
    if j <= g {
        (v >= j).then_some(0)
    } else {
        (v >= g).then_some(j - g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[i64]]) -> AffineSystem {
        AffineSystem::from_rows(rows).unwrap()
    }

    fn all_three(s: &AffineSystem, p: u64, e: &[u32]) -> ExactRational {
        let a = alpha_prime_power_brute(s, p, e, DEFAULT_WORK_CAP).unwrap();
        let b = alpha_prime_power_fast(s, p, e).unwrap();
        let c = MinorProfile::new(s).unwrap().at_prime(p).alpha(e);
        assert_eq!(a, b, "brute vs elimination {e:?} p={p}");
        assert_eq!(a, c, "brute vs minors {e:?} p={p}");
        a
    }

    #[test]
    fn single_form() {
        let s = sys(&[&[1, 0]]);
        for a in 0..4 {
            assert_eq!(all_three(&s, 3, &[a]), ExactRational::inv_pow(3, a));
        }
    }

    #[test]
    fn two_forms_example() {
        let s = sys(&[&[1, 0, 0], &[1, 1, 0]]);
        assert_eq!(all_three(&s, 2, &[1, 1]), ExactRational::ratio(1, 4));
        assert_eq!(all_three(&s, 2, &[0, 0]), ExactRational::one());
    }

    #[test]
    fn consecutive_integers_never_share_p() {
        let s = sys(&[&[1, 0], &[1, 1]]);
        assert!(all_three(&s, 5, &[1, 1]).is_zero());
        assert_eq!(all_three(&s, 5, &[2, 0]), ExactRational::ratio(1, 25));
    }

    #[test]
    fn multiplicative() {
        let s = sys(&[&[1, 0]]);
        assert_eq!(alpha(&s, &[6]).unwrap(), ExactRational::ratio(1, 6));
        let s = sys(&[&[1, 2, 1], &[3, -1, 0]]);
        assert_eq!(alpha(&s, &[1, 1]).unwrap(), ExactRational::one());
        for ds in [[6u64, 10], [12, 9], [30, 7], [4, 27]] {
            assert_eq!(
                alpha(&s, &ds).unwrap(),
                alpha_direct(&s, &ds, 1 << 26).unwrap(),
                "{ds:?}"
            );
        }
    }

    #[test]
    fn big_modulus_path() {
        // p^A beyond 2^63 exercises the arbitrary precision ring
        let s = sys(&[&[1, 0, 0], &[1, 1, 0], &[2, 3, 0]]);
        let p = 1_000_003;
        let e = [3, 2, 4];
        let fast = alpha_prime_power_fast(&s, p, &e).unwrap();
        let minors = MinorProfile::new(&s).unwrap().at_prime(p).alpha(&e);
        assert_eq!(fast, minors);
        assert_eq!(fast, ExactRational::inv_pow(p, 7));
        // p^3 | n1 and p^2 | n1 + n2 force p^2 | n2, so 2n1 + 3n2 + 5 is a unit
        let s = sys(&[&[1, 0, 0], &[1, 1, 0], &[2, 3, 5]]);
        assert!(alpha_prime_power_fast(&s, p, &e).unwrap().is_zero());
    }

    #[test]
    fn work_cap_is_distinct() {
        let s = sys(&[&[1, 1, 1, 0], &[1, 2, 3, 0]]);
        let e = alpha_prime_power_brute(&s, 7, &[5, 5], 1000).unwrap_err();
        assert!(matches!(e, Error::WorkCapExceeded { .. }));
    }

    #[test]
    fn single_form_density_matches_alpha() {
        for (c, k) in [(vec![4i64, 6], 2i64), (vec![9, 3], 0), (vec![2, 4], 1), (vec![8], 16)] {
            let mut row = c.clone();
            row.push(k);
            let s = AffineSystem::from_rows(&[&row]).unwrap();
            for p in [2u64, 3] {
                for j in 0..5 {
                    let want = all_three(&s, p, &[j]);
                    let got = match single_form_density_exponent(&c, k, p, j) {
                        Some(m) => ExactRational::inv_pow(p, m),
                        None => ExactRational::zero(),
                    };
                    assert_eq!(got, want, "{c:?}+{k} p={p} j={j}");
                }
            }
        }
    }
}
