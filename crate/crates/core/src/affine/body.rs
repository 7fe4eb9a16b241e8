use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::affine::system::AffineSystem;
use crate::error::{Error, Result};

/// A bounded convex region of `ℝ^d` given either as an integer box or as a
/// system of half-spaces `A x <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    Box { lo: Vec<i64>, hi: Vec<i64> },
    Polytope(Polytope),
}

/// `{x : a_k · x <= b_k for all k}` with integer rows (rational input is
/// scaled by the row's common denominator, which preserves the set).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polytope {
    dim: usize,
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    #[serde(skip)]
    bbox: Option<(Vec<i64>, Vec<i64>)>,
}

/// A run of lattice points sharing their first `d − 1` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeRow {
    pub prefix: Vec<i64>,
    pub lo: i64,
    pub hi: i64,
}

impl LatticeRow {
    pub fn len(&self) -> u64 {
        (self.hi - self.lo + 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    /// Writes the point with last coordinate `x` into `buf` (length `d`).
    #[inline]
    pub fn fill(&self, x: i64, buf: &mut [i64]) {
        let k = self.prefix.len();
        buf[..k].copy_from_slice(&self.prefix);
        buf[k] = x;
    }
}

/// Volume of a body: exact for boxes, lattice-count proxy for polytopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub exact: bool,
    /// Bound on `|value − vol(K)|` from boundary layer counting; 0 when exact.
    pub uncertainty: f64,
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

/// Bounds for coordinate `k` by Fourier–Motzkin elimination of all others.
/// Rows are `[a_0, …, a_{d−1}, b]`. Returns `Ok(None)` if infeasible.
fn fm_bounds(rows: &[Vec<i128>], dim: usize, k: usize) -> Result<Option<(i64, i64)>> {
    let mut cur: Vec<Vec<i128>> = rows.to_vec();
    for j in 0..dim {
        if j == k {
            continue;
        }
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in cur {
            match r[j].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => next.push(r),
            }
        }
        for p in &pos {
            for n in &neg {
                let (cp, cn) = (p[j], -n[j]);
                let mut row: Vec<i128> = p
                    .iter()
                    .zip(n)
                    .map(|(&x, &y)| x.checked_mul(cn).and_then(|u| y.checked_mul(cp).and_then(|v| u.checked_add(v))))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Overflow("polytope elimination".into()))?;
                row[j] = 0;
                normalize(&mut row);
                next.push(row);
            }
        }
        next.sort();
        next.dedup();
        cur = next;
    }
    let (mut lo, mut hi): (Option<i128>, Option<i128>) = (None, None);
    for r in &cur {
        let (c, rhs) = (r[k], r[dim]);
        match c.signum() {
            1 => {
                let v = floor_div(rhs, c);
                hi = Some(hi.map_or(v, |h| h.min(v)));
            }
            -1 => {
                let v = ceil_div(rhs, c);
                lo = Some(lo.map_or(v, |l| l.max(v)));
            }
            _ => {
                if rhs < 0 {
                    return Ok(None);
                }
            }
        }
    }
    match (lo, hi) {
        (Some(l), Some(h)) => {
            if l > h {
                return Ok(None);
            }
            let conv = |v: i128| {
                i64::try_from(v).map_err(|_| Error::Overflow("polytope bound exceeds i64".into()))
            };
            Ok(Some((conv(l)?, conv(h)?)))
        }
        _ => Err(Error::InvalidArgument(format!(
            "polytope is unbounded in coordinate {k}"
        ))),
    }
}

impl Polytope {
    /// Integer half-spaces `a_k · x <= b_k`.
    pub fn new(a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidArgument(
                "polytope needs matching nonempty A and b".into(),
            ));
        }
        let dim = a[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument("polytope dimension must be >= 1".into()));
        }
        for row in &a {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        let rows: Vec<Vec<i128>> = a
            .iter()
            .zip(&b)
            .map(|(r, &c)| r.iter().map(|&x| x as i128).chain([c as i128]).collect())
            .collect();
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        let mut empty = false;
        for k in 0..dim {
            match fm_bounds(&rows, dim, k)? {
                Some((l, h)) => {
                    lo.push(l);
                    hi.push(h);
                }
                None => {
                    empty = true;
                    break;
                }
            }
        }
        Ok(Polytope {
            dim,
            a,
            b,
            bbox: if empty { None } else { Some((lo, hi)) },
        })
    }

    /// Rational half-spaces; each row is multiplied by the lcm of its denominators.
    pub fn from_rational(a: Vec<Vec<Ratio<i64>>>, b: Vec<Ratio<i64>>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument("A and b lengths differ".into()));
        }
        let mut ia = Vec::with_capacity(a.len());
        let mut ib = Vec::with_capacity(b.len());
        for (row, rhs) in a.into_iter().zip(b) {
            let l = row
                .iter()
                .chain(std::iter::once(&rhs))
                .fold(1i64, |l, r| l.lcm(r.denom()));
            let scale = |r: &Ratio<i64>| -> Result<i64> {
                r.numer()
                    .checked_mul(l / r.denom())
                    .ok_or_else(|| Error::Overflow("rational polytope row".into()))
            };
            ia.push(row.iter().map(scale).collect::<Result<Vec<_>>>()?);
            ib.push(scale(&rhs)?);
        }
        Polytope::new(ia, ib)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rows of `A` and entries of `b` in `Ax <= b`.
    pub fn constraints(&self) -> (&[Vec<i64>], &[i64]) {
        (&self.a, &self.b)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.a.iter().zip(&self.b).all(|(row, &b)| {
            let lhs: i128 = row.iter().zip(x).map(|(&a, &v)| a as i128 * v as i128).sum();
            lhs <= b as i128
        })
    }

    /// Exact range of the last coordinate for a fixed prefix, intersected with
    /// the bounding box.
    fn last_range(&self, prefix: &[i64], lo: i64, hi: i64) -> Option<(i64, i64)> {
        let k = self.dim - 1;
        let (mut l, mut h) = (lo as i128, hi as i128);
        for (row, &b) in self.a.iter().zip(&self.b) {
            let partial: i128 = row[..k]
                .iter()
                .zip(prefix)
                .map(|(&a, &v)| a as i128 * v as i128)
                .sum();
            let res = b as i128 - partial;
            let c = row[k] as i128;
            match c.signum() {
                1 => h = h.min(floor_div(res, c)),
                -1 => l = l.max(ceil_div(res, c)),
                _ => {
                    if res < 0 {
                        return None;
                    }
                }
            }
            if l > h {
                return None;
            }
        }
        Some((l as i64, h as i64))
    }
}

impl ConvexBody {
    pub fn new_box(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidArgument(
                "box needs matching nonempty lo and hi".into(),
            ));
        }
        Ok(ConvexBody::Box { lo, hi })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Box { lo, .. } => lo.len(),
            ConvexBody::Polytope(p) => p.dim,
        }
    }

    /// Integer bounding box, or `None` if the body has no real points.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        match self {
            ConvexBody::Box { lo, hi } => {
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    None
                } else {
                    Some((lo.clone(), hi.clone()))
                }
            }
            ConvexBody::Polytope(p) => p.bbox.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows().is_empty()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        match self {
            ConvexBody::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| l <= v && v <= h),
            ConvexBody::Polytope(p) => p.contains(x),
        }
    }

    /// Whether the body lies inside `[−N, N]^d`.
    pub fn within(&self, big_n: u64) -> bool {
        let n = big_n.min(i64::MAX as u64) as i64;
        match self.bounding_box() {
            None => true,
            Some((lo, hi)) => lo.iter().chain(&hi).all(|&v| -n <= v && v <= n),
        }
    }

    /// `K ∩ ℤ^d` as rows along the last coordinate, in lexicographic order.
    pub fn rows(&self) -> Vec<LatticeRow> {
        let (lo, hi) = match self.bounding_box() {
            Some(b) => b,
            None => return Vec::new(),
        };
        let d = lo.len();
        let k = d - 1;
        let mut out = Vec::new();
        let mut prefix: Vec<i64> = lo[..k].to_vec();
        loop {
            let range = match self {
                ConvexBody::Box { .. } => Some((lo[k], hi[k])),
                ConvexBody::Polytope(p) => p.last_range(&prefix, lo[k], hi[k]),
            };
            if let Some((l, h)) = range {
                out.push(LatticeRow {
                    prefix: prefix.clone(),
                    lo: l,
                    hi: h,
                });
            }
            // odometer increment over the prefix box
            let mut j = k;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                if prefix[j] < hi[j] {
                    prefix[j] += 1;
                    for q in (j + 1)..k {
                        prefix[q] = lo[q];
                    }
                    break;
                }
            }
        }
    }

    /// Streams `K ∩ ℤ^d` in lexicographic order.
    pub fn lattice_points(&self) -> impl Iterator<Item = Vec<i64>> {
        self.rows().into_iter().flat_map(|row| {
            (row.lo..=row.hi).map(move |x| {
                let mut v = row.prefix.clone();
                v.push(x);
                v
            })
        })
    }

    pub fn lattice_count(&self) -> u128 {
        self.rows().iter().map(|r| r.len() as u128).sum()
    }

    pub fn volume(&self) -> VolumeEstimate {
        match self {
            ConvexBody::Box { lo, hi } => {
                let v = lo
                    .iter()
                    .zip(hi)
                    .map(|(l, h)| (h - l).max(0) as f64)
                    .product();
                VolumeEstimate {
                    value: v,
                    exact: true,
                    uncertainty: 0.0,
                }
            }
            ConvexBody::Polytope(p) => {
                let count = self.lattice_count() as f64;
                let uncertainty = match &p.bbox {
                    None => 0.0,
                    Some((lo, hi)) => {
                        let extent = lo.iter().zip(hi).map(|(l, h)| h - l).max().unwrap_or(0);
                        let d = p.dim as i32;
                        2.0 * d as f64 * ((extent + 1) as f64).powi(d - 1)
                    }
                };
                VolumeEstimate {
                    value: count,
                    exact: false,
                    uncertainty,
                }
            }
        }
    }
}

/// Whether every form maps `K ∩ ℤ^d` into `[1, N]`; vacuous for empty bodies.
pub fn check_range(system: &AffineSystem, body: &ConvexBody, big_n: u64) -> Result<bool> {
    if system.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            got: body.dim(),
        });
    }
    let n = big_n as i128;
    let ok = |v: i128| (1..=n).contains(&v);
    match body {
        ConvexBody::Box { lo, hi } => {
            if body.bounding_box().is_none() {
                return Ok(true);
            }
            for f in system.forms() {
                let (mut min, mut max) = (f.constant as i128, f.constant as i128);
                for ((&c, &l), &h) in f.coeffs.iter().zip(lo).zip(hi) {
                    let (a, b) = (c as i128 * l as i128, c as i128 * h as i128);
                    min += a.min(b);
                    max += a.max(b);
                }
                if !ok(min) || !ok(max) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ConvexBody::Polytope(_) => {
            let d = system.dim();
            let mut buf = vec![0i64; d];
            for row in body.rows() {
                for x in [row.lo, row.hi] {
                    row.fill(x, &mut buf);
                    for f in system.forms() {
                        let v: i128 = f.constant as i128
                            + f.coeffs
                                .iter()
                                .zip(&buf)
                                .map(|(&c, &x)| c as i128 * x as i128)
                                .sum::<i128>();
                        if !ok(v) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_points() {
        let b = ConvexBody::new_box(vec![1, 1], vec![3, 2]).unwrap();
        let pts: Vec<_> = b.lattice_points().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![1, 1]);
        assert_eq!(pts[1], vec![1, 2]);
        assert_eq!(pts[5], vec![3, 2]);
    }

    #[test]
    fn small_polytope() {
        let p = Polytope::new(vec![vec![1, 1], vec![-1, 0], vec![0, -1]], vec![2, -1, -1]).unwrap();
        let pts: Vec<_> = ConvexBody::Polytope(p).lattice_points().collect();
        assert_eq!(pts, vec![vec![1, 1]]);
    }

    #[test]
    fn empty_polytope() {
        let p = Polytope::new(vec![vec![1], vec![-1]], vec![0, -1]).unwrap();
        let body = ConvexBody::Polytope(p);
        assert!(body.is_empty());
        assert_eq!(body.volume().value, 0.0);
        let s = AffineSystem::from_rows(&[&[1, 0]]).unwrap();
        assert!(check_range(&s, &body, 5).unwrap());
    }

    #[test]
    fn unbounded_rejected() {
        assert!(Polytope::new(vec![vec![1, 0], vec![0, 1]], vec![3, 3]).is_err());
    }

    #[test]
    fn rational_rows() {
        let r = |n, d| Ratio::new(n, d);
        // x <= 5/2, x >= 1/3
        let p = Polytope::from_rational(vec![vec![r(1, 1)], vec![r(-1, 1)]], vec![r(5, 2), r(-1, 3)])
            .unwrap();
        let pts: Vec<_> = ConvexBody::Polytope(p).lattice_points().collect();
        assert_eq!(pts, vec![vec![1], vec![2]]);
    }

    #[test]
    fn volumes() {
        let b = ConvexBody::new_box(vec![0, 0], vec![10, 5]).unwrap();
        assert_eq!(b.volume().value, 50.0);
        let u = ConvexBody::new_box(vec![0, 0, 0], vec![1, 1, 1]).unwrap();
        assert_eq!(u.volume().value, 1.0);
        let m = 1000i64;
        let simplex =
            Polytope::new(vec![vec![-1, 0], vec![0, -1], vec![1, 1]], vec![0, 0, m]).unwrap();
        let v = ConvexBody::Polytope(simplex).volume();
        let target = (m * m) as f64 / 2.0;
        assert!((v.value / target - 1.0).abs() < 0.01);
        assert!((v.value - target).abs() <= v.uncertainty);
    }

    #[test]
    fn range_examples() {
        let s = AffineSystem::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]).unwrap();
        let m = 50;
        let b = ConvexBody::new_box(vec![1, 1], vec![m, m]).unwrap();
        assert!(check_range(&s, &b, 2 * m as u64).unwrap());
        assert!(!check_range(&s, &b, m as u64).unwrap());
        let empty = ConvexBody::new_box(vec![3], vec![2]).unwrap();
        let s1 = AffineSystem::from_rows(&[&[1, 0]]).unwrap();
        assert!(check_range(&s1, &empty, 1).unwrap());
    }

    #[test]
    fn polytope_range_uses_lattice_points() {
        let s = AffineSystem::from_rows(&[&[1, 1, 0]]).unwrap();
        let tri = Polytope::new(vec![vec![-1, 0], vec![0, -1], vec![1, 1]], vec![-1, -1, 6]).unwrap();
        let body = ConvexBody::Polytope(tri);
        assert!(check_range(&s, &body, 6).unwrap());
        assert!(!check_range(&s, &body, 5).unwrap());
    }
}
