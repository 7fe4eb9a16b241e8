//! Exact weighted sums over `K ∩ ℤ^d`.
//!
//! The body is cut into segments of at most [`BLOCK`] points along the last
//! coordinate. Each segment is summed in `u128` and segment results are added
//! in segment order, so the total does not depend on the worker count.

use rayon::prelude::*;

use crate::affine::{check_range, AffineSystem, ConvexBody};
use crate::engine::weights::Numerators;
use crate::error::{Error, Result};
use crate::summation::{pool, BLOCK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepTotals {
    pub total: u128,
    /// Sum over points where some form lands in the flagged set.
    pub flagged: u128,
    pub points: u128,
}

impl SweepTotals {
    fn add(self, o: SweepTotals) -> Result<Self> {
        let of = || Error::Overflow("correlation sum".into());
        Ok(SweepTotals {
            total: self.total.checked_add(o.total).ok_or_else(of)?,
            flagged: self.flagged.checked_add(o.flagged).ok_or_else(of)?,
            points: self.points + o.points,
        })
    }
}

struct Segment {
    /// Form values at the first point.
    start: Vec<i128>,
    /// Increment per unit step of the last coordinate.
    step: Vec<i128>,
    len: u64,
}

fn segments(system: &AffineSystem, body: &ConvexBody) -> Vec<Segment> {
    let d = system.dim();
    let step: Vec<i128> = system.forms().iter().map(|f| f.coeffs[d - 1] as i128).collect();
    let mut out = Vec::new();
    for row in body.rows() {
        let base: Vec<i128> = system
            .forms()
            .iter()
            .map(|f| {
                f.constant as i128
                    + f.coeffs[..d - 1]
                        .iter()
                        .zip(&row.prefix)
                        .map(|(&c, &x)| c as i128 * x as i128)
                        .sum::<i128>()
            })
            .collect();
        let mut x = row.lo;
        while x <= row.hi {
            let len = ((row.hi - x) as u64 + 1).min(BLOCK as u64);
            out.push(Segment {
                start: base.iter().zip(&step).map(|(&b, &s)| b + s * x as i128).collect(),
                step: step.clone(),
                len,
            });
            x += len as i64;
        }
    }
    out
}

/// `Σ_{n ∈ K ∩ ℤ^d} ∏_i numer[ψ_i(n)]`, plus the sub-sum over points where
/// some `ψ_i(n)` is flagged in `mask`.
pub fn sweep(
    system: &AffineSystem,
    body: &ConvexBody,
    numer: &Numerators,
    mask: Option<&[bool]>,
    workers: usize,
) -> Result<SweepTotals> {
    let limit = numer.limit();
    if !check_range(system, body, limit)? {
        return Err(Error::Range(format!(
            "forms leave [1, {limit}] on the body"
        )));
    }
    let segs = segments(system, body);
    let run = || -> Result<SweepTotals> {
        let parts: Vec<Result<SweepTotals>> = segs
            .par_iter()
            .map(|s| sum_segment(s, numer, mask))
            .collect();
        parts
            .into_iter()
            .try_fold(SweepTotals::default(), |acc, p| acc.add(p?))
    };
    if workers == 0 {
        run()
    } else {
        pool(workers).install(run)
    }
}

fn sum_segment(seg: &Segment, numer: &Numerators, mask: Option<&[bool]>) -> Result<SweepTotals> {
    let t = seg.start.len();
    let limit = numer.limit() as i128;
    let mut vals = seg.start.clone();
    let mut total: u128 = 0;
    let mut flagged: u128 = 0;
    let of = || Error::Overflow("correlation sum".into());
    for _ in 0..seg.len {
        let mut prod: u128 = 1;
        let mut hit = false;
        for i in 0..t {
            let v = vals[i];
            if v < 1 || v > limit {
                return Err(Error::Range(format!("form value {v} outside [1, {limit}]")));
            }
            let w = numer.get(v as usize) as u128;
            prod = prod.checked_mul(w).ok_or_else(of)?;
            if let Some(m) = mask {
                hit |= m[v as usize];
            }
        }
        total = total.checked_add(prod).ok_or_else(of)?;
        if hit {
            flagged = flagged.checked_add(prod).ok_or_else(of)?;
        }
        for i in 0..t {
            vals[i] += seg.step[i];
        }
    }
    Ok(SweepTotals {
        total,
        flagged,
        points: seg.len as u128,
    })
}

/// Plain double loop over `lattice_points`, used as a reference.
pub fn naive_sum(system: &AffineSystem, body: &ConvexBody, numer: &Numerators) -> Result<u128> {
    let mut total: u128 = 0;
    for x in body.lattice_points() {
        let mut prod: u128 = 1;
        for f in system.forms() {
            let v = f.evaluate(&x)?;
            if v < 1 || v as u64 > numer.limit() {
                return Err(Error::Range(format!("form value {v} out of range")));
            }
            prod = prod
                .checked_mul(numer.get(v as usize) as u128)
                .ok_or_else(|| Error::Overflow("naive sum".into()))?;
        }
        total = total
            .checked_add(prod)
            .ok_or_else(|| Error::Overflow("naive sum".into()))?;
    }
    Ok(total)
}
