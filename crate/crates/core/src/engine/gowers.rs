//! Gowers uniformity norms on `[N]`, with `f` extended by zero outside `[N]`
//! and shifts `h ∈ [N]^s`:
//! `‖f‖^{2^s} = N^{−(s+1)} Σ_{x,h} ∏_{ω∈{0,1}^s} f(x + ω·h)`.
//!
//! With shifts restricted to positive values the average need not be
//! nonnegative; a negative average is reported and the norm clamped to 0.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `N` for the `U²` autocorrelation path.
pub const U2_FAST_CAP: usize = 100_000;
/// Largest `N` for the `U³` path.
pub const U3_FAST_CAP: usize = 2_000;
/// Largest `N^{s+1}` accepted by the direct definition.
pub const DIRECT_WORK_CAP: u128 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GowersValue {
    pub s: u32,
    pub n: usize,
    /// The average before taking the `2^s`-th root.
    pub average: f64,
    pub norm: f64,
}

impl GowersValue {
    fn new(s: u32, n: usize, average: f64) -> Self {
        GowersValue {
            s,
            n,
            average,
            norm: average.max(0.0).powf(1.0 / (1u32 << s) as f64),
        }
    }
}

/// `(R(h), Q(h))` for `h = 0..len`: autocorrelations of `f` and of `f²`.
fn autocorrelations(f: &[f64], planner: &mut FftPlanner<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let size = (2 * n).next_power_of_two().max(2);
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let run = |vals: &mut dyn Iterator<Item = f64>| -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for (slot, v) in buf.iter_mut().zip(vals) {
            slot.re = v;
        }
        fwd.process(&mut buf);
        for z in buf.iter_mut() {
            *z = Complex::new(z.norm_sqr(), 0.0);
        }
        inv.process(&mut buf);
        buf[..n].iter().map(|z| z.re / size as f64).collect()
    };
    let r = run(&mut f.iter().copied());
    let q = run(&mut f.iter().map(|x| x * x));
    (r, q)
}

/// `Σ_{x, h1, h2 >= 1} f(x)f(x+h1)f(x+h2)f(x+h1+h2)`.
fn u2_sum(f: &[f64], planner: &mut FftPlanner<f64>) -> f64 {
    if f.len() < 2 {
        return 0.0;
    }
    let (r, q) = autocorrelations(f, planner);
    let mut acc = 0.0;
    for h in 1..f.len() {
        acc += 0.5 * (r[h] * r[h] - q[h]);
    }
    acc
}

pub fn gowers_norm(f: &[f64], s: u32) -> Result<GowersValue> {
    let n = f.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty function".into()));
    }
    let mut planner = FftPlanner::new();
    match s {
        2 => {
            if n > U2_FAST_CAP {
                return Err(Error::Capacity(format!("U2 needs N <= {U2_FAST_CAP}, got {n}")));
            }
            let total = u2_sum(f, &mut planner);
            Ok(GowersValue::new(2, n, total / (n as f64).powi(3)))
        }
        3 => {
            if n > U3_FAST_CAP {
                return Err(Error::Capacity(format!("U3 needs N <= {U3_FAST_CAP}, got {n}")));
            }
            let mut total = 0.0;
            let mut g = Vec::with_capacity(n);
            for h3 in 1..n {
                g.clear();
                g.extend((0..n - h3).map(|x| f[x] * f[x + h3]));
                total += u2_sum(&g, &mut planner);
            }
            Ok(GowersValue::new(3, n, total / (n as f64).powi(4)))
        }
        _ => Err(Error::InvalidArgument(format!("s must be 2 or 3, got {s}"))),
    }
}

/// The defining average, evaluated term by term.
pub fn gowers_norm_direct(f: &[f64], s: u32) -> Result<GowersValue> {
    let n = f.len();
    if !(2..=3).contains(&s) {
        return Err(Error::InvalidArgument(format!("s must be 2 or 3, got {s}")));
    }
    if (n as u128).pow(s + 1) > DIRECT_WORK_CAP {
        return Err(Error::Capacity(format!("direct U{s} on N = {n} is too large")));
    }
    let at = |i: usize| if i < n { f[i] } else { 0.0 };
    let mut total = 0.0;
    for x in 0..n {
        for h1 in 1..=n {
            for h2 in 1..=n {
                if s == 2 {
                    total += at(x) * at(x + h1) * at(x + h2) * at(x + h1 + h2);
                } else {
                    for h3 in 1..=n {
                        let mut p = 1.0;
                        for w in 0..8usize {
                            let mut y = x;
                            if w & 1 != 0 {
                                y += h1;
                            }
                            if w & 2 != 0 {
                                y += h2;
                            }
                            if w & 4 != 0 {
                                y += h3;
                            }
                            p *= at(y);
                        }
                        total += p;
                    }
                }
            }
        }
    }
    Ok(GowersValue::new(s, n, total / (n as f64).powi(s as i32 + 1)))
}
