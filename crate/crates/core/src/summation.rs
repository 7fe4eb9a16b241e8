//! Deterministic reductions.
//!
//! Floating sums in this crate go through [`pairwise_sum`], whose tree shape
//! depends only on the input length. Parallel sweeps split their work into
//! fixed-size blocks (see [`BLOCK`]) independent of the worker count, reduce
//! each block sequentially, then reduce the block results pairwise. The result
//! is therefore bit-identical for any number of workers.

/// Leaf size below which pairwise summation falls back to a sequential loop.
const LEAF: usize = 32;

/// Number of lattice points (or table entries) per parallel work block.
pub const BLOCK: usize = 1 << 14;

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        let mut s = 0.0;
        for &x in xs {
            s += x;
        }
        return s;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Mean via [`pairwise_sum`]; zero for empty input.
pub fn pairwise_mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        pairwise_sum(xs) / xs.len() as f64
    }
}

/// Neumaier-compensated running sum, for streams where materialising the
/// terms is not worth it. Order-dependent, so only use it inside a block.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Builds a rayon pool with the requested number of workers (0 = rayon default).
pub fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build thread pool")
}
