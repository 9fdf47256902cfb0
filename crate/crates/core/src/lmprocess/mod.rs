//! The Linial–Meshulam process `Y_d(n, m)`: sampling, the largest-torsion
//! search, burst anatomy and the threshold predictors.

mod burst;
mod predict;
mod search;

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use burst::{burst_analysis, BurstRecord};
pub use predict::{
    c_d_solve, c_value, predict, predicted_betti_d, quadratic_fit, t_c_solve, threshold_bracket,
};
pub use search::{
    find_jump_points, find_jump_points_with, lt_search, lt_search_at, torsion_at, torsion_sequence, BettiProfile,
    LTResult,
};

use crate::error::{invalid, Result};
use crate::simplicial::{binomial, ComplexState};

/// Default window radius around `m*`.
pub const DEFAULT_WINDOW: usize = 100;
/// Default prime for the Betti-number shortcut.
pub const DEFAULT_Q0: u64 = 10007;
/// Configured two-dimensional threshold constant.
pub const C2: f64 = 2.7538;

/// A uniformly random ordering of a prefix of the `d`-faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// Face ranks in the order they are added.
    pub order: Vec<usize>,
}

impl ProcessTrace {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `Y_d(n, m)`: the first `m` faces.
    pub fn state_at(&self, m: usize) -> ComplexState {
        ComplexState::new(self.n, self.d, self.order[..m].to_vec()).expect("trace faces are valid")
    }
}

/// Partial Fisher–Yates shuffle of all `d`-face ranks.
pub fn sample_trace(n: usize, d: usize, m_max: usize, seed: u64) -> Result<ProcessTrace> {
    if d < 1 || d + 1 > n {
        return Err(invalid(format!("need 1 <= d < n, got d = {d}, n = {n}")));
    }
    let total = binomial(n, d + 1);
    if m_max > total {
        return Err(invalid(format!("m_max = {m_max} exceeds C({n}, {}) = {total}", d + 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<usize> = (0..total).collect();
    for i in 0..m_max {
        let j = rng.gen_range(i..total);
        all.swap(i, j);
    }
    all.truncate(m_max);
    Ok(ProcessTrace {
        n,
        d,
        seed,
        order: all,
    })
}

/// Threshold constant `c_d`: configured for `d = 2`, solved numerically for `d = 3, 4, 5`.
pub fn c_d(d: usize) -> Result<f64> {
    static SOLVED: OnceLock<[f64; 3]> = OnceLock::new();
    match d {
        2 => Ok(C2),
        3..=5 => Ok(SOLVED.get_or_init(|| [3, 4, 5].map(c_d_solve))[d - 3]),
        _ => Err(invalid(format!("no threshold constant configured for d = {d}"))),
    }
}

/// `floor(c / n * C(n, d+1))`.
pub fn m_star_with(n: usize, d: usize, c: f64) -> Result<usize> {
    if n <= d + 1 {
        return Err(invalid(format!("need n > d + 1, got n = {n}, d = {d}")));
    }
    Ok((c / n as f64 * binomial(n, d + 1) as f64).floor() as usize)
}

/// `m*` with the default constant for `d`.
pub fn m_star(n: usize, d: usize) -> Result<usize> {
    m_star_with(n, d, c_d(d)?)
}
