//! Basis-exchange Markov chain on 2-trees.
//!
//! The state keeps the inverse of the projected boundary matrix modulo
//! a prime `P < 2^29`. Swapping column `k` for `c` keeps the matrix nonsingular iff
//! `(M^{-1} c)_k != 0`, and since `c` has at most three nonzeros the test costs
//! O(1). Accepted swaps update the inverse in O(N^2).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{initial_tree, projected_column, tree_size, TwoTree};
use crate::error::{invalid, Error, Result};
use crate::simplicial::{binomial, rank_of, unrank_into};

/// Default step budget for reaching `t0`.
pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// Largest prime below `2^29`: sums of 64 products of residues fit in a `u64`.
const P: u64 = 536_870_909;

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    a * b % P
}

fn inv(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

#[inline]
fn lift(v: i64) -> u64 {
    if v >= 0 {
        v as u64
    } else {
        P - v.unsigned_abs()
    }
}

/// Number of pending rank-one corrections before they are folded in.
const BLOCK: usize = 32;

/// `M^{-1}` over `F_P` as `base + Σ_l u_l v_l^T`, with the correction terms
/// applied to `base` in blocks so each pass streams the matrix once.
#[derive(Clone, Debug)]
struct DelayedInverse {
    size: usize,
    /// Column-major residues.
    base: Vec<u32>,
    /// `u[l * size + i]`.
    u: Vec<u32>,
    /// `v[l * size + j]`.
    v: Vec<u32>,
    pending: usize,
}

impl DelayedInverse {
    fn identity(size: usize) -> Self {
        let mut base = vec![0u32; size * size];
        for i in 0..size {
            base[i * size + i] = 1;
        }
        DelayedInverse {
            size,
            base,
            u: vec![0; BLOCK * size],
            v: vec![0; BLOCK * size],
            pending: 0,
        }
    }

    fn column(&self, j: usize) -> &[u32] {
        &self.base[j * self.size..(j + 1) * self.size]
    }

    /// `v_l · c` for each pending term.
    fn project(&self, col: &[(usize, u64)]) -> [u64; BLOCK] {
        let mut z = [0u64; BLOCK];
        for (l, zl) in z.iter_mut().enumerate().take(self.pending) {
            *zl = col.iter().map(|&(r, c)| self.v[l * self.size + r] as u64 * c).sum::<u64>() % P;
        }
        z
    }

    /// `(M^{-1} c)_i` given `z = project(c)`.
    fn entry(&self, i: usize, col: &[(usize, u64)], z: &[u64; BLOCK]) -> u64 {
        let base: u64 = col.iter().map(|&(r, c)| self.column(r)[i] as u64 * c).sum();
        let corr: u64 = (0..self.pending).map(|l| self.u[l * self.size + i] as u64 * z[l]).sum();
        (base + corr) % P
    }

    /// `M^{-1} c`.
    fn apply(&self, col: &[(usize, u64)], z: &[u64; BLOCK]) -> Vec<u64> {
        let mut w = vec![0u64; self.size];
        let terms = col
            .iter()
            .map(|&(r, c)| (self.column(r), c))
            .chain((0..self.pending).map(|l| (&self.u[l * self.size..(l + 1) * self.size], z[l])));
        for (vec, c) in terms {
            for (x, &y) in w.iter_mut().zip(vec) {
                *x += c * y as u64;
            }
        }
        w.into_iter().map(|x| x % P).collect()
    }

    fn row(&self, k: usize) -> Vec<u64> {
        let size = self.size;
        let mut out: Vec<u64> = (0..size).map(|j| self.base[j * size + k] as u64).collect();
        for l in 0..self.pending {
            let a = self.u[l * size + k] as u64;
            if a != 0 {
                for (o, &y) in out.iter_mut().zip(&self.v[l * size..(l + 1) * size]) {
                    *o += a * y as u64;
                }
            }
        }
        out.into_iter().map(|x| x % P).collect()
    }

    /// Replaces column `k` by `c`, where `w = M^{-1} c` and `w_k != 0`.
    fn replace(&mut self, k: usize, w: &[u64]) {
        let size = self.size;
        let scale = inv(w[k]);
        let row = self.row(k);
        let l = self.pending;
        for (j, &x) in row.iter().enumerate() {
            self.v[l * size + j] = mul(x, scale) as u32;
        }
        for (i, &wi) in w.iter().enumerate() {
            // u = e_k - w
            let t = if i == k { 1 + P - wi } else { P - wi };
            self.u[l * size + i] = (t % P) as u32;
        }
        self.pending += 1;
        if self.pending == BLOCK {
            self.flush();
        }
    }

    fn flush(&mut self) {
        let (size, pending) = (self.size, self.pending);
        let mut acc = vec![0u64; size];
        for j in 0..size {
            let col = &mut self.base[j * size..(j + 1) * size];
            for (a, &x) in acc.iter_mut().zip(col.iter()) {
                *a = x as u64;
            }
            for l in 0..pending {
                let g = self.v[l * size + j];
                if g != 0 {
                    let u = &self.u[l * size..(l + 1) * size];
                    for (a, &y) in acc.iter_mut().zip(u) {
                        *a += g as u64 * y as u64;
                    }
                }
            }
            for (x, &a) in col.iter_mut().zip(acc.iter()) {
                *x = (a % P) as u32;
            }
        }
        self.pending = 0;
    }
}

/// One run of the chain.
#[derive(Clone, Debug)]
pub struct ChainState {
    n: usize,
    step: u64,
    accepted: u64,
    /// Triangle rank in each column slot.
    slots: Vec<usize>,
    present: Vec<bool>,
    edge_degrees: Vec<usize>,
    /// `histogram[k]` = number of edges of degree `k`.
    histogram: Vec<usize>,
    minv: DelayedInverse,
    rng: ChaCha8Rng,
    buf: Vec<usize>,
}

impl ChainState {
    /// Starts from the cone tree.
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n < 5 {
            return Err(invalid(format!("chain needs n >= 5, got {n}")));
        }
        let size = tree_size(n);
        let mut slots = Vec::with_capacity(size);
        let mut e = Vec::new();
        for r in 0..size {
            unrank_into(r, 1, &mut e);
            slots.push(rank_of(&[0, e[0] + 1, e[1] + 1]));
        }
        let tree = initial_tree(n)?;
        let edge_degrees = tree.edge_degrees();
        let mut histogram = vec![0; size + 1];
        for &d in &edge_degrees {
            histogram[d] += 1;
        }
        let mut present = vec![false; binomial(n, 3)];
        for &f in &slots {
            present[f] = true;
        }
        let minv = DelayedInverse::identity(size);
        Ok(ChainState {
            n,
            step: 0,
            accepted: 0,
            slots,
            present,
            edge_degrees,
            histogram,
            minv,
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn edge_degrees(&self) -> &[usize] {
        &self.edge_degrees
    }

    pub fn tree(&self) -> TwoTree {
        TwoTree::new_unchecked(self.n, self.slots.clone())
    }

    /// Whether the distinct edge degrees are consecutive.
    pub fn t0_reached(&self) -> bool {
        let mut lo = None;
        let mut hi = 0;
        for (d, &c) in self.histogram.iter().enumerate() {
            if c > 0 {
                lo.get_or_insert(d);
                hi = d;
            }
        }
        lo.map_or(true, |lo| self.histogram[lo..=hi].iter().all(|&c| c > 0))
    }

    /// Recomputes the edge degrees from the faces and compares.
    pub fn degrees_consistent(&self) -> bool {
        self.edge_degrees == self.tree().edge_degrees()
    }

    fn shift_degrees(&mut self, face: usize, delta: isize) {
        unrank_into(face, 2, &mut self.buf);
        let (a, b, c) = (self.buf[0], self.buf[1], self.buf[2]);
        for e in [rank_of(&[a, b]), rank_of(&[a, c]), rank_of(&[b, c])] {
            let d = &mut self.edge_degrees[e];
            self.histogram[*d] -= 1;
            *d = d.checked_add_signed(delta).expect("degree stays nonnegative");
            self.histogram[*d] += 1;
        }
    }

    /// One proposal; returns whether the swap was accepted.
    pub fn step(&mut self) -> bool {
        self.step += 1;
        let size = self.slots.len();
        let k = self.rng.gen_range(0..size);
        let total = self.present.len();
        let tau = loop {
            let t = self.rng.gen_range(0..total);
            if !self.present[t] {
                break t;
            }
        };
        let (col, len) = projected_column(tau, &mut self.buf);
        let col: Vec<(usize, u64)> = col[..len].iter().map(|&(r, v)| (r, lift(v))).collect();
        let z = self.minv.project(&col);
        if self.minv.entry(k, &col, &z) == 0 {
            return false;
        }
        let w = self.minv.apply(&col, &z);
        self.minv.replace(k, &w);
        let sigma = self.slots[k];
        self.present[sigma] = false;
        self.present[tau] = true;
        self.slots[k] = tau;
        self.shift_degrees(sigma, -1);
        self.shift_degrees(tau, 1);
        self.accepted += 1;
        true
    }
}

/// Advances the chain by one proposal.
pub fn chain_step(mut state: ChainState) -> ChainState {
    state.step();
    state
}

/// A sampled tree with its stopping time.
#[derive(Clone, Debug)]
pub struct SampleOutcome {
    pub tree: TwoTree,
    pub t0: u64,
    pub steps: u64,
    pub accepted: u64,
}

/// Runs the chain to `2 t0`, failing if `t0` exceeds `cap`.
pub fn sample_tree_with(n: usize, seed: u64, cap: u64) -> Result<SampleOutcome> {
    let mut state = ChainState::new(n, seed)?;
    while !state.t0_reached() {
        if state.step_count() >= cap {
            return Err(Error::MixingTimeout(cap));
        }
        state.step();
    }
    let t0 = state.step_count();
    while state.step_count() < 2 * t0 {
        state.step();
    }
    Ok(SampleOutcome {
        tree: state.tree(),
        t0,
        steps: state.step_count(),
        accepted: state.accepted(),
    })
}

/// A tree sampled at time `2 t0` with the default step cap.
pub fn sample_tree(n: usize, seed: u64) -> Result<TwoTree> {
    sample_tree_with(n, seed, DEFAULT_STEP_CAP).map(|s| s.tree)
}
