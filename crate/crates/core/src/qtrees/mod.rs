//! Two-dimensional Q-acyclic complexes ("2-trees"): the basis-exchange chain,
//! exhaustive enumeration for small `n`, and the weighted count identity.
//!
//! Projecting `∂_2` onto the `C(n-1, 2)` edges that avoid vertex 0 is an
//! isomorphism on the cycle space of `K_n` over `Z`. A set of `C(n-1, 2)`
//! triangles is therefore a 2-tree iff its projected square matrix is
//! nonsingular, and then `|H_1| = |det|`.

mod chain;
mod enumerate;

use serde::{Deserialize, Serialize};

pub use chain::{chain_step, sample_tree, sample_tree_with, ChainState, SampleOutcome, DEFAULT_STEP_CAP};
pub use enumerate::{
    enumerate_qacyclic, exchange_graph, kalai_sum, ExchangeGraph, KalaiSum, MAX_ENUMERATION_N,
};

use crate::error::{invalid, Result};
use crate::homology::{collapse_reduce, rank_mod_p, smith_of_columns, top_homology, HomologySummary};
use crate::simplicial::{binomial, face_degrees, rank_of, unrank_into, ComplexState};

/// Primes tried before the exact rank.
pub const CERTIFICATE_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// A 2-complex on `n` vertices with complete 1-skeleton and `C(n-1, 2)` triangles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoTree {
    n: usize,
    faces: Vec<usize>,
}

impl TwoTree {
    /// Validates size and Q-acyclicity.
    pub fn new(n: usize, mut faces: Vec<usize>) -> Result<Self> {
        faces.sort_unstable();
        faces.dedup();
        if !is_qacyclic(&faces, n) {
            return Err(invalid("face set is not Q-acyclic"));
        }
        Ok(TwoTree { n, faces })
    }

    pub(crate) fn new_unchecked(n: usize, mut faces: Vec<usize>) -> Self {
        faces.sort_unstable();
        TwoTree { n, faces }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Triangle ranks, sorted.
    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn to_state(&self) -> ComplexState {
        ComplexState::new(self.n, 2, self.faces.clone()).expect("valid triangle ranks")
    }

    pub fn h1(&self) -> HomologySummary {
        top_homology(&self.to_state()).lower
    }

    pub fn edge_degrees(&self) -> Vec<usize> {
        face_degrees(&self.to_state(), 1).expect("k = 1 < d = 2")
    }
}

/// Number of triangles in a 2-tree on `n` vertices.
pub fn tree_size(n: usize) -> usize {
    binomial(n - 1, 2)
}

/// Row of the edge `{i, j}`, `0 < i < j`, among the edges avoiding vertex 0.
#[inline]
pub(crate) fn edge_row(i: usize, j: usize) -> usize {
    rank_of(&[i - 1, j - 1])
}

/// Boundary of a triangle restricted to the edges avoiding vertex 0.
pub(crate) fn projected_column(rank: usize, buf: &mut Vec<usize>) -> ([(usize, i64); 3], usize) {
    unrank_into(rank, 2, buf);
    let (a, b, c) = (buf[0], buf[1], buf[2]);
    let mut out = [(0usize, 0i64); 3];
    let mut len = 0;
    out[len] = (edge_row(b, c), 1);
    len += 1;
    if a > 0 {
        out[len] = (edge_row(a, c), -1);
        out[len + 1] = (edge_row(a, b), 1);
        len += 2;
    }
    (out, len)
}

/// The cone over vertex 0: every triangle through vertex 0.
pub fn initial_tree(n: usize) -> Result<TwoTree> {
    if n < 4 {
        return Err(invalid(format!("2-trees need n >= 4, got {n}")));
    }
    let mut faces = Vec::with_capacity(tree_size(n));
    for j in 2..n {
        for i in 1..j {
            faces.push(rank_of(&[0, i, j]));
        }
    }
    Ok(TwoTree::new_unchecked(n, faces))
}

/// Whether `faces` (triangle ranks) form a Q-acyclic complex on `n` vertices.
///
/// Full rank modulo any certificate prime settles it; otherwise the rank is
/// computed exactly.
pub fn is_qacyclic(faces: &[usize], n: usize) -> bool {
    if n < 3 || faces.len() != tree_size(n) {
        return false;
    }
    let Ok(state) = ComplexState::new(n, 2, faces.to_vec()) else {
        return false;
    };
    if state.len() != faces.len() {
        return false;
    }
    let reduced = collapse_reduce(&state);
    let need = reduced.top_faces().len();
    let (rows, cols) = reduced.compressed_boundary();
    if CERTIFICATE_PRIMES
        .iter()
        .any(|&p| rank_mod_p(rows.len(), &cols, p) == need)
    {
        return true;
    }
    smith_of_columns(rows.len(), cols).rank() == need
}

/// Whether the distinct edge degrees form a run of consecutive integers.
pub fn t0_reached(degrees: &[usize]) -> bool {
    let Some(&max) = degrees.iter().max() else {
        return true;
    };
    let min = *degrees.iter().min().unwrap();
    let mut seen = vec![false; max - min + 1];
    for &d in degrees {
        seen[d - min] = true;
    }
    seen.iter().all(|&s| s)
}
