//! Exhaustive enumeration of 2-trees for small `n` and the exchange graph.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;

use super::{projected_column, tree_size, TwoTree};
use crate::error::{invalid, Error, Result};
use crate::homology::integer_homology;
use crate::simplicial::binomial;

/// Largest `n` accepted by [`enumerate_qacyclic`].
pub const MAX_ENUMERATION_N: usize = 6;

fn guard(n: usize) -> Result<()> {
    if n < 4 {
        return Err(invalid(format!("enumeration needs n >= 4, got {n}")));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::ResourceGuard(format!(
            "enumeration refused for n = {n} > {MAX_ENUMERATION_N}"
        )));
    }
    Ok(())
}

/// Fraction-free determinant.
fn bareiss(mut a: Vec<Vec<i64>>) -> i64 {
    let k = a.len();
    let mut sign = 1;
    let mut prev = 1i64;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    sign * a[k - 1][k - 1]
}

/// `det` of the projected boundary matrix of `faces`; `|det| = |H_1|` when nonzero.
pub(crate) fn projected_det(faces: &[usize]) -> i64 {
    let k = faces.len();
    let mut a = vec![vec![0i64; k]; k];
    let mut buf = Vec::new();
    for (j, &f) in faces.iter().enumerate() {
        let (col, len) = projected_column(f, &mut buf);
        for &(r, v) in &col[..len] {
            a[r][j] = v;
        }
    }
    bareiss(a)
}

/// All 2-trees on `n <= 6` vertices, in lexicographic order of face ranks.
pub fn enumerate_qacyclic(n: usize) -> Result<Vec<TwoTree>> {
    guard(n)?;
    Ok((0..binomial(n, 3))
        .combinations(tree_size(n))
        .filter(|faces| projected_det(faces) != 0)
        .map(|faces| TwoTree::new_unchecked(n, faces))
        .collect())
}

/// Both sides of the weighted count identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KalaiSum {
    pub n: usize,
    pub trees: usize,
    /// `sum |H_1|^2` over all 2-trees.
    pub weighted: BigUint,
    /// `n^{C(n-2, 2)}`.
    pub expected: BigUint,
    /// Number of trees for each `|H_1|`, ascending.
    pub by_order: Vec<(BigUint, usize)>,
}

impl KalaiSum {
    pub fn holds(&self) -> bool {
        self.weighted == self.expected
    }
}

/// Sums `|H_1|^2` over [`enumerate_qacyclic`], with `H_1` from integer homology.
pub fn kalai_sum(n: usize) -> Result<KalaiSum> {
    let trees = enumerate_qacyclic(n)?;
    let mut weighted = BigUint::from(0u32);
    let mut counts: HashMap<BigUint, usize> = HashMap::new();
    for t in &trees {
        let h = integer_homology(&t.to_state(), 1)?;
        debug_assert_eq!(h.betti, 0);
        let order = h.torsion.order();
        weighted += &order * &order;
        *counts.entry(order).or_default() += 1;
    }
    let expected = BigUint::from(n).pow(binomial(n - 2, 2) as u32);
    let mut by_order: Vec<_> = counts.into_iter().collect();
    by_order.sort();
    Ok(KalaiSum {
        n,
        trees: trees.len(),
        weighted,
        expected,
        by_order,
    })
}

/// The chain's transition structure over all 2-trees on `n` vertices.
///
/// Every proposal `(σ, τ)` has probability `1 / (C(n-1,2) C(n-1,3))`;
/// `neighbors[i]` lists the states reached by accepted proposals with their
/// multiplicities, and the remaining mass is the hold probability.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub trees: Vec<TwoTree>,
    pub neighbors: Vec<Vec<(usize, u32)>>,
    pub proposals: u64,
}

impl ExchangeGraph {
    pub fn index_of(&self, t: &TwoTree) -> Option<usize> {
        self.trees.binary_search(t).ok()
    }

    pub fn probability(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.hold_probability(i);
        }
        self.neighbors[i]
            .iter()
            .find(|&&(k, _)| k == j)
            .map_or(0.0, |&(_, c)| c as f64 / self.proposals as f64)
    }

    pub fn hold_probability(&self, i: usize) -> f64 {
        let moved: u32 = self.neighbors[i].iter().map(|&(_, c)| c).sum();
        1.0 - moved as f64 / self.proposals as f64
    }

    pub fn is_symmetric(&self) -> bool {
        self.neighbors.iter().enumerate().all(|(i, row)| {
            row.iter()
                .all(|&(j, c)| self.neighbors[j].iter().any(|&(k, d)| k == i && d == c))
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.trees.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.trees.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &(j, _) in &self.neighbors[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.trees.len()
    }
}

/// Builds the exchange graph exhaustively.
pub fn exchange_graph(n: usize) -> Result<ExchangeGraph> {
    let trees = enumerate_qacyclic(n)?;
    let index: HashMap<&[usize], usize> = trees.iter().enumerate().map(|(i, t)| (t.faces(), i)).collect();
    let total = binomial(n, 3);
    let mut neighbors = Vec::with_capacity(trees.len());
    let mut cand = Vec::with_capacity(tree_size(n));
    for t in &trees {
        let mut row: HashMap<usize, u32> = HashMap::new();
        for k in 0..t.faces().len() {
            for tau in (0..total).filter(|f| t.faces().binary_search(f).is_err()) {
                cand.clear();
                cand.extend(t.faces().iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &f)| f));
                cand.push(tau);
                cand.sort_unstable();
                if let Some(&j) = index.get(cand.as_slice()) {
                    *row.entry(j).or_default() += 1;
                }
            }
        }
        let mut row: Vec<_> = row.into_iter().collect();
        row.sort_unstable();
        neighbors.push(row);
    }
    Ok(ExchangeGraph {
        proposals: (tree_size(n) * binomial(n - 1, 3)) as u64,
        trees,
        neighbors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtrees::is_qacyclic;

    #[test]
    fn determinant() {
        assert_eq!(bareiss(vec![vec![2, 4], vec![6, 8]]), -8);
        assert_eq!(bareiss(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(bareiss(vec![vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(bareiss(vec![vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), 6);
    }

    #[test]
    fn five_vertices() {
        let all = enumerate_qacyclic(5).unwrap();
        let mut checked = 0;
        for f in (0..10usize).combinations(6) {
            let t = TwoTree::new_unchecked(5, f.clone());
            assert_eq!(is_qacyclic(&f, 5), all.binary_search(&t).is_ok());
            checked += 1;
        }
        assert_eq!(checked, 210);
        let k = kalai_sum(5).unwrap();
        assert!(k.holds());
        assert_eq!(k.expected, BigUint::from(125u32));
    }

    #[test]
    fn guards() {
        assert!(matches!(enumerate_qacyclic(7), Err(Error::ResourceGuard(_))));
        assert!(enumerate_qacyclic(3).is_err());
    }

    #[test]
    fn exchange_structure() {
        let g = exchange_graph(5).unwrap();
        assert_eq!(g.proposals, 6 * 4);
        assert!(g.is_symmetric());
        assert!(g.is_connected());
        for i in 0..g.trees.len() {
            let s: f64 = (0..g.trees.len()).map(|j| g.probability(i, j)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
