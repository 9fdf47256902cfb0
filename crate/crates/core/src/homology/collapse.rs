//! Elementary collapses of free `(d-1)`-faces.

use crate::simplicial::{binomial, facets, unrank_into, ComplexState};

/// Result of collapsing a complex as far as possible through free codimension-1 faces.
#[derive(Clone, Debug)]
pub struct ReducedComplex {
    n: usize,
    d: usize,
    /// `(free face, top face)` in the order the collapses were performed.
    pairs: Vec<(usize, usize)>,
    /// Surviving top faces (sorted ranks); these form the core.
    top: Vec<usize>,
    /// Boundary columns of the surviving top faces, by `(d-1)`-face rank.
    columns: Vec<Vec<(usize, i64)>>,
    removed_lower: Vec<bool>,
}

impl ReducedComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Surviving `d`-faces.
    pub fn top_faces(&self) -> &[usize] {
        &self.top
    }

    /// Surviving `(d-1)`-faces, including those in no top face.
    pub fn lower_faces(&self) -> Vec<usize> {
        (0..self.removed_lower.len())
            .filter(|&r| !self.removed_lower[r])
            .collect()
    }

    pub fn is_lower_removed(&self, rank: usize) -> bool {
        self.removed_lower[rank]
    }

    /// Boundary columns of the surviving top faces indexed by full `(d-1)`-face rank.
    pub fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.columns
    }

    /// Boundary matrix of the reduced complex with zero rows dropped.
    ///
    /// Returns `(row ranks, columns)` where columns use compressed row indices
    /// into `row ranks`.
    pub fn compressed_boundary(&self) -> (Vec<usize>, Vec<Vec<(usize, i64)>>) {
        let mut rows: Vec<usize> = self.columns.iter().flatten().map(|e| e.0).collect();
        rows.sort_unstable();
        rows.dedup();
        let cols = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|&(r, v)| (rows.binary_search(&r).unwrap(), v))
                    .collect()
            })
            .collect();
        (rows, cols)
    }
}

/// Repeatedly removes a `(d-1)`-face lying in exactly one `d`-face together with
/// that face. The surviving `d`-faces are the maximal core, independent of the
/// collapse order.
pub fn collapse_reduce(state: &ComplexState) -> ReducedComplex {
    let (n, d) = (state.n(), state.d());
    let faces = state.faces();
    let lower_count = binomial(n, d);
    let mut bnd: Vec<[(usize, i64); crate::simplicial::MAX_VERTICES]> =
        Vec::with_capacity(faces.len());
    let mut degree = vec![0u32; lower_count];
    // xor of incident face indices: equals the unique incident face when degree is 1
    let mut incident = vec![0usize; lower_count];
    let mut buf = Vec::with_capacity(d + 1);
    for (i, &r) in faces.iter().enumerate() {
        unrank_into(r, d, &mut buf);
        let mut arr = [(0usize, 0i64); crate::simplicial::MAX_VERTICES];
        for (j, (f, s)) in facets(&buf).enumerate() {
            arr[j] = (f, s);
            degree[f] += 1;
            incident[f] ^= i;
        }
        bnd.push(arr);
    }
    let mut alive = vec![true; faces.len()];
    let mut removed_lower = vec![false; lower_count];
    let mut stack: Vec<usize> = (0..lower_count).filter(|&f| degree[f] == 1).collect();
    stack.reverse();
    let mut pairs = Vec::new();
    while let Some(f) = stack.pop() {
        if degree[f] != 1 || removed_lower[f] {
            continue;
        }
        let g = incident[f];
        debug_assert!(alive[g]);
        alive[g] = false;
        removed_lower[f] = true;
        pairs.push((f, faces[g]));
        for &(h, _) in &bnd[g][..=d] {
            degree[h] -= 1;
            incident[h] ^= g;
            if degree[h] == 1 && !removed_lower[h] {
                stack.push(h);
            }
        }
    }
    let mut top = Vec::new();
    let mut columns = Vec::new();
    for (i, &r) in faces.iter().enumerate() {
        if alive[i] {
            top.push(r);
            columns.push(bnd[i][..=d].to_vec());
        }
    }
    ReducedComplex {
        n,
        d,
        pairs,
        top,
        columns,
        removed_lower,
    }
}
