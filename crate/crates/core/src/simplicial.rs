//! Face combinatorics for `d`-complexes with complete `(d-1)`-skeleton.
//!
//! Faces of a given dimension are identified with their rank in the
//! colexicographic order: the `k`-simplex `{v_0 < v_1 < ... < v_k}` has rank
//! `sum_i C(v_i, i + 1)`. Ranks do not depend on `n`, so the order is fixed once
//! for every vertex count. All matrices in the crate index rows and columns by
//! these ranks.

use std::fmt;
use std::io::{BufRead, Write};

use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::homology::SparseIntMatrix;

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A simplex given by strictly increasing vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("a simplex needs at least one vertex"));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!(
                "simplex vertices must be strictly increasing: {vertices:?}"
            )));
        }
        Ok(Simplex { vertices })
    }

    /// Sorts and validates an unordered vertex list.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.vertices)
    }
}

impl fmt::Display for Simplex {
    /// 1-indexed, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

/// Colex rank of a strictly increasing vertex list.
#[inline]
pub fn rank_of(vertices: &[usize]) -> usize {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v, i + 1))
        .sum()
}

/// Vertices of the `k`-simplex with colex rank `r`, written into `out`.
pub fn unrank_into(mut r: usize, k: usize, out: &mut Vec<usize>) {
    out.clear();
    out.resize(k + 1, 0);
    for i in (0..=k).rev() {
        // largest v with C(v, i + 1) <= r
        let mut v = i;
        while binomial(v + 1, i + 1) <= r {
            v += 1;
        }
        out[i] = v;
        r -= binomial(v, i + 1);
    }
}

/// Largest number of vertices a face may have (dimension 7).
pub const MAX_VERTICES: usize = 8;

/// Ranks and signs of the facets of a simplex: facet `i` drops vertex `i` and
/// carries sign `(-1)^i`.
pub fn facets(vertices: &[usize]) -> impl Iterator<Item = (usize, i64)> {
    let k = vertices.len();
    assert!(k <= MAX_VERTICES, "simplex too large: {k} vertices");
    let mut lower = [0usize; MAX_VERTICES];
    let mut upper = [0usize; MAX_VERTICES];
    for (j, &v) in vertices.iter().enumerate() {
        lower[j] = binomial(v, j);
        upper[j] = binomial(v, j + 1);
    }
    (0..k).map(move |i| {
        let below: usize = upper[..i].iter().sum();
        let above: usize = lower[i + 1..k].iter().sum();
        let sign = if i % 2 == 0 { 1 } else { -1 };
        (below + above, sign)
    })
}

/// All `k`-simplices on `n` vertices in colex order.
pub fn enumerate_faces(n: usize, k: usize) -> Result<Vec<Simplex>> {
    if k >= n {
        return Err(invalid(format!("dimension {k} needs more than {n} vertices")));
    }
    let total = binomial(n, k + 1);
    let mut buf = Vec::with_capacity(k + 1);
    Ok((0..total)
        .map(|r| {
            unrank_into(r, k, &mut buf);
            Simplex {
                vertices: buf.clone(),
            }
        })
        .collect())
}

pub fn face_rank(s: &Simplex, n: usize) -> Result<usize> {
    if s.vertices.last().is_some_and(|&v| v >= n) {
        return Err(invalid(format!("simplex {s} has a vertex outside [1, {n}]")));
    }
    Ok(s.rank())
}

pub fn face_unrank(r: usize, n: usize, k: usize) -> Result<Simplex> {
    let total = binomial(n, k + 1);
    if r >= total {
        return Err(invalid(format!(
            "rank {r} out of range for {k}-faces on {n} vertices ({total} faces)"
        )));
    }
    let mut vertices = Vec::with_capacity(k + 1);
    unrank_into(r, k, &mut vertices);
    Ok(Simplex { vertices })
}

/// A `d`-complex on `n` vertices with implicit complete `(d-1)`-skeleton.
///
/// The top faces are stored as sorted, distinct colex ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexState {
    n: usize,
    d: usize,
    faces: Vec<usize>,
}

impl ComplexState {
    pub fn new(n: usize, d: usize, mut faces: Vec<usize>) -> Result<Self> {
        if d < 1 || d >= n {
            return Err(invalid(format!("need 1 <= d < n, got d = {d}, n = {n}")));
        }
        let total = binomial(n, d + 1);
        faces.sort_unstable();
        faces.dedup();
        if let Some(&last) = faces.last() {
            if last >= total {
                return Err(invalid(format!("face rank {last} >= C({n}, {})", d + 1)));
            }
        }
        Ok(ComplexState { n, d, faces })
    }

    pub fn from_simplices(n: usize, d: usize, simplices: &[Simplex]) -> Result<Self> {
        let mut faces = Vec::with_capacity(simplices.len());
        for s in simplices {
            if s.dim() != d {
                return Err(invalid(format!("face {s} is not {d}-dimensional")));
            }
            faces.push(face_rank(s, n)?);
        }
        Self::new(n, d, faces)
    }

    pub fn empty(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, Vec::new())
    }

    /// Every `d`-face on `n` vertices.
    pub fn full(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, (0..binomial(n, d + 1)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, rank: usize) -> bool {
        self.faces.binary_search(&rank).is_ok()
    }

    pub fn simplices(&self) -> Vec<Simplex> {
        let mut buf = Vec::new();
        self.faces
            .iter()
            .map(|&r| {
                unrank_into(r, self.d, &mut buf);
                Simplex {
                    vertices: buf.clone(),
                }
            })
            .collect()
    }

    /// Number of faces of dimension `k` present (complete below `d`).
    pub fn face_count(&self, k: usize) -> usize {
        match k.cmp(&self.d) {
            std::cmp::Ordering::Less => binomial(self.n, k + 1),
            std::cmp::Ordering::Equal => self.faces.len(),
            std::cmp::Ordering::Greater => 0,
        }
    }

    pub fn with_face(&self, rank: usize) -> Self {
        let mut faces = self.faces.clone();
        if let Err(pos) = faces.binary_search(&rank) {
            faces.insert(pos, rank);
        }
        ComplexState {
            n: self.n,
            d: self.d,
            faces,
        }
    }
}

/// Boundary matrix `∂_k` in colex row order.
///
/// For `k < d` the columns index all `k`-faces; for `k = d` they index
/// `state.faces()` in stored order.
pub fn boundary_matrix(state: &ComplexState, k: usize) -> Result<SparseIntMatrix> {
    if k < 1 || k > state.d {
        return Err(invalid(format!("boundary dimension {k} outside [1, {}]", state.d)));
    }
    let rows = binomial(state.n, k);
    let columns: Vec<usize> = if k == state.d {
        state.faces.clone()
    } else {
        (0..binomial(state.n, k + 1)).collect()
    };
    let mut entries = Vec::with_capacity(columns.len() * (k + 1));
    let mut buf = Vec::with_capacity(k + 1);
    for (c, &r) in columns.iter().enumerate() {
        unrank_into(r, k, &mut buf);
        for (row, sign) in facets(&buf) {
            entries.push((row, c, BigInt::from(sign)));
        }
    }
    SparseIntMatrix::new(rows, columns.len(), entries)
}

/// For each `k`-face (indexed by colex rank) the number of top faces containing it.
pub fn face_degrees(state: &ComplexState, k: usize) -> Result<Vec<usize>> {
    if k >= state.d {
        return Err(invalid(format!("degree dimension {k} must be below d = {}", state.d)));
    }
    let mut deg = vec![0usize; binomial(state.n, k + 1)];
    let mut top = Vec::with_capacity(state.d + 1);
    let mut sub = Vec::with_capacity(k + 1);
    for &r in &state.faces {
        unrank_into(r, state.d, &mut top);
        for_each_subset(&top, k + 1, &mut sub, &mut |s| deg[rank_of(s)] += 1);
    }
    Ok(deg)
}

fn for_each_subset(
    set: &[usize],
    size: usize,
    buf: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    fn rec(
        set: &[usize],
        start: usize,
        size: usize,
        buf: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if buf.len() == size {
            f(buf);
            return;
        }
        for i in start..set.len() {
            if set.len() - i < size - buf.len() {
                break;
            }
            buf.push(set[i]);
            rec(set, i + 1, size, buf, f);
            buf.pop();
        }
    }
    buf.clear();
    rec(set, 0, size, buf, f);
}

/// Writes faces one per line as comma-separated 1-indexed vertices.
pub fn write_faces<W: Write>(mut w: W, faces: &[Simplex]) -> Result<()> {
    for s in faces {
        writeln!(w, "{s}")?;
    }
    Ok(())
}

/// Parses the face-set format. Blank lines and lines starting with `#` are skipped.
pub fn read_faces<R: BufRead>(r: R) -> Result<Vec<Simplex>> {
    let mut out = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_face(line).map_err(|e| {
            Error::Parse(format!("line {}: {e}", lineno + 1))
        })?);
    }
    Ok(out)
}

pub fn parse_face(s: &str) -> Result<Simplex> {
    let mut vertices = Vec::new();
    for tok in s.split(',') {
        let v: usize = tok
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex label {tok:?}")))?;
        if v == 0 {
            return Err(Error::Parse("vertex labels are 1-indexed".into()));
        }
        vertices.push(v - 1);
    }
    Simplex::from_unsorted(vertices)
}
