//! Integer and mod-`q` homology of complexes with a complete lower skeleton.
//!
//! Every computation first collapses free `(d-1)`-faces. A collapse pair
//! contributes a unit to the Smith form of `∂_d`, so only the boundary matrix
//! of the surviving core goes through elimination.

mod collapse;
mod modp;
mod snf;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub use collapse::{collapse_reduce, ReducedComplex};
pub use modp::{inv_mod, is_prime, mul_mod, pow_mod, rank_mod_p, reduce_i64, rref_dense, IncrementalRank};

use crate::error::{invalid, Error, Result};
use crate::groups::AbelianGroup;
use crate::simplicial::{binomial, ComplexState};

/// Sparse integer matrix stored as sorted `(row, col, value)` triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    /// Duplicate positions are summed; zeros are dropped.
    pub fn new(rows: usize, cols: usize, mut entries: Vec<(usize, usize, BigInt)>) -> Result<Self> {
        if let Some(&(r, c, _)) = entries.iter().find(|e| e.0 >= rows || e.1 >= cols) {
            return Err(invalid(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut merged: Vec<(usize, usize, BigInt)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|e| !e.2.is_zero());
        Ok(SparseIntMatrix {
            rows,
            cols,
            entries: merged,
        })
    }

    pub fn from_dense(a: &[Vec<i64>]) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let entries = a
            .iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(c, &v)| (r, c, BigInt::from(v)))
            })
            .collect();
        Self::new(rows, cols, entries).expect("indices in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> &[(usize, usize, BigInt)] {
        &self.entries
    }

    pub fn to_dense_i64(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.to_i64()?;
        }
        Some(out)
    }

    fn columns(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r, v.clone()));
        }
        cols
    }

    /// Columns as `(row, value)` lists, if every entry fits in `i64`.
    pub fn columns_i64(&self) -> Option<Vec<Vec<(usize, i64)>>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r, v.to_i64()?));
        }
        Some(cols)
    }
}

/// `rows cols` on the first line, then one `row col value` triple per line.
impl fmt::Display for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for (r, c, v) in &self.entries {
            writeln!(f, "{r} {c} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for SparseIntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |line: &str| Error::Parse(format!("bad matrix line {line:?}"));
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = head
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(head)))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(bad(head));
        };
        let mut entries = Vec::new();
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(bad(line));
            }
            let r = t[0].parse().map_err(|_| bad(line))?;
            let c = t[1].parse().map_err(|_| bad(line))?;
            let v: BigInt = t[2].parse().map_err(|_| bad(line))?;
            entries.push((r, c, v));
        }
        Self::new(rows, cols, entries)
    }
}

/// Nonzero invariant factors `d_1 | d_2 | ... | d_r`, `r` the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Cokernel torsion: the invariant factors above 1.
    pub fn torsion(&self) -> AbelianGroup {
        torsion_group(&self.invariants)
    }
}

fn torsion_group(invariants: &[BigInt]) -> AbelianGroup {
    AbelianGroup::from_factors(
        invariants
            .iter()
            .filter_map(|d| d.abs().to_biguint())
            .filter(|d| !d.is_zero()),
    )
    .expect("nonzero invariants")
}

pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let invariants = match m.columns_i64() {
        Some(cols) => snf::invariant_factors_i64(m.rows, cols),
        None => snf::invariant_factors_big(m.rows, m.columns()),
    };
    SmithForm { invariants }
}

/// Invariant factors of a column list with `i64` entries.
pub fn smith_of_columns(nrows: usize, columns: Vec<Vec<(usize, i64)>>) -> SmithForm {
    SmithForm {
        invariants: snf::invariant_factors_i64(nrows, columns),
    }
}

/// Free rank and torsion of one homology group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologySummary {
    pub betti: usize,
    pub torsion: AbelianGroup,
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.betti, self.torsion.is_trivial()) {
            (0, true) => write!(f, "0"),
            (0, false) => write!(f, "{}", self.torsion),
            (b, true) => write!(f, "Z^{b}"),
            (b, false) => write!(f, "Z^{b} x {}", self.torsion),
        }
    }
}

/// `H_{d-1}` and `H_d` of a complex with complete `(d-1)`-skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopHomology {
    pub lower: HomologySummary,
    pub top: HomologySummary,
    /// Integer rank of `∂_d`.
    pub rank: usize,
}

/// Computes both top-degree homology groups with one Smith form.
pub fn top_homology(state: &ComplexState) -> TopHomology {
    let reduced = collapse_reduce(state);
    let (rows, cols) = reduced.compressed_boundary();
    let snf = smith_of_columns(rows.len(), cols);
    let rank = reduced.pairs().len() + snf.rank();
    summaries(state, rank, snf.torsion())
}

fn summaries(state: &ComplexState, rank: usize, torsion: AbelianGroup) -> TopHomology {
    let (n, d) = (state.n(), state.d());
    let lower_cycles = binomial(n, d) - binomial(n - 1, d - 1);
    TopHomology {
        lower: HomologySummary {
            betti: lower_cycles - rank,
            torsion,
        },
        top: HomologySummary {
            betti: state.len() - rank,
            torsion: AbelianGroup::trivial(),
        },
        rank,
    }
}

/// Integer homology in degree `i ∈ {d-1, d}`.
pub fn integer_homology(state: &ComplexState, i: usize) -> Result<HomologySummary> {
    let d = state.d();
    if i + 1 != d && i != d {
        return Err(invalid(format!("degree {i} not in {{{}, {d}}}", d - 1)));
    }
    let h = top_homology(state);
    Ok(if i == d { h.top } else { h.lower })
}

/// Rank of `∂_d` over `F_q`, after collapsing.
pub fn top_rank_mod_q(state: &ComplexState, q: u64) -> Result<usize> {
    check_prime(q)?;
    let reduced = collapse_reduce(state);
    let (rows, cols) = reduced.compressed_boundary();
    Ok(reduced.pairs().len() + rank_mod_p(rows.len(), &cols, q))
}

fn check_prime(q: u64) -> Result<()> {
    if !is_prime(q) || q >= 1 << 32 {
        return Err(invalid(format!("{q} is not a prime below 2^32")));
    }
    Ok(())
}

/// `dim H_i(state; F_q)` for `0 <= i <= d`.
pub fn betti_mod_q(state: &ComplexState, i: usize, q: u64) -> Result<usize> {
    check_prime(q)?;
    let (n, d) = (state.n(), state.d());
    if i > d {
        return Err(invalid(format!("degree {i} above top dimension {d}")));
    }
    // over the complete skeleton rank ∂_k = C(n-1, k) for 1 <= k < d
    let skeleton_rank = |k: usize| if k == 0 { 0 } else { binomial(n - 1, k) };
    let top_rank = if i + 1 >= d { top_rank_mod_q(state, q)? } else { 0 };
    let rank_in = if i == d { top_rank } else { skeleton_rank(i) };
    let rank_out = match i + 1 {
        k if k < d => skeleton_rank(k),
        k if k == d => top_rank,
        _ => 0,
    };
    let faces = if i == d { state.len() } else { binomial(n, i + 1) };
    Ok(faces - rank_in - rank_out)
}
