//! Smith normal form of sparse integer matrices.
//!
//! Elimination runs first on machine integers with checked arithmetic and
//! switches to arbitrary precision on the first overflow, continuing from the
//! current state. Pivots are entries of minimal absolute value; among those,
//! the one with the smallest Markowitz cost `(row_len - 1)(col_len - 1)`, then
//! smallest column, then smallest row. When the active submatrix becomes more
//! than half full it is finished with a dense routine.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Ring operations the elimination needs. `None` signals overflow.
trait Coeff: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn neg(&self) -> Option<Self>;
    /// `a * x + b * y`
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    /// `x - k * y`
    fn sub_mul(x: &Self, k: &Self, y: &Self) -> Option<Self>;
    fn divides(&self, other: &Self) -> bool;
    fn div_exact(&self, d: &Self) -> Self;
    /// Truncated quotient.
    fn quot(&self, d: &Self) -> Self;
    /// `(g, s, t)` with `g = s * a + t * b`, `g > 0`.
    fn xgcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_add(b.checked_mul(*y)?)
    }
    fn sub_mul(x: &Self, k: &Self, y: &Self) -> Option<Self> {
        x.checked_sub(k.checked_mul(*y)?)
    }
    fn divides(&self, other: &Self) -> bool {
        other % self == 0
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn xgcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((
            i64::try_from(g).ok()?,
            i64::try_from(s).ok()?,
            i64::try_from(t).ok()?,
        ))
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x + b * y)
    }
    fn sub_mul(x: &Self, k: &Self, y: &Self) -> Option<Self> {
        Some(x - k * y)
    }
    fn divides(&self, other: &Self) -> bool {
        Zero::is_zero(&(other % self))
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn xgcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((g, s, t))
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug)]
struct Overflow;

type Step<T> = std::result::Result<T, Overflow>;

fn ok<T>(x: Option<T>) -> Step<T> {
    x.ok_or(Overflow)
}

/// Row-major sparse matrix with column occupancy lists.
#[derive(Clone, Debug)]
struct Sparse<T> {
    rows: Vec<Vec<(usize, T)>>,
    col_rows: Vec<Vec<usize>>,
    nnz: usize,
    /// Invariant factors found so far (absolute values).
    found: Vec<T>,
    /// Columns whose contents changed since they were last considered for a unit pivot.
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl<T: Coeff> Sparse<T> {
    fn from_columns(nrows: usize, columns: Vec<Vec<(usize, T)>>) -> Self {
        let ncols = columns.len();
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); nrows];
        let mut col_rows = vec![Vec::new(); ncols];
        let mut nnz = 0;
        for (c, col) in columns.into_iter().enumerate() {
            for (r, v) in col {
                if v.is_zero() {
                    continue;
                }
                rows[r].push((c, v));
                col_rows[c].push(r);
                nnz += 1;
            }
        }
        let mut heap = BinaryHeap::new();
        for (c, rs) in col_rows.iter().enumerate() {
            if !rs.is_empty() {
                heap.push(Reverse((rs.len(), c)));
            }
        }
        Sparse {
            rows,
            col_rows,
            nnz,
            found: Vec::new(),
            heap,
        }
    }

    fn convert<U: Coeff>(self, f: impl Fn(&T) -> U) -> Sparse<U> {
        Sparse {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|(c, v)| (*c, f(v))).collect())
                .collect(),
            col_rows: self.col_rows,
            nnz: self.nnz,
            found: self.found.iter().map(&f).collect(),
            heap: self.heap,
        }
    }

    fn get(&self, r: usize, c: usize) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    fn col_remove(&mut self, c: usize, r: usize) {
        let list = &mut self.col_rows[c];
        let pos = list.iter().position(|&x| x == r).expect("column index out of sync");
        list.swap_remove(pos);
    }

    fn touch(&mut self, c: usize) {
        let len = self.col_rows[c].len();
        if len > 0 {
            self.heap.push(Reverse((len, c)));
        }
    }

    /// Replaces row `r` by `new`, keeping column lists in sync.
    fn set_row(&mut self, r: usize, new: Vec<(usize, T)>) {
        let old = std::mem::take(&mut self.rows[r]);
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < new.len() {
            let oc = old.get(i).map(|e| e.0);
            let nc = new.get(j).map(|e| e.0);
            match (oc, nc) {
                (Some(a), Some(b)) if a == b => {
                    if old[i].1 != new[j].1 {
                        self.touch(a);
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    self.col_remove(a, r);
                    self.touch(a);
                    i += 1;
                }
                (Some(a), None) => {
                    self.col_remove(a, r);
                    self.touch(a);
                    i += 1;
                }
                (_, Some(b)) => {
                    self.col_rows[b].push(r);
                    self.touch(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.nnz = self.nnz + new.len() - old.len();
        self.rows[r] = new;
    }

    /// `s * x + t * y` over two sorted rows.
    fn merge(x: &[(usize, T)], s: &T, y: &[(usize, T)], t: &T) -> Step<Vec<(usize, T)>> {
        let zero = T::zero();
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            let cx = x.get(i).map_or(usize::MAX, |e| e.0);
            let cy = y.get(j).map_or(usize::MAX, |e| e.0);
            let (c, v) = match cx.cmp(&cy) {
                Ordering::Equal => {
                    let v = ok(T::lin(s, &x[i].1, t, &y[j].1))?;
                    i += 1;
                    j += 1;
                    (cx, v)
                }
                Ordering::Less => {
                    let v = ok(T::lin(s, &x[i].1, t, &zero))?;
                    i += 1;
                    (cx, v)
                }
                Ordering::Greater => {
                    let v = ok(T::lin(s, &zero, t, &y[j].1))?;
                    j += 1;
                    (cy, v)
                }
            };
            if !v.is_zero() {
                out.push((c, v));
            }
        }
        Ok(out)
    }

    /// Row `i` -= `k` * row `r`.
    fn row_axpy(&mut self, i: usize, k: &T, r: usize) -> Step<()> {
        let one = T::one();
        let negk = ok(k.neg())?;
        let new = Self::merge(&self.rows[i], &one, &self.rows[r], &negk)?;
        self.set_row(i, new);
        Ok(())
    }

    /// Applies the unimodular map `(row_r, row_i) <- (s r + t i, u r + v i)`.
    fn row_pair(&mut self, r: usize, i: usize, s: &T, t: &T, u: &T, v: &T) -> Step<()> {
        let nr = Self::merge(&self.rows[r], s, &self.rows[i], t)?;
        let ni = Self::merge(&self.rows[r], u, &self.rows[i], v)?;
        self.set_row(r, nr);
        self.set_row(i, ni);
        Ok(())
    }

    /// Applies `(col_a, col_b) <- (s a + t b, u a + v b)`.
    fn col_pair(&mut self, a: usize, b: usize, s: &T, t: &T, u: &T, v: &T) -> Step<()> {
        let mut rows: Vec<usize> = self.col_rows[a]
            .iter()
            .chain(self.col_rows[b].iter())
            .copied()
            .collect();
        rows.sort_unstable();
        rows.dedup();
        let mut updates = Vec::with_capacity(rows.len());
        for &r in &rows {
            let x = self.get(r, a).cloned().unwrap_or_else(T::zero);
            let y = self.get(r, b).cloned().unwrap_or_else(T::zero);
            let na = ok(T::lin(s, &x, t, &y))?;
            let nb = ok(T::lin(u, &x, v, &y))?;
            updates.push((r, na, nb));
        }
        for (r, na, nb) in updates {
            let mut row = self.rows[r].clone();
            row.retain(|e| e.0 != a && e.0 != b);
            if !na.is_zero() {
                row.push((a, na));
            }
            if !nb.is_zero() {
                row.push((b, nb));
            }
            row.sort_unstable_by_key(|e| e.0);
            self.set_row(r, row);
        }
        Ok(())
    }

    fn delete_entry(&mut self, r: usize, c: usize) {
        let row = &mut self.rows[r];
        if let Ok(pos) = row.binary_search_by_key(&c, |e| e.0) {
            row.remove(pos);
            self.col_remove(c, r);
            self.nnz -= 1;
            self.touch(c);
        }
    }

    /// Reduces row `r` and column `c` to the single pivot entry and records it.
    fn eliminate(&mut self, r: usize, c: usize) -> Step<()> {
        loop {
            // clear the column
            loop {
                let others: Vec<usize> =
                    self.col_rows[c].iter().copied().filter(|&i| i != r).collect();
                if others.is_empty() {
                    break;
                }
                for i in others {
                    let a = self.get(r, c).cloned().expect("pivot vanished");
                    let Some(b) = self.get(i, c).cloned() else {
                        continue;
                    };
                    if a.divides(&b) {
                        let k = b.div_exact(&a);
                        self.row_axpy(i, &k, r)?;
                    } else {
                        let (g, s, t) = ok(T::xgcd(&a, &b))?;
                        let u = ok(b.div_exact(&g).neg())?;
                        let v = a.div_exact(&g);
                        self.row_pair(r, i, &s, &t, &u, &v)?;
                    }
                }
            }
            // clear the row; column c now holds only the pivot
            let a = self.get(r, c).cloned().expect("pivot vanished");
            let rest: Vec<(usize, T)> = self.rows[r]
                .iter()
                .filter(|e| e.0 != c)
                .cloned()
                .collect();
            let mut dirty = false;
            for (c2, b) in rest {
                if a.divides(&b) {
                    self.delete_entry(r, c2);
                } else {
                    let (g, s, t) = ok(T::xgcd(&a, &b))?;
                    let u = ok(b.div_exact(&g).neg())?;
                    let v = a.div_exact(&g);
                    self.col_pair(c, c2, &s, &t, &u, &v)?;
                    dirty = true;
                    break;
                }
            }
            if !dirty {
                break;
            }
        }
        let a = self.get(r, c).cloned().expect("pivot vanished");
        let a = if is_negative(&a) { ok(a.neg())? } else { a };
        self.delete_entry(r, c);
        self.found.push(a);
        Ok(())
    }

    /// Unit pivot from the column-count heap, preferring short columns then short rows.
    fn next_unit_pivot(&mut self) -> Option<(usize, usize)> {
        while let Some(Reverse((len, c))) = self.heap.pop() {
            if self.col_rows[c].len() != len || len == 0 {
                continue;
            }
            let best = self.col_rows[c]
                .iter()
                .filter(|&&r| self.get(r, c).is_some_and(|v| v.is_unit()))
                .min_by_key(|&&r| (self.rows[r].len(), r))
                .copied();
            if let Some(r) = best {
                return Some((r, c));
            }
        }
        None
    }

    /// Global minimal-|entry| pivot with Markowitz tie-breaking.
    fn next_general_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &T, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let cost = (row.len() - 1) * (self.col_rows[*c].len() - 1);
                let better = match &best {
                    None => true,
                    Some((br, bc, bv, bcost)) => match v.cmp_abs(bv) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => (cost, *c, r) < (*bcost, *bc, *br),
                    },
                };
                if better {
                    best = Some((r, *c, v, cost));
                }
            }
        }
        best.map(|(r, c, _, _)| (r, c))
    }

    fn active_dims(&self) -> (usize, usize) {
        let r = self.rows.iter().filter(|r| !r.is_empty()).count();
        let c = self.col_rows.iter().filter(|c| !c.is_empty()).count();
        (r, c)
    }

    fn is_dense(&self) -> bool {
        if self.nnz == 0 {
            return false;
        }
        let (r, c) = self.active_dims();
        2 * self.nnz > r * c
    }

    /// Runs sparse elimination until the matrix is empty or dense enough to hand off.
    fn run(&mut self) -> Step<bool> {
        loop {
            if self.nnz == 0 {
                return Ok(true);
            }
            let pivot = match self.next_unit_pivot() {
                Some(p) => p,
                None => {
                    if self.is_dense() {
                        return Ok(false);
                    }
                    match self.next_general_pivot() {
                        Some(p) => p,
                        None => return Ok(true),
                    }
                }
            };
            self.eliminate(pivot.0, pivot.1)?;
        }
    }

    fn to_dense(&self) -> Vec<Vec<T>> {
        let rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| !self.rows[r].is_empty())
            .collect();
        let cols: Vec<usize> = (0..self.col_rows.len())
            .filter(|&c| !self.col_rows[c].is_empty())
            .collect();
        let mut out = vec![vec![T::zero(); cols.len()]; rows.len()];
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in &self.rows[r] {
                let j = cols.binary_search(c).unwrap();
                out[i][j] = v.clone();
            }
        }
        out
    }
}

fn is_negative<T: Coeff>(x: &T) -> bool {
    x.to_big().is_negative()
}

/// Dense Smith reduction; pushes absolute pivots into `found`.
fn dense_snf<T: Coeff>(mut a: Vec<Vec<T>>, found: &mut Vec<T>) -> Step<()> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for t in 0..rows.min(cols) {
        // minimal nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j].is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| a[i][j].cmp_abs(&a[bi][bj]) == Ordering::Less) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            return Ok(());
        };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].quot(&a[t][t]);
                if !q.is_zero() {
                    let (head, tail) = a.split_at_mut(i);
                    let pr = &head[t];
                    for (x, y) in tail[0].iter_mut().zip(pr.iter()).skip(t) {
                        *x = ok(T::sub_mul(x, &q, y))?;
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].quot(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let y = row[t].clone();
                        row[j] = ok(T::sub_mul(&row[j], &q, &y))?;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
            // a smaller remainder now sits in row t or column t
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a[i][t].is_zero() && a[i][t].cmp_abs(&a[best.0][best.1]) == Ordering::Less {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() && a[t][j].cmp_abs(&a[best.0][best.1]) == Ordering::Less {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        let p = a[t][t].clone();
        found.push(if is_negative(&p) { ok(p.neg())? } else { p });
    }
    Ok(())
}

fn run_generic<T: Coeff>(m: &mut Sparse<T>) -> Step<()> {
    if m.run()? {
        return Ok(());
    }
    let mut found = Vec::new();
    dense_snf(m.to_dense(), &mut found)?;
    m.found.extend(found);
    m.rows.iter_mut().for_each(Vec::clear);
    m.col_rows.iter_mut().for_each(Vec::clear);
    m.nnz = 0;
    Ok(())
}

/// Turns a list of nonzero diagonal entries into a divisibility chain.
pub(crate) fn divisibility_chain(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut units = 0usize;
    let mut rest: Vec<BigInt> = Vec::new();
    for x in diag {
        let x = x.abs();
        if Zero::is_zero(&x) {
            continue;
        }
        if x.is_one() {
            units += 1;
        } else {
            rest.push(x);
        }
    }
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            let l = &rest[i] / &g * &rest[j];
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![<BigInt as One>::one(); units];
    out.extend(rest);
    out.sort();
    out
}

/// Nonzero invariant factors of the matrix whose columns are given as
/// `(row, value)` lists, ascending and forming a divisibility chain.
pub(crate) fn invariant_factors_i64(nrows: usize, columns: Vec<Vec<(usize, i64)>>) -> Vec<BigInt> {
    let mut m = Sparse::from_columns(nrows, columns);
    let snapshot_free = match run_generic(&mut m) {
        Ok(()) => return divisibility_chain(m.found.iter().map(Coeff::to_big).collect()),
        Err(Overflow) => m,
    };
    finish_big(snapshot_free.convert(Coeff::to_big))
}

/// Same as [`invariant_factors_i64`] for arbitrary-precision input.
pub(crate) fn invariant_factors_big(nrows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Vec<BigInt> {
    let small: Option<Vec<Vec<(usize, i64)>>> = columns
        .iter()
        .map(|col| {
            col.iter()
                .map(|(r, v)| i64::try_from(v).ok().map(|v| (*r, v)))
                .collect()
        })
        .collect();
    match small {
        Some(cols) => invariant_factors_i64(nrows, cols),
        None => finish_big(Sparse::from_columns(nrows, columns)),
    }
}

fn finish_big(mut m: Sparse<BigInt>) -> Vec<BigInt> {
    if run_generic(&mut m).is_err() {
        unreachable!("arbitrary precision cannot overflow");
    }
    divisibility_chain(m.found)
}
