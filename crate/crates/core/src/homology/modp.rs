//! Linear algebra over the prime field `F_p` for `p < 2^32`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

#[inline]
pub fn reduce_i64(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Column-by-column Gaussian elimination over `F_p`.
///
/// Every stored pivot vector has its pivot at its smallest nonzero row and is
/// scaled so that the pivot entry is 1. A new column is reduced by clearing
/// its smallest nonzero row while that row carries a pivot; the first
/// unpivoted nonzero row becomes the new pivot.
#[derive(Clone, Debug)]
pub struct IncrementalRank {
    p: u64,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
    acc: Vec<u64>,
    touched: Vec<usize>,
    queued: Vec<bool>,
}

impl IncrementalRank {
    pub fn new(nrows: usize, p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32), "modulus must be below 2^32");
        IncrementalRank {
            p,
            pivots: HashMap::new(),
            acc: vec![0; nrows],
            touched: Vec::new(),
            queued: vec![false; nrows],
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Adds a column; returns `true` when it was independent of the previous ones.
    pub fn push(&mut self, column: &[(usize, i64)]) -> bool {
        self.reduce(column, true)
    }

    /// Whether the column lies in the span of the columns pushed so far.
    pub fn in_span(&mut self, column: &[(usize, i64)]) -> bool {
        !self.reduce(column, false)
    }

    fn reduce(&mut self, column: &[(usize, i64)], insert: bool) -> bool {
        let p = self.p;
        let mut heap = BinaryHeap::new();
        for &(r, v) in column {
            let v = reduce_i64(v, p);
            if v == 0 {
                continue;
            }
            if self.acc[r] == 0 && !self.queued[r] {
                self.touched.push(r);
            }
            self.acc[r] = (self.acc[r] + v) % p;
            if !self.queued[r] {
                self.queued[r] = true;
                heap.push(Reverse(r));
            }
        }
        let mut new_pivot = None;
        while let Some(Reverse(r)) = heap.pop() {
            self.queued[r] = false;
            let x = self.acc[r];
            if x == 0 {
                continue;
            }
            match self.pivots.get(&r) {
                Some(vec) => {
                    let f = p - x;
                    for &(rr, vv) in vec {
                        let cur = self.acc[rr];
                        if cur == 0 && !self.queued[rr] {
                            self.touched.push(rr);
                        }
                        self.acc[rr] = (cur + f * vv) % p;
                        if rr != r && !self.queued[rr] {
                            self.queued[rr] = true;
                            heap.push(Reverse(rr));
                        }
                    }
                    debug_assert_eq!(self.acc[r], 0);
                }
                None => {
                    new_pivot = Some(r);
                    // put it back so the remaining queue is drained below
                    self.queued[r] = true;
                    heap.push(Reverse(r));
                    break;
                }
            }
        }
        let independent = new_pivot.is_some();
        if let (Some(r), true) = (new_pivot, insert) {
            let inv = inv_mod(self.acc[r], p);
            let mut vec: Vec<(usize, u64)> = self
                .touched
                .iter()
                .filter(|&&rr| self.acc[rr] != 0)
                .map(|&rr| (rr, mul_mod(self.acc[rr], inv, p)))
                .collect();
            vec.sort_unstable_by_key(|e| e.0);
            vec.dedup_by_key(|e| e.0);
            self.pivots.insert(r, vec);
        }
        for Reverse(r) in heap {
            self.queued[r] = false;
        }
        for &r in &self.touched {
            self.acc[r] = 0;
        }
        self.touched.clear();
        independent
    }
}

/// Rank over `F_p` of the matrix with the given sparse columns.
pub fn rank_mod_p(nrows: usize, columns: &[Vec<(usize, i64)>], p: u64) -> usize {
    let mut inc = IncrementalRank::new(nrows, p);
    for col in columns {
        inc.push(col);
    }
    inc.rank()
}

/// Reduced row echelon form over `F_p` of a dense matrix, returning the pivot
/// columns. Entries must already be reduced modulo `p`.
pub fn rref_dense(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, sel);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let (head, tail) = a.split_at_mut(r);
        let (prow, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let f = p - f;
            for (x, &y) in row.iter_mut().zip(prow.iter()).skip(c) {
                if y != 0 {
                    *x = (*x + f * y) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(10007));
        assert!(!is_prime(10007 * 10009));
        assert!(is_prime(2_147_483_647));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn rank_small_examples() {
        // [[2,4],[6,8]]: determinant -8, every entry even
        let cols = vec![vec![(0, 2), (1, 6)], vec![(0, 4), (1, 8)]];
        assert_eq!(rank_mod_p(2, &cols, 2), 0);
        assert_eq!(rank_mod_p(2, &cols, 3), 2);
        assert_eq!(rank_mod_p(2, &cols, 5), 2);
        let cols = vec![vec![(0, 1), (1, 3)], vec![(0, 2), (1, 6)]];
        assert_eq!(rank_mod_p(2, &cols, 3), 1);
        let dup = vec![vec![(0, 1), (2, -1)], vec![(0, 2), (2, -2)], vec![(1, 1)]];
        assert_eq!(rank_mod_p(3, &dup, 10007), 2);
    }

    #[test]
    fn span_membership() {
        let mut inc = IncrementalRank::new(3, 7);
        assert!(inc.push(&[(0, 1), (1, 1)]));
        assert!(inc.push(&[(1, 1), (2, 1)]));
        assert!(inc.in_span(&[(0, 1), (2, -1)]));
        assert!(!inc.in_span(&[(0, 1)]));
        assert_eq!(inc.rank(), 2);
        assert!(!inc.push(&[(0, 2), (1, 4), (2, 2)]));
    }

    #[test]
    fn rref_matches_incremental_rank() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let p = [2u64, 3, 5, 10007][rng.gen_range(0..4)];
            let dense: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect())
                .collect();
            let mut a: Vec<Vec<u64>> = dense
                .iter()
                .map(|r| r.iter().map(|&x| reduce_i64(x, p)).collect())
                .collect();
            let piv = rref_dense(&mut a, p);
            let columns: Vec<Vec<(usize, i64)>> = (0..cols)
                .map(|c| (0..rows).map(|r| (r, dense[r][c])).collect())
                .collect();
            assert_eq!(piv.len(), rank_mod_p(rows, &columns, p));
        }
    }
}
