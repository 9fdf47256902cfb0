#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use torsion_burst::groups::AbelianGroup;
use torsion_burst::homology::{smith_normal_form, SparseIntMatrix};
use torsion_burst::simplicial::{binomial, boundary_matrix, ComplexState};

/// Partitions of `n` into nonincreasing parts.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `|Aut(Z/q^{λ_1} x ... x Z/q^{λ_k})|` by counting injective images of the
/// standard generators, memoized on the subgroup generated so far.
/// Needs `|G| <= 64`.
pub fn brute_aut(q: u64, partition: &[u32]) -> u128 {
    let moduli: Vec<usize> = partition.iter().map(|&e| q.pow(e) as usize).collect();
    let size: usize = moduli.iter().product();
    assert!(size <= 64);
    let decode = |mut i: usize| -> Vec<usize> {
        moduli
            .iter()
            .map(|&m| {
                let r = i % m;
                i /= m;
                r
            })
            .collect()
    };
    let encode = |v: &[usize]| -> usize { v.iter().zip(&moduli).rev().fold(0, |acc, (&x, &m)| acc * m + x) };
    let elems: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let add: Vec<Vec<usize>> = (0..size)
        .map(|a| {
            (0..size)
                .map(|b| {
                    let s: Vec<usize> = elems[a]
                        .iter()
                        .zip(&elems[b])
                        .zip(&moduli)
                        .map(|((x, y), m)| (x + y) % m)
                        .collect();
                    encode(&s)
                })
                .collect()
        })
        .collect();
    let order = |x: usize| -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = add[y][x];
            k += 1;
        }
        k
    };
    let orders: Vec<usize> = (0..size).map(order).collect();
    let extend = |h: u64, x: usize| -> u64 {
        let mut out = h;
        let mut m = x;
        loop {
            for a in 0..size {
                if h >> a & 1 == 1 {
                    out |= 1 << add[a][m];
                }
            }
            m = add[m][x];
            if m == x {
                break;
            }
        }
        out
    };
    fn count(
        level: usize,
        h: u64,
        moduli: &[usize],
        orders: &[usize],
        extend: &dyn Fn(u64, usize) -> u64,
        memo: &mut HashMap<(usize, u64), u128>,
    ) -> u128 {
        if level == moduli.len() {
            return 1;
        }
        if let Some(&v) = memo.get(&(level, h)) {
            return v;
        }
        let want = h.count_ones() as usize * moduli[level];
        let mut total = 0;
        for (x, &o) in orders.iter().enumerate() {
            if moduli[level] % o != 0 {
                continue;
            }
            let g = extend(h, x);
            if g.count_ones() as usize == want {
                total += count(level + 1, g, moduli, orders, extend, memo);
            }
        }
        memo.insert((level, h), total);
        total
    }
    count(0, 1, &moduli, &orders, &extend, &mut HashMap::new())
}

/// `H_{d-1}` (betti, torsion) and `β_d` from the unreduced boundary matrices.
pub fn naive_homology(state: &ComplexState) -> (usize, AbelianGroup, usize) {
    let (n, d) = (state.n(), state.d());
    let top = smith_normal_form(&boundary_matrix(state, d).unwrap());
    let below = if d >= 2 {
        smith_normal_form(&boundary_matrix(state, d - 1).unwrap()).rank()
    } else {
        0
    };
    let lower = binomial(n, d) - below - top.rank();
    (lower, top.torsion(), state.len() - top.rank())
}

pub fn to_dense(m: &SparseIntMatrix) -> Vec<Vec<BigInt>> {
    let mut a = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        a[*r][*c] += v;
    }
    a
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let k = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                a[r][j] = (&a[r][j] * &a[c][c] - &a[r][c] * &a[c][j]) / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    sign * &a[k - 1][k - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinantal divisors `D_k` = gcd of all `k x k` minors, until one vanishes.
pub fn determinantal_divisors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let (r, c) = (a.len(), a.first().map_or(0, |x| x.len()));
    let mut out = Vec::new();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let m: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| BigInt::from(a[i][j])).collect())
                    .collect();
                g = g.gcd(&det(m));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g.abs());
    }
    out
}
