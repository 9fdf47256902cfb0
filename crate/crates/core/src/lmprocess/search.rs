//! Jump points of `β_d` and the largest torsion group in a window.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{m_star, ProcessTrace};
use crate::error::{invalid, Result};
use crate::groups::AbelianGroup;
use crate::homology::{collapse_reduce, is_prime, top_homology, IncrementalRank};
use crate::simplicial::binomial;

/// `β_d(Y(m); F_q)` for every `m` in `0..=m_hi` along a trace.
///
/// A `d`-cycle of `Y(m)` is supported on the core of `Y(m)`, which lies in the
/// core of `Y(m_hi)`. Pushing the core faces in trace order through an
/// incremental rank therefore yields the whole profile in one pass.
#[derive(Clone, Debug)]
pub struct BettiProfile {
    betti: Vec<usize>,
}

impl BettiProfile {
    pub fn new(trace: &ProcessTrace, m_hi: usize, q: u64) -> Result<Self> {
        if !is_prime(q) || q >= 1 << 32 {
            return Err(invalid(format!("{q} is not a prime below 2^32")));
        }
        if m_hi > trace.len() {
            return Err(invalid(format!("m = {m_hi} beyond trace length {}", trace.len())));
        }
        let reduced = collapse_reduce(&trace.state_at(m_hi));
        let core = reduced.top_faces();
        let mut inc = IncrementalRank::new(binomial(trace.n, trace.d), q);
        let mut betti = Vec::with_capacity(m_hi + 1);
        betti.push(0);
        let mut b = 0;
        for &f in &trace.order[..m_hi] {
            if let Ok(i) = core.binary_search(&f) {
                if !inc.push(&reduced.columns()[i]) {
                    b += 1;
                }
            }
            betti.push(b);
        }
        Ok(BettiProfile { betti })
    }

    pub fn betti(&self, m: usize) -> usize {
        self.betti[m]
    }

    pub fn len(&self) -> usize {
        self.betti.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betti.is_empty()
    }
}

/// All `m` in `(m1, m2)` with `β(m-1) = β(m) < β(m+1)`, for a non-decreasing `β`,
/// found by bisection.
pub fn find_jump_points_with(mut beta: impl FnMut(usize) -> usize, m1: usize, m2: usize) -> Vec<usize> {
    if m2 <= m1 + 1 {
        return Vec::new();
    }
    let mut memo: HashMap<usize, usize> = HashMap::new();
    let mut eval = |m: usize| *memo.entry(m).or_insert_with(|| beta(m));
    let mut rises = Vec::new();
    let mut stack = vec![(m1, m2)];
    while let Some((a, b)) = stack.pop() {
        let (ba, bb) = (eval(a), eval(b));
        if ba == bb {
            continue;
        }
        if b == a + 1 {
            rises.push(a);
            continue;
        }
        let mid = a + (b - a) / 2;
        stack.push((mid, b));
        stack.push((a, mid));
    }
    rises.sort_unstable();
    rises
        .iter()
        .copied()
        .filter(|&m| m > m1 && rises.binary_search(&(m - 1)).is_err())
        .collect()
}

/// Jump points of `β_d(·; F_{q0})` strictly between `m1` and `m2`.
pub fn find_jump_points(trace: &ProcessTrace, m1: usize, m2: usize, q0: u64) -> Result<Vec<usize>> {
    if m1 >= m2 || m2 > trace.len() {
        return Err(invalid(format!(
            "need m1 < m2 <= {}, got ({m1}, {m2})",
            trace.len()
        )));
    }
    let profile = BettiProfile::new(trace, m2, q0)?;
    Ok(find_jump_points_with(|m| profile.betti(m), m1, m2))
}

/// Torsion part of `H_{d-1}(Y(m))`.
pub fn torsion_at(trace: &ProcessTrace, m: usize) -> AbelianGroup {
    top_homology(&trace.state_at(m)).lower.torsion
}

/// Torsion parts for `m = m_lo..=m_hi`.
pub fn torsion_sequence(trace: &ProcessTrace, m_lo: usize, m_hi: usize) -> Result<Vec<AbelianGroup>> {
    if m_lo > m_hi || m_hi > trace.len() {
        return Err(invalid(format!("range [{m_lo}, {m_hi}] outside trace")));
    }
    Ok((m_lo..=m_hi).map(|m| torsion_at(trace, m)).collect())
}

/// Outcome of the largest-torsion search on one trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LTResult {
    pub group: AbelianGroup,
    /// First step of the contiguous run of `group` ending at the maximizing jump point.
    pub m0: Option<usize>,
    pub jump_points: Vec<usize>,
    pub window: (usize, usize),
    pub trivial: bool,
}

/// Largest torsion group over the jump points in `[m* - r, m* + r]`.
pub fn lt_search(trace: &ProcessTrace, window_radius: usize, q0: u64) -> Result<LTResult> {
    let center = m_star(trace.n, trace.d)?;
    lt_search_at(trace, center, window_radius, q0)
}

/// [`lt_search`] around an explicit center.
pub fn lt_search_at(trace: &ProcessTrace, center: usize, window_radius: usize, q0: u64) -> Result<LTResult> {
    let lo = center.saturating_sub(window_radius);
    let hi = center + window_radius;
    if trace.len() < hi {
        return Err(invalid(format!(
            "trace length {} shorter than window end {hi}",
            trace.len()
        )));
    }
    let jump_points = find_jump_points(trace, lo, hi, q0)?;
    let mut best = AbelianGroup::trivial();
    let mut best_m = None;
    let mut best_order = best.order();
    for &m in &jump_points {
        let t = torsion_at(trace, m);
        let order = t.order();
        if order > best_order {
            best = t;
            best_order = order;
            best_m = Some(m);
        }
    }
    let m0 = best_m.map(|mut m| {
        while m > 0 && torsion_at(trace, m - 1) == best {
            m -= 1;
        }
        m
    });
    Ok(LTResult {
        trivial: m0.is_none(),
        group: best,
        m0,
        jump_points,
        window: (lo, hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::betti_mod_q;
    use crate::lmprocess::sample_trace;

    #[test]
    fn synthetic_sequences() {
        let b = [0usize, 0, 1, 1, 2];
        assert_eq!(find_jump_points_with(|m| b[m], 0, 4), vec![1, 3]);
        assert!(find_jump_points_with(|_| 5, 0, 100).is_empty());
        let b = [0usize, 1, 2, 3, 3, 3, 4];
        assert_eq!(find_jump_points_with(|m| b[m], 0, 6), vec![5]);
    }

    #[test]
    fn profile_matches_direct_betti() {
        for seed in 0..10 {
            let t = sample_trace(9, 2, 84, seed).unwrap();
            let p = BettiProfile::new(&t, 84, 10007).unwrap();
            for m in 0..=84 {
                assert_eq!(p.betti(m), betti_mod_q(&t.state_at(m), 2, 10007).unwrap());
                if m > 0 {
                    assert!(p.betti(m) >= p.betti(m - 1));
                }
            }
        }
    }

    #[test]
    fn jump_points_match_scan() {
        for seed in 0..50u64 {
            let n = 8 + (seed as usize % 13);
            let total = binomial(n, 3);
            let t = sample_trace(n, 2, total.min(3 * n * n / 2), seed).unwrap();
            let len = t.len();
            let scan: Vec<usize> = (0..=len)
                .map(|m| betti_mod_q(&t.state_at(m), 2, 10007).unwrap())
                .collect();
            let expected: Vec<usize> = (1..len)
                .filter(|&m| scan[m - 1] == scan[m] && scan[m] < scan[m + 1])
                .collect();
            assert_eq!(find_jump_points(&t, 0, len, 10007).unwrap(), expected, "seed {seed}");
        }
    }

    #[test]
    fn lt_search_small() {
        let t = sample_trace(20, 2, 400, 5).unwrap();
        let r = lt_search_at(&t, 200, 150, 10007).unwrap();
        if let Some(m0) = r.m0 {
            assert_eq!(torsion_at(&t, m0), r.group);
            assert!(m0 == 0 || torsion_at(&t, m0 - 1) != r.group);
        } else {
            assert!(r.group.is_trivial());
        }
        assert!(lt_search_at(&t, 350, 100, 10007).is_err());
    }
}
