//! Cohen–Lenstra and `λ_k` distributions, empirical distributions and
//! comparison statistics.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::abelian::{from_pgroups, ln_big, AbelianGroup, PGroup};
use super::aut::aut_order;
use super::factor::factorize;
use super::zeta::zeta_inverse_product;
use crate::error::{invalid, Error, Result};
use crate::homology::is_prime;

/// Probability weights on groups, plus the mass of whatever was truncated.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupDistribution<K: Ord> {
    weights: BTreeMap<K, f64>,
    residual: f64,
}

impl<K: Ord + Clone> GroupDistribution<K> {
    pub fn new(weights: BTreeMap<K, f64>, residual: f64) -> Result<Self> {
        if weights.values().any(|&w| !(w >= 0.0)) || !(residual >= -1e-12) {
            return Err(invalid("negative probability"));
        }
        let total: f64 = weights.values().sum::<f64>() + residual;
        if (total - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("distribution mass {total} != 1")));
        }
        Ok(GroupDistribution {
            weights,
            residual: residual.max(0.0),
        })
    }

    /// Normalized counts.
    pub fn empirical(counts: &BTreeMap<K, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(invalid("empty sample"));
        }
        let weights = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k.clone(), c as f64 / total as f64))
            .collect();
        Ok(GroupDistribution {
            weights,
            residual: 0.0,
        })
    }

    pub fn weights(&self) -> &BTreeMap<K, f64> {
        &self.weights
    }

    pub fn weight(&self, k: &K) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Total variation distance; each residual counts as mass on groups the other
/// side does not carry.
pub fn tv_distance<K: Ord + Clone>(a: &GroupDistribution<K>, b: &GroupDistribution<K>) -> f64 {
    let mut sum = a.residual + b.residual;
    for (k, &w) in &a.weights {
        sum += (w - b.weight(k)).abs();
    }
    for (k, &w) in &b.weights {
        if !a.weights.contains_key(k) {
            sum += w;
        }
    }
    (0.5 * sum).min(1.0)
}

/// `count(trivial) / count(G)` for every `G != trivial` with nonzero count.
pub fn ratio_table<K: Ord + Clone>(counts: &BTreeMap<K, u64>, trivial: &K) -> Result<BTreeMap<K, f64>> {
    let t = counts.get(trivial).copied().unwrap_or(0);
    if t == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(counts
        .iter()
        .filter(|(k, &c)| *k != trivial && c > 0)
        .map(|(k, &c)| (k.clone(), t as f64 / c as f64))
        .collect())
}

/// `∏_{k>=1} (1 - q^{-k})`.
pub fn cl_normalizer(q: u64) -> Result<f64> {
    if !is_prime(q) {
        return Err(invalid(format!("{q} is not prime")));
    }
    let inv = 1.0 / q as f64;
    let mut x = inv;
    let mut p = 1.0;
    while 1.0 - x <= 1.0 - 1e-15 {
        p *= 1.0 - x;
        x *= inv;
    }
    Ok(p * (1.0 - x))
}

pub fn cl_probability(h: &PGroup) -> Result<f64> {
    Ok(cl_normalizer(h.q())? * (-ln_big(&h.aut_order())).exp())
}

/// Partitions of `n` in decreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Cohen–Lenstra distribution on `q`-groups, enumerated by `|λ|` until the
/// residual drops below `tol`.
pub fn cl_distribution(q: u64, tol: f64) -> Result<GroupDistribution<PGroup>> {
    let mut weights = BTreeMap::new();
    let mut total = 0.0;
    let mut size = 0;
    while 1.0 - total >= tol {
        for lam in partitions(size) {
            let g = PGroup::new(q, lam)?;
            let w = cl_probability(&g)?;
            total += w;
            weights.insert(g, w);
        }
        size += 1;
    }
    GroupDistribution::new(weights, 1.0 - total)
}

/// `∏_{i>=k+1} ζ(i)^{-1}`.
pub fn lambda_k_normalizer(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(invalid("λ_0 is not a probability distribution"));
    }
    Ok(zeta_inverse_product(k + 1))
}

/// `λ_k(G) = ∏_{i>=k+1} ζ(i)^{-1} / (|G|^k |Aut G|)`.
pub fn lambda_k(g: &AbelianGroup, k: u32) -> Result<f64> {
    let norm = lambda_k_normalizer(k)?;
    let log_gk = k as f64 * g.log_order();
    match aut_order(g) {
        Ok(a) => Ok(norm * (-(log_gk + ln_big(&a))).exp()),
        Err(Error::Factorization(_)) if log_gk > 30.0 * std::f64::consts::LN_10 => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// All abelian groups of order `n`.
pub fn groups_of_order(n: u64) -> Result<Vec<AbelianGroup>> {
    let primes = factorize(&BigUint::from(n))?;
    let mut acc: Vec<Vec<PGroup>> = vec![Vec::new()];
    for (p, e) in primes {
        let p = p.to_u64().expect("factor of a u64");
        let mut next = Vec::new();
        for lam in partitions(e) {
            for prefix in &acc {
                let mut v = prefix.clone();
                v.push(PGroup::new(p, lam.clone())?);
                next.push(v);
            }
        }
        acc = next;
    }
    acc.iter().map(|parts| from_pgroups(parts)).collect()
}

/// `λ_k` restricted to groups of order `<= bound`, plus the given extra groups.
pub fn lambda_k_distribution(
    k: u32,
    bound: u64,
    extra: &[AbelianGroup],
) -> Result<GroupDistribution<AbelianGroup>> {
    let mut weights = BTreeMap::new();
    for n in 1..=bound {
        for g in groups_of_order(n)? {
            let w = lambda_k(&g, k)?;
            weights.insert(g, w);
        }
    }
    for g in extra {
        if !weights.contains_key(g) {
            let w = lambda_k(g, k)?;
            weights.insert(g.clone(), w);
        }
    }
    let total: f64 = weights.values().sum();
    GroupDistribution::new(weights, 1.0 - total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pg(q: u64, lam: &[u32]) -> PGroup {
        PGroup::new(q, lam.to_vec()).unwrap()
    }

    #[test]
    fn normalizers() {
        assert!((cl_normalizer(2).unwrap() - 0.288_788_095_1).abs() < 1e-10);
        let big = cl_normalizer(10007).unwrap();
        assert!((big - (1.0 - 1.0 / 10007.0)).abs() < 1e-7);
        assert!(cl_normalizer(4).is_err());
        // direct product to many terms
        let mut p = 1.0;
        for k in 1..200 {
            p *= 1.0 - 3f64.powi(-k);
        }
        assert!((cl_normalizer(3).unwrap() - p).abs() < 1e-12);
    }

    #[test]
    fn cl_sums_to_one() {
        for q in [2, 3, 5, 7] {
            let mut s = 0.0;
            for n in 0..=20 {
                for lam in partitions(n) {
                    s += pg(q, &lam).aut_order().to_f64().unwrap().recip();
                }
            }
            let target = 1.0 / cl_normalizer(q).unwrap();
            assert!((s - target).abs() < 1e-6 * target, "q={q}");
            let d = cl_distribution(q, 1e-6).unwrap();
            assert!(d.residual() < 1e-6);
        }
    }

    #[test]
    fn cl_probability_examples() {
        let n = cl_normalizer(2).unwrap();
        assert!((cl_probability(&pg(2, &[])).unwrap() - 0.288788).abs() < 1e-6);
        assert!((cl_probability(&pg(2, &[1])).unwrap() - n).abs() < 1e-15);
        assert!((cl_probability(&pg(2, &[1, 1])).unwrap() - n / 6.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_ratios() {
        let ratio = |g: &[u64], k| {
            lambda_k(&AbelianGroup::trivial(), k).unwrap()
                / lambda_k(&AbelianGroup::from_u64s(g).unwrap(), k).unwrap()
        };
        let close = |a: f64, b: f64| (a - b).abs() < 1e-9 * b;
        assert!(close(ratio(&[2], 1), 2.0));
        assert!(close(ratio(&[3], 1), 6.0));
        assert!(close(ratio(&[4], 1), 8.0));
        assert!(close(ratio(&[6], 1), 12.0));
        assert!(close(ratio(&[2, 2], 1), 24.0));
        assert!(close(ratio(&[2], 2), 4.0));
        assert!(close(ratio(&[3], 2), 18.0));
        assert!(close(ratio(&[2, 2], 2), 96.0));
        assert!(close(ratio(&[5], 2), 100.0));
        assert!(close(ratio(&[2], 3), 8.0));
        assert!(close(ratio(&[3], 3), 54.0));
        assert!(lambda_k(&AbelianGroup::trivial(), 0).is_err());
    }

    #[test]
    fn lambda_residual_shrinks() {
        let mut last = 1.0;
        for b in [10, 100, 1000, 10_000] {
            let d = lambda_k_distribution(1, b, &[]).unwrap();
            assert!(d.residual() < last);
            last = d.residual();
        }
        assert!(last < 1e-3);
        let d3 = lambda_k_distribution(3, 100, &[]).unwrap();
        assert!(d3.residual() < 1e-5);
    }

    #[test]
    fn group_counts() {
        let count = |n| groups_of_order(n).unwrap().len();
        assert_eq!(count(1), 1);
        assert_eq!(count(8), 3);
        assert_eq!(count(16), 5);
        assert_eq!(count(72), 6);
        assert_eq!(count(64), 11);
    }

    #[test]
    fn tv_examples() {
        let cl = cl_distribution(2, 1e-9).unwrap();
        let mut w = BTreeMap::new();
        w.insert(pg(2, &[]), 0.75);
        w.insert(pg(2, &[1]), 0.25);
        let emp = GroupDistribution::new(w, 0.0).unwrap();
        assert!((tv_distance(&emp, &cl) - 0.4612).abs() < 1e-4);
        assert!(tv_distance(&cl, &cl) <= cl.residual() + 1e-15);
        let mut a = BTreeMap::new();
        a.insert(pg(2, &[2]), 1u64);
        let mut b = BTreeMap::new();
        b.insert(pg(2, &[3]), 4u64);
        let (a, b) = (
            GroupDistribution::empirical(&a).unwrap(),
            GroupDistribution::empirical(&b).unwrap(),
        );
        assert_eq!(tv_distance(&a, &b), 1.0);
    }

    #[test]
    fn ratio_examples() {
        let mut c = BTreeMap::new();
        c.insert(pg(2, &[]), 600u64);
        c.insert(pg(2, &[1]), 300);
        c.insert(pg(2, &[2]), 0);
        let r = ratio_table(&c, &pg(2, &[])).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[&pg(2, &[1])], 2.0);
        c.insert(pg(2, &[]), 0);
        assert!(matches!(ratio_table(&c, &pg(2, &[])), Err(Error::UndefinedRatio)));
    }

    fn arb_dist() -> impl Strategy<Value = GroupDistribution<u8>> {
        proptest::collection::btree_map(0u8..6, 1u64..20, 1..6)
            .prop_map(|m| GroupDistribution::empirical(&m).unwrap())
    }

    proptest! {
        #[test]
        fn tv_metric(a in arb_dist(), b in arb_dist(), c in arb_dist()) {
            let ab = tv_distance(&a, &b);
            prop_assert!((ab - tv_distance(&b, &a)).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!(tv_distance(&a, &c) <= ab + tv_distance(&b, &c) + 1e-12);
        }
    }
}
