//! Orders of automorphism groups of finite abelian groups.

use num_bigint::BigUint;
use num_traits::One;

use super::abelian::AbelianGroup;
use crate::error::Result;

/// `|Aut(Z/q^{e_1} x ... x Z/q^{e_m})|` for any ordering of the exponents.
pub fn aut_order_partition(q: &BigUint, partition: &[u32]) -> BigUint {
    let mut e: Vec<u32> = partition.iter().copied().filter(|&x| x > 0).collect();
    e.sort_unstable();
    let m = e.len();
    if m == 0 {
        return BigUint::one();
    }
    // 1-based: d_k = max{l : e_l = e_k}, c_k = min{l : e_l = e_k}
    let d: Vec<usize> = (0..m)
        .map(|k| (0..m).rev().find(|&l| e[l] == e[k]).unwrap() + 1)
        .collect();
    let c: Vec<usize> = (0..m)
        .map(|k| (0..m).find(|&l| e[l] == e[k]).unwrap() + 1)
        .collect();
    let mut out = BigUint::one();
    for k in 0..m {
        out *= q.pow(d[k] as u32) - q.pow(k as u32);
    }
    let mut exp: u64 = 0;
    for j in 0..m {
        exp += e[j] as u64 * (m - d[j]) as u64;
        exp += (e[j] as u64 - 1) * (m - c[j] + 1) as u64;
    }
    out * q.pow(u32::try_from(exp).expect("exponent fits in u32"))
}

/// `|Aut(G)|` as the product over primary components.
pub fn aut_order(g: &AbelianGroup) -> Result<BigUint> {
    Ok(g.primary_parts()?
        .iter()
        .map(|(p, lam)| aut_order_partition(p, lam))
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::PGroup;

    fn aut(q: u64, lam: &[u32]) -> u64 {
        use num_traits::ToPrimitive;
        PGroup::new(q, lam.to_vec()).unwrap().aut_order().to_u64().unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(aut(2, &[]), 1);
        assert_eq!(aut(2, &[1]), 1);
        assert_eq!(aut(2, &[1, 1]), 6);
        assert_eq!(aut(2, &[3]), 4);
        assert_eq!(aut(2, &[2, 1]), 8);
        assert_eq!(aut(2, &[3, 1]), 16);
        assert_eq!(aut(3, &[1, 1]), 48);
        assert_eq!(aut(2, &[1, 1, 1]), 168);
        assert_eq!(aut(5, &[1]), 4);
        assert_eq!(aut(3, &[2]), 6);
    }

    #[test]
    fn composite_groups() {
        let g = AbelianGroup::from_u64s(&[6]).unwrap();
        assert_eq!(aut_order(&g).unwrap(), BigUint::from(2u32));
        let g = AbelianGroup::from_u64s(&[2, 2]).unwrap();
        assert_eq!(aut_order(&g).unwrap(), BigUint::from(6u32));
        let g = AbelianGroup::from_u64s(&[2, 6]).unwrap();
        assert_eq!(aut_order(&g).unwrap(), BigUint::from(12u32));
        assert_eq!(aut_order(&AbelianGroup::trivial()).unwrap(), BigUint::one());
    }
}
