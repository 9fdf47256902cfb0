//! Finite abelian groups in invariant-factor form and their primary parts.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::factor::factorize;
use crate::error::{invalid, Error, Result};
use crate::homology::is_prime;

/// `Z/d_1 x ... x Z/d_k` with `d_1 | d_2 | ... | d_k`, every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AbelianGroup {
    factors: Vec<BigUint>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_factors([BigUint::from(n)]).expect("nonzero order")
    }

    /// Canonical form of `Z/a_1 x ... x Z/a_k` for arbitrary positive `a_i`.
    pub fn from_factors(factors: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let mut v: Vec<BigUint> = Vec::new();
        for f in factors {
            if f.is_zero() {
                return Err(invalid("invariant factor 0 describes an infinite group"));
            }
            if !f.is_one() {
                v.push(f);
            }
        }
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let g = v[i].gcd(&v[j]);
                let l = &v[i] / &g * &v[j];
                v[i] = g;
                v[j] = l;
            }
        }
        v.retain(|x| !x.is_one());
        v.sort();
        Ok(AbelianGroup { factors: v })
    }

    pub fn from_u64s(factors: &[u64]) -> Result<Self> {
        Self::from_factors(factors.iter().map(|&f| BigUint::from(f)))
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().product()
    }

    pub fn log_order(&self) -> f64 {
        self.factors.iter().map(ln_big).sum()
    }

    /// Sylow `q`-subgroup as a partition of `q`-adic valuations.
    pub fn sylow(&self, q: u64) -> Result<PGroup> {
        let bq = BigUint::from(q);
        let parts = self
            .factors
            .iter()
            .map(|f| valuation(f, &bq))
            .filter(|&e| e > 0)
            .collect();
        PGroup::new(q, parts)
    }

    /// Whether `self` is a quotient of `other` (equivalently, a subgroup).
    pub fn is_quotient_of(&self, other: &AbelianGroup) -> bool {
        if self.factors.len() > other.factors.len() {
            return false;
        }
        let off = other.factors.len() - self.factors.len();
        self.factors
            .iter()
            .zip(&other.factors[off..])
            .all(|(a, b)| (b % a).is_zero())
    }

    /// Primary decomposition `[(p, partition)]`, primes ascending.
    pub fn primary_parts(&self) -> Result<Vec<(BigUint, Vec<u32>)>> {
        let Some(top) = self.factors.last() else {
            return Ok(Vec::new());
        };
        let primes = factorize(top)?;
        Ok(primes
            .into_iter()
            .map(|(p, _)| {
                let mut parts: Vec<u32> = self
                    .factors
                    .iter()
                    .map(|f| valuation(f, &p))
                    .filter(|&e| e > 0)
                    .collect();
                parts.sort_unstable_by(|a, b| b.cmp(a));
                (p, parts)
            })
            .collect())
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        Self::from_factors(self.factors.iter().chain(&other.factors).cloned())
            .expect("factors already positive")
    }
}

pub(crate) fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for part in s.split(" x ") {
            let digits = part
                .trim()
                .strip_prefix("Z/")
                .ok_or_else(|| Error::Parse(format!("bad cyclic factor {part:?}")))?;
            let d: BigUint = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {digits:?}")))?;
            factors.push(d);
        }
        let g = Self::from_factors(factors.clone())?;
        let mut sorted = factors;
        sorted.retain(|x| !x.is_one());
        if g.factors != sorted {
            return Err(Error::Parse(format!("{s:?} is not in invariant-factor form")));
        }
        Ok(g)
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Z/q^{λ_1} x ... x Z/q^{λ_m}` with `λ_1 >= ... >= λ_m >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PGroup {
    q: u64,
    partition: Vec<u32>,
}

impl PGroup {
    pub fn new(q: u64, mut partition: Vec<u32>) -> Result<Self> {
        if !is_prime(q) {
            return Err(invalid(format!("{q} is not prime")));
        }
        partition.retain(|&e| e > 0);
        partition.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PGroup { q, partition })
    }

    pub fn trivial(q: u64) -> Result<Self> {
        Self::new(q, Vec::new())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn partition(&self) -> &[u32] {
        &self.partition
    }

    pub fn is_trivial(&self) -> bool {
        self.partition.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.partition.iter().sum()
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.q).pow(self.size())
    }

    pub fn to_abelian(&self) -> AbelianGroup {
        let q = BigUint::from(self.q);
        AbelianGroup::from_factors(self.partition.iter().map(|&e| q.pow(e)))
            .expect("prime powers are positive")
    }

    pub fn aut_order(&self) -> BigUint {
        super::aut::aut_order_partition(&BigUint::from(self.q), &self.partition)
    }
}

impl fmt::Display for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_abelian(), f)
    }
}

/// Recombines primary components at distinct primes.
pub fn from_pgroups(parts: &[PGroup]) -> Result<AbelianGroup> {
    let mut seen: Vec<u64> = parts.iter().map(PGroup::q).collect();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("repeated prime in primary decomposition"));
    }
    Ok(parts
        .iter()
        .fold(AbelianGroup::trivial(), |acc, p| acc.direct_sum(&p.to_abelian())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn orders() {
        assert_eq!(AbelianGroup::trivial().order(), BigUint::one());
        assert_eq!(AbelianGroup::trivial().log_order(), 0.0);
        let g = AbelianGroup::from_u64s(&[2, 4]).unwrap();
        assert_eq!(g.order(), BigUint::from(8u32));
        let big = AbelianGroup::cyclic(66_911_823_408);
        assert!((big.log_order() - 24.926).abs() < 1e-3);
    }

    #[test]
    fn canonical_form() {
        let g = AbelianGroup::from_u64s(&[6, 4]).unwrap();
        assert_eq!(g.to_string(), "Z/2 x Z/12");
        let h = AbelianGroup::from_u64s(&[1, 3, 5]).unwrap();
        assert_eq!(h.to_string(), "Z/15");
        assert!(AbelianGroup::from_u64s(&[0]).is_err());
    }

    #[test]
    fn sylow_examples() {
        let g = AbelianGroup::from_u64s(&[2, 6]).unwrap();
        assert_eq!(g.sylow(2).unwrap().partition(), &[1, 1]);
        assert_eq!(g.sylow(3).unwrap().partition(), &[1]);
        assert!(g.sylow(5).unwrap().is_trivial());
        let peak: BigUint = "79040679454167077902597570".parse().unwrap();
        let t = AbelianGroup::from_factors([BigUint::from(2u32), peak]).unwrap();
        assert_eq!(t.sylow(2).unwrap().partition(), &[1, 1]);
        assert!(g.sylow(4).is_err());
    }

    #[test]
    fn parse_and_print() {
        for s in ["1", "Z/2", "Z/2 x Z/4", "Z/2 x Z/79040679454167077902597570"] {
            let g: AbelianGroup = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("Z/4 x Z/2".parse::<AbelianGroup>().is_err());
        assert!("Z/2 x Z/3".parse::<AbelianGroup>().is_err());
        assert!("Q".parse::<AbelianGroup>().is_err());
        let json = serde_json::to_string(&AbelianGroup::from_u64s(&[2, 4]).unwrap()).unwrap();
        assert_eq!(json, "\"Z/2 x Z/4\"");
        let back: AbelianGroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_string(), "Z/2 x Z/4");
    }

    #[test]
    fn quotients() {
        let g = AbelianGroup::from_u64s(&[2, 4]).unwrap();
        assert!(AbelianGroup::cyclic(4).is_quotient_of(&g));
        assert!(AbelianGroup::cyclic(2).is_quotient_of(&g));
        assert!(!AbelianGroup::cyclic(8).is_quotient_of(&g));
        assert!(AbelianGroup::trivial().is_quotient_of(&g));
    }

    proptest! {
        #[test]
        fn primary_roundtrip(fs in proptest::collection::vec(1u64..500, 0..5)) {
            let g = AbelianGroup::from_u64s(&fs).unwrap();
            let parts: Vec<PGroup> = g
                .primary_parts()
                .unwrap()
                .into_iter()
                .map(|(p, lam)| PGroup::new(p.to_u64().unwrap(), lam).unwrap())
                .collect();
            prop_assert_eq!(from_pgroups(&parts).unwrap(), g.clone());
            for p in &parts {
                prop_assert_eq!(&g.sylow(p.q()).unwrap(), p);
            }
            let prod: u64 = fs.iter().product::<u64>().max(1);
            prop_assert_eq!(g.order(), BigUint::from(prod));
        }
    }
}
