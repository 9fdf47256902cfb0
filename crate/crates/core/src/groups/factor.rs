//! Integer factorization for invariant factors.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 10_000;
const RHO_ITERATION_CAP: u64 = 20_000_000;

/// Prime factorization `[(p, e)]` with `p` ascending.
pub fn factorize(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::Factorization("0".into()));
    }
    let mut n = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let mut stack = vec![n];
        let mut primes = Vec::new();
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_probable_prime(&m) {
                primes.push(m);
                continue;
            }
            let f = pollard_brent(&m).ok_or_else(|| Error::Factorization(m.to_string()))?;
            let g = &m / &f;
            stack.push(f);
            stack.push(g);
        }
        primes.sort();
        for p in primes {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Miller–Rabin over the prime bases up to 47 (deterministic below 3.3e24).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return crate::homology::is_prime(small);
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let a = BigUint::from(a);
        if (&a % n).is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let m = 128u64;
    for c in 1u32..20 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut iters = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            iters += r;
            if iters > RHO_ITERATION_CAP {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: u128) -> Vec<(u128, u32)> {
        factorize(&BigUint::from(n))
            .unwrap()
            .into_iter()
            .map(|(p, e)| (p.to_u128().unwrap(), e))
            .collect()
    }

    #[test]
    fn small_numbers() {
        assert_eq!(fac(1), vec![]);
        assert_eq!(fac(2), vec![(2, 1)]);
        assert_eq!(fac(360), vec![(2, 3), (3, 2), (5, 1)]);
        for n in 1..2000u128 {
            let prod: u128 = fac(n).iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn large_semiprime() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        assert_eq!(fac(p * q), vec![(q, 1), (p, 1)]);
        assert_eq!(fac(p * p * 4), vec![(2, 2), (p, 2)]);
    }

    #[test]
    fn example_order() {
        let f = fac(66_911_823_408);
        let prod: u128 = f.iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(prod, 66_911_823_408);
        assert!(f.iter().all(|(p, _)| is_probable_prime(&BigUint::from(*p))));
    }

    #[test]
    fn zero_rejected() {
        assert!(factorize(&BigUint::zero()).is_err());
    }
}
