//! Small-integer number theory helpers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub fn gcd_u(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm_u(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// σ_k(n) = Σ_{d|n} d^k.
pub fn sigma(k: u32, n: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    divisors(n)
        .into_iter()
        .map(|d| num_traits::pow(BigInt::from(d), k as usize))
        .fold(BigInt::zero(), |a, b| a + b)
}

/// σ_1 for every n in 0..len via a sieve; entry 0 is 0.
pub fn sigma1_table(len: usize) -> Vec<i64> {
    let mut t = vec![0i64; len];
    for d in 1..len {
        let mut m = d;
        while m < len {
            t[m] += d as i64;
            m += d;
        }
    }
    t
}

/// Modular inverse of a mod m (m ≥ 1), if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_and_phi() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(euler_phi(27), 18);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(sigma(1, 6), BigInt::from(12));
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(sigma1_table(7)[6], 12);
    }

    #[test]
    fn inverse() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(-1, 7), Some(6));
        assert_eq!(mod_inverse(2, 4), None);
    }
}
