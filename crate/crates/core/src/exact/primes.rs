//! Integer primality and factorization helpers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

const TRIAL_LIMIT: u64 = 20_000;

pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
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

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && factor_u64(n) == vec![(n, 1)]
}

pub fn next_prime_u64(mut n: u64) -> u64 {
    n += 1;
    while !is_prime_u64(n) {
        n += 1;
    }
    n
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Miller–Rabin with the first 25 prime bases. Deterministic far beyond
/// 2^64 and overwhelmingly reliable above that.
pub fn is_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let n = n.magnitude();
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        if small < TRIAL_LIMIT * TRIAL_LIMIT {
            return is_prime_u64(small);
        }
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&BigInt::from(n.clone())) {
        out.push(n);
        return;
    }
    let bits = n.bits() as u32;
    for k in 2..=bits {
        let root = n.nth_root(k);
        if root.bits() < 2 {
            break;
        }
        if root.pow(k) == n {
            for _ in 0..k {
                factor_into(root.clone(), out);
            }
            return;
        }
    }
    let d = pollard_brent(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorization of `|n|` as sorted `(prime, exponent)` pairs.
///
/// # Panics
/// Panics on zero.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % p).is_zero() {
            m /= p;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        factor_into(m, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        let q = BigInt::from(q);
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Distinct prime divisors of a non-zero integer.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factor_integer(n).into_iter().map(|(p, _)| p).collect()
}

/// Signed squarefree part: `n = s·m²` with `s` squarefree, sign kept.
pub fn squarefree_part(n: &BigInt) -> BigInt {
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in factor_integer(n) {
        if e % 2 == 1 {
            s *= p;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_number_theory() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(1), 1);
        assert_eq!(next_prime_u64(13), 17);
    }

    #[test]
    fn factors_discriminant_of_8712_u5() {
        let d = BigInt::from(-(16i64 * 2187 * 1_771_561));
        let f = factor_integer(&d);
        assert_eq!(f, vec![(BigInt::from(2), 4), (BigInt::from(3), 7), (BigInt::from(11), 6)]);
    }

    #[test]
    fn factors_product_of_large_primes() {
        let p: BigInt = "1000000007".parse().unwrap();
        let q: BigInt = "998244353".parse().unwrap();
        let r: BigInt = "18446744073709551557".parse().unwrap();
        let n = &p * &q * &r * &r;
        let f = factor_integer(&n);
        assert_eq!(f, vec![(q.clone(), 1), (p.clone(), 1), (r.clone(), 2)]);
        assert!(is_prime(&r));
        assert!(!is_prime(&(&p * &q)));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(-12)), BigInt::from(-3));
        assert_eq!(squarefree_part(&BigInt::from(28)), BigInt::from(7));
    }
}
