//! Polynomials over a small prime field `F_p` (`p < 2^31`), used for
//! modular factorization and degree-pattern sieving.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Coefficients mod p, lowest degree first, trimmed.
pub type FpPoly = Vec<u64>;

pub fn trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub fn from_bigints(coeffs: &[BigInt], p: u64) -> FpPoly {
    trim(coeffs.iter().map(|c| reduce_bigint(c, p)).collect())
}

pub fn add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub fn scale(a: &FpPoly, c: u64, p: u64) -> FpPoly {
    trim(a.iter().map(|&x| x * c % p).collect())
}

pub fn divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * bj % p) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv_mod(l, p), p),
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(g, s, t)` with `s·a + t·b = g` monic.
pub fn ext_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("gcd of two zero polynomials"), p);
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

pub fn powmod(base: &FpPoly, exp: &BigUint, modulus: &FpPoly, p: u64) -> FpPoly {
    let mut acc: FpPoly = rem(&vec![1], modulus, p);
    let base = rem(base, modulus, p);
    for i in (0..exp.bits()).rev() {
        acc = rem(&mul(&acc, &acc, p), modulus, p);
        if exp.bit(i) {
            acc = rem(&mul(&acc, &base, p), modulus, p);
        }
    }
    acc
}

pub fn is_squarefree(f: &FpPoly, p: u64) -> bool {
    let d = derivative(f, p);
    !d.is_empty() && gcd(f, &d, p).len() == 1
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    let pbig = BigUint::from(p);
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest.clone(), deg));
            break;
        }
        h = powmod(&h, &pbig, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, d));
        }
    }
    out
}

/// Splits a product of distinct monic irreducibles of common degree `d`.
pub fn equal_degree<R: Rng>(f: &FpPoly, d: usize, p: u64, rng: &mut R) -> Vec<FpPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - BigUint::one()) / 2u32;
    loop {
        let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let g = gcd(&a, f, p);
        let split = if g.len() > 1 && g.len() < f.len() {
            g
        } else {
            let b = powmod(&a, &exp, f, p);
            let g = gcd(&sub(&b, &vec![1], p), f, p);
            if g.len() <= 1 || g.len() == f.len() {
                continue;
            }
            g
        };
        let other = divrem(f, &split, p).0;
        let mut out = equal_degree(&split, d, p, rng);
        out.extend(equal_degree(&other, d, p, rng));
        return out;
    }
}

/// Complete factorization of a monic squarefree polynomial over `F_p`
/// (odd `p`) into monic irreducibles, sorted by degree then coefficients.
pub fn factor_squarefree<R: Rng>(f: &FpPoly, p: u64, rng: &mut R) -> Vec<FpPoly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Number of distinct roots in `F_p` (any p < 2^31).
pub fn count_roots(f: &FpPoly, p: u64) -> usize {
    if f.is_empty() {
        return p as usize;
    }
    if p < 64 {
        return (0..p).filter(|&x| eval(f, x, p) == 0).count();
    }
    let x: FpPoly = vec![0, 1];
    let h = powmod(&x, &BigUint::from(p), f, p);
    gcd(&sub(&h, &x, p), f, p).len() - 1
}

pub fn eval(f: &FpPoly, x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

pub fn is_zero_bigint_mod(c: &BigInt, p: u64) -> bool {
    (c % BigInt::from(p)).is_zero()
}
