//! Factorization in ℚ[X]: squarefree decomposition, modular factorization,
//! Hensel lifting and exhaustive factor recombination (Zassenhaus).

use std::collections::BTreeSet;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{self, FpPoly};
use super::poly::RationalPolynomial;
use super::primes::next_prime_u64;
use crate::error::{Error, Result};

type ZPoly = Vec<BigInt>;

const SIEVE_PRIMES: usize = 6;

/// Monic squarefree parts with multiplicities, `f = c·∏ gᵢ^{i}` (Yun).
pub fn squarefree_decomposition(f: &RationalPolynomial) -> Vec<(RationalPolynomial, u32)> {
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd_fast(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides f");
    let mut c = df.exact_div(&a0).expect("gcd divides f'");
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd_fast(&d);
        b = b.exact_div(&a).expect("exact");
        c = d.exact_div(&a).expect("exact");
        d = c.sub(&b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree then coefficients. The constant factor is dropped.
pub fn poly_factor(f: &RationalPolynomial) -> Result<Vec<(RationalPolynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::Domain("cannot factor the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        let (_, prim) = g.content_primitive();
        for h in zassenhaus(&prim, None).factors {
            out.push((to_monic_rational(&h), mult));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Irreducible factors of degree at most `bound`, plus the (monic) cofactor
/// whose irreducible factors all exceed the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedFactorization {
    pub factors: Vec<RationalPolynomial>,
    pub remainder: RationalPolynomial,
}

/// Finds every irreducible factor of degree `<= bound` of a squarefree
/// polynomial. Subsets of modular factors are only recombined up to the
/// bound, and a degree sieve over several primes skips lifting entirely
/// when no small factor can exist.
pub fn factor_bounded(f: &RationalPolynomial, bound: usize) -> Result<BoundedFactorization> {
    if f.is_zero() {
        return Err(Error::Domain("cannot factor the zero polynomial".into()));
    }
    let (_, prim) = f.content_primitive();
    let z = zassenhaus(&prim, Some(bound));
    let mut factors: Vec<RationalPolynomial> = z.factors.iter().map(to_monic_rational).collect();
    factors.sort_by(|a, b| a.canonical_cmp(b));
    Ok(BoundedFactorization { factors, remainder: to_monic_rational(&z.remainder) })
}

fn to_monic_rational(p: &ZPoly) -> RationalPolynomial {
    RationalPolynomial::from_integers(p).monic()
}

struct Zassenhaus {
    factors: Vec<ZPoly>,
    remainder: ZPoly,
}

fn degree(p: &ZPoly) -> usize {
    p.len() - 1
}

fn zassenhaus(f: &ZPoly, bound: Option<usize>) -> Zassenhaus {
    let n = degree(f);
    let small_enough = |d: usize| bound.is_none_or(|b| d <= b);
    if n == 0 {
        return Zassenhaus { factors: Vec::new(), remainder: f.clone() };
    }
    if n == 1 {
        return if small_enough(1) {
            Zassenhaus { factors: vec![f.clone()], remainder: vec![BigInt::one()] }
        } else {
            Zassenhaus { factors: Vec::new(), remainder: f.clone() }
        };
    }
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    // Collect good primes and their degree patterns.
    let mut candidates: Vec<(u64, Vec<(FpPoly, usize)>)> = Vec::new();
    let mut p = 2;
    while candidates.len() < SIEVE_PRIMES {
        p = next_prime_u64(p);
        if p == 2 || modp::is_zero_bigint_mod(&lc, p) {
            continue;
        }
        let fp = modp::monic(&modp::from_bigints(f, p), p);
        if !modp::is_squarefree(&fp, p) {
            continue;
        }
        let ddf = modp::distinct_degree(&fp, p);
        candidates.push((p, ddf));
    }

    // Degrees attainable by a rational factor must be subset sums of the
    // modular factor degrees for every prime.
    let mut attainable: Option<BTreeSet<usize>> = None;
    for (_, ddf) in &candidates {
        let mut sums = BTreeSet::from([0usize]);
        for (g, d) in ddf {
            for _ in 0..degree_of(g) / d {
                let next: Vec<usize> = sums.iter().map(|s| s + d).filter(|&s| s <= n).collect();
                sums.extend(next);
            }
        }
        attainable = Some(match attainable {
            None => sums,
            Some(prev) => prev.intersection(&sums).copied().collect(),
        });
    }
    let attainable = attainable.unwrap();
    let proper: Vec<usize> = attainable.iter().copied().filter(|&d| d > 0 && d < n).collect();
    if proper.is_empty() || bound.is_some_and(|b| proper.iter().all(|&d| d > b)) {
        // Irreducible, or no factor small enough to matter.
        return if small_enough(n) {
            Zassenhaus { factors: vec![f.clone()], remainder: vec![BigInt::one()] }
        } else {
            Zassenhaus { factors: Vec::new(), remainder: f.clone() }
        };
    }

    let (p, ddf) = candidates
        .into_iter()
        .min_by_key(|(_, ddf)| ddf.iter().map(|(g, d)| degree_of(g) / d).sum::<usize>())
        .unwrap();
    let mut modular: Vec<FpPoly> = Vec::new();
    for (g, d) in ddf {
        modular.extend(modp::equal_degree(&g, d, p, &mut rng));
    }
    modular.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let modulus_target = coefficient_bound(f, bound) * BigInt::from(2);
    let mut k = 1u32;
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    while pk <= modulus_target {
        pk *= &pb;
        k += 1;
    }
    let lifted = multi_lift(f, &modular, p, k);
    recombine(f, lifted, &pk, bound)
}

fn degree_of(g: &FpPoly) -> usize {
    g.len() - 1
}

/// `2^n · |lc| · ||f||₂`, a Landau–Mignotte bound on the coefficients of
/// `lc(f)/lc(g) · g` for any factor `g`.
/// Bound on the coefficients of `lc(f)/lc(g)·g` for factors `g` of degree
/// at most `bound` (all factors when unbounded).
fn coefficient_bound(f: &ZPoly, bound: Option<usize>) -> BigInt {
    let n = bound.map_or(degree(f), |b| b.min(degree(f)));
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    (BigInt::one() << n) * f.last().unwrap().abs() * norm
}

fn zmod(p: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out: ZPoly = p.iter().map(|c| c.mod_floor(m)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let a = zmod(a, m);
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a);
    }
    let mut r = a;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.truncate(db);
    (zmod(&q, m), zmod(&r, m))
}

fn lift_fp(p: &FpPoly) -> ZPoly {
    p.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from `f ≡ g·h`, `s·g + t·h ≡ 1 (mod m)` to the
/// same relations modulo `m2` (with `m | m2 | m²`). `h` is monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(f: &ZPoly, g: &ZPoly, h: &ZPoly, s: &ZPoly, t: &ZPoly, m2: &BigInt) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let e = zmod(&zsub(f, &zmul(g, h)), m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, m2);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), m2);
    let h2 = zmod(&zadd(h, &r), m2);
    let b = zmod(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &vec![BigInt::one()]), m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, m2);
    let s2 = zmod(&zsub(s, &d), m2);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), m2);
    (g2, h2, s2, t2)
}

/// Lifts `f ≡ lc(f)·∏ factors (mod p)` to monic factors modulo `p^k`.
fn multi_lift(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(p).pow(k);
    let lc = f.last().unwrap().mod_floor(&pk);
    if factors.len() == 1 {
        let inv = lc.modinv(&pk).expect("leading coefficient is a unit mod p");
        return vec![zmod(&f.iter().map(|c| c * &inv).collect(), &pk)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc_p = modp::reduce_bigint(&lc, p);
    let g0 = left.iter().fold(vec![lc_p], |acc, g| modp::mul(&acc, g, p));
    let h0 = right.iter().fold(vec![1u64], |acc, g| modp::mul(&acc, g, p));
    let (one, s0, t0) = modp::ext_gcd(&g0, &h0, p);
    debug_assert_eq!(one, vec![1]);
    let (mut g, mut h, mut s, mut t) = (lift_fp(&g0), lift_fp(&h0), lift_fp(&s0), lift_fp(&t0));
    let f_mod = zmod(f, &pk);
    let mut m = BigInt::from(p);
    while m < pk {
        let m2 = (&m * &m).min(pk.clone());
        let step = hensel_step(&f_mod, &g, &h, &s, &t, &m2);
        (g, h, s, t) = step;
        m = m2;
    }
    let mut out = multi_lift(&g, left, p, k);
    out.extend(multi_lift(&h, right, p, k));
    out
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn primitive(p: ZPoly) -> ZPoly {
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: ZPoly = p.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|c| c.sign() == Sign::Minus) {
        out = out.iter().map(|c| -c).collect();
    }
    out
}

/// Exact division in ℤ[X]; `None` unless `b | a`.
fn zexact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let lb = b.last().unwrap();
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn recombine(f: &ZPoly, lifted: Vec<ZPoly>, pk: &BigInt, bound: Option<usize>) -> Zassenhaus {
    let mut remaining = lifted;
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while size <= remaining.len() {
        if bound.is_none() && 2 * size > remaining.len() {
            break;
        }
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let deg: usize = idx.iter().map(|&i| remaining[i].len() - 1).sum();
            if bound.is_none_or(|b| deg <= b) && deg < degree(&f) + 1 {
                let lc = f.last().unwrap().clone();
                let prod = idx.iter().fold(vec![lc], |acc, &i| zmod(&zmul(&acc, &remaining[i]), pk));
                let cand = primitive(prod.iter().map(|c| symmetric(c, pk)).collect());
                let const_ok = f[0].is_zero() || cand[0].is_zero() || (&f[0] % &cand[0]).is_zero();
                if const_ok {
                    if let Some(q) = zexact_div(&f, &cand) {
                        found.push(cand);
                        f = q;
                        for &i in idx.iter().rev() {
                            remaining.remove(i);
                        }
                        continue 'outer;
                    }
                }
            }
            // next combination
            let mut i = size;
            loop {
                if i == 0 {
                    size += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < remaining.len() - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    let rest_deg = degree(&f);
    match bound {
        None => {
            if rest_deg > 0 {
                found.push(f);
            }
            Zassenhaus { factors: found, remainder: vec![BigInt::one()] }
        }
        Some(b) => {
            if rest_deg > 0 && rest_deg <= b {
                found.push(f);
                Zassenhaus { factors: found, remainder: vec![BigInt::one()] }
            } else {
                Zassenhaus { factors: found, remainder: f }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_i64(c)
    }

    fn expand(factors: &[(RationalPolynomial, u32)]) -> RationalPolynomial {
        factors.iter().fold(p(&[1]), |acc, (g, e)| acc.mul(&g.pow(*e)))
    }

    #[test]
    fn irreducible_quadratic() {
        assert_eq!(poly_factor(&p(&[3, 0, 1])).unwrap(), vec![(p(&[3, 0, 1]), 1)]);
    }

    #[test]
    fn linear_times_quadratic() {
        let f = p(&[-1, 1]).mul(&p(&[1, 0, 1]));
        assert_eq!(poly_factor(&f).unwrap(), vec![(p(&[-1, 1]), 1), (p(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn cubic_of_8712_u5_has_the_quadratic_torsion_factor() {
        let f = p(&[9317, 726, 0, 1]);
        let factors = poly_factor(&f).unwrap();
        assert_eq!(factors, vec![(p(&[11, 1]), 1), (p(&[847, -11, 1]), 1)]);
        // (11 + 33√−3)/2 is a root of x² − 11x + 847: trace 11, norm (121 + 3267)/4.
        assert_eq!(rat(121 + 3267, 4), rat(847, 1));
    }

    #[test]
    fn swinnerton_dyer_style_polynomial_is_irreducible() {
        // x^4 − 10x^2 + 1 splits modulo every prime but is irreducible over ℚ.
        let f = p(&[1, 0, -10, 0, 1]);
        assert_eq!(poly_factor(&f).unwrap(), vec![(f.clone(), 1)]);
    }

    #[test]
    fn repeated_and_non_monic_factors() {
        let f = p(&[1, 2]).pow(3).mul(&p(&[-2, 0, 3])).mul(&p(&[5]));
        let factors = poly_factor(&f).unwrap();
        assert_eq!(expand(&factors), f.monic());
        assert_eq!(factors.len(), 2);
        assert!(factors.contains(&(Poly::new(vec![rat(1, 2), rat(1, 1)]), 3)));
    }

    #[test]
    fn zero_polynomial_is_a_domain_error() {
        assert!(poly_factor(&RationalPolynomial::zero()).is_err());
    }

    #[test]
    fn bounded_factorization_keeps_large_cofactor() {
        let big = p(&[1, 0, -10, 0, 1]);
        let f = big.mul(&p(&[2, 1])).mul(&p(&[3, 0, 1]));
        let res = factor_bounded(&f, 2).unwrap();
        assert_eq!(res.factors, vec![p(&[2, 1]), p(&[3, 0, 1])]);
        assert_eq!(res.remainder, big);
    }

    use crate::exact::poly::Poly;
}
