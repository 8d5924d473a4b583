//! Counting roots of rational polynomials in ℚ_p.
//!
//! Roots are located digit by digit: a residue `r` with `G(r) ≡ 0` and
//! `G'(r) ≢ 0 (mod p)` lifts to exactly one root (Hensel); otherwise the
//! search refines to `G(r + p·X)` with its p-power content removed. Each
//! refinement consumes one digit of the budget.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp;
use super::poly::RationalPolynomial;
use crate::error::{Error, Result};

/// Residue enumeration switches to gcd/EDF root finding above this.
const BRUTE_FORCE_LIMIT: u64 = 2000;

/// Number of roots of `f` in ℚ_p, or `None` if `budget` p-adic digits do
/// not suffice to separate them. `f` must be squarefree.
pub fn count_roots_qp(f: &RationalPolynomial, p: u64, budget: u32) -> Result<Option<usize>> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::Domain("need a non-constant polynomial".into()));
    }
    if p >= 1 << 31 {
        return Err(Error::Capability(format!("prime {p} too large for residue arithmetic")));
    }
    let (_, g) = f.content_primitive();
    let pb = BigInt::from(p);
    // Roots of valuation ≥ 0, then roots 1/y with v(y) > 0.
    let Some(integral) = count_integral(&g, p, &pb, budget, 0)? else {
        return Ok(None);
    };
    let mut rev = g.clone();
    rev.reverse();
    let scaled = primitive_p(substitute(&rev, &BigInt::zero(), &pb), &pb);
    let Some(outer) = count_integral(&scaled, p, &pb, budget, 1)? else {
        return Ok(None);
    };
    Ok(Some(integral + outer))
}

/// `G(a + m·X)` by Taylor shift.
fn substitute(g: &[BigInt], a: &BigInt, m: &BigInt) -> Vec<BigInt> {
    // Horner with polynomial arithmetic in X.
    let mut acc: Vec<BigInt> = Vec::new();
    for c in g.iter().rev() {
        // acc = acc·(a + mX) + c
        let mut next = vec![BigInt::zero(); acc.len() + 1];
        for (i, x) in acc.iter().enumerate() {
            next[i] += x * a;
            next[i + 1] += x * m;
        }
        next[0] += c;
        acc = next;
    }
    while acc.len() > 1 && acc.last().is_some_and(|c| c.is_zero()) {
        acc.pop();
    }
    acc
}

/// Removes the largest power of `p` dividing all coefficients.
fn primitive_p(mut g: Vec<BigInt>, p: &BigInt) -> Vec<BigInt> {
    if g.iter().all(|c| c.is_zero()) {
        return g;
    }
    while g.iter().all(|c| c.is_multiple_of(p)) {
        for c in g.iter_mut() {
            *c /= p;
        }
    }
    g
}

fn roots_mod_p(gp: &modp::FpPoly, p: u64) -> Vec<u64> {
    if gp.len() <= 1 {
        return Vec::new();
    }
    if p <= BRUTE_FORCE_LIMIT {
        return (0..p).filter(|&x| modp::eval(gp, x, p) == 0).collect();
    }
    let x: modp::FpPoly = vec![0, 1];
    let h = modp::powmod(&x, &p.into(), gp, p);
    let split = modp::gcd(&modp::sub(&h, &x, p), gp, p);
    if split.len() <= 1 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut roots: Vec<u64> = modp::equal_degree(&modp::monic(&split, p), 1, p, &mut rng)
        .into_iter()
        .map(|lin| (p - lin[0]) % p)
        .collect();
    roots.sort_unstable();
    roots
}

fn count_integral(g: &[BigInt], p: u64, pb: &BigInt, budget: u32, depth: u32) -> Result<Option<usize>> {
    if g.len() <= 1 {
        // A non-zero constant has no roots; the zero polynomial cannot
        // arise from a squarefree input.
        return Ok(Some(0));
    }
    let gp = modp::trim(modp::from_bigints(g, p));
    let dp = modp::derivative(&gp, p);
    let mut total = 0;
    for r in roots_mod_p(&gp, p) {
        if modp::eval(&dp, r, p) != 0 {
            total += 1;
            continue;
        }
        if depth >= budget {
            return Ok(None);
        }
        let shifted = primitive_p(substitute(g, &BigInt::from(r), pb), pb);
        match count_integral(&shifted, p, pb, budget, depth + 1)? {
            Some(k) => total += k,
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}
