//! Graded dimensions of free and two-step nilpotent Lie algebras, and the
//! inequality `d₃ ≥ d₁·(d₂ − (25/54)·d₁² + ½·d₁ − ⅓)` that the graded
//! pieces of the Lie algebra of a fundamental group must satisfy.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::primes::mobius;
use crate::exact::Rational;

/// Dimensions of the first three graded pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims {
    pub d1: BigInt,
    pub d2: BigInt,
    pub d3: BigInt,
}

impl GradedDims {
    pub fn new(d1: impl Into<BigInt>, d2: impl Into<BigInt>, d3: impl Into<BigInt>) -> Self {
        GradedDims { d1: d1.into(), d2: d2.into(), d3: d3.into() }
    }
}

/// Witt's formula `(1/n)·Σ_{m|n} μ(n/m)·k^m`: the dimension of the degree
/// `n` part of the free Lie algebra on `k` generators.
pub fn witt_free_dim(k: u64, n: u64) -> Result<BigInt> {
    if k == 0 || n == 0 {
        return Err(Error::Domain("need k ≥ 1 and n ≥ 1".into()));
    }
    let kb = BigInt::from(k);
    let mut sum = BigInt::zero();
    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        sum += BigInt::from(mobius(n / m)) * num_traits::pow(kb.clone(), m as usize);
    }
    Ok(sum / BigInt::from(n))
}

/// The right-hand side `d₁·(d₂ − (25/54)·d₁² + ½·d₁ − ⅓)`.
pub fn realizability_bound(d: &GradedDims) -> Rational {
    let d1 = Rational::from_integer(d.d1.clone());
    let d2 = Rational::from_integer(d.d2.clone());
    let r = |n: i64, m: i64| Rational::new(BigInt::from(n), BigInt::from(m));
    &d1 * (d2 - r(25, 54) * &d1 * &d1 + r(1, 2) * &d1 - r(1, 3))
}

/// True when the inequality fails, so no fundamental group of a smooth
/// variety has these graded dimensions. False says nothing either way.
pub fn realizability_obstructed(d: &GradedDims) -> bool {
    Rational::from_integer(d.d3.clone()) < realizability_bound(d)
}

/// `(2g, g(2g−1) − 1, 0)`: the maximal two-step quotient of the
/// fundamental group of a closed surface of genus `g`.
pub fn surface_group_two_step_dims(g: u64) -> Result<GradedDims> {
    if g < 2 {
        return Err(Error::Domain(format!("genus must be at least 2, got {g}")));
    }
    let g = BigInt::from(g);
    let d1: BigInt = &g * 2u32;
    let d2: BigInt = &g * (&d1 - 1u32) - 1u32;
    Ok(GradedDims { d1, d2, d3: BigInt::zero() })
}

/// Coefficients up to `t^order` of `∏_{n ≥ 1} (1 − tⁿ)^{−W(k, n)}`, which
/// equals `1/(1 − k·t)` by the PBW theorem.
pub fn witt_product_series(k: u64, order: usize) -> Result<Vec<BigInt>> {
    let mut series = vec![BigInt::zero(); order + 1];
    series[0] = BigInt::one();
    for n in 1..=order {
        let w = witt_free_dim(k, n as u64)?;
        // (1 − tⁿ)^{−w} = Σ_j C(w + j − 1, j)·t^{nj}.
        let mut factor = vec![BigInt::zero(); order + 1];
        let mut binom = BigInt::one();
        for j in 0..=order / n {
            factor[n * j] = binom.clone();
            binom = binom * (&w + BigInt::from(j)) / BigInt::from(j + 1);
        }
        let mut next = vec![BigInt::zero(); order + 1];
        for (i, a) in series.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in factor.iter().enumerate().take(order + 1 - i) {
                next[i + j] += a * b;
            }
        }
        series = next;
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn witt_values() {
        assert_eq!(witt_free_dim(2, 3).unwrap(), BigInt::from(2));
        assert_eq!(witt_free_dim(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(witt_free_dim(5, 1).unwrap(), BigInt::from(5));
        assert_eq!(witt_free_dim(2, 6).unwrap(), BigInt::from(9));
        assert!(witt_free_dim(0, 3).is_err());
    }

    #[test]
    fn inequality_examples() {
        assert_eq!(realizability_bound(&GradedDims::new(8, 27, 0)), rat(224, 27));
        assert!(realizability_obstructed(&GradedDims::new(8, 27, 0)));
        assert_eq!(realizability_bound(&GradedDims::new(6, 14, 0)), rat(0, 1));
        assert!(!realizability_obstructed(&GradedDims::new(6, 14, 0)));
        assert!(!realizability_obstructed(&GradedDims::new(0, 100, 0)));
    }

    #[test]
    fn surface_groups() {
        assert_eq!(surface_group_two_step_dims(4).unwrap(), GradedDims::new(8, 27, 0));
        assert_eq!(surface_group_two_step_dims(2).unwrap(), GradedDims::new(4, 5, 0));
        assert_eq!(surface_group_two_step_dims(3).unwrap(), GradedDims::new(6, 14, 0));
        assert!(surface_group_two_step_dims(1).is_err());
    }

    #[test]
    fn generating_identity() {
        for k in 1..=5u64 {
            let s = witt_product_series(k, 8).unwrap();
            let expect: Vec<BigInt> = (0..=8).map(|m| num_traits::pow(BigInt::from(k), m)).collect();
            assert_eq!(s, expect, "k = {k}");
        }
    }
}
