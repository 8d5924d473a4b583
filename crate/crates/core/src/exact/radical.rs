//! Formal radicals: finite products `∏ αᵢ^{eᵢ}` with rational exponents,
//! read in `ℚ ⊗ ℚ̄^×`, so roots of unity are invisible.
//!
//! Deciding whether such a product comes from `ℚ^×` reduces to one
//! algebraic number: with `L` the common exponent denominator,
//! `β = ∏ αᵢ^{L·eᵢ}` lies in a field `K` of degree `D`, and `β^{1/L}` is
//! rational in `ℚ ⊗ ℚ̄^×` exactly when `β^D / N_{K/ℚ}(β)` is a root of
//! unity. The rational value is then `N(β)^{1/(D·L)}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::factor_integer;
use super::scalar::{Rational, Scalar};
use super::tower::{is_root_of_unity, NumberTower, TowerElement};
use crate::error::{Error, Result};

/// Exponent of each prime in a rational radical `∏ ℓ^{e_ℓ}`.
pub type PrimeExponentMap = BTreeMap<BigInt, Rational>;

#[derive(Clone, Debug, PartialEq)]
pub enum RadicalBase {
    Rational(Rational),
    Algebraic(TowerElement),
}

/// Product of bases raised to rational exponents. Bases are non-zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FormalRadical {
    factors: Vec<(RadicalBase, Rational)>,
}

impl RadicalBase {
    fn normalized(self) -> RadicalBase {
        match self {
            RadicalBase::Algebraic(a) => match a.as_rational() {
                Some(q) => RadicalBase::Rational(q),
                None => RadicalBase::Algebraic(a),
            },
            r => r,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            RadicalBase::Rational(q) => q.is_zero(),
            RadicalBase::Algebraic(a) => a.vanishes(),
        }
    }
}

impl FormalRadical {
    pub fn one() -> Self {
        FormalRadical::default()
    }

    /// `base^exponent`; fails on a zero base.
    pub fn new(base: RadicalBase, exponent: Rational) -> Result<Self> {
        if base.is_zero() {
            return Err(Error::Domain("zero has no place in a multiplicative radical".into()));
        }
        let mut r = FormalRadical::one();
        if !exponent.is_zero() {
            r.factors.push((base.normalized(), exponent));
        }
        Ok(r)
    }

    pub fn rational(q: Rational, exponent: Rational) -> Result<Self> {
        Self::new(RadicalBase::Rational(q), exponent)
    }

    pub fn algebraic(a: TowerElement, exponent: Rational) -> Result<Self> {
        Self::new(RadicalBase::Algebraic(a), exponent)
    }

    pub fn factors(&self) -> &[(RadicalBase, Rational)] {
        &self.factors
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FormalRadical { factors }
    }

    pub fn pow(&self, e: &Rational) -> Self {
        if e.is_zero() {
            return FormalRadical::one();
        }
        FormalRadical { factors: self.factors.iter().map(|(b, x)| (b.clone(), x * e)).collect() }
    }

    pub fn inv(&self) -> Self {
        self.pow(&-Rational::one())
    }

    /// Splits into exact prime exponents from the rational bases and the
    /// algebraic bases collapsed into one tower element `β` with `L`.
    fn collapse(&self) -> Result<(PrimeExponentMap, Option<(TowerElement, BigInt)>)> {
        let mut primes = PrimeExponentMap::new();
        let mut tower: Option<NumberTower> = None;
        let mut den = BigInt::one();
        for (base, e) in &self.factors {
            match base {
                RadicalBase::Rational(q) => add_rational(&mut primes, q, e),
                RadicalBase::Algebraic(a) => {
                    match &tower {
                        None => tower = Some(a.tower().clone()),
                        Some(t) if t == a.tower() => {}
                        Some(_) => {
                            return Err(Error::Capability(
                                "radical mixes algebraic bases from different number fields".into(),
                            ))
                        }
                    }
                    den = den.lcm(e.denom());
                }
            }
        }
        let Some(tower) = tower else {
            return Ok((primes, None));
        };
        let mut beta = tower.one();
        for (base, e) in &self.factors {
            if let RadicalBase::Algebraic(a) = base {
                let k = (e * Rational::from_integer(den.clone())).to_integer();
                let k = k.to_i64().ok_or_else(|| Error::Capability("radical exponent too large".into()))?;
                beta = beta.times(&a.pow_i(k).expect("non-zero base"));
            }
        }
        Ok((primes, Some((beta, den))))
    }

    /// Text form such as `2^(1/3) * 3^(-1/24)`.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(b, e)| {
                let base = match b {
                    RadicalBase::Rational(q) if q.is_integer() && !q.is_negative() => q.to_string(),
                    RadicalBase::Rational(q) => format!("({q})"),
                    RadicalBase::Algebraic(a) => format!("[{a}]"),
                };
                format!("{base}^({e})")
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

impl fmt::Display for FormalRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn add_rational(map: &mut PrimeExponentMap, q: &Rational, e: &Rational) {
    for (n, sign) in [(q.numer(), 1), (q.denom(), -1)] {
        if n.abs().is_one() {
            continue;
        }
        for (p, k) in factor_integer(n) {
            let entry = map.entry(p).or_insert_with(Rational::zero);
            *entry += e * Rational::from_integer(BigInt::from(sign * k as i64));
        }
    }
    map.retain(|_, v| !v.is_zero());
}

/// The rational value `∏ ℓ^{e_ℓ}` of a radical if it lies in the image of
/// `ℚ^×`, `None` otherwise.
pub fn radical_rational_part(r: &FormalRadical) -> Result<Option<PrimeExponentMap>> {
    let (mut primes, alg) = r.collapse()?;
    let Some((beta, den)) = alg else {
        return Ok(Some(primes));
    };
    let degree = beta.tower().degree();
    let norm = beta.norm();
    let gamma = beta
        .pow_i(degree as i64)
        .expect("non-zero")
        .times(&beta.embed(&norm.recip()));
    if is_root_of_unity(&gamma)?.is_none() {
        return Ok(None);
    }
    let scale = Rational::new(BigInt::one(), den * BigInt::from(degree));
    add_rational(&mut primes, &norm, &scale);
    Ok(Some(primes))
}

/// Exponent of `ℓ` in a rational radical, zero when absent.
pub fn radical_valuation(m: &PrimeExponentMap, ell: &BigInt) -> Rational {
    m.get(ell).cloned().unwrap_or_else(Rational::zero)
}

/// Equality in `ℚ ⊗ ℚ̄^×`: the quotient must be torsion, i.e. rational
/// with every prime exponent zero.
pub fn radical_equal(a: &FormalRadical, b: &FormalRadical) -> Result<bool> {
    let quotient = a.mul(&b.inv());
    Ok(radical_rational_part(&quotient)?.is_some_and(|m| m.is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::RationalPolynomial;
    use crate::exact::scalar::rat;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_i64(c)
    }

    #[test]
    fn square_root_of_minus_three_is_a_power_of_three() {
        let k0 = NumberTower::rational();
        let k = k0.with_quadratic(&k0.zero(), &k0.from_rational(&rat(3, 1))).unwrap();
        let s = k.quadratic_generator().unwrap(); // √−3
        let r = FormalRadical::algebraic(s, rat(1, 2)).unwrap();
        let m = radical_rational_part(&r).unwrap().unwrap();
        assert_eq!(m, PrimeExponentMap::from([(BigInt::from(3), rat(1, 4))]));
    }

    #[test]
    fn fundamental_unit_is_not_rational() {
        let k = NumberTower::new(&p(&[-7, 0, 1])).unwrap();
        let u = k.base_element(p(&[8, 3]));
        let r = FormalRadical::algebraic(u.clone(), rat(-1, 4)).unwrap();
        assert_eq!(radical_rational_part(&r).unwrap(), None);
        // But the product with its conjugate is a unit of norm one.
        let conj = k.base_element(p(&[8, -3]));
        let both = r.mul(&FormalRadical::algebraic(conj, rat(-1, 4)).unwrap());
        assert_eq!(radical_rational_part(&both).unwrap(), Some(PrimeExponentMap::new()));
        assert!(radical_equal(&both, &FormalRadical::one()).unwrap());
        assert!(!radical_equal(&r, &FormalRadical::one()).unwrap());
    }

    #[test]
    fn rational_radicals_compare_by_exponents() {
        let a = FormalRadical::rational(rat(4, 1), rat(1, 6)).unwrap();
        let b = FormalRadical::rational(rat(-2, 1), rat(1, 3)).unwrap();
        assert!(radical_equal(&a, &b).unwrap());
        let c = FormalRadical::rational(rat(2, 1), rat(1, 2)).unwrap();
        assert!(!radical_equal(&a, &c).unwrap());
        let m = radical_rational_part(&a).unwrap().unwrap();
        assert_eq!(radical_valuation(&m, &BigInt::from(2)), rat(1, 3));
        assert_eq!(radical_valuation(&m, &BigInt::from(11)), rat(0, 1));
    }

    #[test]
    fn mixed_rational_and_algebraic_equality() {
        let k = NumberTower::new(&p(&[-2, 0, 1])).unwrap();
        let s = k.generator(); // √2
        let a = FormalRadical::algebraic(s, rat(2, 3)).unwrap();
        let b = FormalRadical::rational(rat(2, 1), rat(1, 3)).unwrap();
        assert!(radical_equal(&a, &b).unwrap());
        let c = FormalRadical::rational(rat(2, 1), rat(1, 5)).unwrap();
        assert!(!radical_equal(&a, &c).unwrap());
    }

    #[test]
    fn different_fields_are_a_capability_error() {
        let k1 = NumberTower::new(&p(&[-2, 0, 1])).unwrap();
        let k2 = NumberTower::new(&p(&[-3, 0, 1])).unwrap();
        let a = FormalRadical::algebraic(k1.generator(), rat(1, 1)).unwrap();
        let b = FormalRadical::algebraic(k2.generator(), rat(1, 1)).unwrap();
        assert!(matches!(radical_rational_part(&a.mul(&b)), Err(Error::Capability(_))));
    }

    #[test]
    fn zero_base_is_rejected() {
        assert!(FormalRadical::rational(rat(0, 1), rat(1, 2)).is_err());
    }
}
