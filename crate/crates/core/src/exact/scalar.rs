use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, canonically reduced with positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"-37"`, `"1/2"` or `"−5"` (unicode minus) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let cleaned: String = text.trim().replace('−', "-").chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Input(format!("not an exact rational: {text:?}"));
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().map_err(|_| bad())?, d.parse::<BigInt>().map_err(|_| bad())?),
        None => (cleaned.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `v_p(n)` for a non-zero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q)`, or `None` for zero.
pub fn valuation(q: &Rational, p: &BigInt) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

/// Field operations needed by the generic polynomial and series code.
///
/// Tower elements carry their field, so the neutral elements are produced
/// from an existing value rather than from a constant.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn embed(&self, q: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn recip(&self) -> Option<Self>;

    /// Whether both values live in the same field (always true for ℚ).
    fn same_field(&self, _other: &Self) -> bool {
        true
    }

    fn is_unity(&self) -> bool {
        *self == self.one_like()
    }

    fn scale(&self, q: &Rational) -> Self {
        self.times(&self.embed(q))
    }

    /// Integer power; `None` for a negative power of zero.
    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.times(&sq);
            }
        }
        Some(acc)
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn embed(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(num_rational::Ratio::recip(self))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_and_fractional_text() {
        assert_eq!(parse_rational("-37").unwrap(), int(-37));
        assert_eq!(parse_rational("−37").unwrap(), int(-37));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn valuations() {
        let two = BigInt::from(2);
        assert_eq!(valuation(&rat(12, 5), &two), Some(2));
        assert_eq!(valuation(&rat(3, 40), &two), Some(-3));
        assert_eq!(valuation(&int(0), &two), None);
    }

    #[test]
    fn powers() {
        assert_eq!(Scalar::pow_i(&rat(2, 3), 3), Some(rat(8, 27)));
        assert_eq!(Scalar::pow_i(&rat(2, 3), -2), Some(rat(9, 4)));
        assert_eq!(Scalar::pow_i(&int(0), -1), None);
    }
}
