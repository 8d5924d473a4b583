//! Dense univariate polynomials over any [`Scalar`] field.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{Rational, Scalar};

/// Coefficients stored lowest degree first; trailing zeros are trimmed so
/// the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

/// Univariate polynomial with rational coefficients.
pub type RationalPolynomial = Poly<Rational>;

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.vanishes()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// `c·X^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        if c.vanishes() {
            return Poly::zero();
        }
        let mut coeffs = vec![c.zero_like(); k];
        coeffs.push(c);
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Coefficient of `X^k`, `None` beyond the degree.
    pub fn coeff(&self, k: usize) -> Option<&S> {
        self.coeffs.get(k)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = c.plus(s);
        }
        Poly::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(Scalar::negate).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        Poly::new(coeffs)
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let Some(first) = self.coeffs.first() else {
            return if e == 0 { panic!("0^0 polynomial power") } else { Poly::zero() };
        };
        let mut acc = Poly::constant(first.one_like());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.coeffs[dd].recip().expect("non-zero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let zero = lead_inv.zero_like();
        let mut quot = vec![zero; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&lead_inv);
            if !c.vanishes() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].minus(&c.times(d));
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip().expect("non-zero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(i))))
                .collect(),
        )
    }

    /// Horner evaluation; `zero` supplies the additive identity for the
    /// zero polynomial.
    pub fn eval(&self, x: &S) -> S {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    /// `self(inner(X))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }
}

impl Poly<Rational> {
    /// The polynomial `X`.
    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    /// Evaluates at an element of another scalar field into which ℚ embeds.
    pub fn eval_in<T: Scalar>(&self, x: &T) -> T {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(&x.embed(c));
        }
        acc
    }

    /// Maps the coefficients into another scalar field.
    pub fn embed_into<T: Scalar>(&self, like: &T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| like.embed(c)).collect())
    }

    /// `self = c · P` with `P` primitive in ℤ[X] with positive leading
    /// coefficient. Panics on the zero polynomial.
    pub fn content_primitive(&self) -> (Rational, Vec<BigInt>) {
        assert!(!self.is_zero(), "content of the zero polynomial");
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rational::new(g, den), prim)
    }

    /// Primitive-PRS gcd through ℤ[X]; avoids the coefficient swell of
    /// rational Euclid on large inputs. Result is monic.
    pub fn gcd_fast(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (_, mut a) = self.content_primitive();
        let (_, mut b) = other.content_primitive();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !(b.len() == 1 && !b[0].is_zero()) && !b.is_empty() {
            let r = int_pseudo_rem(&a, &b);
            a = b;
            b = primitive_int(r);
        }
        if b.is_empty() {
            Poly::from_integers(&a).monic()
        } else {
            Poly::constant(Rational::one())
        }
    }

    /// Stable sort key: degree first, then coefficients from the top.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Coefficients as exact text, lowest degree first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &lr * bj;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn primitive_int(mut r: Vec<BigInt>) -> Vec<BigInt> {
    if r.is_empty() {
        return r;
    }
    let g = r.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in r.iter_mut() {
        *c /= &g;
    }
    r
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn p(c: &[i64]) -> RationalPolynomial {
        Poly::from_i64(c)
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 0, 1]); // x^3 - 1
        let b = p(&[-1, 1]); // x - 1
        let (q, r) = a.divrem(&b);
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
        let c = p(&[1, 0, 1]).mul(&b);
        assert_eq!(a.gcd(&c), b);
        assert_eq!(a.gcd_fast(&c), b);
    }

    #[test]
    fn content_and_display() {
        let f = Poly::new(vec![rat(-3, 2), rat(0, 1), rat(-9, 4)]);
        let (c, prim) = f.content_primitive();
        assert_eq!(c, rat(-3, 4));
        assert_eq!(prim, vec![BigInt::from(2), BigInt::from(0), BigInt::from(3)]);
        assert_eq!(p(&[9317, 726, 0, 1]).to_string(), "x^3 + 726*x + 9317");
        assert_eq!(Poly::new(vec![rat(1, 2), rat(-1, 1)]).to_string(), "-x + (1/2)");
    }

    #[test]
    fn derivative_and_compose() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.derivative(), p(&[2, 6]));
        assert_eq!(f.compose(&p(&[1, 1])), p(&[6, 8, 3]));
        assert_eq!(f.eval(&rat(2, 1)), rat(17, 1));
    }
}
