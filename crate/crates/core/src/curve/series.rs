//! Truncated Laurent series and the expansion of a Weierstrass model at
//! `∞` in the parameter `t = −x/y`.

use num_bigint::BigInt;

use super::divpoly::DivisionPolynomials;
use super::model::WeierstrassModel;
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalPolynomial, Scalar};

/// `Σ_{k=val}^{prec−1} c_k t^k + O(t^prec)`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<S> {
    val: i64,
    coeffs: Vec<S>,
    prec: i64,
    one: S,
}

impl<S: Scalar> LaurentSeries<S> {
    /// Coefficients starting at `t^val`, known up to (excluding) `t^prec`;
    /// extra coefficients are dropped, missing ones are zero.
    pub fn new(val: i64, mut coeffs: Vec<S>, prec: i64, one: &S) -> Self {
        let len = (prec - val).max(0) as usize;
        coeffs.truncate(len);
        while coeffs.len() < len {
            coeffs.push(one.zero_like());
        }
        let mut s = LaurentSeries { val, coeffs, prec, one: one.one_like() };
        s.normalize();
        s
    }

    pub fn constant(c: S, prec: i64) -> Self {
        let one = c.one_like();
        Self::new(0, vec![c], prec, &one)
    }

    /// `c·t^k + O(t^prec)`.
    pub fn monomial(c: S, k: i64, prec: i64) -> Self {
        let one = c.one_like();
        Self::new(k, vec![c], prec, &one)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.vanishes()).unwrap_or(self.coeffs.len());
        self.coeffs.drain(..lead);
        self.val += lead as i64;
    }

    /// Exponent of the first non-zero known coefficient; equals the
    /// precision for a series that is zero to known order.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`; `None` beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<S> {
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(self.one.zero_like());
        }
        Some(self.coeffs[(k - self.val) as usize].clone())
    }

    pub fn leading(&self) -> Option<(i64, &S)> {
        self.coeffs.first().map(|c| (self.val, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.val, self.coeffs.clone(), prec.min(self.prec), &self.one)
    }

    pub fn add(&self, other: &Self) -> Self {
        let val = self.val.min(other.val);
        let prec = self.prec.min(other.prec);
        let coeffs = (val..prec)
            .map(|k| self.coeff(k).unwrap().plus(&other.coeff(k).unwrap()))
            .collect();
        Self::new(val, coeffs, prec, &self.one)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|c| c.negate()).collect(), self.prec, &self.one)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|a| a.times(c)).collect(), self.prec, &self.one)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|a| a.scale(c)).collect(), self.prec, &self.one)
    }

    pub fn add_constant(&self, c: &S) -> Self {
        self.add(&Self::constant(c.clone(), self.prec.max(1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let val = self.val + other.val;
        let prec = (self.val + other.prec).min(other.val + self.prec);
        let len = (prec - val).max(0) as usize;
        let mut coeffs = vec![self.one.zero_like(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.vanishes() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        Self::new(val, coeffs, prec, &self.one)
    }

    /// Multiplicative inverse; fails when no coefficient is known to be
    /// non-zero.
    pub fn inverse(&self) -> Result<Self> {
        let Some((v, lead)) = self.leading() else {
            return Err(Error::Precision("series is zero to known precision".into()));
        };
        let inv0 = lead.recip().expect("non-zero leading coefficient");
        let rel = (self.prec - v) as usize;
        let mut out: Vec<S> = Vec::with_capacity(rel);
        for k in 0..rel {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut acc = self.one.zero_like();
            for j in 1..=k {
                acc = acc.plus(&self.coeffs[j].times(&out[k - j]));
            }
            out.push(acc.times(&inv0).negate());
        }
        Ok(Self::new(-v, out, -v + rel as i64, &self.one))
    }

    /// `d/dt`.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rational::from_integer(BigInt::from(self.val + i as i64))))
            .collect();
        Self::new(self.val - 1, coeffs, self.prec - 1, &self.one)
    }

    /// `p(self)` for a rational polynomial `p`, by Horner's rule.
    pub fn eval_polynomial(&self, p: &RationalPolynomial) -> Self {
        let coeffs = p.coeffs();
        let Some((top, rest)) = coeffs.split_last() else {
            return Self::new(0, Vec::new(), self.prec.max(1), &self.one);
        };
        if rest.is_empty() {
            return Self::constant(self.one.embed(top), self.prec.max(1));
        }
        let mut acc = self.scale(&self.one.embed(top));
        for (k, c) in rest.iter().enumerate().rev() {
            acc = acc.add_constant(&self.one.embed(c));
            if k > 0 {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// Moves the coefficients into another field.
    pub fn map<T: Scalar>(&self, one: &T, f: impl Fn(&S) -> T) -> LaurentSeries<T> {
        LaurentSeries::new(self.val, self.coeffs.iter().map(f).collect(), self.prec, one)
    }
}

impl LaurentSeries<Rational> {
    pub fn embed_into<T: Scalar>(&self, one: &T) -> LaurentSeries<T> {
        self.map(one, |c| one.embed(c))
    }
}

/// `x(t)`, `y(t)` and `ω/dt` at `∞`.
#[derive(Clone, Debug)]
pub struct InfinityExpansion {
    pub x: LaurentSeries<Rational>,
    pub y: LaurentSeries<Rational>,
    pub omega: LaurentSeries<Rational>,
}

/// Expansion at `∞` with at least `precision` known coefficients in each
/// of `x(t)`, `y(t)` and `ω/dt`. The function `u = −1/y` is the fixpoint of
/// `u = t³ + a1·t·u + a2·t²·u + a3·u² + a4·t·u² + a6·u³`, iterated from `t³`.
pub fn laurent_at_infinity(model: &WeierstrassModel, precision: usize) -> Result<InfinityExpansion> {
    if precision == 0 {
        return Err(Error::Domain("precision must be positive".into()));
    }
    let n = precision as i64 + 3;
    let one = Rational::from_integer(BigInt::from(1));
    let [a1, a2, a3, a4, a6] = model.a_invariants();
    let t = LaurentSeries::monomial(one.clone(), 1, n);
    let t2 = t.mul(&t);
    let t3 = t2.mul(&t);
    let mut u = t3.clone();
    loop {
        let u2 = u.mul(&u);
        let next = t3
            .add(&t.mul(&u).scale(a1))
            .add(&t2.mul(&u).scale(a2))
            .add(&u2.scale(a3))
            .add(&t.mul(&u2).scale(a4))
            .add(&u2.mul(&u).scale(a6))
            .truncate(n);
        if next == u {
            break;
        }
        u = next;
    }
    let inv_u = u.inverse()?;
    let x = t.mul(&inv_u);
    let y = inv_u.neg();
    let denom = y.scale_rational(&Rational::from_integer(BigInt::from(2))).add(&x.scale(a1)).add_constant(a3);
    let omega = x.derivative().mul(&denom.inverse()?);
    Ok(InfinityExpansion { x, y, omega })
}

/// `ψ_n(x(t), y(t))` as a Laurent series at `∞`.
pub fn division_polynomial_at_infinity(
    psi: &DivisionPolynomials,
    n: u64,
    expansion: &InfinityExpansion,
) -> Result<LaurentSeries<Rational>> {
    let d = psi.get(n)?;
    let base = expansion.x.eval_polynomial(&d.x_part);
    if !d.y_factor {
        return Ok(base);
    }
    let model = psi.model();
    let psi2 = expansion
        .y
        .scale_rational(&Rational::from_integer(BigInt::from(2)))
        .add(&expansion.x.scale(model.a1()))
        .add_constant(model.a3());
    Ok(base.mul(&psi2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn series_inverse_and_product() {
        let one = rat(1, 1);
        // 1 - t
        let s = LaurentSeries::new(0, vec![one.clone(), rat(-1, 1)], 6, &one);
        let inv = s.inverse().unwrap();
        for k in 0..6 {
            assert_eq!(inv.coeff(k), Some(one.clone()));
        }
        let prod = s.mul(&inv);
        assert_eq!(prod.leading(), Some((0, &one)));
        assert_eq!(prod.coeff(3), Some(rat(0, 1)));
        let zero = LaurentSeries::new(0, vec![], 4, &one);
        assert!(zero.inverse().is_err());
    }

    #[test]
    fn leading_terms_at_infinity() {
        let e = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        let ex = laurent_at_infinity(&e, 10).unwrap();
        assert_eq!(ex.x.leading(), Some((-2, &rat(1, 1))));
        assert_eq!(ex.y.leading(), Some((-3, &rat(-1, 1))));
        assert_eq!(ex.omega.leading(), Some((0, &rat(1, 1))));
        assert!(ex.x.precision() - ex.x.valuation() >= 10);
        assert!(ex.omega.precision() >= 10);
        // The expansion satisfies the curve equation to its precision.
        let f = ex
            .y
            .mul(&ex.y)
            .add(&ex.x.mul(&ex.y).scale(e.a1()))
            .sub(&ex.x.eval_polynomial(&e.cubic_polynomial()));
        assert!(f.is_zero_to_precision());
    }

    #[test]
    fn division_polynomial_leading_terms() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap();
        let psi = DivisionPolynomials::new(&e);
        let ex = laurent_at_infinity(&e, 4).unwrap();
        for n in 1..=6i64 {
            let s = division_polynomial_at_infinity(&psi, n as u64, &ex).unwrap();
            let sign = if n % 2 == 1 { 1 } else { -1 };
            assert_eq!(s.leading(), Some((1 - n * n, &rat(sign * n, 1))), "n = {n}");
        }
    }
}
