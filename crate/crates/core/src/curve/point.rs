//! The group law over any field containing the coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::model::WeierstrassModel;
use crate::error::{Error, Result};
use crate::exact::primes::squarefree_part;
use crate::exact::{NumberTower, Rational, RationalPolynomial, Scalar, TowerElement};

#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint<S> {
    Infinity,
    Affine { x: S, y: S },
}

impl<S: Scalar> CurvePoint<S> {
    pub fn affine(x: S, y: S) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn coordinates(&self) -> Option<(&S, &S)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

impl WeierstrassModel {
    /// Checks an affine point against the equation.
    pub fn point<S: Scalar>(&self, x: S, y: S) -> Result<CurvePoint<S>> {
        if !x.same_field(&y) {
            return Err(Error::Capability("coordinates live in different fields".into()));
        }
        if !self.contains(&x, &y) {
            return Err(Error::Domain("point is not on the curve".into()));
        }
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn negate<S: Scalar>(&self, p: &CurvePoint<S>) -> CurvePoint<S> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let y2 = y.negate().minus(&x.scale(self.a1())).minus(&x.embed(self.a3()));
                CurvePoint::Affine { x: x.clone(), y: y2 }
            }
        }
    }

    pub fn add<S: Scalar>(&self, p: &CurvePoint<S>, q: &CurvePoint<S>) -> Result<CurvePoint<S>> {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return Ok(q.clone()),
            (_, CurvePoint::Infinity) => return Ok(p.clone()),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if !x1.same_field(x2) {
            return Err(Error::Capability("points live in different fields".into()));
        }
        let [a1, a2, a3, a4, a6] = self.a_invariants();
        let two = Rational::from_integer(BigInt::from(2));
        let three = Rational::from_integer(BigInt::from(3));
        let (lambda, nu) = if x1 != x2 {
            let dx = x2.minus(x1).recip().expect("distinct x");
            let lambda = y2.minus(y1).times(&dx);
            let nu = y1.times(x2).minus(&y2.times(x1)).times(&dx);
            (lambda, nu)
        } else {
            let denom = y1.plus(y2).plus(&x2.scale(a1)).plus(&x2.embed(a3));
            if denom.vanishes() {
                return Ok(CurvePoint::Infinity);
            }
            // x1 == x2 and the points are not opposite, so they are equal.
            let inv = y1.scale(&two).plus(&x1.scale(a1)).plus(&x1.embed(a3)).recip().expect("non-zero");
            let x1sq = x1.times(x1);
            let lambda = x1sq
                .scale(&three)
                .plus(&x1.scale(&(&two * a2)))
                .plus(&x1.embed(a4))
                .minus(&y1.scale(a1))
                .times(&inv);
            let nu = x1sq
                .times(x1)
                .negate()
                .plus(&x1.scale(a4))
                .plus(&x1.embed(&(&two * a6)))
                .minus(&y1.scale(a3))
                .times(&inv);
            (lambda, nu)
        };
        let x3 = lambda.times(&lambda).plus(&lambda.scale(a1)).minus(&x1.embed(a2)).minus(x1).minus(x2);
        let y3 = lambda.plus(&x1.embed(a1)).times(&x3).negate().minus(&nu).minus(&x1.embed(a3));
        Ok(CurvePoint::Affine { x: x3, y: y3 })
    }

    /// `[n]P` by double-and-add; negative `n` negates.
    pub fn mul<S: Scalar>(&self, n: i64, p: &CurvePoint<S>) -> Result<CurvePoint<S>> {
        let mut acc = CurvePoint::Infinity;
        let mut base = if n < 0 { self.negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// Exact order of a torsion point, trying `n ≤ bound`.
    pub fn order_up_to<S: Scalar>(&self, p: &CurvePoint<S>, bound: u64) -> Result<Option<u64>> {
        let mut q = p.clone();
        for n in 1..=bound {
            if q.is_infinity() {
                return Ok(Some(n));
            }
            q = self.add(&q, p)?;
        }
        Ok(None)
    }
}

pub fn point_add<S: Scalar>(model: &WeierstrassModel, p: &CurvePoint<S>, q: &CurvePoint<S>) -> Result<CurvePoint<S>> {
    model.add(p, q)
}

pub fn point_mul<S: Scalar>(model: &WeierstrassModel, n: i64, p: &CurvePoint<S>) -> Result<CurvePoint<S>> {
    model.mul(n, p)
}

/// Rational points with `x = a/b`, `|a| ≤ bound`, `1 ≤ b ≤ bound`,
/// one per `x` (the one with the larger `y`), ordered by denominator then numerator.
pub fn small_rational_points(model: &WeierstrassModel, bound: i64) -> Vec<CurvePoint<Rational>> {
    let disc = model.two_torsion_polynomial();
    let mut out = Vec::new();
    for b in 1..=bound {
        for a in -bound..=bound {
            if BigInt::from(a).gcd(&BigInt::from(b)) != BigInt::one() {
                continue;
            }
            let x = Rational::new(BigInt::from(a), BigInt::from(b));
            let d = disc.eval(&x);
            if d.is_negative() {
                continue;
            }
            let (Some(n), Some(m)) = (exact_sqrt(d.numer()), exact_sqrt(d.denom())) else {
                continue;
            };
            let s = Rational::new(n, m);
            let y = (-(model.a1() * &x) - model.a3() + s) / Rational::from_integer(BigInt::from(2));
            out.push(CurvePoint::Affine { x, y });
        }
    }
    out
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// A point with the given rational `x`, with `y` in ℚ or in the quadratic
/// field `ℚ(√D)` cut out by the curve, expressed in a base-only tower.
pub fn point_over_quadratic_field(model: &WeierstrassModel, x: &Rational) -> Result<CurvePoint<TowerElement>> {
    let d = model.two_torsion_polynomial().eval(x);
    let two = Rational::from_integer(BigInt::from(2));
    let offset = -(model.a1() * x) - model.a3();
    if d.is_zero() {
        let k = NumberTower::rational();
        return model.point(k.from_rational(x), k.from_rational(&(offset / two)));
    }
    // d = D·m² with D a squarefree integer.
    let num_den = d.numer() * d.denom();
    let core = squarefree_part(&num_den);
    let m_sq = Rational::from_integer(num_den.clone()) / Rational::from_integer(core.clone()) / Rational::from_integer(d.denom().pow(2));
    let m = Rational::new(exact_sqrt(m_sq.numer()).unwrap(), exact_sqrt(m_sq.denom()).unwrap());
    if core.is_one() {
        let k = NumberTower::rational();
        return model.point(k.from_rational(x), k.from_rational(&((offset + m) / two)));
    }
    let k = NumberTower::from_irreducible(RationalPolynomial::new(vec![
        Rational::from_integer(-core),
        Rational::zero(),
        Rational::one(),
    ]));
    let y = k.generator().scale(&m).plus(&k.from_rational(&offset)).scale(&two.recip());
    model.point(k.from_rational(x), y)
}
