//! Weierstrass models `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6` and
//! admissible changes of variables.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Rational, RationalPolynomial, Scalar};

/// A nonsingular Weierstrass model over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    a: [Rational; 5],
}

/// The standard quantities attached to a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub discriminant: Rational,
    pub j: Rational,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn raw_invariants(a: &[Rational; 5]) -> (Rational, Rational, Rational, Rational, Rational, Rational, Rational) {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + q(4) * a2;
    let b4 = a1 * a3 + q(2) * a4;
    let b6 = a3 * a3 + q(4) * a6;
    let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - q(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + q(36) * &b2 * &b4 - q(216) * &b6;
    let disc = -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6;
    (b2, b4, b6, b8, c4, c6, disc)
}

impl WeierstrassModel {
    /// Builds `[a1, a2, a3, a4, a6]`; fails on a singular model.
    pub fn new(a: [Rational; 5]) -> Result<Self> {
        let disc = raw_invariants(&a).6;
        if disc.is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(WeierstrassModel { a })
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(q))
    }

    pub fn a_invariants(&self) -> &[Rational; 5] {
        &self.a
    }

    pub fn a1(&self) -> &Rational {
        &self.a[0]
    }
    pub fn a2(&self) -> &Rational {
        &self.a[1]
    }
    pub fn a3(&self) -> &Rational {
        &self.a[2]
    }
    pub fn a4(&self) -> &Rational {
        &self.a[3]
    }
    pub fn a6(&self) -> &Rational {
        &self.a[4]
    }

    pub fn invariants(&self) -> Invariants {
        let (b2, b4, b6, b8, c4, c6, discriminant) = raw_invariants(&self.a);
        let j = &c4 * &c4 * &c4 / &discriminant;
        Invariants { b2, b4, b6, b8, c4, c6, discriminant, j }
    }

    pub fn discriminant(&self) -> Rational {
        raw_invariants(&self.a).6
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.is_integer())
    }

    /// `F(x, y) = y² + a1·xy + a3·y − x³ − a2·x² − a4·x − a6`.
    pub fn equation<S: Scalar>(&self, x: &S, y: &S) -> S {
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = y.times(y).plus(&x.times(y).scale(a1)).plus(&y.scale(a3));
        let rhs = cubic(x, a2, a4, a6);
        lhs.minus(&rhs)
    }

    /// `∂F/∂x = a1·y − 3x² − 2a2·x − a4`.
    pub fn partial_x<S: Scalar>(&self, x: &S, y: &S) -> S {
        let [a1, a2, _, a4, _] = &self.a;
        y.scale(a1)
            .minus(&x.times(x).scale(&q(3)))
            .minus(&x.scale(&(q(2) * a2)))
            .minus(&x.embed(a4))
    }

    /// `∂F/∂y = 2y + a1·x + a3`, which is also `ψ₂`.
    pub fn partial_y<S: Scalar>(&self, x: &S, y: &S) -> S {
        let [a1, _, a3, _, _] = &self.a;
        y.scale(&q(2)).plus(&x.scale(a1)).plus(&x.embed(a3))
    }

    pub fn contains<S: Scalar>(&self, x: &S, y: &S) -> bool {
        self.equation(x, y).vanishes()
    }

    /// `x³ + a2·x² + a4·x + a6`.
    pub fn cubic_polynomial(&self) -> RationalPolynomial {
        let [_, a2, _, a4, a6] = &self.a;
        RationalPolynomial::new(vec![a6.clone(), a4.clone(), a2.clone(), Rational::one()])
    }

    /// `4x³ + b2·x² + 2b4·x + b6`, equal to `ψ₂²` on the curve and to the
    /// discriminant of the quadratic in `y`.
    pub fn two_torsion_polynomial(&self) -> RationalPolynomial {
        let inv = self.invariants();
        RationalPolynomial::new(vec![inv.b6, q(2) * inv.b4, inv.b2, q(4)])
    }
}

fn cubic<S: Scalar>(x: &S, a2: &Rational, a4: &Rational, a6: &Rational) -> S {
    let x2 = x.times(x);
    x2.times(x).plus(&x2.scale(a2)).plus(&x.scale(a4)).plus(&x.embed(a6))
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", a.join(", "))
    }
}

/// Standard invariants of a model; `1728Δ = c4³ − c6²`.
pub fn model_invariants(model: &WeierstrassModel) -> Invariants {
    model.invariants()
}

/// The substitution `x = u²x' + r`, `y = u³y' + s·u²x' + t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelTransform {
    pub u: Rational,
    pub r: Rational,
    pub s: Rational,
    pub t: Rational,
}

impl ModelTransform {
    pub fn new(u: Rational, r: Rational, s: Rational, t: Rational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::Domain("transform needs u ≠ 0".into()));
        }
        Ok(ModelTransform { u, r, s, t })
    }

    pub fn identity() -> Self {
        ModelTransform { u: q(1), r: q(0), s: q(0), t: q(0) }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn inverse(&self) -> Self {
        let ModelTransform { u, r, s, t } = self;
        let ui = u.recip();
        ModelTransform {
            r: -(r * &ui * &ui),
            s: -(s * &ui),
            t: (r * s - t) * &ui * &ui * &ui,
            u: ui,
        }
    }

    /// `self` followed by `next`, as a single transform from the source of
    /// `self` to the target of `next`.
    pub fn then(&self, next: &Self) -> Self {
        let (u1, r1, s1, t1) = (&self.u, &self.r, &self.s, &self.t);
        let (u2, r2, s2, t2) = (&next.u, &next.r, &next.s, &next.t);
        ModelTransform {
            u: u1 * u2,
            r: u1 * u1 * r2 + r1,
            s: u1 * s2 + s1,
            t: u1 * u1 * u1 * t2 + s1 * u1 * u1 * r2 + t1,
        }
    }

    /// Image of an affine point on the source model.
    pub fn map_xy<S: Scalar>(&self, x: &S, y: &S) -> (S, S) {
        let ui = self.u.recip();
        let dx = x.minus(&x.embed(&self.r));
        let x1 = dx.scale(&(&ui * &ui));
        let y1 = y.minus(&dx.scale(&self.s)).minus(&x.embed(&self.t)).scale(&(&ui * &ui * &ui));
        (x1, y1)
    }

    /// Transformed a-invariants.
    pub fn apply_to(&self, model: &WeierstrassModel) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = model.a_invariants();
        let ModelTransform { u, r, s, t } = self;
        let ui = u.recip();
        let na1 = (a1 + q(2) * s) * &ui;
        let na2 = (a2 - s * a1 + q(3) * r - s * s) * &ui * &ui;
        let na3 = (a3 + r * a1 + q(2) * t) * &ui * &ui * &ui;
        let na4 = (a4 - s * a3 + q(2) * r * a2 - (t + r * s) * a1 + q(3) * r * r - q(2) * s * t) * ui.pow(4);
        let na6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) * ui.pow(6);
        // A change of variables preserves nonsingularity.
        WeierstrassModel { a: [na1, na2, na3, na4, na6] }
    }
}

/// Result of moving a model along a transform, with the scaling of the
/// quantities that enter the stable height.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedModel {
    pub model: WeierstrassModel,
    pub transform: ModelTransform,
    /// `Δ' = u⁻¹²·Δ`.
    pub delta_scale: Rational,
    /// `ω' = u·ω`.
    pub omega_scale: Rational,
}

impl TransformedModel {
    /// `ψ_n = u^{n²−1}·ψ'_n` under the point map.
    pub fn psi_scale(&self, n: u64) -> Rational {
        self.transform.u.pow((n * n - 1) as i32)
    }
}

pub fn apply_transform(model: &WeierstrassModel, transform: &ModelTransform) -> Result<TransformedModel> {
    if transform.u.is_zero() {
        return Err(Error::Domain("transform needs u ≠ 0".into()));
    }
    Ok(TransformedModel {
        model: transform.apply_to(model),
        transform: transform.clone(),
        delta_scale: transform.u.pow(-12),
        omega_scale: transform.u.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn discriminants_of_reference_models() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap();
        let inv = e.invariants();
        assert_eq!(inv.discriminant, q(-(16 * 2187 * 1_771_561)));
        assert_eq!(q(1728) * &inv.discriminant, inv.c4.pow(3) - inv.c6.pow(2));
        let m = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        assert_eq!(m.discriminant(), q(343));
        let s = WeierstrassModel::from_i64([0, 0, 0, -595, -5586]).unwrap();
        assert_eq!(s.discriminant(), q(4096 * 343));
    }

    #[test]
    fn singular_model_is_rejected() {
        assert_eq!(WeierstrassModel::from_i64([0, 0, 0, 0, 0]), Err(Error::SingularModel));
        assert_eq!(WeierstrassModel::from_i64([0, 0, 0, -3, 2]), Err(Error::SingularModel));
    }

    #[test]
    fn transform_round_trip() {
        let e = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        let t = ModelTransform::new(rat(1, 2), rat(1, 4), rat(-1, 2), rat(-1, 8)).unwrap();
        let short = t.apply_to(&e);
        assert_eq!(short, WeierstrassModel::from_i64([0, 0, 0, -595, -5586]).unwrap());
        assert_eq!(t.inverse().apply_to(&short), e);
        assert!(t.then(&t.inverse()).is_identity());
        let out = apply_transform(&e, &t).unwrap();
        assert_eq!(&out.delta_scale * e.discriminant(), short.discriminant());
        assert!(apply_transform(&e, &ModelTransform { u: q(0), ..ModelTransform::identity() }).is_err());
    }

    #[test]
    fn composition_matches_sequential_application() {
        let e = WeierstrassModel::from_i64([1, 0, 1, -2, 3]).unwrap();
        let t1 = ModelTransform::new(rat(2, 1), rat(1, 1), rat(-1, 1), rat(3, 1)).unwrap();
        let t2 = ModelTransform::new(rat(-1, 3), rat(1, 2), rat(2, 1), rat(0, 1)).unwrap();
        assert_eq!(t2.apply_to(&t1.apply_to(&e)), t1.then(&t2).apply_to(&e));
        let (x, y) = (rat(1, 1), rat(0, 1));
        let (x1, y1) = t1.map_xy(&x, &y);
        let (x2, y2) = t2.map_xy(&x1, &y1);
        assert_eq!(t1.then(&t2).map_xy(&x, &y), (x2, y2));
    }
}
