//! Residues `Res_Q(ψ_n⁻¹ω)` at torsion points and the stable height
//! `H^st(Q) = ((−1)^{n+1}·n·Res_Q(ψ_n⁻¹ω))^{1/n²}·Δ^{1/12}` in `ℚ⊗ℚ̄^×`.

use std::fmt;

use num_bigint::BigInt;

use crate::curve::{
    laurent_at_infinity, CurvePoint, DivisionPolynomials, LaurentSeries, ModelTransform, WeierstrassModel,
};
use crate::error::{Error, Result};
use crate::exact::{
    radical_equal, radical_rational_part, radical_valuation, FormalRadical, PrimeExponentMap, Rational,
    RationalPolynomial, Scalar, TowerElement,
};

/// Residue data for one torsion point and one annihilating `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueRecord {
    pub n: u64,
    pub residue: TowerElement,
    /// `(−1)^{n+1}·n·residue`.
    pub alpha: TowerElement,
}

/// `H^st(Q)` as a formal radical, with its rational value when it has one.
#[derive(Clone, Debug, PartialEq)]
pub struct HstValue {
    pub radical: FormalRadical,
    pub rational_part: Option<PrimeExponentMap>,
}

impl HstValue {
    fn from_radical(radical: FormalRadical) -> Result<Self> {
        let rational_part = radical_rational_part(&radical)?;
        Ok(HstValue { radical, rational_part })
    }

    pub fn is_rational(&self) -> bool {
        self.rational_part.is_some()
    }

    /// `v_ℓ(H^st)` when the value is rational.
    pub fn valuation(&self, ell: &BigInt) -> Option<Rational> {
        self.rational_part.as_ref().map(|m| radical_valuation(m, ell))
    }

    /// Same element of `ℚ⊗ℚ̄^×`.
    pub fn equals(&self, other: &HstValue) -> Result<bool> {
        radical_equal(&self.radical, &other.radical)
    }
}

impl fmt::Display for HstValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rational_part {
            Some(m) if m.is_empty() => write!(f, "1"),
            Some(m) => {
                let parts: Vec<String> = m.iter().map(|(p, e)| format!("{p}^({e})")).collect();
                write!(f, "{}", parts.join(" * "))
            }
            None => write!(f, "{}", self.radical),
        }
    }
}

fn sign(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(if n % 2 == 1 { 1 } else { -1 }))
}

fn torsion_coordinates<'a>(psi: &DivisionPolynomials, q: &'a CurvePoint<TowerElement>, n: u64) -> Result<(&'a TowerElement, &'a TowerElement)> {
    let (x, y) = q.coordinates().ok_or_else(|| Error::Domain("the point at infinity has no residue".into()))?;
    if n == 0 || !psi.eval(n, x, y).vanishes() {
        return Err(Error::Domain(format!("point is not killed by {n}")));
    }
    Ok((x, y))
}

/// `Res_Q(ψ_n⁻¹ω) = 1/(g_x·F_y − g_y·F_x)(Q)` for `g = ψ_n`.
pub fn residue_with(psi: &DivisionPolynomials, q: &CurvePoint<TowerElement>, n: u64) -> Result<TowerElement> {
    let (x, y) = torsion_coordinates(psi, q, n)?;
    let model = psi.model();
    let (gx, gy) = psi.get(n)?.gradient(model, x, y);
    residue_of_gradient(model, x, y, &gx, &gy)
}

fn residue_of_gradient(
    model: &WeierstrassModel,
    x: &TowerElement,
    y: &TowerElement,
    gx: &TowerElement,
    gy: &TowerElement,
) -> Result<TowerElement> {
    let jac = gx.times(&model.partial_y(x, y)).minus(&gy.times(&model.partial_x(x, y)));
    jac.recip().ok_or_else(|| Error::Domain("the function does not have a simple zero at the point".into()))
}

pub fn residue_at_torsion(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, n: u64) -> Result<TowerElement> {
    residue_with(&DivisionPolynomials::new(model), q, n)
}

pub fn residue_record(psi: &DivisionPolynomials, q: &CurvePoint<TowerElement>, n: u64) -> Result<ResidueRecord> {
    let residue = residue_with(psi, q, n)?;
    let alpha = residue.scale(&(sign(n) * Rational::from_integer(BigInt::from(n))));
    Ok(ResidueRecord { n, residue, alpha })
}

/// The same residue read off from Laurent series: translate the expansion
/// at `∞` by `Q` with the group law, and take the `t⁻¹` coefficient of
/// `(ω/dt)/ψ_n(P(t) + Q)`.
pub fn residue_oracle_series(
    model: &WeierstrassModel,
    q: &CurvePoint<TowerElement>,
    n: u64,
    precision: usize,
) -> Result<TowerElement> {
    let psi = DivisionPolynomials::new(model);
    let (xq, yq) = torsion_coordinates(&psi, q, n)?;
    let one = xq.one_like();
    let ex = laurent_at_infinity(model, precision)?;
    let x1 = ex.x.embed_into(&one);
    let y1 = ex.y.embed_into(&one);
    let omega = ex.omega.embed_into(&one);
    let prec = x1.precision();
    let cx = LaurentSeries::constant(xq.clone(), prec);
    let cy = LaurentSeries::constant(yq.clone(), prec);
    let inv = x1.sub(&cx).inverse()?;
    let lambda = y1.sub(&cy).mul(&inv);
    let nu = cy.mul(&x1).sub(&y1.mul(&cx)).mul(&inv);
    let [a1, a2, a3, _, _] = model.a_invariants();
    let x3 = lambda
        .mul(&lambda)
        .add(&lambda.scale_rational(a1))
        .add_constant(&one.embed(&-a2.clone()))
        .sub(&x1)
        .sub(&cx);
    let y3 = lambda.add_constant(&one.embed(a1)).mul(&x3).neg().sub(&nu).add_constant(&one.embed(&-a3.clone()));
    let d = psi.get(n)?;
    let mut g = x3.eval_polynomial(&d.x_part);
    if d.y_factor {
        let psi2 = y3
            .scale_rational(&Rational::from_integer(BigInt::from(2)))
            .add(&x3.scale_rational(a1))
            .add_constant(&one.embed(a3));
        g = g.mul(&psi2);
    }
    if g.leading().is_none() {
        return Err(Error::Precision(format!("ψ_{n} translated by Q is zero to precision {precision}")));
    }
    let integrand = g.inverse()?.mul(&omega);
    integrand
        .coeff(-1)
        .ok_or_else(|| Error::Precision(format!("precision {precision} too small for the residue")))
}

/// `H^st(Q)` from `ψ_n`, for any `n` killing `Q`.
pub fn hst_with(psi: &DivisionPolynomials, q: &CurvePoint<TowerElement>, n: u64) -> Result<HstValue> {
    let rec = residue_record(psi, q, n)?;
    let e = Rational::new(BigInt::from(1), BigInt::from(n * n));
    let radical = FormalRadical::algebraic(rec.alpha, e)?.mul(&delta_twelfth(psi.model())?);
    HstValue::from_radical(radical)
}

fn delta_twelfth(model: &WeierstrassModel) -> Result<FormalRadical> {
    FormalRadical::rational(model.discriminant(), Rational::new(BigInt::from(1), BigInt::from(12)))
}

pub fn hst_of_point(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, n: u64) -> Result<HstValue> {
    hst_with(&DivisionPolynomials::new(model), q, n)
}

/// A regular function `g = a(x) + b(x)·y` on the affine curve.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelFunction {
    pub x_part: RationalPolynomial,
    pub y_part: RationalPolynomial,
}

impl KernelFunction {
    /// `c·ψ_n`.
    pub fn from_division_polynomial(psi: &DivisionPolynomials, n: u64, c: &Rational) -> Result<Self> {
        let d = psi.get(n)?;
        let model = psi.model();
        if !d.y_factor {
            return Ok(KernelFunction { x_part: d.x_part.scale(c), y_part: RationalPolynomial::zero() });
        }
        let lin = RationalPolynomial::new(vec![model.a3().clone(), model.a1().clone()]);
        Ok(KernelFunction {
            x_part: d.x_part.mul(&lin).scale(c),
            y_part: d.x_part.scale(&(c * Rational::from_integer(BigInt::from(2)))),
        })
    }

    pub fn eval<S: Scalar>(&self, x: &S, y: &S) -> S {
        self.x_part.eval_in(x).plus(&self.y_part.eval_in(x).times(y))
    }

    fn gradient<S: Scalar>(&self, x: &S, y: &S) -> (S, S) {
        let gx = self.x_part.derivative().eval_in(x).plus(&self.y_part.derivative().eval_in(x).times(y));
        (gx, self.y_part.eval_in(x))
    }
}

/// `H^st(Q) = Res_Q(g⁻¹ω)^{1/d}·Δ^{1/12}` for a function `g` with divisor
/// `ker(φ) − d·∞` whose expansion at `∞` starts with `t^{1−d}`.
pub fn hst_via_kernel_function(
    model: &WeierstrassModel,
    g: &KernelFunction,
    d: u64,
    q: &CurvePoint<TowerElement>,
) -> Result<HstValue> {
    if d == 0 {
        return Err(Error::Input("isogeny degree must be positive".into()));
    }
    let ex = laurent_at_infinity(model, 4)?;
    let series = ex.x.eval_polynomial(&g.x_part).add(&ex.y.mul(&ex.x.eval_polynomial(&g.y_part)));
    let expected = 1 - d as i64;
    match series.leading() {
        Some((v, c)) if v == expected && *c == Rational::from_integer(BigInt::from(1)) => {}
        other => {
            return Err(Error::Input(format!(
                "kernel function must start with t^{expected} at infinity, found {other:?}"
            )))
        }
    }
    let (x, y) = q.coordinates().ok_or_else(|| Error::Domain("the point at infinity has no residue".into()))?;
    if !g.eval(x, y).vanishes() {
        return Err(Error::Domain("point is not a zero of the kernel function".into()));
    }
    let (gx, gy) = g.gradient(x, y);
    let res = residue_of_gradient(model, x, y, &gx, &gy)?;
    let e = Rational::new(BigInt::from(1), BigInt::from(d));
    HstValue::from_radical(FormalRadical::algebraic(res, e)?.mul(&delta_twelfth(model)?))
}

/// `mn·Res(ψ_{mn}) = (−1)^{m+1}·(n·Res(ψ_n))^{m²}` exactly.
pub fn residue_compatibility_check(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, n: u64, m: u64) -> Result<bool> {
    let psi = DivisionPolynomials::new(model);
    compatibility_with(&psi, q, n, m)
}

pub fn compatibility_with(psi: &DivisionPolynomials, q: &CurvePoint<TowerElement>, n: u64, m: u64) -> Result<bool> {
    let r_n = residue_with(psi, q, n)?;
    let r_mn = residue_with(psi, q, m * n)?;
    let lhs = r_mn.scale(&Rational::from_integer(BigInt::from(m * n)));
    let base = r_n.scale(&Rational::from_integer(BigInt::from(n)));
    let rhs = base.pow_i((m * m) as i64).expect("non-zero").scale(&sign(m));
    Ok(lhs == rhs)
}

/// `H^st` computed on the model and on its image under `t` agree.
pub fn hst_invariance_check(
    model: &WeierstrassModel,
    t: &ModelTransform,
    q: &CurvePoint<TowerElement>,
    n: u64,
) -> Result<bool> {
    let (x, y) = q.coordinates().ok_or_else(|| Error::Domain("the point at infinity has no residue".into()))?;
    let image = t.apply_to(model);
    let (x2, y2) = t.map_xy(x, y);
    let q2 = image.point(x2, y2)?;
    let before = hst_of_point(model, q, n)?;
    let after = hst_of_point(&image, &q2, n)?;
    before.equals(&after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, NumberTower};

    fn e8712_point() -> (WeierstrassModel, CurvePoint<TowerElement>) {
        let e = WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap();
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[3, 0, 1]));
        let x = k.base_element(RationalPolynomial::new(vec![rat(11, 2), rat(33, 2)]));
        let q = e.point(x, k.zero()).unwrap();
        (e, q)
    }

    fn short_49a3_point() -> (WeierstrassModel, CurvePoint<TowerElement>) {
        let e = WeierstrassModel::from_i64([0, 0, 0, -595, -5586]).unwrap();
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[-7, 0, 1]));
        let x = k.base_element(RationalPolynomial::from_i64(&[7, 8]));
        let q = e.point(x, k.zero()).unwrap();
        (e, q)
    }

    #[test]
    fn residue_on_8712_u5() {
        let (e, q) = e8712_point();
        let s = q.coordinates().unwrap().0.tower().generator(); // √−3
        let res = residue_at_torsion(&e, &q, 2).unwrap();
        // (1/(2·3²·11²·√−3))·((1−√−3)/2)
        let expected = s
            .scale(&rat(2 * 9 * 121, 1))
            .recip()
            .unwrap()
            .times(&s.negate().plus(&s.one_like()).scale(&rat(1, 2)));
        assert_eq!(res, expected);
        assert_eq!(residue_oracle_series(&e, &q, 2, 8).unwrap(), res);
    }

    #[test]
    fn residue_on_short_49a3() {
        let (e, q) = short_49a3_point();
        let s = q.coordinates().unwrap().0.tower().generator(); // √7
        let res = residue_at_torsion(&e, &q, 2).unwrap();
        let expected = s.scale(&rat(3, 1)).plus(&s.embed(&rat(8, 1))).scale(&rat(32 * 7, 1)).recip().unwrap();
        assert_eq!(res, expected);
        assert_eq!(residue_oracle_series(&e, &q, 2, 8).unwrap(), res);
    }

    #[test]
    fn hst_values() {
        let (e, q) = e8712_point();
        let h = hst_of_point(&e, &q, 2).unwrap();
        let m = h.rational_part.clone().unwrap();
        assert_eq!(m, PrimeExponentMap::from([(BigInt::from(2), rat(1, 3)), (BigInt::from(3), rat(-1, 24))]));
        assert!(h.equals(&hst_of_point(&e, &q, 4).unwrap()).unwrap());

        let (e, q) = short_49a3_point();
        let h = hst_of_point(&e, &q, 2).unwrap();
        assert!(!h.is_rational());
        let s = q.coordinates().unwrap().0.tower().generator();
        let expected = FormalRadical::algebraic(s.scale(&rat(3, 1)).plus(&s.embed(&rat(8, 1))), rat(-1, 4)).unwrap();
        assert!(radical_equal(&h.radical, &expected).unwrap());
    }

    #[test]
    fn rational_two_torsion_oracle() {
        let e = WeierstrassModel::from_i64([0, 0, 0, -1, 0]).unwrap();
        let k = NumberTower::rational();
        let q = e.point(k.zero(), k.zero()).unwrap();
        let res = residue_at_torsion(&e, &q, 2).unwrap();
        assert_eq!(res.as_rational(), Some(rat(-1, 2)));
        assert_eq!(residue_oracle_series(&e, &q, 2, 6).unwrap(), res);
    }

    #[test]
    fn not_torsion_is_rejected() {
        let (e, q) = e8712_point();
        assert!(matches!(residue_at_torsion(&e, &q, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn compatibility_and_invariance() {
        let (e, q) = e8712_point();
        assert!(residue_compatibility_check(&e, &q, 2, 1).unwrap());
        assert!(residue_compatibility_check(&e, &q, 2, 2).unwrap());
        let (e2, q2) = short_49a3_point();
        assert!(residue_compatibility_check(&e2, &q2, 2, 3).unwrap());
        let t = ModelTransform::new(rat(3, 1), rat(0, 1), rat(0, 1), rat(0, 1)).unwrap();
        assert!(hst_invariance_check(&e, &t, &q, 2).unwrap());
        assert!(hst_invariance_check(&e, &ModelTransform::identity(), &q, 2).unwrap());
        let back = ModelTransform::new(rat(1, 2), rat(1, 4), rat(-1, 2), rat(-1, 8)).unwrap().inverse();
        assert!(hst_invariance_check(&e2, &back, &q2, 2).unwrap());
    }

    #[test]
    fn kernel_function_variant() {
        let (e, q) = e8712_point();
        let psi = DivisionPolynomials::new(&e);
        let g = KernelFunction::from_division_polynomial(&psi, 2, &rat(-1, 2)).unwrap();
        let via = hst_via_kernel_function(&e, &g, 4, &q).unwrap();
        assert!(via.equals(&hst_of_point(&e, &q, 2).unwrap()).unwrap());
        let wrong = KernelFunction::from_division_polynomial(&psi, 2, &rat(-1, 1)).unwrap();
        assert!(matches!(hst_via_kernel_function(&e, &wrong, 4, &q), Err(Error::Input(_))));
    }
}
