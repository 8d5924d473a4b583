//! The `𝔾_m`-torsor attached to `O(∞)`, glued from the charts
//! `(x, y, z)` over the affine curve and `(t, u, w)` near infinity with
//! `t = −x/y`, `u = −1/y`, `w = t·z`, and its self-maps `β_n` lying over
//! `[n]` and under `[n²]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{point_over_quadratic_field, CurvePoint, DivisionPolynomials, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational, Scalar, TowerElement};

#[derive(Clone, Debug, PartialEq)]
pub enum TorsorPoint<S> {
    Affine { x: S, y: S, z: S },
    Infinity { t: S, u: S, w: S },
}

impl<S: Scalar> TorsorPoint<S> {
    /// The base point `(0, 0, 1)` in the chart at infinity.
    pub fn base_point(one: &S) -> Self {
        TorsorPoint::Infinity { t: one.zero_like(), u: one.zero_like(), w: one.one_like() }
    }

    /// Whether the point lies in the fibre over `∞`.
    pub fn over_infinity(&self) -> bool {
        matches!(self, TorsorPoint::Infinity { t, u, .. } if t.vanishes() && u.vanishes())
    }

    /// `(x, y, z)` coordinates, when the point lies over the affine curve.
    pub fn affine_coordinates(&self) -> Option<(S, S, S)> {
        match self {
            TorsorPoint::Affine { x, y, z } => Some((x.clone(), y.clone(), z.clone())),
            TorsorPoint::Infinity { t, u, w } => {
                let ui = u.recip()?;
                let ti = t.recip()?;
                Some((t.times(&ui), ui.negate(), w.times(&ti)))
            }
        }
    }

    /// `(t, u, w)` coordinates, when the point lies in the chart at infinity.
    pub fn infinity_coordinates(&self) -> Option<(S, S, S)> {
        match self {
            TorsorPoint::Infinity { t, u, w } => Some((t.clone(), u.clone(), w.clone())),
            TorsorPoint::Affine { x, y, z } => {
                let yi = y.recip()?;
                if x.vanishes() {
                    return None;
                }
                let t = x.times(&yi).negate();
                let w = t.times(z);
                Some((t, yi.negate(), w))
            }
        }
    }

    /// Equality as points of the torsor, across charts.
    pub fn same_point(&self, other: &Self) -> bool {
        if let (Some(a), Some(b)) = (self.affine_coordinates(), other.affine_coordinates()) {
            return a == b;
        }
        match (self.infinity_coordinates(), other.infinity_coordinates()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// Checks the chart equation and that the fibre coordinate is a unit.
    pub fn lies_on(&self, model: &WeierstrassModel) -> bool {
        match self {
            TorsorPoint::Affine { x, y, z } => !z.vanishes() && model.contains(x, y),
            TorsorPoint::Infinity { t, u, w } => {
                let [a1, a2, a3, a4, a6] = model.a_invariants();
                let (t2, u2) = (t.times(t), u.times(u));
                let rhs = t2
                    .times(t)
                    .plus(&t.times(u).scale(a1))
                    .plus(&t2.times(u).scale(a2))
                    .plus(&u2.scale(a3))
                    .plus(&t.times(&u2).scale(a4))
                    .plus(&u2.times(u).scale(a6));
                !w.vanishes() && rhs == *u
            }
        }
    }

    /// The action of `λ ∈ 𝔾_m` on the fibre coordinate.
    pub fn act(&self, lambda: &S) -> Self {
        match self {
            TorsorPoint::Affine { x, y, z } => TorsorPoint::Affine { x: x.clone(), y: y.clone(), z: z.times(lambda) },
            TorsorPoint::Infinity { t, u, w } => TorsorPoint::Infinity { t: t.clone(), u: u.clone(), w: w.times(lambda) },
        }
    }

    /// The underlying point of the curve.
    pub fn project(&self) -> CurvePoint<S> {
        if self.over_infinity() {
            return CurvePoint::Infinity;
        }
        let (x, y, _) = self.affine_coordinates().expect("off the fibre at infinity");
        CurvePoint::Affine { x, y }
    }
}

/// `Q ↦ (x, y, 1)`.
pub fn f_embed<S: Scalar>(q: &CurvePoint<S>) -> Result<TorsorPoint<S>> {
    match q {
        CurvePoint::Infinity => Err(Error::Domain("the point at infinity has no image; use the base point".into())),
        CurvePoint::Affine { x, y } => Ok(TorsorPoint::Affine { x: x.clone(), y: y.clone(), z: x.one_like() }),
    }
}

/// The maps `β_n` for one model, sharing a division polynomial cache.
#[derive(Debug)]
pub struct TorsorMaps {
    psi: DivisionPolynomials,
}

fn sign(n: u64) -> Rational {
    Rational::from_integer(if n % 2 == 1 { 1.into() } else { (-1).into() })
}

impl TorsorMaps {
    pub fn new(model: &WeierstrassModel) -> Self {
        TorsorMaps { psi: DivisionPolynomials::new(model) }
    }

    pub fn model(&self) -> &WeierstrassModel {
        self.psi.model()
    }

    pub fn division_polynomials(&self) -> &DivisionPolynomials {
        &self.psi
    }

    /// `β_n(p)`. Over `E[n]` the result is computed in the chart at
    /// infinity, where the map is regular.
    pub fn beta<S: Scalar>(&self, n: u64, p: &TorsorPoint<S>) -> Result<TorsorPoint<S>> {
        if n == 0 {
            return Err(Error::Domain("β_n needs n ≥ 1".into()));
        }
        let n2 = (n * n) as i64;
        if p.over_infinity() {
            let TorsorPoint::Infinity { t, u, w } = p else { unreachable!() };
            let w = w.pow_i(n2).expect("w is a unit");
            return Ok(TorsorPoint::Infinity { t: t.clone(), u: u.clone(), w });
        }
        let (x, y, z) = p
            .affine_coordinates()
            .ok_or_else(|| Error::Domain("point of the chart at infinity outside the gluing locus".into()))?;
        let zn = z.pow_i(n2).ok_or_else(|| Error::Domain("fibre coordinate is zero".into()))?;
        let psi = &self.psi;
        let pn = psi.eval(n, &x, &y);
        let prod = psi.eval(n - 1, &x, &y).times(&psi.eval(n + 1, &x, &y));
        match pn.recip() {
            Some(inv) => {
                let model = self.model();
                let inv2 = inv.times(&inv);
                let xn = x.minus(&prod.times(&inv2));
                let half = Rational::new(1.into(), 2.into());
                let yn = psi
                    .eval(2 * n, &x, &y)
                    .times(&inv2.times(&inv2))
                    .minus(&xn.scale(model.a1()))
                    .minus(&xn.embed(model.a3()))
                    .scale(&half);
                let zn = zn.times(&inv).scale(&sign(n));
                Ok(TorsorPoint::Affine { x: xn, y: yn, z: zn })
            }
            None => {
                let w = self.torsion_fibre_value(n, &x, &y)?.times(&zn);
                Ok(TorsorPoint::Infinity { t: x.zero_like(), u: x.zero_like(), w })
            }
        }
    }

    /// The `w`-coordinate of `β_n(x, y, 1)` at a point `(x, y)` of `E[n]`:
    /// `(−1)^{n+1}·2ψ_{n−1}ψ_{n+1}/(ψ_{2n}/ψ_n)`.
    pub fn torsion_fibre_value<S: Scalar>(&self, n: u64, x: &S, y: &S) -> Result<S> {
        let psi = &self.psi;
        let model = self.model();
        if !psi.eval(n, x, y).vanishes() {
            return Err(Error::Domain(format!("point is not {n}-torsion")));
        }
        let quotient = psi.doubling_quotient(n)?.eval(model, x, y);
        let inv = quotient
            .recip()
            .ok_or_else(|| Error::Internal("ψ_{2n}/ψ_n vanishes on E[n]".into()))?;
        let two = Rational::from_integer(2.into());
        Ok(psi
            .eval(n - 1, x, y)
            .times(&psi.eval(n + 1, x, y))
            .times(&inv)
            .scale(&(two * sign(n))))
    }

    /// Whether `β_m(β_n(p)) = β_{mn}(p)` for every sample.
    pub fn compose_check<S: Scalar>(&self, n: u64, m: u64, samples: &[TorsorPoint<S>]) -> Result<bool> {
        for p in samples {
            let lhs = self.beta(m, &self.beta(n, p)?)?;
            let rhs = self.beta(m * n, p)?;
            if !lhs.same_point(&rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn beta_s_eval<S: Scalar>(model: &WeierstrassModel, n: u64, p: &TorsorPoint<S>) -> Result<TorsorPoint<S>> {
    TorsorMaps::new(model).beta(n, p)
}

pub fn beta_s_compose_check<S: Scalar>(
    model: &WeierstrassModel,
    n: u64,
    m: u64,
    samples: &[TorsorPoint<S>],
) -> Result<bool> {
    TorsorMaps::new(model).compose_check(n, m, samples)
}

/// `count` points `λ·f(P)` with `x(P)` a small random rational, `y(P)` in
/// ℚ or a quadratic field, and `λ` a non-zero rational. Deterministic in
/// `seed`; 2-torsion is skipped.
pub fn sample_torsor_points(model: &WeierstrassModel, count: usize, seed: u64) -> Result<Vec<TorsorPoint<TowerElement>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rat(rng.gen_range(-30..=30), rng.gen_range(1..=6));
        let p = point_over_quadratic_field(model, &x)?;
        let (x, y) = p.coordinates().expect("affine");
        if model.partial_y(x, y).vanishes() {
            continue;
        }
        let lambda = rat(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=5));
        let one = y.one_like();
        out.push(f_embed(&p)?.act(&one.scale(&lambda)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::point_over_quadratic_field;
    use crate::exact::{rat, NumberTower, RationalPolynomial};

    fn e8712() -> WeierstrassModel {
        WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap()
    }

    #[test]
    fn base_point_is_fixed() {
        let maps = TorsorMaps::new(&e8712());
        let base = TorsorPoint::base_point(&rat(1, 1));
        for n in 1..=5 {
            assert_eq!(maps.beta(n, &base).unwrap(), base);
        }
        let scaled = base.act(&rat(3, 1));
        assert_eq!(maps.beta(2, &scaled).unwrap(), base.act(&rat(81, 1)));
    }

    #[test]
    fn chart_transition() {
        let e = e8712();
        let p = f_embed(&point_over_quadratic_field(&e, &rat(1, 1)).unwrap()).unwrap();
        let (t, u, w) = p.infinity_coordinates().unwrap();
        assert_eq!(w, t);
        let q = TorsorPoint::Infinity { t, u, w };
        assert!(q.lies_on(&e) && p.lies_on(&e));
        assert!(p.same_point(&q));
    }

    #[test]
    fn beta_lies_over_multiplication() {
        let e = WeierstrassModel::from_i64([1, -1, 1, -3, 2]).unwrap();
        let maps = TorsorMaps::new(&e);
        let p = point_over_quadratic_field(&e, &rat(2, 1)).unwrap();
        let tp = f_embed(&p).unwrap();
        for n in 1..=5 {
            let image = maps.beta(n, &tp).unwrap();
            assert!(image.lies_on(&e));
            assert_eq!(image.project(), e.mul(n as i64, &p).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn beta_is_homogeneous_in_the_fibre() {
        let e = e8712();
        let maps = TorsorMaps::new(&e);
        let p = f_embed(&point_over_quadratic_field(&e, &rat(1, 3)).unwrap()).unwrap();
        let lambda = rat(-2, 5);
        let one = p.affine_coordinates().unwrap().2;
        let (_, _, z1) = maps.beta(3, &p.act(&one.scale(&lambda))).unwrap().affine_coordinates().unwrap();
        let (_, _, z0) = maps.beta(3, &p).unwrap().affine_coordinates().unwrap();
        assert_eq!(z1, z0.scale(&lambda.pow(9)));
    }

    #[test]
    fn two_torsion_lands_in_the_fibre_at_infinity() {
        let e = e8712();
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[3, 0, 1]));
        let x = k.base_element(RationalPolynomial::new(vec![rat(11, 2), rat(33, 2)]));
        let q = e.point(x, k.zero()).unwrap();
        let maps = TorsorMaps::new(&e);
        let image = maps.beta(2, &f_embed(&q).unwrap()).unwrap();
        assert!(image.over_infinity());
        assert!(image.lies_on(&e));
    }

    #[test]
    fn composition_on_quadratic_points() {
        let e = e8712();
        let maps = TorsorMaps::new(&e);
        let samples: Vec<_> = [rat(1, 1), rat(-3, 2), rat(5, 7)]
            .iter()
            .map(|x| f_embed(&point_over_quadratic_field(&e, x).unwrap()).unwrap())
            .collect();
        assert!(maps.compose_check(1, 3, &samples).unwrap());
        assert!(maps.compose_check(2, 2, &samples).unwrap());
        assert!(maps.compose_check(2, 3, &samples).unwrap());
        assert!(maps.compose_check(3, 2, &samples).unwrap());
    }

    #[test]
    fn sampled_points_compose() {
        let e = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        let samples = sample_torsor_points(&e, 6, 7).unwrap();
        assert_eq!(samples, sample_torsor_points(&e, 6, 7).unwrap());
        assert!(samples.iter().all(|p| p.lies_on(&e)));
        assert!(beta_s_compose_check(&e, 2, 3, &samples).unwrap());
    }

    #[test]
    fn embedding_rejects_infinity() {
        assert!(f_embed::<Rational>(&CurvePoint::Infinity).is_err());
    }
}
