//! Torsion points of bounded order whose coordinates generate a field of
//! bounded degree.
//!
//! For each `n` the polynomial `Λ_n` whose roots are the `x`-coordinates of
//! points of exact order `n` is the `x`-torsion polynomial of `n` divided by
//! those of the proper divisors. Its irreducible factors of small degree
//! give the base fields; `y` then lies in the base field or in a quadratic
//! layer over it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::divpoly::DivisionPolynomials;
use super::model::WeierstrassModel;
use super::point::CurvePoint;
use crate::error::{Error, Result};
use crate::exact::primes::{factor_u64, squarefree_part};
use crate::exact::{factor_bounded, NumberTower, Rational, RationalPolynomial, Scalar, TowerElement};

/// One torsion point with its field of definition.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionPoint {
    pub point: CurvePoint<TowerElement>,
    pub order: u64,
    pub tower: NumberTower,
    /// Minimal polynomial of `x` over ℚ.
    pub x_polynomial: RationalPolynomial,
    /// Points sharing an index form (part of) one Galois orbit.
    pub orbit: usize,
    /// Size of the full Galois orbit over ℚ.
    pub orbit_size: usize,
}

impl TorsionPoint {
    pub fn x(&self) -> &TowerElement {
        self.point.coordinates().expect("affine").0
    }

    pub fn y(&self) -> &TowerElement {
        self.point.coordinates().expect("affine").1
    }
}

/// Torsion of order `n` whose field of definition exceeds the degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ExcludedTorsion {
    pub order: u64,
    /// Degree of the polynomial left over; every point it describes needs
    /// a field of degree above the budget.
    pub x_degree: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TorsionEnumeration {
    pub points: Vec<TorsionPoint>,
    pub excluded: Vec<ExcludedTorsion>,
}

/// `(n, Λ_n)` for `2 ≤ n ≤ n_max`.
pub fn primitive_torsion_polynomials(psi: &DivisionPolynomials, n_max: u64) -> Result<Vec<(u64, RationalPolynomial)>> {
    let mut lambdas: BTreeMap<u64, RationalPolynomial> = BTreeMap::new();
    for n in 2..=n_max {
        let mut lam = psi.torsion_x_polynomial(n)?.monic();
        for d in 2..n {
            if n % d == 0 {
                lam = lam
                    .exact_div(&lambdas[&d])
                    .ok_or_else(|| Error::Internal(format!("Λ_{d} does not divide the {n}-torsion polynomial")))?;
            }
        }
        lambdas.insert(n, lam);
    }
    Ok(lambdas.into_iter().collect())
}

/// Points of exact order `n` from `Λ_n`, with fields of degree at most
/// `degree_max`. Orbit indices are local to this call (starting at 0).
pub fn points_of_exact_order(
    model: &WeierstrassModel,
    n: u64,
    lambda: &RationalPolynomial,
    degree_max: usize,
) -> Result<TorsionEnumeration> {
    let mut out = TorsionEnumeration::default();
    if lambda.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let split = factor_bounded(lambda, degree_max)?;
    if split.remainder.degree().unwrap_or(0) > 0 {
        out.excluded.push(ExcludedTorsion {
            order: n,
            x_degree: split.remainder.degree().unwrap(),
            reason: format!("x-coordinates generate fields of degree > {degree_max}"),
        });
    }
    let delta = model.two_torsion_polynomial();
    let two = Rational::from_integer(BigInt::from(2));
    for (orbit, h) in split.factors.iter().enumerate() {
        let e = h.degree().unwrap();
        let (base, roots) = base_field_and_roots(h)?;
        let two_torsion = n == 2;
        let orbit_size = if two_torsion { e } else { 2 * e };
        let mut points = Vec::new();
        for xi in roots {
            let offset = xi.scale(model.a1()).plus(&xi.embed(model.a3())).negate();
            let d = delta.eval_in(&xi);
            if d.vanishes() {
                points.push((base.clone(), xi.clone(), offset.scale(&two.recip())));
                continue;
            }
            if let Some(s) = d.sqrt()? {
                for sign in [1i64, -1] {
                    let y = offset.plus(&s.scale(&Rational::from_integer(BigInt::from(sign)))).scale(&two.recip());
                    points.push((base.clone(), xi.clone(), y));
                }
                continue;
            }
            if 2 * e > degree_max {
                out.excluded.push(ExcludedTorsion {
                    order: n,
                    x_degree: e,
                    reason: format!("y-coordinates need a field of degree {} > {degree_max}", 2 * e),
                });
                break;
            }
            let k = base.with_quadratic(&base.zero(), &d.negate())?;
            let s = k.quadratic_generator().expect("quadratic layer");
            let x_k = k.lift(&xi);
            let off_k = k.lift(&offset);
            for conj in [s.clone(), s.negate()] {
                points.push((k.clone(), x_k.clone(), off_k.plus(&conj).scale(&two.recip())));
            }
        }
        for (tower, x, y) in points {
            let p = model.point(x, y)?;
            certify_order(model, &p, n)?;
            out.points.push(TorsionPoint {
                point: p,
                order: n,
                tower,
                x_polynomial: h.clone(),
                orbit,
                orbit_size,
            });
        }
    }
    Ok(out)
}

/// A base field for the irreducible `h` and the roots of `h` in it. A
/// quadratic `h` is presented as `ℚ(√D)` with squarefree `D`.
fn base_field_and_roots(h: &RationalPolynomial) -> Result<(NumberTower, Vec<TowerElement>)> {
    let e = h.degree().unwrap();
    let c = h.coeffs();
    match e {
        1 => {
            let k = NumberTower::rational();
            let root = -c[0].clone() / &c[1];
            Ok((k.clone(), vec![k.from_rational(&root)]))
        }
        2 => {
            let (b, cc) = (&c[1] / &c[2], &c[0] / &c[2]);
            let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &cc;
            let num_den = disc.numer() * disc.denom();
            let core = squarefree_part(&num_den);
            let m_sq = Rational::from_integer(num_den) / Rational::from_integer(core.clone()) / Rational::from_integer(disc.denom().pow(2));
            let m = Rational::new(m_sq.numer().sqrt(), m_sq.denom().sqrt());
            let k = NumberTower::from_irreducible(RationalPolynomial::new(vec![
                Rational::from_integer(-core),
                Rational::zero(),
                Rational::one(),
            ]));
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let s = k.generator().scale(&(&m * &half));
            let mid = k.from_rational(&(-b * &half));
            Ok((k, vec![mid.plus(&s), mid.minus(&s)]))
        }
        _ => {
            let k = NumberTower::from_irreducible(h.clone());
            let g = h.embed_into(&k.one());
            let mut roots = k.roots_in_base(&g)?;
            // Keep the generator first.
            let theta = k.generator();
            roots.retain(|r| *r != theta);
            roots.insert(0, theta);
            Ok((k, roots))
        }
    }
}

fn certify_order(model: &WeierstrassModel, p: &CurvePoint<TowerElement>, n: u64) -> Result<()> {
    if !model.mul(n as i64, p)?.is_infinity() {
        return Err(Error::Internal(format!("claimed {n}-torsion point is not killed by {n}")));
    }
    for (q, _) in factor_u64(n) {
        if model.mul((n / q) as i64, p)?.is_infinity() {
            return Err(Error::Internal(format!("point has order dividing {}", n / q)));
        }
    }
    Ok(())
}

/// All torsion points of exact order `2 ≤ n ≤ n_max` over fields of degree
/// at most `degree_max`, ordered by `n`, then by `x`-polynomial, with
/// orbit indices numbered globally.
pub fn torsion_enumerate(model: &WeierstrassModel, n_max: u64, degree_max: usize) -> Result<TorsionEnumeration> {
    if n_max < 2 || degree_max < 1 {
        return Err(Error::Domain("need n_max ≥ 2 and degree_max ≥ 1".into()));
    }
    let psi = DivisionPolynomials::new(model);
    let parts = primitive_torsion_polynomials(&psi, n_max)?
        .into_iter()
        .map(|(n, lam)| points_of_exact_order(model, n, &lam, degree_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_enumerations(parts))
}

/// Concatenates per-order results (already in order of `n`), renumbering
/// orbits so that they are globally unique.
pub fn merge_enumerations(parts: Vec<TorsionEnumeration>) -> TorsionEnumeration {
    let mut out = TorsionEnumeration::default();
    let mut offset = 0;
    for part in parts {
        let local = part.points.iter().map(|p| p.orbit + 1).max().unwrap_or(0);
        for mut p in part.points {
            p.orbit += offset;
            out.points.push(p);
        }
        out.excluded.extend(part.excluded);
        offset += local;
    }
    out
}
