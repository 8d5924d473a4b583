//! Local heights `λ_v = λ̂_v / log ℓ` at finite places of ℚ and of quadratic
//! fields, for points whose reduction is a smooth point of the special
//! fibre of a minimal model. There `λ_v(Q) = ½·max(0, −v(x(Q)))`.
//!
//! Valuations extend `v_ℓ` with `v(ℓ) = 1`, so at a ramified place they
//! take values in `½ℤ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::curve::{CurvePoint, DivisionPolynomials, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exact::primes::{is_prime, squarefree_part};
use crate::exact::scalar::valuation;
use crate::exact::{FormalRadical, NumberTower, Rational, RadicalBase, Scalar, TowerElement};
use crate::reduction::tate_local;
use crate::residue::hst_of_point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// `ℓ` splits; this place is the one where `√D ≡ root`, modulo `ℓ`
    /// (modulo 4 when `ℓ = 2`).
    Split { root: BigInt },
    Inert,
    Ramified,
}

/// A place of `K = ℚ` or `K = ℚ(√D)` above the rational prime `ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticPlace {
    pub field: NumberTower,
    pub prime: BigInt,
    /// Squarefree `D` with `K = ℚ(√D)`; 1 for `K = ℚ`.
    pub d: BigInt,
    /// `None` for `K = ℚ`.
    pub splitting: Option<Splitting>,
}

/// Coordinates `(t, c)` with `a = t + c·√D`, and `D`, for an element of a
/// field of degree at most 2.
fn sqrt_coordinates(field: &NumberTower, a: &TowerElement) -> Result<(BigInt, Rational, Rational)> {
    if a.tower() != field {
        return Err(Error::Domain("element does not lie in the field of the place".into()));
    }
    let v = a.to_vector();
    match field.degree() {
        1 => Ok((BigInt::one(), v[0].clone(), Rational::zero())),
        2 => {
            // Generator γ with γ² + bγ + c = 0.
            let (b, c) = if field.is_quadratic() {
                let (c1, c0) = field.quadratic_coefficients().expect("quadratic layer");
                (c1.as_rational().expect("rational base"), c0.as_rational().expect("rational base"))
            } else {
                let f = field.base_polynomial().coeffs();
                (f[1].clone(), f[0].clone())
            };
            let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &c;
            let num_den = disc.numer() * disc.denom();
            let d = squarefree_part(&num_den);
            let m_sq = Rational::from_integer(num_den) / Rational::from_integer(d.clone()) / Rational::from_integer(disc.denom().pow(2));
            let m = Rational::new(m_sq.numer().sqrt(), m_sq.denom().sqrt());
            // γ = (m√D − b)/2.
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            let t = &v[0] - &v[1] * &b * &half;
            let s = &v[1] * &m * &half;
            Ok((d, t, s))
        }
        k => Err(Error::Domain(format!("places are only supported on fields of degree ≤ 2, not {k}"))),
    }
}

/// `r` with `r² ≡ a (mod p)` for an odd prime `p` and a square `a`.
fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> BigInt {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return a;
    }
    let one = BigInt::one();
    let pm1: BigInt = p - 1u32;
    let mut q = pm1.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    let mut z = BigInt::from(2);
    while z.modpow(&(&pm1 >> 1), p) != pm1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while t != one {
        let mut i = 0u32;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        r = (&r * &b) % p;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        m = i;
    }
    r
}

/// `r ≡ root` with `r² ≡ d (mod ℓ^k)`; for `ℓ = 2`, `r` is only defined
/// modulo `2^{k−1}`.
fn lift_sqrt(d: &BigInt, l: &BigInt, root: &BigInt, k: u32) -> BigInt {
    let two = BigInt::from(2);
    if *l == two {
        let mut r = root.clone();
        for j in 3..k {
            let m = BigInt::one() << (j + 1);
            if (&r * &r - d).mod_floor(&m) != BigInt::zero() {
                r += BigInt::one() << (j - 1);
            }
        }
        return r;
    }
    let modulus = l.pow(k);
    let inv = (&two * root).modpow(&(l - 2u32), l);
    let mut r = root.clone();
    for _ in 1..k {
        r = (&r - (&r * &r - d) * &inv).mod_floor(&modulus);
    }
    r
}

impl QuadraticPlace {
    pub fn rational(l: &BigInt) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::Domain(format!("{l} is not prime")));
        }
        Ok(QuadraticPlace { field: NumberTower::rational(), prime: l.clone(), d: BigInt::one(), splitting: None })
    }

    /// The one or two places of `field` above `ℓ`.
    pub fn places_over(field: &NumberTower, l: &BigInt) -> Result<Vec<Self>> {
        if field.degree() == 1 {
            return Ok(vec![Self::rational(l)?]);
        }
        if !is_prime(l) {
            return Err(Error::Domain(format!("{l} is not prime")));
        }
        let (d, _, _) = sqrt_coordinates(field, &field.one())?;
        let place = |s| QuadraticPlace { field: field.clone(), prime: l.clone(), d: d.clone(), splitting: Some(s) };
        let two = BigInt::from(2);
        if *l == two {
            let r8 = d.mod_floor(&BigInt::from(8));
            return Ok(if r8.is_one() {
                vec![place(Splitting::Split { root: BigInt::one() }), place(Splitting::Split { root: BigInt::from(3) })]
            } else if r8 == BigInt::from(5) {
                vec![place(Splitting::Inert)]
            } else {
                vec![place(Splitting::Ramified)]
            });
        }
        if d.mod_floor(l).is_zero() {
            return Ok(vec![place(Splitting::Ramified)]);
        }
        if d.mod_floor(l).modpow(&((l - 1u32) >> 1), l) != BigInt::one() {
            return Ok(vec![place(Splitting::Inert)]);
        }
        let r = sqrt_mod_prime(&d, l);
        let mut roots = [r.clone(), (l - &r).mod_floor(l)];
        roots.sort();
        Ok(roots.into_iter().map(|root| place(Splitting::Split { root })).collect())
    }

    pub fn ramification_index(&self) -> u32 {
        if self.splitting == Some(Splitting::Ramified) {
            2
        } else {
            1
        }
    }

    /// `v(a)`, normalized by `v(ℓ) = 1`; `None` for `a = 0`.
    pub fn valuation(&self, a: &TowerElement) -> Result<Option<Rational>> {
        if a.vanishes() {
            return Ok(None);
        }
        let l = &self.prime;
        let (d, t, c) = sqrt_coordinates(&self.field, a)?;
        let int = |e: i64| Rational::from_integer(BigInt::from(e));
        let split_root = match &self.splitting {
            None => return Ok(valuation(&t, l).map(int)),
            Some(Splitting::Split { root }) => root.clone(),
            Some(_) => {
                let norm = &t * &t - &c * &c * Rational::from_integer(d);
                return Ok(valuation(&norm, l).map(|v| Rational::new(BigInt::from(v), BigInt::from(2))));
            }
        };
        if c.is_zero() {
            return Ok(valuation(&t, l).map(int));
        }
        // a = (A + B√D)/den, and v(A + B√D) ≤ v_ℓ(A² − B²D).
        let den = t.denom().lcm(c.denom());
        let a_int = t.numer() * (&den / t.denom());
        let b_int = c.numer() * (&den / c.denom());
        let norm = &a_int * &a_int - &b_int * &b_int * &d;
        let bound = valuation(&Rational::from_integer(norm), l).expect("non-zero norm") as u32;
        let k = bound + 3;
        let r = lift_sqrt(&d, l, &split_root, k);
        let modulus = l.pow(k - 1);
        let value = (&a_int + &b_int * &r).mod_floor(&modulus);
        let v_num = valuation(&Rational::from_integer(value), l).expect("bounded by the norm");
        let v_den = valuation(&Rational::from_integer(den), l).unwrap_or(0);
        Ok(Some(int(v_num - v_den)))
    }
}

fn require_minimal_at(model: &WeierstrassModel, l: &BigInt) -> Result<()> {
    if !model.is_integral() {
        return Err(Error::Contract("heights need an integral minimal model".into()));
    }
    tate_local(model, l).map(|_| ())
}

/// `½·max(0, −v(x(Q)))` for `Q` with smooth reduction at `v`.
pub fn local_height_nonsingular(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, v: &QuadraticPlace) -> Result<Rational> {
    require_minimal_at(model, &v.prime)?;
    height_unchecked(model, q, v)
}

fn height_unchecked(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, v: &QuadraticPlace) -> Result<Rational> {
    let (x, y) = q.coordinates().ok_or_else(|| Error::Domain("no local height at the point at infinity".into()))?;
    let vx = v.valuation(x)?;
    if let Some(vx) = vx.filter(|e| e.is_negative()) {
        return Ok(-vx / Rational::from_integer(BigInt::from(2)));
    }
    let smooth = [model.partial_x(x, y), model.partial_y(x, y)]
        .iter()
        .map(|g| v.valuation(g))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .any(|e| e == Some(Rational::zero()));
    if !smooth {
        return Err(Error::OutOfScope("the point reduces to a singular point".into()));
    }
    Ok(Rational::zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckOutcome {
    Passed,
    Failed { lhs: Rational, rhs: Rational },
    /// A precondition did not hold; nothing was checked.
    Skipped(String),
    /// The valuation could not be evaluated with the available place data.
    Undecided(String),
}

impl CheckOutcome {
    fn compare(lhs: Rational, rhs: Rational) -> Self {
        if lhs == rhs {
            CheckOutcome::Passed
        } else {
            CheckOutcome::Failed { lhs, rhs }
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, CheckOutcome::Failed { .. })
    }
}

fn skip_if_out_of_scope(r: Result<Rational>) -> Result<std::result::Result<Rational, CheckOutcome>> {
    match r {
        Ok(h) => Ok(Ok(h)),
        Err(Error::OutOfScope(m)) => Ok(Err(CheckOutcome::Skipped(m))),
        Err(e) => Err(e),
    }
}

/// `λ_v(nQ) = n²·λ_v(Q) + v(ψ_n(Q))`.
pub fn height_multiplication_check(
    model: &WeierstrassModel,
    q: &CurvePoint<TowerElement>,
    n: u64,
    v: &QuadraticPlace,
) -> Result<CheckOutcome> {
    require_minimal_at(model, &v.prime)?;
    if n == 0 || q.is_infinity() {
        return Ok(CheckOutcome::Skipped("need n ≥ 1 and Q ≠ O".into()));
    }
    let (x, y) = q.coordinates().expect("affine");
    let psi_n = DivisionPolynomials::new(model).eval(n, x, y);
    let Some(v_psi) = v.valuation(&psi_n)? else {
        return Ok(CheckOutcome::Skipped(format!("Q is killed by {n}")));
    };
    let nq = model.mul(n as i64, q)?;
    let lq = match skip_if_out_of_scope(height_unchecked(model, q, v))? {
        Ok(h) => h,
        Err(skip) => return Ok(skip),
    };
    let lnq = match skip_if_out_of_scope(height_unchecked(model, &nq, v))? {
        Ok(h) => h,
        Err(skip) => return Ok(skip),
    };
    let n2 = Rational::from_integer(BigInt::from(n * n));
    Ok(CheckOutcome::compare(lnq, n2 * lq + v_psi))
}

/// `v(H^st)` at a place: rational bases use `v_ℓ`, algebraic ones must
/// lie in the field of the place.
fn radical_valuation_at(r: &FormalRadical, v: &QuadraticPlace) -> Result<std::result::Result<Rational, String>> {
    let mut total = Rational::zero();
    for (base, e) in r.factors() {
        let vb = match base {
            RadicalBase::Rational(q) => Rational::from_integer(BigInt::from(valuation(q, &v.prime).expect("non-zero base"))),
            RadicalBase::Algebraic(a) if a.tower() == &v.field => v.valuation(a)?.expect("non-zero base"),
            RadicalBase::Algebraic(_) => return Ok(Err("a radical base lies outside the field of the place".into())),
        };
        total += vb * e;
    }
    Ok(Ok(total))
}

/// `λ_v(Q) + v(Δ_min)/12 = v(H^st(Q))` for torsion `Q`.
pub fn hst_height_crosscheck(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, v: &QuadraticPlace) -> Result<CheckOutcome> {
    require_minimal_at(model, &v.prime)?;
    let n = model
        .order_up_to(q, 64)?
        .ok_or_else(|| Error::Domain("point is not torsion of order ≤ 64".into()))?;
    if n == 1 {
        return Ok(CheckOutcome::Skipped("Q = O".into()));
    }
    let lambda = match skip_if_out_of_scope(height_unchecked(model, q, v))? {
        Ok(h) => h,
        Err(skip) => return Ok(skip),
    };
    let hst = hst_of_point(model, q, n)?;
    let v_hst = match &hst.rational_part {
        Some(m) => crate::exact::radical_valuation(m, &v.prime),
        None => match radical_valuation_at(&hst.radical, v)? {
            Ok(x) => x,
            Err(reason) => return Ok(CheckOutcome::Undecided(reason)),
        },
    };
    let v_delta = valuation(&model.discriminant(), &v.prime).expect("non-singular model");
    let lhs = lambda + Rational::new(BigInt::from(v_delta), BigInt::from(12));
    Ok(CheckOutcome::compare(lhs, v_hst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::point_over_quadratic_field;
    use crate::exact::{rat, RationalPolynomial};

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn e8712() -> WeierstrassModel {
        WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap()
    }

    #[test]
    fn splitting_types() {
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[3, 0, 1]));
        let kinds = |l| QuadraticPlace::places_over(&k, &b(l)).unwrap().into_iter().map(|p| p.splitting.unwrap()).collect::<Vec<_>>();
        assert_eq!(kinds(7), [Splitting::Split { root: b(2) }, Splitting::Split { root: b(5) }]);
        assert_eq!(kinds(5), [Splitting::Inert]);
        assert_eq!(kinds(3), [Splitting::Ramified]);
        assert_eq!(kinds(2), [Splitting::Inert]);
        let k7 = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[-7, 0, 1]));
        let p2 = QuadraticPlace::places_over(&k7, &b(2)).unwrap();
        assert_eq!(p2[0].splitting, Some(Splitting::Ramified));
        assert_eq!(p2[0].ramification_index(), 2);
    }

    #[test]
    fn valuations_add_up_to_the_norm() {
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[3, 0, 1]));
        // x = (11 + 33√−3)/2 has norm 847 = 7·11².
        let x = k.base_element(RationalPolynomial::new(vec![rat(11, 2), rat(33, 2)]));
        for (l, v_norm) in [(7, 1), (11, 2), (2, 0), (3, 0), (13, 0)] {
            let vs: Vec<Rational> = QuadraticPlace::places_over(&k, &b(l))
                .unwrap()
                .iter()
                .map(|p| p.valuation(&x).unwrap().unwrap())
                .collect();
            let total = if vs.len() == 2 { &vs[0] + &vs[1] } else { &vs[0] * rat(2, 1) };
            assert_eq!(total, rat(v_norm, 1), "ℓ = {l}: {vs:?}");
        }
        let p7 = QuadraticPlace::places_over(&k, &b(7)).unwrap();
        let vs: Vec<Rational> = p7.iter().map(|p| p.valuation(&x).unwrap().unwrap()).collect();
        assert!(vs.contains(&rat(1, 1)) && vs.contains(&rat(0, 1)));
        let p3 = QuadraticPlace::places_over(&k, &b(3)).unwrap();
        assert_eq!(p3[0].valuation(&k.generator()).unwrap(), Some(rat(1, 2)));
    }

    #[test]
    fn two_adic_split_place_separates_conjugates() {
        // ℚ(√17): 2 splits, and (1 + √17)/2 has norm −4.
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[-17, 0, 1]));
        let a = k.base_element(RationalPolynomial::new(vec![rat(1, 2), rat(1, 2)]));
        let vs: Vec<Rational> = QuadraticPlace::places_over(&k, &b(2))
            .unwrap()
            .iter()
            .map(|p| p.valuation(&a).unwrap().unwrap())
            .collect();
        let mut sorted = vs.clone();
        sorted.sort();
        assert_eq!(sorted, [rat(0, 1), rat(2, 1)]);
    }

    #[test]
    fn heights_of_simple_points() {
        let e = e8712();
        let v5 = QuadraticPlace::rational(&b(5)).unwrap();
        let q = point_over_quadratic_field(&e, &rat(1, 25)).unwrap();
        let k = q.coordinates().unwrap().0.tower().clone();
        let v = QuadraticPlace::places_over(&k, &b(5)).unwrap().remove(0);
        assert_eq!(local_height_nonsingular(&e, &q, &v).unwrap(), rat(1, 1));
        let q = point_over_quadratic_field(&e, &rat(1, 1)).unwrap();
        let k = q.coordinates().unwrap().0.tower().clone();
        for v in QuadraticPlace::places_over(&k, &b(5)).unwrap() {
            assert_eq!(local_height_nonsingular(&e, &q, &v).unwrap(), rat(0, 1));
        }
        // Good at 5, with v₅(x) = −2 on a rational point of the rational tower.
        let r = NumberTower::rational();
        let q = CurvePoint::affine(r.from_rational(&rat(-11, 1)), r.zero());
        assert_eq!(local_height_nonsingular(&e, &q, &v5).unwrap(), rat(0, 1));
        let short = WeierstrassModel::from_i64([0, 0, 0, -595, -5586]).unwrap();
        assert!(matches!(local_height_nonsingular(&short, &q, &QuadraticPlace::rational(&b(2)).unwrap()), Err(Error::Contract(_))));
    }

    #[test]
    fn multiplication_identity() {
        let e = e8712();
        for x in [rat(1, 1), rat(2, 1), rat(1, 25), rat(3, 5)] {
            let q = point_over_quadratic_field(&e, &x).unwrap();
            let k = q.coordinates().unwrap().0.tower().clone();
            for l in [5, 7, 13] {
                for v in QuadraticPlace::places_over(&k, &b(l)).unwrap() {
                    for n in 2..=4 {
                        let out = height_multiplication_check(&e, &q, n, &v).unwrap();
                        assert!(!out.is_failure(), "x = {x}, ℓ = {l}, n = {n}: {out:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn crosscheck_on_golden_torsion() {
        let e = e8712();
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[3, 0, 1]));
        let q = e.point(k.base_element(RationalPolynomial::new(vec![rat(11, 2), rat(33, 2)])), k.zero()).unwrap();
        for v in QuadraticPlace::places_over(&k, &b(7)).unwrap() {
            assert_eq!(hst_height_crosscheck(&e, &q, &v).unwrap(), CheckOutcome::Passed);
        }
        let e49 = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        let k7 = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[-7, 0, 1]));
        let s = k7.generator();
        let q = e49
            .point(s.scale(&rat(2, 1)).plus(&k7.from_rational(&rat(2, 1))), s.negate().minus(&k7.one()))
            .unwrap();
        for l in [3, 5, 11, 13, 19, 29] {
            for v in QuadraticPlace::places_over(&k7, &b(l)).unwrap() {
                assert_eq!(hst_height_crosscheck(&e49, &q, &v).unwrap(), CheckOutcome::Passed, "ℓ = {l}");
            }
        }
    }
}
