//! Division polynomials `ψ_n`, kept as `P_n(x)` for odd `n` and
//! `ψ₂·P_n(x)` for even `n` with `ψ₂ = 2y + a1·x + a3`. Products of two
//! `ψ₂` factors are replaced by `ψ₂² = 4x³ + b2·x² + 2b4·x + b6`.

use std::sync::Mutex;

use num_bigint::BigInt;

use super::model::WeierstrassModel;
use super::point::CurvePoint;
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalPolynomial, Scalar};

/// `ψ_n = x_part(x) · (2y + a1·x + a3)^{[y_factor]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionPolynomial {
    pub n: u64,
    pub x_part: RationalPolynomial,
    pub y_factor: bool,
}

#[derive(Clone, Debug)]
struct Psi {
    p: RationalPolynomial,
    y: bool,
}

/// Cache of `ψ_0 … ψ_k` for one model. Thread-safe; grows on demand.
#[derive(Debug)]
pub struct DivisionPolynomials {
    model: WeierstrassModel,
    delta: RationalPolynomial,
    cache: Mutex<Vec<Psi>>,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl DivisionPolynomials {
    pub fn new(model: &WeierstrassModel) -> Self {
        let inv = model.invariants();
        let (b2, b4, b6, b8) = (inv.b2, inv.b4, inv.b6, inv.b8);
        let delta = model.two_torsion_polynomial();
        let psi3 = RationalPolynomial::new(vec![b8.clone(), q(3) * &b6, q(3) * &b4, b2.clone(), q(3)]);
        let psi4 = RationalPolynomial::new(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            q(10) * &b8,
            q(10) * &b6,
            q(5) * &b4,
            b2,
            q(2),
        ]);
        let one = RationalPolynomial::constant(q(1));
        let cache = vec![
            Psi { p: RationalPolynomial::zero(), y: false },
            Psi { p: one.clone(), y: false },
            Psi { p: one, y: true },
            Psi { p: psi3, y: false },
            Psi { p: psi4, y: true },
        ];
        DivisionPolynomials { model: model.clone(), delta, cache: Mutex::new(cache) }
    }

    pub fn model(&self) -> &WeierstrassModel {
        &self.model
    }

    fn mul(&self, a: &Psi, b: &Psi) -> Psi {
        let mut p = a.p.mul(&b.p);
        if a.y && b.y {
            p = p.mul(&self.delta);
        }
        Psi { p, y: a.y ^ b.y }
    }

    fn sub(a: &Psi, b: &Psi) -> Psi {
        if a.p.is_zero() {
            return Psi { p: b.p.neg(), y: b.y };
        }
        if b.p.is_zero() {
            return a.clone();
        }
        debug_assert_eq!(a.y, b.y);
        Psi { p: a.p.sub(&b.p), y: a.y }
    }

    fn div_psi2(&self, a: &Psi) -> Psi {
        if a.y {
            Psi { p: a.p.clone(), y: false }
        } else {
            Psi { p: a.p.exact_div(&self.delta).expect("ψ₂ divides the numerator"), y: true }
        }
    }

    fn fill(&self, n: usize) {
        let mut cache = self.cache.lock().expect("cache lock");
        while cache.len() <= n {
            let k = cache.len();
            let m = k / 2;
            let next = if k % 2 == 1 {
                // ψ_{2m+1} = ψ_{m+2}ψ_m³ − ψ_{m−1}ψ_{m+1}³
                let a = self.mul(&cache[m + 2], &self.mul(&cache[m], &self.mul(&cache[m], &cache[m])));
                let b = self.mul(&cache[m - 1], &self.mul(&cache[m + 1], &self.mul(&cache[m + 1], &cache[m + 1])));
                Self::sub(&a, &b)
            } else {
                // ψ_{2m} = ψ_m(ψ_{m+2}ψ_{m−1}² − ψ_{m−2}ψ_{m+1}²)/ψ₂
                let a = self.mul(&cache[m + 2], &self.mul(&cache[m - 1], &cache[m - 1]));
                let b = self.mul(&cache[m - 2], &self.mul(&cache[m + 1], &cache[m + 1]));
                self.div_psi2(&self.mul(&cache[m], &Self::sub(&a, &b)))
            };
            cache.push(next);
        }
    }

    /// `ψ_n` for `n ≥ 1`.
    pub fn get(&self, n: u64) -> Result<DivisionPolynomial> {
        if n == 0 {
            return Err(Error::Domain("division polynomials start at n = 1".into()));
        }
        self.fill(n as usize);
        let cache = self.cache.lock().expect("cache lock");
        let psi = &cache[n as usize];
        Ok(DivisionPolynomial { n, x_part: psi.p.clone(), y_factor: psi.y })
    }

    /// Polynomial in `x` whose roots are exactly the `x`-coordinates of the
    /// non-zero `n`-torsion: `P_n` for odd `n`, `ψ₂²·P_n` for even `n`.
    pub fn torsion_x_polynomial(&self, n: u64) -> Result<RationalPolynomial> {
        let psi = self.get(n)?;
        Ok(if psi.y_factor { psi.x_part.mul(&self.delta) } else { psi.x_part })
    }

    /// The polynomial `ψ_{2n}/ψ_n`, which stays regular on `E[n]`.
    pub fn doubling_quotient(&self, n: u64) -> Result<DivisionPolynomial> {
        let top = self.get(2 * n)?;
        let bottom = self.get(n)?;
        let x_part = top
            .x_part
            .exact_div(&bottom.x_part)
            .ok_or_else(|| Error::Internal(format!("ψ_{n} does not divide ψ_{}", 2 * n)))?;
        Ok(DivisionPolynomial { n: 2 * n, x_part, y_factor: !bottom.y_factor })
    }

    /// `ψ_n(x, y)` for `n ≥ 0` (with `ψ_0 = 0`).
    pub fn eval<S: Scalar>(&self, n: u64, x: &S, y: &S) -> S {
        if n == 0 {
            return x.zero_like();
        }
        let psi = self.get(n).expect("n ≥ 1");
        psi.eval(&self.model, x, y)
    }
}

impl DivisionPolynomial {
    pub fn eval<S: Scalar>(&self, model: &WeierstrassModel, x: &S, y: &S) -> S {
        let base = self.x_part.eval_in(x);
        if self.y_factor {
            base.times(&model.partial_y(x, y))
        } else {
            base
        }
    }

    /// `(∂ψ_n/∂x, ∂ψ_n/∂y)` at `(x, y)`.
    pub fn gradient<S: Scalar>(&self, model: &WeierstrassModel, x: &S, y: &S) -> (S, S) {
        let p = self.x_part.eval_in(x);
        let dp = self.x_part.derivative().eval_in(x);
        if self.y_factor {
            let psi2 = model.partial_y(x, y);
            let gx = p.scale(model.a1()).plus(&psi2.times(&dp));
            let gy = p.scale(&q(2));
            (gx, gy)
        } else {
            (dp, x.zero_like())
        }
    }

    pub fn eval_at_point<S: Scalar>(&self, model: &WeierstrassModel, p: &CurvePoint<S>) -> Option<S> {
        p.coordinates().map(|(x, y)| self.eval(model, x, y))
    }
}

/// `ψ_n` of a model (convenience for one-off use).
pub fn division_polynomial(model: &WeierstrassModel, n: u64) -> Result<DivisionPolynomial> {
    DivisionPolynomials::new(model).get(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn small_cases() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap();
        let psi = DivisionPolynomials::new(&e);
        let p2 = psi.get(2).unwrap();
        assert!(p2.y_factor);
        assert_eq!(p2.x_part, RationalPolynomial::from_i64(&[1]));
        assert_eq!(psi.torsion_x_polynomial(2).unwrap(), RationalPolynomial::from_i64(&[4 * 9317, 4 * 726, 0, 4]));
        assert_eq!(psi.get(3).unwrap().x_part.degree(), Some(4));
        assert_eq!(psi.get(5).unwrap().x_part.degree(), Some(12));
        assert_eq!(psi.get(6).unwrap().x_part.degree(), Some(16));
        assert!(psi.get(0).is_err());
    }

    #[test]
    fn vanishes_exactly_on_torsion() {
        // y² + y = x³ − x² (11a3): (0,0) has order 5.
        let e = WeierstrassModel::from_i64([0, -1, 1, 0, 0]).unwrap();
        let psi = DivisionPolynomials::new(&e);
        let (x, y) = (rat(0, 1), rat(0, 1));
        for n in 1..=12u64 {
            let vanishes = psi.eval(n, &x, &y) == rat(0, 1);
            assert_eq!(vanishes, n % 5 == 0, "n = {n}");
        }
    }

    #[test]
    fn multiplication_formula_matches_group_law() {
        let e = WeierstrassModel::from_i64([1, 0, 1, -1, 0]).unwrap();
        let psi = DivisionPolynomials::new(&e);
        let p = e.point(rat(0, 1), rat(0, 1)).unwrap();
        for n in 2..=6u64 {
            let np = e.mul(n as i64, &p).unwrap();
            let (x, y) = (rat(0, 1), rat(0, 1));
            let pn = psi.eval(n, &x, &y);
            if pn == rat(0, 1) {
                assert!(np.is_infinity());
                continue;
            }
            let xn = &x - psi.eval(n - 1, &x, &y) * psi.eval(n + 1, &x, &y) / (&pn * &pn);
            assert_eq!(np.coordinates().unwrap().0, &xn);
        }
    }
}
