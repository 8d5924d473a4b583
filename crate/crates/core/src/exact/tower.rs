//! Number fields of the shape `K = K0[Y]/(Y² + c1·Y + c0)` over
//! `K0 = ℚ[X]/(f)`, or just `K0`. Torsion coordinates of the curves we
//! handle always live in a field like this: `x` generates `K0` and `y`
//! satisfies the curve equation over it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::factor::poly_factor;
use super::poly::{Poly, RationalPolynomial};
use super::primes::{euler_phi, mobius};
use super::scalar::{Rational, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq)]
struct TowerData {
    /// Monic irreducible defining polynomial of `K0`.
    base: RationalPolynomial,
    /// `(c1, c0)` of the quadratic layer, as elements of `K0` reduced mod `base`.
    quad: Option<(RationalPolynomial, RationalPolynomial)>,
}

/// A field of degree `deg(f)` or `2·deg(f)` over ℚ. Cheap to clone.
#[derive(Clone, Debug)]
pub struct NumberTower(Arc<TowerData>);

impl PartialEq for NumberTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// `c0(θ) + c1(θ)·y` with both parts reduced modulo the base polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerElement {
    tower: NumberTower,
    c0: RationalPolynomial,
    c1: RationalPolynomial,
}

impl NumberTower {
    /// ℚ itself, presented as `ℚ[X]/(X)`.
    pub fn rational() -> Self {
        Self::from_irreducible(RationalPolynomial::x())
    }

    /// `ℚ[X]/(f)`; fails unless `f` is irreducible of positive degree.
    pub fn new(f: &RationalPolynomial) -> Result<Self> {
        let Some(d) = f.degree() else {
            return Err(Error::Domain("zero defining polynomial".into()));
        };
        if d == 0 {
            return Err(Error::Domain("constant defining polynomial".into()));
        }
        let factors = poly_factor(f)?;
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(Error::Domain(format!("{f} is reducible over Q")));
        }
        Ok(Self::from_irreducible(f.monic()))
    }

    /// Trusts the caller that `f` is irreducible (e.g. a factor returned by
    /// [`poly_factor`]).
    pub fn from_irreducible(f: RationalPolynomial) -> Self {
        NumberTower(Arc::new(TowerData { base: f.monic(), quad: None }))
    }

    /// `K0[Y]/(Y² + c1·Y + c0)` for `c1, c0` in this (base-only) tower.
    /// Fails if the quadratic splits over `K0`.
    pub fn with_quadratic(&self, c1: &TowerElement, c0: &TowerElement) -> Result<Self> {
        if self.is_quadratic() {
            return Err(Error::Domain("tower already has a quadratic layer".into()));
        }
        let disc = c1.times(c1).minus(&c0.scale(&Rational::from_integer(BigInt::from(4))));
        if disc.sqrt()?.is_some() {
            return Err(Error::Domain("quadratic layer splits over the base field".into()));
        }
        Ok(NumberTower(Arc::new(TowerData {
            base: self.0.base.clone(),
            quad: Some((c1.c0.clone(), c0.c0.clone())),
        })))
    }

    pub fn base_polynomial(&self) -> &RationalPolynomial {
        &self.0.base
    }

    pub fn base_degree(&self) -> usize {
        self.0.base.degree().unwrap()
    }

    /// Degree over ℚ.
    pub fn degree(&self) -> usize {
        self.base_degree() * if self.is_quadratic() { 2 } else { 1 }
    }

    pub fn is_quadratic(&self) -> bool {
        self.0.quad.is_some()
    }

    /// The tower without its quadratic layer.
    pub fn base_tower(&self) -> NumberTower {
        if self.is_quadratic() {
            Self::from_irreducible(self.0.base.clone())
        } else {
            self.clone()
        }
    }

    /// Coefficients `(c1, c0)` of the quadratic layer as base elements.
    pub fn quadratic_coefficients(&self) -> Option<(TowerElement, TowerElement)> {
        let base = self.base_tower();
        self.0.quad.as_ref().map(|(c1, c0)| (base.base_element(c1.clone()), base.base_element(c0.clone())))
    }

    pub fn from_rational(&self, q: &Rational) -> TowerElement {
        self.base_element(RationalPolynomial::constant(q.clone()))
    }

    pub fn zero(&self) -> TowerElement {
        self.from_rational(&Rational::zero())
    }

    pub fn one(&self) -> TowerElement {
        self.from_rational(&Rational::one())
    }

    /// The class of `X` in `K0`.
    pub fn generator(&self) -> TowerElement {
        self.base_element(RationalPolynomial::x())
    }

    /// The class of `Y`; only for quadratic towers.
    pub fn quadratic_generator(&self) -> Option<TowerElement> {
        self.is_quadratic().then(|| TowerElement {
            tower: self.clone(),
            c0: RationalPolynomial::zero(),
            c1: RationalPolynomial::constant(Rational::one()),
        })
    }

    /// `p(θ)`, reduced.
    pub fn base_element(&self, p: RationalPolynomial) -> TowerElement {
        TowerElement { tower: self.clone(), c0: p.rem(&self.0.base), c1: RationalPolynomial::zero() }
    }

    /// `a0(θ) + a1(θ)·y`.
    pub fn element(&self, a0: RationalPolynomial, a1: RationalPolynomial) -> TowerElement {
        assert!(self.is_quadratic() || a1.is_zero(), "y-part in a tower without quadratic layer");
        TowerElement { tower: self.clone(), c0: a0.rem(&self.0.base), c1: a1.rem(&self.0.base) }
    }

    /// Moves an element of `K0` (given in any tower sharing this base) here.
    pub fn lift(&self, e: &TowerElement) -> TowerElement {
        assert_eq!(e.tower.0.base, self.0.base, "towers have different base fields");
        assert!(e.c1.is_zero() || self.is_quadratic(), "cannot drop a quadratic part");
        TowerElement { tower: self.clone(), c0: e.c0.clone(), c1: e.c1.clone() }
    }

    /// Roots in `K0` of a polynomial over `K0` (base-only tower).
    pub fn roots_in_base(&self, g: &Poly<TowerElement>) -> Result<Vec<TowerElement>> {
        if self.is_quadratic() {
            return Err(Error::Capability("root finding over a quadratic layer".into()));
        }
        if g.is_zero() {
            return Err(Error::Domain("roots of the zero polynomial".into()));
        }
        let one = self.one();
        let common = g.gcd(&g.derivative());
        let g = g.exact_div(&common).expect("gcd divides");
        let n = g.degree().unwrap();
        if n == 0 {
            return Ok(Vec::new());
        }
        let d = self.base_degree();
        let theta = self.generator();
        for k in 0i64.. {
            // Trager: shift so that the norm of g(W - kθ) is squarefree.
            let shift = theta.scale(&Rational::from_integer(BigInt::from(k)));
            let shifted = g.compose(&Poly::new(vec![shift.negate(), one.clone()]));
            let npts = n * d + 1;
            let xs: Vec<Rational> = (0..npts as i64).map(|i| Rational::from_integer(BigInt::from(i))).collect();
            let ys: Vec<Rational> = xs.iter().map(|x| shifted.eval(&self.from_rational(x)).norm()).collect();
            let norm = interpolate(&xs, &ys);
            if norm.gcd_fast(&norm.derivative()).degree() != Some(0) {
                continue;
            }
            let mut roots = Vec::new();
            for (m, _) in poly_factor(&norm)? {
                // With a squarefree norm every shifted root generates K0, so
                // a linear factor over K0 has a norm of degree exactly d.
                if m.degree() != Some(d) {
                    continue;
                }
                let h = shifted.gcd(&m.embed_into(&one));
                if h.degree() == Some(1) {
                    let r = h.coeffs()[0].negate().times(&h.coeffs()[1].recip().unwrap());
                    roots.push(r.minus(&shift));
                }
            }
            roots.sort_by(|a, b| a.canonical_cmp(b));
            return Ok(roots);
        }
        unreachable!()
    }
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> RationalPolynomial {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = RationalPolynomial::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&Poly::new(vec![-xs[i].clone(), Rational::one()])).add(&RationalPolynomial::constant(coef[i].clone()));
    }
    p
}

fn mul_mod(a: &RationalPolynomial, b: &RationalPolynomial, f: &RationalPolynomial) -> RationalPolynomial {
    a.mul(b).rem(f)
}

/// Inverse of `a` modulo the irreducible `f` via the extended Euclidean
/// algorithm.
fn inv_mod(a: &RationalPolynomial, f: &RationalPolynomial) -> Option<RationalPolynomial> {
    if a.is_zero() {
        return None;
    }
    let (mut r0, mut r1) = (f.clone(), a.clone());
    let (mut t0, mut t1) = (RationalPolynomial::zero(), RationalPolynomial::constant(Rational::one()));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    // r0 is a non-zero constant since f is irreducible.
    let c = r0.coeffs()[0].clone();
    Some(t0.scale(&c.recip()).rem(f))
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let v = &factor * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

impl TowerElement {
    pub fn tower(&self) -> &NumberTower {
        &self.tower
    }

    /// `(a0, a1)` with the element equal to `a0(θ) + a1(θ)·y`.
    pub fn parts(&self) -> (&RationalPolynomial, &RationalPolynomial) {
        (&self.c0, &self.c1)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if !self.c1.is_zero() || self.c0.degree().unwrap_or(0) > 0 {
            return None;
        }
        Some(self.c0.coeffs().first().cloned().unwrap_or_else(Rational::zero))
    }

    pub fn in_base(&self) -> bool {
        self.c1.is_zero()
    }

    fn base_norm(a: &RationalPolynomial, f: &RationalPolynomial) -> Rational {
        let d = f.degree().unwrap();
        let mut rows = vec![vec![Rational::zero(); d]; d];
        let mut col = a.clone();
        for j in 0..d {
            for (i, row) in rows.iter_mut().enumerate() {
                row[j] = col.coeff(i).cloned().unwrap_or_else(Rational::zero);
            }
            col = mul_mod(&col, &RationalPolynomial::x(), f);
        }
        determinant(rows)
    }

    /// Relative norm to `K0` of a quadratic-tower element; identity otherwise.
    pub fn relative_norm(&self) -> TowerElement {
        let base = self.tower.base_tower();
        match &self.tower.0.quad {
            None => self.clone(),
            Some((c1, c0)) => {
                let f = &self.tower.0.base;
                let a0 = &self.c0;
                let a1 = &self.c1;
                let n = mul_mod(a0, a0, f)
                    .sub(&mul_mod(&mul_mod(c1, a0, f), a1, f))
                    .add(&mul_mod(&mul_mod(c0, a1, f), a1, f));
                base.base_element(n)
            }
        }
    }

    /// Absolute norm `N_{K/ℚ}`.
    pub fn norm(&self) -> Rational {
        Self::base_norm(&self.relative_norm().c0, &self.tower.0.base)
    }

    /// Galois conjugate over `K0` (only meaningful in quadratic towers).
    pub fn conjugate(&self) -> TowerElement {
        match &self.tower.0.quad {
            None => self.clone(),
            Some((c1, _)) => {
                let f = &self.tower.0.base;
                TowerElement {
                    tower: self.tower.clone(),
                    c0: self.c0.sub(&mul_mod(&self.c1, c1, f)),
                    c1: self.c1.neg(),
                }
            }
        }
    }

    /// Coordinates in the ℚ-basis `θ^i`, then `θ^i·y`.
    pub fn to_vector(&self) -> Vec<Rational> {
        let d = self.tower.base_degree();
        let mut v: Vec<Rational> = (0..d).map(|i| self.c0.coeff(i).cloned().unwrap_or_else(Rational::zero)).collect();
        if self.tower.is_quadratic() {
            v.extend((0..d).map(|i| self.c1.coeff(i).cloned().unwrap_or_else(Rational::zero)));
        }
        v
    }

    /// Minimal polynomial over ℚ, found as the first linear dependence
    /// among `1, α, α², …`.
    pub fn minimal_polynomial(&self) -> RationalPolynomial {
        let dim = self.tower.degree();
        // Row-reduced basis of span(1..α^{k-1}) with the combination that
        // produced each row, expressed in the powers of α.
        let mut basis: Vec<(Vec<Rational>, Vec<Rational>, usize)> = Vec::new();
        let mut power = self.tower.one();
        for k in 0..=dim {
            let mut v = power.to_vector();
            let mut combo = vec![Rational::zero(); k + 1];
            combo[k] = Rational::one();
            for (bv, bc, pivot) in &basis {
                if !v[*pivot].is_zero() {
                    let factor = v[*pivot].clone() / &bv[*pivot];
                    for (x, y) in v.iter_mut().zip(bv) {
                        *x -= &factor * y;
                    }
                    for (i, y) in bc.iter().enumerate() {
                        combo[i] -= &factor * y;
                    }
                }
            }
            match v.iter().position(|c| !c.is_zero()) {
                None => return Poly::new(combo).monic(),
                Some(pivot) => basis.push((v, combo, pivot)),
            }
            power = power.times(self);
        }
        unreachable!("degree bounded by the tower degree")
    }

    /// Square root inside `K0` for elements of a base-only tower. Errors
    /// with `Capability` for quadratic towers.
    pub fn sqrt(&self) -> Result<Option<TowerElement>> {
        if self.vanishes() {
            return Ok(Some(self.clone()));
        }
        if let Some(q) = self.as_rational() {
            if let (Some(n), Some(d)) = (exact_sqrt(q.numer()), exact_sqrt(q.denom())) {
                return Ok(Some(self.tower.from_rational(&Rational::new(n, d))));
            }
            if self.tower.base_degree() == 1 {
                return Ok(None);
            }
        }
        let one = self.tower.one();
        let g = Poly::new(vec![self.negate(), one.zero_like(), one]);
        let roots = self.tower.roots_in_base(&g)?;
        Ok(roots.into_iter().max_by(|a, b| a.canonical_cmp(b)))
    }

    /// A total order for deterministic output.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.c1.canonical_cmp(&other.c1).then_with(|| self.c0.canonical_cmp(&other.c0))
    }

    /// Text form `a0(t) + a1(t)*y` using the given generator names.
    pub fn render(&self, theta: &str, y: &str) -> String {
        let part = |p: &RationalPolynomial| p.to_string().replace('x', theta);
        match (self.c0.is_zero(), self.c1.is_zero()) {
            (_, true) => part(&self.c0),
            (true, false) => format!("({})*{y}", part(&self.c1)),
            (false, false) => format!("{} + ({})*{y}", part(&self.c0), part(&self.c1)),
        }
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t", "y"))
    }
}

impl Scalar for TowerElement {
    fn zero_like(&self) -> Self {
        self.tower.zero()
    }
    fn one_like(&self) -> Self {
        self.tower.one()
    }
    fn embed(&self, q: &Rational) -> Self {
        self.tower.from_rational(q)
    }
    fn vanishes(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }
    fn same_field(&self, other: &Self) -> bool {
        self.tower == other.tower
    }
    fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.tower, other.tower);
        TowerElement { tower: self.tower.clone(), c0: self.c0.add(&other.c0), c1: self.c1.add(&other.c1) }
    }
    fn minus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.tower, other.tower);
        TowerElement { tower: self.tower.clone(), c0: self.c0.sub(&other.c0), c1: self.c1.sub(&other.c1) }
    }
    fn times(&self, other: &Self) -> Self {
        debug_assert_eq!(self.tower, other.tower);
        let f = &self.tower.0.base;
        match &self.tower.0.quad {
            None => TowerElement { tower: self.tower.clone(), c0: mul_mod(&self.c0, &other.c0, f), c1: RationalPolynomial::zero() },
            Some((q1, q0)) => {
                let a1b1 = mul_mod(&self.c1, &other.c1, f);
                let c0 = mul_mod(&self.c0, &other.c0, f).sub(&mul_mod(&a1b1, q0, f));
                let c1 = mul_mod(&self.c0, &other.c1, f)
                    .add(&mul_mod(&self.c1, &other.c0, f))
                    .sub(&mul_mod(&a1b1, q1, f));
                TowerElement { tower: self.tower.clone(), c0, c1 }
            }
        }
    }
    fn negate(&self) -> Self {
        TowerElement { tower: self.tower.clone(), c0: self.c0.neg(), c1: self.c1.neg() }
    }
    fn recip(&self) -> Option<Self> {
        if self.vanishes() {
            return None;
        }
        let f = &self.tower.0.base;
        if !self.tower.is_quadratic() {
            return Some(TowerElement { tower: self.tower.clone(), c0: inv_mod(&self.c0, f)?, c1: RationalPolynomial::zero() });
        }
        let n_inv = inv_mod(&self.relative_norm().c0, f)?;
        let conj = self.conjugate();
        let scale = TowerElement { tower: self.tower.clone(), c0: n_inv, c1: RationalPolynomial::zero() };
        Some(conj.times(&scale))
    }
}

/// Minimal polynomial over ℚ of a tower element.
pub fn tower_minimal_polynomial(a: &TowerElement) -> RationalPolynomial {
    a.minimal_polynomial()
}

/// The `w`-th cyclotomic polynomial.
pub fn cyclotomic(w: u64) -> RationalPolynomial {
    let mut num = RationalPolynomial::constant(Rational::one());
    let mut den = RationalPolynomial::constant(Rational::one());
    for d in 1..=w {
        if !w.is_multiple_of(d) {
            continue;
        }
        let term = RationalPolynomial::monomial(Rational::one(), d as usize).sub(&RationalPolynomial::constant(Rational::one()));
        match mobius(w / d) {
            1 => num = num.mul(&term),
            -1 => den = den.mul(&term),
            _ => {}
        }
    }
    num.exact_div(&den).expect("cyclotomic division is exact")
}

/// Multiplicative order of `a` if it is a root of unity. Its minimal
/// polynomial must then be a cyclotomic `Φ_w` with `φ(w)` equal to its
/// degree, and `φ(w) ≥ √(w/2)` bounds the search.
pub fn is_root_of_unity(a: &TowerElement) -> Result<Option<u64>> {
    if a.vanishes() {
        return Err(Error::Domain("zero is not a unit".into()));
    }
    let m = a.minimal_polynomial();
    let deg = m.degree().unwrap() as u64;
    Ok((1..=2 * deg * deg + 2).find(|&w| euler_phi(w) == deg && cyclotomic(w) == m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::rat;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_i64(c)
    }

    fn sqrt7() -> NumberTower {
        NumberTower::new(&p(&[-7, 0, 1])).unwrap()
    }

    #[test]
    fn arithmetic_in_quadratic_field() {
        let k = sqrt7();
        let s = k.generator();
        let a = k.base_element(p(&[8, 3])); // 8 + 3√7
        assert_eq!(a.norm(), rat(1, 1));
        let inv = a.recip().unwrap();
        assert_eq!(inv, k.base_element(p(&[8, -3])));
        assert_eq!(s.times(&s), k.from_rational(&rat(7, 1)));
        assert_eq!(a.minimal_polynomial(), p(&[1, -16, 1]));
    }

    #[test]
    fn reducible_base_is_rejected() {
        assert!(NumberTower::new(&p(&[-4, 0, 1])).is_err());
    }

    #[test]
    fn square_roots_in_base_field() {
        let k = sqrt7();
        let a = k.base_element(p(&[8, 3]));
        // 8 + 3√7 = ((3 + √7)/√2)², not a square in ℚ(√7).
        assert_eq!(a.sqrt().unwrap(), None);
        let b = k.base_element(p(&[16, 6])); // (3 + √7)²
        let r = b.sqrt().unwrap().unwrap();
        assert_eq!(r.times(&r), b);
        assert_eq!(k.from_rational(&rat(7, 1)).sqrt().unwrap().unwrap().times(&k.generator()), k.from_rational(&rat(7, 1)));
        assert!(k.from_rational(&rat(-1, 1)).sqrt().unwrap().is_none());
        let q = NumberTower::rational();
        assert_eq!(q.from_rational(&rat(9, 4)).sqrt().unwrap().unwrap(), q.from_rational(&rat(3, 2)));
    }

    #[test]
    fn quadratic_layer_and_conjugation() {
        let k0 = NumberTower::rational();
        let k = k0.with_quadratic(&k0.zero(), &k0.from_rational(&rat(3, 1))).unwrap(); // y² + 3
        let y = k.quadratic_generator().unwrap();
        assert_eq!(y.times(&y), k.from_rational(&rat(-3, 1)));
        let z = k.element(p(&[11]).scale(&rat(1, 2)), p(&[33]).scale(&rat(1, 2)));
        assert_eq!(z.norm(), rat(847, 1));
        assert_eq!(z.minimal_polynomial(), p(&[847, -11, 1]));
        assert_eq!(z.plus(&z.conjugate()), k.from_rational(&rat(11, 1)));
        assert_eq!(z.times(&z.recip().unwrap()), k.one());
        assert!(k0.with_quadratic(&k0.zero(), &k0.from_rational(&rat(-4, 1))).is_err());
    }

    #[test]
    fn roots_of_unity() {
        let k0 = NumberTower::rational();
        let k = k0.with_quadratic(&k0.one(), &k0.one()).unwrap(); // primitive cube root
        let w = k.quadratic_generator().unwrap();
        assert_eq!(is_root_of_unity(&w).unwrap(), Some(3));
        assert_eq!(is_root_of_unity(&w.negate()).unwrap(), Some(6));
        assert_eq!(is_root_of_unity(&w.plus(&k.one()).plus(&k.one())).unwrap(), None);
        assert_eq!(is_root_of_unity(&k.from_rational(&rat(-1, 1))).unwrap(), Some(2));
        assert_eq!(is_root_of_unity(&k.from_rational(&rat(2, 1))).unwrap(), None);
        assert!(is_root_of_unity(&k.zero()).is_err());
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }
}
