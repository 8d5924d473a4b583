//! Tate's algorithm over ℤ_ℓ, following Cremona's formulation, with the
//! change of coordinates tracked as a [`ModelTransform`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{KodairaType, ReductionProfile};
use crate::curve::{ModelTransform, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exact::modp;
use crate::exact::Rational;

/// Integral a-invariants at the prime, with the transform applied so far.
struct Local<'a> {
    p: &'a BigInt,
    model: WeierstrassModel,
    transform: ModelTransform,
}

fn int(q: &Rational) -> BigInt {
    debug_assert!(q.is_integer());
    q.to_integer()
}

impl<'a> Local<'a> {
    fn a(&self) -> [BigInt; 5] {
        self.model.a_invariants().clone().map(|c| int(&c))
    }

    fn apply(&mut self, t: ModelTransform) {
        self.model = t.apply_to(&self.model);
        self.transform = self.transform.then(&t);
    }

    fn rst(&mut self, r: BigInt, s: BigInt, t: BigInt) {
        let q = |n: BigInt| Rational::from_integer(n);
        self.apply(ModelTransform { u: Rational::one(), r: q(r), s: q(s), t: q(t) });
    }

    fn val(&self, x: &BigInt) -> u32 {
        if x.is_zero() {
            return u32::MAX;
        }
        let mut n = x.abs();
        let mut v = 0;
        while (&n % self.p).is_zero() {
            n /= self.p;
            v += 1;
        }
        v
    }

    fn divides(&self, x: &BigInt) -> bool {
        (x % self.p).is_zero()
    }

    fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(self.p)
    }

    fn inv(&self, x: &BigInt) -> BigInt {
        let g = x.mod_floor(self.p).extended_gcd(self.p);
        debug_assert!(g.gcd.is_one());
        g.x.mod_floor(self.p)
    }

    fn half(&self) -> BigInt {
        self.inv(&BigInt::from(2))
    }

    fn pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.p.clone(), k as usize)
    }

    fn exact(&self, x: &BigInt, d: &BigInt) -> BigInt {
        let (q, r) = x.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division in Tate's algorithm");
        q
    }

    /// Whether `a·T² + b·T + c` has a root mod `p`.
    fn quadratic_has_root(&self, a: &BigInt, b: &BigInt, c: &BigInt) -> Result<bool> {
        if *self.p == BigInt::from(2) {
            let f = |t: i32| (a * t * t + b * t + c).is_even();
            return Ok(f(0) || f(1));
        }
        let (a, b, c) = (self.reduce(a), self.reduce(b), self.reduce(c));
        if a.is_zero() {
            return Ok(!b.is_zero() || c.is_zero());
        }
        let disc = self.reduce(&(&b * &b - BigInt::from(4) * &a * &c));
        if disc.is_zero() {
            return Ok(true);
        }
        let e = (self.p - BigInt::one()) / BigInt::from(2);
        Ok(disc.modpow(&e, self.p).is_one())
    }

    /// Number of roots of `T³ + b·T² + c·T + d` mod `p`.
    fn cubic_roots(&self, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<u32> {
        let p = self
            .p
            .to_u64()
            .filter(|&p| p < 1 << 31)
            .ok_or_else(|| Error::Capability("cubic root count modulo a prime ≥ 2^31".into()))?;
        let f = modp::from_bigints(&[d.clone(), c.clone(), b.clone(), BigInt::one()], p);
        Ok(modp::count_roots(&f, p) as u32)
    }
}

fn invariants_int(model: &WeierstrassModel) -> (BigInt, BigInt, BigInt, BigInt, BigInt, BigInt, BigInt) {
    let inv = model.invariants();
    (int(&inv.b2), int(&inv.b4), int(&inv.b6), int(&inv.b8), int(&inv.c4), int(&inv.c6), int(&inv.discriminant))
}

/// Runs Tate's algorithm on a model integral at `p`. Returns the profile
/// and whether the model had to be scaled down (i.e. was not minimal).
pub(super) fn run(model: &WeierstrassModel, p: &BigInt) -> Result<(ReductionProfile, WeierstrassModel, bool)> {
    if model.a_invariants().iter().any(|a| (a.denom() % p).is_zero()) {
        return Err(Error::Contract(format!("model is not integral at {p}")));
    }
    let mut st = Local { p, model: model.clone(), transform: ModelTransform::identity() };
    // Denominators prime to p are cleared by a scaling that is a unit at p.
    let den = model.a_invariants().iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    if !den.is_one() {
        st.apply(ModelTransform {
            u: Rational::new(BigInt::one(), den),
            r: Rational::zero(),
            s: Rational::zero(),
            t: Rational::zero(),
        });
    }
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let is2 = *p == two;
    let is3 = *p == three;
    let mut scaled = false;
    loop {
        let (b2, b4, b6, _, c4, c6, disc) = invariants_int(&st.model);
        let vd = st.val(&disc);
        if vd == 0 {
            return Ok((profile(p, KodairaType::I0, 1, None, 0, &st), st.model, scaled));
        }
        let [a1, a2, a3, a4, a6] = st.a();
        let (r, t) = if is2 {
            if st.divides(&b2) {
                let r = st.reduce(&a4);
                let t = st.reduce(&(((&r + &a2) * &r + &a4) * &r + &a6));
                (r, t)
            } else {
                let inv = st.inv(&a1);
                let r = &inv * &a3;
                let t = &inv * (&a4 + &r * &r);
                (r, t)
            }
        } else if is3 {
            let r = if st.divides(&b2) { st.reduce(&-&b6) } else { -st.inv(&b2) * &b4 };
            let t = &a1 * &r + &a3;
            (r, t)
        } else {
            let r = if st.divides(&c4) {
                -st.inv(&BigInt::from(12)) * &b2
            } else {
                -st.inv(&(BigInt::from(12) * &c4)) * (&c6 + &b2 * &c4)
            };
            let t = -st.half() * (&a1 * &r + &a3);
            (r, t)
        };
        let (r, t) = (st.reduce(&r), st.reduce(&t));
        st.rst(r, BigInt::zero(), t);
        let [a1, a2, a3, _, a6] = st.a();
        let (_, _, b6, b8, _, _, _) = invariants_int(&st.model);

        if st.val(&c4) == 0 {
            let split = st.quadratic_has_root(&BigInt::one(), &a1, &-&a2)?;
            let c = if split {
                vd
            } else if vd.is_multiple_of(2) {
                2
            } else {
                1
            };
            return Ok((profile(p, KodairaType::I(vd), c, Some(split), vd, &st), st.model, scaled));
        }
        if st.val(&a6) < 2 {
            return Ok((profile(p, KodairaType::II, 1, None, vd, &st), st.model, scaled));
        }
        if st.val(&b8) < 3 {
            return Ok((profile(p, KodairaType::III, 2, None, vd, &st), st.model, scaled));
        }
        if st.val(&b6) < 3 {
            let has = st.quadratic_has_root(&BigInt::one(), &st.exact(&a3, p), &-st.exact(&a6, &st.pow(2)))?;
            let c = if has { 3 } else { 1 };
            return Ok((profile(p, KodairaType::IV, c, None, vd, &st), st.model, scaled));
        }

        let (s, t) = if is2 {
            (st.reduce(&a2), p * st.reduce(&st.exact(&a6, &st.pow(2))))
        } else if is3 {
            (a1.clone(), a3.clone())
        } else {
            (-&a1 * st.half(), -&a3 * st.half())
        };
        st.rst(BigInt::zero(), s, t);
        let [_, a2, _, a4, a6] = st.a();

        let b = st.reduce(&st.exact(&a2, p));
        let c = st.reduce(&st.exact(&a4, &st.pow(2)));
        let d = st.reduce(&st.exact(&a6, &st.pow(3)));
        let (bb, cc, bc) = (&b * &b, &c * &c, &b * &c);
        let w = BigInt::from(27) * &d * &d - &bb * &cc + BigInt::from(4) * &b * &bb * &d - BigInt::from(18) * &bc * &d
            + BigInt::from(4) * &c * &cc;
        let x = BigInt::from(3) * &c - &bb;
        let sw = if st.divides(&w) {
            if st.divides(&x) {
                3
            } else {
                2
            }
        } else {
            1
        };

        if sw == 1 {
            let c = 1 + st.cubic_roots(&b, &c, &d)?;
            return Ok((profile(p, KodairaType::I0Star, c, None, vd, &st), st.model, scaled));
        }

        if sw == 2 {
            let r = if is2 {
                st.reduce(&c)
            } else if is3 {
                &c * st.inv(&b)
            } else {
                (&bc - BigInt::from(9) * &d) * st.inv(&(BigInt::from(2) * &x))
            };
            let r = p * st.reduce(&r);
            st.rst(r, BigInt::zero(), BigInt::zero());
            let (mut ix, mut iy) = (3u32, 3u32);
            let mut mx = st.pow(2);
            let mut my = mx.clone();
            let cp;
            loop {
                let [_, _, a3, _, a6] = st.a();
                let a3t = st.exact(&a3, &my);
                let a6t = st.exact(&a6, &(&mx * &my));
                if st.divides(&(&a3t * &a3t + BigInt::from(4) * &a6t)) {
                    let t = if is2 { &my * st.reduce(&a6t) } else { &my * st.reduce(&(-&a3t * st.half())) };
                    st.rst(BigInt::zero(), BigInt::zero(), t);
                    my *= p;
                    iy += 1;
                    let [_, a2, _, a4, a6] = st.a();
                    let a2t = st.exact(&a2, p);
                    let a4t = st.exact(&a4, &(p * &mx));
                    let a6t = st.exact(&a6, &(&mx * &my));
                    if st.divides(&(&a4t * &a4t - BigInt::from(4) * &a6t * &a2t)) {
                        let r = if is2 {
                            &mx * st.reduce(&(&a6t * st.inv(&a2t)))
                        } else {
                            &mx * st.reduce(&(-&a4t * st.inv(&(BigInt::from(2) * &a2t))))
                        };
                        st.rst(r, BigInt::zero(), BigInt::zero());
                        mx *= p;
                        ix += 1;
                    } else {
                        cp = if st.quadratic_has_root(&a2t, &a4t, &a6t)? { 4 } else { 2 };
                        break;
                    }
                } else {
                    cp = if st.quadratic_has_root(&BigInt::one(), &a3t, &-&a6t)? { 4 } else { 2 };
                    break;
                }
            }
            let m = ix + iy - 5;
            return Ok((profile(p, KodairaType::IStar(m), cp, None, vd, &st), st.model, scaled));
        }

        // Triple root.
        let r = if is2 {
            b.clone()
        } else if is3 {
            st.reduce(&-&d)
        } else {
            -&b * st.inv(&three)
        };
        let r = p * st.reduce(&r);
        st.rst(r, BigInt::zero(), BigInt::zero());
        let [_, _, a3, _, a6] = st.a();
        let a3t = st.exact(&a3, &st.pow(2));
        let a6t = st.exact(&a6, &st.pow(4));
        if !st.divides(&(&a3t * &a3t + BigInt::from(4) * &a6t)) {
            let c = if st.quadratic_has_root(&BigInt::one(), &a3t, &-&a6t)? { 3 } else { 1 };
            return Ok((profile(p, KodairaType::IVStar, c, None, vd, &st), st.model, scaled));
        }
        let t = if is2 { -st.pow(2) * st.reduce(&a6t) } else { st.pow(2) * st.reduce(&(-&a3t * st.half())) };
        st.rst(BigInt::zero(), BigInt::zero(), t);
        let [_, _, _, a4, a6] = st.a();
        if st.val(&a4) < 4 {
            return Ok((profile(p, KodairaType::IIIStar, 2, None, vd, &st), st.model, scaled));
        }
        if st.val(&a6) < 6 {
            return Ok((profile(p, KodairaType::IIStar, 1, None, vd, &st), st.model, scaled));
        }
        // Not minimal: divide a_i by p^i and start over.
        let pq = Rational::from_integer(p.clone());
        st.apply(ModelTransform { u: pq, r: Rational::zero(), s: Rational::zero(), t: Rational::zero() });
        scaled = true;
    }
}

fn profile(p: &BigInt, kodaira: KodairaType, tamagawa: u32, split: Option<bool>, vd: u32, st: &Local) -> ReductionProfile {
    ReductionProfile {
        prime: p.clone(),
        kodaira,
        tamagawa,
        split,
        v_delta_min: vd,
        minimal_transform: st.transform.clone(),
    }
}
