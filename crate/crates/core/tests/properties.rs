use num_bigint::BigInt;
use proptest::prelude::*;

use chabauty::curve::{laurent_at_infinity, small_rational_points, CurvePoint, ModelTransform, WeierstrassModel};
use chabauty::exact::{
    is_root_of_unity, poly_factor, radical_rational_part, radical_valuation, rat, tower_minimal_polynomial, FormalRadical,
    NumberTower, Rational, RationalPolynomial, Scalar,
};
use chabauty::nilpotent::witt_free_dim;
use chabauty::reduction::ValueSet;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("non-zero", |q| *q != rat(0, 1))
}

fn transform() -> impl Strategy<Value = ModelTransform> {
    (nonzero_rational(), small_rational(), small_rational(), small_rational())
        .prop_map(|(u, r, s, t)| ModelTransform::new(u, r, s, t).unwrap())
}

fn expand(factors: &[(RationalPolynomial, u32)]) -> RationalPolynomial {
    factors.iter().fold(RationalPolynomial::from_i64(&[1]), |acc, (f, e)| acc.mul(&f.pow(*e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factorization_reexpands(roots in prop::collection::vec(-5i64..=5, 1..4), quad in -6i64..=6, extra in 0usize..3) {
        let mut f = RationalPolynomial::from_i64(&[quad, 0, 1]);
        for r in &roots {
            f = f.mul(&RationalPolynomial::from_i64(&[-r, 1]));
        }
        for _ in 0..extra {
            f = f.mul(&RationalPolynomial::from_i64(&[1, 1, 1]));
        }
        let factors = poly_factor(&f).unwrap();
        prop_assert_eq!(expand(&factors).monic(), f.monic());
    }

    #[test]
    fn minimal_polynomial_vanishes(c0 in -12i64..=12, a in small_rational(), b in nonzero_rational()) {
        prop_assume!(!matches!(c0, 0 | 1 | 4 | 9));
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[-c0, 0, 1]));
        let alpha = k.base_element(RationalPolynomial::new(vec![a, b]));
        let f = tower_minimal_polynomial(&alpha);
        prop_assert!(f.eval_in(&alpha).vanishes());
        prop_assert_eq!(f.degree(), Some(2));
    }

    #[test]
    fn roots_of_unity_have_exact_order(k in 0u64..6) {
        // ζ₆ = (1 + √−3)/2 generates the roots of unity of ℚ(√−3).
        let f = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[3, 0, 1]));
        let zeta = f.base_element(RationalPolynomial::new(vec![rat(1, 2), rat(1, 2)]));
        let g = zeta.pow_i(k as i64).unwrap();
        let w = is_root_of_unity(&g).unwrap().expect("a root of unity");
        prop_assert!(g.pow_i(w as i64).unwrap().is_unity());
        for j in 1..w {
            prop_assert!(!g.pow_i(j as i64).unwrap().is_unity());
        }
        prop_assert_eq!(w, 6 / num_integer::gcd(k, 6));
    }

    #[test]
    fn rational_part_is_stable_under_rewriting(n in 1i64..200, d in 1i64..50, num in -4i64..=4, den in 1i64..=4) {
        prop_assume!(num != 0);
        let e = rat(num, den);
        let k = NumberTower::from_irreducible(RationalPolynomial::from_i64(&[7, 0, 1]));
        let alpha = k.from_rational(&rat(n, d));
        let r = FormalRadical::algebraic(alpha.clone(), e.clone()).unwrap();
        let base = radical_rational_part(&r).unwrap();
        prop_assert!(base.is_some());
        let squared = FormalRadical::algebraic(alpha.times(&alpha), &e / rat(2, 1)).unwrap();
        prop_assert_eq!(radical_rational_part(&squared).unwrap(), base.clone());
        let negated = FormalRadical::algebraic(alpha.negate(), e).unwrap();
        prop_assert_eq!(radical_rational_part(&negated).unwrap(), base.clone());
        let map = base.unwrap();
        for ell in [2i64, 3, 5, 7, 11, 13] {
            let ell = BigInt::from(ell);
            let divides = |m: i64| BigInt::from(m) % &ell == BigInt::from(0);
            if !divides(n) && !divides(d) {
                prop_assert_eq!(radical_valuation(&map, &ell), rat(0, 1));
            }
        }
    }

    #[test]
    fn transforms_compose_and_invert(t1 in transform(), t2 in transform()) {
        let e = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        let both = t1.then(&t2);
        prop_assert_eq!(both.apply_to(&e), t2.apply_to(&t1.apply_to(&e)));
        prop_assert_eq!(t1.inverse().apply_to(&t1.apply_to(&e)), e.clone());
        let image = t1.apply_to(&e);
        prop_assert_eq!(image.discriminant(), e.discriminant() * t1.u.pow(-12));
    }

    #[test]
    fn group_law_is_compatible_with_transforms(t in transform(), m in -5i64..=5, n in -5i64..=5) {
        let e = WeierstrassModel::from_i64([0, 0, 1, -1, 0]).unwrap();
        let p = small_rational_points(&e, 2).into_iter().find(|p| !p.is_infinity()).unwrap();
        let sum = e.add(&e.mul(m, &p).unwrap(), &e.mul(n, &p).unwrap()).unwrap();
        prop_assert_eq!(sum.clone(), e.mul(m + n, &p).unwrap());
        let image = t.apply_to(&e);
        let map = |q: &CurvePoint<Rational>| match q.coordinates() {
            None => CurvePoint::Infinity,
            Some((x, y)) => {
                let (x2, y2) = t.map_xy(x, y);
                CurvePoint::affine(x2, y2)
            }
        };
        let lhs = map(&sum);
        let rhs = image.add(&image.mul(m, &map(&p)).unwrap(), &image.mul(n, &map(&p)).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn expansion_satisfies_the_curve(a in prop::collection::vec(-9i64..=9, 5)) {
        let model = WeierstrassModel::from_i64([a[0], a[1], a[2], a[3], a[4]]);
        prop_assume!(model.is_ok());
        let e = model.unwrap();
        let ex = laurent_at_infinity(&e, 8).unwrap();
        let f = ex
            .y
            .mul(&ex.y)
            .add(&ex.x.mul(&ex.y).scale(e.a1()))
            .add(&ex.y.scale(e.a3()))
            .sub(&ex.x.eval_polynomial(&e.cubic_polynomial()));
        prop_assert!(f.is_zero_to_precision());
    }

    #[test]
    fn witt_dimensions_sum_to_powers(k in 1u64..6, n in 1u64..10) {
        let total = (1..=n).filter(|d| n % d == 0).fold(BigInt::from(0), |acc, d| acc + witt_free_dim(k, d).unwrap() * d);
        prop_assert_eq!(total, num_traits::pow(BigInt::from(k), n as usize));
    }

    #[test]
    fn value_set_shifts_compose(v in prop::collection::vec(small_rational(), 0..5), a in small_rational(), b in small_rational()) {
        let w = ValueSet::new(v);
        prop_assert_eq!(w.shift(&a).shift(&b), w.shift(&(&a + &b)));
        prop_assert_eq!(w.shift(&a).len(), w.len());
    }
}
