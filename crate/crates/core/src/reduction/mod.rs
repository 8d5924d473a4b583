//! Local reduction data: minimal models, Kodaira types and Tamagawa
//! numbers, and the sets of values `W_ℓ` taken by the local height on
//! integral points.

mod tate;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::curve::{ModelTransform, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exact::primes::{factor_integer, prime_divisors};
use crate::exact::scalar::int_valuation;
use crate::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    I0,
    I(u32),
    II,
    III,
    IV,
    I0Star,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::I(m) => write!(f, "I{m}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::I0Star => write!(f, "I0*"),
            KodairaType::IStar(m) => write!(f, "I{m}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionProfile {
    pub prime: BigInt,
    pub kodaira: KodairaType,
    pub tamagawa: u32,
    /// Split (`true`) or non-split multiplicative reduction.
    pub split: Option<bool>,
    pub v_delta_min: u32,
    /// From the input model to the model on which the algorithm stopped.
    pub minimal_transform: ModelTransform,
}

/// A finite set of rationals, printed in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValueSet(BTreeSet<Rational>);

impl ValueSet {
    pub fn new(values: impl IntoIterator<Item = Rational>) -> Self {
        ValueSet(values.into_iter().collect())
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter().rev()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.0.contains(v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn shift(&self, by: &Rational) -> Self {
        ValueSet(self.0.iter().map(|v| v + by).collect())
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A global minimal model in reduced form (`a1, a3 ∈ {0, 1}`,
/// `a2 ∈ {−1, 0, 1}`) and the transform reaching it.
pub fn minimal_model(model: &WeierstrassModel) -> Result<(WeierstrassModel, ModelTransform)> {
    // Make the model integral: x = x'/D², y = y'/D³.
    let mut scale = BigInt::one();
    for (i, a) in model.a_invariants().iter().enumerate() {
        let weight = [1u64, 2, 3, 4, 6][i];
        for (p, e) in factor_integer(a.denom()) {
            let need = (e as u64).div_ceil(weight);
            let have = int_valuation(&scale, &p);
            if need > have {
                scale *= num_traits::pow(p, (need - have) as usize);
            }
        }
    }
    let mut transform = ModelTransform {
        u: Rational::new(BigInt::one(), scale),
        r: Rational::zero(),
        s: Rational::zero(),
        t: Rational::zero(),
    };
    let mut current = transform.apply_to(model);
    let disc = current.discriminant().to_integer();
    for (p, e) in factor_integer(&disc) {
        if e < 12 {
            continue;
        }
        let (profile, next, _) = tate::run(&current, &p)?;
        transform = transform.then(&profile.minimal_transform);
        current = next;
    }
    let reduce = reduced_form_transform(&current);
    Ok((reduce.apply_to(&current), transform.then(&reduce)))
}

fn reduced_form_transform(model: &WeierstrassModel) -> ModelTransform {
    let [a1, a2, a3, _, _] = model.a_invariants().clone().map(|c| c.to_integer());
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let s = -a1.div_floor(&two);
    let m = &a2 - &s * &a1 - &s * &s;
    let r = -(m + BigInt::one()).div_floor(&three);
    let t = -(&a3 + &r * &a1).div_floor(&two);
    let q = Rational::from_integer;
    ModelTransform { u: Rational::one(), r: q(r), s: q(s), t: q(t) }
}

/// Whether the model is integral and minimal at every prime.
pub fn is_globally_minimal(model: &WeierstrassModel) -> Result<bool> {
    if !model.is_integral() {
        return Ok(false);
    }
    let (min, _) = minimal_model(model)?;
    Ok(min.discriminant().abs() == model.discriminant().abs())
}

/// Tate's algorithm at `p` on a model minimal at `p`.
pub fn tate_local(model: &WeierstrassModel, p: &BigInt) -> Result<ReductionProfile> {
    let (profile, _, scaled) = tate::run(model, p)?;
    if scaled {
        return Err(Error::Contract(format!("model is not minimal at {p}")));
    }
    Ok(profile)
}

/// Primes of bad reduction of the curve.
pub fn bad_primes(model: &WeierstrassModel) -> Result<Vec<BigInt>> {
    let (min, _) = minimal_model(model)?;
    Ok(prime_divisors(&min.discriminant().to_integer()))
}

/// Smooth affine points of the reduction mod `ℓ`, by exhaustive search.
pub fn count_affine_smooth_points_mod_l(model: &WeierstrassModel, l: &BigInt) -> Result<u64> {
    let p = l
        .to_u64()
        .filter(|&p| p <= 1 << 16)
        .ok_or_else(|| Error::Capability(format!("exhaustive point count modulo {l}")))?;
    let pb = BigInt::from(p);
    let a: Vec<u64> = model
        .a_invariants()
        .iter()
        .map(|c| {
            if (c.denom() % &pb).is_zero() {
                return Err(Error::Domain(format!("model is not integral at {l}")));
            }
            let inv = c.denom().modpow(&(&pb - BigInt::from(2)), &pb);
            Ok((c.numer() * inv).mod_floor(&pb).to_u64().unwrap())
        })
        .collect::<Result<_>>()?;
    let (a1, a2, a3, a4, a6) = (a[0], a[1], a[2], a[3], a[4]);
    let mut count = 0;
    for x in 0..p {
        let rhs = (((x + a2) * x % p + a4) * x % p + a6) % p;
        let fx = (3 * x % p * x % p + 2 * a2 * x % p + a4) % p;
        for y in 0..p {
            let lhs = (y * y % p + a1 * x % p * y % p + a3 * y % p) % p;
            if lhs != rhs {
                continue;
            }
            // ∂F/∂x = a1·y − (3x² + 2a2·x + a4), ∂F/∂y = 2y + a1·x + a3.
            let dx = (a1 * y % p + p - fx) % p;
            let dy = (2 * y + a1 * x + a3) % p;
            if dx != 0 || dy != 0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The values of the local height on integral points of a minimal model,
/// as a function of the reduction type.
pub fn w_min(profile: &ReductionProfile, good_point_count: u64, l: &BigInt) -> Result<ValueSet> {
    let c = profile.tamagawa;
    let bad = || Error::Data(format!("no value set for type {} with Tamagawa number {c}", profile.kodaira));
    let set = match profile.kodaira {
        KodairaType::I0 => {
            if c != 1 {
                return Err(bad());
            }
            if good_point_count >= 1 {
                ValueSet::new([q(0, 1)])
            } else {
                ValueSet::default()
            }
        }
        KodairaType::I(m) => {
            let m = m as i64;
            match profile.split {
                Some(true) if c as i64 == m => {
                    let start = if *l == BigInt::from(2) { 1 } else { 0 };
                    ValueSet::new((start..=m / 2).map(|i| q(-i * (m - i), 2 * m)))
                }
                Some(false) if m % 2 == 1 && c == 1 => ValueSet::new([q(0, 1)]),
                Some(false) if m % 2 == 0 && c == 2 => ValueSet::new([q(0, 1), q(-m, 8)]),
                _ => return Err(bad()),
            }
        }
        KodairaType::II if c == 1 => ValueSet::new([q(0, 1)]),
        KodairaType::III if c == 2 => ValueSet::new([q(0, 1), q(-1, 4)]),
        KodairaType::IV if c == 1 => ValueSet::new([q(0, 1)]),
        KodairaType::IV if c == 3 => ValueSet::new([q(0, 1), q(-1, 3)]),
        KodairaType::I0Star if c == 1 => ValueSet::new([q(0, 1)]),
        KodairaType::I0Star if c == 2 || c == 4 => ValueSet::new([q(0, 1), q(-1, 2)]),
        KodairaType::IStar(_) if c == 2 => ValueSet::new([q(0, 1), q(-1, 2)]),
        KodairaType::IStar(m) if c == 4 => ValueSet::new([q(0, 1), q(-1, 2), q(-(m as i64 + 4), 8)]),
        KodairaType::IVStar if c == 1 => ValueSet::new([q(0, 1)]),
        KodairaType::IVStar if c == 3 => ValueSet::new([q(0, 1), q(-2, 3)]),
        KodairaType::IIIStar if c == 2 => ValueSet::new([q(0, 1), q(-3, 4)]),
        KodairaType::IIStar if c == 1 => ValueSet::new([q(0, 1)]),
        _ => return Err(bad()),
    };
    Ok(set)
}

/// Local data of the curve at one prime, for any model of it.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalValues {
    pub profile: ReductionProfile,
    pub w_min: ValueSet,
    pub w_st: ValueSet,
}

/// `W_ℓ^st = W_ℓ^min + v_ℓ(Δ_min)/12`, computed on a minimal model.
pub fn w_st(model: &WeierstrassModel, l: &BigInt) -> Result<ValueSet> {
    let (min, _) = minimal_model(model)?;
    Ok(local_values(&min, l)?.w_st)
}

/// Profile and value sets at `ℓ` for a globally minimal model.
pub fn local_values(minimal: &WeierstrassModel, l: &BigInt) -> Result<LocalValues> {
    let profile = tate_local(minimal, l)?;
    let count = if profile.kodaira == KodairaType::I0 && *l < BigInt::from(5) {
        count_affine_smooth_points_mod_l(minimal, l)?
    } else {
        1
    };
    let w_min = w_min(&profile, count, l)?;
    let w_st = w_min.shift(&q(profile.v_delta_min as i64, 12));
    Ok(LocalValues { profile, w_min, w_st })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn kodaira_types_of_8712_u5() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap();
        let expect = [(2, KodairaType::III, 2, 4), (3, KodairaType::IStar(1), 4, 7), (11, KodairaType::I0Star, 2, 6)];
        for (p, kod, c, vd) in expect {
            let prof = tate_local(&e, &b(p)).unwrap();
            assert_eq!((prof.kodaira, prof.tamagawa, prof.v_delta_min), (kod, c, vd), "p = {p}");
        }
        assert_eq!(tate_local(&e, &b(5)).unwrap().kodaira, KodairaType::I0);
    }

    #[test]
    fn stable_value_sets_of_8712_u5() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap();
        let w = |p| w_st(&e, &b(p)).unwrap();
        assert_eq!(w(2), ValueSet::new([rat(1, 3), rat(1, 12)]));
        assert_eq!(w(3), ValueSet::new([rat(7, 12), rat(1, 12), rat(-1, 24)]));
        assert_eq!(w(11), ValueSet::new([rat(1, 2), rat(0, 1)]));
        assert_eq!(w(5), ValueSet::new([rat(0, 1)]));
        assert_eq!(w(2).to_string(), "{1/3, 1/12}");
    }

    #[test]
    fn minimal_model_of_short_49a3() {
        let short = WeierstrassModel::new([rat(0, 1), rat(0, 1), rat(0, 1), rat(-595, 1), rat(-5586, 1)]).unwrap();
        let (min, t) = minimal_model(&short).unwrap();
        assert_eq!(min, WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap());
        assert_eq!(t.apply_to(&short), min);
        let e = WeierstrassModel::from_i64([1, -1, 0, -37, -78]).unwrap();
        let (same, t) = minimal_model(&e).unwrap();
        assert_eq!(same, e);
        assert!(t.is_identity());
    }

    #[test]
    fn minimal_model_clears_denominators() {
        let e = WeierstrassModel::new([rat(0, 1), rat(0, 1), rat(0, 1), rat(726, 16), rat(9317, 64)]).unwrap();
        let (min, _) = minimal_model(&e).unwrap();
        assert_eq!(min, WeierstrassModel::from_i64([0, 0, 0, 726, 9317]).unwrap());
    }

    #[test]
    fn table_rows() {
        let prof = |kodaira, tamagawa, split| ReductionProfile {
            prime: b(3),
            kodaira,
            tamagawa,
            split,
            v_delta_min: 1,
            minimal_transform: ModelTransform::identity(),
        };
        assert_eq!(
            w_min(&prof(KodairaType::IStar(1), 4, None), 1, &b(3)).unwrap(),
            ValueSet::new([rat(0, 1), rat(-1, 2), rat(-5, 8)])
        );
        assert_eq!(
            w_min(&prof(KodairaType::I(5), 5, Some(true)), 1, &b(3)).unwrap(),
            ValueSet::new([rat(0, 1), rat(-2, 5), rat(-3, 5)])
        );
        assert_eq!(
            w_min(&prof(KodairaType::I(4), 4, Some(true)), 1, &b(2)).unwrap(),
            ValueSet::new([rat(-3, 8), rat(-1, 2)])
        );
        assert!(w_min(&prof(KodairaType::III, 1, None), 1, &b(3)).is_err());
        assert!(w_min(&prof(KodairaType::I0, 1, None), 0, &b(2)).unwrap().is_empty());
    }

    #[test]
    fn point_counts() {
        // y² + y = x³ + x² + 1 over F_2: x = 0 gives y² + y = 1, x = 1 gives y² + y = 1.
        let e = WeierstrassModel::from_i64([0, 1, 1, 0, 1]).unwrap();
        assert_eq!(count_affine_smooth_points_mod_l(&e, &b(2)).unwrap(), 0);
        let e = WeierstrassModel::from_i64([0, 0, 1, -1, 0]).unwrap();
        assert!(count_affine_smooth_points_mod_l(&e, &b(5)).unwrap() >= 1);
    }

    #[test]
    fn non_minimal_input_is_a_contract_violation() {
        let e = WeierstrassModel::from_i64([0, 0, 0, -595, -5586]).unwrap();
        assert!(matches!(tate_local(&e, &b(2)), Err(Error::Contract(_))));
    }
}
