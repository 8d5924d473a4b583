//! The locus `Z`: nonzero torsion points `Q` with `H^st(Q) ∈ ℚ⊗ℚ^×` and
//! `v_ℓ(H^st(Q)) ∈ W_ℓ^st` for every prime `ℓ`.
//!
//! Only finitely many primes need checking: away from the bad primes of the
//! minimal model, from 2 and 3 and from the primes in the support of
//! `H^st(Q)`, the valuation is 0 and `W_ℓ^st = {0}`.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::curve::{
    points_of_exact_order, primitive_torsion_polynomials, CurvePoint, DivisionPolynomials, ExcludedTorsion,
    TorsionEnumeration, TorsionPoint, WeierstrassModel,
};
use crate::error::{Error, Result};
use crate::exact::primes::is_prime;
use crate::exact::{count_roots_qp, radical_valuation, NumberTower, Rational, RationalPolynomial, Scalar, TowerElement};
use crate::reduction::{bad_primes, local_values, minimal_model, LocalValues, ValueSet};
use crate::residue::{hst_with, HstValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// `H^st(Q)` is not in `ℚ⊗ℚ^×`.
    MembershipFailed,
    /// `v_ℓ(H^st(Q)) ∉ W_ℓ^st`.
    ValuationFailed(BigInt),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::MembershipFailed => write!(f, "membership-failed"),
            Rejection::ValuationFailed(l) => write!(f, "valuation-failed({l})"),
        }
    }
}

/// `v_ℓ(H^st(Q))` against `W_ℓ^st` at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeCheck {
    pub prime: BigInt,
    pub valuation: Rational,
    pub w_st: ValueSet,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusDecision {
    pub member: bool,
    pub hst: HstValue,
    pub checks: Vec<PrimeCheck>,
    pub rejection: Option<Rejection>,
}

/// Per-curve data shared by all membership decisions.
#[derive(Debug)]
pub struct LocusContext {
    psi: DivisionPolynomials,
    minimal: WeierstrassModel,
    local: BTreeMap<BigInt, LocalValues>,
}

impl LocusContext {
    pub fn new(model: &WeierstrassModel) -> Result<Self> {
        let (minimal, _) = minimal_model(model)?;
        let mut primes: BTreeSet<BigInt> = bad_primes(&minimal)?.into_iter().collect();
        primes.insert(BigInt::from(2));
        primes.insert(BigInt::from(3));
        let local = primes
            .into_iter()
            .map(|l| local_values(&minimal, &l).map(|v| (l, v)))
            .collect::<Result<_>>()?;
        Ok(LocusContext { psi: DivisionPolynomials::new(model), minimal, local })
    }

    pub fn model(&self) -> &WeierstrassModel {
        self.psi.model()
    }

    pub fn minimal_model(&self) -> &WeierstrassModel {
        &self.minimal
    }

    /// Profiles and value sets at the bad primes and at 2 and 3.
    pub fn local_data(&self) -> &BTreeMap<BigInt, LocalValues> {
        &self.local
    }

    pub fn local_values(&self, l: &BigInt) -> Result<Cow<'_, LocalValues>> {
        match self.local.get(l) {
            Some(v) => Ok(Cow::Borrowed(v)),
            None => Ok(Cow::Owned(local_values(&self.minimal, l)?)),
        }
    }

    /// Decides `Q ∈ Z` for a point killed by `n`.
    pub fn decide(&self, q: &CurvePoint<TowerElement>, n: u64) -> Result<LocusDecision> {
        let hst = hst_with(&self.psi, q, n)?;
        let Some(part) = hst.rational_part.clone() else {
            return Ok(LocusDecision { member: false, hst, checks: Vec::new(), rejection: Some(Rejection::MembershipFailed) });
        };
        let primes: BTreeSet<BigInt> = self.local.keys().chain(part.keys()).cloned().collect();
        let mut checks = Vec::with_capacity(primes.len());
        let mut rejection = None;
        for l in primes {
            let valuation = radical_valuation(&part, &l);
            let w_st = self.local_values(&l)?.w_st.clone();
            let passed = w_st.contains(&valuation);
            if !passed && rejection.is_none() {
                rejection = Some(Rejection::ValuationFailed(l.clone()));
            }
            checks.push(PrimeCheck { prime: l, valuation, w_st, passed });
        }
        Ok(LocusDecision { member: rejection.is_none(), hst, checks, rejection })
    }
}

/// Membership of a single nonzero torsion point killed by `n`.
pub fn point_in_locus(model: &WeierstrassModel, q: &CurvePoint<TowerElement>, n: u64) -> Result<LocusDecision> {
    LocusContext::new(model)?.decide(q, n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusMember {
    pub torsion: TorsionPoint,
    pub decision: LocusDecision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completeness {
    /// Every torsion point within the order and degree bounds was decided.
    /// Nothing is claimed beyond the bounds.
    CompleteWithinBounds,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Completeness::CompleteWithinBounds => write!(f, "complete-within-bounds"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocusReport {
    pub curve: WeierstrassModel,
    pub minimal: WeierstrassModel,
    pub n_max: u64,
    pub degree_max: usize,
    pub members: Vec<LocusMember>,
    pub rejected: Vec<LocusMember>,
    /// Torsion whose field of definition is beyond `degree_max`.
    pub excluded: Vec<ExcludedTorsion>,
    pub completeness: Completeness,
    /// Every Galois orbit is entirely in or entirely out.
    pub galois_stable: bool,
}

pub fn locus_compute(model: &WeierstrassModel, n_max: u64, degree_max: usize) -> Result<LocusReport> {
    locus_compute_with_jobs(model, n_max, degree_max, 1)
}

/// As [`locus_compute`], spreading orders and points over `jobs` threads.
/// The report does not depend on `jobs`.
pub fn locus_compute_with_jobs(model: &WeierstrassModel, n_max: u64, degree_max: usize, jobs: usize) -> Result<LocusReport> {
    if n_max < 2 || degree_max < 1 {
        return Err(Error::Domain("need n_max ≥ 2 and degree_max ≥ 1".into()));
    }
    let ctx = LocusContext::new(model)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let lambdas = primitive_torsion_polynomials(&ctx.psi, n_max)?;
    let (enumeration, decisions) = pool.install(|| -> Result<_> {
        let parts = lambdas
            .par_iter()
            .map(|(n, lam)| points_of_exact_order(model, *n, lam, degree_max))
            .collect::<Result<Vec<_>>>()?;
        let enumeration = crate::curve::merge_enumerations(parts);
        let decisions = enumeration
            .points
            .par_iter()
            .map(|t| ctx.decide(&t.point, t.order))
            .collect::<Result<Vec<_>>>()?;
        Ok((enumeration, decisions))
    })?;
    Ok(assemble(&ctx, n_max, degree_max, enumeration, decisions))
}

fn assemble(
    ctx: &LocusContext,
    n_max: u64,
    degree_max: usize,
    enumeration: TorsionEnumeration,
    decisions: Vec<LocusDecision>,
) -> LocusReport {
    let mut orbit_verdicts: BTreeMap<usize, BTreeSet<bool>> = BTreeMap::new();
    let mut members = Vec::new();
    let mut rejected = Vec::new();
    for (torsion, decision) in enumeration.points.into_iter().zip(decisions) {
        orbit_verdicts.entry(torsion.orbit).or_default().insert(decision.member);
        let entry = LocusMember { torsion, decision };
        if entry.decision.member {
            members.push(entry);
        } else {
            rejected.push(entry);
        }
    }
    LocusReport {
        curve: ctx.model().clone(),
        minimal: ctx.minimal.clone(),
        n_max,
        degree_max,
        members,
        rejected,
        excluded: enumeration.excluded,
        completeness: Completeness::CompleteWithinBounds,
        galois_stable: orbit_verdicts.values().all(|v| v.len() == 1),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpEmbedding {
    pub torsion: TorsionPoint,
    /// Number of embeddings of the field of definition into ℚ_p.
    pub embeddings: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpReport {
    pub prime: BigInt,
    pub precision_budget: u32,
    /// Members with at least one embedding.
    pub embeddable: Vec<QpEmbedding>,
    /// Members whose field does not embed into ℚ_p.
    pub not_embeddable: Vec<TorsionPoint>,
    pub undecided: Vec<(TorsionPoint, String)>,
}

/// A polynomial over ℚ whose roots in ℚ_p correspond to the embeddings of
/// the tower into ℚ_p: the minimal polynomial of a primitive element.
fn defining_polynomial(tower: &NumberTower) -> RationalPolynomial {
    let degree = tower.degree();
    if !tower.is_quadratic() {
        return tower.generator().minimal_polynomial();
    }
    let s = tower.quadratic_generator().expect("quadratic layer");
    let theta = tower.lift(&tower.base_tower().generator());
    (0i64..)
        .map(|k| s.plus(&theta.scale(&Rational::from_integer(BigInt::from(k)))).minimal_polynomial())
        .find(|m| m.degree() == Some(degree))
        .expect("a primitive element exists")
}

/// Which members of the locus have `ℚ_p`-points, by counting roots of the
/// defining polynomial of their field in ℚ_p.
pub fn qp_report(report: &LocusReport, p: &BigInt, precision_budget: u32) -> Result<QpReport> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let mut out = QpReport {
        prime: p.clone(),
        precision_budget,
        embeddable: Vec::new(),
        not_embeddable: Vec::new(),
        undecided: Vec::new(),
    };
    let mut cache: Vec<(NumberTower, std::result::Result<Option<usize>, String>)> = Vec::new();
    for m in &report.members {
        let tower = &m.torsion.tower;
        let count = match cache.iter().find(|(t, _)| t == tower) {
            Some((_, c)) => c.clone(),
            None => {
                let c = if tower.degree() == 1 {
                    Ok(Some(1))
                } else {
                    match u64::try_from(p) {
                        Ok(pu) => count_roots_qp(&defining_polynomial(tower), pu, precision_budget).map_err(|e| e.to_string()),
                        Err(_) => Err(format!("prime {p} too large for residue arithmetic")),
                    }
                };
                cache.push((tower.clone(), c.clone()));
                c
            }
        };
        match count {
            Ok(Some(0)) => out.not_embeddable.push(m.torsion.clone()),
            Ok(Some(k)) => out.embeddable.push(QpEmbedding { torsion: m.torsion.clone(), embeddings: k }),
            Ok(None) => out
                .undecided
                .push((m.torsion.clone(), format!("roots not separated within {precision_budget} {p}-adic digits"))),
            Err(e) => out.undecided.push((m.torsion.clone(), e)),
        }
    }
    Ok(out)
}
