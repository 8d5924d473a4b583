//! One function per subcommand. Each returns the `result`, `warnings` and
//! `undecided` parts of the report.

use std::collections::BTreeSet;

use chabauty::curve::{point_over_quadratic_field, torsion_enumerate, DivisionPolynomials};
use chabauty::exact::parse_rational;
use chabauty::heights::{
    height_multiplication_check, hst_height_crosscheck, local_height_nonsingular, CheckOutcome, QuadraticPlace, Splitting,
};
use chabauty::locus::{locus_compute_with_jobs, qp_report, LocusDecision, LocusReport};
use chabauty::nilpotent::{realizability_bound, realizability_obstructed, surface_group_two_step_dims, witt_free_dim, GradedDims};
use chabauty::reduction::{bad_primes, is_globally_minimal, local_values, minimal_model};
use chabauty::residue::{hst_with, residue_record};
use chabauty::torsor::{sample_torsor_points, TorsorMaps};
use chabauty::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::input::CurveInput;
use crate::render;
use crate::{CliError, Config};

pub struct Outcome {
    pub result: Value,
    pub warnings: Vec<String>,
    pub undecided: Vec<Value>,
}

impl Outcome {
    fn exact(result: Value) -> Self {
        Outcome { result, warnings: Vec::new(), undecided: Vec::new() }
    }
}

const RANK_WARNING: &str = "Mordell-Weil rank 0 is asserted by the caller and not verified";

fn require_rank_zero(input: &CurveInput, cfg: &Config) -> Result<(), CliError> {
    if input.rank_zero_asserted || cfg.assert_rank_zero {
        Ok(())
    } else {
        Err(CliError::Contract(
            "the locus is only meaningful for rank 0 curves; pass --assert-rank-zero or set rank_zero_asserted".into(),
        ))
    }
}

pub fn invariants(input: &CurveInput) -> Result<Outcome, CliError> {
    let e = &input.model;
    let inv = e.invariants();
    let (min, t) = minimal_model(e)?;
    let r = render::rational;
    Ok(Outcome::exact(json!({
        "a_invariants": render::model(e),
        "b2": r(&inv.b2), "b4": r(&inv.b4), "b6": r(&inv.b6), "b8": r(&inv.b8),
        "c4": r(&inv.c4), "c6": r(&inv.c6),
        "discriminant": r(&inv.discriminant),
        "j": r(&inv.j),
        "globally_minimal": is_globally_minimal(e)?,
        "minimal_model": render::model(&min),
        "minimal_discriminant": r(&min.discriminant()),
        "transform_to_minimal": render::transform(&t),
        "completeness": "exact",
    })))
}

pub fn reduction(input: &CurveInput, cfg: &Config) -> Result<Outcome, CliError> {
    let (min, _) = minimal_model(&input.model)?;
    let bad = bad_primes(&min)?;
    let mut primes: BTreeSet<BigInt> = bad.iter().cloned().collect();
    primes.extend([BigInt::from(2), BigInt::from(3)]);
    primes.extend(cfg.primes.iter().cloned());
    let local = primes
        .iter()
        .map(|l| local_values(&min, l).map(|v| render::local_values(&v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome::exact(json!({
        "minimal_model": render::model(&min),
        "bad_primes": bad.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "local": local,
        "other_primes": "good reduction and W^st = {0}",
        "completeness": "exact",
    })))
}

pub fn hst(input: &CurveInput, cfg: &Config, n: u64) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(CliError::Parse("--n must be at least 2".into()));
    }
    let e = &input.model;
    let psi = DivisionPolynomials::new(e);
    let en = torsion_enumerate(e, n, cfg.degree_max)?;
    let mut points = Vec::new();
    for t in en.points.iter().filter(|t| n.is_multiple_of(t.order)) {
        let rec = residue_record(&psi, &t.point, n)?;
        let h = hst_with(&psi, &t.point, n)?;
        let mut v = render::torsion_point(t);
        v["residue"] = render::element(&rec.residue);
        v["alpha"] = render::element(&rec.alpha);
        v["hst"] = render::hst(&h);
        points.push(v);
    }
    let excluded: Vec<Value> = en.excluded.iter().filter(|x| n.is_multiple_of(x.order)).map(render::excluded).collect();
    let mut warnings = Vec::new();
    if !excluded.is_empty() {
        warnings.push(format!("some points killed by {n} need fields of degree above {}", cfg.degree_max));
    }
    Ok(Outcome {
        result: json!({
            "n": n,
            "delta": render::rational(&e.discriminant()),
            "points": points,
            "excluded": excluded,
            "completeness": "complete-within-bounds",
        }),
        warnings,
        undecided: Vec::new(),
    })
}

fn decision(d: &LocusDecision) -> Value {
    let checks: Vec<Value> = d
        .checks
        .iter()
        .map(|c| {
            json!({
                "prime": c.prime.to_string(),
                "valuation": render::rational(&c.valuation),
                "w_st": render::value_set(&c.w_st),
                "passed": c.passed,
            })
        })
        .collect();
    json!({
        "hst": render::hst(&d.hst),
        "checks": checks,
        "reason": d.rejection.as_ref().map(|r| r.to_string()),
    })
}

fn locus_json(r: &LocusReport) -> Value {
    let entry = |m: &chabauty::locus::LocusMember| {
        let mut v = render::torsion_point(&m.torsion);
        v["decision"] = decision(&m.decision);
        v
    };
    json!({
        "minimal_model": render::model(&r.minimal),
        "bounds": { "n_max": r.n_max, "degree_max": r.degree_max },
        "members": r.members.iter().map(entry).collect::<Vec<_>>(),
        "rejected": r.rejected.iter().map(entry).collect::<Vec<_>>(),
        "excluded": r.excluded.iter().map(render::excluded).collect::<Vec<_>>(),
        "galois_stable": r.galois_stable,
        "completeness": r.completeness.to_string(),
    })
}

fn locus_warnings(r: &LocusReport) -> Vec<String> {
    let mut w = vec![RANK_WARNING.to_string()];
    if !r.excluded.is_empty() {
        w.push(format!(
            "torsion of order ≤ {} over fields of degree > {} was not examined",
            r.n_max, r.degree_max
        ));
    }
    w.push("the locus is finite but no bound on the orders of its points is known; completeness is relative to the bounds".into());
    w
}

pub fn locus(input: &CurveInput, cfg: &Config) -> Result<Outcome, CliError> {
    require_rank_zero(input, cfg)?;
    let r = locus_compute_with_jobs(&input.model, cfg.n_max, cfg.degree_max, cfg.jobs)?;
    Ok(Outcome { result: locus_json(&r), warnings: locus_warnings(&r), undecided: Vec::new() })
}

pub fn qp(input: &CurveInput, cfg: &Config) -> Result<Outcome, CliError> {
    require_rank_zero(input, cfg)?;
    if cfg.primes.is_empty() {
        return Err(CliError::Parse("qp needs at least one --prime".into()));
    }
    let r = locus_compute_with_jobs(&input.model, cfg.n_max, cfg.degree_max, cfg.jobs)?;
    let mut undecided = Vec::new();
    let mut per_prime = Vec::new();
    for p in &cfg.primes {
        let q = qp_report(&r, p, cfg.precision)?;
        for (t, reason) in &q.undecided {
            let mut v = render::torsion_point(t);
            v["prime"] = Value::String(p.to_string());
            v["reason"] = Value::String(reason.clone());
            undecided.push(v);
        }
        per_prime.push(json!({
            "prime": p.to_string(),
            "embeddable": q.embeddable.iter().map(|e| {
                let mut v = render::torsion_point(&e.torsion);
                v["embeddings"] = json!(e.embeddings);
                v
            }).collect::<Vec<_>>(),
            "not_embeddable": q.not_embeddable.iter().map(render::torsion_point).collect::<Vec<_>>(),
            "undecided_count": q.undecided.len(),
        }));
    }
    Ok(Outcome {
        result: json!({
            "members": r.members.len(),
            "primes": per_prime,
            "completeness": r.completeness.to_string(),
        }),
        warnings: locus_warnings(&r),
        undecided,
    })
}

fn outcome_json(o: &CheckOutcome) -> Value {
    match o {
        CheckOutcome::Passed => json!({ "status": "passed" }),
        CheckOutcome::Failed { lhs, rhs } => json!({ "status": "failed", "lhs": render::rational(lhs), "rhs": render::rational(rhs) }),
        CheckOutcome::Skipped(m) => json!({ "status": "skipped", "reason": m }),
        CheckOutcome::Undecided(m) => json!({ "status": "undecided", "reason": m }),
    }
}

fn place_json(v: &QuadraticPlace) -> Value {
    let kind = match &v.splitting {
        None => json!("rational"),
        Some(Splitting::Split { root }) => json!({ "split": { "sqrt_d_residue": root.to_string() } }),
        Some(Splitting::Inert) => json!("inert"),
        Some(Splitting::Ramified) => json!("ramified"),
    };
    json!({ "prime": v.prime.to_string(), "d": v.d.to_string(), "splitting": kind })
}

/// Torsion order bound for points over fields of degree ≤ 2.
const QUADRATIC_TORSION_BOUND: u64 = 24;

pub fn heights(input: &CurveInput, cfg: &Config, x: &str, n_list: &[u64]) -> Result<Outcome, CliError> {
    let x = parse_rational(x).map_err(|e| CliError::Parse(e.to_string()))?;
    let [l] = cfg.primes.as_slice() else {
        return Err(CliError::Parse("heights needs exactly one --prime".into()));
    };
    let (min, t) = minimal_model(&input.model)?;
    let p = point_over_quadratic_field(&input.model, &x)?;
    let (px, py) = p.coordinates().expect("affine");
    let (mx, my) = t.map_xy(px, py);
    let q = min.point(mx, my)?;
    let field = q.coordinates().unwrap().0.tower().clone();
    let order = min.order_up_to(&q, QUADRATIC_TORSION_BOUND)?;
    let places = QuadraticPlace::places_over(&field, l)?;
    let mut undecided = Vec::new();
    let mut rows = Vec::new();
    for v in &places {
        let height = match local_height_nonsingular(&min, &q, v) {
            Ok(h) => Some(render::rational(&h)),
            Err(Error::OutOfScope(m)) => {
                undecided.push(json!({ "place": place_json(v), "reason": m }));
                None
            }
            Err(e) => return Err(e.into()),
        };
        let mult = n_list
            .iter()
            .map(|&n| height_multiplication_check(&min, &q, n, v).map(|o| json!({ "n": n, "outcome": outcome_json(&o) })))
            .collect::<Result<Vec<_>, _>>()?;
        let cross = match order {
            Some(k) if k > 1 => Some(outcome_json(&hst_height_crosscheck(&min, &q, v)?)),
            _ => None,
        };
        rows.push(json!({
            "place": place_json(v),
            "local_height": height,
            "multiplication": mult,
            "hst_crosscheck": cross,
        }));
    }
    let (qx, qy) = q.coordinates().unwrap();
    Ok(Outcome {
        result: json!({
            "minimal_model": render::model(&min),
            "point_on_minimal_model": { "x": render::element(qx), "y": render::element(qy), "field": render::field(&field) },
            "torsion_order": order,
            "places": rows,
            "completeness": "exact",
        }),
        warnings: Vec::new(),
        undecided,
    })
}

pub fn witt(genus: Option<u64>, dims: Option<&str>) -> Result<Outcome, CliError> {
    let d = match (genus, dims) {
        (Some(g), None) => surface_group_two_step_dims(g)?,
        (None, Some(text)) => {
            let parts = text
                .split(',')
                .map(|s| s.trim().parse::<BigInt>().map_err(|e| CliError::Parse(format!("--dims: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let [d1, d2, d3] = <[BigInt; 3]>::try_from(parts).map_err(|_| CliError::Parse("--dims needs d1,d2,d3".into()))?;
            if [&d1, &d2, &d3].iter().any(|x| x.sign() == num_bigint::Sign::Minus) {
                return Err(CliError::Parse("dimensions must be non-negative".into()));
            }
            GradedDims { d1, d2, d3 }
        }
        _ => return Err(CliError::Parse("give exactly one of --genus or --dims".into())),
    };
    let free = match d.d1.to_u64().filter(|&k| k > 0) {
        Some(k) => (1..=3).map(|n| witt_free_dim(k, n).map(|w| w.to_string())).collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    Ok(Outcome::exact(json!({
        "genus": genus,
        "dims": [d.d1.to_string(), d.d2.to_string(), d.d3.to_string()],
        "bound": render::rational(&realizability_bound(&d)),
        "obstructed": realizability_obstructed(&d),
        "free_lie_dims": free,
        "completeness": "exact",
    })))
}

/// Largest `n·m` for `beta-check`: `ψ_{2nm}` has degree about `2(nm)²` and
/// the sample heights grow like `(nm)²`.
const BETA_INDEX_LIMIT: u64 = 12;

pub fn beta_check(input: &CurveInput, n: u64, m: u64, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    if n == 0 || m == 0 {
        return Err(CliError::Parse("--n and --m must be positive".into()));
    }
    if n.saturating_mul(m) > BETA_INDEX_LIMIT {
        return Err(CliError::Capability(format!("n·m = {} exceeds the supported {BETA_INDEX_LIMIT}", n.saturating_mul(m))));
    }
    let pts = sample_torsor_points(&input.model, samples, seed)?;
    let maps = TorsorMaps::new(&input.model);
    let passed = maps.compose_check(n, m, &pts)?;
    Ok(Outcome::exact(json!({
        "n": n,
        "m": m,
        "samples": samples,
        "seed": seed,
        "composition_holds": passed,
        "completeness": "exact",
    })))
}
