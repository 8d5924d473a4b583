//! JSON forms of exact objects. Rationals are always strings.

use chabauty::curve::{ExcludedTorsion, ModelTransform, TorsionPoint, WeierstrassModel};
use chabauty::exact::{FormalRadical, NumberTower, Rational, TowerElement};
use chabauty::reduction::{KodairaType, LocalValues, ValueSet};
use chabauty::residue::HstValue;
use serde_json::{json, Map, Value};

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn model(m: &WeierstrassModel) -> Value {
    Value::Array(m.a_invariants().iter().map(rational).collect())
}

pub fn transform(t: &ModelTransform) -> Value {
    json!({ "u": rational(&t.u), "r": rational(&t.r), "s": rational(&t.s), "t": rational(&t.t) })
}

pub fn value_set(w: &ValueSet) -> Value {
    Value::Array(w.values().map(rational).collect())
}

pub fn field(k: &NumberTower) -> Value {
    let layer = k.quadratic_coefficients().map(|(c1, c0)| json!({ "c1": c1.to_string(), "c0": c0.to_string() }));
    json!({
        "degree": k.degree(),
        "base_polynomial": k.base_polynomial().to_string().replace('x', "t"),
        "quadratic_layer": layer,
    })
}

pub fn element(a: &TowerElement) -> Value {
    Value::String(a.to_string())
}

pub fn torsion_point(p: &TorsionPoint) -> Value {
    json!({
        "order": p.order,
        "x": element(p.x()),
        "y": element(p.y()),
        "field": field(&p.tower),
        "x_polynomial": p.x_polynomial.to_string(),
        "orbit": p.orbit,
    })
}

pub fn excluded(e: &ExcludedTorsion) -> Value {
    json!({ "order": e.order, "x_degree": e.x_degree, "reason": e.reason })
}

pub fn radical(r: &FormalRadical) -> Value {
    Value::String(r.render())
}

pub fn hst(h: &HstValue) -> Value {
    let rational_part = h.rational_part.as_ref().map(|m| {
        let mut out = Map::new();
        for (p, e) in m {
            out.insert(p.to_string(), rational(e));
        }
        Value::Object(out)
    });
    json!({ "radical": radical(&h.radical), "rational_part": rational_part, "display": h.to_string() })
}

pub fn local_values(v: &LocalValues) -> Value {
    let reduction = match (v.profile.kodaira, v.profile.split) {
        (KodairaType::I0, _) => "good",
        (_, Some(true)) => "split multiplicative",
        (_, Some(false)) => "non-split multiplicative",
        _ => "additive",
    };
    json!({
        "prime": v.profile.prime.to_string(),
        "kodaira": v.profile.kodaira.to_string(),
        "tamagawa": v.profile.tamagawa,
        "reduction": reduction,
        "v_delta_min": v.profile.v_delta_min,
        "w_min": value_set(&v.w_min),
        "w_st": value_set(&v.w_st),
    })
}
