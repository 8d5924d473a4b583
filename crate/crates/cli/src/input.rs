//! Curve input files: `{"a_invariants": [...], "label": ..., "rank_zero_asserted": ...}`
//! or the LMFDB-style `{"ainvs": [...]}`. Coefficients are integers or exact
//! rational strings such as `"-37"` and `"1/2"`; floats are refused.

use chabauty::curve::WeierstrassModel;
use chabauty::exact::{parse_rational, Rational};
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Deserialize)]
struct RawInput {
    #[serde(alias = "ainvs")]
    a_invariants: Vec<Value>,
    #[serde(default)]
    label: Option<String>,
    #[serde(default, alias = "rank_zero")]
    rank_zero_asserted: bool,
}

#[derive(Clone, Debug)]
pub struct CurveInput {
    pub model: WeierstrassModel,
    pub a_invariants: [Rational; 5],
    pub label: Option<String>,
    pub rank_zero_asserted: bool,
}

fn coefficient(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s.trim()).map_err(|e| CliError::Parse(e.to_string())),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()).map_err(|e| CliError::Parse(e.to_string())),
        other => Err(CliError::Parse(format!("a-invariant {other} is not an integer or an exact rational string"))),
    }
}

pub fn parse_curve(text: &str) -> Result<CurveInput, CliError> {
    let raw: RawInput = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("curve file: {e}")))?;
    if raw.a_invariants.len() != 5 {
        return Err(CliError::Parse(format!("expected 5 a-invariants, got {}", raw.a_invariants.len())));
    }
    let coeffs = raw.a_invariants.iter().map(coefficient).collect::<Result<Vec<_>, _>>()?;
    let a_invariants: [Rational; 5] = coeffs.try_into().expect("length checked");
    let model = WeierstrassModel::new(a_invariants.clone()).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(CurveInput { model, a_invariants, label: raw.label, rank_zero_asserted: raw.rank_zero_asserted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_spellings() {
        let a = parse_curve(r#"{"ainvs": [0, 0, 0, 726, 9317]}"#).unwrap();
        let b = parse_curve(r#"{"a_invariants": ["0", "0", "0", "726", "9317"], "label": "x", "rank_zero_asserted": true}"#).unwrap();
        assert_eq!(a.model, b.model);
        assert!(b.rank_zero_asserted && !a.rank_zero_asserted);
        assert!(parse_curve(r#"{"ainvs": ["1/2", 0, "-3/4", 1, 0]}"#).is_ok());
    }

    #[test]
    fn refusals() {
        for bad in [
            r#"{"ainvs": [0, 0, 0, 0.5, 1]}"#,
            r#"{"ainvs": [0, 0, 0, 1]}"#,
            r#"{"ainvs": [0, 0, 0, 0, 0]}"#,
            r#"{"ainvs": ["a", 0, 0, 1, 1]}"#,
            "not json",
        ] {
            assert!(matches!(parse_curve(bad), Err(CliError::Parse(_))), "{bad}");
        }
    }
}
