//! JSON encodings shared by every subcommand.
//!
//! Exact values never travel as floats: rationals and big integers are
//! strings, and any floating-point companion lives in an `approx` field.

use num_complex::Complex64;
use num_rational::Rational64;
use serde_json::{json, Value};
use su2_modular::superalgebra::SectorCharacter;
use su2_modular::{Cyclotomic, InvariantMatrix, QSeries};

pub fn rational(r: &Rational64) -> Value {
    Value::String(r.to_string())
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn cyclotomic(x: &Cyclotomic) -> Value {
    let approx = x.embed(15);
    json!({
        "conductor": x.conductor(),
        "coords": x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "approx": complex(approx),
    })
}

pub fn matrix(m: &InvariantMatrix) -> Value {
    json!(m.rows())
}

pub fn series(s: &QSeries) -> Value {
    json!({
        "h0": rational(&s.h0()),
        "coeffs": s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "order": s.order(),
    })
}

pub fn complex_matrix(m: &[Vec<Complex64>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|z| complex(*z)).collect()))
            .collect(),
    )
}

pub fn sector(s: &SectorCharacter) -> Value {
    json!({
        "kind": s.kind.as_str(),
        "index": s.index,
        "name": s.name(),
        "coeffs": s.coeffs,
    })
}

/// Reads one or more matrices from a bare matrix, a list of matrices, or an
/// object with an `invariants` array (as printed by the `invariants` command).
pub fn parse_matrices(value: &Value) -> Result<Vec<InvariantMatrix>, String> {
    fn one(v: &Value) -> Result<InvariantMatrix, String> {
        let rows: Vec<Vec<i64>> =
            serde_json::from_value(v.clone()).map_err(|e| format!("bad matrix: {e}"))?;
        InvariantMatrix::from_square(rows).map_err(|e| e.to_string())
    }
    match value {
        Value::Object(map) => {
            let list = map
                .get("invariants")
                .and_then(Value::as_array)
                .ok_or("expected an object with an 'invariants' array")?;
            list.iter()
                .map(|item| one(item.get("matrix").unwrap_or(item)))
                .collect()
        }
        Value::Array(items) if items.first().is_some_and(|r| r.get(0).is_some_and(Value::is_array)) => {
            items.iter().map(one).collect()
        }
        Value::Array(_) => Ok(vec![one(value)?]),
        _ => Err("expected a matrix, a list of matrices, or an invariants document".into()),
    }
}
