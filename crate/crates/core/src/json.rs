//! JSON encoding: complex numbers as `[re, im]`, matrices as nested row-major
//! arrays, floats with 17 significant digits.

use crate::error::{Error, Result};
use crate::path::{ComplexPath, Segment};
use crate::tensor::{Complex, ComplexMatrix};
use serde_json::{json, Map, Value};

/// A float as a JSON number with 17 significant digits; non-finite → `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    serde_json::from_str(&s).unwrap_or(Value::Null)
}

/// Rewrites every non-integer number in `v` with [`num`].
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n.as_f64().map(num).unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

pub fn complex(z: Complex) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|r| Value::Array((0..m.ncols()).map(|c| complex(m[(r, c)])).collect())).collect())
}

pub fn real_of(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::Json(format!("expected a number, got {v}")))
}

pub fn complex_of(v: &Value) -> Result<Complex> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(Complex::new(real_of(&a[0])?, real_of(&a[1])?)),
        Value::Number(_) => Ok(Complex::new(real_of(v)?, 0.0)),
        _ => Err(Error::Json(format!("expected [re, im], got {v}"))),
    }
}

pub fn matrix_of(v: &Value) -> Result<ComplexMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Json("matrix must be an array of rows".into()))?;
    let nr = rows.len();
    if nr == 0 {
        return Err(Error::Json("empty matrix".into()));
    }
    let mut entries = Vec::new();
    let mut nc = None;
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::Json("matrix row must be an array".into()))?;
        if *nc.get_or_insert(row.len()) != row.len() {
            return Err(Error::Json("ragged matrix".into()));
        }
        for e in row {
            entries.push(complex_of(e)?);
        }
    }
    Ok(ComplexMatrix::from_row_slice(nr, nc.unwrap_or(0), &entries))
}

pub fn segment(s: &Segment) -> Value {
    match *s {
        Segment::Line { from, to } => json!({"type": "line", "from": complex(from), "to": complex(to)}),
        Segment::Arc { center, radius, arg_from, arg_to } => json!({
            "type": "arc",
            "center": complex(center),
            "radius": num(radius),
            "arg_from": num(arg_from),
            "arg_to": num(arg_to),
        }),
    }
}

pub fn path(p: &ComplexPath) -> Value {
    json!({"segments": p.segments().iter().map(segment).collect::<Vec<_>>()})
}

fn field<'a>(o: &'a Map<String, Value>, k: &str) -> Result<&'a Value> {
    o.get(k).ok_or_else(|| Error::Json(format!("missing field `{k}`")))
}

pub fn segment_of(v: &Value) -> Result<Segment> {
    let o = v.as_object().ok_or_else(|| Error::Json("segment must be an object".into()))?;
    match field(o, "type")?.as_str() {
        Some("line") => Ok(Segment::line(complex_of(field(o, "from")?)?, complex_of(field(o, "to")?)?)),
        Some("arc") => Ok(Segment::arc(
            complex_of(field(o, "center")?)?,
            real_of(field(o, "radius")?)?,
            real_of(field(o, "arg_from")?)?,
            real_of(field(o, "arg_to")?)?,
        )),
        other => Err(Error::Json(format!("unknown segment type {other:?}"))),
    }
}

pub fn path_of(v: &Value) -> Result<ComplexPath> {
    let segs = v
        .get("segments")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("path needs a `segments` array".into()))?;
    ComplexPath::new(segs.iter().map(segment_of).collect::<Result<Vec<_>>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(f64::NAN), Value::Null);
        let x = 1.0 / 3.0;
        assert_eq!(real_of(&num(x)).unwrap(), x);
    }

    #[test]
    fn canonical_form() {
        let v = canonical(json!({"a": [0.1, 3, {"b": 2.5}], "c": "x"}));
        assert_eq!(v.to_string(), r#"{"a":[1.0000000000000001e-1,3,{"b":2.5000000000000000e+0}],"c":"x"}"#);
    }

    #[test]
    fn matrix_round_trip() {
        let m = ComplexMatrix::from_row_slice(2, 3, &[
            Complex::new(1.0, -2.0), Complex::new(0.1, 0.2), Complex::new(3.0, 0.0),
            Complex::new(-1e-300, 5.0), Complex::new(7.0, 8.0), Complex::new(0.0, 0.0),
        ]);
        assert_eq!(matrix_of(&matrix(&m)).unwrap(), m);
        assert!(matrix_of(&json!([[[1, 0]], [[1, 0], [2, 0]]])).is_err());
    }

    #[test]
    fn path_round_trip() {
        let p = ComplexPath::new(vec![
            Segment::line(Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)),
            Segment::arc(Complex::new(0.0, 0.0), 2.0, 0.0, 1.0),
        ])
        .unwrap();
        let v = path(&p);
        assert_eq!(v["segments"][0]["type"], "line");
        assert_eq!(path_of(&v).unwrap(), p);
        assert!(path_of(&json!({"segments": [{"type": "spline"}]})).is_err());
    }
}
