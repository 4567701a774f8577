//! JSON nested-array text format for tableaux: rows in order, `null` for the
//! absent cells at the left of a skew row. Complex exponents may be written
//! as a number or as a `[re, im]` pair.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Result, ZetaError};
use crate::shapes::{Partition, SkewShape};

use super::{expand_content, ContentSpec, Tableau};

/// Serializes a tableau as nested arrays.
pub fn to_json<T: Clone + serde::Serialize>(t: &Tableau<T>) -> Value {
    Value::Array(
        t.rows()
            .into_iter()
            .map(|r| Value::Array(r.into_iter().map(|v| v.map_or(Value::Null, |x| json!(x))).collect()))
            .collect(),
    )
}

/// Serializes a complex tableau, writing real values as plain numbers.
pub fn complex_to_json(t: &Tableau<Complex64>) -> Value {
    let rows = t
        .rows()
        .into_iter()
        .map(|r| {
            Value::Array(
                r.into_iter()
                    .map(|v| match v {
                        None => Value::Null,
                        Some(z) if z.im == 0.0 => json!(z.re),
                        Some(z) => json!([z.re, z.im]),
                    })
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

/// Parses nested arrays into a tableau, deducing the (skew) shape from the
/// leading `null`s and the row lengths.
pub fn from_json<T: Clone>(v: &Value, mut conv: impl FnMut(&Value) -> Result<T>) -> Result<Tableau<T>> {
    let rows = v.as_array().ok_or_else(|| ZetaError::Parse("tableau must be an array of rows".into()))?;
    let mut outer = Vec::new();
    let mut inner = Vec::new();
    let mut values = Vec::new();
    for r in rows {
        let r = r.as_array().ok_or_else(|| ZetaError::Parse("tableau rows must be arrays".into()))?;
        let skip = r.iter().take_while(|x| x.is_null()).count();
        for x in &r[skip..] {
            if x.is_null() {
                return Err(ZetaError::Parse("null may only appear at the start of a row".into()));
            }
            values.push(conv(x)?);
        }
        outer.push(r.len());
        inner.push(skip);
    }
    let shape = SkewShape::new(Partition::new(outer)?, Partition::new(inner)?)?;
    Tableau::new(shape, values)
}

pub fn parse_complex(v: &Value) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    if let Some([a, b]) = v.as_array().map(|a| a.as_slice()) {
        if let (Some(a), Some(b)) = (a.as_f64(), b.as_f64()) {
            return Ok(Complex64::new(a, b));
        }
    }
    Err(ZetaError::Parse(format!("expected a number or [re, im], got {v}")))
}

pub fn parse_real(v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| ZetaError::Parse(format!("expected a number, got {v}")))
}

/// Parses `{"z": {"-1": 3, …}, "y": {…}}`.
pub fn parse_content_spec(v: &Value) -> Result<ContentSpec> {
    let obj = v.as_object().ok_or_else(|| ZetaError::Parse("content spec must be an object".into()))?;
    let key = |k: &str| k.trim().parse::<i64>().map_err(|_| ZetaError::Parse(format!("bad content key {k:?}")));
    let mut z = BTreeMap::new();
    if let Some(m) = obj.get("z") {
        for (k, x) in m.as_object().ok_or_else(|| ZetaError::Parse("\"z\" must be an object".into()))? {
            z.insert(key(k)?, parse_complex(x)?);
        }
    }
    let mut y = BTreeMap::new();
    if let Some(m) = obj.get("y") {
        for (k, x) in m.as_object().ok_or_else(|| ZetaError::Parse("\"y\" must be an object".into()))? {
            y.insert(key(k)?, parse_real(x)?);
        }
    }
    Ok(ContentSpec { z, y })
}

/// Reads exponents and shifts from one of three layouts: a bare nested array
/// of exponents (shifts zero), `{"s": [[…]], "x": [[…]]}`, or a content spec
/// `{"z": {…}, "y": {…}}` expanded on `shape`.
pub fn parse_exponent_input(text: &str, shape: Option<&SkewShape>) -> Result<(Tableau<Complex64>, Tableau<f64>)> {
    let v: Value = serde_json::from_str(text).map_err(|e| ZetaError::Parse(e.to_string()))?;
    let (s, x) = match &v {
        Value::Array(_) => {
            let s = from_json(&v, parse_complex)?;
            let x = s.map(|_| 0.0);
            (s, x)
        }
        Value::Object(o) if o.contains_key("s") => {
            let s = from_json(&o["s"], parse_complex)?;
            let x = match o.get("x") {
                Some(xv) => from_json(xv, parse_real)?,
                None => s.map(|_| 0.0),
            };
            if x.shape() != s.shape() {
                return Err(ZetaError::Parse("\"s\" and \"x\" have different shapes".into()));
            }
            (s, x)
        }
        Value::Object(_) => {
            let spec = parse_content_spec(&v)?;
            let shape = shape.ok_or_else(|| ZetaError::Parse("a content spec needs an explicit shape".into()))?;
            expand_content(&spec, shape)?
        }
        _ => return Err(ZetaError::Parse("unrecognized tableau input".into())),
    };
    if let Some(sh) = shape {
        if sh != s.shape() {
            return Err(ZetaError::Parse(format!("tableau shape {} differs from requested {sh}", s.shape())));
        }
    }
    Ok((s, x))
}
