//! JSON interchange for scalars, vectors, matrices and forms, and a
//! deterministic report writer.
//!
//! Rationals are strings `"p/q"`. Floats are JSON numbers, legal only in a
//! document whose root carries `"mode": "float"`. Complex scalars are
//! objects `{"re": …, "im": …}`. Forms look like
//!
//! ```json
//! {"dim": 6, "degree": 3, "terms": [{"idx": [1, 3, 5], "re": "1", "im": "0"}]}
//! ```
//!
//! Indices are 1-based. Reports are printed with sorted keys and floats in
//! `{:.16e}` format, so equal inputs give byte-identical output.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, q_to_f64, Cq, Field, C64, Q};
use crate::form::Form;
use crate::matrix::Matrix;

/// Scalars with a JSON encoding.
pub trait JsonScalar: Field {
    fn to_json(&self) -> Value;

    /// `(re, im)` as written in a form term.
    fn json_parts(&self) -> (Value, Value);

    fn from_parts(re: &Value, im: Option<&Value>) -> Result<Self>;

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(m) => {
                let re = m.get("re").ok_or_else(|| Error::Parse("complex scalar without \"re\"".into()))?;
                Self::from_parts(re, m.get("im"))
            }
            other => Self::from_parts(other, None),
        }
    }
}

fn parse_q(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        Value::Number(_) => Err(Error::ModeMismatch(format!("float {v} in an exact document"))),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

fn parse_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        Value::String(s) => Ok(q_to_f64(&parse_rational(s)?)),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl JsonScalar for Q {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn json_parts(&self) -> (Value, Value) {
        (self.to_json(), Value::String("0".into()))
    }

    fn from_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
        if let Some(im) = im {
            if !parse_q(im)?.is_zero() {
                return Err(Error::Parse("nonzero imaginary part for a real quantity".into()));
            }
        }
        parse_q(re)
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        float_value(*self)
    }

    fn json_parts(&self) -> (Value, Value) {
        (float_value(*self), float_value(0.0))
    }

    fn from_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
        if let Some(im) = im {
            if parse_f64(im)? != 0.0 {
                return Err(Error::Parse("nonzero imaginary part for a real quantity".into()));
            }
        }
        parse_f64(re)
    }
}

fn complex_object(re: Value, im: Value) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), re);
    m.insert("im".into(), im);
    Value::Object(m)
}

impl JsonScalar for Cq {
    fn to_json(&self) -> Value {
        let (re, im) = self.json_parts();
        complex_object(re, im)
    }

    fn json_parts(&self) -> (Value, Value) {
        (self.re.to_json(), self.im.to_json())
    }

    fn from_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
        let im = im.map(parse_q).transpose()?.unwrap_or_else(Q::zero);
        Ok(Cq::new(parse_q(re)?, im))
    }
}

impl JsonScalar for C64 {
    fn to_json(&self) -> Value {
        complex_object(float_value(self.re), float_value(self.im))
    }

    fn json_parts(&self) -> (Value, Value) {
        (float_value(self.re), float_value(self.im))
    }

    fn from_parts(re: &Value, im: Option<&Value>) -> Result<Self> {
        let im = im.map(parse_f64).transpose()?.unwrap_or(0.0);
        Ok(C64::new(parse_f64(re)?, im))
    }
}

/// True when the document root declares `"mode": "float"`.
pub fn is_float_document(doc: &Value) -> bool {
    doc.get("mode").and_then(Value::as_str) == Some("float")
}

/// Rejects float content in an exact document and float documents read
/// into an exact field.
fn check_mode<F: Field>(doc: &Value) -> Result<()> {
    if F::EXACT && is_float_document(doc) {
        return Err(Error::ModeMismatch(
            "document is marked \"mode\": \"float\" but exact arithmetic was requested".into(),
        ));
    }
    if !is_float_document(doc) && contains_float(doc) {
        return Err(Error::ModeMismatch("float literal in a document without \"mode\": \"float\"".into()));
    }
    Ok(())
}

fn contains_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_i64() && !n.is_u64(),
        Value::Array(a) => a.iter().any(contains_float),
        Value::Object(m) => m.values().any(contains_float),
        _ => false,
    }
}

fn mark_mode<F: Field>(v: &mut Value) {
    if !F::EXACT {
        if let Value::Object(m) = v {
            m.insert("mode".into(), Value::String("float".into()));
        }
    }
}

pub fn vector_to_json<F: JsonScalar>(v: &[F]) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

pub fn vector_from_json<F: JsonScalar>(v: &Value) -> Result<Vec<F>> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array".into()))?.iter().map(F::from_json).collect()
}

/// Row-major nested arrays.
pub fn matrix_to_json<F: JsonScalar>(m: &Matrix<F>) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_to_json(m.row(r))).collect())
}

pub fn matrix_from_json<F: JsonScalar>(v: &Value) -> Result<Matrix<F>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    Matrix::from_rows(rows.iter().map(vector_from_json).collect::<Result<_>>()?)
}

pub fn form_to_json<F: JsonScalar>(f: &Form<F>) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(idx, c)| {
            let (re, im) = c.json_parts();
            let mut t = Map::new();
            t.insert("idx".into(), Value::Array(idx.iter().map(|&i| Value::from(i)).collect()));
            t.insert("re".into(), re);
            t.insert("im".into(), im);
            Value::Object(t)
        })
        .collect();
    let mut m = Map::new();
    m.insert("dim".into(), Value::from(f.dim()));
    m.insert("degree".into(), Value::from(f.degree()));
    m.insert("terms".into(), Value::Array(terms));
    let mut v = Value::Object(m);
    mark_mode::<F>(&mut v);
    v
}

/// Reads a form; `doc` is the document root carrying the mode flag.
pub fn form_from_json_in<F: JsonScalar>(v: &Value, doc: &Value) -> Result<Form<F>> {
    check_mode::<F>(doc)?;
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("form without {k:?}")));
    let as_usize = |x: &Value| {
        x.as_u64().map(|n| n as usize).ok_or_else(|| Error::Parse(format!("expected a non-negative integer, got {x}")))
    };
    let dim = as_usize(field("dim")?)?;
    let degree = as_usize(field("degree")?)?;
    let terms = field("terms")?.as_array().ok_or_else(|| Error::Parse("\"terms\" must be an array".into()))?;
    let parsed = terms
        .iter()
        .map(|t| {
            let idx = t
                .get("idx")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term without \"idx\"".into()))?
                .iter()
                .map(as_usize)
                .collect::<Result<Vec<_>>>()?;
            let re = t.get("re").ok_or_else(|| Error::Parse("term without \"re\"".into()))?;
            Ok((idx, F::from_parts(re, t.get("im"))?))
        })
        .collect::<Result<Vec<_>>>()?;
    Form::from_terms(dim, degree, parsed)
}

pub fn form_from_json<F: JsonScalar>(v: &Value) -> Result<Form<F>> {
    form_from_json_in(v, v)
}

/// Reads and parses a JSON file.
pub fn read_document(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Checks the mode flag of `doc` against the field `F`.
pub fn check_document_mode<F: JsonScalar>(doc: &Value) -> Result<()> {
    check_mode::<F>(doc)
}

/// Canonical pretty printing: sorted keys, two-space indent, floats as
/// `{:.16e}`.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => {
            if n.is_i64() || n.is_u64() {
                out.push_str(&n.to_string());
            } else {
                let _ = write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN));
            }
        }
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if a.iter().all(is_small) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, indent);
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) if m.is_empty() => out.push_str("{}"),
        Value::Object(m) if is_small(v) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*k], indent);
            }
            out.push('}');
        }
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &m[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Scalars and complex numbers are printed on one line.
fn is_small(v: &Value) -> bool {
    match v {
        Value::Array(_) => false,
        Value::Object(m) => {
            m.len() == 2
                && m.contains_key("re")
                && m.contains_key("im")
                && m.values().all(|x| !x.is_array() && !x.is_object())
        }
        _ => true,
    }
}

/// Writes the canonical form of `v` to `path`.
pub fn write_report(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, to_canonical_string(v))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{cq, q, qi};
    use serde_json::json;

    #[test]
    fn form_round_trip_exact() {
        let f = Form::from_terms(6, 3, [(vec![1, 3, 5], qi(1)), (vec![2, 4, 6], q(-3, 7))]).unwrap();
        let v = form_to_json(&f);
        assert!(v.get("mode").is_none());
        assert_eq!(form_from_json::<Q>(&v).unwrap(), f);
        let c = f.complexify().scale(&cq(1, 2));
        assert_eq!(form_from_json::<Cq>(&form_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn form_round_trip_float() {
        let f = Form::from_terms(4, 2, [(vec![1, 2], 0.5), (vec![3, 4], -2.25)]).unwrap();
        let v = form_to_json(&f);
        assert_eq!(v["mode"], "float");
        assert_eq!(form_from_json::<f64>(&v).unwrap(), f);
        assert!(matches!(form_from_json::<Q>(&v), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn floats_need_the_mode_flag() {
        let v = json!({"dim": 2, "degree": 1, "terms": [{"idx": [1], "re": 0.5, "im": 0}]});
        assert!(matches!(form_from_json::<f64>(&v), Err(Error::ModeMismatch(_))));
        let v = json!({"dim": 2, "degree": 1, "terms": [{"idx": [1], "re": "1/2", "im": "0"}]});
        assert_eq!(form_from_json::<f64>(&v).unwrap().coefficient(&[1]), 0.5);
    }

    #[test]
    fn malformed_input() {
        assert!(form_from_json::<Q>(&json!({"dim": 2, "degree": 1})).is_err());
        assert!(form_from_json::<Q>(&json!({"dim": 2, "degree": 1, "terms": [{"idx": [3], "re": "1"}]})).is_err());
        assert!(form_from_json::<Q>(&json!({"dim": 2, "degree": 1, "terms": [{"idx": [1], "re": "1", "im": "2"}]}))
            .is_err());
        assert!(form_from_json::<Q>(&json!({"dim": 2, "degree": 1, "terms": [{"idx": [1], "re": "x"}]})).is_err());
    }

    #[test]
    fn matrices() {
        let m = Matrix::from_rows(vec![vec![qi(1), q(1, 2)], vec![qi(0), qi(-4)]]).unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v, json!([["1", "1/2"], ["0", "-4"]]));
        assert_eq!(matrix_from_json::<Q>(&v).unwrap(), m);
        assert_eq!(matrix_from_json::<Q>(&json!([[1, 2], [3, 4]])).unwrap()[(1, 0)], qi(3));
        assert!(matrix_from_json::<Q>(&json!([[1, 2], [3]])).is_err());
    }

    #[test]
    fn canonical_output() {
        let v = json!({"b": 1, "a": [0.1, 2], "c": {"z": true, "y": "s"}});
        let s = to_canonical_string(&v);
        assert_eq!(s, "{\n  \"a\": [1.0000000000000001e-1, 2],\n  \"b\": 1,\n  \"c\": {\n    \"y\": \"s\",\n    \"z\": true\n  }\n}\n");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"][0], 0.1);
    }
}
