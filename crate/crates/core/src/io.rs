//! JSON tensor input and invariant output (JSON, CSV, text).
//!
//! Exact tensors use `"p/q"` strings or JSON integers; float tensors use
//! JSON numbers. Anything else is a backend mismatch.

use std::io::Write;

use serde_json::{Map, Value};

use crate::contractions::{Invariant, InvariantVector};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Backend, Rational};
use crate::tensor::{Harmonic4, N_INDEPENDENT};

/// A tensor in whichever backend the run selected.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum AnyTensor {
    Exact(Harmonic4<Rational>),
    Float(Harmonic4<f64>),
}

impl AnyTensor {
    pub fn backend(&self) -> Backend {
        match self {
            AnyTensor::Exact(_) => Backend::Exact,
            AnyTensor::Float(_) => Backend::Float,
        }
    }

    pub fn to_f64(&self) -> Harmonic4<f64> {
        match self {
            AnyTensor::Exact(d) => d.to_f64(),
            AnyTensor::Float(d) => d.clone(),
        }
    }
}

fn exact_component(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(Error::BackendMismatch(format!(
                "non-integer number {n} in exact mode; write it as a \"p/q\" string"
            ))),
        },
        other => Err(Error::InvalidArgument(format!(
            "component {other} is not a number"
        ))),
    }
}

fn float_component(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::InvalidArgument(format!("component {n} is not finite"))),
        Value::String(s) => Err(Error::BackendMismatch(format!(
            "string component {s:?} in float mode; use --backend exact"
        ))),
        other => Err(Error::InvalidArgument(format!(
            "component {other} is not a number"
        ))),
    }
}

/// Parses a component list given as strings (CLI `-c` values).
pub fn tensor_from_strings(items: &[String], backend: Backend) -> Result<AnyTensor> {
    if items.len() != N_INDEPENDENT {
        return Err(Error::ComponentCount(items.len()));
    }
    match backend {
        Backend::Exact => {
            let values = items
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTensor::Exact(Harmonic4::from_slice(&values)?))
        }
        Backend::Float => {
            let values = items
                .iter()
                .map(|s| {
                    let t = s.trim();
                    if t.contains('/') {
                        return Err(Error::BackendMismatch(format!(
                            "rational literal {t:?} in float mode; use --backend exact"
                        )));
                    }
                    t.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::InvalidArgument(format!("bad number {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTensor::Float(Harmonic4::from_slice(&values)?))
        }
    }
}

fn tensor_from_value(v: &Value, backend: Backend) -> Result<AnyTensor> {
    let comps = v
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| {
            Error::InvalidArgument("expected an object with a \"components\" array".into())
        })?;
    if comps.len() != N_INDEPENDENT {
        return Err(Error::ComponentCount(comps.len()));
    }
    match backend {
        Backend::Exact => {
            let values = comps
                .iter()
                .map(exact_component)
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTensor::Exact(Harmonic4::from_slice(&values)?))
        }
        Backend::Float => {
            let values = comps
                .iter()
                .map(float_component)
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyTensor::Float(Harmonic4::from_slice(&values)?))
        }
    }
}

/// Parses one tensor object or an array of them.
pub fn parse_tensors(text: &str, backend: Backend) -> Result<Vec<AnyTensor>> {
    let v: Value = serde_json::from_str(text)?;
    match &v {
        Value::Array(items) => items
            .iter()
            .map(|t| tensor_from_value(t, backend))
            .collect(),
        _ => Ok(vec![tensor_from_value(&v, backend)?]),
    }
}

pub fn tensor_to_json(d: &AnyTensor) -> Value {
    let comps: Vec<Value> = match d {
        AnyTensor::Exact(d) => d
            .independent()
            .iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
        AnyTensor::Float(d) => d.independent().iter().map(|&x| float_value(x)).collect(),
    };
    let mut m = Map::new();
    m.insert("components".into(), Value::Array(comps));
    Value::Object(m)
}

fn float_value(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Invariants of one tensor in either backend.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum AnyInvariants {
    Exact(InvariantVector<Rational>),
    Float(InvariantVector<f64>),
}

impl AnyInvariants {
    pub fn of(d: &AnyTensor) -> Self {
        match d {
            AnyTensor::Exact(d) => AnyInvariants::Exact(crate::contractions::invariants(d)),
            AnyTensor::Float(d) => AnyInvariants::Float(crate::contractions::invariants(d)),
        }
    }

    /// `"p/q"` in exact mode, shortest round-trip decimal in float mode.
    pub fn text(&self, f: Invariant) -> String {
        match self {
            AnyInvariants::Exact(v) => format_rational(v.get(f)),
            AnyInvariants::Float(v) => format!("{:?}", v.get(f)),
        }
    }

    /// Keys in `J2, J3, J4, J5, J6, K6, J7, J8, J9, J10` order.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for f in Invariant::ALL {
            let v = match self {
                AnyInvariants::Exact(v) => Value::String(format_rational(v.get(f))),
                AnyInvariants::Float(v) => float_value(*v.get(f)),
            };
            m.insert(f.name().into(), v);
        }
        Value::Object(m)
    }
}

/// One row per tensor, columns `tensor, J2, …, J10`.
pub fn write_csv<W: Write>(out: W, rows: &[AnyInvariants]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["tensor".to_string()];
    header.extend(Invariant::ALL.iter().map(|f| f.name().to_string()));
    w.write_record(&header).map_err(csv_error)?;
    for (i, row) in rows.iter().enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(Invariant::ALL.iter().map(|&f| row.text(f)));
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

/// `J2 = 8/1` lines.
pub fn write_text<W: Write>(mut out: W, inv: &AnyInvariants) -> Result<()> {
    for f in Invariant::ALL {
        writeln!(out, "{:<4}= {}", f.name(), inv.text(f))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let text = r#"{"components": ["8", 0, "0/3", -4, "0", "10/2", 5, 3, 0]}"#;
        let ts = parse_tensors(text, Backend::Exact).unwrap();
        assert_eq!(ts.len(), 1);
        let back = tensor_to_json(&ts[0]);
        assert_eq!(
            back.to_string(),
            r#"{"components":["8/1","0/1","0/1","-4/1","0/1","5/1","5/1","3/1","0/1"]}"#
        );
        let inv = AnyInvariants::of(&ts[0]);
        assert_eq!(inv.to_json()["J3"], "-6480/1");
    }

    #[test]
    fn backend_mismatch() {
        let exact = parse_tensors(r#"{"components":[0.5,0,0,0,0,0,0,0,0]}"#, Backend::Exact);
        assert!(matches!(exact, Err(Error::BackendMismatch(_))));
        let float = parse_tensors(r#"{"components":["1/2",0,0,0,0,0,0,0,0]}"#, Backend::Float);
        assert!(matches!(float, Err(Error::BackendMismatch(_))));
        let inline = tensor_from_strings(&vec!["1/2".to_string(); 9], Backend::Float);
        assert!(matches!(inline, Err(Error::BackendMismatch(_))));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_tensors(r#"{"components": []}"#, Backend::Float),
            Err(Error::ComponentCount(0))
        ));
        assert!(matches!(
            parse_tensors("{", Backend::Float),
            Err(Error::Json(_))
        ));
        assert!(parse_tensors(r#"{"comp": [1]}"#, Backend::Float).is_err());
    }

    #[test]
    fn array_input() {
        let text = r#"[{"components":[1,0,0,0,0,0,0,0,0]},{"components":[0,1,0,0,0,0,0,0,0]}]"#;
        assert_eq!(parse_tensors(text, Backend::Float).unwrap().len(), 2);
    }

    #[test]
    fn json_key_order_is_canonical() {
        let d = AnyTensor::Float(Harmonic4::from_independent([
            1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        ]));
        let s = AnyInvariants::of(&d).to_json().to_string();
        assert!(s.starts_with(r#"{"J2":8.0,"J3":0.0,"J4":32.0,"#), "{s}");
        assert!(s.ends_with(r#""J10":0.0}"#));
    }

    #[test]
    fn csv_rows() {
        let d = AnyTensor::Exact(Harmonic4::from_i64([1, 0, 0, 0, 0, 0, 0, 0, 0]));
        let mut buf = Vec::new();
        write_csv(&mut buf, &[AnyInvariants::of(&d)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "tensor,J2,J3,J4,J5,J6,K6,J7,J8,J9,J10\n0,8/1,0/1,32/1,0/1,0/1,128/1,0/1,0/1,0/1,0/1\n"
        );
    }
}
