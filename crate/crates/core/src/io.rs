//! JSON sequence literals and deterministic number formatting.
//!
//! Accepted inputs (exactly one coefficient family per document):
//!
//! ```text
//! {"d": [...], "tail_period": p | null}               chain sequence only
//! {"c": [...], "d": [...], "tail_period": p | null}   pair from c and d
//! {"c": [...], "m": [...], "tail_period": p | null}   pair from c and m (m_0 optional)
//! {"alpha": [[re, im], ...]}                          Verblunsky coefficients
//! ```

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};
use std::io;

use crate::bijection::{SequencePair, VerblunskySequence};
use crate::chain::ChainSequence;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceInput {
    Chain(ChainSequence),
    Pair(SequencePair),
    Alpha(VerblunskySequence),
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

fn reals(obj: &Map<String, Value>, key: &str) -> Result<Option<Vec<f64>>> {
    let Some(v) = obj.get(key) else { return Ok(None) };
    let arr = v.as_array().ok_or_else(|| bad(format!("\"{key}\" must be an array of numbers")))?;
    arr.iter()
        .map(|x| x.as_f64().ok_or_else(|| bad(format!("\"{key}\" must contain only numbers"))))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn complexes(v: &Value) -> Result<Vec<Complex64>> {
    let arr = v.as_array().ok_or_else(|| bad("\"alpha\" must be an array of [re, im] pairs"))?;
    arr.iter()
        .map(|x| match x.as_array().map(|a| a.as_slice()) {
            Some([re, im]) => match (re.as_f64(), im.as_f64()) {
                (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                _ => Err(bad("alpha entries must be numeric [re, im] pairs")),
            },
            _ => Err(bad("alpha entries must be [re, im] pairs")),
        })
        .collect()
}

fn tail(obj: &Map<String, Value>) -> Result<Option<usize>> {
    match obj.get("tail_period") {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .filter(|&p| p > 0)
            .map(|p| Some(p as usize))
            .ok_or_else(|| bad("\"tail_period\" must be a positive integer or null")),
    }
}

/// Parse one sequence literal.
pub fn parse_sequence(value: &Value) -> Result<SequenceInput> {
    let obj = value.as_object().ok_or_else(|| bad("input must be a JSON object"))?;
    for key in obj.keys() {
        if !["alpha", "c", "d", "m", "tail_period"].contains(&key.as_str()) {
            return Err(bad(format!("unknown field \"{key}\"")));
        }
    }
    let c = reals(obj, "c")?;
    let d = reals(obj, "d")?;
    let m = reals(obj, "m")?;
    let tail = tail(obj)?;
    if let Some(alpha) = obj.get("alpha") {
        if c.is_some() || d.is_some() || m.is_some() {
            return Err(bad("give either \"alpha\" or a (c, d) / (c, m) pair, not both"));
        }
        let alpha = complexes(alpha)?;
        let v = VerblunskySequence::new(alpha)?;
        return Ok(SequenceInput::Alpha(match tail {
            Some(p) => v.with_periodic_tail(Some(p))?,
            None => v,
        }));
    }
    match (c, d, m) {
        (_, Some(_), Some(_)) => Err(bad("give either \"d\" or \"m\", not both")),
        (Some(c), Some(d), None) => Ok(SequenceInput::Pair(SequencePair::from_c_d(c, d, tail)?)),
        (Some(c), None, Some(m)) => Ok(SequenceInput::Pair(SequencePair::from_c_m(c, with_m0(m), tail)?)),
        (None, Some(d), None) => Ok(SequenceInput::Chain(ChainSequence::new(d, tail)?)),
        (None, None, Some(m)) => Ok(SequenceInput::Chain(ChainSequence::from_minimal(with_m0(m), tail)?)),
        (Some(_), None, None) => Err(bad("\"c\" needs \"d\" or \"m\"")),
        (None, None, None) => Err(bad("no coefficient family given")),
    }
}

/// Positive chain sequences have `m_n > 0` for `n ≥ 1`, so a leading zero can
/// only be `m_0`.
fn with_m0(m: Vec<f64>) -> Vec<f64> {
    if m.first() == Some(&0.0) {
        m
    } else {
        std::iter::once(0.0).chain(m).collect()
    }
}

pub fn parse_sequence_str(text: &str) -> Result<SequenceInput> {
    let value: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    parse_sequence(&value)
}

/// `{"c": [...], "d": [...], "m": [...], "tail_period": p | null}`.
pub fn pair_json(pair: &SequencePair) -> Value {
    serde_json::json!({
        "c": pair.c(),
        "d": pair.d(),
        "m": pair.m(),
        "tail_period": pair.periodic_tail(),
    })
}

pub fn complex_json(z: &[Complex64]) -> Value {
    Value::Array(z.iter().map(|w| serde_json::json!([w.re, w.im])).collect())
}

/// `{"alpha": [[re, im], ...], "tau": [[re, im], ...]}`.
pub fn alpha_json(v: &VerblunskySequence) -> Value {
    serde_json::json!({
        "alpha": complex_json(v.alpha()),
        "tau": complex_json(v.tau()),
        "tail_period": v.periodic_tail(),
    })
}

/// Formats every `f64` with 17 significant digits; non-finite values become
/// `null`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{}", format_f64(value))
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `value` in scientific notation with 17 significant digits.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialize with [`FullPrecision`] number formatting.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_family() {
        assert!(matches!(
            parse_sequence_str(r#"{"d": [0.5, 0.25], "tail_period": 1}"#).unwrap(),
            SequenceInput::Chain(_)
        ));
        let SequenceInput::Pair(p) = parse_sequence_str(r#"{"c": [0, 0], "m": [0.5, 0.5]}"#).unwrap() else {
            panic!()
        };
        assert_eq!(p.d(), &[0.5, 0.25]);
        assert!(matches!(
            parse_sequence_str(r#"{"c": [0], "d": [0.5]}"#).unwrap(),
            SequenceInput::Pair(_)
        ));
        assert!(matches!(
            parse_sequence_str(r#"{"alpha": [[0.5, 0], [0.3, 0.1]]}"#).unwrap(),
            SequenceInput::Alpha(_)
        ));
    }

    #[test]
    fn rejects_mixed_or_malformed() {
        for bad in [
            r#"{"c": [0], "d": [0.5], "m": [0, 0.5]}"#,
            r#"{"alpha": [[0, 0]], "c": [0]}"#,
            r#"{"c": [0]}"#,
            r#"{}"#,
            r#"{"alpha": [[2, 0]]}"#,
            r#"{"alpha": [[0]]}"#,
            r#"{"d": [0.5], "extra": 1}"#,
            r#"[1, 2]"#,
            r#"{"d": [0.5], "tail_period": 0}"#,
        ] {
            assert!(parse_sequence_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(to_json_string(&serde_json::json!({"x": [0.5, f64::NAN]})), r#"{"x":[5.0000000000000000e-1,null]}"#);
        let back: f64 = format_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }
}
