//! Machine-readable reports with deterministic number formatting: every
//! float is printed with 17 significant digits, so identical inputs give
//! byte-identical output.

use oblique_frames::{C64, Mat, Spectrum, Tol};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};
use std::io;

struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // 1 + 16 digits of mantissa: enough to round-trip any f64.
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with the fixed float format; keys are already sorted because
/// the map type is ordered.
pub fn to_json(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

pub fn num(x: f64) -> Value {
    debug_assert!(x.is_finite(), "reports never contain non-finite numbers");
    Value::from(x)
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn entry(z: C64, complex: bool) -> Value {
    if complex {
        Value::Array(vec![num(z.re), num(z.im)])
    } else {
        num(z.re)
    }
}

/// A stack of vectors (matrix columns) as rows-are-vectors JSON, matching
/// the problem-file convention.
pub fn vector_rows(m: &Mat, complex: bool) -> Value {
    Value::Array(
        (0..m.cols())
            .map(|j| Value::Array(m.col(j).into_iter().map(|z| entry(z, complex)).collect()))
            .collect(),
    )
}

/// An operator as its natural rows.
pub fn operator_rows(m: &Mat, complex: bool) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array((0..m.cols()).map(|j| entry(m[(i, j)], complex)).collect())
            })
            .collect(),
    )
}

/// Spectrum without its structural zero tail, with the trimmed count
/// recorded.
pub fn spectrum_value(s: &Spectrum) -> Value {
    let vals = s.values();
    let mut keep = vals.len();
    while keep > 0 && vals[keep - 1] == 0.0 {
        keep -= 1;
    }
    let mut m = Map::new();
    m.insert("values".into(), reals(&vals[..keep]));
    m.insert("trailing_zeros".into(), Value::from(vals.len() - keep));
    m.insert("trace".into(), num(s.trace()));
    Value::Object(m)
}

/// Common report envelope around per-command results.
pub fn envelope(
    command: &str,
    digest: &str,
    tol: &Tol,
    seed: Option<u64>,
    warnings: &[String],
    results: Value,
) -> Value {
    let mut tols = Map::new();
    tols.insert("tau_eq".into(), num(tol.tau_eq));
    tols.insert("tau_rank".into(), num(tol.tau_rank));
    tols.insert("tau_sym".into(), num(tol.tau_sym));

    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.into()));
    m.insert("input_digest".into(), Value::String(digest.into()));
    m.insert("tolerances".into(), Value::Object(tols));
    if let Some(s) = seed {
        m.insert("seed".into(), Value::from(s));
    }
    m.insert(
        "warnings".into(),
        Value::Array(warnings.iter().map(|w| Value::String(w.clone())).collect()),
    );
    m.insert("results".into(), results);
    Value::Object(m)
}

/// Structured error record for nonzero exits.
pub fn error_record(kind: &str, message: &str) -> Value {
    let mut inner = Map::new();
    inner.insert("kind".into(), Value::String(kind.into()));
    inner.insert("message".into(), Value::String(message.into()));
    let mut m = Map::new();
    m.insert("error".into(), Value::Object(inner));
    Value::Object(m)
}
