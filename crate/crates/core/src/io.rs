//! State files (JSON), trajectory export (CSV) and number formatting.
//!
//! A state file is a JSON object holding either
//!
//! ```json
//! {"rho": [[[re, im], [re, im], [re, im]], ...]}
//! ```
//!
//! or
//!
//! ```json
//! {"coefficients": {"omega": [...], "alpha": [...], "beta": [...]}}
//! ```
//!
//! with an optional `"d"` (default 3). When both are present `"rho"` wins.
//! Other keys are ignored. Numbers are
//! written with 17 significant digits so that every `f64` round-trips.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::basis::MAX_DIM;
use crate::dynamics::TrajectoryPoint;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::qudit::{pair_count, reconstruct_qudit, QuditCoefficients};

/// `%.17g`: 17 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e17)`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Pretty JSON formatter that writes floats through [`fmt_f64`].
struct SigFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SigFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        let s = fmt_f64(value);
        // keep floats recognizable as floats
        if s.contains(['.', 'e']) {
            w.write_all(s.as_bytes())
        } else {
            write!(w, "{s}.0")
        }
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// A parsed state file: the matrix plus the form it was given in.
#[derive(Debug, Clone, PartialEq)]
pub enum StateInput {
    Matrix(ComplexMatrix),
    Coefficients(QuditCoefficients),
}

impl StateInput {
    pub fn dim(&self) -> usize {
        match self {
            StateInput::Matrix(m) => m.dim(),
            StateInput::Coefficients(c) => c.d,
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        match self {
            StateInput::Matrix(m) => m.clone(),
            StateInput::Coefficients(c) => reconstruct_qudit(c),
        }
    }
}

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(path, format!("expected a number, found {v}")))
}

fn array<'a>(v: &'a Value, path: &str, len: usize) -> Result<&'a Vec<Value>> {
    let a = v.as_array().ok_or_else(|| bad(path, "expected an array"))?;
    if a.len() != len {
        return Err(bad(path, format!("expected {len} entries, found {}", a.len())));
    }
    Ok(a)
}

fn real_vec(obj: &Map<String, Value>, key: &str, len: usize) -> Result<Vec<f64>> {
    let path = format!("coefficients.{key}");
    let v = obj.get(key).ok_or_else(|| bad(&path, "missing"))?;
    array(v, &path, len)?
        .iter()
        .enumerate()
        .map(|(n, x)| number(x, &format!("{path}[{n}]")))
        .collect()
}

/// Parses a state file. Errors name the offending key and index.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| bad("<root>", "expected a JSON object"))?;

    // without "d", a matrix sets its own size and coefficients mean a qutrit
    let d = match obj.get("d") {
        None => match obj.get("rho").and_then(Value::as_array) {
            Some(rows) => rows.len() as u64,
            None => 3,
        },
        Some(v) => v.as_u64().ok_or_else(|| bad("d", format!("expected a positive integer, found {v}")))?,
    };
    if !(2..=MAX_DIM as u64).contains(&d) {
        return Err(bad("d", format!("dimension {d} outside 2..={MAX_DIM}")));
    }
    let d = d as usize;

    match (obj.get("rho"), obj.get("coefficients")) {
        (None, None) => Err(bad("<root>", "missing \"rho\" or \"coefficients\"")),
        (Some(rho), _) => {
            let rows = array(rho, "rho", d)?;
            let mut data = Vec::with_capacity(d * d);
            for (i, row) in rows.iter().enumerate() {
                let path = format!("rho[{i}]");
                for (j, z) in array(row, &path, d)?.iter().enumerate() {
                    let path = format!("rho[{i}][{j}]");
                    let pair = array(z, &path, 2)?;
                    data.push(Complex64::new(
                        number(&pair[0], &format!("{path}[0]"))?,
                        number(&pair[1], &format!("{path}[1]"))?,
                    ));
                }
            }
            Ok(StateInput::Matrix(ComplexMatrix::new(d, data)?))
        }
        (None, Some(coeffs)) => {
            let c = coeffs
                .as_object()
                .ok_or_else(|| bad("coefficients", "expected an object"))?;
            let omega = real_vec(c, "omega", d)?;
            let alpha = real_vec(c, "alpha", pair_count(d))?;
            let beta = real_vec(c, "beta", pair_count(d))?;
            Ok(StateInput::Coefficients(QuditCoefficients::new(d, omega, alpha, beta)?))
        }
    }
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

/// State-file JSON carrying both representations.
pub fn state_json(c: &QuditCoefficients) -> Value {
    json!({
        "d": c.d,
        "coefficients": {"omega": c.omega, "alpha": c.alpha, "beta": c.beta},
        "rho": matrix_json(&reconstruct_qudit(c)),
    })
}

pub const TRAJECTORY_HEADER: &str = "theta,omega1,omega2,omega3,alpha12,alpha13,alpha23,\
beta12,beta13,beta23,gamma12,gamma13,gamma23,R12,R13,R23,purity";

pub fn write_trajectory_csv<W: Write + ?Sized>(w: &mut W, points: &[TrajectoryPoint]) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for p in points {
        let c = &p.coefficients;
        let gamma = p.bloch.gamma();
        let fields: Vec<String> = std::iter::once(p.theta)
            .chain(c.omega)
            .chain(c.alpha)
            .chain(c.beta)
            .chain(gamma)
            .chain(p.radii)
            .chain(std::iter::once(p.purity))
            .map(fmt_f64)
            .collect();
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}
