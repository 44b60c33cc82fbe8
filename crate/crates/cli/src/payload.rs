//! Parsing and printing of command-line payloads.
//!
//! Complex scalars are accepted either as `a+bi` shorthand (`1`, `-i`,
//! `0.5-2i`, `1e-3+4e2i`) or as a JSON pair `[re, im]`. Lists are comma
//! separated shorthand or a JSON array. Output uses JSON pairs printed with
//! the shortest representation that reads back to the same bits.

use junction_core::{C2Matrix64, ExtendedReal};
use num_complex::Complex64;
use serde_json::Value;

pub type ParseResult<T> = std::result::Result<T, String>;

fn parse_real(s: &str) -> ParseResult<f64> {
    let t = s.trim();
    let v: f64 = t.parse().map_err(|_| format!("not a number: `{t}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not a finite number: `{t}`"))
    }
}

/// Index of the sign separating real and imaginary parts, if any.
fn split_point(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    (1..b.len()).rev().find(|&k| (b[k] == b'+' || b[k] == b'-') && !matches!(b[k - 1], b'e' | b'E'))
}

/// Parses `a+bi` shorthand.
pub fn parse_complex(s: &str) -> ParseResult<Complex64> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| format!("bad JSON complex `{t}`: {e}"))?;
        return complex_from_json(&v);
    }
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(t)?, 0.0));
    };
    let (re, im) = match split_point(body) {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    Ok(Complex64::new(re, im))
}

/// Reads `[re, im]` or a bare real number.
pub fn complex_from_json(v: &Value) -> ParseResult<Complex64> {
    let num = |x: &Value| {
        x.as_f64().filter(|f| f.is_finite()).ok_or_else(|| format!("expected a finite number, got `{x}`"))
    };
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(num(&pair[0])?, num(&pair[1])?)),
        Value::Number(_) => Ok(Complex64::new(num(v)?, 0.0)),
        other => Err(format!("expected [re, im], got `{other}`")),
    }
}

/// Parses exactly `n` complex numbers from a comma list or a JSON array.
pub fn parse_complex_list(s: &str, n: usize) -> ParseResult<Vec<Complex64>> {
    let t = s.trim();
    let items = if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| format!("bad JSON list `{t}`: {e}"))?;
        let arr = v.as_array().ok_or_else(|| format!("expected a JSON array, got `{t}`"))?;
        arr.iter().map(complex_from_json).collect::<ParseResult<Vec<_>>>()?
    } else {
        t.split(',').map(parse_complex).collect::<ParseResult<Vec<_>>>()?
    };
    if items.len() != n {
        return Err(format!("expected {n} complex values, got {}", items.len()));
    }
    Ok(items)
}

/// Parses exactly `n` reals from a comma list or a JSON array.
pub fn parse_real_list(s: &str, n: usize) -> ParseResult<Vec<f64>> {
    let t = s.trim();
    let items = if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| format!("bad JSON list `{t}`: {e}"))?;
        let arr = v.as_array().ok_or_else(|| format!("expected a JSON array, got `{t}`"))?;
        arr.iter()
            .map(|x| x.as_f64().filter(|f| f.is_finite()).ok_or_else(|| format!("expected a number, got `{x}`")))
            .collect::<ParseResult<Vec<_>>>()?
    } else {
        t.split(',').map(parse_real).collect::<ParseResult<Vec<_>>>()?
    };
    if items.len() != n {
        return Err(format!("expected {n} values, got {}", items.len()));
    }
    Ok(items)
}

/// `inf` (or `+inf`, `infinity`) or a finite real.
pub fn parse_extended(s: &str) -> ParseResult<ExtendedReal<f64>> {
    let t = s.trim().trim_matches('"');
    match t.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(ExtendedReal::PlusInfinity),
        _ => parse_real(t).map(ExtendedReal::Finite),
    }
}

/// `ρ₊,ρ₋` pair, each finite or `inf`.
pub fn parse_rho_pair(s: &str) -> ParseResult<(ExtendedReal<f64>, ExtendedReal<f64>)> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = t.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected two values rho_plus,rho_minus, got `{s}`"));
    }
    Ok((parse_extended(parts[0])?, parse_extended(parts[1])?))
}

/// `[[u11, u12], [u21, u22]]` with JSON complex entries.
pub fn parse_matrix(s: &str) -> ParseResult<C2Matrix64> {
    let v: Value = serde_json::from_str(s.trim()).map_err(|e| format!("bad JSON matrix: {e}"))?;
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or("matrix must have two rows")?;
    let mut e = Vec::with_capacity(4);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == 2).ok_or("each row must have two entries")?;
        for x in row {
            e.push(complex_from_json(x)?);
        }
    }
    Ok(C2Matrix64::new(e[0], e[1], e[2], e[3]))
}

/// Angle given as a number or a multiple of `pi`: `pi/2`, `-3pi/4`, `0.25*pi`.
pub fn parse_angle(s: &str) -> ParseResult<f64> {
    let t: String = s.trim().chars().filter(|c| !c.is_whitespace()).collect();
    let Some(k) = t.find("pi") else {
        return parse_real(&t);
    };
    let (head, tail) = (&t[..k], &t[k + 2..]);
    let head = head.trim_end_matches('*');
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => parse_real(h)?,
    };
    let den = match tail {
        "" => 1.0,
        d => parse_real(d.strip_prefix('/').ok_or_else(|| format!("bad angle `{s}`"))?)?,
    };
    if den == 0.0 {
        return Err(format!("bad angle `{s}`"));
    }
    Ok(coef * std::f64::consts::PI / den)
}

/// `[re, im]`; non-finite parts become `null`.
pub fn complex_json(z: Complex64) -> Value {
    Value::Array(vec![real_json(z.re), real_json(z.im)])
}

pub fn real_json(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn complex_list_json(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex_json(z)).collect())
}

pub fn matrix_json(m: &C2Matrix64) -> Value {
    Value::Array(vec![complex_list_json(&[m.u11, m.u12]), complex_list_json(&[m.u21, m.u22])])
}

pub fn extended_json(x: ExtendedReal<f64>) -> Value {
    match x {
        ExtendedReal::Finite(v) => real_json(v),
        ExtendedReal::PlusInfinity => Value::String("inf".into()),
    }
}

/// Shorthand form, e.g. `0.5-2i`; reads back bit-exactly with [`parse_complex`].
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}
