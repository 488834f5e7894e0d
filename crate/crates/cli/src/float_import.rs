//! Rounds a pair file written with floating-point scalars to exact rationals.
//!
//! A scalar may be a JSON number (real), `{"re": x, "im": y}` with numbers,
//! or the exact string form, which is left alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value};

pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// The closest fraction to `x` with denominator at most `max_den`.
pub fn nearest_fraction(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (sign, x) = if x < 0.0 { (-1, -x) } else { (1, x) };
    // Convergents h/k of the continued fraction of x.
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut rest = x;
    loop {
        let a = rest.floor() as i64;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            // Best semiconvergent below the bound against the last convergent.
            let t = (max_den - k0) / k1;
            let (hs, ks) = (h0 + t * h1, k0 + t * k1);
            let pick = if (x - hs as f64 / ks as f64).abs() < (x - h1 as f64 / k1 as f64).abs() { (hs, ks) } else { (h1, k1) };
            return Some((sign * pick.0, pick.1));
        }
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if frac < 1e-12 || (x - h1 as f64 / k1 as f64).abs() == 0.0 {
            return Some((sign * h1, k1));
        }
        rest = 1.0 / frac;
    }
}

fn round_part(x: f64, eps: f64) -> Result<String, String> {
    let (p, q) = nearest_fraction(x, MAX_DENOMINATOR).ok_or_else(|| format!("{x} is out of range"))?;
    let err = (x - p as f64 / q as f64).abs();
    if err > eps {
        return Err(format!("{x} is {err:e} from the nearest fraction {p}/{q}, above eps {eps:e}"));
    }
    let r = BigRational::new(BigInt::from(p), BigInt::from(q));
    Ok(loopbraid::render_rational(&r))
}

fn number(v: &Value) -> Option<f64> {
    v.as_f64()
}

fn round_scalar(v: &Value, eps: f64) -> Result<Value, String> {
    let (re, im) = match v {
        Value::Number(_) => (number(v).unwrap(), 0.0),
        Value::Object(m) if m.values().all(Value::is_string) => return Ok(v.clone()),
        Value::Object(m) => {
            let get = |k: &str| m.get(k).and_then(number).ok_or_else(|| format!("scalar needs numeric {k:?}"));
            if m.keys().any(|k| k != "re" && k != "im") {
                return Err("scalar has fields other than re, im".into());
            }
            (get("re")?, get("im")?)
        }
        other => return Err(format!("not a scalar: {other}")),
    };
    let mut out = Map::new();
    out.insert("re".into(), Value::String(round_part(re, eps)?));
    out.insert("im".into(), Value::String(round_part(im, eps)?));
    Ok(Value::Object(out))
}

fn round_form(form: &mut Value, eps: f64) -> Result<(), String> {
    let obj = form.as_object_mut().ok_or("α-form must be an object")?;
    if let Some(Value::Array(vs)) = obj.get_mut("vertex") {
        for v in vs.iter_mut() {
            *v = round_scalar(v, eps)?;
        }
    }
    if let Some(Value::Array(edges)) = obj.get_mut("edges") {
        for e in edges.iter_mut() {
            if let Some(Value::Array(rows)) = e.get_mut("block") {
                for row in rows.iter_mut() {
                    if let Value::Array(xs) = row {
                        for x in xs.iter_mut() {
                            *x = round_scalar(x, eps)?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Rewrites the `S` and `R` forms of a pair file in place.
pub fn round_pair_file(doc: &mut Value, eps: f64) -> Result<(), String> {
    if !(eps >= 0.0) {
        return Err("eps must be non-negative".into());
    }
    for key in ["S", "R"] {
        let form = doc.get_mut(key).ok_or_else(|| format!("missing {key}"))?;
        round_form(form, eps)?;
    }
    Ok(())
}
