use serde_json::{json, Map, Value};

use wopkit::exactnum::fmt_rat;
use wopkit::{MatQ, Rat, SurdPoly};

pub fn ln_p(p: u64) -> f64 {
    (p as f64).ln()
}

pub fn rat(x: &Rat) -> Value {
    Value::String(fmt_rat(x))
}

pub fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn mat(m: &MatQ) -> Value {
    Value::Array(m.to_rows().iter().map(|r| rats(r)).collect())
}

/// A vector of a_M whose coordinates are multiples of l.
pub fn ell_vec(v: &[Rat], p: u64) -> Value {
    let l = ln_p(p);
    let dec: Vec<f64> = v.iter().map(|x| to_f64(x) * l).collect();
    json!({ "exact_in_l": rats(v), "decimal": dec })
}

/// A polynomial in l, exactly and with l = log p.
pub fn surd(s: &SurdPoly, p: u64) -> Value {
    json!({
        "exact": s.to_string(),
        "poly_in_l": s.coeff_strings(),
        "decimal": s.to_f64(ln_p(p)) + 0.0,
    })
}

fn to_f64(x: &Rat) -> f64 {
    // + 0.0 turns the empty sum's -0.0 into 0.0
    SurdPoly::from_rat(x.clone()).to_f64(1.0) + 0.0
}

/// Plain text view: scalars as `key: value`, arrays of objects as rows.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                        out.push_str(&format!("{k}:\n"));
                        for it in items {
                            out.push_str(&format!("  {}\n", row(it.as_object().unwrap())));
                        }
                    }
                    _ => out.push_str(&format!("{k}: {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{}\n", scalar(other))),
    }
    out
}

fn row(m: &Map<String, Value>) -> String {
    m.iter().map(|(k, x)| format!("{k}={}", scalar(x))).collect::<Vec<_>>().join("  ")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
