//! JSON interchange for rings, elements, matrices, and index text forms.
//!
//! Ring: {"kind":"modular","q":9} | {"kind":"poly","vars":["xi"]} | {"kind":"int"}.
//! Element: an integer (or decimal string for big values) or
//! {"monomials":[{"exp":[1,0],"coef":-1}]}.
//! Matrix: {"dim":n,"entries":[[...],[...]]}.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::index::WeightIndex;
use crate::matrix::ExactMatrix;
use crate::ring::{Payload, Ring, RingElement, RingKind};
use crate::Error;

pub fn ring_to_json(ring: &Ring) -> Value {
    match ring.kind() {
        RingKind::Integers => json!({"kind": "int"}),
        RingKind::Modular(q) => json!({"kind": "modular", "q": q}),
        RingKind::Poly(vars) => json!({"kind": "poly", "vars": vars}),
    }
}

pub fn ring_from_json(v: &Value) -> Result<Ring, Error> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("ring spec needs a \"kind\" field".into()))?;
    match kind {
        "int" => Ok(Ring::integers()),
        "modular" => {
            let q = v
                .get("q")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("modular ring needs integer \"q\"".into()))?;
            Ring::modular(q)
        }
        "poly" => {
            let vars: Vec<String> = v
                .get("vars")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("poly ring needs \"vars\" array".into()))?
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("variable names must be strings".into()))
                })
                .collect::<Result<_, _>>()?;
            let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
            Ring::poly(&refs)
        }
        other => Err(Error::Parse(format!("unknown ring kind: {other}"))),
    }
}

/// Compact text forms for the command line: "int", "z/9", "poly:xi,zeta".
pub fn ring_from_text(s: &str) -> Result<Ring, Error> {
    if s == "int" || s == "z" {
        return Ok(Ring::integers());
    }
    if let Some(q) = s.strip_prefix("z/").or_else(|| s.strip_prefix("Z/")) {
        let q: u64 = q.parse().map_err(|_| Error::Parse(format!("bad modulus in {s}")))?;
        return Ring::modular(q);
    }
    if let Some(vars) = s.strip_prefix("poly:") {
        let names: Vec<&str> = vars.split(',').map(str::trim).collect();
        return Ring::poly(&names);
    }
    // Also accept inline JSON ring specs.
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return ring_from_json(&v);
    }
    Err(Error::Parse(format!("unrecognized ring: {s} (try int, z/9, poly:xi)")))
}

fn bigint_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    }
}

pub fn elem_to_json(x: &RingElement) -> Value {
    match x.payload() {
        Payload::Res(r) => json!(r),
        Payload::Int(b) => bigint_to_json(b),
        Payload::Poly(terms) => {
            let monomials: Vec<Value> = terms
                .iter()
                .map(|(m, c)| json!({"exp": m.0, "coef": bigint_to_json(c)}))
                .collect();
            json!({ "monomials": monomials })
        }
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt, Error> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.parse().map_err(|_| Error::Parse(format!("bad integer: {s}")));
    }
    Err(Error::Parse(format!("expected an integer, got {v}")))
}

pub fn elem_from_json(ring: &Ring, v: &Value) -> Result<RingElement, Error> {
    if let Some(ms) = v.get("monomials").and_then(Value::as_array) {
        let mut terms = Vec::with_capacity(ms.len());
        for m in ms {
            let exp: Vec<u32> = m
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("monomial needs \"exp\" array".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|x| x as u32)
                        .ok_or_else(|| Error::Parse("exponents must be nonnegative".into()))
                })
                .collect::<Result<_, _>>()?;
            let coef = bigint_from_json(
                m.get("coef").ok_or_else(|| Error::Parse("monomial needs \"coef\"".into()))?,
            )?;
            let coef = coef
                .to_i64()
                .ok_or_else(|| Error::Parse("monomial coefficient out of range".into()))?;
            terms.push((exp, coef));
        }
        return RingElement::poly_from_terms(ring, &terms);
    }
    Ok(RingElement::from_bigint(ring, bigint_from_json(v)?))
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    let entries: Vec<Vec<Value>> = (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| elem_to_json(m.entry(r, c))).collect())
        .collect();
    json!({"dim": m.dim(), "entries": entries})
}

pub fn matrix_from_json(ring: &Ring, v: &Value) -> Result<ExactMatrix, Error> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("matrix needs integer \"dim\"".into()))? as usize;
    let entries = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("matrix needs \"entries\" array".into()))?;
    if entries.len() != dim {
        return Err(Error::ShapeMismatch);
    }
    let mut rows = Vec::with_capacity(dim);
    for row in entries {
        let row = row.as_array().ok_or_else(|| Error::Parse("entries must be arrays".into()))?;
        if row.len() != dim {
            return Err(Error::ShapeMismatch);
        }
        rows.push(row.iter().map(|e| elem_from_json(ring, e)).collect::<Result<Vec<_>, _>>()?);
    }
    ExactMatrix::from_rows(ring, &rows)
}

/// Parse an index in digit form ("135", n <= 9), comma form ("1,3,5"), or
/// JSON array form ("[1,3,5]").
pub fn parse_index(n: u32, s: &str) -> Result<WeightIndex, Error> {
    let s = s.trim();
    let elems: Vec<u32> = if s.starts_with('[') {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?
    } else if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad index entry: {t}"))))
            .collect::<Result<_, _>>()?
    } else {
        if n > 9 {
            return Err(Error::Parse("digit form only valid for n <= 9".into()));
        }
        s.chars()
            .map(|c| {
                c.to_digit(10).map(|d| d as u32).ok_or_else(|| {
                    Error::Parse(format!("bad digit in index: {c}"))
                })
            })
            .collect::<Result<_, _>>()?
    };
    WeightIndex::new(n, &elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_round_trip() {
        for r in [
            Ring::integers(),
            Ring::modular(9).unwrap(),
            Ring::poly(&["xi", "zeta"]).unwrap(),
        ] {
            assert_eq!(&ring_from_json(&ring_to_json(&r)).unwrap(), &r);
        }
        assert_eq!(ring_from_text("z/25").unwrap(), Ring::modular(25).unwrap());
        assert_eq!(ring_from_text("poly:xi").unwrap(), Ring::poly(&["xi"]).unwrap());
        assert!(ring_from_text("gf(4)").is_err());
    }

    #[test]
    fn element_round_trip() {
        let z9 = Ring::modular(9).unwrap();
        let x = RingElement::from_i64(&z9, 7);
        assert_eq!(elem_from_json(&z9, &elem_to_json(&x)).unwrap(), x);

        let p = Ring::poly(&["xi", "zeta"]).unwrap();
        let e = p.var(0).mul(&p.var(1)).scale(-3).add(&p.one());
        let v = elem_to_json(&e);
        assert_eq!(elem_from_json(&p, &v).unwrap(), e);
    }

    #[test]
    fn matrix_round_trip() {
        let z9 = Ring::modular(9).unwrap();
        let t = ExactMatrix::transvection(&z9, 3, 1, 2, &RingElement::from_i64(&z9, 4));
        let v = matrix_to_json(&t);
        assert_eq!(matrix_from_json(&z9, &v).unwrap(), t);
        assert!(matrix_from_json(&z9, &serde_json::json!({"dim": 2, "entries": [[1]]})).is_err());
    }

    #[test]
    fn index_text_forms() {
        let a = parse_index(5, "135").unwrap();
        let b = parse_index(5, "1,3,5").unwrap();
        let c = parse_index(5, "[1,3,5]").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert!(parse_index(12, "135").is_err());
        assert!(parse_index(12, "1,3,11").is_ok());
    }
}
