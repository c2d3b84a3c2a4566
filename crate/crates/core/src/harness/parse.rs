use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::{HarnessError, Input};
use crate::admissible::{Admissible, XPoly};
use crate::corpus;
use crate::numeric::GaussRat;
use crate::su2::{SU2Function, SU2Monomial};

/// Parse failure located by a JSON pointer into the offending document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at \"{pointer}\": {message}")]
pub struct ParseError {
    pub pointer: String,
    pub message: String,
}

fn fail<T>(pointer: &str, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pointer: pointer.to_string(), message: message.into() })
}

/// Resolves `corpus:NAME`, inline JSON (anything starting with `{`), or a
/// file path to document text.
pub fn read_source(arg: &str) -> Result<String, HarnessError> {
    if let Some(name) = arg.strip_prefix("corpus:") {
        return corpus::get(name)
            .map(str::to_string)
            .ok_or_else(|| HarnessError::Io { path: arg.to_string(), message: "no such corpus entry".into() });
    }
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| HarnessError::Io { path: arg.to_string(), message: e.to_string() })
}

/// Parses an SU(2) term list or an admissible document. Duplicate keys are
/// combined and zero coefficients dropped.
pub fn parse_input(text: &str) -> Result<Input, ParseError> {
    let value: Value = serde_json::from_str(text).or_else(|e| fail("", format!("invalid JSON: {e}")))?;
    parse_value(&value)
}

pub fn parse_value(value: &Value) -> Result<Input, ParseError> {
    let obj = value.as_object().map_or_else(|| fail("", "expected an object"), Ok)?;
    if obj.contains_key("zvars") || obj.contains_key("xvars") {
        parse_admissible(obj).map(Input::Admissible)
    } else {
        parse_su2(obj).map(Input::Su2)
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], required: &[&str], at: &str) -> Result<(), ParseError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return fail(&format!("{at}/{key}"), "unexpected field");
        }
    }
    for key in required {
        if !obj.contains_key(*key) {
            return fail(at, format!("missing field \"{key}\""));
        }
    }
    Ok(())
}

fn as_object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().map_or_else(|| fail(at, "expected an object"), Ok)
}

fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().map_or_else(|| fail(at, "expected an array"), Ok)
}

fn as_int(v: &Value, at: &str) -> Result<i64, ParseError> {
    v.as_i64().map_or_else(|| fail(at, "expected an integer"), Ok)
}

fn as_nat(v: &Value, at: &str) -> Result<u32, ParseError> {
    v.as_u64().and_then(|n| u32::try_from(n).ok()).map_or_else(|| fail(at, "expected a non-negative integer"), Ok)
}

fn parse_coeff(obj: &Map<String, Value>, at: &str) -> Result<GaussRat, ParseError> {
    let part = |key: &str| -> Result<&str, ParseError> {
        obj.get(key)
            .and_then(Value::as_str)
            .map_or_else(|| fail(&format!("{at}/{key}"), "expected a rational string \"p/q\""), Ok)
    };
    let re = part("re")?;
    let im = part("im")?;
    let check = |s: &str, key: &str| {
        crate::numeric::BigRat::parse_canonical(s).or_else(|e| fail(&format!("{at}/{key}"), e.to_string()))
    };
    Ok(GaussRat::new(check(re, "re")?, check(im, "im")?))
}

fn parse_su2(obj: &Map<String, Value>) -> Result<SU2Function, ParseError> {
    check_keys(obj, &["terms"], &["terms"], "")?;
    let terms = as_array(&obj["terms"], "/terms")?;
    let mut out = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let at = format!("/terms/{i}");
        let t = as_object(t, &at)?;
        check_keys(t, &["k", "n", "m", "coeff"], &["k", "n", "m", "coeff"], &at)?;
        let k = as_int(&t["k"], &format!("{at}/k"))?;
        let n = as_nat(&t["n"], &format!("{at}/n"))?;
        let m = as_nat(&t["m"], &format!("{at}/m"))?;
        let coeff_at = format!("{at}/coeff");
        let c = as_object(&t["coeff"], &coeff_at)?;
        check_keys(c, &["re", "im"], &["re", "im"], &coeff_at)?;
        out.push((SU2Monomial::new(k, n, m), parse_coeff(c, &coeff_at)?));
    }
    Ok(SU2Function::from_terms(out))
}

fn parse_admissible(obj: &Map<String, Value>) -> Result<Admissible, ParseError> {
    check_keys(obj, &["zvars", "xvars", "terms"], &["zvars", "xvars", "terms"], "")?;
    let k = as_nat(&obj["zvars"], "/zvars")? as usize;
    let l = as_nat(&obj["xvars"], "/xvars")? as usize;
    let terms = as_array(&obj["terms"], "/terms")?;
    let mut out = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let at = format!("/terms/{i}");
        let t = as_object(t, &at)?;
        check_keys(t, &["z", "coeff"], &["z", "coeff"], &at)?;
        let z_at = format!("{at}/z");
        let z = as_array(&t["z"], &z_at)?;
        if z.len() != k {
            return fail(&z_at, format!("arity mismatch: expected {k} exponents, found {}", z.len()));
        }
        let z: Vec<i64> =
            z.iter().enumerate().map(|(j, e)| as_int(e, &format!("{z_at}/{j}"))).collect::<Result<_, _>>()?;
        let coeff_at = format!("{at}/coeff");
        let mut poly = XPoly::zero(l);
        for (j, c) in as_array(&t["coeff"], &coeff_at)?.iter().enumerate() {
            let c_at = format!("{coeff_at}/{j}");
            let c = as_object(c, &c_at)?;
            check_keys(c, &["exps", "re", "im"], &["exps", "re", "im"], &c_at)?;
            let e_at = format!("{c_at}/exps");
            let exps = as_array(&c["exps"], &e_at)?;
            if exps.len() != l {
                return fail(&e_at, format!("arity mismatch: expected {l} exponents, found {}", exps.len()));
            }
            let exps: Vec<u32> =
                exps.iter().enumerate().map(|(q, e)| as_nat(e, &format!("{e_at}/{q}"))).collect::<Result<_, _>>()?;
            poly.add_term(exps, &parse_coeff(c, &c_at)?);
        }
        out.push((z, poly));
    }
    Ok(Admissible::from_terms(k, l, out).expect("arities checked above"))
}

fn coeff_json(c: &GaussRat) -> Value {
    json!({ "re": c.re.to_wire(), "im": c.im.to_wire() })
}

/// Canonical term-list document, terms in monomial order.
pub fn su2_to_json(f: &SU2Function) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .map(|(mono, c)| json!({ "k": mono.a_exp, "n": mono.b_exp, "m": mono.b_star_exp, "coeff": coeff_json(c) }))
        .collect();
    json!({ "terms": terms })
}

/// Canonical admissible document, `z` keys sorted lexicographically.
pub fn admissible_to_json(h: &Admissible) -> Value {
    let terms: Vec<Value> = h
        .terms()
        .iter()
        .map(|(z, poly)| {
            let coeff: Vec<Value> = poly
                .terms()
                .iter()
                .map(|(exps, c)| json!({ "exps": exps, "re": c.re.to_wire(), "im": c.im.to_wire() }))
                .collect();
            json!({ "z": z, "coeff": coeff })
        })
        .collect();
    let mut doc = BTreeMap::new();
    doc.insert("zvars", json!(h.z_arity()));
    doc.insert("xvars", json!(h.x_arity()));
    doc.insert("terms", Value::Array(terms));
    json!(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_document() {
        let doc = r#"{"terms":[{"k":0,"n":1,"m":1,"coeff":{"re":"1/1","im":"0/1"}}]}"#;
        let Input::Su2(f) = parse_input(doc).unwrap() else { panic!("expected SU(2)") };
        assert_eq!(f, SU2Function::b().normal_multiply(&SU2Function::b_star()));
        assert_eq!(su2_to_json(&f), serde_json::from_str::<Value>(doc).unwrap());
    }

    #[test]
    fn admissible_document() {
        let doc = corpus::get("z-plus-zinv").unwrap();
        let Input::Admissible(h) = parse_input(doc).unwrap() else { panic!("expected admissible") };
        let sp: Vec<Vec<i64>> = h.terms().keys().cloned().collect();
        assert_eq!(sp, vec![vec![-1], vec![1]]);
        let round = parse_value(&admissible_to_json(&h)).unwrap();
        assert_eq!(round, Input::Admissible(h));
    }

    #[test]
    fn canonicalization_combines() {
        let doc = r#"{"terms":[
            {"k":1,"n":0,"m":0,"coeff":{"re":"1/2","im":"0/1"}},
            {"k":1,"n":0,"m":0,"coeff":{"re":"1/2","im":"0/1"}},
            {"k":0,"n":0,"m":0,"coeff":{"re":"0/1","im":"0/1"}}]}"#;
        let f = parse_input(doc).unwrap();
        let expected = json!({"terms":[{"k":1,"n":0,"m":0,"coeff":{"re":"1/1","im":"0/1"}}]});
        assert_eq!(f.to_json(), expected);
    }

    #[test]
    fn errors_carry_pointers() {
        let doc = r#"{"terms":[{"k":0,"n":1,"m":1,"coeff":{"re":"2/4","im":"0/1"}}]}"#;
        let err = parse_input(doc).unwrap_err();
        assert_eq!(err.pointer, "/terms/0/coeff/re");

        let doc = r#"{"zvars":2,"xvars":0,"terms":[{"z":[1],"coeff":[]}]}"#;
        assert_eq!(parse_input(doc).unwrap_err().pointer, "/terms/0/z");

        let doc = r#"{"zvars":1,"xvars":1,"terms":[{"z":[1],"coeff":[{"exps":[-1],"re":"1/1","im":"0/1"}]}]}"#;
        assert_eq!(parse_input(doc).unwrap_err().pointer, "/terms/0/coeff/0/exps/0");

        assert_eq!(parse_input(r#"{"terms":[],"x":1}"#).unwrap_err().pointer, "/x");
        assert_eq!(parse_input("[1]").unwrap_err().pointer, "");
        assert_eq!(parse_input("{").unwrap_err().pointer, "");
        let missing = r#"{"terms":[{"k":0,"n":1,"coeff":{"re":"1/1","im":"0/1"}}]}"#;
        assert_eq!(parse_input(missing).unwrap_err().pointer, "/terms/0");
    }

    #[test]
    fn sources() {
        assert!(read_source("corpus:b-bstar").is_ok());
        assert!(matches!(read_source("corpus:nope"), Err(HarnessError::Io { .. })));
        assert_eq!(read_source(" {\"terms\":[]}").unwrap(), " {\"terms\":[]}");
        assert!(read_source("/definitely/not/here.json").is_err());
    }
}
