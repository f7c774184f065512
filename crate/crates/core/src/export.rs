//! JSON certificates: writing, reading back and re-verification.
//!
//! Exact coefficients are written as strings (`"3/2"`), floating-point ones
//! as JSON numbers.

use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::binary_sos::TwoSquareCertificate;
use crate::error::{Error, Result};
use crate::form::{AnyBinary, AnyQuadratic, BinaryForm, QuadraticForm};
use crate::quad_sos::WeightedSquares;
use crate::scalar::{parse_rational, Backend, Rational, Scalar};
use crate::verify;
use crate::waring::{PowerDecomposition, QMembership};

pub fn scalar_json<S: Scalar>(v: &S) -> Value {
    match S::BACKEND {
        Backend::Exact => Value::String(v.to_string()),
        Backend::Float => json!(v.to_f64() + 0.0),
    }
}

fn vec_json<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn binary_json(f: &AnyBinary) -> Value {
    match f {
        AnyBinary::Exact(f) => vec_json(f.coeffs()),
        AnyBinary::Float(f) => vec_json(f.coeffs()),
    }
}

fn matrix_json<S: Scalar>(m: &[Vec<S>]) -> Value {
    Value::Array(m.iter().map(|r| vec_json(r)).collect())
}

pub fn quadratic_json(q: &AnyQuadratic) -> Value {
    match q {
        AnyQuadratic::Exact(q) => matrix_json(q.matrix()),
        AnyQuadratic::Float(q) => matrix_json(q.matrix()),
    }
}

pub fn binary_certificate_json(input: &AnyBinary, cert: &TwoSquareCertificate) -> Value {
    json!({
        "input": binary_json(input),
        "G": vec_json(cert.g.coeffs()),
        "H": vec_json(cert.h.coeffs()),
        "residual": cert.residual,
        "certified": cert.certified,
        "partition": {
            "selection": cert.selection,
            "pair_multiplicities": cert.pair_multiplicities,
        },
        "backend": cert.backend.as_str(),
        "tolerances": {
            "cluster_rel": cert.tolerances.cluster_rel,
            "real_rel": cert.tolerances.real_rel,
        },
    })
}

pub fn quadratic_certificate_json<S: Scalar>(input: &QuadraticForm<S>, ws: &WeightedSquares<S>) -> Result<Value> {
    let residual = verify::quadratic_residual(input.matrix(), &ws.terms)?;
    let terms: Vec<Value> = ws
        .terms
        .iter()
        .map(|(w, v)| json!({"weight": scalar_json(w), "form": vec_json(v)}))
        .collect();
    Ok(json!({
        "input": matrix_json(input.matrix()),
        "terms": terms,
        "residual": scalar_json(&residual),
        "certified": S::BACKEND == Backend::Exact && residual.is_zero(),
        "backend": S::BACKEND.as_str(),
    }))
}

pub fn waring_json(input: &AnyBinary, membership: &QMembership, decomposition: Option<&PowerDecomposition>) -> Value {
    let mut out = Map::new();
    out.insert("input".into(), binary_json(input));
    out.insert("member".into(), json!(membership.member));
    out.insert("rank".into(), json!(membership.rank));
    if let Some(p) = decomposition {
        let nodes: Vec<Value> = p.nodes.iter().map(|(w, f)| json!({"weight": w, "form": f})).collect();
        out.insert("nodes".into(), Value::Array(nodes));
        out.insert("residual".into(), json!(p.residual));
    } else {
        out.insert("nodes".into(), json!([]));
    }
    Value::Object(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Num {
    Exact(Rational),
    Float(f64),
}

impl Num {
    fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => r.to_f64(),
            Num::Float(v) => *v,
        }
    }
}

fn bad(message: impl Into<String>) -> Error {
    Error::Certificate(message.into())
}

fn num(v: &Value) -> Result<Num> {
    match v {
        Value::String(s) => parse_rational(s).map(Num::Exact).ok_or_else(|| Error::MalformedNumber(s.clone())),
        Value::Number(n) => n.as_f64().map(Num::Float).ok_or_else(|| Error::MalformedNumber(n.to_string())),
        other => Err(bad(format!("expected a number, got {other}"))),
    }
}

fn nums(v: &Value, what: &str) -> Result<Vec<Num>> {
    v.as_array().ok_or_else(|| bad(format!("`{what}` must be an array")))?.iter().map(num).collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn all_exact(v: &[Num]) -> bool {
    v.iter().all(|n| matches!(n, Num::Exact(_)))
}

fn exact_vec(v: &[Num]) -> Vec<Rational> {
    v.iter()
        .map(|n| match n {
            Num::Exact(r) => r.clone(),
            Num::Float(f) => <Rational as Scalar>::from_float(*f),
        })
        .collect()
}

fn float_form(v: &[Num]) -> Result<BinaryForm<f64>> {
    BinaryForm::new(v.iter().map(Num::to_f64).collect())
}

pub fn binary_from_json(v: &Value) -> Result<AnyBinary> {
    let c = nums(v, "input")?;
    if c.is_empty() {
        return Err(bad("empty coefficient list"));
    }
    Ok(if all_exact(&c) { AnyBinary::Exact(BinaryForm::from_rationals(exact_vec(&c))) } else { AnyBinary::Float(float_form(&c)?) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    TwoSquare,
    Quadratic,
    Waring,
}

/// Result of re-checking a certificate with the independent oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub kind: CertificateKind,
    pub recomputed: f64,
    pub recorded: f64,
    /// Exact recomputation gave zero (exact quadratic certificates).
    pub exact_zero: bool,
    pub ok: bool,
}

/// Recompute the residual of any certificate this crate writes and compare
/// with the recorded one: the recorder may not understate.
pub fn verify_certificate(v: &Value) -> Result<VerifyReport> {
    if v.get("G").is_some() {
        let input = binary_from_json(field(v, "input")?)?.to_f64();
        let g = float_form(&nums(field(v, "G")?, "G")?)?;
        let h = float_form(&nums(field(v, "H")?, "H")?)?;
        let recomputed = verify::two_square_residual(&input, &g, &h)?;
        let recorded = num(field(v, "residual")?)?.to_f64();
        return Ok(VerifyReport {
            kind: CertificateKind::TwoSquare,
            recomputed,
            recorded,
            exact_zero: false,
            ok: recomputed <= recorded,
        });
    }
    if let Some(terms) = v.get("terms") {
        let rows = field(v, "input")?.as_array().ok_or_else(|| bad("`input` must be a matrix"))?;
        let m: Vec<Vec<Num>> = rows.iter().map(|r| nums(r, "input")).collect::<Result<_>>()?;
        let mut parsed = Vec::new();
        for t in terms.as_array().ok_or_else(|| bad("`terms` must be an array"))? {
            parsed.push((num(field(t, "weight")?)?, nums(field(t, "form")?, "form")?));
        }
        let recorded = num(field(v, "residual")?)?;
        let exact = m.iter().all(|r| all_exact(r))
            && parsed.iter().all(|(w, f)| matches!(w, Num::Exact(_)) && all_exact(f));
        if exact {
            let q = QuadraticForm::new(m.iter().map(|r| exact_vec(r)).collect())?;
            let terms: Vec<(Rational, Vec<Rational>)> =
                parsed.iter().map(|(w, f)| (exact_vec(std::slice::from_ref(w))[0].clone(), exact_vec(f))).collect();
            let r = verify::quadratic_residual(q.matrix(), &terms)?;
            let recorded_exact = exact_vec(std::slice::from_ref(&recorded))[0].clone();
            return Ok(VerifyReport {
                kind: CertificateKind::Quadratic,
                recomputed: r.to_f64(),
                recorded: recorded_exact.to_f64(),
                exact_zero: r.is_zero(),
                ok: r <= recorded_exact,
            });
        }
        let q = QuadraticForm::new(m.iter().map(|r| r.iter().map(Num::to_f64).collect()).collect())?;
        let terms: Vec<(f64, Vec<f64>)> =
            parsed.iter().map(|(w, f)| (w.to_f64(), f.iter().map(Num::to_f64).collect())).collect();
        let r = verify::quadratic_residual(q.matrix(), &terms)?;
        let scale = q.max_abs().max(1.0);
        let recorded = recorded.to_f64();
        return Ok(VerifyReport {
            kind: CertificateKind::Quadratic,
            recomputed: r,
            recorded,
            exact_zero: false,
            ok: r <= recorded + 4.0 * q.n() as f64 * f64::EPSILON * scale,
        });
    }
    if let Some(nodes) = v.get("nodes") {
        let input = binary_from_json(field(v, "input")?)?.to_f64();
        let mut parsed = Vec::new();
        for node in nodes.as_array().ok_or_else(|| bad("`nodes` must be an array"))? {
            let w = num(field(node, "weight")?)?.to_f64();
            let f = nums(field(node, "form")?, "form")?;
            if f.len() != 2 {
                return Err(bad("node forms must have two coefficients"));
            }
            parsed.push((w, [f[0].to_f64(), f[1].to_f64()]));
        }
        let recomputed = verify::power_sum_residual(&input, &parsed);
        let recorded = match v.get("residual") {
            Some(r) => num(r)?.to_f64(),
            None => 0.0,
        };
        let ok = recomputed <= recorded.max(1e-8 * input.max_abs());
        return Ok(VerifyReport { kind: CertificateKind::Waring, recomputed, recorded, exact_zero: false, ok });
    }
    Err(bad("unrecognized certificate: expected `G`/`H`, `terms` or `nodes`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary_sos::two_square_decomposition;
    use crate::quad_sos::quad_decompose;
    use crate::realroots::RootOptions;

    #[test]
    fn binary_round_trip() {
        let f = BinaryForm::<Rational>::from_i64s(&[1, 0, 2, 0, 1]);
        let cert = two_square_decomposition(&f, &RootOptions::default()).unwrap();
        let input = AnyBinary::Exact(f);
        let v = binary_certificate_json(&input, &cert);
        assert_eq!(v["input"], json!(["1", "0", "2", "0", "1"]));
        assert_eq!(v["backend"], json!("exact"));
        assert_eq!(binary_from_json(&v["input"]).unwrap(), input);
        let text = serde_json::to_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        let report = verify_certificate(&back).unwrap();
        assert_eq!(report.kind, CertificateKind::TwoSquare);
        assert!(report.ok);
    }

    #[test]
    fn tampered_certificate_fails() {
        let v = json!({"input": ["1", "0", "1"], "G": [1.0, 0.0], "H": [1.0, 0.0], "residual": 0.0});
        let report = verify_certificate(&v).unwrap();
        assert_eq!(report.recomputed, 1.0);
        assert!(!report.ok);
    }

    #[test]
    fn quadratic_round_trip() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let m = QuadraticForm::new(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]]).unwrap();
        let ws = quad_decompose(&m).unwrap();
        let v = quadratic_certificate_json(&m, &ws).unwrap();
        assert_eq!(v["terms"][0]["weight"], json!("2"));
        assert_eq!(v["terms"][0]["form"], json!(["1", "1/2"]));
        assert_eq!(v["residual"], json!("0"));
        let report = verify_certificate(&v).unwrap();
        assert!(report.ok && report.exact_zero);
    }

    #[test]
    fn waring_round_trip() {
        let input = AnyBinary::Exact(BinaryForm::from_i64s(&[1, 0, 0, 0, 1]));
        let m = QMembership { member: true, rank: 2, length: Some(2) };
        let p = PowerDecomposition { degree: 4, rank: 2, nodes: vec![(1.0, [1.0, 0.0]), (1.0, [0.0, 1.0])], residual: 0.0 };
        let v = waring_json(&input, &m, Some(&p));
        assert_eq!(v["nodes"][1]["form"], json!([0.0, 1.0]));
        assert!(verify_certificate(&v).unwrap().ok);
        assert!(verify_certificate(&json!({"foo": 1})).is_err());
    }
}
