use hilbert_sos::apolarity::{catalecticant as binary_catalecticant, quadratic_catalecticant, CatalecticantMatrix};
use hilbert_sos::binary_sos::{
    enumerate_two_square_decompositions, is_extreme_binary, is_nonnegative, length_binary,
    two_square_decomposition, ConePosition, NonnegativityStatus, NonnegativityVerdict, SosBackend,
};
use hilbert_sos::error::Error;
use hilbert_sos::export::{
    binary_certificate_json, binary_json, quadratic_certificate_json, quadratic_json, scalar_json,
    verify_certificate, waring_json, CertificateKind, VerifyReport,
};
use hilbert_sos::form::{AnyBinary, AnyQuadratic, BinaryForm, QuadraticForm};
use hilbert_sos::linalg::LinearAlgebra;
use hilbert_sos::parse::{parse_binary, parse_form, parse_quadratic, ParsedForm};
use hilbert_sos::quad_sos::{format_weighted_squares, is_psd, orthonormal_decompose, quad_decompose as ldl_decompose};
use hilbert_sos::verify::sample_witness_check;
use hilbert_sos::waring::{caratheodory_number_table, prony_decompose, q_membership_and_length, TableCase, TableValue};
use serde_json::{json, Value};

use crate::Settings;

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, code: 0 }
    }
}

/// Run `$body` with `$f` bound to the concrete form of either backend.
macro_rules! with_binary {
    ($any:expr, $f:ident => $body:expr) => {
        match $any {
            AnyBinary::Exact($f) => $body,
            AnyBinary::Float($f) => $body,
        }
    };
}

macro_rules! with_quadratic {
    ($any:expr, $q:ident => $body:expr) => {
        match $any {
            AnyQuadratic::Exact($q) => $body,
            AnyQuadratic::Float($q) => $body,
        }
    };
}

/// Attach the verifier's report; a failed re-check is a numerical failure.
fn attach_verification(settings: &Settings, out: &mut Outcome) -> Result<(), Error> {
    if !settings.verify {
        return Ok(());
    }
    let report = verify_certificate(&out.json)?;
    out.text.push_str(&format!(
        "\nverify: recomputed residual {:e} (recorded {:e}) {}",
        report.recomputed,
        report.recorded,
        if report.ok { "ok" } else { "MISMATCH" }
    ));
    out.json["verification"] = verification_json(&report);
    if !report.ok {
        out.code = 3;
    }
    Ok(())
}

fn verification_json(r: &VerifyReport) -> Value {
    json!({"recomputed": r.recomputed, "recorded": r.recorded, "ok": r.ok})
}

fn witness_text<S: SosBackend>(v: &NonnegativityVerdict<S>) -> String {
    match &v.witness {
        Some(w) => format!("not nonnegative: f({}, {}) = {}", w.x, w.y, w.value),
        None => "not nonnegative".into(),
    }
}

fn verdict_json<S: SosBackend>(input: &AnyBinary, v: &NonnegativityVerdict<S>, sampled: Option<Value>) -> Value {
    let status = match v.status {
        NonnegativityStatus::Nonnegative => "nonnegative",
        NonnegativityStatus::NotNonnegative => "not_nonnegative",
        NonnegativityStatus::Zero => "zero",
    };
    let position = v.position.map(|p| match p {
        ConePosition::Interior => "interior",
        ConePosition::Boundary => "boundary",
    });
    let witness = v
        .witness
        .as_ref()
        .map(|w| json!({"x": scalar_json(&w.x), "y": scalar_json(&w.y), "value": scalar_json(&w.value)}));
    json!({
        "input": binary_json(input),
        "status": status,
        "position": position,
        "witness": witness,
        "sampled_witness": sampled,
        "certified": v.certified,
        "warnings": v.warnings,
        "backend": input.backend().as_str(),
    })
}

fn check_generic<S: SosBackend>(settings: &Settings, input: &AnyBinary, f: &BinaryForm<S>) -> Result<Outcome, Error> {
    let v = is_nonnegative(f, &settings.roots)?;
    let sampled = sample_witness_check(&f.to_f64(), 1000, settings.seed);
    let sampled_json = sampled.as_ref().map(|w| json!({"x": w.x, "y": w.y, "value": w.value}));
    let mut text = match v.status {
        NonnegativityStatus::Zero => "zero form".to_string(),
        NonnegativityStatus::NotNonnegative => witness_text(&v),
        NonnegativityStatus::Nonnegative => format!(
            "nonnegative ({}){}",
            if v.position == Some(ConePosition::Interior) { "positive definite" } else { "boundary" },
            if v.certified { ", certified" } else { "" }
        ),
    };
    for w in &v.warnings {
        text.push_str(&format!("\nwarning: {w}"));
    }
    let mut code = if v.status == NonnegativityStatus::NotNonnegative { 1 } else { 0 };
    if v.certified && v.is_nonnegative() && sampled.is_some() {
        text.push_str("\nwarning: sampling found a negative value despite a certified verdict");
        code = 3;
    }
    Ok(Outcome { text, json: verdict_json(input, &v, sampled_json), code })
}

pub fn check(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_binary(expr, &settings.parse)?;
    with_binary!(&input, f => check_generic(settings, &input, f))
}

/// The verdict as an outcome with exit code 1 when `f` takes negative values.
fn refuse_negative<S: SosBackend>(settings: &Settings, input: &AnyBinary, f: &BinaryForm<S>) -> Result<Option<Outcome>, Error> {
    let v = is_nonnegative(f, &settings.roots)?;
    if v.is_nonnegative() {
        return Ok(None);
    }
    Ok(Some(Outcome { text: witness_text(&v), json: verdict_json(input, &v, None), code: 1 }))
}

fn decompose_generic<S: SosBackend>(settings: &Settings, input: &AnyBinary, f: &BinaryForm<S>) -> Result<Outcome, Error> {
    if let Some(out) = refuse_negative(settings, input, f)? {
        return Ok(out);
    }
    let cert = two_square_decomposition(f, &settings.roots)?;
    let text = format!(
        "F = {}\nG = {}\nH = {}\nresidual <= {:e}{}",
        f,
        cert.g,
        cert.h,
        cert.residual,
        if cert.certified { "\ncertified: G and H real-rooted by Sturm count" } else { "" }
    );
    let mut out = Outcome::ok(text, binary_certificate_json(input, &cert));
    attach_verification(settings, &mut out)?;
    Ok(out)
}

pub fn decompose(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_binary(expr, &settings.parse)?;
    with_binary!(&input, f => decompose_generic(settings, &input, f))
}

pub fn extreme(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_binary(expr, &settings.parse)?;
    let e = with_binary!(&input, f => is_extreme_binary(f, &settings.roots))?;
    let text = if e { "extreme" } else { "not extreme" }.to_string();
    let json = json!({"input": binary_json(&input), "extreme": e, "backend": input.backend().as_str()});
    Ok(Outcome::ok(text, json))
}

pub fn length(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_binary(expr, &settings.parse)?;
    if let Some(out) = with_binary!(&input, f => refuse_negative(settings, &input, f))? {
        return Ok(out);
    }
    let n = with_binary!(&input, f => length_binary(f, &settings.roots))?;
    let json = json!({"input": binary_json(&input), "length": n, "backend": input.backend().as_str()});
    Ok(Outcome::ok(n.to_string(), json))
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn quad_generic<S: LinearAlgebra>(settings: &Settings, input: &AnyQuadratic, q: &QuadraticForm<S>) -> Result<Outcome, Error> {
    let verdict = is_psd(q);
    if let (false, Some(w), Some(value)) = (verdict.psd, &verdict.witness, &verdict.witness_value) {
        let wtext: Vec<String> = w.iter().map(|v| v.to_string()).collect();
        let text = format!("not PSD: v = ({}) gives v^T M v = {}", wtext.join(", "), value);
        let json = json!({
            "input": quadratic_json(input),
            "psd": false,
            "witness": w.iter().map(scalar_json).collect::<Vec<_>>(),
            "witness_value": scalar_json(value),
        });
        return Ok(Outcome { text, json, code: 1 });
    }
    let ws = ldl_decompose(q)?;
    let text = format!("{}\nrank = {}", format_weighted_squares(&ws, &names(q.n())), ws.len());
    let mut out = Outcome::ok(text, quadratic_certificate_json(q, &ws)?);
    attach_verification(settings, &mut out)?;
    Ok(out)
}

pub fn quad_decompose(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_quadratic(expr, &settings.parse)?;
    with_quadratic!(&input, q => quad_generic(settings, &input, q))
}

pub fn quad_orthonormal(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_quadratic(expr, &settings.parse)?;
    let q = match &input {
        AnyQuadratic::Exact(q) => q.to_f64(),
        AnyQuadratic::Float(q) => q.clone(),
    };
    if !is_psd(&q).psd {
        return quad_generic(settings, &AnyQuadratic::Float(q.clone()), &q);
    }
    let ws = orthonormal_decompose(&q)?;
    let text = format!("{}\nrank = {}", format_weighted_squares(&ws, &names(q.n())), ws.len());
    let mut out = Outcome::ok(text, quadratic_certificate_json(&q, &ws)?);
    attach_verification(settings, &mut out)?;
    Ok(out)
}

fn matrix_text<S: LinearAlgebra>(c: &CatalecticantMatrix<S>) -> String {
    let rows: Vec<String> = c
        .entries()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("{}\nrank = {}\npsd = {}", rows.join("\n"), c.rank(), c.is_psd())
}

fn catalecticant_outcome<S: LinearAlgebra>(input: Value, c: &CatalecticantMatrix<S>) -> Outcome {
    let json = json!({
        "input": input,
        "matrix": c.entries().iter().map(|r| r.iter().map(scalar_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "rank": c.rank(),
        "psd": c.is_psd(),
        "backend": S::BACKEND.as_str(),
    });
    Outcome::ok(matrix_text(c), json)
}

pub fn catalecticant(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let parsed = if expr.trim_start().starts_with('[') {
        ParsedForm::Quadratic(parse_quadratic(expr, &settings.parse)?)
    } else {
        parse_form(expr, &settings.parse)?
    };
    match parsed {
        ParsedForm::Binary(b) => {
            let input = binary_json(&b);
            with_binary!(&b, f => Ok(catalecticant_outcome(input, &binary_catalecticant(f)?)))
        }
        ParsedForm::Quadratic(q) => {
            let input = quadratic_json(&q);
            with_quadratic!(&q, m => Ok(catalecticant_outcome(input, &quadratic_catalecticant(m))))
        }
    }
}

fn node_text(w: f64, [a, b]: [f64; 2], degree: usize) -> String {
    let sign = if b.is_sign_negative() { '-' } else { '+' };
    format!("{w}*({a}*x {sign} {}*y)^{degree}", b.abs())
}

fn waring_generic<S: SosBackend>(settings: &Settings, input: &AnyBinary, f: &BinaryForm<S>) -> Result<Outcome, Error> {
    let m = q_membership_and_length(f, &settings.roots)?;
    if !m.member {
        let text = format!("not a sum of {}-th powers (catalecticant rank {})", f.degree(), m.rank);
        return Ok(Outcome { text, json: waring_json(input, &m, None), code: 1 });
    }
    let p = prony_decompose(f, &settings.roots)?;
    let terms: Vec<String> = p.nodes.iter().map(|(w, n)| node_text(*w, *n, p.degree)).collect();
    let text = format!(
        "member, length {}\nF = {}\nresidual = {:e}",
        m.rank,
        if terms.is_empty() { "0".into() } else { terms.join(" + ") },
        p.residual
    );
    let mut out = Outcome::ok(text, waring_json(input, &m, Some(&p)));
    attach_verification(settings, &mut out)?;
    Ok(out)
}

pub fn waring(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_binary(expr, &settings.parse)?;
    with_binary!(&input, f => waring_generic(settings, &input, f))
}

fn enumerate_generic<S: SosBackend>(settings: &Settings, input: &AnyBinary, f: &BinaryForm<S>) -> Result<Outcome, Error> {
    if let Some(out) = refuse_negative(settings, input, f)? {
        return Ok(out);
    }
    let certs = enumerate_two_square_decompositions(f, settings.budget, &settings.roots)?;
    let mut lines = vec![format!("{} decomposition(s) up to conjugation", certs.len())];
    let mut values = Vec::new();
    let mut code = 0;
    for c in &certs {
        lines.push(format!("selection {:?}: G = {}, H = {}", c.selection, c.g, c.h));
        let mut v = binary_certificate_json(input, c);
        if settings.verify {
            let r = verify_certificate(&v)?;
            if !r.ok {
                code = 3;
            }
            v["verification"] = verification_json(&r);
        }
        values.push(v);
    }
    Ok(Outcome { text: lines.join("\n"), json: Value::Array(values), code })
}

pub fn enumerate(settings: &Settings, expr: &str) -> Result<Outcome, Error> {
    let input = parse_binary(expr, &settings.parse)?;
    with_binary!(&input, f => enumerate_generic(settings, &input, f))
}

pub fn table(n: usize, d: usize) -> Result<Outcome, Error> {
    let e = caratheodory_number_table(n, d)?;
    let case = match e.case {
        TableCase::Quadratic => "(n,1)",
        TableCase::Binary => "(2,d)",
        TableCase::TernaryQuartic => "(3,2)",
        TableCase::Outside => "outside",
    };
    let json = match e.value {
        TableValue::Exact(v) => json!({"n": n, "d": d, "case": case, "value": v}),
        TableValue::Bounds(lo, hi) => json!({"n": n, "d": d, "case": case, "bounds": [lo, hi]}),
    };
    Ok(Outcome::ok(e.to_string(), json))
}

/// Accepts one JSON document, or JSON lines, or a JSON array of certificates.
pub fn verify(text: &str) -> Result<Outcome, Error> {
    let docs: Vec<Value> = match serde_json::from_str::<Value>(text) {
        Ok(Value::Array(items)) if items.iter().all(Value::is_object) => items,
        Ok(v) => vec![v],
        Err(_) => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| Error::Certificate(e.to_string())))
            .collect::<Result<_, _>>()?,
    };
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    let mut code = 0;
    for doc in &docs {
        let r = verify_certificate(doc)?;
        let kind = match r.kind {
            CertificateKind::TwoSquare => "two-square",
            CertificateKind::Quadratic => "quadratic",
            CertificateKind::Waring => "waring",
        };
        lines.push(format!(
            "{kind}: recomputed {:e}, recorded {:e}: {}",
            r.recomputed,
            r.recorded,
            if r.ok { "ok" } else { "FAILED" }
        ));
        if !r.ok {
            code = 3;
        }
        reports.push(json!({"kind": kind, "recomputed": r.recomputed, "recorded": r.recorded, "ok": r.ok}));
    }
    let json = if reports.len() == 1 { reports.remove(0) } else { Value::Array(reports) };
    Ok(Outcome { text: lines.join("\n"), json, code })
}
