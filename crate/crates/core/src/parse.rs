//! Text input: polynomial expressions and JSON matrices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::form::{AnyBinary, AnyQuadratic, BinaryForm, QuadraticForm};
use crate::scalar::{parse_rational, Backend, Rational, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Homogenize a univariate `p(x)` with `y`.
    pub affine: bool,
    /// Force a backend; otherwise exact unless a decimal literal appears.
    pub backend: Option<Backend>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedForm {
    Binary(AnyBinary),
    Quadratic(AnyQuadratic),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent only when digits follow, so `2e` is not swallowed
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_ascii_lowercase() {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((start, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { offset: start, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Sparse polynomial keyed by exponents over the variables seen so far.
type Poly = BTreeMap<BTreeMap<String, u32>, Rational>;

fn constant(c: Rational) -> Poly {
    let mut p = Poly::new();
    p.insert(BTreeMap::new(), c);
    p
}

fn add(mut a: Poly, b: Poly, sign: i64) -> Poly {
    for (m, c) in b {
        let e = a.entry(m).or_insert_with(Rational::zero);
        *e += c * Rational::from_int(sign);
    }
    a
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = ma.clone();
            for (v, e) in mb {
                *m.entry(v.clone()).or_insert(0) += e;
            }
            *out.entry(m).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    saw_decimal: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(acc, self.term()?, 1);
            } else if self.eat('-') {
                acc = add(acc, self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let c = match d.iter().find(|(_, c)| !c.is_zero()) {
                    Some((m, c)) if m.values().all(|e| *e == 0) && d.values().filter(|c| !c.is_zero()).count() == 1 => {
                        c.clone()
                    }
                    Some(_) => {
                        return Err(Error::Parse { offset: at, message: "division by a non-constant".into() })
                    }
                    None => return Err(Error::Parse { offset: at, message: "division by zero".into() }),
                };
                acc = mul(&acc, &constant(c.recip()));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                acc = mul(&acc, &self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            Ok(add(Poly::new(), self.unary()?, -1))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.peek() {
            Some(Tok::Num(s)) => match s.parse::<u32>() {
                Ok(e) => e,
                Err(_) => return self.err(format!("exponent `{s}` is not a nonnegative integer")),
            },
            _ => return self.err("expected an integer exponent"),
        };
        self.pos += 1;
        let mut out = constant(Rational::one());
        for _ in 0..e {
            out = mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let v = parse_rational(&s).ok_or_else(|| Error::MalformedNumber(s.clone()))?;
                if s.contains(['.', 'e', 'E']) {
                    self.saw_decimal = true;
                }
                Ok(constant(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let mut m = BTreeMap::new();
                m.insert(name, 1);
                let mut p = Poly::new();
                p.insert(m, Rational::one());
                Ok(p)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_poly(text: &str) -> Result<(Poly, bool)> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), saw_decimal: false };
    let poly = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok((poly, p.saw_decimal))
}

fn total_degree(m: &BTreeMap<String, u32>) -> usize {
    m.values().map(|e| *e as usize).sum()
}

/// Common total degree of the nonzero monomials.
fn homogeneous_degree(poly: &Poly) -> Result<usize> {
    let mut degree: Option<usize> = None;
    for (m, c) in poly {
        if c.is_zero() {
            continue;
        }
        let d = total_degree(m);
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => return Err(Error::NonHomogeneous(e.min(d), e.max(d))),
            _ => {}
        }
    }
    Ok(degree.unwrap_or_else(|| poly.keys().map(total_degree).max().unwrap_or(0)))
}

fn quadratic_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn choose_backend(opts: &ParseOptions, saw_decimal: bool) -> Backend {
    opts.backend.unwrap_or(if saw_decimal { Backend::Float } else { Backend::Exact })
}

/// Parse a homogeneous form in `x, y` (binary) or `x1..xn` (quadratic).
pub fn parse_form(text: &str, opts: &ParseOptions) -> Result<ParsedForm> {
    let (poly, saw_decimal) = parse_poly(text)?;
    let backend = choose_backend(opts, saw_decimal);
    let vars: Vec<String> = {
        let mut v: Vec<String> = poly.keys().flat_map(|m| m.keys().cloned()).collect();
        v.sort();
        v.dedup();
        v
    };
    let binary = vars.iter().all(|v| v == "x" || v == "y");
    if binary {
        let affine = opts.affine && !vars.iter().any(|v| v == "y");
        let degree = if affine {
            poly.iter().filter(|(_, c)| !c.is_zero()).map(|(m, _)| total_degree(m)).max().unwrap_or(0)
        } else {
            homogeneous_degree(&poly)?
        };
        if degree % 2 == 1 {
            return Err(Error::OddDegree(degree));
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (m, c) in &poly {
            if c.is_zero() {
                continue;
            }
            let i = m.get("x").copied().unwrap_or(0) as usize;
            let j = if affine { degree - i } else { m.get("y").copied().unwrap_or(0) as usize };
            coeffs[j] += c;
        }
        let exact = BinaryForm::from_rationals(coeffs);
        return Ok(ParsedForm::Binary(match backend {
            Backend::Exact => AnyBinary::Exact(exact),
            Backend::Float => AnyBinary::Float(exact.to_f64()),
        }));
    }
    if let Some(v) = vars.iter().find(|v| *v != "x" && *v != "y" && quadratic_index(v).is_none()) {
        return Err(Error::UnknownVariable(v.clone()));
    }
    let mut n = 0;
    for v in &vars {
        match quadratic_index(v) {
            Some(i) => n = n.max(i),
            None => return Err(Error::UnknownVariable(v.clone())),
        }
    }
    let degree = homogeneous_degree(&poly)?;
    if degree != 2 {
        return Err(Error::Parse {
            offset: 0,
            message: format!("forms in x1..xn must be quadratic, got degree {degree}"),
        });
    }
    let mut m = vec![vec![Rational::zero(); n]; n];
    let half = Rational::new(1.into(), 2.into());
    for (mono, c) in &poly {
        let idx: Vec<(usize, u32)> = mono.iter().map(|(v, e)| (quadratic_index(v).unwrap() - 1, *e)).collect();
        match idx.as_slice() {
            [(i, 2)] => m[*i][*i] += c,
            [(i, 1), (j, 1)] => {
                m[*i][*j] += c * &half;
                m[*j][*i] += c * &half;
            }
            _ => {}
        }
    }
    Ok(ParsedForm::Quadratic(any_quadratic(m, backend)?))
}

fn any_quadratic(m: Vec<Vec<Rational>>, backend: Backend) -> Result<AnyQuadratic> {
    Ok(match backend {
        Backend::Exact => AnyQuadratic::Exact(QuadraticForm::new(m)?),
        Backend::Float => {
            AnyQuadratic::Float(QuadraticForm::new(m.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect())?)
        }
    })
}

/// Parse a binary form; quadratic-variable input is an error.
pub fn parse_binary(text: &str, opts: &ParseOptions) -> Result<AnyBinary> {
    match parse_form(text, opts)? {
        ParsedForm::Binary(b) => Ok(b),
        ParsedForm::Quadratic(_) => Err(Error::Parse { offset: 0, message: "expected a form in x and y".into() }),
    }
}

/// Quadratic form from an expression in `x1..xn` or a JSON matrix.
///
/// In matrix input strings are exact rationals and integers stay exact;
/// any non-integer JSON number selects the float backend.
pub fn parse_quadratic(text: &str, opts: &ParseOptions) -> Result<AnyQuadratic> {
    let trimmed = text.trim();
    if !trimmed.starts_with('[') {
        return match parse_form(text, opts)? {
            ParsedForm::Quadratic(q) => Ok(q),
            ParsedForm::Binary(b) if b.degree() == 2 => {
                let c: Vec<Rational> = match &b {
                    AnyBinary::Exact(f) => f.coeffs().to_vec(),
                    AnyBinary::Float(f) => f.coeffs().iter().map(|v| <Rational as Scalar>::from_float(*v)).collect(),
                };
                let half = &c[1] / Rational::from_int(2);
                let m = vec![vec![c[0].clone(), half.clone()], vec![half, c[2].clone()]];
                any_quadratic(m, b.backend())
            }
            ParsedForm::Binary(b) => Err(Error::Parse {
                offset: 0,
                message: format!("expected a quadratic form, got degree {}", b.degree()),
            }),
        };
    }
    let value: Value = serde_json::from_str(trimmed)
        .map_err(|e| Error::Parse { offset: e.column().saturating_sub(1), message: e.to_string() })?;
    let rows = value.as_array().ok_or_else(|| Error::ShapeMismatch("expected an array of rows".into()))?;
    let mut saw_float = false;
    let mut m = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::ShapeMismatch("expected an array of rows".into()))?;
        let mut out = Vec::with_capacity(row.len());
        for v in row {
            out.push(match v {
                Value::String(s) => parse_rational(s).ok_or_else(|| Error::MalformedNumber(s.clone()))?,
                Value::Number(num) => {
                    if let Some(i) = num.as_i64() {
                        Rational::from_int(i)
                    } else {
                        saw_float = true;
                        let f = num.as_f64().ok_or_else(|| Error::MalformedNumber(num.to_string()))?;
                        <Rational as Scalar>::from_float(f)
                    }
                }
                other => return Err(Error::MalformedNumber(other.to_string())),
            });
        }
        m.push(out);
    }
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("matrix with {n} rows is not square")));
    }
    any_quadratic(m, choose_backend(opts, saw_float))
}
