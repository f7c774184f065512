//! Binary forms and quadratic forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Rational, Scalar};

/// Homogeneous polynomial in `(x, y)`.
///
/// `coeffs[k]` is the coefficient of `x^(deg-k) y^k`. The degree is fixed by
/// the length of the vector, so the zero form keeps its degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> BinaryForm<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ShapeMismatch("a form needs at least one coefficient".into()));
        }
        if !coeffs.iter().all(Scalar::is_finite_value) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![S::zero(); degree + 1] }
    }

    /// `x^(degree-k) y^k` with coefficient one.
    pub fn monomial(degree: usize, k: usize) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[k] = S::one();
        f
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| S::from_int(c)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Number of leading zero coefficients: the multiplicity of `[1:0]`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// First nonzero coefficient.
    pub fn leading_unit(&self) -> Option<&S> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn evaluate(&self, x: &S, y: &S) -> S {
        // Horner in x; after step k the accumulator is sum_{j<=k} c_j x^(k-j) y^j.
        let mut acc = self.coeffs[0].clone();
        let mut ypow = S::one();
        for c in &self.coeffs[1..] {
            ypow = ypow * y.clone();
            acc = acc * x.clone() + c.clone() * ypow.clone();
        }
        acc
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, exponent: usize) -> Self {
        let mut acc = Self::monomial(0, 0);
        for _ in 0..exponent {
            acc = acc.multiply(self);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(S, S) -> S) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| op(a.clone(), b.clone()))
            .collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    /// `‖f‖∞` of the plain coefficient vector, as a float.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> BinaryForm<f64> {
        BinaryForm { coeffs: self.coeffs.iter().map(Scalar::to_f64).collect() }
    }

    /// Coefficients of `f(t, 1)` in ascending powers of `t`.
    pub fn dehomogenize(&self) -> Vec<S> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Inverse of [`dehomogenize`](Self::dehomogenize) at a prescribed degree.
    pub fn homogenize(ascending: &[S], degree: usize) -> Result<Self> {
        let used = ascending.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1);
        if used > degree + 1 {
            return Err(Error::DegreeMismatch(used - 1, degree));
        }
        let mut coeffs = vec![S::zero(); degree + 1];
        for (j, c) in ascending.iter().enumerate().take(used) {
            coeffs[degree - j] = c.clone();
        }
        Ok(Self { coeffs })
    }
}

impl BinaryForm<Rational> {
    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }
}

impl<S: Scalar> fmt::Display for BinaryForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = monomial_text(n - k, k);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn monomial_text(i: usize, j: usize) -> String {
    let var = |name: &str, e: usize| match e {
        0 => String::new(),
        1 => name.to_string(),
        e => format!("{name}^{e}"),
    };
    match (var("x", i), var("y", j)) {
        (a, b) if a.is_empty() => b,
        (a, b) if b.is_empty() => a,
        (a, b) => format!("{a}*{b}"),
    }
}

/// Quadratic form `Xᵗ M X` with `M` symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm<S> {
    matrix: Vec<Vec<S>>,
}

impl<S: Scalar> QuadraticForm<S> {
    pub fn new(matrix: Vec<Vec<S>>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if !row.iter().all(Scalar::is_finite_value) {
                return Err(Error::NonFinite);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::NonSymmetric(i, j));
                }
            }
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        Self { matrix }
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.matrix
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn evaluate(&self, point: &[S]) -> S {
        let mut acc = S::zero();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                acc = acc + m.clone() * point[i].clone() * point[j].clone();
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().flatten().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> QuadraticForm<f64> {
        QuadraticForm {
            matrix: self.matrix.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect(),
        }
    }
}

/// A binary form whose backend is decided at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyBinary {
    Exact(BinaryForm<Rational>),
    Float(BinaryForm<f64>),
}

impl AnyBinary {
    pub fn backend(&self) -> Backend {
        match self {
            AnyBinary::Exact(_) => Backend::Exact,
            AnyBinary::Float(_) => Backend::Float,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            AnyBinary::Exact(f) => f.degree(),
            AnyBinary::Float(f) => f.degree(),
        }
    }

    pub fn to_f64(&self) -> BinaryForm<f64> {
        match self {
            AnyBinary::Exact(f) => f.to_f64(),
            AnyBinary::Float(f) => f.clone(),
        }
    }

    /// Product of two forms on the same backend.
    pub fn multiply(&self, other: &AnyBinary) -> Result<AnyBinary> {
        match (self, other) {
            (AnyBinary::Exact(a), AnyBinary::Exact(b)) => Ok(AnyBinary::Exact(a.multiply(b))),
            (AnyBinary::Float(a), AnyBinary::Float(b)) => Ok(AnyBinary::Float(a.multiply(b))),
            _ => Err(Error::MixedBackend),
        }
    }
}

impl fmt::Display for AnyBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyBinary::Exact(g) => g.fmt(f),
            AnyBinary::Float(g) => g.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyQuadratic {
    Exact(QuadraticForm<Rational>),
    Float(QuadraticForm<f64>),
}

impl AnyQuadratic {
    pub fn backend(&self) -> Backend {
        match self {
            AnyQuadratic::Exact(_) => Backend::Exact,
            AnyQuadratic::Float(_) => Backend::Float,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyQuadratic::Exact(q) => q.n(),
            AnyQuadratic::Float(q) => q.n(),
        }
    }
}
