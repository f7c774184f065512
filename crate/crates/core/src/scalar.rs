//! Coefficient backends.
//!
//! Every container is generic over a [`Scalar`]: either exact rationals
//! ([`Rational`]) or `f64`. The two never mix implicitly; conversions are
//! explicit (`to_f64`, `from_rational`).

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected exact|float)")),
        }
    }
}

/// A coefficient field element.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static
{
    const BACKEND: Backend;

    fn from_int(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact for `f64`; the exact binary expansion for rationals.
    fn from_float(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Finite values only (always true on the exact backend).
    fn is_finite_value(&self) -> bool;

    /// Zero test with a relative threshold. Exact zero on the exact backend.
    fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool;

    fn binomial(n: usize, k: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(binomial(n, k))))
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_float(v: f64) -> Self {
        Rational::from_float(v).unwrap_or_else(Rational::zero)
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 handles huge numerators/denominators gracefully.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn is_negligible(&self, _scale: f64, _rel_tol: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn from_float(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool {
        self.abs() <= rel_tol * scale
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn binomial_u128(n: usize, k: usize) -> u128 {
    binomial(n, k).to_u128().unwrap_or(u128::MAX)
}

/// Parse `p`, `-p`, `p/q` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    } else if text.contains(['.', 'e', 'E']) {
        parse_decimal(text)
    } else {
        Some(Rational::from_integer(text.parse().ok()?))
    }
}

/// Exact rational value of a decimal literal such as `-1.25` or `3e-2`.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Some(value)
}

pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_from_u(v: usize) -> Rational {
    Rational::from_integer(BigInt::from_usize(v).expect("usize fits BigInt"))
}
