//! Root infrastructure for binary forms.
//!
//! Exact inputs get a square-free decomposition and Sturm counts over the
//! rationals; root *locations* are always numeric (companion eigenvalues
//! refined by Aberth–Ehrlich). On the exact backend the multiplicity
//! structure and the real/non-real split come from the exact data, so only
//! the positions carry floating-point error.

pub mod numeric;
pub mod upoly;

use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::scalar::{Rational, Scalar};
use numeric::{cluster_roots_adaptive, polynomial_roots, refine_multiple_root, AberthReport};
use upoly::UPoly;

/// Tolerances for the numeric root pipeline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    /// Roots closer than `cluster_rel · (1 + max|root|)` are one multiple root.
    pub cluster_rel: f64,
    /// A root is real if `|Im z| ≤ real_rel · (1 + |z|)`.
    pub real_rel: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { cluster_rel: 1e-7, real_rel: 1e-8 }
    }
}

impl RootOptions {
    pub fn cluster_radius(&self, max_abs_root: f64) -> f64 {
        self.cluster_rel * (1.0 + max_abs_root)
    }

    pub fn is_real(&self, z: Complex64) -> bool {
        z.im.abs() <= self.real_rel * (1.0 + z.norm())
    }
}

/// `[α : 1]` or the point at infinity `[1 : 0]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectivePoint {
    Finite(Complex64),
    Infinity,
}

impl ProjectivePoint {
    pub fn alpha(&self) -> Complex64 {
        match self {
            ProjectivePoint::Finite(a) => *a,
            ProjectivePoint::Infinity => Complex64::one(),
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            ProjectivePoint::Finite(_) => 1.0,
            ProjectivePoint::Infinity => 0.0,
        }
    }

    /// The vanishing linear factor, normalized to `x − α y` or `y`,
    /// as coefficients of `(x, y)`.
    pub fn linear_factor(&self) -> [Complex64; 2] {
        match self {
            ProjectivePoint::Finite(a) => [Complex64::one(), -a],
            ProjectivePoint::Infinity => [Complex64::zero(), Complex64::one()],
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            ProjectivePoint::Finite(a) => ProjectivePoint::Finite(a.conj()),
            ProjectivePoint::Infinity => ProjectivePoint::Infinity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootClass {
    Real,
    Upper,
    Lower,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub point: ProjectivePoint,
    pub multiplicity: usize,
    pub class: RootClass,
}

/// Projective roots of a binary form with multiplicities.
///
/// The form equals `unit · Π (linear factor)^m`, where `unit` is its first
/// nonzero coefficient. Real roots come first (increasing, infinity last),
/// then upper-half-plane roots, then their conjugates in matching order.
#[derive(Clone, Debug)]
pub struct RootMultiset {
    pub roots: Vec<Root>,
    pub unit: f64,
    /// Multiplicities and the real/non-real split are exact.
    pub exact_structure: bool,
    pub report: AberthReport,
    pub options: RootOptions,
}

impl RootMultiset {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn real(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.class == RootClass::Real)
    }

    pub fn upper(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.class == RootClass::Upper)
    }

    pub fn has_real_root(&self) -> bool {
        self.real().next().is_some()
    }

    /// Complex coefficients of `unit · Π (linear factor)^m`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(self.unit, 0.0)];
        for r in &self.roots {
            let lf = r.point.linear_factor();
            for _ in 0..r.multiplicity {
                acc = complex_mul(&acc, &lf);
            }
        }
        acc
    }
}

pub(crate) fn complex_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `f = unit · Π g_i^{m_i}` with each `g_i` square-free, pairwise coprime and
/// normalized (`x^deg` coefficient one, or `g_i = y`).
#[derive(Clone, Debug, PartialEq)]
pub struct SquareFreePart {
    pub unit: Rational,
    pub factors: Vec<(BinaryForm<Rational>, usize)>,
}

impl SquareFreePart {
    pub fn reconstruct(&self) -> BinaryForm<Rational> {
        let mut acc = BinaryForm::from_rationals(vec![self.unit.clone()]);
        for (g, m) in &self.factors {
            acc = acc.multiply(&g.pow(*m));
        }
        acc
    }

    /// Product of the distinct factors.
    pub fn radical(&self) -> BinaryForm<Rational> {
        self.factors
            .iter()
            .fold(BinaryForm::from_rationals(vec![Rational::one()]), |acc, (g, _)| acc.multiply(g))
    }
}

fn y_form() -> BinaryForm<Rational> {
    BinaryForm::from_i64s(&[0, 1])
}

fn upoly_of(f: &BinaryForm<Rational>) -> UPoly {
    UPoly::new(f.dehomogenize())
}

/// Yun square-free decomposition of a binary form over the rationals.
///
/// Factors are ordered by degree, then by coefficient vector in decreasing
/// lexicographic order.
pub fn squarefree_decomposition(f: &BinaryForm<Rational>) -> Result<SquareFreePart> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let p = upoly_of(f);
    let mut factors: Vec<(BinaryForm<Rational>, usize)> = p
        .squarefree()
        .into_iter()
        .map(|(g, m)| {
            let h = BinaryForm::homogenize(g.coeffs(), g.degree()).expect("degree fits");
            (h, m)
        })
        .collect();
    let at_infinity = f.infinity_multiplicity();
    if at_infinity > 0 {
        factors.push((y_form(), at_infinity));
    }
    factors.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| cmp_desc_lex(a.0.coeffs(), b.0.coeffs()))
            .then(a.1.cmp(&b.1))
    });
    Ok(SquareFreePart { unit: p.leading(), factors })
}

fn cmp_desc_lex(a: &[Rational], b: &[Rational]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.cmp(x) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Number of distinct real projective roots.
pub fn real_root_count(f: &BinaryForm<Rational>) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let finite = upoly_of(f).count_real_roots();
    Ok(finite + usize::from(f.infinity_multiplicity() > 0))
}

/// True iff every projective root of `f` is real (with multiplicity).
pub fn is_real_rooted(f: &BinaryForm<Rational>) -> Result<bool> {
    let sf = squarefree_decomposition(f)?;
    for (g, _) in &sf.factors {
        if real_root_count(g)? != g.degree() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Backend-dependent construction of the root multiset.
pub trait RootFinding: Scalar {
    fn root_multiset(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<RootMultiset>;
}

pub fn projective_complex_roots<S: RootFinding>(
    f: &BinaryForm<S>,
    opts: &RootOptions,
) -> Result<RootMultiset> {
    S::root_multiset(f, opts)
}

impl RootFinding for Rational {
    fn root_multiset(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<RootMultiset> {
        let sf = squarefree_decomposition(f)?;
        let mut roots = Vec::new();
        let mut report = AberthReport { converged: true, ..Default::default() };
        for (g, m) in &sf.factors {
            if *g == y_form() {
                roots.push(Root { point: ProjectivePoint::Infinity, multiplicity: *m, class: RootClass::Real });
                continue;
            }
            let p = upoly_of(g);
            let n_real = p.count_real_roots();
            let coeffs: Vec<f64> = p.coeffs().iter().map(Scalar::to_f64).collect();
            let (mut z, rep) = polynomial_roots(&coeffs)?;
            report.merge(&rep);
            z.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
            for r in &z[..n_real] {
                if r.im.abs() > 1e-6 * (1.0 + r.norm()) {
                    return Err(Error::RootFinding(format!(
                        "exactly real root located at {r} off the real axis"
                    )));
                }
                roots.push(Root {
                    point: ProjectivePoint::Finite(Complex64::new(r.re, 0.0)),
                    multiplicity: *m,
                    class: RootClass::Real,
                });
            }
            let (upper, lower): (Vec<Complex64>, Vec<Complex64>) =
                z[n_real..].iter().partition(|r| r.im > 0.0);
            for u in pair_conjugates(&upper, &lower)? {
                roots.push(Root { point: ProjectivePoint::Finite(u), multiplicity: *m, class: RootClass::Upper });
                roots.push(Root { point: ProjectivePoint::Finite(u.conj()), multiplicity: *m, class: RootClass::Lower });
            }
        }
        check_separation(&roots, opts)?;
        let unit = Scalar::to_f64(&sf.unit);
        Ok(finish(roots, unit, true, report, opts))
    }
}

impl RootFinding for f64 {
    fn root_multiset(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<RootMultiset> {
        if f.is_zero() {
            return Err(Error::ZeroForm);
        }
        let mut roots = Vec::new();
        let at_infinity = f.infinity_multiplicity();
        if at_infinity > 0 {
            roots.push(Root { point: ProjectivePoint::Infinity, multiplicity: at_infinity, class: RootClass::Real });
        }
        let mut p = f.dehomogenize();
        p.truncate(f.degree() + 1 - at_infinity);
        let at_zero = p.iter().take_while(|c| **c == 0.0).count();
        if at_zero > 0 {
            roots.push(Root {
                point: ProjectivePoint::Finite(Complex64::zero()),
                multiplicity: at_zero,
                class: RootClass::Real,
            });
        }
        let p = &p[at_zero..];
        let mut report = AberthReport { converged: true, ..Default::default() };
        if p.len() >= 2 {
            let (z, rep) = polynomial_roots(p)?;
            report = rep;
            let scale = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let clusters = cluster_roots_adaptive(p, &z, opts.cluster_radius(scale));
            let mut upper = Vec::new();
            let mut lower = Vec::new();
            for c in clusters {
                let center = refine_multiple_root(p, c.center, c.size);
                if opts.is_real(center) {
                    roots.push(Root {
                        point: ProjectivePoint::Finite(Complex64::new(center.re, 0.0)),
                        multiplicity: c.size,
                        class: RootClass::Real,
                    });
                } else if center.im > 0.0 {
                    upper.push((center, c.size));
                } else {
                    lower.push((center, c.size));
                }
            }
            for (u, m) in pair_clusters(upper, lower)? {
                roots.push(Root { point: ProjectivePoint::Finite(u), multiplicity: m, class: RootClass::Upper });
                roots.push(Root { point: ProjectivePoint::Finite(u.conj()), multiplicity: m, class: RootClass::Lower });
            }
        }
        let unit = *f.leading_unit().expect("nonzero form");
        Ok(finish(roots, unit, false, report, opts))
    }
}

/// Match each upper root with the nearest unused lower root and return the
/// symmetrized upper representatives.
fn pair_conjugates(upper: &[Complex64], lower: &[Complex64]) -> Result<Vec<Complex64>> {
    let up: Vec<(Complex64, usize)> = upper.iter().map(|&z| (z, 1)).collect();
    let lo: Vec<(Complex64, usize)> = lower.iter().map(|&z| (z, 1)).collect();
    Ok(pair_clusters(up, lo)?.into_iter().map(|(z, _)| z).collect())
}

fn pair_clusters(
    upper: Vec<(Complex64, usize)>,
    mut lower: Vec<(Complex64, usize)>,
) -> Result<Vec<(Complex64, usize)>> {
    if upper.len() != lower.len() {
        return Err(Error::RootFinding(format!(
            "{} upper-half-plane roots but {} lower",
            upper.len(),
            lower.len()
        )));
    }
    let mut out = Vec::with_capacity(upper.len());
    for (u, m) in upper {
        let (idx, _) = lower
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 .0.conj() - u).norm().total_cmp(&(b.1 .0.conj() - u).norm()))
            .expect("same length");
        let (l, ml) = lower.swap_remove(idx);
        if ml != m {
            return Err(Error::ClusteringAmbiguous(format!(
                "root {u} has multiplicity {m} but its conjugate has {ml}"
            )));
        }
        out.push(((u + l.conj()) / 2.0, m));
    }
    Ok(out)
}

fn check_separation(roots: &[Root], opts: &RootOptions) -> Result<()> {
    let finite: Vec<Complex64> = roots
        .iter()
        .filter_map(|r| match r.point {
            ProjectivePoint::Finite(z) => Some(z),
            ProjectivePoint::Infinity => None,
        })
        .collect();
    let scale = finite.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let delta = opts.cluster_radius(scale);
    for i in 0..finite.len() {
        for j in i + 1..finite.len() {
            if (finite[i] - finite[j]).norm() <= delta {
                return Err(Error::ClusteringAmbiguous(format!(
                    "distinct roots {} and {} lie within {delta:e}",
                    finite[i], finite[j]
                )));
            }
        }
    }
    Ok(())
}

fn finish(
    mut roots: Vec<Root>,
    unit: f64,
    exact_structure: bool,
    report: AberthReport,
    options: &RootOptions,
) -> RootMultiset {
    let key = |r: &Root| -> (u8, f64, f64) {
        match (r.class, r.point) {
            (RootClass::Real, ProjectivePoint::Infinity) => (0, f64::INFINITY, 0.0),
            (RootClass::Real, ProjectivePoint::Finite(z)) => (0, z.re, 0.0),
            (RootClass::Upper, p) => (1, p.alpha().re, p.alpha().im),
            (RootClass::Lower, p) => (2, p.alpha().re, -p.alpha().im),
        }
    };
    roots.sort_by(|a, b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.total_cmp(&kb.2))
    });
    RootMultiset { roots, unit, exact_structure, report, options: *options }
}
