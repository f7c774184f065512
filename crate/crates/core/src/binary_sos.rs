//! Nonnegative binary forms as sums of two squares.
//!
//! A nonnegative binary form of degree `2d` factors as `F = A · Ā` where `A`
//! has degree `d` and collects half of every real root together with one root
//! out of each conjugate pair. Writing `A = G + iH` gives `F = G² + H²`.
//! Taking every non-real root of `A` from the upper half-plane makes both `G`
//! and `H` real-rooted, so each square is an extreme ray of the cone and the
//! decomposition has length at most two.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::linalg::LinearAlgebra;
use crate::realroots::numeric::polynomial_roots;
use crate::realroots::{
    complex_mul, projective_complex_roots, real_root_count, squarefree_decomposition, RootClass,
    RootFinding, RootMultiset, RootOptions,
};
use crate::realroots::upoly::UPoly;
use crate::scalar::{Backend, Rational, Scalar};
use crate::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonnegativityStatus {
    Nonnegative,
    NotNonnegative,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConePosition {
    /// Positive definite: no real projective zero.
    Interior,
    Boundary,
}

/// A point `(x, y)` where the form is negative, with the value there.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S> {
    pub x: S,
    pub y: S,
    pub value: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonnegativityVerdict<S> {
    pub status: NonnegativityStatus,
    pub witness: Option<Witness<S>>,
    /// Present when `status == Nonnegative`.
    pub position: Option<ConePosition>,
    /// Decided exactly (rational input).
    pub certified: bool,
    pub warnings: Vec<String>,
}

impl<S: Scalar> NonnegativityVerdict<S> {
    fn nonnegative(boundary: bool, certified: bool, warnings: Vec<String>) -> Self {
        let position = if boundary { ConePosition::Boundary } else { ConePosition::Interior };
        Self {
            status: NonnegativityStatus::Nonnegative,
            witness: None,
            position: Some(position),
            certified,
            warnings,
        }
    }

    fn zero(certified: bool) -> Self {
        Self { status: NonnegativityStatus::Zero, witness: None, position: None, certified, warnings: Vec::new() }
    }

    fn negative(f: &BinaryForm<S>, x: S, y: S, certified: bool) -> Self {
        let value = f.evaluate(&x, &y);
        assert!(value.is_negative(), "witness must evaluate negative");
        Self {
            status: NonnegativityStatus::NotNonnegative,
            witness: Some(Witness { x, y, value }),
            position: None,
            certified,
            warnings: Vec::new(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.status != NonnegativityStatus::NotNonnegative
    }
}

/// Backend-specific decision procedures.
pub trait SosBackend: RootFinding + LinearAlgebra {
    fn nonnegativity(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<NonnegativityVerdict<Self>>;
    fn extremality(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<bool>;
}

impl SosBackend for Rational {
    fn nonnegativity(f: &BinaryForm<Self>, _opts: &RootOptions) -> Result<NonnegativityVerdict<Self>> {
        if f.is_zero() {
            return Ok(NonnegativityVerdict::zero(true));
        }
        let sf = squarefree_decomposition(f)?;
        let mut boundary = false;
        let mut sign_change = false;
        for (g, m) in &sf.factors {
            if real_root_count(g)? > 0 {
                boundary = true;
                if m % 2 == 1 {
                    sign_change = true;
                }
            }
        }
        if !sign_change && sf.unit.is_positive() {
            return Ok(NonnegativityVerdict::nonnegative(boundary, true, Vec::new()));
        }
        // Scan one point in each arc between consecutive real roots.
        let one = Rational::from_int(1);
        if !f.coeffs()[0].is_zero() && f.coeffs()[0].is_negative() {
            return Ok(NonnegativityVerdict::negative(f, one.clone(), Rational::zero(), true));
        }
        let radical = UPoly::new(sf.radical().dehomogenize());
        for t in radical.separating_points() {
            let x = Rational::from_integer(t.numer().clone());
            let y = Rational::from_integer(t.denom().clone());
            if f.evaluate(&x, &y).is_negative() {
                return Ok(NonnegativityVerdict::negative(f, x, y, true));
            }
        }
        unreachable!("a form with a sign change or negative unit is negative between its real roots")
    }

    fn extremality(f: &BinaryForm<Self>, _opts: &RootOptions) -> Result<bool> {
        let sf = squarefree_decomposition(f)?;
        if !sf.unit.is_positive() {
            return Ok(false);
        }
        for (g, m) in &sf.factors {
            if m % 2 == 1 || real_root_count(g)? != g.degree() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl SosBackend for f64 {
    fn nonnegativity(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<NonnegativityVerdict<Self>> {
        if f.is_zero() {
            return Ok(NonnegativityVerdict::zero(false));
        }
        let rm = projective_complex_roots(f, opts)?;
        let odd_real = rm.real().any(|r| r.multiplicity % 2 == 1);
        if odd_real || rm.unit < 0.0 {
            if let Some((x, y)) = float_sign_scan(f, &rm) {
                return Ok(NonnegativityVerdict::negative(f, x, y, false));
            }
        }
        // Cross-check by sampling: a negative sample overrides the root data.
        if let Some(w) = verify::sample_witness_check(f, 720, 0) {
            return Ok(NonnegativityVerdict::negative(f, w.x, w.y, false));
        }
        let mut warnings = Vec::new();
        if odd_real || rm.unit < 0.0 {
            warnings.push("root data suggests a sign change but no negative value was found".into());
        }
        let boundary = rm.has_real_root();
        if boundary {
            warnings.push(
                "form has numerically detected real zeros; nonnegativity on the boundary is not float-decidable"
                    .into(),
            );
        }
        Ok(NonnegativityVerdict::nonnegative(boundary, false, warnings))
    }

    fn extremality(f: &BinaryForm<Self>, opts: &RootOptions) -> Result<bool> {
        if f.is_zero() {
            return Err(Error::ZeroForm);
        }
        let rm = projective_complex_roots(f, opts)?;
        Ok(rm.unit > 0.0
            && rm.roots.iter().all(|r| r.class == RootClass::Real && r.multiplicity % 2 == 0))
    }
}

/// Most negative of the points between consecutive real roots (and `[1:0]`).
fn float_sign_scan(f: &BinaryForm<f64>, rm: &RootMultiset) -> Option<(f64, f64)> {
    let mut reals: Vec<f64> = rm
        .real()
        .filter(|r| r.point.beta() == 1.0)
        .map(|r| r.point.alpha().re)
        .collect();
    reals.sort_by(f64::total_cmp);
    let mut candidates: Vec<(f64, f64)> = vec![(1.0, 0.0)];
    if reals.is_empty() {
        candidates.push((0.0, 1.0));
    } else {
        candidates.push((reals[0] - 1.0, 1.0));
        candidates.extend(reals.windows(2).map(|w| ((w[0] + w[1]) / 2.0, 1.0)));
        candidates.push((reals[reals.len() - 1] + 1.0, 1.0));
    }
    candidates
        .into_iter()
        .map(|(x, y)| ((x, y), f.evaluate(&x, &y)))
        .filter(|(_, v)| *v < 0.0)
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(p, _)| p)
}

pub fn is_nonnegative<S: SosBackend>(f: &BinaryForm<S>, opts: &RootOptions) -> Result<NonnegativityVerdict<S>> {
    if f.degree() % 2 == 1 {
        return Err(Error::OddDegree(f.degree()));
    }
    S::nonnegativity(f, opts)
}

/// Extreme ray of the nonnegative cone: the square of a real-rooted form.
pub fn is_extreme_binary<S: SosBackend>(f: &BinaryForm<S>, opts: &RootOptions) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    if f.degree() % 2 == 1 {
        return Err(Error::OddDegree(f.degree()));
    }
    S::extremality(f, opts)
}

/// Minimal number of extreme rays summing to `f`: 0, 1 or 2.
pub fn length_binary<S: SosBackend>(f: &BinaryForm<S>, opts: &RootOptions) -> Result<usize> {
    let verdict = is_nonnegative(f, opts)?;
    match verdict.status {
        NonnegativityStatus::NotNonnegative => Err(Error::NotNonnegative),
        NonnegativityStatus::Zero => Ok(0),
        NonnegativityStatus::Nonnegative => Ok(if is_extreme_binary(f, opts)? { 1 } else { 2 }),
    }
}

/// A factorization `F = A · Ā`.
///
/// `A = real_factor · pair_factor`: the real factor carries half of every
/// real root, the pair factor carries `√unit` and, for the `j`-th conjugate
/// pair, `selection[j]` copies of the upper root and the rest of the lower one.
#[derive(Clone, Debug)]
pub struct Partition {
    pub a: Vec<Complex64>,
    pub real_factor: Vec<f64>,
    pub pair_factor: Vec<Complex64>,
    pub upper_roots: Vec<Complex64>,
    pub pair_multiplicities: Vec<usize>,
    pub selection: Vec<usize>,
}

impl Partition {
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// `A · Ā` as a real form.
    pub fn product(&self) -> Vec<f64> {
        let conj: Vec<Complex64> = self.a.iter().map(Complex64::conj).collect();
        complex_mul(&self.a, &conj).iter().map(|z| z.re).collect()
    }
}

/// Which roots go into `A`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Selection {
    /// Every non-real root of `A` in the upper half-plane.
    #[default]
    AllUpper,
    /// Per conjugate pair (in root-multiset order), number of upper copies.
    Counts(Vec<usize>),
}

fn linear_power(lf: [Complex64; 2], m: usize, acc: Vec<Complex64>) -> Vec<Complex64> {
    (0..m).fold(acc, |acc, _| complex_mul(&acc, &lf))
}

fn partition_from_roots(rm: &RootMultiset, selection: &Selection) -> Result<Partition> {
    if rm.unit <= 0.0 {
        return Err(Error::NotNonnegative);
    }
    let mut real = vec![Complex64::new(1.0, 0.0)];
    for r in rm.real() {
        if r.multiplicity % 2 == 1 {
            return Err(Error::NotNonnegative);
        }
        real = linear_power(r.point.linear_factor(), r.multiplicity / 2, real);
    }
    let uppers: Vec<(Complex64, usize)> = rm.upper().map(|r| (r.point.alpha(), r.multiplicity)).collect();
    let counts = match selection {
        Selection::AllUpper => uppers.iter().map(|u| u.1).collect(),
        Selection::Counts(c) => {
            if c.len() != uppers.len() {
                return Err(Error::InvalidSelection(format!(
                    "{} counts for {} conjugate pairs",
                    c.len(),
                    uppers.len()
                )));
            }
            for (j, (&k, u)) in c.iter().zip(&uppers).enumerate() {
                if k > u.1 {
                    return Err(Error::InvalidSelection(format!(
                        "pair {j} has multiplicity {} but {k} copies were selected",
                        u.1
                    )));
                }
            }
            c.clone()
        }
    };
    let mut pair = vec![Complex64::new(rm.unit.sqrt(), 0.0)];
    for (&(alpha, m), &k) in uppers.iter().zip(&counts) {
        pair = linear_power([Complex64::new(1.0, 0.0), -alpha], k, pair);
        pair = linear_power([Complex64::new(1.0, 0.0), -alpha.conj()], m - k, pair);
    }
    let a = complex_mul(&real, &pair);
    Ok(Partition {
        a,
        real_factor: real.iter().map(|z| z.re).collect(),
        pair_factor: pair,
        upper_roots: uppers.iter().map(|u| u.0).collect(),
        pair_multiplicities: uppers.iter().map(|u| u.1).collect(),
        selection: counts,
    })
}

pub fn partition_roots<S: SosBackend>(
    f: &BinaryForm<S>,
    selection: &Selection,
    opts: &RootOptions,
) -> Result<Partition> {
    let verdict = is_nonnegative(f, opts)?;
    match verdict.status {
        NonnegativityStatus::NotNonnegative => Err(Error::NotNonnegative),
        NonnegativityStatus::Zero => {
            let d = f.degree() / 2;
            let zero = vec![Complex64::zero(); d + 1];
            Ok(Partition {
                a: zero.clone(),
                real_factor: vec![0.0],
                pair_factor: zero,
                upper_roots: Vec::new(),
                pair_multiplicities: Vec::new(),
                selection: Vec::new(),
            })
        }
        NonnegativityStatus::Nonnegative => {
            let rm = projective_complex_roots(f, opts)?;
            partition_from_roots(&rm, selection)
        }
    }
}

/// Diagnostics for one of the two squares.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRootReport {
    pub degree: usize,
    pub is_zero: bool,
    /// Largest `|Im z| / (1 + |z|)` over the numerically located roots.
    pub max_imag_ratio: f64,
    /// Every root within the real-axis tolerance.
    pub real_rooted: bool,
    /// Sturm count on the rationalized coefficients (exact-derived inputs only).
    pub sturm_certified: Option<bool>,
}

/// Tolerances recorded in every certificate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub cluster_rel: f64,
    pub real_rel: f64,
}

impl From<&RootOptions> for Tolerances {
    fn from(o: &RootOptions) -> Self {
        Self { cluster_rel: o.cluster_rel, real_rel: o.real_rel }
    }
}

/// `F = G² + H²` with provenance.
#[derive(Clone, Debug)]
pub struct TwoSquareCertificate {
    pub g: BinaryForm<f64>,
    pub h: BinaryForm<f64>,
    /// Upper bound on `‖F − G² − H²‖∞` including floating-point rounding.
    pub residual: f64,
    pub selection: Vec<usize>,
    pub pair_multiplicities: Vec<usize>,
    pub g_report: RealRootReport,
    pub h_report: RealRootReport,
    pub certified: bool,
    pub backend: Backend,
    pub tolerances: Tolerances,
}

impl TwoSquareCertificate {
    pub fn relative_residual(&self, f_norm: f64) -> f64 {
        if f_norm == 0.0 {
            self.residual
        } else {
            self.residual / f_norm
        }
    }
}

fn clean(v: f64) -> f64 {
    v + 0.0
}

/// Flip the sign so the first nonzero coefficient is positive.
fn normalize_sign(mut c: Vec<f64>) -> Vec<f64> {
    if c.iter().find(|v| **v != 0.0).is_some_and(|v| *v < 0.0) {
        c.iter_mut().for_each(|v| *v = -*v);
    }
    c.into_iter().map(clean).collect()
}

/// Numeric root report for `real_factor · part`, where the real factor's
/// roots are already known to be real.
fn root_report(part: &[f64], total_degree: usize, exact_derived: bool, opts: &RootOptions) -> Result<RealRootReport> {
    if part.iter().all(|v| *v == 0.0) {
        return Ok(RealRootReport {
            degree: total_degree,
            is_zero: true,
            max_imag_ratio: 0.0,
            real_rooted: true,
            sturm_certified: exact_derived.then_some(true),
        });
    }
    // part holds coefficients of x^(n-k) y^k; peel off exact roots at [1:0] and [0:1].
    let at_infinity = part.iter().take_while(|v| **v == 0.0).count();
    let mut asc: Vec<f64> = part.iter().rev().cloned().collect();
    asc.truncate(part.len() - at_infinity);
    let at_zero = asc.iter().take_while(|v| **v == 0.0).count();
    let core = &asc[at_zero..];
    let mut max_ratio: f64 = 0.0;
    if core.len() >= 2 {
        let (z, _) = polynomial_roots(core)?;
        for r in z {
            max_ratio = max_ratio.max(r.im.abs() / (1.0 + r.norm()));
        }
    }
    let sturm_certified = if exact_derived {
        let exact: Vec<Rational> = part.iter().map(|v| <Rational as Scalar>::from_float(*v)).collect();
        let form = BinaryForm::from_rationals(exact);
        Some(real_root_count(&form)? == form.degree())
    } else {
        None
    };
    Ok(RealRootReport {
        degree: total_degree,
        is_zero: false,
        max_imag_ratio: max_ratio,
        real_rooted: max_ratio <= opts.real_rel,
        sturm_certified,
    })
}

fn certificate_from_partition<S: Scalar>(
    f: &BinaryForm<S>,
    p: &Partition,
    exact_derived: bool,
    opts: &RootOptions,
) -> Result<TwoSquareCertificate> {
    let d = p.degree();
    let g = normalize_sign(p.a.iter().map(|z| z.re).collect());
    let h = normalize_sign(p.a.iter().map(|z| z.im).collect());
    let g_part: Vec<f64> = p.pair_factor.iter().map(|z| z.re).collect();
    let h_part: Vec<f64> = p.pair_factor.iter().map(|z| z.im).collect();
    let g_report = root_report(&g_part, d, exact_derived, opts)?;
    let h_report = root_report(&h_part, d, exact_derived, opts)?;
    let g = BinaryForm::new(g)?;
    let h = BinaryForm::new(h)?;
    let residual = recorded_residual(&f.to_f64(), &g, &h);
    let certified = S::BACKEND == Backend::Exact
        && exact_derived
        && g_report.sturm_certified == Some(true)
        && h_report.sturm_certified == Some(true);
    Ok(TwoSquareCertificate {
        g,
        h,
        residual,
        selection: p.selection.clone(),
        pair_multiplicities: p.pair_multiplicities.clone(),
        g_report,
        h_report,
        certified,
        backend: S::BACKEND,
        tolerances: opts.into(),
    })
}

/// `max_k |Δ_k| + 2 γ Σ_k` where `Σ_k` sums the magnitudes entering
/// coefficient `k`; never smaller than an independently rounded recomputation.
fn recorded_residual(f: &BinaryForm<f64>, g: &BinaryForm<f64>, h: &BinaryForm<f64>) -> f64 {
    let n = f.degree();
    let gamma = (n as f64 + 4.0) * f64::EPSILON;
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let mut diff = f.coeffs()[k];
        let mut mag = f.coeffs()[k].abs();
        for i in 0..=k {
            let j = k - i;
            if i >= g.coeffs().len() || j >= g.coeffs().len() {
                continue;
            }
            let gg = g.coeffs()[i] * g.coeffs()[j];
            let hh = h.coeffs()[i] * h.coeffs()[j];
            diff -= gg + hh;
            mag += gg.abs() + hh.abs();
        }
        worst = worst.max(diff.abs() + 2.0 * gamma * mag);
    }
    worst
}

fn zero_certificate<S: Scalar>(f: &BinaryForm<S>, opts: &RootOptions) -> TwoSquareCertificate {
    let d = f.degree() / 2;
    let report = RealRootReport {
        degree: d,
        is_zero: true,
        max_imag_ratio: 0.0,
        real_rooted: true,
        sturm_certified: Some(true),
    };
    TwoSquareCertificate {
        g: BinaryForm::zero(d),
        h: BinaryForm::zero(d),
        residual: 0.0,
        selection: Vec::new(),
        pair_multiplicities: Vec::new(),
        g_report: report.clone(),
        h_report: report,
        certified: S::BACKEND == Backend::Exact,
        backend: S::BACKEND,
        tolerances: opts.into(),
    }
}

/// `F = G² + H²` from the all-upper partition, with `G` and `H` real-rooted.
pub fn two_square_decomposition<S: SosBackend>(
    f: &BinaryForm<S>,
    opts: &RootOptions,
) -> Result<TwoSquareCertificate> {
    let verdict = is_nonnegative(f, opts)?;
    match verdict.status {
        NonnegativityStatus::NotNonnegative => Err(Error::NotNonnegative),
        NonnegativityStatus::Zero => Ok(zero_certificate(f, opts)),
        NonnegativityStatus::Nonnegative => {
            let rm = projective_complex_roots(f, opts)?;
            let p = partition_from_roots(&rm, &Selection::AllUpper)?;
            let cert = certificate_from_partition(f, &p, rm.exact_structure, opts)?;
            for (name, rep) in [("G", &cert.g_report), ("H", &cert.h_report)] {
                if !rep.real_rooted {
                    return Err(Error::RealRootCheckFailed(format!(
                        "{name} has a root with |Im|/(1+|z|) = {:e}",
                        rep.max_imag_ratio
                    )));
                }
                if rep.sturm_certified == Some(false) {
                    return Err(Error::RealRootCheckFailed(format!(
                        "Sturm count of {name} is below its degree"
                    )));
                }
            }
            Ok(cert)
        }
    }
}

/// Certificate for an explicit selection of roots.
pub fn two_square_from_selection<S: SosBackend>(
    f: &BinaryForm<S>,
    selection: &Selection,
    opts: &RootOptions,
) -> Result<TwoSquareCertificate> {
    let verdict = is_nonnegative(f, opts)?;
    match verdict.status {
        NonnegativityStatus::NotNonnegative => Err(Error::NotNonnegative),
        NonnegativityStatus::Zero => Ok(zero_certificate(f, opts)),
        NonnegativityStatus::Nonnegative => {
            let rm = projective_complex_roots(f, opts)?;
            let p = partition_from_roots(&rm, selection)?;
            certificate_from_partition(f, &p, rm.exact_structure, opts)
        }
    }
}

/// Relative residual every enumerated certificate must meet.
pub const ENUMERATION_RESIDUAL_RTOL: f64 = 1e-8;

/// One certificate per selection up to complementation (`A ↔ Ā`), starting
/// from the all-upper selection.
pub fn enumerate_two_square_decompositions<S: SosBackend>(
    f: &BinaryForm<S>,
    budget: u128,
    opts: &RootOptions,
) -> Result<Vec<TwoSquareCertificate>> {
    let verdict = is_nonnegative(f, opts)?;
    match verdict.status {
        NonnegativityStatus::NotNonnegative => return Err(Error::NotNonnegative),
        NonnegativityStatus::Zero => return Ok(vec![zero_certificate(f, opts)]),
        NonnegativityStatus::Nonnegative => {}
    }
    let rm = projective_complex_roots(f, opts)?;
    let mults: Vec<usize> = rm.upper().map(|r| r.multiplicity).collect();
    let needed = mults.iter().fold(1u128, |acc, &m| acc.saturating_mul(m as u128 + 1));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let f64_form = f.to_f64();
    let norm = f64_form.max_abs();
    let mut out = Vec::new();
    let mut sel = mults.clone();
    loop {
        let complement: Vec<usize> = sel.iter().zip(&mults).map(|(k, m)| m - k).collect();
        if sel >= complement {
            let p = partition_from_roots(&rm, &Selection::Counts(sel.clone()))?;
            let cert = certificate_from_partition(f, &p, rm.exact_structure, opts)?;
            let check = verify::two_square_residual(&f64_form, &cert.g, &cert.h)?;
            if check > ENUMERATION_RESIDUAL_RTOL * norm.max(f64::MIN_POSITIVE) {
                return Err(Error::RootFinding(format!(
                    "selection {sel:?} reconstructs with residual {check:e}"
                )));
            }
            out.push(cert);
        }
        // Decrement the mixed-radix counter.
        let mut pos = sel.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if sel[pos] > 0 {
                sel[pos] -= 1;
                for (s, m) in sel.iter_mut().zip(&mults).skip(pos + 1) {
                    *s = *m;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::from_i64s(c)
    }

    fn opts() -> RootOptions {
        RootOptions::default()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn nonnegativity_examples() {
        let v = is_nonnegative(&bf(&[1, 0, 2, 0, 1]), &opts()).unwrap();
        assert_eq!(v.status, NonnegativityStatus::Nonnegative);
        assert_eq!(v.position, Some(ConePosition::Interior));
        assert!(v.certified);

        let f = bf(&[1, 0, 0, 0, -1]);
        let v = is_nonnegative(&f, &opts()).unwrap();
        assert_eq!(v.status, NonnegativityStatus::NotNonnegative);
        let w = v.witness.unwrap();
        assert!(w.value.is_negative());
        assert_eq!(f.evaluate(&w.x, &w.y), w.value);
        // The documented witness (1, 2) is valid too.
        assert_eq!(f.evaluate(&Rational::from_int(1), &Rational::from_int(2)), Rational::from_int(-15));

        let v = is_nonnegative(&bf(&[1, -2, 1]), &opts()).unwrap();
        assert_eq!(v.status, NonnegativityStatus::Nonnegative);
        assert_eq!(v.position, Some(ConePosition::Boundary));

        assert_eq!(is_nonnegative(&bf(&[0, 0, 0]), &opts()).unwrap().status, NonnegativityStatus::Zero);
        assert_eq!(is_nonnegative(&bf(&[1, 0, 0, 1]), &opts()), Err(Error::OddDegree(3)));
    }

    #[test]
    fn negative_unit_and_negative_constant() {
        let v = is_nonnegative(&bf(&[-1, 0, -1]), &opts()).unwrap();
        assert_eq!(v.status, NonnegativityStatus::NotNonnegative);
        let v = is_nonnegative(&bf(&[-3]), &opts()).unwrap();
        assert!(v.witness.unwrap().value.is_negative());
        // -y^2 (x - y)^2: leading coefficient zero, negative elsewhere
        let f = bf(&[0, 0, -1, 2, -1]);
        let v = is_nonnegative(&f, &opts()).unwrap();
        assert_eq!(v.status, NonnegativityStatus::NotNonnegative);
    }

    #[test]
    fn float_nonnegativity() {
        let f = BinaryForm::<f64>::from_i64s(&[1, 0, 0, 0, -1]);
        let v = is_nonnegative(&f, &opts()).unwrap();
        assert_eq!(v.status, NonnegativityStatus::NotNonnegative);
        assert!(!v.certified);
        assert!(v.witness.unwrap().value < 0.0);
        let f = BinaryForm::<f64>::from_i64s(&[1, -2, 1]);
        let v = is_nonnegative(&f, &opts()).unwrap();
        assert_eq!(v.position, Some(ConePosition::Boundary));
        assert!(!v.warnings.is_empty());
    }

    #[test]
    fn partition_examples() {
        let p = partition_roots(&bf(&[1, 0, 1]), &Selection::AllUpper, &opts()).unwrap();
        assert!((p.a[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((p.a[1] - Complex64::new(0.0, -1.0)).norm() < 1e-14);

        let p = partition_roots(&bf(&[1, 0, 2, 0, 1]), &Selection::AllUpper, &opts()).unwrap();
        let want = [Complex64::new(1.0, 0.0), Complex64::new(0.0, -2.0), Complex64::new(-1.0, 0.0)];
        assert!(p.a.iter().zip(want).all(|(a, w)| (a - w).norm() < 1e-13));
        assert!(close(&p.product(), &[1.0, 0.0, 2.0, 0.0, 1.0], 1e-13));

        let p = partition_roots(&bf(&[1, -4, 6, -4, 1]), &Selection::AllUpper, &opts()).unwrap();
        assert!(p.a.iter().all(|z| z.im == 0.0));
        assert!(close(&p.a.iter().map(|z| z.re).collect::<Vec<_>>(), &[1.0, -2.0, 1.0], 1e-13));

        assert_eq!(
            partition_roots(&bf(&[1, 0, -1]), &Selection::AllUpper, &opts()).unwrap_err(),
            Error::NotNonnegative
        );
        assert!(matches!(
            partition_roots(&bf(&[1, 0, 1]), &Selection::Counts(vec![2]), &opts()),
            Err(Error::InvalidSelection(_))
        ));
    }

    #[test]
    fn two_square_examples() {
        let c = two_square_decomposition(&bf(&[1, 0, 1]), &opts()).unwrap();
        assert!(close(c.g.coeffs(), &[1.0, 0.0], 1e-14));
        assert!(close(c.h.coeffs(), &[0.0, 1.0], 1e-14));
        assert!(c.certified);

        let c = two_square_decomposition(&bf(&[1, 0, 2, 0, 1]), &opts()).unwrap();
        assert!(close(c.g.coeffs(), &[1.0, 0.0, -1.0], 1e-13));
        assert!(close(c.h.coeffs(), &[0.0, 2.0, 0.0], 1e-13));
        assert_eq!(c.h.coeffs()[0], 0.0);
        assert!(c.residual < 1e-12);

        let c = two_square_decomposition(&bf(&[1, -4, 6, -4, 1]), &opts()).unwrap();
        assert!(close(c.g.coeffs(), &[1.0, -2.0, 1.0], 1e-13));
        assert!(c.h.coeffs().iter().all(|v| *v == 0.0));
        assert!(c.h_report.is_zero);
    }

    #[test]
    fn root_at_infinity_is_pulled_out() {
        // y^2 (x^2 + y^2)
        let c = two_square_decomposition(&bf(&[0, 0, 1, 0, 1]), &opts()).unwrap();
        assert!(close(c.g.coeffs(), &[0.0, 1.0, 0.0], 1e-14));
        assert!(close(c.h.coeffs(), &[0.0, 0.0, 1.0], 1e-14));
    }

    #[test]
    fn extremality_examples() {
        assert!(is_extreme_binary(&bf(&[1, -4, 6, -4, 1]), &opts()).unwrap());
        assert!(!is_extreme_binary(&bf(&[1, 0, 2, 0, 1]), &opts()).unwrap());
        assert!(!is_extreme_binary(&bf(&[1, 0, 1]), &opts()).unwrap());
        assert!(!is_extreme_binary(&bf(&[-1, 2, -1]), &opts()).unwrap());
        assert_eq!(is_extreme_binary(&bf(&[0, 0, 0]), &opts()), Err(Error::ZeroForm));
        let f = BinaryForm::<f64>::from_i64s(&[1, -2, 1]);
        assert!(is_extreme_binary(&f, &opts()).unwrap());
    }

    #[test]
    fn length_examples() {
        assert_eq!(length_binary(&bf(&[0, 0, 0, 0, 0]), &opts()).unwrap(), 0);
        assert_eq!(length_binary(&bf(&[1, -4, 6, -4, 1]), &opts()).unwrap(), 1);
        assert_eq!(length_binary(&bf(&[1, 0, 2, 0, 1]), &opts()).unwrap(), 2);
        assert_eq!(length_binary(&bf(&[1, 0, -1]), &opts()), Err(Error::NotNonnegative));
    }

    #[test]
    fn enumeration_examples() {
        let certs = enumerate_two_square_decompositions(&bf(&[1, 0, 1]), 64, &opts()).unwrap();
        assert_eq!(certs.len(), 1);
        // (x^2 + y^2)(x^2 - 2xy + 2y^2)
        let f = bf(&[1, 0, 1]).multiply(&bf(&[1, -2, 2]));
        let certs = enumerate_two_square_decompositions(&f, 64, &opts()).unwrap();
        assert_eq!(certs.len(), 2);
        for c in &certs {
            let r = verify::two_square_residual(&f.to_f64(), &c.g, &c.h).unwrap();
            assert!(r < 1e-12);
        }
        assert_eq!(certs[0].selection, vec![1, 1]);
        let certs = enumerate_two_square_decompositions(&bf(&[1, -4, 6, -4, 1]), 64, &opts()).unwrap();
        assert_eq!(certs.len(), 1);
        assert!(certs[0].h.coeffs().iter().all(|v| *v == 0.0));
        assert_eq!(
            enumerate_two_square_decompositions(&f, 3, &opts()).unwrap_err(),
            Error::BudgetExceeded { needed: 4, budget: 3 }
        );
    }

    #[test]
    fn enumeration_counts_self_complementary_selection() {
        // (x^2+y^2)^2: one pair with multiplicity 2 -> selections 0,1,2; orbits {2,0}, {1}
        let certs = enumerate_two_square_decompositions(&bf(&[1, 0, 2, 0, 1]), 64, &opts()).unwrap();
        assert_eq!(certs.len(), 2);
        assert_eq!(certs[1].selection, vec![1]);
        // selection 1 gives A = (x - iy)(x + iy) = x^2 + y^2, H = 0
        assert!(certs[1].h.coeffs().iter().all(|v| v.abs() < 1e-14));
    }
}
