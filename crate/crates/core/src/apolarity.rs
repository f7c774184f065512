//! Scaled coefficients, the apolar pairing, apolarity matrices and the
//! catalecticant.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::form::{BinaryForm, QuadraticForm};
use crate::linalg::LinearAlgebra;
use crate::scalar::Scalar;

/// `a[k] = coeffs[k] / binomial(2d, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledCoeffs<S> {
    pub a: Vec<S>,
}

impl<S: Scalar> ScaledCoeffs<S> {
    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Back to plain monomial coefficients.
    pub fn to_form(&self) -> BinaryForm<S> {
        let n = self.degree();
        let coeffs = self
            .a
            .iter()
            .enumerate()
            .map(|(k, a)| a.clone() * S::binomial(n, k))
            .collect();
        BinaryForm::new(coeffs).expect("scaled coefficients come from a valid form")
    }
}

pub fn scaled_coefficients<S: Scalar>(f: &BinaryForm<S>) -> ScaledCoeffs<S> {
    let n = f.degree();
    let a = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.clone() / S::binomial(n, k))
        .collect();
    ScaledCoeffs { a }
}

/// `τ(f, g) = Σ_k binomial(n, k) a_f[k] a_g[k]`.
pub fn apolar_pairing<S: Scalar>(f: &BinaryForm<S>, g: &BinaryForm<S>) -> Result<S> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch(f.degree(), g.degree()));
    }
    let n = f.degree();
    let af = scaled_coefficients(f);
    let ag = scaled_coefficients(g);
    Ok(af
        .a
        .into_iter()
        .zip(ag.a)
        .enumerate()
        .fold(S::zero(), |acc, (k, (x, y))| acc + S::binomial(n, k) * x * y))
}

/// Matrix of the apolarity map from forms of degree `n - i` to forms of
/// degree `i`, in scaled bases: `(i+1) × (n-i+1)` with entry `(r, c) = a[r+c]`.
pub fn apolarity_matrix<S: Scalar>(f: &BinaryForm<S>, i: usize) -> Result<Vec<Vec<S>>> {
    let n = f.degree();
    if n < 2 || i < 1 || i > n - 1 {
        return Err(Error::IndexOutOfRange { index: i, lo: 1, hi: n.saturating_sub(1) });
    }
    Ok(hankel(&scaled_coefficients(f).a, i + 1, n - i + 1))
}

pub(crate) fn hankel<S: Clone>(a: &[S], rows: usize, cols: usize) -> Vec<Vec<S>> {
    (0..rows).map(|r| (0..cols).map(|c| a[r + c].clone()).collect()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdState {
    Yes,
    No,
    Unknown,
}

/// The catalecticant of a form, with its rank.
///
/// For a binary form of degree `2d` this is the `(d+1) × (d+1)` Hankel matrix
/// of the scaled coefficients; for a quadratic form it is the symmetric
/// coefficient matrix itself. PSD-ness is computed on first request.
#[derive(Debug)]
pub struct CatalecticantMatrix<S> {
    entries: Vec<Vec<S>>,
    rank: usize,
    psd: OnceLock<bool>,
}

impl<S: LinearAlgebra> CatalecticantMatrix<S> {
    fn from_entries(entries: Vec<Vec<S>>) -> Self {
        let rank = S::rank(&entries);
        Self { entries, rank, psd: OnceLock::new() }
    }

    pub fn entries(&self) -> &[Vec<S>] {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_psd(&self) -> bool {
        *self.psd.get_or_init(|| S::psd_witness(&self.entries).is_none())
    }

    /// PSD status without forcing the computation.
    pub fn psd_state(&self) -> PsdState {
        match self.psd.get() {
            Some(true) => PsdState::Yes,
            Some(false) => PsdState::No,
            None => PsdState::Unknown,
        }
    }
}

impl<S: Clone> Clone for CatalecticantMatrix<S> {
    fn clone(&self) -> Self {
        let psd = OnceLock::new();
        if let Some(&v) = self.psd.get() {
            let _ = psd.set(v);
        }
        Self { entries: self.entries.clone(), rank: self.rank, psd }
    }
}

pub fn catalecticant<S: LinearAlgebra>(f: &BinaryForm<S>) -> Result<CatalecticantMatrix<S>> {
    let n = f.degree();
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    let d = n / 2;
    Ok(CatalecticantMatrix::from_entries(hankel(&scaled_coefficients(f).a, d + 1, d + 1)))
}

pub fn quadratic_catalecticant<S: LinearAlgebra>(q: &QuadraticForm<S>) -> CatalecticantMatrix<S> {
    CatalecticantMatrix::from_entries(q.matrix().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn bf(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::from_i64s(c)
    }

    #[test]
    fn scaled_examples() {
        assert_eq!(
            scaled_coefficients(&bf(&[1, 0, 2, 0, 1])).a,
            vec![q(1, 1), q(0, 1), q(1, 3), q(0, 1), q(1, 1)]
        );
        assert_eq!(scaled_coefficients(&bf(&[1, 4, 6, 4, 1])).a, vec![q(1, 1); 5]);
        assert_eq!(scaled_coefficients(&bf(&[0, 0, 0])).a, vec![q(0, 1); 3]);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(apolar_pairing(&bf(&[1, 0, 0]), &bf(&[0, 0, 1])).unwrap(), q(0, 1));
        assert_eq!(apolar_pairing(&bf(&[1, 2, 1]), &bf(&[1, 2, 1])).unwrap(), q(4, 1));
        assert_eq!(apolar_pairing(&bf(&[1, 0, 1]), &bf(&[1, 0, 1])).unwrap(), q(2, 1));
        assert_eq!(
            apolar_pairing(&bf(&[1, 0, 1]), &bf(&[1, 0, 0, 1])),
            Err(Error::DegreeMismatch(2, 3))
        );
    }

    #[test]
    fn pairing_with_power_is_evaluation() {
        // τ(f, (ax+by)^n) = f(a, b): an independent check of the scaling.
        let f = bf(&[3, -1, 4, 1, -5]);
        let (a, b) = (q(2, 1), q(-1, 3));
        let lin = BinaryForm::from_rationals(vec![a.clone(), b.clone()]).pow(4);
        assert_eq!(apolar_pairing(&f, &lin).unwrap(), f.evaluate(&a, &b));
    }

    #[test]
    fn apolarity_matrix_examples() {
        let m = apolarity_matrix(&bf(&[1, 0, 2, 0, 1]), 2).unwrap();
        assert_eq!(
            m,
            vec![
                vec![q(1, 1), q(0, 1), q(1, 3)],
                vec![q(0, 1), q(1, 3), q(0, 1)],
                vec![q(1, 3), q(0, 1), q(1, 1)],
            ]
        );
        assert_eq!(apolarity_matrix(&bf(&[1, 4, 6, 4, 1]), 2).unwrap(), vec![vec![q(1, 1); 3]; 3]);
        assert_eq!(
            apolarity_matrix(&bf(&[1, 0, 0, 0, 0]), 1).unwrap(),
            vec![vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)], vec![q(0, 1); 4]]
        );
        assert!(matches!(
            apolarity_matrix(&bf(&[1, 0, 0, 0, 0]), 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(apolarity_matrix(&bf(&[1, 0, 0, 0, 0]), 0).is_err());
    }

    #[test]
    fn catalecticant_examples() {
        let c = catalecticant(&bf(&[1, 0, 2, 0, 1])).unwrap();
        assert_eq!(c.rank(), 3);
        assert_eq!(c.psd_state(), PsdState::Unknown);
        assert!(c.is_psd());
        assert_eq!(c.psd_state(), PsdState::Yes);
        let c = catalecticant(&bf(&[1, 4, 6, 4, 1])).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.entries(), vec![vec![q(1, 1); 3]; 3].as_slice());
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]];
        let c = quadratic_catalecticant(&QuadraticForm::new(m.clone()).unwrap());
        assert_eq!(c.entries(), m.as_slice());
        assert_eq!(c.rank(), 2);
    }

    #[test]
    fn catalecticant_float_rank() {
        let f = BinaryForm::<f64>::from_i64s(&[1, 4, 6, 4, 1]);
        assert_eq!(catalecticant(&f).unwrap().rank(), 1);
        let g = BinaryForm::<f64>::from_i64s(&[1, 0, 2, 0, 1]);
        assert_eq!(catalecticant(&g).unwrap().rank(), 3);
    }
}
