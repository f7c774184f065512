//! Quadratic forms: PSD tests and decompositions into squares of linear forms.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::form::QuadraticForm;
use crate::linalg::{pivoted_ldl, quadratic_value, to_dmatrix, LinearAlgebra, LDL_RTOL, PSD_RTOL, RANK_RTOL};
use crate::scalar::Scalar;

/// `Σ weight · (form · X)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSquares<S> {
    pub n: usize,
    pub terms: Vec<(S, Vec<S>)>,
}

impl<S: Scalar> WeightedSquares<S> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The symmetric matrix `Σ w v vᵗ`.
    pub fn matrix(&self) -> Vec<Vec<S>> {
        let mut m = vec![vec![S::zero(); self.n]; self.n];
        for (w, v) in &self.terms {
            for i in 0..self.n {
                for j in 0..self.n {
                    m[i][j] = m[i][j].clone() + w.clone() * v[i].clone() * v[j].clone();
                }
            }
        }
        m
    }

    pub fn to_f64(&self) -> WeightedSquares<f64> {
        WeightedSquares {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.to_f64(), v.iter().map(Scalar::to_f64).collect()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdVerdict<S> {
    pub psd: bool,
    /// `v` with `vᵗ M v < 0` when not PSD.
    pub witness: Option<Vec<S>>,
    pub witness_value: Option<S>,
}

pub fn is_psd<S: LinearAlgebra>(q: &QuadraticForm<S>) -> PsdVerdict<S> {
    match S::psd_witness(q.matrix()) {
        None => PsdVerdict { psd: true, witness: None, witness_value: None },
        Some(v) => {
            let value = quadratic_value(q.matrix(), &v);
            PsdVerdict { psd: false, witness: Some(v), witness_value: Some(value) }
        }
    }
}

/// Rank-many weighted squares from a pivoted LDLᵀ.
pub fn quad_decompose<S: LinearAlgebra>(q: &QuadraticForm<S>) -> Result<WeightedSquares<S>> {
    if !is_psd(q).psd {
        return Err(Error::NotPsd);
    }
    let ldl = pivoted_ldl(q.matrix(), LDL_RTOL);
    if ldl.failure.is_some() {
        return Err(Error::NotPsd);
    }
    let terms = (0..ldl.rank)
        .filter(|&k| ldl.diag[k].is_positive())
        .map(|k| (ldl.diag[k].clone(), ldl.linear_form(k)))
        .collect();
    Ok(WeightedSquares { n: q.n(), terms })
}

/// Eigen-decomposition `Σ λ_k (u_k · X)²` with orthonormal `u_k`, dropping
/// eigenvalues below the rank threshold.
pub fn orthonormal_decompose(q: &QuadraticForm<f64>) -> Result<WeightedSquares<f64>> {
    let n = q.n();
    let eig = SymmetricEigen::new(to_dmatrix(q.matrix()));
    let scale = q.max_abs();
    if eig.eigenvalues.iter().any(|&l| l < -PSD_RTOL * scale) {
        return Err(Error::NotPsd);
    }
    let thresh = RANK_RTOL * n as f64 * scale;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let terms = order
        .into_iter()
        .filter(|&k| eig.eigenvalues[k] > thresh)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().cloned().collect()))
        .collect();
    Ok(WeightedSquares { n, terms })
}

/// Tolerance on `RᵗR − I` for rotations.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

fn orthogonality_defect(rows: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).abs());
        }
    }
    worst
}

/// Replace the forms `T` (rows) by `R · T`.
///
/// The input must have equal weights and orthonormal forms, `R` must be
/// orthogonal; both are checked to `ORTHOGONALITY_TOL`.
pub fn rotate_representation(rep: &WeightedSquares<f64>, r: &[Vec<f64>]) -> Result<WeightedSquares<f64>> {
    let k = rep.terms.len();
    if r.len() != k || r.iter().any(|row| row.len() != k) {
        return Err(Error::ShapeMismatch(format!("rotation must be {k}×{k}")));
    }
    let forms: Vec<Vec<f64>> = rep.terms.iter().map(|t| t.1.clone()).collect();
    let defect = orthogonality_defect(&forms);
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(defect));
    }
    let defect = orthogonality_defect(r);
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(defect));
    }
    if let Some((w0, _)) = rep.terms.first() {
        if rep.terms.iter().any(|(w, _)| (w - w0).abs() > ORTHOGONALITY_TOL * w0.abs()) {
            return Err(Error::Certificate("rotation needs equal weights".into()));
        }
    }
    let terms = (0..k)
        .map(|i| {
            let form = (0..rep.n)
                .map(|c| (0..k).map(|j| r[i][j] * forms[j][c]).sum())
                .collect();
            (rep.terms[i].0, form)
        })
        .collect();
    Ok(WeightedSquares { n: rep.n, terms })
}

/// `Σ weight · ℓ²` written out, e.g. `2*(x1 + 1/2*x2)^2 + 3/2*(x2)^2`.
pub fn format_weighted_squares<S: Scalar>(ws: &WeightedSquares<S>, names: &[String]) -> String {
    if ws.terms.is_empty() {
        return "0".into();
    }
    let term = |(w, v): &(S, Vec<S>)| {
        let mut lin = String::new();
        for (c, name) in v.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if lin.is_empty() {
                if neg {
                    lin.push('-');
                }
            } else {
                lin.push_str(if neg { " - " } else { " + " });
            }
            if mag.is_one() {
                lin.push_str(name);
            } else {
                lin.push_str(&format!("{mag}*{name}"));
            }
        }
        if w.is_one() {
            format!("({lin})^2")
        } else {
            format!("{w}*({lin})^2")
        }
    };
    ws.terms.iter().map(term).collect::<Vec<_>>().join(" + ")
}
