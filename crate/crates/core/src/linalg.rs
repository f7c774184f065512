//! Dense linear algebra over both backends.
//!
//! Exact matrices use fraction-free elimination and rational RREF; float
//! matrices use the SVD / symmetric eigendecomposition from `nalgebra`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Rational, Scalar};

/// Relative singular-value threshold for numerical rank: `σ_max · max(shape) · RANK_RTOL`.
pub const RANK_RTOL: f64 = 1e-12;
/// Float PSD test: smallest eigenvalue must be `≥ -PSD_RTOL · ‖M‖`.
pub const PSD_RTOL: f64 = 1e-10;
/// Zero-pivot threshold for float LDLᵀ, relative to `max|M_ij|`.
pub const LDL_RTOL: f64 = 1e-12;

/// Backend-dependent matrix algorithms.
pub trait LinearAlgebra: Scalar {
    fn rank(m: &[Vec<Self>]) -> usize;
    /// Basis of the right kernel.
    fn nullspace(m: &[Vec<Self>]) -> Vec<Vec<Self>>;
    /// `None` if `m` (symmetric) is PSD, otherwise `v` with `vᵗ m v < 0`.
    fn psd_witness(m: &[Vec<Self>]) -> Option<Vec<Self>>;
}

impl LinearAlgebra for Rational {
    fn rank(m: &[Vec<Self>]) -> usize {
        bareiss_rank(m)
    }

    fn nullspace(m: &[Vec<Self>]) -> Vec<Vec<Self>> {
        rational_nullspace(m)
    }

    fn psd_witness(m: &[Vec<Self>]) -> Option<Vec<Self>> {
        if let Some(v) = simple_psd_witness(m) {
            return Some(v);
        }
        match pivoted_ldl(m, 0.0).failure {
            None => None,
            Some(fail) => Some(fail.witness),
        }
    }
}

impl LinearAlgebra for f64 {
    fn rank(m: &[Vec<Self>]) -> usize {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return 0;
        }
        let sv = to_dmatrix(m).singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let thresh = smax * rows.max(cols) as f64 * RANK_RTOL;
        sv.iter().filter(|&&s| s > thresh).count()
    }

    fn nullspace(m: &[Vec<Self>]) -> Vec<Vec<Self>> {
        float_nullspace(m)
    }

    fn psd_witness(m: &[Vec<Self>]) -> Option<Vec<Self>> {
        let n = m.len();
        if n == 0 {
            return None;
        }
        let eig = to_dmatrix(m).symmetric_eigen();
        let norm = eig.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let (imin, &lmin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        if lmin >= -PSD_RTOL * norm {
            None
        } else {
            Some(eig.eigenvectors.column(imin).iter().cloned().collect())
        }
    }
}

pub(crate) fn to_dmatrix(m: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, cols, |i, j| m[i][j])
}

/// Rank by fraction-free (Bareiss) elimination on the integer matrix
/// obtained by clearing denominators row by row.
pub fn bareiss_rank(m: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect()
        })
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

fn rational_rref(m: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    let v = &a[r][j] * &factor;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn rational_nullspace(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = m.first().map_or(0, Vec::len);
    let (rref, pivots) = rational_rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref[row][fc].clone();
            }
            v
        })
        .collect()
}

fn float_nullspace(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the SVD returns a full set of right singular vectors.
    let size = rows.max(cols);
    let mat = DMatrix::from_fn(size, cols, |i, j| if i < rows { m[i][j] } else { 0.0 });
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let thresh = smax * rows.max(cols) as f64 * RANK_RTOL;
    (0..cols)
        .filter(|&k| svd.singular_values[k] <= thresh)
        .map(|k| vt.row(k).iter().cloned().collect())
        .collect()
}

/// Why a pivoted LDLᵀ stopped before covering the whole matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum LdlBreakdown {
    /// The largest remaining diagonal entry was negative.
    NegativePivot { step: usize },
    /// After a zero pivot, an off-diagonal entry of the remaining block was nonzero.
    NonzeroAfterZeroPivot { step: usize },
}

#[derive(Clone, Debug)]
pub struct LdlFailure<S> {
    pub kind: LdlBreakdown,
    /// `v` in original coordinates with `vᵗ M v < 0`.
    pub witness: Vec<S>,
}

/// `P M Pᵗ = L D Lᵗ` with symmetric largest-diagonal pivoting.
///
/// `perm[a]` is the original index placed at position `a`; `lower` is unit
/// lower triangular; only the first `rank` entries of `diag` are nonzero.
#[derive(Clone, Debug)]
pub struct PivotedLdl<S> {
    pub perm: Vec<usize>,
    pub lower: Vec<Vec<S>>,
    pub diag: Vec<S>,
    pub rank: usize,
    pub failure: Option<LdlFailure<S>>,
}

impl<S: Scalar> PivotedLdl<S> {
    /// Column `k` of `L`, expressed in the original variable order.
    pub fn linear_form(&self, k: usize) -> Vec<S> {
        let n = self.perm.len();
        let mut form = vec![S::zero(); n];
        for a in 0..n {
            form[self.perm[a]] = self.lower[a][k].clone();
        }
        form
    }
}

/// Pivoted LDLᵀ. `rel_tol` is ignored on the exact backend, where zero means zero.
pub fn pivoted_ldl<S: Scalar>(m: &[Vec<S>], rel_tol: f64) -> PivotedLdl<S> {
    let n = m.len();
    let scale = m.iter().flatten().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
    let negligible = |v: &S| v.is_negligible(scale, rel_tol);
    let mut a = m.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut lower: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut diag = vec![S::zero(); n];

    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if a[i][i] > a[p][p] {
                p = i;
            }
        }
        if p != k {
            a.swap(k, p);
            for row in a.iter_mut() {
                row.swap(k, p);
            }
            perm.swap(k, p);
            for c in 0..k {
                let tmp = lower[k][c].clone();
                lower[k][c] = lower[p][c].clone();
                lower[p][c] = tmp;
            }
        }
        let pivot = a[k][k].clone();
        if negligible(&pivot) {
            // Largest remaining diagonal is zero: the rest must vanish.
            if let Some(i) = (k..n).find(|&i| !negligible(&a[i][i])) {
                let mut u = vec![S::zero(); n];
                u[i] = S::one();
                let failure = LdlFailure {
                    kind: LdlBreakdown::NegativePivot { step: k },
                    witness: back_substitute(&lower, &perm, u),
                };
                return PivotedLdl { perm, lower, diag, rank: k, failure: Some(failure) };
            }
            let mut worst: Option<(usize, usize)> = None;
            for i in k..n {
                for j in i + 1..n {
                    if !negligible(&a[i][j])
                        && worst.is_none_or(|(wi, wj)| a[i][j].abs() > a[wi][wj].abs())
                    {
                        worst = Some((i, j));
                    }
                }
            }
            let failure = worst.map(|(i, j)| {
                let mut u = vec![S::zero(); n];
                u[i] = S::one();
                u[j] = if a[i][j].is_positive() { -S::one() } else { S::one() };
                LdlFailure {
                    kind: LdlBreakdown::NonzeroAfterZeroPivot { step: k },
                    witness: back_substitute(&lower, &perm, u),
                }
            });
            return PivotedLdl { perm, lower, diag, rank: k, failure };
        }
        if pivot.is_negative() {
            let mut u = vec![S::zero(); n];
            u[k] = S::one();
            let failure = LdlFailure {
                kind: LdlBreakdown::NegativePivot { step: k },
                witness: back_substitute(&lower, &perm, u),
            };
            return PivotedLdl { perm, lower, diag, rank: k, failure: Some(failure) };
        }
        for i in k + 1..n {
            lower[i][k] = a[i][k].clone() / pivot.clone();
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = lower[i][k].clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
        for i in k + 1..n {
            a[i][k] = S::zero();
            a[k][i] = S::zero();
        }
        diag[k] = pivot;
    }
    PivotedLdl { perm, lower, diag, rank: n, failure: None }
}

/// Solve `Lᵗ z = u` (unit upper triangular) and return `z` in original coordinates.
fn back_substitute<S: Scalar>(lower: &[Vec<S>], perm: &[usize], u: Vec<S>) -> Vec<S> {
    let n = u.len();
    let mut z = u;
    for i in (0..n).rev() {
        let mut acc = z[i].clone();
        for j in i + 1..n {
            acc = acc - lower[j][i].clone() * z[j].clone();
        }
        z[i] = acc;
    }
    let mut x = vec![S::zero(); n];
    for a in 0..n {
        x[perm[a]] = z[a].clone();
    }
    x
}

/// Coordinate vectors `e_i` or `e_i ∓ e_j` exposing a negative diagonal or
/// a dominant off-diagonal entry.
fn simple_psd_witness<S: Scalar>(m: &[Vec<S>]) -> Option<Vec<S>> {
    let n = m.len();
    for i in 0..n {
        if m[i][i].is_negative() {
            let mut v = vec![S::zero(); n];
            v[i] = S::one();
            return Some(v);
        }
    }
    let two = S::from_int(2);
    for i in 0..n {
        for j in i + 1..n {
            let value = m[i][i].clone() + m[j][j].clone() - two.clone() * m[i][j].abs();
            if value.is_negative() {
                let mut v = vec![S::zero(); n];
                v[i] = S::one();
                v[j] = if m[i][j].is_positive() { -S::one() } else { S::one() };
                return Some(v);
            }
        }
    }
    None
}

/// `vᵗ M v`.
pub fn quadratic_value<S: Scalar>(m: &[Vec<S>], v: &[S]) -> S {
    let mut acc = S::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            acc = acc + x.clone() * v[i].clone() * v[j].clone();
        }
    }
    acc
}
