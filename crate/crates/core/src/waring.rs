//! Sums of even powers of linear forms: membership, length and explicit
//! decompositions by the kernel (Prony/Sylvester) method.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::apolarity::{catalecticant, hankel, scaled_coefficients};
use crate::binary_sos::{is_nonnegative, SosBackend};
use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::realroots::{projective_complex_roots, ProjectivePoint, RootClass, RootOptions};
use crate::scalar::{binomial_u128, Scalar};
use crate::verify::power_sum_residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QMembership {
    pub member: bool,
    /// Catalecticant rank; the length when `member`.
    pub rank: usize,
    pub length: Option<usize>,
}

/// Membership in the cone of sums of `2d`-th powers, and the length there.
pub fn q_membership_and_length<S: SosBackend>(f: &BinaryForm<S>, opts: &RootOptions) -> Result<QMembership> {
    let cat = catalecticant(f)?;
    let member = cat.is_psd() && is_nonnegative(f, opts)?.is_nonnegative();
    let rank = cat.rank();
    Ok(QMembership { member, rank, length: member.then_some(rank) })
}

/// `Σ λ_k ℓ_k^{2d}` with unit-norm nodes `ℓ_k = a x + b y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerDecomposition {
    pub degree: usize,
    pub rank: usize,
    pub nodes: Vec<(f64, [f64; 2])>,
    pub residual: f64,
}

impl PowerDecomposition {
    pub fn expand(&self) -> BinaryForm<f64> {
        let mut acc = vec![0.0; self.degree + 1];
        for (w, [a, b]) in &self.nodes {
            let p = BinaryForm::new(vec![*a, *b]).expect("finite node").pow(self.degree);
            for (s, c) in acc.iter_mut().zip(p.coeffs()) {
                *s += w * c;
            }
        }
        BinaryForm::new(acc).expect("finite expansion")
    }
}

/// Pencil parameters tried when the kernel is two-dimensional.
pub const PENCIL_GRID: usize = 101;
pub const PENCIL_RANGE: f64 = 10.0;
pub const WARING_RESIDUAL_RTOL: f64 = 1e-8;

fn normalize_node(a: f64, b: f64) -> [f64; 2] {
    let n = a.hypot(b);
    let (a, b) = (a / n, b / n);
    if a < 0.0 || (a == 0.0 && b < 0.0) {
        [-a + 0.0, -b + 0.0]
    } else {
        [a + 0.0, b + 0.0]
    }
}

/// Distinct real roots of a candidate node polynomial as nodes, or `None`.
fn nodes_of(q: &[f64], opts: &RootOptions) -> Option<Vec<[f64; 2]>> {
    let form = BinaryForm::new(q.to_vec()).ok()?;
    if form.is_zero() {
        return None;
    }
    let rm = projective_complex_roots(&form, opts).ok()?;
    if rm.roots.iter().any(|r| r.class != RootClass::Real || r.multiplicity != 1) {
        return None;
    }
    Some(
        rm.roots
            .iter()
            .map(|r| match r.point {
                ProjectivePoint::Infinity => normalize_node(1.0, 0.0),
                ProjectivePoint::Finite(z) => normalize_node(z.re, 1.0),
            })
            .collect(),
    )
}

/// Least-squares weights in the scaled-coefficient basis, where
/// `ℓ^{2d}` has scaled coefficients `a^{2d-k} b^k`.
fn solve_weights(target: &[f64], nodes: &[[f64; 2]]) -> Option<Vec<f64>> {
    let n = target.len() - 1;
    let m = DMatrix::from_fn(n + 1, nodes.len(), |k, j| {
        nodes[j][0].powi((n - k) as i32) * nodes[j][1].powi(k as i32)
    });
    let svd = m.svd(true, true);
    let x = svd.solve(&DVector::from_column_slice(target), 1e-14).ok()?;
    Some(x.iter().cloned().collect())
}

fn try_candidate(f: &BinaryForm<f64>, scaled: &[f64], q: &[f64], opts: &RootOptions) -> Option<PowerDecomposition> {
    let nodes = nodes_of(q, opts)?;
    let weights = solve_weights(scaled, &nodes)?;
    if weights.iter().any(|w| !(*w > 0.0)) {
        return None;
    }
    let nodes: Vec<(f64, [f64; 2])> = weights.into_iter().zip(nodes).collect();
    let residual = power_sum_residual(f, &nodes);
    (residual <= WARING_RESIDUAL_RTOL * f.max_abs()).then(|| PowerDecomposition {
        degree: f.degree(),
        rank: nodes.len(),
        nodes,
        residual,
    })
}

/// Decomposition into `rank(H_F)` powers of distinct linear forms.
pub fn prony_decompose<S: SosBackend>(f: &BinaryForm<S>, opts: &RootOptions) -> Result<PowerDecomposition> {
    let membership = q_membership_and_length(f, opts)?;
    if !membership.member {
        return Err(Error::NotInQ);
    }
    let n = f.degree();
    let r = membership.rank;
    if r == 0 {
        return Ok(PowerDecomposition { degree: n, rank: 0, nodes: Vec::new(), residual: 0.0 });
    }
    let scaled = scaled_coefficients(f).a;
    let kernel = S::nullspace(&hankel(&scaled, n - r + 1, r + 1));
    let kernel: Vec<Vec<f64>> = kernel.iter().map(|v| v.iter().map(Scalar::to_f64).collect()).collect();
    let f64_form = f.to_f64();
    let scaled64: Vec<f64> = scaled.iter().map(Scalar::to_f64).collect();
    let candidates: Vec<Vec<f64>> = match kernel.as_slice() {
        [] => return Err(Error::NodeSearchExhausted("apolar kernel is trivial".into())),
        [q] => vec![q.clone()],
        [q1, q2, ..] => {
            let step = 2.0 * PENCIL_RANGE / (PENCIL_GRID - 1) as f64;
            let mut c: Vec<Vec<f64>> = (0..PENCIL_GRID)
                .map(|i| {
                    let t = -PENCIL_RANGE + step * i as f64;
                    q1.iter().zip(q2).map(|(a, b)| a + t * b).collect()
                })
                .collect();
            c.push(q2.clone());
            c
        }
    };
    let tried = candidates.len();
    candidates
        .iter()
        .find_map(|q| try_candidate(&f64_form, &scaled64, q, opts))
        .ok_or_else(|| {
            Error::NodeSearchExhausted(format!(
                "none of {tried} kernel elements gave distinct real nodes with positive weights"
            ))
        })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableCase {
    /// Quadratic forms in `n` variables.
    Quadratic,
    Binary,
    TernaryQuartic,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableValue {
    Exact(u128),
    Bounds(u128, u128),
}

/// Carathéodory number of the cone of `2d`-th powers in `n` variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QTableEntry {
    pub n: usize,
    pub d: usize,
    pub case: TableCase,
    pub value: TableValue,
}

impl fmt::Display for QTableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = format!("C(Q_{{{},{}}})", self.n, 2 * self.d);
        match self.value {
            TableValue::Exact(v) => write!(f, "{name} = {v}"),
            TableValue::Bounds(lo, hi) => write!(f, "{lo} <= {name} <= {hi}"),
        }
    }
}

pub fn caratheodory_number_table(n: usize, d: usize) -> Result<QTableEntry> {
    if n < 1 {
        return Err(Error::IndexOutOfRange { index: n, lo: 1, hi: usize::MAX });
    }
    if d < 1 {
        return Err(Error::IndexOutOfRange { index: d, lo: 1, hi: usize::MAX });
    }
    let (case, value) = match (n, d) {
        (n, 1) => (TableCase::Quadratic, TableValue::Exact(n as u128)),
        (2, d) => (TableCase::Binary, TableValue::Exact(d as u128 + 1)),
        (3, 2) => (TableCase::TernaryQuartic, TableValue::Exact(6)),
        (n, d) => (
            TableCase::Outside,
            TableValue::Bounds(binomial_u128(n + d - 1, n - 1), binomial_u128(n + 2 * d - 1, n - 1)),
        ),
    };
    Ok(QTableEntry { n, d, case, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn bf(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::from_i64s(c)
    }

    fn opts() -> RootOptions {
        RootOptions::default()
    }

    #[test]
    fn membership_examples() {
        let m = q_membership_and_length(&bf(&[1, 4, 6, 4, 1]), &opts()).unwrap();
        assert_eq!((m.member, m.length), (true, Some(1)));
        let m = q_membership_and_length(&bf(&[1, 0, 0, 0, 1]), &opts()).unwrap();
        assert_eq!((m.member, m.length), (true, Some(2)));
        let m = q_membership_and_length(&bf(&[0, 0, 1, 0, 0]), &opts()).unwrap();
        assert!(!m.member);
        assert_eq!(m.length, None);
    }

    #[test]
    fn prony_examples() {
        let p = prony_decompose(&bf(&[1, 0, 0, 0, 1]), &opts()).unwrap();
        assert_eq!(p.nodes.len(), 2);
        let mut nodes = p.nodes.clone();
        nodes.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
        assert!((nodes[0].0 - 1.0).abs() < 1e-12 && nodes[0].1 == [0.0, 1.0]);
        assert!((nodes[1].0 - 1.0).abs() < 1e-12 && nodes[1].1 == [1.0, 0.0]);

        let p = prony_decompose(&bf(&[1, 4, 6, 4, 1]), &opts()).unwrap();
        assert_eq!(p.nodes.len(), 1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (x+y)^4 = 4 ((x+y)/√2)^4
        assert!((p.nodes[0].0 - 4.0).abs() < 1e-12);
        assert!((p.nodes[0].1[0] - s).abs() < 1e-12 && (p.nodes[0].1[1] - s).abs() < 1e-12);

        let f = bf(&[1, 0, 2, 0, 1]);
        let p = prony_decompose(&f, &opts()).unwrap();
        assert_eq!(p.nodes.len(), 3);
        assert!(p.nodes.iter().all(|(w, _)| (w - 8.0 / 9.0).abs() < 1e-9));
        assert!(power_sum_residual(&f.to_f64(), &p.nodes) < 1e-12);

        assert_eq!(prony_decompose(&bf(&[0, 0, 1, 0, 0]), &opts()), Err(Error::NotInQ));
    }

    #[test]
    fn trigonometric_identity() {
        // (8/9) Σ_k (cos(kπ/3) x + sin(kπ/3) y)^4 = (x^2 + y^2)^2
        let nodes: Vec<(f64, [f64; 2])> = (0..3)
            .map(|k| {
                let t = k as f64 * std::f64::consts::PI / 3.0;
                (8.0 / 9.0, [t.cos(), t.sin()])
            })
            .collect();
        let f = BinaryForm::<f64>::from_i64s(&[1, 0, 2, 0, 1]);
        assert!(power_sum_residual(&f, &nodes) < 1e-14);
    }

    #[test]
    fn table_examples() {
        assert_eq!(caratheodory_number_table(5, 1).unwrap().value, TableValue::Exact(5));
        let e = caratheodory_number_table(2, 3).unwrap();
        assert_eq!(e.value, TableValue::Exact(4));
        assert_eq!(e.to_string(), "C(Q_{2,6}) = 4");
        assert_eq!(caratheodory_number_table(3, 2).unwrap().value, TableValue::Exact(6));
        let e = caratheodory_number_table(3, 3).unwrap();
        assert_eq!(e.value, TableValue::Bounds(10, 28));
        assert_eq!(e.case, TableCase::Outside);
        assert!(caratheodory_number_table(0, 2).is_err());
    }
}
