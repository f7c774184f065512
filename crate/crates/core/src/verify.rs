//! Independent re-checks of certificates.
//!
//! Everything here recomputes products by plain schoolbook expansion and
//! shares no code with the decomposition routines.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binary_sos::Witness;
use crate::error::{Error, Result};
use crate::form::BinaryForm;
use crate::scalar::Scalar;

fn square(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 2 * c.len() - 1];
    for (i, a) in c.iter().enumerate() {
        for (j, b) in c.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `‖f − Σ s_i²‖∞`.
pub fn sum_of_squares_residual(f: &BinaryForm<f64>, squares: &[BinaryForm<f64>]) -> Result<f64> {
    let mut acc = vec![0.0; f.degree() + 1];
    for s in squares {
        if 2 * s.degree() != f.degree() {
            return Err(Error::DegreeMismatch(f.degree(), 2 * s.degree()));
        }
        for (a, v) in acc.iter_mut().zip(square(s.coeffs())) {
            *a += v;
        }
    }
    Ok(f.coeffs().iter().zip(acc).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// `‖f − G² − H²‖∞`.
pub fn two_square_residual(f: &BinaryForm<f64>, g: &BinaryForm<f64>, h: &BinaryForm<f64>) -> Result<f64> {
    sum_of_squares_residual(f, &[g.clone(), h.clone()])
}

/// `‖f − Σ w_i (a_i x + b_i y)^n‖∞`.
pub fn power_sum_residual(f: &BinaryForm<f64>, nodes: &[(f64, [f64; 2])]) -> f64 {
    let n = f.degree();
    let mut acc = vec![0.0; n + 1];
    for (w, [a, b]) in nodes {
        for (k, slot) in acc.iter_mut().enumerate() {
            *slot += w * f64::binomial(n, k) * a.powi((n - k) as i32) * b.powi(k as i32);
        }
    }
    f.coeffs().iter().zip(acc).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `max |M − Σ w_k v_k v_kᵀ|` over entries.
pub fn quadratic_residual<S: Scalar>(m: &[Vec<S>], terms: &[(S, Vec<S>)]) -> Result<S> {
    let n = m.len();
    let mut worst = S::zero();
    for i in 0..n {
        for j in 0..n {
            let mut e = m[i][j].clone();
            for (w, v) in terms {
                if v.len() != n {
                    return Err(Error::ShapeMismatch(format!("form of length {} for n = {n}", v.len())));
                }
                e = e - w.clone() * v[i].clone() * v[j].clone();
            }
            let e = e.abs();
            if e > worst {
                worst = e;
            }
        }
    }
    Ok(worst)
}

/// Sample `f` at `samples` jittered angles on the projective circle and
/// return the most negative point below `-1e-12 ‖f‖∞`, if any.
pub fn sample_witness_check(f: &BinaryForm<f64>, samples: usize, seed: u64) -> Option<Witness<f64>> {
    let threshold = -1e-12 * f.max_abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Witness<f64>> = None;
    for i in 0..samples {
        let jitter: f64 = rng.random();
        let theta = PI * (i as f64 + jitter) / samples as f64;
        let (y, x) = theta.sin_cos();
        let value = f.evaluate(&x, &y);
        if value < threshold && best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(Witness { x, y, value });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residuals() {
        let f = BinaryForm::<f64>::from_i64s(&[1, 0, 2, 0, 1]);
        let g = BinaryForm::<f64>::from_i64s(&[1, 0, -1]);
        let h = BinaryForm::<f64>::from_i64s(&[0, 2, 0]);
        assert_eq!(two_square_residual(&f, &g, &h).unwrap(), 0.0);
        let f = BinaryForm::<f64>::from_i64s(&[1, 0, 0, 0, 1]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let nodes = [(1.0, [1.0, 0.0]), (1.0, [0.0, 1.0])];
        assert_eq!(power_sum_residual(&f, &nodes), 0.0);
        let r = power_sum_residual(&f, &[(2.0, [s, s])]);
        assert!(r > 0.4);
    }

    #[test]
    fn quadratic_residual_exact() {
        use crate::scalar::Rational;
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]];
        let terms = vec![(q(2, 1), vec![q(1, 1), q(1, 2)]), (q(3, 2), vec![q(0, 1), q(1, 1)])];
        assert_eq!(quadratic_residual(&m, &terms).unwrap(), q(0, 1));
    }

    #[test]
    fn sampling_finds_negative_values() {
        let f = BinaryForm::<f64>::from_i64s(&[1, 0, 0, 0, -1]);
        let w = sample_witness_check(&f, 100, 7).unwrap();
        assert!(w.value < 0.0);
        assert!((f.evaluate(&w.x, &w.y) - w.value).abs() == 0.0);
        let g = BinaryForm::<f64>::from_i64s(&[1, 0, 2, 0, 1]);
        assert!(sample_witness_check(&g, 100, 7).is_none());
    }
}
