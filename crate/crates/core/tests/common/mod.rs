#![allow(dead_code)]

use hilbert_sos::form::BinaryForm;
use hilbert_sos::scalar::Rational;
use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n/d` with `|n| <= 6`, `1 <= d <= 4`.
pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.random_range(-6..=6), rng.random_range(1..=4))
}

pub fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.random_range(1..=8), rng.random_range(1..=4))
}

pub fn linear(a: Rational, b: Rational) -> BinaryForm<Rational> {
    BinaryForm::from_rationals(vec![a, b])
}

/// `(x - a y)^2 + b^2 y^2` with `b != 0`.
pub fn definite_quadratic(a: &Rational, b: &Rational) -> BinaryForm<Rational> {
    BinaryForm::from_rationals(vec![q(1, 1), -a * q(2, 1), a * a + b * b])
}

#[derive(Clone, Debug)]
pub struct NonnegativeSample {
    pub form: BinaryForm<Rational>,
    /// Finite real roots with their multiplicity in the form.
    pub real_roots: Vec<(Rational, usize)>,
    pub infinity_multiplicity: usize,
    /// Conjugate pairs `a ± i b` (b > 0) with multiplicity.
    pub pairs: Vec<(Rational, Rational, usize)>,
}

/// `c · ∏ (x - r y)^{2k} · y^{2k'} · ∏ ((x - a y)^2 + b^2 y^2)^m` of the given
/// even degree. `max_real_power` bounds `k`; `infinity` allows roots at `[1:0]`.
pub fn random_nonnegative(
    rng: &mut ChaCha8Rng,
    degree: usize,
    max_real_power: usize,
    max_pair_power: usize,
    infinity: bool,
) -> NonnegativeSample {
    assert!(degree % 2 == 0);
    let mut form = BinaryForm::from_rationals(vec![positive_rational(rng)]);
    let mut real_roots: Vec<(Rational, usize)> = Vec::new();
    let mut pairs: Vec<(Rational, Rational, usize)> = Vec::new();
    let mut infinity_multiplicity = 0;
    let mut left = degree;
    while left > 0 {
        let kind = rng.random_range(0..10);
        if kind < 3 {
            let k = rng.random_range(1..=max_real_power.min(left / 2));
            if infinity && rng.random_range(0..6) == 0 {
                form = form.multiply(&linear(q(0, 1), q(1, 1)).pow(2 * k));
                infinity_multiplicity += 2 * k;
            } else {
                let r = small_rational(rng);
                form = form.multiply(&linear(q(1, 1), -r.clone()).pow(2 * k));
                match real_roots.iter_mut().find(|(s, _)| *s == r) {
                    Some(e) => e.1 += 2 * k,
                    None => real_roots.push((r, 2 * k)),
                }
            }
            left -= 2 * k;
        } else {
            let m = rng.random_range(1..=max_pair_power.min(left / 2));
            let a = small_rational(rng);
            let b = positive_rational(rng);
            form = form.multiply(&definite_quadratic(&a, &b).pow(m));
            match pairs.iter_mut().find(|(s, t, _)| *s == a && *t == b) {
                Some(e) => e.2 += m,
                None => pairs.push((a, b, m)),
            }
            left -= 2 * m;
        }
    }
    NonnegativeSample { form, real_roots, infinity_multiplicity, pairs }
}

/// Product of `s` distinct definite quadratics: `s` simple conjugate pairs.
pub fn simple_pairs(rng: &mut ChaCha8Rng, s: usize) -> BinaryForm<Rational> {
    let mut seen: Vec<(Rational, Rational)> = Vec::new();
    let mut form = BinaryForm::from_rationals(vec![positive_rational(rng)]);
    while seen.len() < s {
        let a = small_rational(rng);
        let b = positive_rational(rng);
        if seen.contains(&(a.clone(), b.clone())) {
            continue;
        }
        form = form.multiply(&definite_quadratic(&a, &b));
        seen.push((a, b));
    }
    form
}

/// `Σ w_k (x + t_k y)^{2d}` with distinct `t_k`; returns the form and generators.
pub fn power_sum(rng: &mut ChaCha8Rng, d: usize, k: usize) -> (BinaryForm<Rational>, Vec<(Rational, Rational)>) {
    let mut nodes: Vec<Rational> = Vec::new();
    while nodes.len() < k {
        let t = q(rng.random_range(-8..=8), rng.random_range(1..=4));
        if !nodes.contains(&t) {
            nodes.push(t);
        }
    }
    let mut acc = BinaryForm::<Rational>::zero(2 * d);
    let mut gens = Vec::new();
    for t in nodes {
        let w = positive_rational(rng);
        let p = linear(q(1, 1), t.clone()).pow(2 * d).scale(&w);
        acc = acc.add(&p).unwrap();
        gens.push((w, t));
    }
    (acc, gens)
}

/// `Bᵗ B` for a random integer `r × n` matrix `B`.
pub fn gram(rng: &mut ChaCha8Rng, r: usize, n: usize) -> Vec<Vec<Rational>> {
    let b: Vec<Vec<Rational>> = (0..r).map(|_| (0..n).map(|_| small_rational(rng)).collect()).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..r).fold(q(0, 1), |acc, k| acc + &b[k][i] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Roots of an ascending real polynomial as companion-matrix eigenvalues.
pub fn companion_eigenvalues(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -c[n - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let schur = Schur::try_new(m, f64::EPSILON, 1000 * n).expect("companion Schur converges");
    schur.complex_eigenvalues().iter().cloned().collect()
}

/// Projective roots of a binary form given by `coeffs[k]` of `x^(n-k) y^k`:
/// roots at `[1:0]` are reported as `None`.
pub fn projective_roots(coeffs: &[f64]) -> Vec<Option<Complex64>> {
    let at_infinity = coeffs.iter().take_while(|v| **v == 0.0).count();
    let asc: Vec<f64> = coeffs[at_infinity..].iter().rev().cloned().collect();
    let mut out: Vec<Option<Complex64>> = vec![None; at_infinity];
    out.extend(companion_eigenvalues(&asc).into_iter().map(Some));
    out
}

pub fn max_abs(c: &[f64]) -> f64 {
    c.iter().fold(0.0, |m, v| m.max(v.abs()))
}
