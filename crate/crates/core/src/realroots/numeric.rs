//! Floating-point complex root finding for real polynomials.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Aberth iteration cap.
pub const MAX_ABERTH_ITERATIONS: usize = 60;
/// Stop when the largest Aberth correction is below this times the root scale.
pub const ABERTH_STOP: f64 = 1e-14;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AberthReport {
    pub iterations: usize,
    pub max_correction: f64,
    /// Largest `|p(z)| / Σ|c_k||z|^k` over the returned roots.
    pub backward_error: f64,
    pub converged: bool,
}

impl AberthReport {
    pub fn merge(&mut self, other: &AberthReport) {
        self.iterations = self.iterations.max(other.iterations);
        self.max_correction = self.max_correction.max(other.max_correction);
        self.backward_error = self.backward_error.max(other.backward_error);
        self.converged &= other.converged;
    }
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k)
}

fn abs_horner(c: &[f64], r: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * r + k.abs())
}

pub(crate) fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &v)| k as f64 * v).collect()
}

/// Eigenvalues of the companion matrix of the monic-normalized polynomial,
/// or `None` if the Schur iteration does not converge.
fn companion_roots(c: &[f64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let lc = c[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lc;
    }
    let schur = Schur::try_new(m, f64::EPSILON, 200 * n)?;
    let eig: Vec<Complex64> = schur.complex_eigenvalues().iter().cloned().collect();
    eig.iter().all(|v| v.re.is_finite() && v.im.is_finite()).then_some(eig)
}

/// All complex roots of `Σ c[k] t^k` (ascending coefficients, nonzero leading
/// coefficient), counted with multiplicity.
pub fn polynomial_roots(c: &[f64]) -> Result<(Vec<Complex64>, AberthReport)> {
    if c.len() < 2 || c[c.len() - 1] == 0.0 {
        return Err(Error::RootFinding("polynomial must have positive degree".into()));
    }
    if c.len() == 2 {
        let z = Complex64::new(-c[0] / c[1], 0.0);
        let report = AberthReport { converged: true, ..Default::default() };
        return Ok((vec![z], report));
    }
    let mut z = companion_roots(c).unwrap_or_else(|| {
        // Points on a circle of Cauchy-bound radius.
        let n = c.len() - 1;
        let radius = 1.0 + c[..n].iter().map(|k| (k / c[n]).abs()).fold(0.0, f64::max);
        (0..n)
            .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    });
    let report = aberth(c, &mut z);
    Ok((z, report))
}

/// In-place Aberth–Ehrlich refinement.
pub fn aberth(c: &[f64], z: &mut [Complex64]) -> AberthReport {
    let dc = derivative(c);
    let mut report = AberthReport::default();
    for it in 0..MAX_ABERTH_ITERATIONS {
        let scale = z.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let mut max_corr: f64 = 0.0;
        for k in 0..z.len() {
            let pk = horner(c, z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let ratio = pk / horner(&dc, z[k]);
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..z.len() {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[k] -= w;
                max_corr = max_corr.max(w.norm());
            }
        }
        report.iterations = it + 1;
        report.max_correction = max_corr;
        if max_corr <= ABERTH_STOP * scale {
            report.converged = true;
            break;
        }
    }
    report.backward_error = z
        .iter()
        .map(|&v| {
            let denom = abs_horner(c, v.norm());
            if denom == 0.0 {
                0.0
            } else {
                horner(c, v).norm() / denom
            }
        })
        .fold(0.0, f64::max);
    report
}

/// A group of numerically coincident roots.
#[derive(Clone, Debug)]
pub struct Cluster {
    pub center: Complex64,
    pub size: usize,
}

/// Single-linkage clustering with absolute radius `delta`.
pub fn cluster_roots(roots: &[Complex64], delta: f64) -> Vec<Cluster> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= delta {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += roots[i];
                g.2 += 1;
            }
            None => groups.push((r, roots[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, size)| Cluster { center: sum / size as f64, size })
        .collect()
}

/// Newton polish of a multiplicity-`m` root on the `(m-1)`-th derivative,
/// where it is a simple root.
/// Perturbation radius of an `m`-fold root at `c`:
/// `(eps · Σ|a_k||c|^k / |p^(m)(c)/m!|)^(1/m)`.
fn multiple_root_radius(c: &[f64], z: Complex64, m: usize) -> f64 {
    let r = z.norm();
    let size: f64 = c.iter().enumerate().map(|(k, a)| a.abs() * r.powi(k as i32)).sum();
    let mut taylor = Complex64::new(0.0, 0.0);
    let mut binom = 1.0f64;
    for k in m..c.len() {
        if k > m {
            binom = binom * k as f64 / (k - m) as f64;
        }
        taylor += c[k] * binom * z.powi((k - m) as i32);
    }
    let t = taylor.norm();
    if t == 0.0 {
        return f64::INFINITY;
    }
    (f64::EPSILON * size / t).powf(1.0 / m as f64)
}

/// Clusters at radius `delta`, then greedily merges groups of nearby roots
/// that sit within the spread expected of a multiple root of that order.
pub fn cluster_roots_adaptive(c: &[f64], roots: &[Complex64], delta: f64) -> Vec<Cluster> {
    const SLACK: f64 = 8.0;
    let base = cluster_roots(roots, delta);
    let mut used = vec![false; base.len()];
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..base.len()).collect();
    order.sort_by(|&a, &b| base[b].size.cmp(&base[a].size));
    for &i in &order {
        if used[i] {
            continue;
        }
        let mut near: Vec<usize> = (0..base.len()).filter(|&j| !used[j] && j != i).collect();
        near.sort_by(|&a, &b| {
            (base[a].center - base[i].center).norm().total_cmp(&(base[b].center - base[i].center).norm())
        });
        let mut best: Vec<usize> = vec![i];
        let mut members = vec![i];
        for &j in &near {
            members.push(j);
            let size: usize = members.iter().map(|&k| base[k].size).sum();
            let center = members.iter().fold(Complex64::new(0.0, 0.0), |acc, &k| acc + base[k].center * base[k].size as f64)
                / size as f64;
            let radius = delta.max(SLACK * multiple_root_radius(c, center, size));
            let inside = members.iter().all(|&k| (base[k].center - center).norm() <= radius);
            let next_outside = near
                .iter()
                .filter(|k| !members.contains(k))
                .all(|&k| (base[k].center - center).norm() > radius);
            if inside && next_outside {
                best = members.clone();
            }
            if !inside {
                break;
            }
        }
        let size: usize = best.iter().map(|&k| base[k].size).sum();
        let center = best.iter().fold(Complex64::new(0.0, 0.0), |acc, &k| acc + base[k].center * base[k].size as f64)
            / size as f64;
        for &k in &best {
            used[k] = true;
        }
        out.push(Cluster { center, size });
    }
    out
}

pub fn refine_multiple_root(c: &[f64], z: Complex64, m: usize) -> Complex64 {
    if m < 2 {
        return z;
    }
    let mut dm1 = c.to_vec();
    for _ in 0..m - 1 {
        dm1 = derivative(&dm1);
    }
    if dm1.len() < 2 {
        return z;
    }
    let dm = derivative(&dm1);
    let mut best = z;
    let mut best_val = horner(&dm1, z).norm();
    let mut cur = z;
    for _ in 0..50 {
        let step = horner(&dm1, cur) / horner(&dm, cur);
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        cur -= step;
        let val = horner(&dm1, cur).norm();
        if val < best_val {
            best = cur;
            best_val = val;
        }
        if val == 0.0 || step.norm() <= f64::EPSILON * cur.norm() {
            break;
        }
    }
    best
}
