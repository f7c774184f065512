//! Dense univariate polynomials over the rationals.

use num_traits::{One, Signed, Zero};

use crate::scalar::{rational_from_u, Rational};

/// Ascending coefficients, trimmed so the last entry is nonzero.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self { c }
    }

    pub fn constant(v: Rational) -> Self {
        Self::new(vec![v])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational_from_u(k))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.c.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.c.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.c.get(k).cloned().unwrap_or_else(Rational::zero);
                    let b = other.c.get(k).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lc = divisor.leading();
        let mut rem = self.c.clone();
        if rem.len() < divisor.c.len() {
            return (Self::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let coef = &rem[k + dd] / &lc;
            if !coef.is_zero() {
                for (j, d) in divisor.c.iter().enumerate() {
                    rem[k + j] -= &coef * d;
                }
            }
            quot[k] = coef;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: monic `(g_i, i)` with `g_i` square-free
    /// and pairwise coprime, such that `self = lc · Π g_i^i`.
    pub fn squarefree(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let p = self.monic();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.exact_div(&a0);
        let c = dp.exact_div(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let nb = b.exact_div(&a);
            let nc = d.exact_div(&a);
            d = nc.sub(&nb.derivative());
            b = nb;
            if a.degree() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Sturm sequence `p, p', -rem(...)`, each term scaled by a positive
    /// constant to keep coefficients small.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.normalized(), self.derivative().normalized()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()).normalized());
        }
        seq
    }

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let s = self.leading().abs();
        Self::new(self.c.iter().map(|c| c / &s).collect())
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        let at_minus_inf = sign_changes(seq.iter().map(|p| {
            let s = p.leading().signum();
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }));
        let at_plus_inf = sign_changes(seq.iter().map(|p| p.leading().signum()));
        at_minus_inf - at_plus_inf
    }

    /// Isolating intervals `(lo, hi]` for the distinct real roots, sorted.
    /// A root found exactly at a bisection point is reported as `[r, r]`.
    pub fn isolate_real_roots(&self) -> Vec<RootInterval> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let seq = self.sturm_sequence();
        let bound = self.cauchy_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let n = count_in(&seq, &lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(RootInterval { lo, hi });
                continue;
            }
            let mid = (&lo + &hi) / rational_from_u(2);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.hi.cmp(&b.hi));
        // Collapse exactly-located rational roots to points.
        for iv in out.iter_mut() {
            if self.eval(&iv.hi).is_zero() {
                iv.lo = iv.hi.clone();
            }
        }
        out
    }

    /// Halve an isolating interval, keeping the half with the root.
    pub fn bisect(&self, iv: &RootInterval) -> RootInterval {
        if iv.lo == iv.hi {
            return iv.clone();
        }
        let seq = self.sturm_sequence();
        let mid = (&iv.lo + &iv.hi) / rational_from_u(2);
        if self.eval(&mid).is_zero() {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if count_in(&seq, &iv.lo, &mid) == 1 {
            RootInterval { lo: iv.lo.clone(), hi: mid }
        } else {
            RootInterval { lo: mid, hi: iv.hi.clone() }
        }
    }

    /// Rational points strictly separating the real roots: one below the
    /// smallest, one between each consecutive pair, one above the largest.
    /// With no real roots, returns `[0]`.
    pub fn separating_points(&self) -> Vec<Rational> {
        let mut ivs = self.isolate_real_roots();
        if ivs.is_empty() {
            return vec![Rational::zero()];
        }
        for k in 0..ivs.len() - 1 {
            let mut turn = 0;
            while ivs[k].hi >= ivs[k + 1].lo {
                if turn % 2 == 0 {
                    ivs[k] = self.bisect(&ivs[k]);
                } else {
                    ivs[k + 1] = self.bisect(&ivs[k + 1]);
                }
                turn += 1;
            }
        }
        let one = Rational::one();
        let mut pts = vec![&ivs[0].lo - &one];
        for w in ivs.windows(2) {
            pts.push((&w[0].hi + &w[1].lo) / rational_from_u(2));
        }
        pts.push(&ivs[ivs.len() - 1].hi + &one);
        pts
    }

    /// `1 + max |c_k / c_n|`.
    fn cauchy_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }
}

/// Root location `lo < r ≤ hi`, or `r = lo = hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

fn sign_changes(signs: impl Iterator<Item = Rational>) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for s in signs {
        if s.is_zero() {
            continue;
        }
        let pos = s.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

fn changes_at(seq: &[UPoly], t: &Rational) -> usize {
    sign_changes(seq.iter().map(|p| p.eval(t).signum()))
}

/// Distinct roots in `(lo, hi]`.
fn count_in(seq: &[UPoly], lo: &Rational, hi: &Rational) -> usize {
    changes_at(seq, lo) - changes_at(seq, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn division_and_gcd() {
        // (t^2 - 1) / (t - 1) = t + 1
        let (quot, rem) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(quot, p(&[1, 1]));
        assert!(rem.is_zero());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 2, 1])), p(&[1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 1])), p(&[1]));
    }

    #[test]
    fn yun_multiplicities() {
        // (t-1)^3 (t+2)^2 (t^2+1)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[-1, 1]));
        let f = f.mul(&p(&[2, 1])).mul(&p(&[2, 1])).mul(&p(&[1, 0, 1])).scale(&q(-3, 1));
        let sf = f.squarefree();
        assert_eq!(sf, vec![(p(&[1, 0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]);
        assert!(p(&[5]).squarefree().is_empty());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(p(&[1, 0, 1]).count_real_roots(), 0);
        assert_eq!(p(&[-1, 0, 1]).count_real_roots(), 2);
        assert_eq!(p(&[0, 1]).count_real_roots(), 1);
        // Distinct roots only: (t-1)^2 (t+1)
        assert_eq!(p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[1, 1])).count_real_roots(), 2);
        // t^5 - t = t (t^2-1)(t^2+1)
        assert_eq!(p(&[0, -1, 0, 0, 0, 1]).count_real_roots(), 3);
    }

    #[test]
    fn isolation_and_separation() {
        // roots -2, 1/3, 1/2, 5
        let f = p(&[2, 1]).mul(&p(&[-1, 3])).mul(&p(&[-1, 2])).mul(&p(&[-5, 1]));
        let ivs = f.isolate_real_roots();
        assert_eq!(ivs.len(), 4);
        let roots = [q(-2, 1), q(1, 3), q(1, 2), q(5, 1)];
        for (iv, r) in ivs.iter().zip(&roots) {
            assert!(iv.lo == iv.hi && &iv.lo == r || (&iv.lo < r && r <= &iv.hi));
        }
        let sep = f.separating_points();
        assert_eq!(sep.len(), 5);
        for (k, r) in roots.iter().enumerate() {
            assert!(&sep[k] < r && r < &sep[k + 1]);
        }
        for s in &sep {
            assert!(!f.eval(s).is_zero());
        }
        assert_eq!(p(&[1, 0, 1]).separating_points(), vec![q(0, 1)]);
    }
}
