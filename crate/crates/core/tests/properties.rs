mod common;

use common::*;
use hilbert_sos::apolarity::{apolar_pairing, apolarity_matrix, catalecticant, scaled_coefficients};
use hilbert_sos::binary_sos::{
    enumerate_two_square_decompositions, is_extreme_binary, is_nonnegative, length_binary, two_square_decomposition,
    NonnegativityStatus,
};
use hilbert_sos::export::{binary_certificate_json, binary_from_json, binary_json, verify_certificate};
use hilbert_sos::form::{AnyBinary, BinaryForm, QuadraticForm};
use hilbert_sos::linalg::bareiss_rank;
use hilbert_sos::parse::{parse_binary, ParseOptions};
use hilbert_sos::quad_sos::{orthonormal_decompose, quad_decompose, rotate_representation};
use hilbert_sos::realroots::{projective_complex_roots, real_root_count, squarefree_decomposition, RootClass, RootOptions};
use hilbert_sos::scalar::Rational;
use hilbert_sos::verify::{quadratic_residual, sample_witness_check, two_square_residual};
use hilbert_sos::waring::{prony_decompose, q_membership_and_length};
use nalgebra::DMatrix;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

fn exact_form(degree: usize) -> impl Strategy<Value = BinaryForm<Rational>> {
    prop::collection::vec((-6i64..=6, 1i64..=4), degree + 1)
        .prop_map(|c| BinaryForm::from_rationals(c.into_iter().map(|(n, d)| q(n, d)).collect()))
}

fn even_form() -> impl Strategy<Value = BinaryForm<Rational>> {
    (1usize..=5).prop_flat_map(|d| exact_form(2 * d))
}

fn nonzero(f: &BinaryForm<Rational>) -> bool {
    !f.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_evaluates_pointwise(f in exact_form(3), g in exact_form(4), x in -5i64..=5, y in -5i64..=5) {
        let (x, y) = (q(x, 1), q(y, 1));
        prop_assert_eq!(f.multiply(&g).evaluate(&x, &y), f.evaluate(&x, &y) * g.evaluate(&x, &y));
    }

    #[test]
    fn apolar_pairing_is_symmetric(f in exact_form(6), g in exact_form(6)) {
        prop_assert_eq!(apolar_pairing(&f, &g).unwrap(), apolar_pairing(&g, &f).unwrap());
    }

    #[test]
    fn middle_apolarity_map_is_catalecticant(f in even_form()) {
        let d = f.degree() / 2;
        prop_assert_eq!(apolarity_matrix(&f, d).unwrap(), catalecticant(&f).unwrap().entries().to_vec());
    }

    #[test]
    fn scaled_coefficients_round_trip(f in even_form()) {
        prop_assert_eq!(scaled_coefficients(&f).to_form(), f);
    }

    #[test]
    fn squarefree_parts_multiply_back(f in even_form().prop_filter("nonzero", nonzero)) {
        let sf = squarefree_decomposition(&f).unwrap();
        prop_assert_eq!(sf.reconstruct(), f);
        for (g, _) in &sf.factors {
            prop_assert_eq!(squarefree_decomposition(g).unwrap().factors.len(), 1);
        }
    }

    #[test]
    fn power_of_squarefree_is_one_factor(seed in any::<u64>(), m in 1usize..=4) {
        let mut r = rng(seed);
        let mut roots: Vec<Rational> = Vec::new();
        let k = r.random_range(1..=3);
        while roots.len() < k {
            let t = small_rational(&mut r);
            if !roots.contains(&t) {
                roots.push(t);
            }
        }
        let g = roots.iter().fold(BinaryForm::from_rationals(vec![q(1, 1)]), |acc, t| acc.multiply(&linear(q(1, 1), -t.clone())));
        let sf = squarefree_decomposition(&g.pow(m)).unwrap();
        prop_assert_eq!(sf.factors, vec![(g, m)]);
        prop_assert!(sf.unit.is_one());
    }

    #[test]
    fn roots_rebuild_form_and_close_under_conjugation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let degree = 2 * r.random_range(1..=5);
        let s = random_nonnegative(&mut r, degree, 2, 2, true);
        for f in [s.form.to_f64()] {
            let rm = projective_complex_roots(&f, &RootOptions::default()).unwrap();
            let rebuilt = rm.reconstruct();
            let scale = f.max_abs();
            for (a, b) in rebuilt.iter().zip(f.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-6 * scale, "{a} vs {b}");
            }
            let ups: Vec<_> = rm.roots.iter().filter(|x| x.class == RootClass::Upper).map(|x| (x.point.alpha(), x.multiplicity)).collect();
            let lows: Vec<_> = rm.roots.iter().filter(|x| x.class == RootClass::Lower).map(|x| (x.point.alpha().conj(), x.multiplicity)).collect();
            prop_assert_eq!(ups.len(), lows.len());
            for ((u, m), (l, n)) in ups.iter().zip(&lows) {
                prop_assert_eq!(m, n);
                prop_assert!((u - l).norm() <= 1e-9 * (1.0 + u.norm()));
            }
        }
        let rm = projective_complex_roots(&s.form, &RootOptions::default()).unwrap();
        prop_assert_eq!(rm.degree(), degree);
        prop_assert_eq!(
            real_root_count(&s.form).unwrap(),
            s.real_roots.len() + usize::from(s.infinity_multiplicity > 0)
        );
        prop_assert_eq!(rm.real().count(), real_root_count(&s.form).unwrap());
    }

    #[test]
    fn constructed_nonnegative_forms_are_recognized(seed in any::<u64>()) {
        let mut r = rng(seed);
        let degree = 2 * r.random_range(1..=6);
        let s = random_nonnegative(&mut r, degree, 3, 2, true);
        let opts = RootOptions::default();
        let v = is_nonnegative(&s.form, &opts).unwrap();
        prop_assert_eq!(v.status, NonnegativityStatus::Nonnegative);
        prop_assert!(v.certified);
        prop_assert!(sample_witness_check(&s.form.to_f64(), 360, seed).is_none());

        let neg = s.form.multiply(&BinaryForm::from_i64s(&[1, 0, -1]));
        let v = is_nonnegative(&neg, &opts).unwrap();
        prop_assert_eq!(v.status, NonnegativityStatus::NotNonnegative);
        let w = v.witness.unwrap();
        prop_assert!(neg.evaluate(&w.x, &w.y) < Rational::zero());
        prop_assert_eq!(neg.evaluate(&w.x, &w.y), w.value);
    }

    #[test]
    fn two_squares_rebuild_and_are_real_rooted(seed in any::<u64>(), float in any::<bool>()) {
        let mut r = rng(seed);
        let degree = 2 * r.random_range(1..=6);
        let s = random_nonnegative(&mut r, degree, 2, 2, true);
        let opts = RootOptions::default();
        let f = s.form.to_f64();
        let cert = if float { two_square_decomposition(&f, &opts) } else { two_square_decomposition(&s.form, &opts) }.unwrap();
        let residual = two_square_residual(&f, &cert.g, &cert.h).unwrap();
        prop_assert!(residual <= 1e-8 * f.max_abs());
        prop_assert!(residual <= cert.residual);
        prop_assert!(cert.g_report.real_rooted && cert.h_report.real_rooted);
        if !float {
            prop_assert!(cert.certified);
        }
    }

    #[test]
    fn length_is_one_exactly_for_extreme_forms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let degree = 2 * r.random_range(1..=5);
        let s = random_nonnegative(&mut r, degree, 2, 1, true);
        let opts = RootOptions::default();
        let len = length_binary(&s.form, &opts).unwrap();
        prop_assert!(len == 1 || len == 2);
        prop_assert_eq!(len == 1, is_extreme_binary(&s.form, &opts).unwrap());
        prop_assert_eq!(len == 1, s.pairs.is_empty());
        prop_assert_eq!(length_binary(&BinaryForm::<Rational>::zero(degree), &opts).unwrap(), 0);
    }

    #[test]
    fn enumeration_counts_conjugation_orbits(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pairs = r.random_range(1..=4);
        let f = simple_pairs(&mut r, pairs);
        let certs = enumerate_two_square_decompositions(&f, 4096, &RootOptions::default()).unwrap();
        prop_assert_eq!(certs.len(), 1 << (pairs - 1));
        let ff = f.to_f64();
        for c in &certs {
            prop_assert!(two_square_residual(&ff, &c.g, &c.h).unwrap() <= 1e-8 * ff.max_abs());
        }
    }

    #[test]
    fn quadratic_decomposition_has_rank_many_exact_terms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=7);
        let k = r.random_range(0..=n);
        let m = gram(&mut r, k, n);
        let qf = QuadraticForm::new(m.clone()).unwrap();
        let ws = quad_decompose(&qf).unwrap();
        prop_assert_eq!(ws.len(), bareiss_rank(&m));
        prop_assert!(quadratic_residual(&m, &ws.terms).unwrap().is_zero());
    }

    #[test]
    fn rank_one_gives_one_square(v in prop::collection::vec((-6i64..=6, 1i64..=4), 1..=6)) {
        let v: Vec<Rational> = v.into_iter().map(|(a, b)| q(a, b)).collect();
        prop_assume!(v.iter().any(|c| !c.is_zero()));
        let m: Vec<Vec<Rational>> = v.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        let ws = quad_decompose(&QuadraticForm::new(m).unwrap()).unwrap();
        prop_assert_eq!(ws.len(), 1);
    }

    #[test]
    fn rotations_preserve_the_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let c = r.random_range(0.5..4.0);
        let qf = QuadraticForm::new((0..n).map(|i| (0..n).map(|j| if i == j { c } else { 0.0 }).collect()).collect()).unwrap();
        let rep = orthonormal_decompose(&qf).unwrap();
        prop_assert_eq!(rep.len(), n);
        let a = DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0));
        let qm = a.qr().q();
        let rot: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| qm[(i, j)]).collect()).collect();
        let rotated = rotate_representation(&rep, &rot).unwrap();
        let back = rotated.matrix();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { c } else { 0.0 };
                prop_assert!((back[i][j] - want).abs() <= 1e-10 * c);
            }
        }
    }

    #[test]
    fn identity_has_length_n(n in 1usize..=12) {
        let ws = quad_decompose(&QuadraticForm::<Rational>::identity(n)).unwrap();
        prop_assert_eq!(ws.len(), n);
    }

    #[test]
    fn few_powers_are_recovered(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.random_range(1..=5);
        let k = r.random_range(1..=d);
        let (f, _) = power_sum(&mut r, d, k);
        let opts = RootOptions::default();
        let qm = q_membership_and_length(&f, &opts).unwrap();
        prop_assert!(qm.member);
        prop_assert_eq!(qm.length, Some(k));
        prop_assert!(k >= length_binary(&f, &opts).unwrap());
        let dec = prony_decompose(&f, &opts).unwrap();
        prop_assert_eq!(dec.nodes.len(), k);
        prop_assert!(dec.nodes.iter().all(|(w, _)| *w > 0.0));
        prop_assert!(dec.residual <= 1e-8 * f.max_abs());
    }

    #[test]
    fn display_parses_back(f in even_form().prop_filter("nonzero", nonzero)) {
        let parsed = parse_binary(&f.to_string(), &ParseOptions::default()).unwrap();
        prop_assert_eq!(parsed, AnyBinary::Exact(f));
    }

    #[test]
    fn binary_json_round_trips(f in even_form(), float in any::<bool>()) {
        let any = if float { AnyBinary::Float(f.to_f64()) } else { AnyBinary::Exact(f) };
        prop_assert_eq!(binary_from_json(&binary_json(&any)).unwrap(), any);
    }

    #[test]
    fn written_certificates_verify(seed in any::<u64>()) {
        let mut r = rng(seed);
        let degree = 2 * r.random_range(1..=5);
        let s = random_nonnegative(&mut r, degree, 2, 2, false);
        let cert = two_square_decomposition(&s.form, &RootOptions::default()).unwrap();
        let json = binary_certificate_json(&AnyBinary::Exact(s.form), &cert);
        let report = verify_certificate(&json).unwrap();
        prop_assert!(report.ok);
        prop_assert!(report.recomputed <= report.recorded);
    }
}

#[test]
fn catalecticant_of_sum_of_two_squares_has_cofactor_determinant() {
    let f = BinaryForm::<Rational>::from_i64s(&[1, 0, 2, 0, 1]);
    let h = catalecticant(&f).unwrap();
    let m = h.entries();
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    assert_eq!(det, q(8, 27));
    assert_eq!(h.rank(), 3);
}
