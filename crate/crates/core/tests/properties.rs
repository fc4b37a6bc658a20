use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use siegel_core::fixtures::{self, FixtureKind};
use siegel_core::fuchsian_detector::{
    block_pattern_bound, certify, detect, detect_detailed, diagonal_from_traces, diagonalizing_conjugator,
    find_real_loxodromic, word_ball, GroupPresentation, Phase, Verdict,
};
use siegel_core::geodesic_submanifolds::{block_defect, lagrangian_contains, push_lagrangian, standard_lagrangian};
use siegel_core::hermitian_space::{bergman_distance, classify_point};
use siegel_core::isometries::{classify, validate, DEFAULT_EIGEN_TOL, DEFAULT_GROUP_TOL};
use siegel_core::projective_invariants::kr_cross_ratio;
use siegel_core::{GroupElement, PointClass, Tolerances};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn presentation(gens: Vec<(String, GroupElement)>) -> GroupPresentation {
    GroupPresentation::new(gens, DEFAULT_GROUP_TOL).unwrap()
}

fn kind_of(k: u8) -> FixtureKind {
    match k % 3 {
        0 => FixtureKind::Real,
        1 => FixtureKind::Line,
        _ => FixtureKind::NearMiss,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_stay_in_group(seed in any::<u64>()) {
        let g = fixtures::random_fixture_product(&mut rng(seed), 8);
        prop_assert!(validate(*g.matrix(), DEFAULT_GROUP_TOL).is_ok());
    }

    #[test]
    fn action_preserves_point_class(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = fixtures::random_element(&mut r);
        let inside = g.apply(&fixtures::random_interior_point(&mut r));
        prop_assert_eq!(classify_point(inside.representative(), 1e-9).unwrap(), PointClass::Interior);
        let edge = g.apply(&fixtures::random_boundary_point(&mut r));
        prop_assert_eq!(classify_point(edge.representative(), 1e-9).unwrap(), PointClass::Boundary);
    }

    #[test]
    fn bergman_distance_is_symmetric_and_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = fixtures::random_interior_point(&mut r);
        let q = fixtures::random_interior_point(&mut r);
        let g = fixtures::random_element(&mut r);
        let d = bergman_distance(&p, &q).unwrap();
        prop_assert!((d - bergman_distance(&q, &p).unwrap()).abs() <= 1e-12);
        prop_assert!((d - bergman_distance(&g.apply(&p), &g.apply(&q)).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn cross_ratio_is_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps: Vec<_> = (0..4).map(|_| fixtures::random_boundary_point(&mut r)).collect();
        let g = fixtures::random_element(&mut r);
        let x = kr_cross_ratio(&ps[0], &ps[1], &ps[2], &ps[3]).unwrap();
        let moved: Vec<_> = ps.iter().map(|p| g.apply(p)).collect();
        let y = kr_cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]).unwrap();
        prop_assert!((x - y).norm() <= 1e-8 * x.norm().max(1.0));
    }

    #[test]
    fn classification_is_conjugation_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = fixtures::random_fixture_product(&mut r, 4);
        let q = fixtures::random_element(&mut r);
        prop_assert_eq!(classify(&g.conjugate(&q), DEFAULT_EIGEN_TOL), classify(&g, DEFAULT_EIGEN_TOL));
    }

    #[test]
    fn detector_is_conjugation_equivariant(seed in any::<u64>(), k in 0u8..3) {
        let mut r = rng(seed);
        let (gens, _) = fixtures::fixture_generators(&mut r, kind_of(k), 1, 1e-3);
        let p = presentation(gens);
        let q = fixtures::random_element(&mut r);
        let tol = Tolerances::default();
        let v = detect(&p, 3, &tol);
        let w = detect(&p.conjugated(&q), 3, &tol);
        prop_assert_eq!(v.kind(), w.kind());
    }

    #[test]
    fn witnesses_re_evaluate(seed in any::<u64>(), log_delta in -6.0f64..-1.0) {
        let mut r = rng(seed);
        let (mut gens, q) = fixtures::fixture_generators(&mut r, FixtureKind::NearMiss, 1, 10f64.powf(log_delta));
        if seed % 2 == 0 {
            gens.push(("E".into(), fixtures::elliptic_witness().conjugate(&q)));
        }
        let p = presentation(gens);
        let tol = Tolerances::default();
        match detect(&p, 3, &tol) {
            Verdict::NotFuchsian { witness, imag_trace } => {
                let im = witness.evaluate(&p).trace().im;
                prop_assert!(im.abs() > tol.trace);
                prop_assert!((im - imag_trace).abs() <= 1e-9 * im.abs().max(1.0));
            }
            v => prop_assert!(!v.is_positive(), "near-miss certified: {:?}", v),
        }
    }

    #[test]
    fn positive_verdicts_recertify(seed in any::<u64>(), k in 0u8..2) {
        let (gens, _) = fixtures::fixture_generators(&mut rng(seed), kind_of(k), 2, 0.0);
        let p = presentation(gens);
        let v = detect(&p, 3, &Tolerances::default());
        prop_assert!(v.is_positive());
        prop_assert!(certify(&v, &p, 1e-8).is_ok());
    }

    #[test]
    fn r_fuchsian_certificate_gives_invariant_plane(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (gens, _) = fixtures::fixture_generators(&mut r, FixtureKind::Real, 1, 0.0);
        let p = presentation(gens);
        let Verdict::RFuchsian { conjugator, .. } = detect(&p, 3, &Tolerances::default()) else {
            return Err(TestCaseError::fail("expected an R-Fuchsian verdict"));
        };
        let plane = push_lagrangian(&conjugator, &standard_lagrangian());
        for _ in 0..100 {
            let x = if r.gen_bool(0.5) {
                fixtures::random_real_interior_point(&mut r)
            } else {
                fixtures::random_real_boundary_point(&mut r)
            };
            let x = conjugator.apply(&x);
            prop_assert!(lagrangian_contains(&plane, &x, 1e-8));
            for g in p.elements() {
                prop_assert!(lagrangian_contains(&plane, &g.apply(&x), 1e-8));
            }
        }
    }

    /// Words in `diag(t, 1, 1/t)`, vertical translations, the swap, real
    /// horizontal translations and torus elements. The first three keep `a, j`
    /// real and `c, g` imaginary; the others usually break that. Whenever the
    /// hypotheses hold, the off-diagonal entries must vanish.
    #[test]
    fn normalized_diagonals_are_real(seed in any::<u64>(), k in 0u8..2) {
        // Real traces of B, AB and A⁻¹B pin down a real diagonal for B once A is diag(t, 1, 1/t).
        let (gens, _) = fixtures::fixture_generators(&mut rng(seed), kind_of(k), 1, 0.0);
        let p = presentation(gens);
        let lox = find_real_loxodromic(&p, 2, 1e-8).unwrap();
        let q = diagonalizing_conjugator(&lox.element, 1e-8).unwrap();
        let a = lox.element.conjugate(&q);
        for (_, w) in word_ball(&p, 2) {
            let b = w.conjugate(&q);
            let d = diagonal_from_traces(lox.t, (a * b).trace(), (a.inverse() * b).trace(), b.trace()).unwrap();
            let scale = b.matrix().iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
            for (i, z) in d.iter().enumerate() {
                prop_assert!(z.im.abs() <= 1e-7 * scale, "{:?}", d);
                prop_assert!((z - b.entry(i, i)).norm() <= 1e-7 * scale);
            }
        }
    }

    #[test]
    fn case_two_hypotheses_force_block_form(letters in prop::collection::vec((0u8..5, -2.0f64..2.0), 1..7)) {
        let mut g = GroupElement::identity();
        for (kind, x) in letters {
            let step = match kind {
                0 => fixtures::diagonal_loxodromic(Complex64::new(x.exp(), 0.0)),
                1 => fixtures::heisenberg(Complex64::new(0.0, 0.0), x),
                2 => fixtures::swap(),
                3 => fixtures::heisenberg(Complex64::new(x / 4.0, 0.0), 0.0),
                _ => fixtures::torus_angle(x),
            };
            g = g * step;
        }
        let eps = 1e-9 * g.matrix().iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        let hypotheses = g.a().im.abs() <= eps
            && g.e().im.abs() <= eps
            && g.j().im.abs() <= eps
            && g.c().re.abs() <= eps
            && g.g().re.abs() <= eps
            && g.c().norm() > eps;
        let off = block_defect(&g);
        prop_assert!(off * off <= block_pattern_bound(&g) + 1e-12 * eps.max(1.0));
        if hypotheses {
            prop_assert!(off * off <= 10.0 * eps * (g.a().norm() + g.c().norm() + g.g().norm() + g.j().norm()) + 1e-20);
        }
    }
}

#[test]
fn dichotomy_recorded_in_derivation() {
    let tol = Tolerances::default();
    for (kind, phase) in [(FixtureKind::Real, Phase::RealC), (FixtureKind::Line, Phase::ImaginaryC)] {
        let (gens, _) = fixtures::fixture_generators(&mut rng(9), kind, 0, 0.0);
        let d = detect_detailed(&presentation(gens), 3, &tol, 2);
        assert_eq!(d.derivation.phase, Some(phase));
        assert!(d.derivation.loxodromic.is_some());
    }
}
