use gaudin_lab::combinatorics::Partition;
use gaudin_lab::poly::Poly;
use gaudin_lab::quasiexp::{
    dual_space, limit_errors, poly_limit_family, verify_dual_jacobi_trudi, verify_jacobi_trudi,
    verify_translation_identity, ExpSum, QuasiExpSpace,
};
use gaudin_lab::scalar::{int, rat, Rational};
use gaudin_lab::suites::{random_polynomial_space, random_quasi_space};
use gaudin_lab::symfunc::schur_eval;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn poly_space() -> impl Strategy<Value = QuasiExpSpace> {
    (1usize..=3, any::<u64>()).prop_map(|(n, seed)| random_polynomial_space(&mut ChaCha8Rng::seed_from_u64(seed), n, 3))
}

fn quasi_space() -> impl Strategy<Value = QuasiExpSpace> {
    (1usize..=3, any::<u64>()).prop_map(|(n, seed)| random_quasi_space(&mut ChaCha8Rng::seed_from_u64(seed), n, 2))
}

fn point() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn first_nonzero_point(v: &QuasiExpSpace, start: &Rational) -> Rational {
    let wr = v.minor_function(&Partition::empty());
    let mut t = start.clone();
    while wr.eval(&t).is_zero() {
        t += int(1);
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wronskian_degree_matches_prediction(v in poly_space()) {
        let predicted = v.predicted_wronskian_degree().unwrap();
        prop_assert_eq!(v.wronskian().degree(), Some(predicted));
    }

    #[test]
    fn jacobi_trudi_on_polynomial_spaces(v in poly_space(), t in point(), lambda in 0usize..7) {
        let lambda = Partition::up_to(3)[lambda].clone();
        let t = first_nonzero_point(&v, &t);
        prop_assert!(verify_jacobi_trudi(&v, &lambda, lambda.length() + 1, &t).unwrap().passed());
        prop_assert!(verify_dual_jacobi_trudi(&v, &lambda, lambda.first() + 1, &t).unwrap().passed());
    }

    #[test]
    fn jacobi_trudi_on_quasi_spaces(v in quasi_space(), t in point(), lambda in 0usize..7) {
        let lambda = Partition::up_to(3)[lambda].clone();
        let t = first_nonzero_point(&v, &t);
        prop_assert!(verify_jacobi_trudi(&v, &lambda, lambda.length().max(1), &t).unwrap().passed());
        prop_assert!(verify_dual_jacobi_trudi(&v, &lambda, lambda.first().max(1), &t).unwrap().passed());
    }

    #[test]
    fn translation_identity(v in poly_space(), t in point()) {
        for mu in Partition::up_to(2) {
            let r = verify_translation_identity(&v, &mu, &t, 6).unwrap();
            prop_assert!(r.passed(), "{}", r.summary());
        }
    }

    #[test]
    fn plucker_vector_is_covariant_under_translation(v in quasi_space(), s in point(), t in point()) {
        // Δ_λ(V(s))(t) = Δ_λ(V)(s + t)
        let shifted = v.translate(&s).plucker_vector(&t, 3);
        let direct = v.plucker_vector(&(&s + &t), 3);
        prop_assert_eq!(shifted, direct);
    }

    #[test]
    fn double_dual_is_the_space(v in poly_space()) {
        let m = 6;
        let d = dual_space(&v, m).unwrap();
        prop_assert_eq!(d.dim(), m - v.dim());
        let dd = dual_space(&d, m).unwrap();
        prop_assert!(dd.plucker_vector(&int(0), 8).projectively_equal(&v.plucker_vector(&int(0), 8)));
    }

    #[test]
    fn pure_exponentials_give_schur_values(h in prop::collection::btree_set(-4i64..=4, 1..=3), t in point()) {
        let h: Vec<Rational> = h.into_iter().map(int).collect();
        let v = QuasiExpSpace::pure_exponentials(&h).unwrap();
        let p = v.plucker_vector(&t, 4);
        let empty = p.get(&Partition::empty()).unwrap().clone();
        for (lambda, value) in p.entries() {
            let expected = empty.clone() * ExpSum::rational(schur_eval(lambda, &h));
            prop_assert_eq!(value, &expected);
        }
    }
}

#[test]
fn limit_family_converges() {
    let v =
        QuasiExpSpace::from_exp_polys(&[(int(0), Poly::new(vec![int(1)])), (int(1), Poly::new(vec![int(0), int(1)]))])
            .unwrap();
    let errs = limit_errors(&v, &[4, 16, 64], &int(0), 3).unwrap();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    let v4 = poly_limit_family(&v, 4).unwrap();
    assert!(v4.is_polynomial());
    // u(1 + u/4)^4 has degree 5
    assert_eq!(v4.basis()[1].as_rational_polynomial().unwrap().degree(), Some(5));
}
