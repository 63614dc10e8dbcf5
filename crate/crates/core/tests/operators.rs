use gaudin_lab::combinatorics::{alpha_element, Partition, Permutation};
use gaudin_lab::gaudin::{
    build_beta, build_t_definitional, build_t_jacobi_trudi, build_t_partial_trace, GaudinInstance, OperatorPolynomial,
};
use gaudin_lab::scalar::{rat, Rational};
use gaudin_lab::spectral::{certify_psd_exact, Verdict};
use gaudin_lab::symfunc::{schur_dual_jacobi_trudi, schur_eval, schur_jacobi_trudi, schur_via_power_sums};
use gaudin_lab::tensor::TensorOperator;
use gaudin_lab::Execution;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn instance(max_dim: usize, max_n: usize) -> impl Strategy<Value = GaudinInstance> {
    (1..=max_dim, 1..=max_n).prop_flat_map(|(d, n)| {
        (prop::collection::vec(rational(), d), prop::collection::vec(rational(), n))
            .prop_map(|(h, z)| GaudinInstance::new(h, z).unwrap())
    })
}

fn partition(max_size: usize) -> impl Strategy<Value = Partition> {
    let all = Partition::up_to(max_size);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn square(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), dim * dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_routes_agree(inst in instance(2, 3), lambda in partition(3)) {
        let def = build_t_definitional(&lambda, &inst, Execution::Sequential).unwrap();
        prop_assert_eq!(&build_t_partial_trace(&lambda, &inst, None, Execution::Sequential).unwrap(), &def);
        prop_assert_eq!(&build_t_jacobi_trudi(&lambda, &inst, Execution::Sequential).unwrap(), &def);
        prop_assert!(def.degree().is_none_or(|d| d <= inst.n));
    }

    #[test]
    fn parallel_and_sequential_builds_are_identical(inst in instance(2, 3), lambda in partition(3)) {
        let a = build_t_definitional(&lambda, &inst, Execution::Sequential).unwrap();
        let b = build_t_definitional(&lambda, &inst, Execution::Parallel).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn zero_h_gives_beta(inst in instance(3, 3), lambda in partition(3)) {
        let t = build_t_definitional(&lambda, &inst.with_zero_h(), Execution::Sequential).unwrap();
        prop_assert_eq!(t, build_beta(&lambda, &inst).unwrap());
    }

    #[test]
    fn family_commutes(inst in instance(2, 3), a in partition(2), b in partition(3), u in rational(), v in rational()) {
        let x = build_t_definitional(&a, &inst, Execution::Sequential).unwrap().eval(&u);
        let y = build_t_definitional(&b, &inst, Execution::Sequential).unwrap().eval(&v);
        prop_assert_eq!(x.matmul(&y).unwrap(), y.matmul(&x).unwrap());
    }

    #[test]
    fn operators_are_symmetric(inst in instance(2, 3), lambda in partition(3), t in rational()) {
        let op = build_t_definitional(&lambda, &inst, Execution::Sequential).unwrap().eval(&t);
        prop_assert!(op.is_symmetric());
    }

    #[test]
    fn dump_round_trip(inst in instance(2, 2), lambda in partition(2)) {
        let p = build_t_definitional(&lambda, &inst, Execution::Sequential).unwrap();
        let back = OperatorPolynomial::from_dump(&p.to_dump(), p.factors(), p.n_dim()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn gram_matrices_are_psd(entries in square(4)) {
        let a = TensorOperator::from_entries(&[1, 2], 2, entries).unwrap();
        let gram = a.transpose().matmul(&a).unwrap();
        let cert = certify_psd_exact(&gram).unwrap();
        prop_assert!(cert.verdict.is_psd());
        prop_assert!(cert.recheck(&gram));
    }

    #[test]
    fn negated_gram_with_nonzero_factor_is_indefinite_or_zero(entries in square(4)) {
        let a = TensorOperator::from_entries(&[1, 2], 2, entries).unwrap();
        let neg = a.transpose().matmul(&a).unwrap().neg();
        let cert = certify_psd_exact(&neg).unwrap();
        if a.is_zero() {
            prop_assert_eq!(cert.verdict, Verdict::Psd);
        } else {
            prop_assert_eq!(cert.verdict, Verdict::Indefinite);
            // the witness is a direction of negative curvature
            let w = cert.negative_direction.clone().unwrap();
            let rows = neg.rows();
            let q: Rational = (0..4).map(|i| (0..4).map(|j| &w[i] * &rows[i][j] * &w[j]).sum::<Rational>()).sum();
            prop_assert!(q.is_negative());
        }
    }

    #[test]
    fn schur_evaluations_agree(h in prop::collection::vec(rational(), 1..=3), lambda in partition(4)) {
        let s = schur_eval(&lambda, &h);
        prop_assert_eq!(&schur_via_power_sums(&lambda, &h), &s);
        prop_assert_eq!(&schur_jacobi_trudi(&lambda, &h, lambda.length() + 1), &s);
        prop_assert_eq!(&schur_dual_jacobi_trudi(&lambda, &h, lambda.first() + 1), &s);
    }

    #[test]
    fn partial_trace_of_embedded_operator(entries in square(2), extra in 1usize..=2) {
        // Tr_{new factors}(A ⊗ I) = N^{extra} A
        let a = TensorOperator::from_entries(&[1], 2, entries).unwrap();
        let labels: Vec<usize> = (1..=1 + extra).collect();
        let big = a.embed(&labels).unwrap();
        let traced = big.partial_trace(&labels[1..]).unwrap();
        prop_assert_eq!(traced, a.scale(&rat(1 << extra, 1)));
    }
}

#[test]
fn alpha_is_a_scaled_projection_on_tensor_space() {
    // α_λ² = (|λ|!/f^λ) α_λ
    for lambda in Partition::up_to(3).into_iter().filter(|l| !l.is_empty()) {
        let labels: Vec<usize> = (1..=lambda.size()).collect();
        let alpha =
            TensorOperator::group_algebra_operator(&alpha_element(&lambda, &labels).unwrap(), &labels, 2).unwrap();
        let fact: i64 = (1..=lambda.size() as i64).product();
        let f = i64::try_from(lambda.syt_count()).unwrap();
        let sq = alpha.matmul(&alpha).unwrap();
        assert_eq!(sq, alpha.scale(&rat(fact, f)), "{lambda}");
        assert!(certify_psd_exact(&alpha).unwrap().verdict.is_psd());
    }
}

#[test]
fn transposition_operator_swaps_factors() {
    let labels = [1, 2];
    let swap = TensorOperator::<Rational>::permutation_operator(
        &Permutation::transposition(&labels, 1, 2).unwrap(),
        &labels,
        2,
    )
    .unwrap();
    assert_eq!(swap.matmul(&swap).unwrap(), TensorOperator::identity(&labels, 2).unwrap());
    assert_eq!(swap.trace(), rat(2, 1));
    assert!(!swap.is_zero() && !swap.trace().is_zero());
}
