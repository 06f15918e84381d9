//! Property tests of the structural invariants: fermionic algebra,
//! materialization consistency, entropy bounds and cone monotonicity.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use entanglab::cone::{
    e1_closed_form, entanglement_general, shannon_entropy, ConeSpec, ReportStatus,
    StateFunctional,
};
use entanglab::fock::{
    apply_factors, apply_ladder, FockBasis, FockVector, LadderOp, OperatorTerm,
    SecondQuantizedOperator,
};

const MODES: usize = 6;

fn word() -> impl Strategy<Value = u64> {
    0u64..(1 << MODES)
}

fn ladder_op() -> impl Strategy<Value = LadderOp> {
    (0..MODES, any::<bool>()).prop_map(|(mode, dagger)| LadderOp { mode, dagger })
}

fn operator(max_terms: usize) -> impl Strategy<Value = SecondQuantizedOperator> {
    proptest::collection::vec(
        (
            proptest::collection::vec(ladder_op(), 1..=3),
            -1.0f64..1.0,
            -1.0f64..1.0,
        ),
        1..=max_terms,
    )
    .prop_map(|terms| {
        SecondQuantizedOperator::new(
            terms
                .into_iter()
                .map(|(factors, re, im)| OperatorTerm::new(Complex64::new(re, im), factors))
                .collect(),
        )
    })
}

fn state(basis: &Arc<FockBasis>, seeds: Vec<(f64, f64)>) -> FockVector {
    let dim = basis.len();
    let amps: Vec<Complex64> = (0..dim)
        .map(|i| {
            let (re, im) = seeds[i % seeds.len()];
            Complex64::new(re + 1e-3, im - 1e-3)
        })
        .collect();
    FockVector::from_amplitudes(Arc::clone(basis), amps)
        .unwrap()
        .normalized()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Creating then annihilating the same mode restores the word, and the
    /// two signs cancel exactly.
    #[test]
    fn ladder_involution(word in word(), mode in 0..MODES) {
        if let Some((raised, s1)) = apply_ladder(word, mode, true) {
            let (lowered, s2) = apply_ladder(raised, mode, false).expect("occupied");
            prop_assert_eq!(lowered, word);
            prop_assert_eq!(s1 * s2, 1.0);
        }
    }

    /// Anticommutation at the word level: swapping the order of two
    /// annihilators flips the sign of the surviving branch.
    #[test]
    fn word_level_anticommutation(word in word(), a in 0..MODES, b in 0..MODES) {
        prop_assume!(a != b);
        let forward = apply_factors(word, &[LadderOp::annihilate(a), LadderOp::annihilate(b)]);
        let reversed = apply_factors(word, &[LadderOp::annihilate(b), LadderOp::annihilate(a)]);
        match (forward, reversed) {
            (Some((w1, s1)), Some((w2, s2))) => {
                prop_assert_eq!(w1, w2);
                prop_assert_eq!(s1, -s2);
            }
            (None, None) => {}
            _ => prop_assert!(false, "one ordering annihilated, the other survived"),
        }
    }

    /// Balanced creation/annihilation strings preserve the population of
    /// every word they act on.
    #[test]
    fn balanced_strings_conserve_number(word in word(), a in 0..MODES, b in 0..MODES) {
        if let Some((out, _)) = apply_factors(word, &[LadderOp::create(a), LadderOp::annihilate(b)]) {
            prop_assert_eq!(out.count_ones(), word.count_ones());
        }
    }

    /// Sparse and dense materializations act identically on random states.
    #[test]
    fn sparse_dense_agreement(
        op in operator(5),
        seeds in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..=8),
    ) {
        let basis = Arc::new(FockBasis::full(MODES).unwrap());
        let v = state(&basis, seeds);
        let dense = op.materialize_dense(&basis, 4096).unwrap();
        let sparse = op.materialize_sparse(&basis, 4096).unwrap();

        let applied = op.apply(&v).unwrap();
        let dv = nalgebra::DVector::from_column_slice(v.amplitudes());
        let dense_prod = &dense * dv;
        let mut sparse_prod = vec![Complex64::ZERO; basis.len()];
        sparse.matvec(v.amplitudes(), &mut sparse_prod);

        for i in 0..basis.len() {
            prop_assert!((applied.amplitudes()[i] - dense_prod[i]).norm() < 1e-12);
            prop_assert!((applied.amplitudes()[i] - sparse_prod[i]).norm() < 1e-12);
        }
    }

    /// Hermitian completion has real expectation values.
    #[test]
    fn hermitian_expectations_are_real(
        op in operator(4),
        seeds in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..=8),
    ) {
        let basis = Arc::new(FockBasis::full(MODES).unwrap());
        let v = state(&basis, seeds);
        let h = op.plus_adjoint();
        let value = h.expectation(&v).unwrap();
        prop_assert!(value.im.abs() < 1e-12);
    }

    /// Two-state entanglement is symmetric under weight swap and bounded
    /// by ln 2.
    #[test]
    fn e1_symmetry_and_bound(log_alpha in -3.0f64..3.0) {
        let alpha = 10f64.powf(log_alpha);
        let a = e1_closed_form(alpha).unwrap();
        let b = e1_closed_form(1.0 / alpha).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(a >= 0.0);
        prop_assert!(a <= 2.0f64.ln() + 1e-15);
    }

    /// Shannon entropy of a normalized weight vector lies in [0, ln n].
    #[test]
    fn entropy_bounds(raw in proptest::collection::vec(0.01f64..1.0, 2..=6)) {
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let s = shannon_entropy(&weights).unwrap();
        prop_assert!(s >= 0.0);
        prop_assert!(s <= (weights.len() as f64).ln() + 1e-12);
    }

    /// Adding pure states to a cone never increases the reported
    /// entanglement of a fixed feasible target.
    #[test]
    fn cone_enlargement_is_monotone(
        values in proptest::collection::vec(-1.0f64..1.0, 3..=4),
        extra in -1.0f64..1.0,
        mix in 0.05f64..0.95,
    ) {
        let mut distinct = values.clone();
        distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
        distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(distinct.len() >= 2);

        let pure: Vec<StateFunctional> = distinct
            .iter()
            .enumerate()
            .map(|(i, &v)| StateFunctional::new(vec![1.0, v], format!("p{i}")).unwrap())
            .collect();
        let target_value = mix * distinct[0] + (1.0 - mix) * distinct[1];
        let target = StateFunctional::new(vec![1.0, target_value], "t").unwrap();

        let small = ConeSpec::new(pure.clone()).unwrap();
        let report_small = entanglement_general(&target, &small).unwrap();
        prop_assume!(report_small.status == ReportStatus::Ok);

        prop_assume!(distinct.iter().all(|&v| (v - extra).abs() > 1e-3));
        let mut enlarged = pure;
        enlarged.push(StateFunctional::new(vec![1.0, extra], "extra").unwrap());
        let big = ConeSpec::new(enlarged).unwrap();
        let report_big = entanglement_general(&target, &big).unwrap();

        prop_assert!(matches!(
            report_big.status,
            ReportStatus::Ok | ReportStatus::TargetPure
        ));
        prop_assert!(report_big.entanglement <= report_small.entanglement + 1e-9);
    }
}
