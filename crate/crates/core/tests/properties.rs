//! Structural invariants checked over randomly drawn R-matrices.

use proptest::prelude::*;
use rmlab::braid::{self, BraidWord};
use rmlab::commutant;
use rmlab::random;
use rmlab::rmatrix::{self, RMatrix, VERIFY_TOL};
use rmlab::tensor::{self, cis, AlgebraElement};
use rmlab::{canon, NormalFormSpec};

fn phases() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.2f64..3.2, 4)
}

/// A representative of one of the two-dimensional families, or a normal form,
/// hidden behind a random quasi-free conjugation.
fn rmatrix_strategy() -> impl Strategy<Value = RMatrix> {
    (0usize..5, phases(), any::<u64>()).prop_map(|(kind, t, seed)| {
        let base = match kind {
            0 => rmatrix::make_trivial(2, cis(t[0])),
            1 => rmatrix::make_r2(cis(t[0]), cis(t[1]), cis(t[2]), cis(t[3])),
            2 => rmatrix::make_r3(cis(t[0]), cis(t[1]), cis(t[2])),
            3 => rmatrix::make_r4(cis(t[0])),
            _ => rmatrix::make_normal_form(&NormalFormSpec::parse("1:+,1:-").unwrap()),
        }
        .unwrap();
        let mut g = random::rng(seed);
        rmatrix::quasifree_conjugate(&base, &random::random_unitary(2, &mut g)).unwrap()
    })
}

fn word_strategy(strands: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1..strands, prop::bool::ANY), 0..7).prop_map(move |letters| {
        let letters = letters.into_iter().map(|(k, pos)| (k, if pos { 1 } else { -1 })).collect();
        BraidWord::new(strands, letters).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn conjugates_stay_rmatrices(r in rmatrix_strategy()) {
        prop_assert!(rmatrix::ybe_residual(&r.matrix, 2) < VERIFY_TOL);
        prop_assert!(rmatrix::cuntz_residual(&r.matrix, 2) < VERIFY_TOL);
    }

    #[test]
    fn characters_invariant_under_conjugation(r in rmatrix_strategy(), w in word_strategy(3), seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let s = rmatrix::quasifree_conjugate(&r, &random::random_unitary(2, &mut g)).unwrap();
        prop_assert!((braid::character(&r, &w) - braid::character(&s, &w)).norm() < 1e-10);
    }

    #[test]
    fn words_times_inverses_are_identity(r in rmatrix_strategy(), w in word_strategy(4)) {
        let x = braid::represent(&r, &w.concat(&w.inverse()));
        prop_assert!((x.matrix - tensor::identity(16)).norm() < 1e-10);
    }

    #[test]
    fn adjoint_commutes_with_box_sum(a in rmatrix_strategy(), b in rmatrix_strategy()) {
        let lhs = rmatrix::adjoint(&rmatrix::box_sum(&a, &b).unwrap()).unwrap();
        let rhs = rmatrix::box_sum(&rmatrix::adjoint(&a).unwrap(), &rmatrix::adjoint(&b).unwrap()).unwrap();
        prop_assert!((lhs.matrix - rhs.matrix).norm() < 1e-12);
    }

    #[test]
    fn r_lies_in_its_level_two_commutant(r in rmatrix_strategy()) {
        let m = commutant::relative_commutant_m(&r, 2).unwrap();
        prop_assert!(m.residual(&r.matrix) < 1e-8);
    }

    #[test]
    fn fixed_points_commute_with_r(r in rmatrix_strategy()) {
        let f = commutant::fixed_subalgebra(&r, 2).unwrap();
        let cols = f.columns();
        for k in 0..cols.ncols() {
            let x = tensor::unvec_rowmajor(cols.column(k).as_slice(), 4);
            prop_assert!(tensor::commutator(&x, &r.matrix).norm() < 1e-8);
        }
    }

    #[test]
    fn partial_traces_of_product_states(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let a = random::ginibre(3, &mut g);
        let b = random::ginibre(9, &mut g);
        let x = AlgebraElement::new(3, 3, tensor::kron(&a, &b)).unwrap();
        let left = tensor::partial_trace_left(&x).unwrap();
        prop_assert!((left.matrix - &b * (a.trace() / 3.0)).norm() < 1e-12);
        let y = AlgebraElement::new(3, 3, tensor::kron(&b, &a)).unwrap();
        let right = tensor::partial_trace_right(&y).unwrap();
        prop_assert!((right.matrix - &b * (a.trace() / 3.0)).norm() < 1e-12);
    }

    #[test]
    fn canonical_json_round_trip(r in rmatrix_strategy()) {
        let text = canon::to_canonical_string(&rmatrix::to_json(&r));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(canon::to_canonical_string(&v), text.clone());
        let back = rmatrix::from_json(&v, VERIFY_TOL).unwrap();
        prop_assert!((back.matrix - &r.matrix).norm() < 1e-12);
    }
}
