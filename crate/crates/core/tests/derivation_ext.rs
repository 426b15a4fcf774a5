mod common;

use std::sync::Arc;

use common::*;
use peirce_lie::derivation::{
    attempt_extension_two_idempotents, even_decompose, even_decompose_with, extend_derivation, inner_derivation,
    inner_derivation_full, DecomposeOptions, DerivationError, ExtensionAttempt, ALTERNATIVES,
};
use peirce_lie::factory::{self, GrassmannZSpec};
use peirce_lie::lie::check_derivation;
use peirce_lie::peirce::IdempotentFrame;
use peirce_lie::{Algebra, Element, FieldSpec, LinearMap, MatrixShape, StructureConstant};
use proptest::prelude::*;

fn matrix_frame(f: FieldSpec, n: usize) -> IdempotentFrame {
    let a = factory::full_matrix(f, n).unwrap();
    let shape = MatrixShape { n, inner_dim: 1 };
    IdempotentFrame::build(a, (0..n).map(|i| shape.unit(f, i, i)).collect(), false).unwrap()
}

fn unit(f: FieldSpec, n: usize, i: usize, j: usize) -> Element {
    MatrixShape { n, inner_dim: 1 }.unit(f, i, j)
}

/// Forward and reversed products of a decomposition computed with dense
/// integer matrices.
fn oracle_sums(n: usize, terms: &[Vec<Element>]) -> (Vec<i64>, Vec<i64>) {
    let mut fwd = vec![0; n * n];
    let mut bwd = vec![0; n * n];
    for t in terms {
        let mats: Vec<Vec<i64>> = t.iter().map(ints).collect();
        let mut p = mats[0].clone();
        for m in &mats[1..] {
            p = mat_mul(n, &p, m);
        }
        let mut r = mats[mats.len() - 1].clone();
        for m in mats[..mats.len() - 1].iter().rev() {
            r = mat_mul(n, &r, m);
        }
        fwd = fwd.iter().zip(&p).map(|(a, b)| a + b).collect();
        bwd = bwd.iter().zip(&r).map(|(a, b)| a + b).collect();
    }
    (fwd, bwd)
}

#[test]
fn canonical_decomposition_of_e12() {
    let f = q();
    let frame = matrix_frame(f, 3);
    let dec = even_decompose(&frame, &unit(f, 3, 0, 1)).unwrap();
    assert_eq!(dec.terms, vec![vec![unit(f, 3, 0, 2), unit(f, 3, 2, 1)]]);
}

#[test]
fn decompositions_of_diagonal_units_satisfy_both_sums() {
    let f = q();
    let frame = matrix_frame(f, 3);
    for i in 0..3 {
        let e = unit(f, 3, i, i);
        let dec = even_decompose(&frame, &e).unwrap();
        assert!(dec.terms.iter().all(|t| t.len() % 2 == 0));
        let (fwd, bwd) = oracle_sums(3, &dec.terms);
        assert_eq!(fwd, mat_unit(3, i, i));
        assert!(bwd.iter().all(|&c| c == 0));
    }
    let zero = even_decompose(&frame, &frame.algebra().zero()).unwrap();
    assert!(zero.terms.is_empty());
}

#[test]
fn randomized_decompositions_are_valid() {
    let f = fp(5);
    let frame = matrix_frame(f, 4);
    let a = frame.algebra();
    for seed in 1..=ALTERNATIVES {
        for b in a.basis_elements() {
            let dec = even_decompose_with(&frame, &b, DecomposeOptions { seed: Some(seed) }).unwrap();
            dec.verify(a).unwrap();
            let (fwd, bwd) = oracle_sums(4, &dec.terms);
            let expected: Vec<i64> = ints(&b);
            assert_eq!(fwd.iter().map(|c| c.rem_euclid(5)).collect::<Vec<_>>(), expected);
            assert!(bwd.iter().all(|c| c.rem_euclid(5) == 0));
        }
    }
}

#[test]
fn two_idempotents_cannot_be_decomposed() {
    let f = q();
    let frame = matrix_frame(f, 2);
    assert!(matches!(
        even_decompose(&frame, &unit(f, 2, 0, 1)).unwrap_err(),
        DerivationError::PreconditionFailed(_)
    ));
}

#[test]
fn inner_derivations_extend_to_themselves() {
    let f = q();
    let frame = matrix_frame(f, 3);
    let a = frame.algebra();
    let e12 = unit(f, 3, 0, 1);
    let d = inner_derivation(a, &e12).unwrap();
    assert_eq!(extend_derivation(&frame, &d).unwrap(), inner_derivation_full(a, &e12).unwrap());

    let zero = LinearMap::zero(a.clone(), a.clone(), a.derived_lie_ring()).unwrap();
    assert_eq!(extend_derivation(&frame, &zero).unwrap(), LinearMap::zero(a.clone(), a.clone(), a.whole()).unwrap());
}

#[test]
fn diagonal_inner_derivation_values() {
    let f = q();
    let frame = matrix_frame(f, 3);
    let a = frame.algebra();
    let diag = unit(f, 3, 0, 0).add(&unit(f, 3, 1, 1).scale(&f.from_i64(2))).add(&unit(f, 3, 2, 2).scale(&f.from_i64(3)));
    let ext = extend_derivation(&frame, &inner_derivation(a, &diag).unwrap()).unwrap();
    let dm: Vec<i64> = ints(&diag);
    for (i, j) in [(0, 1), (0, 2), (1, 2), (2, 0)] {
        let expected = mat_commutator(3, &dm, &mat_unit(3, i, j));
        assert_eq!(ints(&ext.apply(&unit(f, 3, i, j)).unwrap()), expected);
    }
    assert_eq!(ints(&ext.apply(&unit(f, 3, 0, 1)).unwrap()), ints(&unit(f, 3, 0, 1).neg()));
    assert_eq!(ints(&ext.apply(&unit(f, 3, 0, 2)).unwrap()), ints(&unit(f, 3, 0, 2).scale(&f.from_i64(-2))));
    assert!(ext.apply(&unit(f, 3, 1, 1)).unwrap().is_zero());
}

#[test]
fn non_lie_derivation_is_rejected() {
    let f = q();
    let frame = matrix_frame(f, 3);
    let a = frame.algebra();
    let id = LinearMap::identity(a.clone(), a.derived_lie_ring()).unwrap();
    assert!(matches!(extend_derivation(&frame, &id).unwrap_err(), DerivationError::NotLieDerivation(_)));
    let wrong = LinearMap::zero(a.clone(), a.clone(), a.whole()).unwrap();
    assert!(matches!(extend_derivation(&frame, &wrong).unwrap_err(), DerivationError::PreconditionFailed(_)));
}

#[test]
fn extension_over_a_non_unital_algebra_through_the_hull() {
    let f = q();
    let sc = |i, j, k| StructureConstant { i, j, k, c: f.from_i64(1) };
    let j = Algebra::new(f, vec!["e".into(), "x".into()], vec![sc(0, 0, 0), sc(0, 1, 1)], None).unwrap();
    let a = Arc::new(j.matrix_algebra(3).unwrap());
    let shape = MatrixShape { n: 3, inner_dim: 2 };
    let e = elem(f, &[1, 0]);
    let frame = IdempotentFrame::build(a.clone(), vec![shape.embed(f, 0, 0, &e), shape.embed(f, 1, 1, &e)], true).unwrap();
    assert!(a.annihilator().is_zero());
    let m = shape.embed(f, 0, 1, &elem(f, &[0, 1]));
    let d = inner_derivation(&a, &m).unwrap();
    let ext = extend_derivation(&frame, &d).unwrap();
    assert!(check_derivation(&ext).unwrap().pass);
    assert_eq!(ext.restrict(a.derived_lie_ring()).unwrap(), d);
}

#[test]
fn nonzero_annihilator_blocks_the_hull_case() {
    // M3 ⊕ N with a null line N: the hull frame is complete but Ann ≠ 0
    let f = q();
    let m3 = Algebra::full_matrix(f, 3).unwrap();
    let a = Arc::new(m3.direct_sum(&Algebra::null(f, 1).unwrap()).unwrap());
    let es: Vec<Element> = (0..3).map(|i| unit(f, 3, i, i).resized(f, 10)).collect();
    let frame = IdempotentFrame::build(a.clone(), es, true).unwrap();
    let zero = LinearMap::zero(a.clone(), a.clone(), a.derived_lie_ring()).unwrap();
    assert!(matches!(extend_derivation(&frame, &zero).unwrap_err(), DerivationError::PreconditionFailed(_)));
}

fn b2_setup(f: FieldSpec) -> (IdempotentFrame, LinearMap, MatrixShape, factory::GrassmannZ) {
    let b = factory::grassmann_z_algebra(GrassmannZSpec { n: 2, field: f }).unwrap();
    let d = factory::jordan_derivation_d(&b).unwrap();
    let (m2, shape, idem) = factory::matrix_two(&b).unwrap();
    let dbar = factory::lift_dbar(&b, &d, &m2).unwrap();
    let frame = IdempotentFrame::build(m2, idem.to_vec(), false).unwrap();
    (frame, dbar, shape, b)
}

#[test]
fn lifted_map_on_two_idempotents_is_obstructed() {
    let f = q();
    let (frame, dbar, shape, b) = b2_setup(f);
    let m2 = frame.algebra();
    let ExtensionAttempt::Obstructed(o) = attempt_extension_two_idempotents(&frame, &dbar).unwrap() else {
        panic!("expected an obstruction");
    };
    let e1 = &b.e[0];
    let x = shape.embed(f, 0, 0, e1).sub(&shape.embed(f, 1, 1, e1));
    let y = shape.embed(f, 0, 1, &b.e[1]);
    assert_eq!(o.x, x);
    assert_eq!(o.y, y);
    assert_eq!(o.value, shape.embed(f, 0, 1, &b.monomial(true, &[0, 1]).scale(&f.from_i64(2))));
    assert_eq!(m2.format_element(&o.value), "2*E12*ze1e2");
    assert!(o.recheck(&dbar));
}

#[test]
fn inner_derivations_on_two_idempotents_extend() {
    let f = q();
    let (frame, _, shape, b) = b2_setup(f);
    let m2 = frame.algebra();
    for m in [shape.embed(f, 0, 1, &b.e[0]), shape.embed(f, 0, 0, &b.e[1]), shape.embed(f, 1, 0, &b.z)] {
        let d = inner_derivation(m2, &m).unwrap();
        let ExtensionAttempt::Extended(ext) = attempt_extension_two_idempotents(&frame, &d).unwrap() else {
            panic!("inner derivation should extend");
        };
        assert!(check_derivation(&ext).unwrap().pass);
        let diff = ext.sub(&inner_derivation_full(m2, &m).unwrap()).unwrap();
        let on_derived = diff.restrict(m2.derived_lie_ring()).unwrap();
        assert!(on_derived.matrix().iter().flatten().all(|c| c.is_zero()));
    }
}

#[test]
fn two_idempotent_attempt_requires_two_idempotents() {
    let f = q();
    let frame = matrix_frame(f, 3);
    let a = frame.algebra();
    let zero = LinearMap::zero(a.clone(), a.clone(), a.derived_lie_ring()).unwrap();
    assert!(matches!(
        attempt_extension_two_idempotents(&frame, &zero).unwrap_err(),
        DerivationError::PreconditionFailed(_)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The extension is linear in the derivation.
    #[test]
    fn extension_is_linear(
        c1 in proptest::collection::vec(-3i64..=3, 9),
        c2 in proptest::collection::vec(-3i64..=3, 9),
    ) {
        let f = q();
        let frame = matrix_frame(f, 3);
        let a = frame.algebra();
        let (m1, m2) = (elem(f, &c1), elem(f, &c2));
        let d1 = inner_derivation(a, &m1).unwrap();
        let d2 = inner_derivation(a, &m2).unwrap();
        let sum = inner_derivation(a, &m1.add(&m2)).unwrap();
        let e1 = extend_derivation(&frame, &d1).unwrap();
        let e2 = extend_derivation(&frame, &d2).unwrap();
        let es = extend_derivation(&frame, &sum).unwrap();
        prop_assert_eq!(e1.add(&e2).unwrap(), es.clone());
        prop_assert_eq!(es, inner_derivation_full(a, &m1.add(&m2)).unwrap());
    }
}
