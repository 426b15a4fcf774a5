mod common;

use std::sync::Arc;

use common::*;
use peirce_lie::derivation::inner_derivation;
use peirce_lie::factory::{self, GrassmannZSpec};
use peirce_lie::lie::{
    adjoint_representation, check_assoc_hom, check_derivation, check_jordan_derivation, check_lie_derivation,
    check_lie_hom, check_specialization_pairwise, check_specialization_words, LieError,
};
use peirce_lie::peirce::{delta_grading, GradedLieRing, IdempotentFrame};
use peirce_lie::standard::build_envelope;
use peirce_lie::{Algebra, Element, FieldSpec, LawKind, LinearMap, MatrixShape};
use proptest::prelude::*;

fn matrix_grading(field: FieldSpec, n: usize) -> (Arc<Algebra>, GradedLieRing) {
    let a = factory::full_matrix(field, n).unwrap();
    let shape = MatrixShape { n, inner_dim: 1 };
    let es = (0..n).map(|i| shape.unit(field, i, i)).collect();
    let frame = IdempotentFrame::build(a.clone(), es, false).unwrap();
    (a, delta_grading(&frame).unwrap())
}

#[test]
fn permutation_conjugation_on_sl3_over_f2_is_a_lie_hom() {
    let f = fp(2);
    let a = factory::full_matrix(f, 3).unwrap();
    let (p, pinv) = factory::permutation_matrix(f, &[1, 2, 0]);
    let c = factory::conjugation(&a, &p, &pinv, a.derived_lie_ring()).unwrap();
    let v = check_lie_hom(&c).unwrap();
    assert!(v.pass);
    assert_eq!(v.kind, LawKind::LieHom);
    assert!(v.witness.is_none() && v.defect.is_none());
}

#[test]
fn negative_transpose_passes_and_transpose_fails_at_the_first_pair() {
    let f = q();
    let a = factory::full_matrix(f, 3).unwrap();
    let l = a.derived_lie_ring();
    assert!(check_lie_hom(&factory::transpose_map(&a, 3, l.clone(), true).unwrap()).unwrap().pass);

    let t = factory::transpose_map(&a, 3, l.clone(), false).unwrap();
    let v = check_lie_hom(&t).unwrap();
    assert!(!v.pass);
    assert!(v.recheck(&t));

    // independent search: first pair (i < j) of domain rows with [x, y] ≠ 0,
    // where the defect is [x, y]ᵗ − [xᵗ, yᵗ] = 2 [x, y]ᵗ
    let rows: Vec<Vec<i64>> = l.basis().iter().map(|r| ints(&Element::from_vec(r.clone()))).collect();
    let tr = |m: &[i64]| (0..9).map(|k| m[(k % 3) * 3 + k / 3]).collect::<Vec<i64>>();
    let mut expected = None;
    'outer: for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let br = mat_commutator(3, &rows[i], &rows[j]);
            let defect = mat_sub(&tr(&br), &mat_commutator(3, &tr(&rows[i]), &tr(&rows[j])));
            if defect.iter().any(|&c| c != 0) {
                expected = Some((rows[i].clone(), rows[j].clone(), defect));
                break 'outer;
            }
        }
    }
    let (x, y, defect) = expected.unwrap();
    let w = v.witness.unwrap();
    assert_eq!(ints(&w[0]), x);
    assert_eq!(ints(&w[1]), y);
    assert_eq!(ints(&v.defect.unwrap()), defect);
}

#[test]
fn inner_and_zero_maps_are_lie_derivations() {
    let f = q();
    let a = factory::full_matrix(f, 3).unwrap();
    let e12 = MatrixShape { n: 3, inner_dim: 1 }.unit(f, 0, 1);
    let ad = inner_derivation(&a, &e12).unwrap();
    assert!(check_lie_derivation(&ad).unwrap().pass);
    let zero = LinearMap::zero(a.clone(), a.clone(), a.derived_lie_ring()).unwrap();
    assert!(check_lie_derivation(&zero).unwrap().pass);
    // a nonzero multiple of the identity is not a derivation of a non-abelian ring
    let id = LinearMap::identity(a.clone(), a.derived_lie_ring()).unwrap();
    let v = check_lie_derivation(&id).unwrap();
    assert!(!v.pass);
    assert!(v.recheck(&id));
}

#[test]
fn lie_derivation_needs_an_endomorphism() {
    let f = q();
    let a = factory::full_matrix(f, 2).unwrap();
    let b = factory::full_matrix(f, 3).unwrap();
    let z = LinearMap::zero(a.clone(), b, a.whole()).unwrap();
    assert_eq!(check_lie_derivation(&z).unwrap_err(), LieError::NotAnEndomorphism);
}

#[test]
fn jordan_derivation_that_is_not_a_derivation() {
    let b = factory::grassmann_z_algebra(GrassmannZSpec { n: 2, field: q() }).unwrap();
    let d = factory::jordan_derivation_d(&b).unwrap();
    assert!(check_jordan_derivation(&d).unwrap().pass);
    let v = check_derivation(&d).unwrap();
    assert!(!v.pass);
    assert_eq!(v.witness.as_deref(), Some(&[b.e[0].clone(), b.e[1].clone()][..]));
    // d(e1 e2) − d(e1) e2 − e1 d(e2) = 0 − z e1 e2 − e1 z e2 = −2 z e1 e2
    let ze1e2 = b.monomial(true, &[0, 1]);
    assert_eq!(v.defect.clone().unwrap(), ze1e2.scale(&q().from_i64(-2)));
    assert!(v.recheck(&d));
}

#[test]
fn transpose_is_an_anti_homomorphism_only() {
    let f = fp(5);
    let a = factory::full_matrix(f, 3).unwrap();
    let t = factory::transpose_map(&a, 3, a.whole(), false).unwrap();
    assert!(check_assoc_hom(&t, true).unwrap().pass);
    let v = check_assoc_hom(&t, false).unwrap();
    assert!(!v.pass);
    assert_eq!(v.kind, LawKind::AssocHom);
    assert!(v.recheck(&t));
}

#[test]
fn envelope_coordinate_projections() {
    let f = q();
    let a = factory::full_matrix(f, 3).unwrap();
    let ep = build_envelope(&a).unwrap();
    let first = LinearMap::from_fn(ep.env.clone(), a.clone(), ep.env.whole(), |x| ep.split(x).0).unwrap();
    let second = LinearMap::from_fn(ep.env.clone(), a.clone(), ep.env.whole(), |x| ep.split(x).1).unwrap();
    assert!(check_assoc_hom(&first, false).unwrap().pass);
    assert!(check_assoc_hom(&second, true).unwrap().pass);
    assert!(!check_assoc_hom(&second, false).unwrap().pass);
    // θ followed by the first projection is the inclusion of [A, A]
    let composite = ep.theta.then(&first).unwrap();
    assert_eq!(composite, LinearMap::identity(a.clone(), a.derived_lie_ring()).unwrap());
    assert!(check_lie_hom(&composite).unwrap().pass);
}

#[test]
fn pairwise_specialization_examples() {
    let f = q();
    let (a, g) = matrix_grading(f, 3);
    let id = LinearMap::identity(a.clone(), g.total().clone()).unwrap();
    assert!(check_specialization_pairwise(&id, &g).unwrap().pass);
    let ep = build_envelope(&a).unwrap();
    assert!(check_specialization_pairwise(&ep.theta, &g).unwrap().pass);

    // send E13 to E21 and fix the other basis rows
    let shape = MatrixShape { n: 3, inner_dim: 1 };
    let e13 = shape.unit(f, 0, 2);
    let e21 = shape.unit(f, 1, 0);
    let bad = LinearMap::from_fn(a.clone(), a.clone(), g.total().clone(), |x| {
        let c = shape.entry(x, 0, 2).coeffs()[0].clone();
        x.sub(&e13.scale(&c)).add(&e21.scale(&c))
    })
    .unwrap();
    let v = check_specialization_pairwise(&bad, &g).unwrap();
    assert!(!v.pass);
    assert!(v.recheck(&bad));
    let roots = v.roots.clone().unwrap();
    let outside = g.roots().sum(roots[0], roots[1]);
    assert_eq!(outside, peirce_lie::RootSum::Outside);
    let w = v.witness.unwrap();
    assert_eq!(a.mul(&bad.apply(&w[0]).unwrap(), &bad.apply(&w[1]).unwrap()), v.defect.unwrap());
}

#[test]
fn word_specialization_examples() {
    let f = q();
    let (a, g) = matrix_grading(f, 3);
    let ep = build_envelope(&a).unwrap();
    assert!(check_specialization_words(&ep.theta, &g, 4).unwrap().pass);
    assert_eq!(check_specialization_words(&ep.theta, &g, 1).unwrap_err(), LieError::MaxLen(1));

    let shape = MatrixShape { n: 3, inner_dim: 1 };
    let e13 = shape.unit(f, 0, 2);
    let e21 = shape.unit(f, 1, 0);
    let bad = LinearMap::from_fn(a.clone(), a.clone(), g.total().clone(), |x| {
        let c = shape.entry(x, 0, 2).coeffs()[0].clone();
        x.sub(&e13.scale(&c)).add(&e21.scale(&c))
    })
    .unwrap();
    let v = check_specialization_words(&bad, &g, 4).unwrap();
    assert!(!v.pass);
    assert_eq!(v.witness.as_ref().unwrap().len(), 2);
    assert!(v.recheck(&bad));

    let (a4, g4) = matrix_grading(fp(3), 4);
    let id = LinearMap::identity(a4, g4.total().clone()).unwrap();
    assert!(check_specialization_words(&id, &g4, 3).unwrap().pass);
}

#[test]
fn adjoint_representation_is_a_lie_hom() {
    let f = fp(3);
    let a = factory::full_matrix(f, 3).unwrap();
    let (m, ad) = adjoint_representation(&a, &a.derived_lie_ring()).unwrap();
    assert_eq!(m.dim(), 64);
    assert!(check_lie_hom(&ad).unwrap().pass);
}

#[test]
fn composition_of_lie_homs_is_a_lie_hom() {
    let f = q();
    let a = factory::full_matrix(f, 3).unwrap();
    let l = a.derived_lie_ring();
    let (p, pinv) = factory::permutation_matrix(f, &[2, 0, 1]);
    let c = factory::conjugation(&a, &p, &pinv, l.clone()).unwrap();
    let t = factory::transpose_map(&a, 3, l.clone(), true).unwrap();
    let ep = build_envelope(&a).unwrap();
    let composite = c.then(&t).unwrap().then(&ep.theta).unwrap();
    assert!(check_lie_hom(&composite).unwrap().pass);
}

fn permutation_of(seed: usize) -> Vec<usize> {
    let mut perms = vec![];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                if a != b && b != c && a != c {
                    perms.push(vec![a, b, c]);
                }
            }
        }
    }
    perms[seed % perms.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Random Lie homomorphisms built from conjugations, −transpose and θ
    /// pass the pairwise test, and then the bounded word test as well.
    #[test]
    fn pairwise_implies_words(
        perm in 0usize..6,
        negate in any::<bool>(),
        envelope in any::<bool>(),
        prime in prop_oneof![Just(None), Just(Some(3u64)), Just(Some(5u64))],
    ) {
        let f = prime.map_or(q(), fp);
        let (a, g) = matrix_grading(f, 3);
        let l = g.total().clone();
        let (p, pinv) = factory::permutation_matrix(f, &permutation_of(perm));
        let mut map = factory::conjugation(&a, &p, &pinv, l.clone()).unwrap();
        if negate {
            map = map.then(&factory::transpose_map(&a, 3, a.whole(), true).unwrap()).unwrap();
        }
        if envelope {
            let ep = build_envelope(&a).unwrap();
            let inclusion = LinearMap::from_fn(a.clone(), ep.env.clone(), a.whole(), |x| ep.theta_of(x)).unwrap();
            map = map.then(&inclusion).unwrap();
        }
        prop_assert!(check_lie_hom(&map).unwrap().pass);
        let pw = check_specialization_pairwise(&map, &g).unwrap();
        if pw.pass {
            prop_assert!(check_specialization_words(&map, &g, 4).unwrap().pass);
        }
    }
}
