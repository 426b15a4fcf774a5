//! The fixture set under `fixtures/`, generated from the library so it can
//! be checked for staleness.

use std::sync::Arc;

use peirce_lie::derivation::inner_derivation;
use peirce_lie::factory::{self, GrassmannZSpec};
use peirce_lie::json::{algebra_to_json, frame_to_json, map_to_json, FrameDoc};
use peirce_lie::{Algebra, Element, FieldSpec, LinearMap, MatrixShape, StructureConstant};
use serde_json::{json, Value};

fn diagonal(field: FieldSpec, n: usize) -> Vec<Element> {
    let shape = MatrixShape { n, inner_dim: 1 };
    (0..n).map(|i| shape.unit(field, i, i)).collect()
}

fn frame(idempotents: Vec<Element>, hull: bool) -> Value {
    frame_to_json(&FrameDoc { idempotents, hull })
}

/// `span{e, x, y, c}` with `e² = e`, `ex = x`, `ye = y`, `yx = c`: equal to
/// its own square, with annihilator `span{c}`.
pub fn self_product_algebra(field: FieldSpec) -> Algebra {
    let sc = |i, j, k| StructureConstant { i, j, k, c: field.from_i64(1) };
    let names = ["e", "x", "y", "c"].map(String::from).to_vec();
    Algebra::new(field, names, vec![sc(0, 0, 0), sc(0, 1, 1), sc(2, 0, 2), sc(2, 1, 3)], None)
        .expect("associative by construction")
}

/// `M_3(J)` for `J = span{e, x}`, `e² = e`, `ex = x`; it has no identity.
pub fn m3_over_j(field: FieldSpec) -> Algebra {
    let sc = |i, j, k| StructureConstant { i, j, k, c: field.from_i64(1) };
    let j = Algebra::new(field, vec!["e".into(), "x".into()], vec![sc(0, 0, 0), sc(0, 1, 1)], None)
        .expect("associative by construction");
    j.matrix_algebra(3).expect("matrix algebra over J")
}

fn grading() -> Vec<(String, Value)> {
    let mut out = Vec::new();
    let q = FieldSpec::Rational;
    let f2 = FieldSpec::prime(2).expect("prime");
    let f3 = FieldSpec::prime(3).expect("prime");
    for (name, field, n) in [("m3_q", q, 3), ("m3_f2", f2, 3), ("m4_f3", f3, 4)] {
        let a = Algebra::full_matrix(field, n).expect("matrix algebra");
        out.push((format!("grading/{name}.algebra.json"), algebra_to_json(&a)));
        out.push((format!("grading/{name}.frame.json"), frame(diagonal(field, n), false)));
    }
    let m3 = Algebra::full_matrix(q, 3).expect("matrix algebra");
    let doubled = m3.direct_sum(&m3.opposite()).expect("same field");
    let es = diagonal(q, 3)
        .into_iter()
        .map(|e| {
            let mut v = e.coeffs().to_vec();
            v.extend_from_slice(e.coeffs());
            Element::from_vec(v)
        })
        .collect();
    out.push(("grading/m3_q_plus_op.algebra.json".into(), algebra_to_json(&doubled)));
    out.push(("grading/m3_q_plus_op.frame.json".into(), frame(es, false)));
    let e11 = MatrixShape { n: 3, inner_dim: 1 }.unit(q, 0, 0);
    out.push(("grading/m3_q_repeated.frame.json".into(), frame(vec![e11.clone(), e11], false)));
    out
}

fn standard() -> Vec<(String, Value)> {
    let mut out = Vec::new();
    let q = FieldSpec::Rational;
    let f2 = FieldSpec::prime(2).expect("prime");
    let a2 = factory::full_matrix(f2, 3).expect("matrix algebra");
    let (p, pinv) = factory::permutation_matrix(f2, &[1, 2, 0]);
    let conj = factory::conjugation(&a2, &p, &pinv, a2.derived_lie_ring()).expect("invertible");
    out.push(("standard/sl3_f2_conjugation.map.json".into(), map_to_json(&conj)));
    let aq = factory::full_matrix(q, 3).expect("matrix algebra");
    let neg_t = factory::transpose_map(&aq, 3, aq.derived_lie_ring(), true).expect("square shape");
    out.push(("standard/sl3_q_negative_transpose.map.json".into(), map_to_json(&neg_t)));
    let t = factory::transpose_map(&aq, 3, aq.derived_lie_ring(), false).expect("square shape");
    out.push(("standard/sl3_q_transpose.map.json".into(), map_to_json(&t)));

    let mj = Arc::new(m3_over_j(q));
    let shape = MatrixShape { n: 3, inner_dim: 2 };
    let e = Element::from_vec(vec![q.from_i64(1), q.from_i64(0)]);
    out.push(("standard/m3_j.algebra.json".into(), algebra_to_json(&mj)));
    out.push((
        "standard/m3_j_hull.frame.json".into(),
        frame(vec![shape.embed(q, 0, 0, &e), shape.embed(q, 1, 1, &e)], true),
    ));
    let id = LinearMap::identity(mj.clone(), mj.derived_lie_ring()).expect("whole space");
    out.push(("standard/m3_j_identity.map.json".into(), map_to_json(&id)));
    out.push(("standard/malformed.map.json".into(), json!({ "domain": [["1/1", "0/1"]] })));
    out
}

fn derivation() -> Vec<(String, Value)> {
    let q = FieldSpec::Rational;
    let a = factory::full_matrix(q, 3).expect("matrix algebra");
    let e12 = MatrixShape { n: 3, inner_dim: 1 }.unit(q, 0, 1);
    let d = inner_derivation(&a, &e12).expect("inner derivation");
    vec![("derivation/m3_q_ad_e12.map.json".into(), map_to_json(&d))]
}

fn witness() -> Vec<(String, Value)> {
    let q = FieldSpec::Rational;
    let b = factory::grassmann_z_algebra(GrassmannZSpec { n: 2, field: q }).expect("B_2");
    let d = factory::jordan_derivation_d(&b).expect("d");
    let (m2, _, idem) = factory::matrix_two(&b).expect("M_2(B_2)");
    let dbar = factory::lift_dbar(&b, &d, &m2).expect("lifted derivation");
    vec![
        ("witness/b2.algebra.json".into(), algebra_to_json(&b.algebra)),
        ("witness/b2_d.map.json".into(), map_to_json(&d)),
        ("witness/m2b2.algebra.json".into(), algebra_to_json(&m2)),
        ("witness/m2b2.frame.json".into(), frame(idem.to_vec(), false)),
        ("witness/m2b2_dbar.map.json".into(), map_to_json(&dbar)),
    ]
}

fn extension() -> Vec<(String, Value)> {
    let mut out = Vec::new();
    let q = FieldSpec::Rational;
    let f2 = FieldSpec::prime(2).expect("prime");
    let m3 = Arc::new(Algebra::full_matrix(f2, 3).expect("matrix algebra"));
    out.push(("extension/m3_f2_identity.map.json".into(), map_to_json(&LinearMap::identity(m3.clone(), m3.whole()).expect("whole"))));

    let t = Arc::new(self_product_algebra(q));
    let (tq, proj) = t.quotient(&t.annihilator()).expect("annihilator is an ideal");
    out.push(("extension/t.algebra.json".into(), algebra_to_json(&t)));
    out.push(("extension/t_quotient.algebra.json".into(), algebra_to_json(&tq)));
    out.push(("extension/t_projection.map.json".into(), map_to_json(&proj)));

    let m2 = Algebra::full_matrix(q, 2).expect("matrix algebra");
    let src = Arc::new(m2.direct_sum(&Algebra::null(q, 1).expect("null line")).expect("same field"));
    let m2 = Arc::new(m2);
    let p = LinearMap::from_fn(src.clone(), m2.clone(), src.whole(), |x| Element::from_vec(x.coeffs()[..4].to_vec()))
        .expect("whole");
    out.push(("extension/m2_null.algebra.json".into(), algebra_to_json(&src)));
    out.push(("extension/m2_q.algebra.json".into(), algebra_to_json(&m2)));
    out.push(("extension/m2_null_projection.map.json".into(), map_to_json(&p)));

    let b = factory::grassmann_z_algebra(GrassmannZSpec { n: 2, field: q }).expect("B_2");
    let top = b.algebra.span(&[b.monomial(true, &[0, 1])]).expect("same dimension");
    let (bq, bproj) = b.algebra.quotient(&top).expect("z e1 e2 spans an ideal");
    out.push(("extension/b2_quotient.algebra.json".into(), algebra_to_json(&bq)));
    out.push(("extension/b2_projection.map.json".into(), map_to_json(&bproj)));
    out
}

/// Every fixture as (path relative to `fixtures/`, document).
pub fn all() -> Vec<(String, Value)> {
    let mut out = grading();
    out.extend(standard());
    out.extend(derivation());
    out.extend(witness());
    out.extend(extension());
    out
}
