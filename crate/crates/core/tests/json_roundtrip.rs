mod common;

use std::sync::Arc;

use common::*;
use peirce_lie::factory::{self, GrassmannZSpec};
use peirce_lie::json::{
    algebra_from_json, algebra_to_json, element_from_json, frame_from_json, frame_to_json, map_from_json,
    map_to_json, to_canonical_string, FrameDoc, JsonError,
};
use peirce_lie::{Algebra, LinearMap};
use serde_json::json;

#[test]
fn algebras_round_trip() {
    let b = factory::grassmann_z_algebra(GrassmannZSpec { n: 3, field: fp(7) }).unwrap();
    let m3 = Algebra::full_matrix(q(), 3).unwrap();
    let null = Algebra::null(q(), 2).unwrap();
    for a in [b.algebra.as_ref(), &m3, &null] {
        let v = algebra_to_json(a);
        let back = algebra_from_json(&v).unwrap();
        assert_eq!(back.dim(), a.dim());
        assert_eq!(back.basis_names(), a.basis_names());
        assert_eq!(back.table(), a.table());
        assert_eq!(back.unit(), a.unit());
        assert_eq!(to_canonical_string(&algebra_to_json(&back)), to_canonical_string(&v));
    }
}

#[test]
fn rational_scalars_are_strings() {
    let m = Algebra::full_matrix(q(), 2).unwrap();
    let v = algebra_to_json(&m);
    assert_eq!(v["field"], json!({"kind": "rational"}));
    assert_eq!(v["unit"], json!(["1/1", "0/1", "0/1", "1/1"]));
    let x = element_from_json(&m, &json!(["1/2", -3, "4", "0/5"])).unwrap();
    assert_eq!(x.coeffs()[0].to_string(), "1/2");
    assert_eq!(x.coeffs()[1].to_string(), "-3");
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(algebra_from_json(&json!({"dim": 1})), Err(JsonError::Shape(_))));
    let bad_prime = json!({"field": {"kind": "prime", "p": 6}, "dim": 1, "basis": ["a"], "table": []});
    assert!(matches!(algebra_from_json(&bad_prime), Err(JsonError::Field(_))));
    let non_assoc = json!({
        "field": {"kind": "rational"}, "dim": 2, "basis": ["a", "b"],
        "table": [[0, 0, 1, "1/1"], [1, 0, 0, "1/1"]]
    });
    assert!(matches!(algebra_from_json(&non_assoc), Err(JsonError::Algebra(_))));
    let m = Algebra::full_matrix(q(), 2).unwrap();
    assert!(matches!(element_from_json(&m, &json!([1, 2])), Err(JsonError::Shape(_))));
}

#[test]
fn maps_round_trip_through_the_canonical_basis() {
    let f = q();
    let a = factory::full_matrix(f, 3).unwrap();
    let t = factory::transpose_map(&a, 3, a.derived_lie_ring(), true).unwrap();
    let back = map_from_json(&a, &a, &map_to_json(&t)).unwrap();
    assert_eq!(back, t);

    // a non-echelon domain is converted: rows E12 + E21 and E21 map to E12 and 0
    let a2 = factory::full_matrix(f, 2).unwrap();
    let doc = json!({
        "domain": [[0, 1, 1, 0], [0, 0, 1, 0]],
        "matrix": [[0, 1, 0, 0], [0, 0, 0, 0]]
    });
    let m = map_from_json(&a2, &a2, &doc).unwrap();
    assert_eq!(m.apply(&elem(f, &[0, 1, 0, 0])).unwrap(), elem(f, &[0, 1, 0, 0]));
    assert!(m.apply(&elem(f, &[0, 0, 1, 0])).unwrap().is_zero());
    let dependent = json!({"domain": [[0, 1, 0, 0], [0, 2, 0, 0]], "matrix": [[0, 0, 0, 0], [0, 0, 0, 0]]});
    assert!(matches!(map_from_json(&a2, &a2, &dependent), Err(JsonError::Shape(_))));
}

#[test]
fn frames_round_trip() {
    let f = q();
    let a = Arc::new(Algebra::full_matrix(f, 2).unwrap());
    let doc = FrameDoc { idempotents: vec![elem(f, &[1, 0, 0, 0]), elem(f, &[0, 0, 0, 1])], hull: false };
    assert_eq!(frame_from_json(&a, &frame_to_json(&doc)).unwrap(), doc);
    let hull = json!({"idempotents": [[1, 0, 0, 0, 0]], "hull": true});
    assert_eq!(frame_from_json(&a, &hull).unwrap().idempotents[0].dim(), 5);
    let no_hull = json!({"idempotents": [[1, 0, 0, 0, 0]]});
    assert!(frame_from_json(&a, &no_hull).is_err());
    let id = LinearMap::identity(a.clone(), a.whole()).unwrap();
    assert_eq!(map_to_json(&id)["domain"].as_array().unwrap().len(), 4);
}
