//! JSON documents for algebras, linear maps and idempotent frames.
//!
//! Algebra: `{"field", "dim", "basis", "table": [[i, j, k, c], …], "unit"}`
//! with 0-based indices. Map: `{"domain": rows, "matrix": rows}`, where row
//! `r` of `matrix` is the image of row `r` of `domain`. Frame:
//! `{"idempotents": [coefficient lists], "hull": bool}`. Scalars are strings
//! `"num/den"` over ℚ and integers over 𝔽_p.

use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, LinearMap, StructureConstant};
use crate::field::{FieldError, FieldSpec, Scalar};
use crate::linalg::{self, solve_combination, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("malformed document: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub type Result<T, E = JsonError> = std::result::Result<T, E>;

fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(JsonError::Shape(msg.into()))
}

fn field_of(v: &Value) -> Result<FieldSpec> {
    match v.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(FieldSpec::Rational),
        Some("prime") => {
            let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| JsonError::Shape("prime field needs p".into()))?;
            Ok(FieldSpec::prime(p)?)
        }
        _ => shape("field must be {\"kind\": \"rational\"} or {\"kind\": \"prime\", \"p\": p}"),
    }
}

pub fn field_to_json(f: FieldSpec) -> Value {
    serde_json::to_value(f).expect("field specs serialize")
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| JsonError::Shape(format!("missing key {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| JsonError::Shape(format!("{what} must be an array")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| JsonError::Shape(format!("{what} must be a nonnegative integer")))
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn vector_from_json(field: FieldSpec, len: usize, v: &Value) -> Result<Vector> {
    let items = array(v, "coefficient vector")?;
    if items.len() != len {
        return shape(format!("coefficient vector has length {}, expected {len}", items.len()));
    }
    items.iter().map(|x| field.parse_scalar(x).map_err(JsonError::from)).collect()
}

pub fn element_to_json(x: &Element) -> Value {
    vector_to_json(x.coeffs())
}

pub fn element_from_json(alg: &Algebra, v: &Value) -> Result<Element> {
    Ok(Element::from_vec(vector_from_json(alg.field(), alg.dim(), v)?))
}

pub fn algebra_to_json(a: &Algebra) -> Value {
    let table: Vec<Value> = a
        .table()
        .iter()
        .map(|sc| json!([sc.i, sc.j, sc.k, sc.c.to_json()]))
        .collect();
    let mut m = Map::new();
    m.insert("field".into(), field_to_json(a.field()));
    m.insert("dim".into(), json!(a.dim()));
    m.insert("basis".into(), json!(a.basis_names()));
    m.insert("table".into(), Value::Array(table));
    m.insert("unit".into(), a.unit().map(element_to_json).unwrap_or(Value::Null));
    Value::Object(m)
}

pub fn algebra_from_json(v: &Value) -> Result<Algebra> {
    let field = field_of(get(v, "field")?)?;
    let dim = index(get(v, "dim")?, "dim")?;
    let names: Vec<String> = array(get(v, "basis")?, "basis")?
        .iter()
        .map(|s| s.as_str().map(str::to_owned).ok_or_else(|| JsonError::Shape("basis names must be strings".into())))
        .collect::<Result<_>>()?;
    if names.len() != dim {
        return shape(format!("basis has {} names, dim is {dim}", names.len()));
    }
    let mut table = Vec::new();
    for entry in array(get(v, "table")?, "table")? {
        let e = array(entry, "table entry")?;
        if e.len() != 4 {
            return shape("table entries are [i, j, k, c]");
        }
        table.push(StructureConstant {
            i: index(&e[0], "i")?,
            j: index(&e[1], "j")?,
            k: index(&e[2], "k")?,
            c: field.parse_scalar(&e[3])?,
        });
    }
    let unit = match v.get("unit") {
        None | Some(Value::Null) => None,
        Some(u) => Some(Element::from_vec(vector_from_json(field, dim, u)?)),
    };
    Ok(Algebra::new(field, names, table, unit)?)
}

pub fn map_to_json(f: &LinearMap) -> Value {
    json!({
        "domain": f.domain().basis().iter().map(|r| vector_to_json(r)).collect::<Vec<_>>(),
        "matrix": f.matrix().iter().map(|r| vector_to_json(r)).collect::<Vec<_>>(),
    })
}

/// Reads a map document; the domain rows must be linearly independent.
pub fn map_from_json(source: &Arc<Algebra>, target: &Arc<Algebra>, v: &Value) -> Result<LinearMap> {
    let field = source.field();
    if target.field() != field {
        return Err(AlgebraError::FieldMismatch(field, target.field()).into());
    }
    let rows: Vec<Vector> = array(get(v, "domain")?, "domain")?
        .iter()
        .map(|r| vector_from_json(field, source.dim(), r))
        .collect::<Result<_>>()?;
    let values: Vec<Vector> = array(get(v, "matrix")?, "matrix")?
        .iter()
        .map(|r| vector_from_json(field, target.dim(), r))
        .collect::<Result<_>>()?;
    if rows.len() != values.len() {
        return shape("domain and matrix must have the same number of rows");
    }
    let domain = Subspace::span(field, source.dim(), &rows);
    if domain.rank() != rows.len() {
        return shape("domain rows are linearly dependent");
    }
    let images = domain
        .basis()
        .iter()
        .map(|c| {
            let sol = solve_combination(field, source.dim(), &rows, c).expect("row of the span");
            linalg::combine(field, target.dim(), &sol.particular, &values)
        })
        .collect();
    Ok(LinearMap::new(source.clone(), target.clone(), domain, images)?)
}

/// A frame as given by the user: idempotent coordinates and the hull flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDoc {
    pub idempotents: Vec<Element>,
    pub hull: bool,
}

pub fn frame_to_json(doc: &FrameDoc) -> Value {
    json!({
        "idempotents": doc.idempotents.iter().map(element_to_json).collect::<Vec<_>>(),
        "hull": doc.hull,
    })
}

/// Idempotents may be given in `A`'s coordinates or, with `"hull": true`,
/// in the hull's (one extra trailing coordinate).
pub fn frame_from_json(alg: &Algebra, v: &Value) -> Result<FrameDoc> {
    let hull = match v.get("hull") {
        None => false,
        Some(h) => h.as_bool().ok_or_else(|| JsonError::Shape("hull must be a boolean".into()))?,
    };
    let idempotents = array(get(v, "idempotents")?, "idempotents")?
        .iter()
        .map(|e| {
            let len = array(e, "idempotent")?.len();
            if len == alg.dim() || (hull && len == alg.dim() + 1) {
                Ok(Element::from_vec(vector_from_json(alg.field(), len, e)?))
            } else {
                shape(format!("idempotent has length {len}, expected {}", alg.dim()))
            }
        })
        .collect::<Result<_>>()?;
    Ok(FrameDoc { idempotents, hull })
}

/// Canonical pretty-printed text of a document, ending in a newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
