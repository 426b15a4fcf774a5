//! Concrete algebras and maps: the Grassmann algebra with a nilpotent
//! central generator `z`, its Jordan derivation, the Lie derivation it
//! induces on `[M_2(B), M_2(B)]`, the dual-number extension `A + Aε`, and an
//! end-to-end certificate that this Lie derivation has no associative
//! extension even though `M_2(B)` has two full orthogonal idempotents.
//!
//! `B_n` has generators `e_1, …, e_n` and `z` with `e_i e_j = −e_j e_i`,
//! `z` central, `z² = 0` and `z e_i e_j e_k = 0`. Its basis is `1`, the
//! Grassmann monomials by degree then lexicographically, `z`, `z e_i`, and
//! `z e_i e_j`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, LinearMap, MatrixShape, StructureConstant};
use crate::derivation::{self, DerivationError, ExtensionAttempt};
use crate::field::FieldSpec;
use crate::lie::{self, LieError};
use crate::linalg::{self, solve_combination, Subspace, Vector};
use crate::peirce::{is_full_idempotent, IdempotentFrame, PeirceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactoryError {
    #[error("characteristic 2 is not supported by this construction")]
    CharTwo,
    #[error("at least 2 Grassmann generators are required, got {0}")]
    TooFewGenerators(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Peirce(#[from] PeirceError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error("diagonal entries of a basis element of [A, A] have no representation")]
    RepresentationFailure,
    #[error("the lifted map depends on the chosen representation")]
    NotWellDefined,
    #[error("map is not a Lie derivation")]
    NotLieDerivation,
    #[error("dual extension map is not a Lie automorphism")]
    NotAutomorphism,
    #[error("conjugating element is not invertible with the given inverse")]
    NotInvertible,
}

pub type Result<T, E = FactoryError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrassmannZSpec {
    pub n: usize,
    pub field: FieldSpec,
}

/// `B_n` together with handles to its distinguished elements.
#[derive(Debug, Clone)]
pub struct GrassmannZ {
    pub n: usize,
    pub algebra: Arc<Algebra>,
    pub unit: Element,
    pub z: Element,
    /// `e_1, …, e_n` (0-based).
    pub e: Vec<Element>,
    index: HashMap<(bool, u32), usize>,
}

fn subsets_by_degree(n: usize, max_degree: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for deg in 0..=max_degree.min(n) {
        let mut level: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize == deg).collect();
        // lexicographic order of the increasing index sequences
        level.sort_by_key(|&m| (0..n).filter(|&i| m & (1 << i) != 0).collect::<Vec<_>>());
        out.extend(level);
    }
    out
}

fn monomial_name(z: bool, mask: u32, n: usize) -> String {
    let mut s = String::new();
    if z {
        s.push('z');
    }
    for i in 0..n {
        if mask & (1 << i) != 0 {
            s.push_str(&format!("e{}", i + 1));
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// Sign of `m_S · m_T` when `S ∩ T = ∅`: one factor −1 per pair `s > t`.
fn koszul_sign(s: u32, t: u32) -> i64 {
    let mut inversions = 0;
    for i in 0..32 {
        if s & (1 << i) != 0 {
            inversions += (t & ((1u32 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Builds `B_n`.
pub fn grassmann_z_algebra(spec: GrassmannZSpec) -> Result<GrassmannZ> {
    let GrassmannZSpec { n, field } = spec;
    if n < 2 {
        return Err(FactoryError::TooFewGenerators(n));
    }
    if field.characteristic() == 2 {
        return Err(FactoryError::CharTwo);
    }
    assert!(n < 31, "too many generators");
    let mut basis: Vec<(bool, u32)> = subsets_by_degree(n, n).into_iter().map(|m| (false, m)).collect();
    basis.extend(subsets_by_degree(n, 2).into_iter().map(|m| (true, m)));
    let index: HashMap<(bool, u32), usize> = basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let mut table = Vec::new();
    for (i, &(za, s)) in basis.iter().enumerate() {
        for (j, &(zb, t)) in basis.iter().enumerate() {
            if (za && zb) || s & t != 0 {
                continue;
            }
            let z = za || zb;
            let u = s | t;
            if z && u.count_ones() > 2 {
                continue;
            }
            table.push(StructureConstant { i, j, k: index[&(z, u)], c: field.from_i64(koszul_sign(s, t)) });
        }
    }
    let names = basis.iter().map(|&(z, m)| monomial_name(z, m, n)).collect();
    let dim = basis.len();
    let unit = Element::basis(field, dim, 0);
    let algebra = Arc::new(Algebra::new(field, names, table, Some(unit.clone()))?);
    let z = Element::basis(field, dim, index[&(true, 0)]);
    let e = (0..n).map(|i| Element::basis(field, dim, index[&(false, 1 << i)])).collect();
    Ok(GrassmannZ { n, algebra, unit, z, e, index })
}

impl GrassmannZ {
    /// `z^{[with_z]} e_{g_1} ⋯ e_{g_k}` for distinct 0-based indices in any
    /// order, with the sign of the reordering (zero if an index repeats).
    pub fn monomial(&self, with_z: bool, gens: &[usize]) -> Element {
        let mut x = if with_z { self.z.clone() } else { self.unit.clone() };
        for &g in gens {
            x = self.algebra.mul(&x, &self.e[g]);
        }
        x
    }

    /// Basis index of a normal-form monomial.
    pub fn basis_index(&self, with_z: bool, gens: &[usize]) -> Option<usize> {
        let mask = gens.iter().fold(0u32, |m, &g| m | (1 << g));
        self.index.get(&(with_z, mask)).copied()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// `d(e_i) = z e_i`, and `d = 0` on every other basis monomial.
pub fn jordan_derivation_d(b: &GrassmannZ) -> Result<LinearMap> {
    let alg = &b.algebra;
    let mut images = vec![linalg::zero_vector(alg.field(), alg.dim()); alg.dim()];
    for i in 0..b.n {
        let k = b.basis_index(false, &[i]).expect("generator in basis");
        images[k] = alg.mul(&b.z, &b.e[i]).into_vec();
    }
    Ok(LinearMap::new(alg.clone(), alg.clone(), alg.whole(), images)?)
}

/// `M_2(B)` with the two diagonal idempotents.
pub fn matrix_two(b: &GrassmannZ) -> Result<(Arc<Algebra>, MatrixShape, [Element; 2])> {
    let m2 = Arc::new(b.algebra.matrix_algebra(2)?);
    let shape = MatrixShape { n: 2, inner_dim: b.dim() };
    let f = b.algebra.field();
    let idem = [shape.embed(f, 0, 0, &b.unit), shape.embed(f, 1, 1, &b.unit)];
    Ok((m2, shape, idem))
}

/// The Lie derivation `d̄` of `[M_2(B), M_2(B)]` induced by `d`:
///
/// `d̄(Σx_iy_i, b; c, −Σy_ix_i) = (Σ d(x_i)y_i + x_i d(y_i), d(b); d(c), −Σ d(y_i)x_i + y_i d(x_i))`.
///
/// The pairs `(x_i, y_i)` are found by a linear solve over basis pairs of
/// `B`; independence of that choice is checked on the full solution kernel.
pub fn lift_dbar(b: &GrassmannZ, d: &LinearMap, m2: &Arc<Algebra>) -> Result<LinearMap> {
    let alg = &b.algebra;
    let field = alg.field();
    let dim_b = alg.dim();
    let shape = MatrixShape { n: 2, inner_dim: dim_b };
    let basis = alg.basis_elements();
    let images: Vec<Element> = basis.iter().map(|x| d.apply(x)).collect::<std::result::Result<_, _>>()?;
    let mut columns: Vec<Vector> = Vec::with_capacity(dim_b * dim_b);
    let mut values: Vec<Vector> = Vec::with_capacity(dim_b * dim_b);
    for k in 0..dim_b {
        for l in 0..dim_b {
            let (x, y) = (&basis[k], &basis[l]);
            let mut col = alg.mul(x, y).into_vec();
            col.extend(alg.mul(y, x).neg().into_vec());
            columns.push(col);
            let p = alg.mul(&images[k], y).add(&alg.mul(x, &images[l]));
            let q = alg.mul(&images[l], x).add(&alg.mul(y, &images[k])).neg();
            let mut val = p.into_vec();
            val.extend(q.into_vec());
            values.push(val);
        }
    }
    let zero_target = linalg::zero_vector(field, 2 * dim_b);
    let kernel = solve_combination(field, 2 * dim_b, &columns, &zero_target)
        .map(|s| s.kernel)
        .unwrap_or_default();
    for t in &kernel {
        if !linalg::is_zero_vector(&linalg::combine(field, 2 * dim_b, t, &values)) {
            return Err(FactoryError::NotWellDefined);
        }
    }
    let derived = m2.derived_lie_ring();
    let map = LinearMap::from_fn(m2.clone(), m2.clone(), derived.clone(), |x| {
        let mut target = shape.entry(x, 0, 0).into_vec();
        target.extend(shape.entry(x, 1, 1).into_vec());
        let Some(sol) = solve_combination(field, 2 * dim_b, &columns, &target) else {
            return Element::zero(field, 0);
        };
        let v = linalg::combine(field, 2 * dim_b, &sol.particular, &values);
        let p = Element::from_vec(v[..dim_b].to_vec());
        let q = Element::from_vec(v[dim_b..].to_vec());
        let off_b = d.apply(&shape.entry(x, 0, 1)).expect("d is defined on B");
        let off_c = d.apply(&shape.entry(x, 1, 0)).expect("d is defined on B");
        shape.from_entries(field, |i, j| match (i, j) {
            (0, 0) => p.clone(),
            (0, 1) => off_b.clone(),
            (1, 0) => off_c.clone(),
            _ => q.clone(),
        })
    });
    let map = map.map_err(|e| match e {
        AlgebraError::AlgebraMismatch { .. } => FactoryError::RepresentationFailure,
        other => other.into(),
    })?;
    if !lie::check_lie_derivation(&map)?.pass {
        return Err(FactoryError::NotLieDerivation);
    }
    Ok(map)
}

/// `A' = A + Aε`, `ε² = 0`, with the Lie map `f(a + bε) = a + (d(a) + b)ε`
/// on `[A', A'] = [A, A] + [A, A]ε`.
#[derive(Debug, Clone)]
pub struct DualExtension {
    pub algebra: Arc<Algebra>,
    pub f: LinearMap,
}

/// Builds `A + Aε` and `f` for a Lie derivation `d` of `[A, A]`, and checks
/// that `f` is a bijective Lie homomorphism of `[A', A']`.
pub fn dual_extension(a: &Arc<Algebra>, d: &LinearMap) -> Result<DualExtension> {
    if d.source().dim() != a.dim() || *d.domain() != a.derived_lie_ring() {
        return Err(FactoryError::NotLieDerivation);
    }
    if !lie::check_lie_derivation(d)?.pass {
        return Err(FactoryError::NotLieDerivation);
    }
    let n = a.dim();
    let field = a.field();
    let mut table = Vec::new();
    for sc in a.table() {
        table.push(sc.clone());
        table.push(StructureConstant { i: sc.i, j: sc.j + n, k: sc.k + n, c: sc.c.clone() });
        table.push(StructureConstant { i: sc.i + n, j: sc.j, k: sc.k + n, c: sc.c });
    }
    let mut names = a.basis_names().to_vec();
    names.extend(a.basis_names().iter().map(|s| format!("{s}*eps")));
    let unit = a.unit().map(|u| u.resized(field, 2 * n));
    let ext = Arc::new(Algebra::new(field, names, table, unit)?);
    let derived = ext.derived_lie_ring();
    let f = LinearMap::from_fn(ext.clone(), ext.clone(), derived.clone(), |x| {
        let head = Element::from_vec(x.coeffs()[..n].to_vec());
        let tail = Element::from_vec(x.coeffs()[n..].to_vec());
        let da = d.apply(&head).expect("head lies in [A, A]");
        let mut v = head.into_vec();
        v.extend(da.add(&tail).into_vec());
        Element::from_vec(v)
    })?;
    if !lie::check_lie_hom(&f)?.pass || !f.is_injective() || f.image() != derived {
        return Err(FactoryError::NotAutomorphism);
    }
    Ok(DualExtension { algebra: ext, f })
}

/// The full counterexample certificate, with elements printed in the
/// basis of `M_2(B_2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub field: String,
    pub dim_b: usize,
    pub dim_a: usize,
    pub derived_rank: usize,
    pub idempotents_full: Vec<bool>,
    pub d_is_jordan_derivation: bool,
    pub d_is_derivation: bool,
    pub derivation_witness: Vec<String>,
    pub derivation_gap: String,
    pub dbar_is_lie_derivation: bool,
    pub x: String,
    pub y: String,
    pub xy: String,
    pub dbar_xy: String,
    pub leibniz_value: String,
    pub obstruction: Option<ObstructionReport>,
    pub obstruction_matches: bool,
    pub dual_extension_is_automorphism: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub x: String,
    pub y: String,
    pub value: String,
    pub rechecked: bool,
}

/// Builds `B_2`, `M_2(B_2)`, `d` and `d̄` over `field` and evaluates every
/// step of the counterexample.
pub fn nonstandard_witness(field: FieldSpec) -> Result<WitnessReport> {
    let b = grassmann_z_algebra(GrassmannZSpec { n: 2, field })?;
    let balg = &b.algebra;
    let d = jordan_derivation_d(&b)?;
    let jordan = lie::check_jordan_derivation(&d)?;
    let assoc = lie::check_derivation(&d)?;
    let (derivation_witness, derivation_gap) = match (&assoc.witness, &assoc.defect) {
        (Some(w), Some(g)) => (
            w.iter().map(|x| balg.format_element(x)).collect(),
            balg.format_element(&g.neg()),
        ),
        _ => (Vec::new(), "0".into()),
    };
    let (m2, shape, idem) = matrix_two(&b)?;
    let idempotents_full = idem
        .iter()
        .map(|e| is_full_idempotent(&m2, e))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let dbar = lift_dbar(&b, &d, &m2)?;
    let dbar_ok = lie::check_lie_derivation(&dbar)?.pass;

    let e1 = &b.e[0];
    let e2 = &b.e[1];
    let x = shape.from_entries(field, |i, j| match (i, j) {
        (0, 0) => e1.clone(),
        (1, 1) => e1.neg(),
        _ => balg.zero(),
    });
    let y = shape.embed(field, 0, 1, e2);
    let xy = m2.mul(&x, &y);
    let dbar_xy = dbar.apply(&xy)?;
    let leibniz = m2.mul(&dbar.apply(&x)?, &y).add(&m2.mul(&x, &dbar.apply(&y)?));
    let expected_gap = shape.embed(field, 0, 1, &b.monomial(true, &[0, 1]).scale(&field.from_i64(2)));

    let frame = IdempotentFrame::build(m2.clone(), idem.to_vec(), false)?;
    let attempt = derivation::attempt_extension_two_idempotents(&frame, &dbar)?;
    let (obstruction, obstruction_matches) = match attempt {
        ExtensionAttempt::Obstructed(o) => {
            let matches = o.x == x && o.y == y && o.value == expected_gap;
            let report = ObstructionReport {
                x: m2.format_element(&o.x),
                y: m2.format_element(&o.y),
                value: m2.format_element(&o.value),
                rechecked: o.recheck(&dbar),
            };
            (Some(report), matches)
        }
        ExtensionAttempt::Extended(_) => (None, false),
    };
    let dual_ok = dual_extension(&m2, &dbar).is_ok();

    let pass = idempotents_full.iter().all(|&f| f)
        && jordan.pass
        && !assoc.pass
        && assoc.witness.as_deref() == Some(&[e1.clone(), e2.clone()][..])
        && dbar_ok
        && dbar_xy.is_zero()
        && leibniz == expected_gap
        && obstruction.as_ref().is_some_and(|o| o.rechecked)
        && obstruction_matches
        && dual_ok;
    Ok(WitnessReport {
        field: field.to_string(),
        dim_b: balg.dim(),
        dim_a: m2.dim(),
        derived_rank: dbar.domain().rank(),
        idempotents_full,
        d_is_jordan_derivation: jordan.pass,
        d_is_derivation: assoc.pass,
        derivation_witness,
        derivation_gap,
        dbar_is_lie_derivation: dbar_ok,
        x: m2.format_element(&x),
        y: m2.format_element(&y),
        xy: m2.format_element(&xy),
        dbar_xy: m2.format_element(&dbar_xy),
        leibniz_value: m2.format_element(&leibniz),
        obstruction,
        obstruction_matches,
        dual_extension_is_automorphism: dual_ok,
        pass,
    })
}

/// `M_n(𝔽)` as a shared algebra.
pub fn full_matrix(field: FieldSpec, n: usize) -> Result<Arc<Algebra>> {
    Ok(Arc::new(Algebra::full_matrix(field, n)?))
}

/// The permutation matrix sending `e_j` to `e_{perm[j]}`, and its inverse.
pub fn permutation_matrix(field: FieldSpec, perm: &[usize]) -> (Element, Element) {
    let shape = MatrixShape { n: perm.len(), inner_dim: 1 };
    let mut p = Element::zero(field, shape.dim());
    let mut q = Element::zero(field, shape.dim());
    for (j, &i) in perm.iter().enumerate() {
        p = p.add(&shape.unit(field, i, j));
        q = q.add(&shape.unit(field, j, i));
    }
    (p, q)
}

/// `x ↦ g⁻¹ x g` on `domain`.
pub fn conjugation(a: &Arc<Algebra>, g: &Element, g_inv: &Element, domain: Subspace) -> Result<LinearMap> {
    let one = a.unit().ok_or(AlgebraError::NotUnital)?;
    if a.mul(g, g_inv) != *one || a.mul(g_inv, g) != *one {
        return Err(FactoryError::NotInvertible);
    }
    Ok(LinearMap::from_fn(a.clone(), a.clone(), domain, |x| a.mul(&a.mul(g_inv, x), g))?)
}

/// `x ↦ xᵗ`, or `x ↦ −xᵗ` when `negate`, on `domain ⊆ M_n(𝔽)`.
pub fn transpose_map(a: &Arc<Algebra>, n: usize, domain: Subspace, negate: bool) -> Result<LinearMap> {
    let shape = MatrixShape { n, inner_dim: 1 };
    if shape.dim() != a.dim() {
        return Err(AlgebraError::AlgebraMismatch { expected: shape.dim(), got: a.dim() }.into());
    }
    let field = a.field();
    Ok(LinearMap::from_fn(a.clone(), a.clone(), domain, |x| {
        let t = shape.transpose(field, x);
        if negate {
            t.neg()
        } else {
            t
        }
    })?)
}
