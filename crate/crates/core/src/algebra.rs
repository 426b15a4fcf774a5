//! Finite-dimensional associative algebras given by structure constants.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::linalg::{
    self, axpy, is_zero_vector, kernel_of_combination, scale_vector, unit_vector, zero_vector,
    EchelonBuilder, Subspace, Vector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("element of dimension {got} used in an algebra of dimension {expected}")]
    AlgebraMismatch { expected: usize, got: usize },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("structure constants are not associative on basis triple ({0}, {1}, {2})")]
    NonAssociative(usize, usize, usize),
    #[error("claimed unit fails on basis element {0}")]
    NotUnit(usize),
    #[error("algebra has no unit")]
    NotUnital,
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basis name list has length {names} but dimension is {dim}")]
    BasisNames { names: usize, dim: usize },
    #[error("element is not in the domain of the map")]
    NotInDomain,
    #[error("image list has {got} entries, domain rank is {expected}")]
    ImageCount { expected: usize, got: usize },
    #[error("subspace is not a two-sided ideal")]
    NotIdeal,
    #[error("dimension must be positive")]
    ZeroDimension,
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

/// An element of an algebra, as a coordinate vector in the algebra's basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    coeffs: Vector,
}

impl Element {
    pub fn from_vec(coeffs: Vector) -> Self {
        Self { coeffs }
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        Self { coeffs: zero_vector(field, dim) }
    }

    pub fn basis(field: FieldSpec, dim: usize, i: usize) -> Self {
        Self { coeffs: unit_vector(field, dim, i) }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vector {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coeffs)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element::from_vec(linalg::add_vectors(&self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element::from_vec(linalg::sub_vectors(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element::from_vec(scale_vector(c, &self.coeffs))
    }

    pub fn neg(&self) -> Element {
        Element::from_vec(self.coeffs.iter().map(|x| -x).collect())
    }

    /// Pads with zeros (or truncates) to `len` coordinates.
    pub fn resized(&self, field: FieldSpec, len: usize) -> Element {
        let mut v = self.coeffs.clone();
        v.resize(len, field.zero());
        Element::from_vec(v)
    }
}

/// One entry `b_i · b_j = … + c·b_k + …` of a structure-constant table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Scalar,
}

/// A finite-dimensional associative algebra over an exact field.
///
/// Associativity (and the unit, if one is given) is checked exhaustively on
/// basis triples at construction; a constructed `Algebra` is immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    names: Vec<String>,
    // products[i * dim + j] = sparse expansion of b_i b_j, sorted by k
    products: Vec<Vec<(usize, Scalar)>>,
    unit: Option<Element>,
}

impl Algebra {
    pub fn new(
        field: FieldSpec,
        names: Vec<String>,
        table: impl IntoIterator<Item = StructureConstant>,
        unit: Option<Element>,
    ) -> Result<Self> {
        let dim = names.len();
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        let mut dense: Vec<Vector> = Vec::new();
        let mut touched = vec![false; dim * dim];
        dense.resize_with(dim * dim, Vec::new);
        for sc in table {
            for index in [sc.i, sc.j, sc.k] {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index, dim });
                }
            }
            if sc.c.field() != field {
                return Err(AlgebraError::FieldMismatch(field, sc.c.field()));
            }
            let slot = sc.i * dim + sc.j;
            if !touched[slot] {
                dense[slot] = zero_vector(field, dim);
                touched[slot] = true;
            }
            dense[slot][sc.k] = &dense[slot][sc.k] + &sc.c;
        }
        let products = dense
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect::<Vec<_>>()
            })
            .collect();
        let alg = Self { field, names, products, unit: None };
        alg.check_associative()?;
        if let Some(u) = unit {
            alg.check_dim(&u)?;
            for i in 0..dim {
                let b = alg.basis_element(i);
                if alg.mul(&u, &b) != b || alg.mul(&b, &u) != b {
                    return Err(AlgebraError::NotUnit(i));
                }
            }
            return Ok(Self { unit: Some(u), ..alg });
        }
        Ok(alg)
    }

    fn check_associative(&self) -> Result<()> {
        let dim = self.dim();
        let bad = (0..dim).into_par_iter().find_map_first(|i| {
            for j in 0..dim {
                let ij = self.basis_product_vec(i, j);
                for k in 0..dim {
                    let left = self.mul_vec_basis_right(&ij, k);
                    let jk = self.basis_product_vec(j, k);
                    let right = self.mul_basis_left_vec(i, &jk);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            Some((i, j, k)) => Err(AlgebraError::NonAssociative(i, j, k)),
            None => Ok(()),
        }
    }

    fn basis_product_vec(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vector(self.field, self.dim());
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    fn mul_vec_basis_right(&self, x: &[Scalar], k: usize) -> Vector {
        let mut out = zero_vector(self.field, self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (m, c) in self.basis_product(i, k) {
                out[*m] = &out[*m] + &(xi * c);
            }
        }
        out
    }

    fn mul_basis_left_vec(&self, i: usize, y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim());
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (m, c) in self.basis_product(i, j) {
                out[*m] = &out[*m] + &(yj * c);
            }
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> Option<&Element> {
        self.unit.as_ref()
    }

    /// Sparse expansion of `b_i b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim() + j]
    }

    /// The structure constants in canonical (i, j, k) order.
    pub fn table(&self) -> Vec<StructureConstant> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in self.basis_product(i, j) {
                    out.push(StructureConstant { i, j, k: *k, c: c.clone() });
                }
            }
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> Element {
        Element::basis(self.field, self.dim(), i)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.field, self.dim())
    }

    /// Σ c·b_i over the given sparse terms.
    pub fn element(&self, terms: &[(usize, i64)]) -> Element {
        let mut v = zero_vector(self.field, self.dim());
        for &(i, c) in terms {
            v[i] = &v[i] + &self.field.from_i64(c);
        }
        Element::from_vec(v)
    }

    pub fn check_dim(&self, x: &Element) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(AlgebraError::AlgebraMismatch { expected: self.dim(), got: x.dim() });
        }
        if let Some(c) = x.coeffs().first() {
            if c.field() != self.field {
                return Err(AlgebraError::FieldMismatch(self.field, c.field()));
            }
        }
        Ok(())
    }

    /// Checked product.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.mul(x, y))
    }

    /// Checked commutator `xy − yx`.
    pub fn lie_bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bracket(x, y))
    }

    /// Product without dimension checks; panics on mismatched lengths.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        Element::from_vec(self.mul_slices(x.coeffs(), y.coeffs()))
    }

    pub fn mul_slices(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let dim = self.dim();
        assert!(x.len() == dim && y.len() == dim, "element dimension mismatch");
        let mut out = zero_vector(self.field, dim);
        let ys: Vec<(usize, &Scalar)> =
            y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let products = &self.products[i * dim + j];
                if products.is_empty() {
                    continue;
                }
                let w = xi * yj;
                for (k, c) in products {
                    out[*k] = &out[*k] + &(&w * c);
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        self.mul(x, y).sub(&self.mul(y, x))
    }

    /// Product of a list of factors, left to right.
    pub fn product_of(&self, factors: &[Element]) -> Element {
        let mut it = factors.iter();
        let Some(first) = it.next() else {
            return self.unit.clone().expect("empty product in a non-unital algebra");
        };
        it.fold(first.clone(), |acc, f| self.mul(&acc, f))
    }

    pub fn span(&self, elements: &[Element]) -> Result<Subspace> {
        let mut b = EchelonBuilder::new(self.field, self.dim());
        for e in elements {
            self.check_dim(e)?;
            b.insert(e.coeffs());
        }
        Ok(b.into_subspace())
    }

    pub fn whole(&self) -> Subspace {
        Subspace::full(self.field, self.dim())
    }

    fn check_subspace(&self, u: &Subspace) -> Result<()> {
        if u.ambient_dim() != self.dim() {
            return Err(AlgebraError::AlgebraMismatch {
                expected: self.dim(),
                got: u.ambient_dim(),
            });
        }
        Ok(())
    }

    fn span_of_pairs(
        &self,
        u: &Subspace,
        v: &Subspace,
        op: impl Fn(&[Scalar], &[Scalar]) -> Vector,
    ) -> Subspace {
        let mut b = EchelonBuilder::new(self.field, self.dim());
        'outer: for x in u.basis() {
            for y in v.basis() {
                b.insert(&op(x, y));
                if b.is_full() {
                    break 'outer;
                }
            }
        }
        b.into_subspace()
    }

    /// span{ u·v : u ∈ U, v ∈ V }
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check_subspace(u)?;
        self.check_subspace(v)?;
        Ok(self.span_of_pairs(u, v, |x, y| self.mul_slices(x, y)))
    }

    /// span{ [u, v] : u ∈ U, v ∈ V }
    pub fn bracket_span(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check_subspace(u)?;
        self.check_subspace(v)?;
        Ok(self.span_of_pairs(u, v, |x, y| {
            linalg::sub_vectors(&self.mul_slices(x, y), &self.mul_slices(y, x))
        }))
    }

    /// The derived Lie ring [A, A].
    pub fn derived_lie_ring(&self) -> Subspace {
        let dim = self.dim();
        let mut b = EchelonBuilder::new(self.field, dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let x = self.basis_element(i);
                let y = self.basis_element(j);
                b.insert(self.bracket(&x, &y).coeffs());
            }
        }
        b.into_subspace()
    }

    /// Closure of `U` under products: the (non-unital) subring generated by `U`.
    pub fn subring_generated(&self, u: &Subspace) -> Result<Subspace> {
        self.check_subspace(u)?;
        let mut cur = u.clone();
        loop {
            let next = cur.sum(&self.span_of_pairs(&cur, u, |x, y| self.mul_slices(x, y)));
            if next.rank() == cur.rank() {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Ann(A) = { a : aA = Aa = 0 }.
    pub fn annihilator(&self) -> Subspace {
        self.annihilator_in(&self.whole()).expect("whole space has matching dimension")
    }

    /// Annihilator of the subalgebra `S`: { s ∈ S : sS = Ss = 0 }.
    pub fn annihilator_in(&self, s: &Subspace) -> Result<Subspace> {
        self.check_subspace(s)?;
        let basis = s.basis();
        let dim = self.dim();
        // unknowns: coefficients over S's basis; constraints stacked into one long vector
        let columns: Vec<Vector> = basis
            .iter()
            .map(|x| {
                let mut col = Vec::with_capacity(2 * dim * basis.len());
                for t in basis {
                    col.extend(self.mul_slices(x, t));
                    col.extend(self.mul_slices(t, x));
                }
                col
            })
            .collect();
        let len = 2 * dim * basis.len();
        let kernel = kernel_of_combination(self.field, len, &columns);
        let vectors: Vec<Vector> = kernel
            .iter()
            .map(|c| linalg::combine(self.field, dim, c, basis))
            .collect();
        Ok(Subspace::span(self.field, dim, &vectors))
    }

    /// `true` if `U` is a two-sided ideal.
    pub fn is_ideal(&self, u: &Subspace) -> Result<bool> {
        let all = self.whole();
        Ok(self.subspace_product(&all, u)?.is_subspace_of(u)
            && self.subspace_product(u, &all)?.is_subspace_of(u))
    }

    pub fn is_commutative(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (0..dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Human-readable form such as `2*ze1e2 - E12`.
    pub fn format_element(&self, x: &Element) -> String {
        let mut out = String::new();
        for (i, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != "1" {
                let _ = write!(out, "{mag}*");
            }
            out.push_str(&self.names[i]);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    // ---- constructors ----

    /// The 1-dimensional algebra 𝔽.
    pub fn scalars(field: FieldSpec) -> Algebra {
        let one = field.one();
        Algebra::new(
            field,
            vec!["1".into()],
            [StructureConstant { i: 0, j: 0, k: 0, c: one.clone() }],
            Some(Element::from_vec(vec![one])),
        )
        .expect("scalar algebra is associative")
    }

    /// 𝔽^n with componentwise product.
    pub fn field_product(field: FieldSpec, n: usize) -> Result<Algebra> {
        let names = (1..=n).map(|i| format!("u{i}")).collect();
        let table = (0..n).map(|i| StructureConstant { i, j: i, k: i, c: field.one() });
        Algebra::new(field, names, table, Some(Element::from_vec(vec![field.one(); n])))
    }

    /// An algebra of dimension `dim` in which every product is zero.
    pub fn null(field: FieldSpec, dim: usize) -> Result<Algebra> {
        let names = (1..=dim).map(|i| format!("n{i}")).collect();
        Algebra::new(field, names, [], None)
    }

    /// M_n(𝔽).
    pub fn full_matrix(field: FieldSpec, n: usize) -> Result<Algebra> {
        Algebra::scalars(field).matrix_algebra(n)
    }

    /// The opposite algebra: same basis, product reversed.
    pub fn opposite(&self) -> Algebra {
        let table = self.table().into_iter().map(|sc| StructureConstant { i: sc.j, j: sc.i, ..sc });
        let names = self.names.iter().map(|n| format!("{n}^op")).collect();
        Algebra::new(self.field, names, table, self.unit.clone())
            .expect("opposite of an associative algebra is associative")
    }

    /// The same structure constants with basis names replaced.
    pub fn renamed(&self, names: Vec<String>) -> Result<Algebra> {
        if names.len() != self.dim() {
            return Err(AlgebraError::BasisNames { names: names.len(), dim: self.dim() });
        }
        Ok(Algebra { names, ..self.clone() })
    }

    /// A ⊕ B with componentwise product; the basis of A comes first.
    pub fn direct_sum(&self, other: &Algebra) -> Result<Algebra> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        let off = self.dim();
        let mut table = self.table();
        table.extend(other.table().into_iter().map(|sc| StructureConstant {
            i: sc.i + off,
            j: sc.j + off,
            k: sc.k + off,
            c: sc.c,
        }));
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let unit = match (&self.unit, &other.unit) {
            (Some(a), Some(b)) => {
                let mut v = a.coeffs().to_vec();
                v.extend(b.coeffs().iter().cloned());
                Some(Element::from_vec(v))
            }
            _ => None,
        };
        Algebra::new(self.field, names, table, unit)
    }

    /// M_n(R) with basis E_ij ⊗ r_k at index (i·n + j)·dim R + k. It is
    /// unital exactly when R is.
    pub fn matrix_algebra(&self, n: usize) -> Result<Algebra> {
        if n == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        let shape = MatrixShape { n, inner_dim: self.dim() };
        let scalar_inner = self.dim() == 1;
        let mut names = Vec::with_capacity(n * n * self.dim());
        for i in 0..n {
            for j in 0..n {
                for r in &self.names {
                    if scalar_inner {
                        names.push(format!("E{}{}", i + 1, j + 1));
                    } else {
                        names.push(format!("E{}{}*{}", i + 1, j + 1, r));
                    }
                }
            }
        }
        let mut table = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for sc in self.table() {
                        table.push(StructureConstant {
                            i: shape.index(i, j, sc.i),
                            j: shape.index(j, l, sc.j),
                            k: shape.index(i, l, sc.k),
                            c: sc.c,
                        });
                    }
                }
            }
        }
        let unit = self.unit.as_ref().map(|unit_r| {
            let mut unit = zero_vector(self.field, shape.dim());
            for i in 0..n {
                for (k, c) in unit_r.coeffs().iter().enumerate() {
                    unit[shape.index(i, i, k)] = c.clone();
                }
            }
            Element::from_vec(unit)
        });
        Algebra::new(self.field, names, table, unit)
    }

    /// A + 𝔽·1: a new identity is adjoined as the last basis vector, even
    /// when `A` already has one. Returns the hull and the embedding of `A`.
    pub fn unital_hull(self: &Arc<Self>) -> (Arc<Algebra>, LinearMap) {
        let dim = self.dim();
        let mut table = self.table();
        for i in 0..=dim {
            table.push(StructureConstant { i: dim, j: i, k: i, c: self.field.one() });
            if i < dim {
                table.push(StructureConstant { i, j: dim, k: i, c: self.field.one() });
            }
        }
        let mut names = self.names.clone();
        names.push("1".into());
        let hull = Arc::new(
            Algebra::new(
                self.field,
                names,
                table,
                Some(Element::basis(self.field, dim + 1, dim)),
            )
            .expect("unital hull of an associative algebra is associative"),
        );
        let embedding = LinearMap::from_fn(self.clone(), hull.clone(), self.whole(), |x| {
            x.resized(self.field, dim + 1)
        })
        .expect("embedding is defined on the whole space");
        (hull, embedding)
    }

    /// A / I for a two-sided ideal `I`, with the projection map.
    ///
    /// The quotient basis is the set of non-pivot basis vectors of `I`.
    pub fn quotient(self: &Arc<Self>, ideal: &Subspace) -> Result<(Arc<Algebra>, LinearMap)> {
        self.check_subspace(ideal)?;
        if !self.is_ideal(ideal)? {
            return Err(AlgebraError::NotIdeal);
        }
        let dim = self.dim();
        let kept: Vec<usize> = (0..dim).filter(|c| !ideal.pivots().contains(c)).collect();
        if kept.is_empty() {
            return Err(AlgebraError::ZeroDimension);
        }
        let project = |v: &[Scalar]| -> Vector {
            let r = ideal.reduce(v);
            kept.iter().map(|&c| r[c].clone()).collect()
        };
        let mut table = Vec::new();
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                let p = project(&self.basis_product_vec(i, j));
                for (k, c) in p.into_iter().enumerate() {
                    if !c.is_zero() {
                        table.push(StructureConstant { i: a, j: b, k, c });
                    }
                }
            }
        }
        let names = kept.iter().map(|&c| self.names[c].clone()).collect();
        let unit = self.unit.as_ref().map(|u| Element::from_vec(project(u.coeffs())));
        let q = Arc::new(Algebra::new(self.field, names, table, unit)?);
        let map = LinearMap::from_fn(self.clone(), q.clone(), self.whole(), |x| {
            Element::from_vec(project(x.coeffs()))
        })?;
        Ok((q, map))
    }
}

/// Index bookkeeping for M_n(R): basis E_ij ⊗ r_k at (i·n + j)·inner_dim + k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixShape {
    pub n: usize,
    pub inner_dim: usize,
}

impl MatrixShape {
    pub fn dim(&self) -> usize {
        self.n * self.n * self.inner_dim
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.inner_dim + k
    }

    /// The matrix with `r` in position (i, j) and zeros elsewhere (0-based).
    pub fn embed(&self, field: FieldSpec, i: usize, j: usize, r: &Element) -> Element {
        let mut v = zero_vector(field, self.dim());
        for (k, c) in r.coeffs().iter().enumerate() {
            v[self.index(i, j, k)] = c.clone();
        }
        Element::from_vec(v)
    }

    /// Matrix unit E_ij for M_n(𝔽).
    pub fn unit(&self, field: FieldSpec, i: usize, j: usize) -> Element {
        debug_assert_eq!(self.inner_dim, 1);
        Element::basis(field, self.dim(), self.index(i, j, 0))
    }

    /// Entry (i, j) of `x`, as an element of R.
    pub fn entry(&self, x: &Element, i: usize, j: usize) -> Element {
        let start = self.index(i, j, 0);
        Element::from_vec(x.coeffs()[start..start + self.inner_dim].to_vec())
    }

    /// Builds a matrix from a function of its entries.
    pub fn from_entries(
        &self,
        field: FieldSpec,
        mut entry: impl FnMut(usize, usize) -> Element,
    ) -> Element {
        let mut v = zero_vector(field, self.dim());
        for i in 0..self.n {
            for j in 0..self.n {
                let e = entry(i, j);
                for (k, c) in e.coeffs().iter().enumerate() {
                    v[self.index(i, j, k)] = c.clone();
                }
            }
        }
        Element::from_vec(v)
    }

    /// Entrywise transpose (an anti-automorphism when R is commutative).
    pub fn transpose(&self, field: FieldSpec, x: &Element) -> Element {
        self.from_entries(field, |i, j| self.entry(x, j, i))
    }
}

/// A linear map from a subspace of `source` into `target`, stored as the
/// images of the domain's canonical basis rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    domain: Subspace,
    images: Vec<Vector>,
}

impl LinearMap {
    pub fn new(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        domain: Subspace,
        images: Vec<Vector>,
    ) -> Result<Self> {
        if domain.ambient_dim() != source.dim() {
            return Err(AlgebraError::AlgebraMismatch {
                expected: source.dim(),
                got: domain.ambient_dim(),
            });
        }
        if images.len() != domain.rank() {
            return Err(AlgebraError::ImageCount { expected: domain.rank(), got: images.len() });
        }
        for im in &images {
            if im.len() != target.dim() {
                return Err(AlgebraError::AlgebraMismatch { expected: target.dim(), got: im.len() });
            }
        }
        Ok(Self { source, target, domain, images })
    }

    /// The map whose value on each domain basis row is `f(row)`.
    pub fn from_fn(
        source: Arc<Algebra>,
        target: Arc<Algebra>,
        domain: Subspace,
        f: impl Fn(&Element) -> Element,
    ) -> Result<Self> {
        let images = domain
            .basis()
            .iter()
            .map(|r| f(&Element::from_vec(r.clone())).into_vec())
            .collect();
        Self::new(source, target, domain, images)
    }

    pub fn identity(alg: Arc<Algebra>, domain: Subspace) -> Result<Self> {
        Self::from_fn(alg.clone(), alg, domain, |x| x.clone())
    }

    pub fn zero(source: Arc<Algebra>, target: Arc<Algebra>, domain: Subspace) -> Result<Self> {
        let z = target.zero();
        Self::from_fn(source, target, domain, |_| z.clone())
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    /// Images of the domain basis rows, in order.
    pub fn matrix(&self) -> &[Vector] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.source.check_dim(x)?;
        let coords = self.domain.coordinates(x.coeffs()).ok_or(AlgebraError::NotInDomain)?;
        Ok(Element::from_vec(linalg::combine(
            self.target.field(),
            self.target.dim(),
            &coords,
            &self.images,
        )))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LinearMap) -> Result<LinearMap> {
        let images = self
            .images
            .iter()
            .map(|im| other.apply(&Element::from_vec(im.clone())).map(Element::into_vec))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::new(self.source.clone(), other.target.clone(), self.domain.clone(), images)
    }

    pub fn restrict(&self, domain: Subspace) -> Result<LinearMap> {
        let images = domain
            .basis()
            .iter()
            .map(|r| self.apply(&Element::from_vec(r.clone())).map(Element::into_vec))
            .collect::<Result<Vec<_>>>()?;
        LinearMap::new(self.source.clone(), self.target.clone(), domain, images)
    }

    fn zip_with(&self, other: &LinearMap, f: impl Fn(&[Scalar], &[Scalar]) -> Vector) -> Result<LinearMap> {
        if self.domain != other.domain || self.target.dim() != other.target.dim() {
            return Err(AlgebraError::NotInDomain);
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| f(a, b)).collect();
        LinearMap::new(self.source.clone(), self.target.clone(), self.domain.clone(), images)
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        self.zip_with(other, linalg::add_vectors)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.zip_with(other, linalg::sub_vectors)
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            images: self.images.iter().map(|v| scale_vector(c, v)).collect(),
            ..self.clone()
        }
    }

    /// Kernel, as a subspace of the source algebra.
    pub fn kernel(&self) -> Subspace {
        let field = self.source.field();
        let k = kernel_of_combination(field, self.target.dim(), &self.images);
        let vecs: Vec<Vector> = k
            .iter()
            .map(|c| linalg::combine(field, self.source.dim(), c, self.domain.basis()))
            .collect();
        Subspace::span(field, self.source.dim(), &vecs)
    }

    /// Image, as a subspace of the target algebra.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.target.field(), self.target.dim(), &self.images)
    }

    /// Image of a subspace of the domain.
    pub fn image_of(&self, u: &Subspace) -> Result<Subspace> {
        let mut b = EchelonBuilder::new(self.target.field(), self.target.dim());
        for r in u.basis() {
            b.insert(self.apply(&Element::from_vec(r.clone()))?.coeffs());
        }
        Ok(b.into_subspace())
    }

    pub fn is_injective(&self) -> bool {
        self.image().rank() == self.domain.rank()
    }
}

/// Adds `c·x` into `acc` (element form of `axpy`).
pub fn accumulate(acc: &mut Element, c: &Scalar, x: &Element) {
    let mut v = std::mem::take(&mut acc.coeffs);
    axpy(&mut v, c, x.coeffs());
    acc.coeffs = v;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn m(n: usize, f: FieldSpec) -> (Arc<Algebra>, MatrixShape) {
        (Arc::new(Algebra::full_matrix(f, n).unwrap()), MatrixShape { n, inner_dim: 1 })
    }

    #[test]
    fn matrix_unit_products() {
        let (a, s) = m(2, q());
        let e12 = s.unit(q(), 0, 1);
        let e21 = s.unit(q(), 1, 0);
        assert_eq!(a.multiply(&e12, &e21).unwrap(), s.unit(q(), 0, 0));
        assert!(a.multiply(&e12, &e12).unwrap().is_zero());
        let (a3, s3) = m(3, q());
        let br = a3.lie_bracket(&s3.unit(q(), 0, 1), &s3.unit(q(), 1, 0)).unwrap();
        assert_eq!(br, s3.unit(q(), 0, 0).sub(&s3.unit(q(), 1, 1)));
        let br = a3.lie_bracket(&s3.unit(q(), 0, 1), &s3.unit(q(), 2, 0)).unwrap();
        assert_eq!(br, s3.unit(q(), 2, 1).neg());
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let (a, _) = m(2, q());
        let x = Element::zero(q(), 3);
        assert!(matches!(
            a.multiply(&x, &a.zero()),
            Err(AlgebraError::AlgebraMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let f = q();
        // b0 b0 = b0 + b1, b1 b0 = b1, b0 b1 = 0: (b0 b0) b0 = b0 + 2 b1 ≠ b0 + b1
        let table = vec![
            StructureConstant { i: 0, j: 0, k: 0, c: f.one() },
            StructureConstant { i: 0, j: 0, k: 1, c: f.one() },
            StructureConstant { i: 1, j: 0, k: 1, c: f.one() },
        ];
        let r = Algebra::new(f, vec!["a".into(), "b".into()], table, None);
        assert!(matches!(r, Err(AlgebraError::NonAssociative(..))));
    }

    #[test]
    fn span_examples() {
        let (a, s) = m(2, q());
        let e11 = s.unit(q(), 0, 0);
        let e22 = s.unit(q(), 1, 1);
        assert_eq!(a.span(&[e11.clone(), e11.add(&e22), e22]).unwrap().rank(), 2);
        assert_eq!(a.span(&[]).unwrap().rank(), 0);
    }

    #[test]
    fn subspace_products() {
        let (a, s) = m(2, q());
        let u = a.span(&[s.unit(q(), 0, 1)]).unwrap();
        let v = a.span(&[s.unit(q(), 1, 0)]).unwrap();
        assert_eq!(a.subspace_product(&u, &v).unwrap(), a.span(&[s.unit(q(), 0, 0)]).unwrap());
        assert!(a.subspace_product(&u, &Subspace::zero(q(), 4)).unwrap().is_zero());
        let (a3, s3) = m(3, q());
        let e11 = a3.span(&[s3.unit(q(), 0, 0)]).unwrap();
        let ae = a3.subspace_product(&a3.whole(), &e11).unwrap();
        assert!(a3.subspace_product(&ae, &a3.whole()).unwrap().is_full());
    }

    #[test]
    fn bracket_spans() {
        let (a3, s3) = m(3, q());
        assert_eq!(a3.bracket_span(&a3.whole(), &a3.whole()).unwrap().rank(), 8);
        let u = a3.span(&[s3.unit(q(), 0, 1)]).unwrap();
        assert!(a3.bracket_span(&u, &u).unwrap().is_zero());
        let v = a3.span(&[s3.unit(q(), 1, 2)]).unwrap();
        assert_eq!(a3.bracket_span(&u, &v).unwrap(), a3.span(&[s3.unit(q(), 0, 2)]).unwrap());
        assert!(Algebra::scalars(q()).derived_lie_ring().is_zero());
    }

    #[test]
    fn subring_generation() {
        let (a3, _) = m(3, q());
        assert!(a3.subring_generated(&a3.derived_lie_ring()).unwrap().is_full());
        assert!(a3.subring_generated(&Subspace::zero(q(), 9)).unwrap().is_zero());
        let (a2, s2) = m(2, q());
        let u = a2.span(&[s2.unit(q(), 0, 1)]).unwrap();
        assert_eq!(a2.subring_generated(&u).unwrap(), u);
    }

    #[test]
    fn annihilators() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(Algebra::full_matrix(f2, 3).unwrap().annihilator().is_zero());
        assert!(Algebra::null(q(), 2).unwrap().annihilator().is_full());
    }

    #[test]
    fn opposite_and_sums() {
        let (a2, s) = m(2, q());
        let op = a2.opposite();
        // E12 ∘ E21 = E21 E12 = E22
        assert_eq!(op.mul(&s.unit(q(), 0, 1), &s.unit(q(), 1, 0)), s.unit(q(), 1, 1));
        assert_eq!(op.opposite().table(), a2.table());
        let c = Algebra::field_product(q(), 3).unwrap();
        assert_eq!(c.opposite().table(), c.table());

        let sum = a2.direct_sum(&op).unwrap();
        assert_eq!(sum.dim(), 8);
        let left = a2.basis_element(1).resized(q(), 8);
        let mut right = vec![q().zero(); 4];
        right.extend(op.basis_element(2).into_vec());
        assert!(sum.mul(&left, &Element::from_vec(right)).is_zero());
        let mut unit = a2.unit().unwrap().coeffs().to_vec();
        unit.extend(op.unit().unwrap().coeffs().iter().cloned());
        assert_eq!(sum.unit().unwrap().coeffs(), unit.as_slice());
        assert!(matches!(
            a2.direct_sum(&Algebra::scalars(FieldSpec::prime(3).unwrap())),
            Err(AlgebraError::FieldMismatch(..))
        ));
    }

    #[test]
    fn matrix_algebra_unit_follows_the_coefficients() {
        let null2 = Algebra::null(q(), 1).unwrap().matrix_algebra(2).unwrap();
        assert!(null2.unit().is_none());
        assert_eq!(null2.dim(), 4);
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(Algebra::full_matrix(f2, 3).unwrap().dim(), 9);
        let (a2, s) = m(2, q());
        assert_eq!(a2.unit().unwrap(), &s.unit(q(), 0, 0).add(&s.unit(q(), 1, 1)));
    }

    #[test]
    fn nested_matrix_algebra_matches_flat() {
        // M_2(M_2(F)) ≅ M_4(F) via the obvious basis permutation
        let f = FieldSpec::prime(3).unwrap();
        let inner = Algebra::full_matrix(f, 2).unwrap();
        let nested = inner.matrix_algebra(2).unwrap();
        let flat = Algebra::full_matrix(f, 4).unwrap();
        let outer = MatrixShape { n: 2, inner_dim: 4 };
        let innerm = MatrixShape { n: 2, inner_dim: 1 };
        let flatm = MatrixShape { n: 4, inner_dim: 1 };
        let mut perm = [0; 16];
        for i in 0..2 {
            for j in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        perm[outer.index(i, j, innerm.index(a, b, 0))] =
                            flatm.index(2 * i + a, 2 * j + b, 0);
                    }
                }
            }
        }
        let mut permuted: Vec<_> = nested
            .table()
            .into_iter()
            .map(|sc| (perm[sc.i], perm[sc.j], perm[sc.k], sc.c))
            .collect();
        permuted.sort_by_key(|t| (t.0, t.1, t.2));
        let expected: Vec<_> = flat.table().into_iter().map(|sc| (sc.i, sc.j, sc.k, sc.c)).collect();
        assert_eq!(permuted, expected);
    }

    #[test]
    fn hull_adjoins_identity() {
        let n = Arc::new(Algebra::null(q(), 1).unwrap());
        let (hull, emb) = n.unital_hull();
        assert_eq!(hull.dim(), 2);
        let x = hull.basis_element(0);
        assert_eq!(hull.mul(hull.unit().unwrap(), &x), x);
        let (a2, _) = m(2, q());
        let (h2, emb2) = a2.unital_hull();
        assert_eq!(h2.dim(), 5);
        for (x, y) in [(0, 1), (1, 2), (2, 3), (3, 3)] {
            let (x, y) = (a2.basis_element(x), a2.basis_element(y));
            let lhs = emb2.apply(&a2.mul(&x, &y)).unwrap();
            let rhs = h2.mul(&emb2.apply(&x).unwrap(), &emb2.apply(&y).unwrap());
            assert_eq!(lhs, rhs);
        }
        assert!(emb.is_injective());
    }

    #[test]
    fn apply_map_examples() {
        let (a3, s) = m(3, q());
        let sl3 = a3.derived_lie_ring();
        let id = LinearMap::identity(a3.clone(), sl3.clone()).unwrap();
        let e12 = s.unit(q(), 0, 1);
        assert_eq!(id.apply(&e12).unwrap(), e12);
        let z = LinearMap::zero(a3.clone(), a3.clone(), sl3.clone()).unwrap();
        assert!(z.apply(&e12).unwrap().is_zero());
        let nt = LinearMap::from_fn(a3.clone(), a3.clone(), sl3, |x| s.transpose(q(), x).neg()).unwrap();
        assert_eq!(nt.apply(&e12).unwrap(), s.unit(q(), 1, 0).neg());
        assert_eq!(nt.apply(&s.unit(q(), 0, 0)), Err(AlgebraError::NotInDomain));
    }

    #[test]
    fn quotient_by_ideal() {
        let (a2, s) = m(2, q());
        let t = Arc::new(a2.direct_sum(&Algebra::scalars(q())).unwrap());
        let ideal = t.span(&[Element::basis(q(), 5, 4)]).unwrap();
        let (quo, p) = t.quotient(&ideal).unwrap();
        assert_eq!(quo.dim(), 4);
        assert_eq!(p.kernel(), ideal);
        let not_ideal = t.span(&[s.unit(q(), 0, 1).resized(q(), 5)]).unwrap();
        assert_eq!(t.quotient(&not_ideal).unwrap_err(), AlgebraError::NotIdeal);
    }

    #[test]
    fn format_elements() {
        let (a2, s) = m(2, q());
        let x = s.unit(q(), 0, 1).scale(&q().from_i64(2)).sub(&s.unit(q(), 1, 0));
        assert_eq!(a2.format_element(&x), "2*E12 - E21");
        assert_eq!(a2.format_element(&a2.zero()), "0");
    }
}
