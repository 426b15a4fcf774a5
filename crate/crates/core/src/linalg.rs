//! Dense exact linear algebra: row reduction, canonical subspaces, and
//! linear system solving over a [`FieldSpec`].

use crate::field::{FieldSpec, Scalar};

/// A coordinate vector.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: FieldSpec, len: usize) -> Vector {
    vec![field.zero(); len]
}

pub fn unit_vector(field: FieldSpec, len: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, len);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

/// Σ coeffs[r] · rows[r]
pub fn combine(field: FieldSpec, len: usize, coeffs: &[Scalar], rows: &[Vector]) -> Vector {
    let mut out = zero_vector(field, len);
    for (c, r) in coeffs.iter().zip(rows) {
        axpy(&mut out, c, r);
    }
    out
}

fn first_nonzero(v: &[Scalar]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// Incremental reduced row echelon form.
///
/// Rows are kept fully reduced (each row vanishes on the pivots of the
/// others) with leading coefficient one, so reduction order is irrelevant and
/// the final sorted form is the canonical RREF of the span.
#[derive(Debug, Clone)]
pub struct EchelonBuilder {
    field: FieldSpec,
    len: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub fn new(field: FieldSpec, len: usize) -> Self {
        Self { field, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Residual of `v` modulo the current span.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -&v[p];
                axpy(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` to the span; returns `true` if the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        if self.is_full() {
            return false;
        }
        let mut r = self.reduce(v);
        let Some(p) = first_nonzero(&r) else {
            return false;
        };
        let inv = r[p].inverse().expect("nonzero pivot");
        r = scale_vector(&inv, &r);
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let c = -&row[p];
                axpy(row, &c, &r);
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        let mut pairs: Vec<(usize, Vector)> = self.pivots.into_iter().zip(self.rows).collect();
        pairs.sort_by_key(|(p, _)| *p);
        let (pivots, rows) = pairs.into_iter().unzip();
        Subspace { field: self.field, ambient_dim: self.len, rows, pivots }
    }
}

/// A subspace of `F^n` in canonical reduced row echelon form.
///
/// Two equal subspaces have identical `rows`, so `==` is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient_dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Self { field, ambient_dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Self {
            field,
            ambient_dim,
            rows: (0..ambient_dim).map(|i| unit_vector(field, ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span<'a, I>(field: FieldSpec, ambient_dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut b = EchelonBuilder::new(field, ambient_dim);
        for v in vectors {
            b.insert(v);
            if b.is_full() {
                break;
            }
        }
        b.into_subspace()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient_dim
    }

    /// Canonical basis rows.
    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn builder(&self) -> EchelonBuilder {
        EchelonBuilder {
            field: self.field,
            len: self.ambient_dim,
            rows: self.rows.clone(),
            pivots: self.pivots.clone(),
        }
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if v.len() != self.ambient_dim {
            return None;
        }
        let coeffs: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let recon = combine(self.field, self.ambient_dim, &coeffs, &self.rows);
        (recon.as_slice() == v).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut b = self.builder();
        for r in &other.rows {
            b.insert(r);
        }
        b.into_subspace()
    }

    pub fn sum_all<'a, I: IntoIterator<Item = &'a Subspace>>(
        field: FieldSpec,
        ambient_dim: usize,
        parts: I,
    ) -> Subspace {
        let mut b = EchelonBuilder::new(field, ambient_dim);
        for s in parts {
            for r in &s.rows {
                b.insert(r);
            }
        }
        b.into_subspace()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = Σ a_r u_r = Σ b_s v_s; kernel of [U; -V]
        let mut cols: Vec<Vector> = self.rows.clone();
        cols.extend(other.rows.iter().map(|r| r.iter().map(|x| -x).collect()));
        let kernel = kernel_of_combination(self.field, self.ambient_dim, &cols);
        let k = self.rank();
        let vecs: Vec<Vector> = kernel
            .iter()
            .map(|c| combine(self.field, self.ambient_dim, &c[..k], &self.rows))
            .collect();
        Subspace::span(self.field, self.ambient_dim, &vecs)
    }

    /// Residual of `v` against the canonical basis (zero iff `v` is inside).
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        self.builder().reduce(v)
    }
}

/// Solution set of Σ t_i · vectors_i = target.
#[derive(Debug, Clone)]
pub struct CombinationSolution {
    /// Particular solution with every free unknown set to zero.
    pub particular: Vector,
    /// Basis of the homogeneous solution space.
    pub kernel: Vec<Vector>,
}

/// Gauss–Jordan on a dense matrix; returns pivot columns.
fn rref_in_place(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        rows[r] = scale_vector(&inv, &rows[r]);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -&row[c];
                axpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Finds coefficients `t` with Σ t_i vectors_i = target.
pub fn solve_combination(
    field: FieldSpec,
    len: usize,
    vectors: &[Vector],
    target: &[Scalar],
) -> Option<CombinationSolution> {
    let m = vectors.len();
    // One equation per coordinate; columns are unknowns plus the right-hand side.
    let mut rows: Vec<Vector> = (0..len)
        .map(|k| {
            let mut row: Vector = vectors.iter().map(|v| v[k].clone()).collect();
            row.push(target[k].clone());
            row
        })
        .filter(|row| !is_zero_vector(row))
        .collect();
    let pivots = rref_in_place(&mut rows, m + 1);
    if pivots.last() == Some(&m) {
        return None;
    }
    let mut particular = zero_vector(field, m);
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = rows[r][m].clone();
    }
    let kernel = (0..m)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut k = zero_vector(field, m);
            k[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                k[p] = -&rows[r][free];
            }
            k
        })
        .collect();
    Some(CombinationSolution { particular, kernel })
}

/// Basis of { t : Σ t_i vectors_i = 0 }.
pub fn kernel_of_combination(field: FieldSpec, len: usize, vectors: &[Vector]) -> Vec<Vector> {
    solve_combination(field, len, vectors, &zero_vector(field, len))
        .map(|s| s.kernel)
        .unwrap_or_default()
}

/// Solves `X · basis = values` for square invertible `basis` (rows), i.e.
/// returns the matrix whose k-th row is the image of the k-th standard
/// basis vector under the linear map sending basis row r to values row r.
pub fn solve_for_map(
    basis: &[Vector],
    values: &[Vector],
    value_len: usize,
) -> Option<Vec<Vector>> {
    let n = basis.len();
    if basis.iter().any(|b| b.len() != n) {
        return None;
    }
    let mut rows: Vec<Vector> = basis
        .iter()
        .zip(values)
        .map(|(b, v)| b.iter().chain(v.iter()).cloned().collect())
        .collect();
    let pivots = rref_in_place(&mut rows, n + value_len);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}
