//! Idempotent frames, Peirce components `A_ij = e_i A e_j`, and the root
//! grading of `[A, A]` they induce.
//!
//! For a frame `e_1, …, e_n` of pairwise orthogonal full idempotents summing
//! to one (possibly in the unital hull), `[A, A]` is graded by the root
//! system of type `A_{n-1}`: the root `ω_i − ω_j` has component `A_ij`, and
//! the zero component is `Σ [A_ij, A_ji]`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, LinearMap};
use crate::field::FieldSpec;
use crate::linalg::{self, solve_combination, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeirceError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("idempotents {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("idempotents do not sum to the identity")]
    NotComplete,
    #[error("Peirce components do not decompose the algebra: {0}")]
    PeirceMismatch(String),
    #[error("idempotent {0} is not full")]
    NotFull(usize),
    #[error("a root grading needs at least 3 idempotents, got {0}")]
    TooFewIdempotents(usize),
    #[error("e_{i} is not a sum of products from A_{i}{j} A_{j}{i}", i = .i + 1, j = .j + 1)]
    NoDecomposition { i: usize, j: usize },
    #[error("grading identity violated: {0}")]
    GradingFailure(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("map does not respect the grading: {0}")]
    NotGraded(String),
    #[error("map is not an algebra homomorphism on basis pair ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("map domain does not match the source grading")]
    DomainMismatch,
}

pub type Result<T, E = PeirceError> = std::result::Result<T, E>;

/// The root `ω_i − ω_j` (0-based indices, `i ≠ j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn negated(self) -> Root {
        Root { i: self.j, j: self.i }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}-w{}", self.i + 1, self.j + 1)
    }
}

/// Where a sum of roots lands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSum {
    Zero,
    Root(Root),
    Outside,
}

/// The root system `A_{n-1} = { ω_i − ω_j : i ≠ j }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    n: usize,
    roots: Vec<Root>,
}

impl RootSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(PeirceError::TooFewIdempotents(n));
        }
        let roots = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| Root { i, j }))
            .collect();
        Ok(Self { n, roots })
    }

    pub fn rank_n(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn index_of(&self, r: Root) -> usize {
        self.roots.iter().position(|&x| x == r).expect("root in system")
    }

    /// Integer coordinates in the weight basis ω_1..ω_n.
    pub fn vector(&self, r: Root) -> Vec<i64> {
        let mut v = vec![0; self.n];
        v[r.i] += 1;
        v[r.j] -= 1;
        v
    }

    pub fn classify(&self, v: &[i64]) -> RootSum {
        if v.iter().all(|&x| x == 0) {
            return RootSum::Zero;
        }
        let pos: Vec<usize> = (0..v.len()).filter(|&k| v[k] == 1).collect();
        let neg: Vec<usize> = (0..v.len()).filter(|&k| v[k] == -1).collect();
        let others = v.iter().filter(|&&x| x != 0 && x != 1 && x != -1).count();
        if pos.len() == 1 && neg.len() == 1 && others == 0 {
            RootSum::Root(Root { i: pos[0], j: neg[0] })
        } else {
            RootSum::Outside
        }
    }

    pub fn sum(&self, a: Root, b: Root) -> RootSum {
        let v: Vec<i64> = self.vector(a).iter().zip(self.vector(b)).map(|(x, y)| x + y).collect();
        self.classify(&v)
    }
}

/// Pairwise orthogonal idempotents summing to one, with their Peirce
/// components.
///
/// When the frame lives in the unital hull, idempotents are stored in hull
/// coordinates (the adjoined identity is the last coordinate) while Peirce
/// components, which always lie in `A`, are stored in `A`'s coordinates.
#[derive(Debug, Clone)]
pub struct IdempotentFrame {
    algebra: Arc<Algebra>,
    hull: Option<Arc<Algebra>>,
    idempotents: Vec<Element>,
    peirce: Vec<Vec<Subspace>>,
    fullness: Vec<bool>,
}

fn full_in(ambient: &Algebra, base_dim: usize, e: &Element) -> bool {
    let field = ambient.field();
    let base_vectors: Vec<Vector> = (0..base_dim)
        .map(|i| linalg::unit_vector(field, ambient.dim(), i))
        .collect();
    let base = Subspace::span(field, ambient.dim(), &base_vectors);
    let e_span = Subspace::span(field, ambient.dim(), [&e.coeffs().to_vec()]);
    let ae = ambient.subspace_product(&base, &e_span).expect("same ambient");
    let aea = ambient.subspace_product(&ae, &base).expect("same ambient");
    aea == base
}

/// `A e A = A`, for an idempotent `e` of `A`.
pub fn is_full_idempotent(alg: &Algebra, e: &Element) -> Result<bool> {
    alg.check_dim(e)?;
    if alg.mul(e, e) != *e {
        return Err(PeirceError::NotIdempotent(0));
    }
    Ok(full_in(alg, alg.dim(), e))
}

impl IdempotentFrame {
    /// Validates the idempotents and computes all Peirce components.
    ///
    /// With `use_hull`, the frame is formed in `A + 𝔽·1`; idempotents may be
    /// given in `A`'s or the hull's coordinates, and if they do not already
    /// sum to the hull identity the complement `1 − Σ e_i` is appended.
    pub fn build(algebra: Arc<Algebra>, idempotents: Vec<Element>, use_hull: bool) -> Result<Self> {
        let field = algebra.field();
        let dim = algebra.dim();
        let (ambient, hull, mut es) = if use_hull {
            let (hull, _) = algebra.unital_hull();
            let es: Vec<Element> = idempotents
                .into_iter()
                .map(|e| if e.dim() == dim { e.resized(field, dim + 1) } else { e })
                .collect();
            (hull.clone(), Some(hull), es)
        } else {
            (algebra.clone(), None, idempotents)
        };
        for e in &es {
            ambient.check_dim(e)?;
        }
        for (i, e) in es.iter().enumerate() {
            if ambient.mul(e, e) != *e {
                return Err(PeirceError::NotIdempotent(i));
            }
        }
        for i in 0..es.len() {
            for j in 0..es.len() {
                if i != j && !ambient.mul(&es[i], &es[j]).is_zero() {
                    return Err(PeirceError::NotOrthogonal(i, j));
                }
            }
        }
        let one = ambient.unit().cloned().ok_or(PeirceError::NotComplete)?;
        let total = es.iter().fold(ambient.zero(), |acc, e| acc.add(e));
        if total != one {
            // 1 − Σ e_i is again an idempotent orthogonal to every e_i
            if hull.is_some() {
                es.push(one.sub(&total));
            } else {
                return Err(PeirceError::NotComplete);
            }
        }
        let n = es.len();
        let mut peirce = vec![Vec::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                let vecs: Vec<Vector> = (0..dim)
                    .map(|k| {
                        let b = Element::basis(field, ambient.dim(), k);
                        let v = ambient.mul(&ambient.mul(&es[i], &b), &es[j]).into_vec();
                        debug_assert!(v[dim..].iter().all(|c| c.is_zero()));
                        v[..dim].to_vec()
                    })
                    .collect();
                peirce[i].push(Subspace::span(field, dim, &vecs));
            }
        }
        let ranks: usize = peirce.iter().flatten().map(Subspace::rank).sum();
        let sum = Subspace::sum_all(field, dim, peirce.iter().flatten());
        if ranks != dim || !sum.is_full() {
            return Err(PeirceError::PeirceMismatch(format!(
                "component ranks sum to {ranks}, span has rank {}, dimension {dim}",
                sum.rank()
            )));
        }
        let fullness = es.iter().map(|e| full_in(&ambient, dim, e)).collect();
        Ok(Self { algebra, hull, idempotents: es, peirce, fullness })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn hull(&self) -> Option<&Arc<Algebra>> {
        self.hull.as_ref()
    }

    /// The algebra the idempotents live in (the hull when present).
    pub fn ambient(&self) -> &Arc<Algebra> {
        self.hull.as_ref().unwrap_or(&self.algebra)
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn n(&self) -> usize {
        self.idempotents.len()
    }

    pub fn idempotents(&self) -> &[Element] {
        &self.idempotents
    }

    /// `e_i` in `A`'s coordinates, if it lies in `A`.
    pub fn idempotent_in_algebra(&self, i: usize) -> Option<Element> {
        let e = &self.idempotents[i];
        let dim = self.algebra.dim();
        if e.coeffs()[dim..].iter().all(|c| c.is_zero()) {
            Some(Element::from_vec(e.coeffs()[..dim].to_vec()))
        } else {
            None
        }
    }

    pub fn component(&self, i: usize, j: usize) -> &Subspace {
        &self.peirce[i][j]
    }

    pub fn fullness(&self) -> &[bool] {
        &self.fullness
    }

    pub fn all_full(&self) -> bool {
        self.fullness.iter().all(|&f| f)
    }

    /// Peirce components `e_i x e_j` of `x ∈ A`, in `A`'s coordinates.
    pub fn peirce_parts(&self, x: &Element) -> Vec<Vec<Element>> {
        let amb = self.ambient();
        let dim = self.algebra.dim();
        let xa = x.resized(self.field(), amb.dim());
        let n = self.n();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = amb.mul(&amb.mul(&self.idempotents[i], &xa), &self.idempotents[j]);
                        v.resized(self.field(), dim)
                    })
                    .collect()
            })
            .collect()
    }

    /// Span of all off-diagonal components `A_ij`, `i ≠ j`, in index order.
    pub fn off_diagonal_basis(&self) -> Vec<(usize, usize, Element)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for r in self.peirce[i][j].basis() {
                    out.push((i, j, Element::from_vec(r.clone())));
                }
            }
        }
        out
    }
}

/// A solution of `e_i = Σ a_μ b_μ` with `a_μ ∈ A_ij`, `b_μ ∈ A_ji`, and the
/// element `h_ij = Σ [a_μ, b_μ]`.
#[derive(Debug, Clone)]
pub struct HElement {
    pub h: Element,
    pub terms: Vec<(Element, Element)>,
}

/// Solves `e_i = Σ a_μ b_μ` over the product basis of `A_ij × A_ji`.
///
/// The solution is the echelon-first one (free unknowns zero), with terms
/// grouped by the `A_ij` basis element.
pub fn unit_decomposition(frame: &IdempotentFrame, i: usize, j: usize) -> Result<Vec<(Element, Element)>> {
    if i == j || i >= frame.n() || j >= frame.n() {
        return Err(PeirceError::NoDecomposition { i, j });
    }
    let ei = frame.idempotent_in_algebra(i).ok_or(PeirceError::NoDecomposition { i, j })?;
    let alg = frame.algebra();
    let field = alg.field();
    let a_basis = frame.component(i, j).basis();
    let b_basis = frame.component(j, i).basis();
    let mut products = Vec::with_capacity(a_basis.len() * b_basis.len());
    for a in a_basis {
        for b in b_basis {
            products.push(alg.mul_slices(a, b));
        }
    }
    let sol = solve_combination(field, alg.dim(), &products, ei.coeffs())
        .ok_or(PeirceError::NoDecomposition { i, j })?;
    let mut terms = Vec::new();
    for (p, a) in a_basis.iter().enumerate() {
        let coeffs = &sol.particular[p * b_basis.len()..(p + 1) * b_basis.len()];
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let b = linalg::combine(field, alg.dim(), coeffs, b_basis);
        terms.push((Element::from_vec(a.clone()), Element::from_vec(b)));
    }
    Ok(terms)
}

/// `h_ij = Σ [a_μ, b_μ]` for a decomposition `e_i = Σ a_μ b_μ`; checks
/// `h_ij − e_i ∈ A_jj`, that `h_ij` is a left unit on `A_ij` and a right
/// unit on `A_ji`.
pub fn h_element(frame: &IdempotentFrame, i: usize, j: usize) -> Result<HElement> {
    let terms = unit_decomposition(frame, i, j)?;
    let alg = frame.algebra();
    let h = terms
        .iter()
        .fold(alg.zero(), |acc, (a, b)| acc.add(&alg.bracket(a, b)));
    let ei = frame.idempotent_in_algebra(i).expect("checked by unit_decomposition");
    let fail = |what: &str| PeirceError::GradingFailure(format!("h_{}{}: {what}", i + 1, j + 1));
    if !frame.component(j, j).contains(h.sub(&ei).coeffs()) {
        return Err(fail("h - e_i not in A_jj"));
    }
    for r in frame.component(i, j).basis() {
        let x = Element::from_vec(r.clone());
        if alg.mul(&h, &x) != x {
            return Err(fail("h x != x on A_ij"));
        }
    }
    for r in frame.component(j, i).basis() {
        let x = Element::from_vec(r.clone());
        if alg.mul(&x, &h) != x {
            return Err(fail("x h != x on A_ji"));
        }
    }
    Ok(HElement { h, terms })
}

/// A Lie subring of an algebra graded by a type-A root system.
#[derive(Debug, Clone)]
pub struct GradedLieRing {
    algebra: Arc<Algebra>,
    roots: RootSystem,
    components: Vec<Subspace>,
    zero: Subspace,
    total: Subspace,
}

impl GradedLieRing {
    /// Assembles a graded Lie ring from explicit components and verifies
    /// every grading identity.
    pub fn from_parts(
        algebra: Arc<Algebra>,
        roots: RootSystem,
        components: Vec<Subspace>,
        zero: Subspace,
    ) -> Result<Self> {
        let field = algebra.field();
        let dim = algebra.dim();
        let total = Subspace::sum_all(field, dim, components.iter().chain([&zero]));
        let g = Self { algebra, roots, components, zero, total };
        g.verify()?;
        Ok(g)
    }

    fn verify(&self) -> Result<()> {
        let alg = &self.algebra;
        let fail = |s: String| Err(PeirceError::GradingFailure(s));
        if self.components.len() != self.roots.roots().len() {
            return fail("component count does not match the root system".into());
        }
        let ranks: usize = self.components.iter().map(Subspace::rank).sum::<usize>() + self.zero.rank();
        if ranks != self.total.rank() {
            return fail(format!("sum of components is not direct ({ranks} vs {})", self.total.rank()));
        }
        let zero_from_brackets = Subspace::sum_all(
            alg.field(),
            alg.dim(),
            self.roots
                .roots()
                .iter()
                .map(|&r| {
                    alg.bracket_span(self.component(r.negated()), self.component(r))
                        .expect("same ambient")
                })
                .collect::<Vec<_>>()
                .iter(),
        );
        if zero_from_brackets != self.zero {
            return fail("L_0 != sum of [L_-a, L_a]".into());
        }
        for &a in self.roots.roots() {
            for &b in self.roots.roots() {
                let br = alg.bracket_span(self.component(a), self.component(b))?;
                match self.roots.sum(a, b) {
                    RootSum::Root(c) => {
                        if !br.is_subspace_of(self.component(c)) {
                            return fail(format!("[L_{a}, L_{b}] not in L_{c}"));
                        }
                    }
                    RootSum::Zero => {
                        if !br.is_subspace_of(&self.zero) {
                            return fail(format!("[L_{a}, L_{b}] not in L_0"));
                        }
                    }
                    RootSum::Outside => {
                        if !br.is_zero() {
                            return fail(format!("[L_{a}, L_{b}] != 0"));
                        }
                    }
                }
            }
            let br = alg.bracket_span(&self.zero, self.component(a))?;
            if !br.is_subspace_of(self.component(a)) {
                return fail(format!("[L_0, L_{a}] not in L_{a}"));
            }
        }
        if !alg.bracket_span(&self.zero, &self.zero)?.is_subspace_of(&self.zero) {
            return fail("[L_0, L_0] not in L_0".into());
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn roots(&self) -> &RootSystem {
        &self.roots
    }

    pub fn component(&self, r: Root) -> &Subspace {
        &self.components[self.roots.index_of(r)]
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn zero_component(&self) -> &Subspace {
        &self.zero
    }

    pub fn total(&self) -> &Subspace {
        &self.total
    }

    /// Splits `x ∈ total` into its root components (in root order) followed
    /// by its zero component.
    pub fn decompose(&self, x: &Element) -> Option<Vec<Element>> {
        let field = self.algebra.field();
        let dim = self.algebra.dim();
        let parts: Vec<&Subspace> = self.components.iter().chain([&self.zero]).collect();
        let vectors: Vec<Vector> = parts.iter().flat_map(|s| s.basis().iter().cloned()).collect();
        let sol = solve_combination(field, dim, &vectors, x.coeffs())?;
        let mut out = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for s in parts {
            let c = &sol.particular[offset..offset + s.rank()];
            out.push(Element::from_vec(linalg::combine(field, dim, c, s.basis())));
            offset += s.rank();
        }
        Some(out)
    }
}

/// The root grading of `[A, A]` induced by a frame of `n ≥ 3` full idempotents.
pub fn delta_grading(frame: &IdempotentFrame) -> Result<GradedLieRing> {
    let n = frame.n();
    let roots = RootSystem::new(n)?;
    if let Some(i) = frame.fullness().iter().position(|f| !f) {
        return Err(PeirceError::NotFull(i));
    }
    let alg = frame.algebra().clone();
    let components: Vec<Subspace> = roots.roots().iter().map(|r| frame.component(r.i, r.j).clone()).collect();
    let brackets: Vec<Subspace> = roots
        .roots()
        .iter()
        .map(|r| alg.bracket_span(frame.component(r.j, r.i), frame.component(r.i, r.j)))
        .collect::<Result<_, _>>()?;
    let zero = Subspace::sum_all(alg.field(), alg.dim(), brackets.iter());
    let g = GradedLieRing::from_parts(alg.clone(), roots, components, zero)?;
    if g.total != alg.derived_lie_ring() {
        return Err(PeirceError::GradingFailure(
            "sum of components differs from [A, A]".into(),
        ));
    }
    Ok(g)
}

/// `[L, L] = L`.
pub fn is_perfect(l: &GradedLieRing) -> bool {
    l.algebra
        .bracket_span(&l.total, &l.total)
        .map(|b| b == l.total)
        .unwrap_or(false)
}

/// Outcome of an extension check, with a re-checkable witness on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionVerdict {
    pub pass: bool,
    pub violation: Option<ExtensionViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionViolation {
    /// A kernel element with a nonzero component on `root`.
    KernelOffZero { kernel_element: Element, root: Root, component: Element },
    /// An element of the source outside `A'A'`.
    NotSelfProduct { missing: Element },
    /// A kernel element `k` and basis element `b` with `kb ≠ 0` or `bk ≠ 0`.
    KernelNotAnnihilating { kernel_element: Element, basis_index: usize },
}

/// Checks that `f: L' → L` is a graded central extension: a surjective
/// grading-preserving map whose kernel lies in `L'_0`.
pub fn verify_graded_central_extension(
    f: &LinearMap,
    source: &GradedLieRing,
    target: &GradedLieRing,
) -> Result<ExtensionVerdict> {
    if f.domain() != source.total() || f.target().dim() != target.algebra.dim() {
        return Err(PeirceError::DomainMismatch);
    }
    if f.image() != target.total {
        return Err(PeirceError::NotSurjective);
    }
    for &r in source.roots.roots() {
        if !f.image_of(source.component(r))?.is_subspace_of(target.component(r)) {
            return Err(PeirceError::NotGraded(format!("image of L_{r}")));
        }
    }
    if !f.image_of(&source.zero)?.is_subspace_of(&target.zero) {
        return Err(PeirceError::NotGraded("image of L_0".into()));
    }
    let kernel = f.kernel();
    for k in kernel.basis() {
        if source.zero.contains(k) {
            continue;
        }
        let x = Element::from_vec(k.clone());
        let parts = source.decompose(&x).expect("kernel lies in the domain");
        let (idx, comp) = parts
            .iter()
            .enumerate()
            .take(source.roots.roots().len())
            .find(|(_, p)| !p.is_zero())
            .expect("element outside L_0 has a root component");
        return Ok(ExtensionVerdict {
            pass: false,
            violation: Some(ExtensionViolation::KernelOffZero {
                kernel_element: x.clone(),
                root: source.roots.roots()[idx],
                component: comp.clone(),
            }),
        });
    }
    Ok(ExtensionVerdict { pass: true, violation: None })
}

/// Checks that the algebra map `f: A' → A` is an annihilator extension:
/// `A' = A'A'` and `ker f ⊆ Ann(A')`.
pub fn verify_annihilator_extension(f: &LinearMap) -> Result<ExtensionVerdict> {
    let src = f.source();
    let tgt = f.target();
    if !f.domain().is_full() {
        return Err(PeirceError::DomainMismatch);
    }
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            let (x, y) = (src.basis_element(i), src.basis_element(j));
            if f.apply(&src.mul(&x, &y))? != tgt.mul(&f.apply(&x)?, &f.apply(&y)?) {
                return Err(PeirceError::NotHomomorphism(i, j));
            }
        }
    }
    if !f.image().is_full() {
        return Err(PeirceError::NotSurjective);
    }
    let square = src.subspace_product(&src.whole(), &src.whole())?;
    if !square.is_full() {
        let missing = (0..src.dim())
            .map(|i| src.basis_element(i))
            .find(|b| !square.contains(b.coeffs()))
            .expect("a proper subspace misses a basis vector");
        return Ok(ExtensionVerdict {
            pass: false,
            violation: Some(ExtensionViolation::NotSelfProduct { missing }),
        });
    }
    for k in f.kernel().basis() {
        let x = Element::from_vec(k.clone());
        for i in 0..src.dim() {
            let b = src.basis_element(i);
            if !src.mul(&x, &b).is_zero() || !src.mul(&b, &x).is_zero() {
                return Ok(ExtensionVerdict {
                    pass: false,
                    violation: Some(ExtensionViolation::KernelNotAnnihilating {
                        kernel_element: x,
                        basis_index: i,
                    }),
                });
            }
        }
    }
    Ok(ExtensionVerdict { pass: true, violation: None })
}

impl ExtensionViolation {
    /// Re-evaluates the witness; `true` if it still shows a violation.
    pub fn recheck(&self, f: &LinearMap, source: Option<&GradedLieRing>) -> bool {
        let src = f.source();
        match self {
            ExtensionViolation::KernelOffZero { kernel_element, .. } => {
                f.apply(kernel_element).map(|v| v.is_zero()).unwrap_or(false)
                    && source.is_some_and(|g| !g.zero.contains(kernel_element.coeffs()))
            }
            ExtensionViolation::NotSelfProduct { missing } => !src
                .subspace_product(&src.whole(), &src.whole())
                .map(|s| s.contains(missing.coeffs()))
                .unwrap_or(true),
            ExtensionViolation::KernelNotAnnihilating { kernel_element, basis_index } => {
                let b = src.basis_element(*basis_index);
                f.apply(kernel_element).map(|v| v.is_zero()).unwrap_or(false)
                    && (!src.mul(kernel_element, &b).is_zero() || !src.mul(&b, kernel_element).is_zero())
            }
        }
    }
}
