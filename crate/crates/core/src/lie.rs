//! Law checks for linear maps: Lie homomorphisms, Lie / Jordan / associative
//! derivations, (anti-)homomorphisms, and the specialization conditions on a
//! root-graded Lie ring.
//!
//! All checks reduce to basis cases by (bi)linearity and are exhaustive. A
//! failing verdict carries the first violating basis tuple in lexicographic
//! order, so results are deterministic even though the loops run in parallel.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, LinearMap, MatrixShape};
use crate::linalg::Subspace;
use crate::peirce::{GradedLieRing, Root, RootSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("domain is not closed under the bracket")]
    DomainNotBracketClosed,
    #[error("domain is not closed under the product")]
    DomainNotProductClosed,
    #[error("map does not go from an algebra to itself")]
    NotAnEndomorphism,
    #[error("map is not defined on the graded Lie ring")]
    DomainMismatch,
    #[error("word length bound must be at least 2, got {0}")]
    MaxLen(usize),
}

pub type Result<T, E = LieError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    LieHom,
    LieDer,
    JordanDer,
    AssocHom,
    AssocAntihom,
    AssocDer,
    SpecializationPairwise,
    SpecializationWords,
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LawKind::LieHom => "lie_hom",
            LawKind::LieDer => "lie_der",
            LawKind::JordanDer => "jordan_der",
            LawKind::AssocHom => "assoc_hom",
            LawKind::AssocAntihom => "assoc_antihom",
            LawKind::AssocDer => "assoc_der",
            LawKind::SpecializationPairwise => "specialization_pairwise",
            LawKind::SpecializationWords => "specialization_words",
        };
        f.write_str(s)
    }
}

/// Result of a law check. `witness` is present iff `pass` is false; it holds
/// the violating domain elements (a pair, or a word for the word check) and
/// `defect` the nonzero value the law should have made zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapVerdict {
    pub kind: LawKind,
    pub pass: bool,
    pub witness: Option<Vec<Element>>,
    pub roots: Option<Vec<Root>>,
    pub defect: Option<Element>,
}

impl MapVerdict {
    fn passed(kind: LawKind) -> Self {
        Self { kind, pass: true, witness: None, roots: None, defect: None }
    }

    fn failed(kind: LawKind, witness: Vec<Element>, defect: Element) -> Self {
        Self { kind, pass: false, witness: Some(witness), roots: None, defect: Some(defect) }
    }

    /// Re-evaluates the witness against `f`; `true` iff it is a genuine
    /// violation with the recorded defect.
    pub fn recheck(&self, f: &LinearMap) -> bool {
        let Some(w) = &self.witness else {
            return false;
        };
        let defect = match (self.kind, w.as_slice()) {
            (LawKind::LieHom, [x, y]) => lie_hom_defect(f, x, y),
            (LawKind::LieDer, [x, y]) => lie_der_defect(f, x, y),
            (LawKind::JordanDer, [x, y]) => jordan_defect(f, x, y),
            (LawKind::AssocHom, [x, y]) => hom_defect(f, x, y, false),
            (LawKind::AssocAntihom, [x, y]) => hom_defect(f, x, y, true),
            (LawKind::AssocDer, [x, y]) => der_defect(f, x, y),
            (LawKind::SpecializationPairwise | LawKind::SpecializationWords, word) => {
                word_image_product(f, word)
            }
            _ => return false,
        };
        match defect {
            Ok(d) => !d.is_zero() && Some(&d) == self.defect.as_ref(),
            Err(_) => false,
        }
    }
}

fn basis_of(s: &Subspace) -> Vec<Element> {
    s.basis().iter().map(|r| Element::from_vec(r.clone())).collect()
}

fn lie_hom_defect(f: &LinearMap, x: &Element, y: &Element) -> Result<Element> {
    let (s, t) = (f.source(), f.target());
    let lhs = f.apply(&s.bracket(x, y))?;
    let rhs = t.bracket(&f.apply(x)?, &f.apply(y)?);
    Ok(lhs.sub(&rhs))
}

fn lie_der_defect(d: &LinearMap, x: &Element, y: &Element) -> Result<Element> {
    let a = d.source();
    let lhs = d.apply(&a.bracket(x, y))?;
    let rhs = a.bracket(&d.apply(x)?, y).add(&a.bracket(x, &d.apply(y)?));
    Ok(lhs.sub(&rhs))
}

fn jordan_defect(d: &LinearMap, x: &Element, y: &Element) -> Result<Element> {
    let a = d.source();
    let lhs = d.apply(&a.mul(x, y).add(&a.mul(y, x)))?;
    let (dx, dy) = (d.apply(x)?, d.apply(y)?);
    let rhs = a.mul(&dx, y).add(&a.mul(y, &dx)).add(&a.mul(x, &dy)).add(&a.mul(&dy, x));
    Ok(lhs.sub(&rhs))
}

fn hom_defect(f: &LinearMap, x: &Element, y: &Element, anti: bool) -> Result<Element> {
    let (s, t) = (f.source(), f.target());
    let lhs = f.apply(&s.mul(x, y))?;
    let (fx, fy) = (f.apply(x)?, f.apply(y)?);
    let rhs = if anti { t.mul(&fy, &fx) } else { t.mul(&fx, &fy) };
    Ok(lhs.sub(&rhs))
}

fn der_defect(d: &LinearMap, x: &Element, y: &Element) -> Result<Element> {
    let a = d.source();
    let lhs = d.apply(&a.mul(x, y))?;
    let rhs = a.mul(&d.apply(x)?, y).add(&a.mul(x, &d.apply(y)?));
    Ok(lhs.sub(&rhs))
}

fn word_image_product(f: &LinearMap, word: &[Element]) -> Result<Element> {
    let images = word.iter().map(|x| f.apply(x)).collect::<Result<Vec<_>, _>>()?;
    Ok(f.target().product_of(&images))
}

/// Runs `defect` over the given index pairs and returns the first failure.
fn first_violation<F>(
    kind: LawKind,
    basis: &[Element],
    pairs: Vec<(usize, usize)>,
    defect: F,
) -> Result<MapVerdict>
where
    F: Fn(&Element, &Element) -> Result<Element> + Sync,
{
    let found = pairs
        .par_iter()
        .map(|&(i, j)| defect(&basis[i], &basis[j]).map(|d| (i, j, d)))
        .find_map_first(|r| match r {
            Ok((_, _, ref d)) if d.is_zero() => None,
            other => Some(other),
        });
    match found {
        None => Ok(MapVerdict::passed(kind)),
        Some(Err(e)) => Err(e),
        Some(Ok((i, j, d))) => Ok(MapVerdict::failed(kind, vec![basis[i].clone(), basis[j].clone()], d)),
    }
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

fn unordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn require_bracket_closed(f: &LinearMap) -> Result<()> {
    let d = f.domain();
    if !f.source().bracket_span(d, d)?.is_subspace_of(d) {
        return Err(LieError::DomainNotBracketClosed);
    }
    Ok(())
}

fn require_product_closed(f: &LinearMap) -> Result<()> {
    let d = f.domain();
    if !f.source().subspace_product(d, d)?.is_subspace_of(d) {
        return Err(LieError::DomainNotProductClosed);
    }
    Ok(())
}

fn require_endomorphism(f: &LinearMap) -> Result<()> {
    if !Arc::ptr_eq(f.source(), f.target()) && f.source() != f.target() {
        return Err(LieError::NotAnEndomorphism);
    }
    Ok(())
}

/// `f[x, y] = [fx, fy]` on all basis pairs of the domain.
pub fn check_lie_hom(f: &LinearMap) -> Result<MapVerdict> {
    require_bracket_closed(f)?;
    let basis = basis_of(f.domain());
    let pairs = (0..basis.len()).flat_map(|i| ((i + 1)..basis.len()).map(move |j| (i, j))).collect();
    first_violation(LawKind::LieHom, &basis, pairs, |x, y| lie_hom_defect(f, x, y))
}

/// `d[x, y] = [dx, y] + [x, dy]` on all basis pairs of the domain.
pub fn check_lie_derivation(d: &LinearMap) -> Result<MapVerdict> {
    require_endomorphism(d)?;
    require_bracket_closed(d)?;
    let basis = basis_of(d.domain());
    let pairs = (0..basis.len()).flat_map(|i| ((i + 1)..basis.len()).map(move |j| (i, j))).collect();
    first_violation(LawKind::LieDer, &basis, pairs, |x, y| lie_der_defect(d, x, y))
}

/// `d(ab + ba) = d(a)b + bd(a) + ad(b) + d(b)a` on all basis pairs.
pub fn check_jordan_derivation(d: &LinearMap) -> Result<MapVerdict> {
    require_endomorphism(d)?;
    require_product_closed(d)?;
    let basis = basis_of(d.domain());
    first_violation(LawKind::JordanDer, &basis, unordered_pairs(basis.len()), |x, y| {
        jordan_defect(d, x, y)
    })
}

/// `d(ab) = d(a)b + a d(b)` on all ordered basis pairs.
pub fn check_derivation(d: &LinearMap) -> Result<MapVerdict> {
    require_endomorphism(d)?;
    require_product_closed(d)?;
    let basis = basis_of(d.domain());
    first_violation(LawKind::AssocDer, &basis, ordered_pairs(basis.len()), |x, y| der_defect(d, x, y))
}

/// `f(xy) = f(x)f(y)`, or `f(y)f(x)` when `anti`, on all ordered basis pairs.
pub fn check_assoc_hom(f: &LinearMap, anti: bool) -> Result<MapVerdict> {
    require_product_closed(f)?;
    let kind = if anti { LawKind::AssocAntihom } else { LawKind::AssocHom };
    let basis = basis_of(f.domain());
    first_violation(kind, &basis, ordered_pairs(basis.len()), |x, y| hom_defect(f, x, y, anti))
}

fn require_graded_domain(f: &LinearMap, l: &GradedLieRing) -> Result<()> {
    if f.source().dim() != l.algebra().dim() || !l.total().is_subspace_of(f.domain()) {
        return Err(LieError::DomainMismatch);
    }
    Ok(())
}

/// `f(L_α) f(L_β) = 0` whenever `α + β ∉ Δ ∪ {0}`.
///
/// Together with `f` being a Lie homomorphism this makes `f` a
/// specialization; see [`check_specialization_words`] for the defining
/// condition on longer words.
pub fn check_specialization_pairwise(f: &LinearMap, l: &GradedLieRing) -> Result<MapVerdict> {
    require_graded_domain(f, l)?;
    let roots = l.roots();
    let images: Vec<Vec<(Element, Element)>> = roots
        .roots()
        .iter()
        .map(|&r| {
            basis_of(l.component(r))
                .into_iter()
                .map(|x| f.apply(&x).map(|fx| (x, fx)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let pairs: Vec<(usize, usize)> = (0..roots.roots().len())
        .flat_map(|a| (0..roots.roots().len()).map(move |b| (a, b)))
        .filter(|&(a, b)| roots.sum(roots.roots()[a], roots.roots()[b]) == RootSum::Outside)
        .collect();
    let target = f.target();
    let found = pairs.par_iter().find_map_first(|&(a, b)| {
        for (x, fx) in &images[a] {
            for (y, fy) in &images[b] {
                let p = target.mul(fx, fy);
                if !p.is_zero() {
                    return Some((a, b, x.clone(), y.clone(), p));
                }
            }
        }
        None
    });
    Ok(match found {
        None => MapVerdict::passed(LawKind::SpecializationPairwise),
        Some((a, b, x, y, p)) => MapVerdict {
            roots: Some(vec![roots.roots()[a], roots.roots()[b]]),
            ..MapVerdict::failed(LawKind::SpecializationPairwise, vec![x, y], p)
        },
    })
}

/// `f(L_α1) ⋯ f(L_αm) = 0` for every root word of length `2 ≤ m ≤ max_len`
/// whose sum lies outside `Δ ∪ {0}`.
///
/// Words are explored depth-first with prefix products shared; a prefix
/// whose product subspace vanishes prunes its whole subtree.
pub fn check_specialization_words(f: &LinearMap, l: &GradedLieRing, max_len: usize) -> Result<MapVerdict> {
    if max_len < 2 {
        return Err(LieError::MaxLen(max_len));
    }
    require_graded_domain(f, l)?;
    let roots = l.roots();
    let images: Vec<Subspace> = roots
        .roots()
        .iter()
        .map(|&r| f.image_of(l.component(r)))
        .collect::<Result<_, _>>()?;
    let target = f.target().clone();
    let n = roots.rank_n();

    struct Search<'a> {
        target: &'a Algebra,
        images: &'a [Subspace],
        roots: &'a crate::peirce::RootSystem,
        max_len: usize,
    }
    impl Search<'_> {
        fn dfs(&self, word: &mut Vec<usize>, sum: &mut [i64], prefix: &Subspace) -> Option<Vec<usize>> {
            for (b, img) in self.images.iter().enumerate() {
                let r = self.roots.roots()[b];
                let product = self.target.subspace_product(prefix, img).expect("same ambient");
                if product.is_zero() {
                    continue;
                }
                word.push(b);
                sum[r.i] += 1;
                sum[r.j] -= 1;
                if word.len() >= 2 && self.roots.classify(sum) == RootSum::Outside {
                    return Some(word.clone());
                }
                if word.len() < self.max_len {
                    if let Some(w) = self.dfs(word, sum, &product) {
                        return Some(w);
                    }
                }
                word.pop();
                sum[r.i] -= 1;
                sum[r.j] += 1;
            }
            None
        }
    }

    let search = Search { target: &target, images: &images, roots, max_len };
    let found = (0..images.len()).into_par_iter().find_map_first(|a| {
        if images[a].is_zero() {
            return None;
        }
        let r = roots.roots()[a];
        let mut sum = vec![0i64; n];
        sum[r.i] += 1;
        sum[r.j] -= 1;
        let mut word = vec![a];
        search.dfs(&mut word, &mut sum, &images[a])
    });
    let Some(word) = found else {
        return Ok(MapVerdict::passed(LawKind::SpecializationWords));
    };
    // pick concrete basis elements realizing a nonzero product
    let bases: Vec<Vec<Element>> = word.iter().map(|&a| basis_of(l.component(roots.roots()[a]))).collect();
    let mut choice = vec![0usize; word.len()];
    loop {
        let elems: Vec<Element> = choice.iter().zip(&bases).map(|(&c, b)| b[c].clone()).collect();
        let p = word_image_product(f, &elems)?;
        if !p.is_zero() {
            return Ok(MapVerdict {
                roots: Some(word.iter().map(|&a| roots.roots()[a]).collect()),
                ..MapVerdict::failed(LawKind::SpecializationWords, elems, p)
            });
        }
        let mut k = word.len();
        loop {
            if k == 0 {
                unreachable!("nonzero product subspace has a nonzero basis product");
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < bases[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// The adjoint representation `x ↦ ad x|_L` of a Lie subring `L` as a map
/// into `M_k(𝔽)`, `k = dim L`, written in `L`'s canonical basis.
pub fn adjoint_representation(alg: &Arc<Algebra>, l: &Subspace) -> Result<(Arc<Algebra>, LinearMap)> {
    if !alg.bracket_span(l, l)?.is_subspace_of(l) {
        return Err(LieError::DomainNotBracketClosed);
    }
    let k = l.rank();
    let field = alg.field();
    let mk = Arc::new(Algebra::full_matrix(field, k)?);
    let shape = MatrixShape { n: k, inner_dim: 1 };
    let basis = basis_of(l);
    let map = LinearMap::from_fn(alg.clone(), mk.clone(), l.clone(), |x| {
        let mut m = mk.zero();
        for (c, s) in basis.iter().enumerate() {
            let coords = l.coordinates(alg.bracket(x, s).coeffs()).expect("bracket-closed");
            for (r, v) in coords.into_iter().enumerate() {
                if !v.is_zero() {
                    crate::algebra::accumulate(&mut m, &v, &shape.unit(field, r, c));
                }
            }
        }
        m
    })?;
    Ok((mk, map))
}
