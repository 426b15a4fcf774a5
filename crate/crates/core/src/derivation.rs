//! Extension of a Lie derivation of `[A, A]` to an associative derivation of
//! `A`, via even-length product decompositions of ring elements.
//!
//! Every `a ∈ A` is written as `Σ_i a_{i,1} ⋯ a_{i,n_i}` with factors in
//! off-diagonal Peirce components (hence in `[A, A]`), every `n_i` even and
//! `Σ_i a_{i,n_i} ⋯ a_{i,1} = 0`. The extension is then the Leibniz sum
//! `d̃(a) = Σ_i Σ_j a_{i,1} ⋯ d(a_{i,j}) ⋯ a_{i,n_i}`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{accumulate, Algebra, AlgebraError, Element, LinearMap};
use crate::field::Scalar;
use crate::lie::{self, LieError, MapVerdict};
use crate::linalg::{self, solve_combination, EchelonBuilder, Vector};
use crate::peirce::{IdempotentFrame, PeirceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Peirce(#[from] PeirceError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("element is not in the subring generated by the off-diagonal components")]
    NotGenerated,
    #[error("factor in A_{i}{j} does not split through A_{i}{k} A_{k}{j}", i = .i + 1, j = .j + 1, k = .k + 1)]
    NoSplit { i: usize, j: usize, k: usize },
    #[error("decomposition invariant violated: {0}")]
    InvalidDecomposition(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("map is not a Lie derivation")]
    NotLieDerivation(Box<MapVerdict>),
    #[error("two decompositions of basis element {basis_index} give different values")]
    WellDefinednessFailure { basis_index: usize, first: Element, second: Element },
    #[error("extension check failed: {0}")]
    VerificationFailed(String),
    #[error("no obstruction found among the candidate pairs although no extension exists")]
    Inconclusive,
}

pub type Result<T, E = DerivationError> = std::result::Result<T, E>;

/// `target = Σ_i Π_j terms[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenDecomposition {
    pub target: Element,
    pub terms: Vec<Vec<Element>>,
}

impl EvenDecomposition {
    /// Checks both defining sums, evenness, and membership of every factor
    /// in `[A, A]`.
    pub fn verify(&self, alg: &Algebra) -> Result<()> {
        let derived = alg.derived_lie_ring();
        let mut forward = alg.zero();
        let mut backward = alg.zero();
        for t in &self.terms {
            if t.len() % 2 != 0 {
                return Err(DerivationError::InvalidDecomposition("odd term length".into()));
            }
            if t.iter().any(|x| !derived.contains(x.coeffs())) {
                return Err(DerivationError::InvalidDecomposition("factor outside [A, A]".into()));
            }
            forward = forward.add(&alg.product_of(t));
            let rev: Vec<Element> = t.iter().rev().cloned().collect();
            backward = backward.add(&alg.product_of(&rev));
        }
        if forward != self.target {
            return Err(DerivationError::InvalidDecomposition("products do not sum to the target".into()));
        }
        if !backward.is_zero() {
            return Err(DerivationError::InvalidDecomposition("reversed products do not cancel".into()));
        }
        Ok(())
    }

    /// The Leibniz sum of `d` over the decomposition.
    pub fn leibniz(&self, alg: &Algebra, d: &LinearMap) -> Result<Element> {
        let mut out = alg.zero();
        for t in &self.terms {
            for j in 0..t.len() {
                let mut factors = t.clone();
                factors[j] = d.apply(&t[j])?;
                out = out.add(&alg.product_of(&factors));
            }
        }
        Ok(out)
    }
}

/// Choices that produce alternative decompositions.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecomposeOptions {
    /// `None` gives the canonical decomposition: generators in index order,
    /// minimal intermediate index, echelon-first splits. `Some(seed)`
    /// shuffles the generators, picks intermediate indices and the second
    /// split position at random, and perturbs splits by kernel vectors.
    pub seed: Option<u64>,
}

/// A word basis of `A` over off-diagonal Peirce generators, reused across
/// decompositions.
pub struct Decomposer<'a> {
    frame: &'a IdempotentFrame,
    /// (row, column, element) for each generator.
    gens: Vec<(usize, usize, Element)>,
    /// Words (as generator indices) whose products form a basis of `A`.
    words: Vec<Vec<usize>>,
    values: Vec<Vector>,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Decomposer<'a> {
    pub fn new(frame: &'a IdempotentFrame, options: DecomposeOptions) -> Result<Self> {
        let alg = frame.algebra();
        let mut gens = frame.off_diagonal_basis();
        let mut rng = options.seed.map(ChaCha8Rng::seed_from_u64);
        if let Some(r) = rng.as_mut() {
            gens.shuffle(r);
        }
        let mut echelon = EchelonBuilder::new(alg.field(), alg.dim());
        let mut words = Vec::new();
        let mut values = Vec::new();
        let mut frontier: Vec<(Vec<usize>, Element)> =
            gens.iter().enumerate().map(|(g, (_, _, x))| (vec![g], x.clone())).collect();
        while !frontier.is_empty() && !echelon.is_full() {
            let mut next = Vec::new();
            for (w, v) in frontier {
                if !echelon.insert(v.coeffs()) {
                    continue;
                }
                let last = gens[*w.last().expect("nonempty word")].1;
                for (g, (i, _, x)) in gens.iter().enumerate() {
                    if *i != last {
                        continue;
                    }
                    let p = alg.mul(&v, x);
                    if !p.is_zero() {
                        let mut w2 = w.clone();
                        w2.push(g);
                        next.push((w2, p));
                    }
                }
                values.push(v.into_vec());
                words.push(w);
            }
            frontier = next;
        }
        Ok(Self { frame, gens, words, values, rng })
    }

    /// Writes `a` as a combination of generator words.
    fn word_expansion(&self, a: &Element) -> Result<Vec<(Vec<usize>, Scalar)>> {
        let alg = self.frame.algebra();
        let sol = solve_combination(alg.field(), alg.dim(), &self.values, a.coeffs())
            .ok_or(DerivationError::NotGenerated)?;
        Ok(self
            .words
            .iter()
            .zip(sol.particular)
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (w.clone(), c))
            .collect())
    }

    /// Writes `x ∈ A_ij` as `Σ b c` with `b ∈ A_ik`, `c ∈ A_kj`.
    fn split(&mut self, x: &Element, i: usize, j: usize, k: usize) -> Result<Vec<(Element, Element)>> {
        let frame = self.frame;
        let alg = frame.algebra();
        let field = alg.field();
        let bs = frame.component(i, k).basis();
        let cs = frame.component(k, j).basis();
        let products: Vec<Vector> =
            bs.iter().flat_map(|b| cs.iter().map(move |c| alg.mul_slices(b, c))).collect();
        let sol = solve_combination(field, alg.dim(), &products, x.coeffs())
            .ok_or(DerivationError::NoSplit { i, j, k })?;
        let mut t = sol.particular;
        if let Some(rng) = self.rng.as_mut() {
            for kv in &sol.kernel {
                let c = field.from_i64(rng.gen_range(-3..=3));
                linalg::axpy(&mut t, &c, kv);
            }
        }
        let mut out = Vec::new();
        for (p, b) in bs.iter().enumerate() {
            let coeffs = &t[p * cs.len()..(p + 1) * cs.len()];
            if coeffs.iter().all(|c| c.is_zero()) {
                continue;
            }
            let c = linalg::combine(field, alg.dim(), coeffs, cs);
            out.push((Element::from_vec(b.clone()), Element::from_vec(c)));
        }
        Ok(out)
    }

    fn pick_k(&mut self, i: usize, j: usize) -> usize {
        let n = self.frame.n();
        let candidates: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        match self.rng.as_mut() {
            Some(r) => *candidates.choose(r).expect("n >= 3"),
            None => candidates[0],
        }
    }

    /// An even decomposition of `a`, verified before it is returned.
    pub fn decompose(&mut self, a: &Element) -> Result<EvenDecomposition> {
        if self.frame.n() < 3 {
            return Err(DerivationError::PreconditionFailed("even decompositions need n >= 3".into()));
        }
        let alg = self.frame.algebra().clone();
        let mut terms = Vec::new();
        for (word, coeff) in self.word_expansion(a)? {
            let m = word.len();
            // the last factor is always split; an even-length word gets a second split
            let mut split_at = vec![m - 1];
            if m % 2 == 0 {
                let second = match self.rng.as_mut() {
                    Some(r) if m > 1 => r.gen_range(0..m - 1),
                    _ => 0,
                };
                split_at.push(second);
            }
            let mut expanded: Vec<Vec<Element>> = vec![Vec::new()];
            for (pos, &g) in word.iter().enumerate() {
                let (i, j, x) = self.gens[g].clone();
                let pieces: Vec<Vec<Element>> = if split_at.contains(&pos) {
                    let k = self.pick_k(i, j);
                    self.split(&x, i, j, k)?.into_iter().map(|(b, c)| vec![b, c]).collect()
                } else {
                    vec![vec![x]]
                };
                expanded = expanded
                    .into_iter()
                    .flat_map(|prefix| {
                        pieces.iter().map(move |p| {
                            let mut t = prefix.clone();
                            t.extend(p.iter().cloned());
                            t
                        })
                    })
                    .collect();
            }
            for mut t in expanded {
                t[0] = t[0].scale(&coeff);
                terms.push(t);
            }
        }
        let dec = EvenDecomposition { target: a.clone(), terms };
        dec.verify(&alg)?;
        Ok(dec)
    }
}

/// The canonical even decomposition of `a`.
pub fn even_decompose(frame: &IdempotentFrame, a: &Element) -> Result<EvenDecomposition> {
    even_decompose_with(frame, a, DecomposeOptions::default())
}

pub fn even_decompose_with(
    frame: &IdempotentFrame,
    a: &Element,
    options: DecomposeOptions,
) -> Result<EvenDecomposition> {
    frame.algebra().check_dim(a)?;
    Decomposer::new(frame, options)?.decompose(a)
}

/// Number of randomized alternative decompositions used to cross-check
/// every value of the extension.
pub const ALTERNATIVES: u64 = 10;

fn check_map_shape(frame: &IdempotentFrame, d: &LinearMap) -> Result<Arc<Algebra>> {
    let a = frame.algebra().clone();
    if d.source().dim() != a.dim() || d.target().dim() != a.dim() || *d.domain() != a.derived_lie_ring() {
        return Err(DerivationError::PreconditionFailed("map must be [A, A] -> A".into()));
    }
    let v = lie::check_lie_derivation(d)?;
    if !v.pass {
        return Err(DerivationError::NotLieDerivation(Box::new(v)));
    }
    Ok(a)
}

/// Extends a Lie derivation `d` of `[A, A]` to a derivation `d̃` of `A`.
///
/// The frame needs at least three full idempotents; if it lives in the
/// unital hull, `Ann(A) = 0` is also required. `d̃` is defined by the
/// canonical decomposition of each basis element; the value is then
/// recomputed from [`ALTERNATIVES`] randomized decompositions and must agree.
pub fn extend_derivation(frame: &IdempotentFrame, d: &LinearMap) -> Result<LinearMap> {
    let a = check_map_shape(frame, d)?;
    if frame.n() < 3 || !frame.all_full() {
        return Err(DerivationError::PreconditionFailed(
            "frame needs at least 3 full idempotents".into(),
        ));
    }
    if frame.hull().is_some() && !a.annihilator().is_zero() {
        return Err(DerivationError::PreconditionFailed("Ann(A) is nonzero".into()));
    }
    let basis = a.basis_elements();
    let mut canonical = Decomposer::new(frame, DecomposeOptions::default())?;
    let values: Vec<Element> = basis
        .iter()
        .map(|b| canonical.decompose(b)?.leibniz(&a, d))
        .collect::<Result<_>>()?;
    (1..=ALTERNATIVES).into_par_iter().try_for_each(|seed| -> Result<()> {
        let mut alt = Decomposer::new(frame, DecomposeOptions { seed: Some(seed) })?;
        for (k, b) in basis.iter().enumerate() {
            let v = alt.decompose(b)?.leibniz(&a, d)?;
            if v != values[k] {
                return Err(DerivationError::WellDefinednessFailure {
                    basis_index: k,
                    first: values[k].clone(),
                    second: v,
                });
            }
        }
        Ok(())
    })?;
    let dt = LinearMap::new(a.clone(), a.clone(), a.whole(), values.into_iter().map(Element::into_vec).collect())?;
    if !lie::check_derivation(&dt)?.pass {
        return Err(DerivationError::VerificationFailed("extension is not a derivation".into()));
    }
    if dt.restrict(d.domain().clone())? != *d {
        return Err(DerivationError::VerificationFailed("extension does not restrict to d".into()));
    }
    Ok(dt)
}

/// A pair `X, Y` with `X, Y, XY ∈ [A, A]` and
/// `value = d(X)Y + X d(Y) − d(XY) ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub x: Element,
    pub y: Element,
    pub value: Element,
}

impl Obstruction {
    /// Re-evaluates the certificate against `d`.
    pub fn recheck(&self, d: &LinearMap) -> bool {
        let a = d.source();
        let derived = d.domain();
        let xy = a.mul(&self.x, &self.y);
        if !derived.contains(xy.coeffs()) {
            return false;
        }
        match (d.apply(&self.x), d.apply(&self.y), d.apply(&xy)) {
            (Ok(dx), Ok(dy), Ok(dxy)) => {
                let v = a.mul(&dx, &self.y).add(&a.mul(&self.x, &dy)).sub(&dxy);
                !v.is_zero() && v == self.value
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum ExtensionAttempt {
    Extended(LinearMap),
    Obstructed(Obstruction),
}

/// The two-idempotent case: builds the Leibniz extension over generator
/// words and, if it is not a derivation restricting to `d`, searches for an
/// obstruction. The search first pairs the brackets `[a_12, b_21]` of
/// component basis elements with off-diagonal basis elements, and only then
/// widens both sides by a basis of `[A, A]`.
pub fn attempt_extension_two_idempotents(frame: &IdempotentFrame, d: &LinearMap) -> Result<ExtensionAttempt> {
    let a = check_map_shape(frame, d)?;
    if frame.n() != 2 || !frame.all_full() {
        return Err(DerivationError::PreconditionFailed("frame needs exactly 2 full idempotents".into()));
    }
    let dec = Decomposer::new(frame, DecomposeOptions::default())?;
    let mut images = Vec::with_capacity(a.dim());
    for b in a.basis_elements() {
        let mut v = a.zero();
        for (word, coeff) in dec.word_expansion(&b)? {
            let factors: Vec<Element> = word.iter().map(|&g| dec.gens[g].2.clone()).collect();
            for j in 0..factors.len() {
                let mut f = factors.clone();
                f[j] = d.apply(&factors[j])?;
                accumulate(&mut v, &coeff, &a.product_of(&f));
            }
        }
        images.push(v.into_vec());
    }
    let candidate = LinearMap::new(a.clone(), a.clone(), a.whole(), images)?;
    if lie::check_derivation(&candidate)?.pass && candidate.restrict(d.domain().clone())? == *d {
        return Ok(ExtensionAttempt::Extended(candidate));
    }
    let derived = d.domain();
    let derived_basis: Vec<Element> = derived.basis().iter().map(|r| Element::from_vec(r.clone())).collect();
    let mut xs = Vec::new();
    for p in frame.component(0, 1).basis() {
        for q in frame.component(1, 0).basis() {
            let x = a.bracket(&Element::from_vec(p.clone()), &Element::from_vec(q.clone()));
            if !x.is_zero() {
                xs.push(x);
            }
        }
    }
    let off: Vec<Element> = frame.off_diagonal_basis().into_iter().map(|(_, _, y)| y).collect();
    let search = |xs: &[Element], ys: &[Element]| {
        xs.par_iter().find_map_first(|x| {
            let dx = d.apply(x).ok()?;
            ys.iter().find_map(|y| {
                let xy = a.mul(x, y);
                if !derived.contains(xy.coeffs()) {
                    return None;
                }
                let dy = d.apply(y).ok()?;
                let value = a.mul(&dx, y).add(&a.mul(x, &dy)).sub(&d.apply(&xy).ok()?);
                (!value.is_zero()).then(|| Obstruction { x: x.clone(), y: y.clone(), value })
            })
        })
    };
    let found = search(&xs, &off).or_else(|| {
        let mut all_x = xs.clone();
        all_x.extend(derived_basis.iter().cloned());
        let mut all_y = off.clone();
        all_y.extend(derived_basis.iter().cloned());
        search(&all_x, &all_y)
    });
    found.map(ExtensionAttempt::Obstructed).ok_or(DerivationError::Inconclusive)
}

/// `ad(m)` restricted to `[A, A]`, as a map into `A`.
pub fn inner_derivation(a: &Arc<Algebra>, m: &Element) -> Result<LinearMap> {
    Ok(LinearMap::from_fn(a.clone(), a.clone(), a.derived_lie_ring(), |x| a.bracket(m, x))?)
}

/// `ad(m)` on all of `A`.
pub fn inner_derivation_full(a: &Arc<Algebra>, m: &Element) -> Result<LinearMap> {
    Ok(LinearMap::from_fn(a.clone(), a.clone(), a.whole(), |x| a.bracket(m, x))?)
}
