//! The envelope `A ⊕ A^op` of `[A, A]`, its exchange involution, the
//! elements `E_1`, `E_3`, and the extension of a Lie homomorphism on `[A, A]`
//! to a standard map `ψ_1 − ψ_2`.
//!
//! Elements of the envelope are stored as `[a | b]`, meaning `a ⊕ b^op`; the
//! product is `(a ⊕ b^op)(c ⊕ d^op) = ac ⊕ (db)^op`.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Element, LinearMap};
use crate::lie::{self, LieError, MapVerdict};
use crate::linalg::{self, EchelonBuilder, Subspace, Vector};
use crate::peirce::{self, IdempotentFrame, PeirceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StandardError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Peirce(#[from] PeirceError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("envelope invariant violated: {0}")]
    EnvelopeInvariant(String),
    #[error("identity among E-elements violated: {0}")]
    EIdentity(String),
    #[error("map is not a Lie homomorphism")]
    NotLieHom(Box<MapVerdict>),
    #[error("map is not a specialization")]
    NotSpecialization(Box<MapVerdict>),
    #[error("frame must have at least 3 full idempotents summing to the identity of the algebra")]
    FrameHypotheses,
    #[error("map must be defined on [A, A] of the frame's algebra")]
    MapDomain,
    #[error("off-diagonal images do not generate the envelope (rank {rank} of {dim})")]
    NotGenerated { rank: usize, dim: usize },
    #[error("products of images are inconsistent on word {word:?}")]
    InconsistentSystem { word: Vec<usize> },
    #[error("solved map is not multiplicative")]
    NotMultiplicative(Box<MapVerdict>),
    #[error("standard decomposition invariant violated: {0}")]
    InvariantFailure(String),
    #[error("annihilator of the subring generated by [B, B] is nonzero (rank {})", .0.rank())]
    AnnihilatorNonzero(Subspace),
}

pub type Result<T, E = StandardError> = std::result::Result<T, E>;

/// `A ⊕ A^op` with the embedding `θ(a) = a ⊕ (−a)^op` of `[A, A]` and the
/// exchange involution `(a ⊕ b^op)* = b ⊕ a^op`.
#[derive(Debug, Clone)]
pub struct EnvelopePair {
    pub algebra: Arc<Algebra>,
    pub env: Arc<Algebra>,
    pub theta: LinearMap,
    pub involution: LinearMap,
}

impl EnvelopePair {
    /// `a ⊕ b^op`.
    pub fn pair(&self, a: &Element, b: &Element) -> Element {
        let mut v = a.coeffs().to_vec();
        v.extend_from_slice(b.coeffs());
        Element::from_vec(v)
    }

    /// `a ⊕ 0`.
    pub fn left(&self, a: &Element) -> Element {
        self.pair(a, &self.algebra.zero())
    }

    /// `0 ⊕ a^op`.
    pub fn right(&self, a: &Element) -> Element {
        self.pair(&self.algebra.zero(), a)
    }

    /// Splits an envelope element into its two summands.
    pub fn split(&self, x: &Element) -> (Element, Element) {
        let d = self.algebra.dim();
        (
            Element::from_vec(x.coeffs()[..d].to_vec()),
            Element::from_vec(x.coeffs()[d..].to_vec()),
        )
    }

    pub fn star(&self, x: &Element) -> Element {
        let (a, b) = self.split(x);
        self.pair(&b, &a)
    }

    /// `θ(x)` without the domain check.
    pub fn theta_of(&self, x: &Element) -> Element {
        self.pair(x, &x.neg())
    }
}

/// Builds `A ⊕ A^op`, `θ` and `*`, and verifies that `θ` is an injective Lie
/// homomorphism, `*` an anti-automorphism of order two, and `θ* = −θ`.
pub fn build_envelope(a: &Arc<Algebra>) -> Result<EnvelopePair> {
    let env = Arc::new(a.direct_sum(&a.opposite())?);
    let derived = a.derived_lie_ring();
    let d = a.dim();
    let theta = LinearMap::from_fn(a.clone(), env.clone(), derived, |x| {
        let mut v = x.coeffs().to_vec();
        v.extend(x.neg().into_vec());
        Element::from_vec(v)
    })?;
    let involution = LinearMap::from_fn(env.clone(), env.clone(), env.whole(), |x| {
        let mut v = x.coeffs()[d..].to_vec();
        v.extend_from_slice(&x.coeffs()[..d]);
        Element::from_vec(v)
    })?;
    let ep = EnvelopePair { algebra: a.clone(), env, theta, involution };
    let fail = |s: &str| Err(StandardError::EnvelopeInvariant(s.into()));
    if !ep.theta.is_injective() {
        return fail("theta is not injective");
    }
    if !lie::check_lie_hom(&ep.theta)?.pass {
        return fail("theta is not a Lie homomorphism");
    }
    if !lie::check_assoc_hom(&ep.involution, true)?.pass {
        return fail("involution is not an anti-homomorphism");
    }
    if ep.involution.then(&ep.involution)? != LinearMap::identity(ep.env.clone(), ep.env.whole())? {
        return fail("involution does not have order two");
    }
    if let Some(u) = ep.env.unit() {
        if ep.star(u) != *u {
            return fail("involution moves the identity");
        }
    }
    for r in ep.theta.domain().basis() {
        let t = ep.theta.apply(&Element::from_vec(r.clone()))?;
        if ep.star(&t) != t.neg() {
            return fail("theta(x)* != -theta(x)");
        }
    }
    Ok(ep)
}

fn theta_images(ep: &EnvelopePair, frame: &IdempotentFrame) -> Vec<Element> {
    frame.off_diagonal_basis().iter().map(|(_, _, x)| ep.theta_of(x)).collect()
}

/// `θ(A_ij)`, `i ≠ j`, generate `A ⊕ A^op` as a ring.
pub fn check_envelope_generation(ep: &EnvelopePair, frame: &IdempotentFrame) -> Result<bool> {
    if frame.n() < 3 || frame.algebra().dim() != ep.algebra.dim() {
        return Ok(false);
    }
    let gens = ep.env.span(&theta_images(ep, frame))?;
    Ok(ep.env.subring_generated(&gens)?.is_full())
}

/// `E_1 = Σ θ(a_12)θ(b_21)` and `E_3 = Σ θ(c_32)θ(d_23)` from decompositions
/// `e_1 = Σ a_12 b_21`, `e_3 = Σ c_32 d_23`, with the identities
/// `E_1 x_13 = x_13 E_3 = (1 − E_3*) x_13`, `E_1 x_13 y_32 = x_13 y_32` and
/// `E_1 θ(d_23) = 0` checked on component bases.
pub fn build_e_elements(ep: &EnvelopePair, frame: &IdempotentFrame) -> Result<(Element, Element)> {
    if frame.n() < 3 || !frame.all_full() {
        return Err(StandardError::FrameHypotheses);
    }
    let env = &ep.env;
    let sum_of = |terms: Vec<(Element, Element)>| {
        terms
            .iter()
            .fold(env.zero(), |acc, (a, b)| acc.add(&env.mul(&ep.theta_of(a), &ep.theta_of(b))))
    };
    let d23 = peirce::unit_decomposition(frame, 2, 1)?;
    let e1 = sum_of(peirce::unit_decomposition(frame, 0, 1)?);
    let e3 = sum_of(d23.clone());
    let basis = |i, j| -> Vec<Element> {
        frame
            .component(i, j)
            .basis()
            .iter()
            .map(|r| ep.theta_of(&Element::from_vec(r.clone())))
            .collect()
    };
    let e3_star = ep.star(&e3);
    let fail = |s: &str| Err(StandardError::EIdentity(s.into()));
    let x13s = basis(0, 2);
    for x in &x13s {
        let left = env.mul(&e1, x);
        if left != env.mul(x, &e3) {
            return fail("E1 x13 != x13 E3");
        }
        if left != x.sub(&env.mul(&e3_star, x)) {
            return fail("E1 x13 != (1 - E3*) x13");
        }
    }
    for x in &x13s {
        for y in basis(2, 1) {
            let xy = env.mul(x, &y);
            if env.mul(&e1, &xy) != xy {
                return fail("E1 x13 y32 != x13 y32");
            }
        }
    }
    for (_, d) in &d23 {
        if !env.mul(&e1, &ep.theta_of(d)).is_zero() {
            return fail("E1 theta(d23) != 0");
        }
    }
    Ok((e1, e3))
}

/// `χ: A ⊕ A^op → B` with `χθ = φ`, and its restrictions
/// `ψ_1(a) = χ(a ⊕ 0)`, `ψ_2(a) = χ(0 ⊕ a^op)`.
#[derive(Debug, Clone)]
pub struct StandardDecomposition {
    pub chi: LinearMap,
    pub psi1: LinearMap,
    pub psi2: LinearMap,
    /// Dimension of the space of linear maps agreeing with the enumerated
    /// word constraints; 0 means `χ` is unique.
    pub solution_space_dim: usize,
    /// Number of words enumerated before the images spanned the envelope.
    pub words_enumerated: usize,
}

/// Extends a Lie homomorphism `φ: [A, A] → B` that is a specialization for
/// the frame's root grading to `φ = ψ_1 − ψ_2`.
///
/// The frame must consist of at least three full idempotents of `A` summing
/// to its identity.
pub fn extend_to_standard(phi: &LinearMap, frame: &IdempotentFrame) -> Result<StandardDecomposition> {
    if frame.hull().is_some() || frame.n() < 3 || !frame.all_full() {
        return Err(StandardError::FrameHypotheses);
    }
    run_pipeline(phi, frame)
}

/// The non-unital variant: the frame may live in the unital hull, and the
/// target must satisfy `Ann(⟨[B, B]⟩) = 0`, which is checked first.
pub fn check_standardizable_nonunital(
    phi: &LinearMap,
    frame: &IdempotentFrame,
) -> Result<StandardDecomposition> {
    let b = phi.target();
    let generated = b.subring_generated(&b.derived_lie_ring())?;
    let ann = b.annihilator_in(&generated)?;
    if !ann.is_zero() {
        return Err(StandardError::AnnihilatorNonzero(ann));
    }
    if frame.n() < 3 || !frame.all_full() {
        return Err(StandardError::FrameHypotheses);
    }
    run_pipeline(phi, frame)
}

fn run_pipeline(phi: &LinearMap, frame: &IdempotentFrame) -> Result<StandardDecomposition> {
    let a = frame.algebra();
    if phi.source().dim() != a.dim() || *phi.domain() != a.derived_lie_ring() {
        return Err(StandardError::MapDomain);
    }
    let grading = peirce::delta_grading(frame)?;
    let v = lie::check_lie_hom(phi)?;
    if !v.pass {
        return Err(StandardError::NotLieHom(Box::new(v)));
    }
    let v = lie::check_specialization_pairwise(phi, &grading)?;
    if !v.pass {
        return Err(StandardError::NotSpecialization(Box::new(v)));
    }
    let ep = build_envelope(a)?;
    solve_chi(&ep, frame, phi)
}

struct Word {
    letters: Vec<usize>,
    env_value: Element,
    target_value: Element,
}

fn solve_chi(ep: &EnvelopePair, frame: &IdempotentFrame, phi: &LinearMap) -> Result<StandardDecomposition> {
    let env = &ep.env;
    let b = phi.target();
    let gens_a: Vec<Element> = frame.off_diagonal_basis().into_iter().map(|(_, _, x)| x).collect();
    let gens_env: Vec<Element> = gens_a.iter().map(|x| ep.theta_of(x)).collect();
    let gens_b: Vec<Element> = gens_a.iter().map(|x| phi.apply(x)).collect::<Result<_, _>>()?;

    // breadth-first over words; only words adding a new direction are extended
    let mut echelon = EchelonBuilder::new(env.field(), env.dim());
    let mut independent: Vec<Word> = Vec::new();
    let mut dependent: Vec<Word> = Vec::new();
    let mut frontier: Vec<Word> = Vec::new();
    for (g, (x, y)) in gens_env.iter().zip(&gens_b).enumerate() {
        frontier.push(Word { letters: vec![g], env_value: x.clone(), target_value: y.clone() });
    }
    while !frontier.is_empty() && !echelon.is_full() {
        let mut new_words = Vec::new();
        for w in frontier {
            if echelon.insert(w.env_value.coeffs()) {
                new_words.push(w);
            } else {
                dependent.push(w);
            }
        }
        let mut next = Vec::new();
        if !echelon.is_full() {
            for w in &new_words {
                for (g, (x, y)) in gens_env.iter().zip(&gens_b).enumerate() {
                    let ev = env.mul(&w.env_value, x);
                    if ev.is_zero() {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(g);
                    next.push(Word { letters, env_value: ev, target_value: b.mul(&w.target_value, y) });
                }
            }
        }
        independent.extend(new_words);
        frontier = next;
    }
    let rank = echelon.rank();
    let solution_space_dim = (env.dim() - rank) * b.dim();
    if rank < env.dim() {
        return Err(StandardError::NotGenerated { rank, dim: env.dim() });
    }
    let basis: Vec<Vector> = independent.iter().map(|w| w.env_value.coeffs().to_vec()).collect();
    let values: Vec<Vector> = independent.iter().map(|w| w.target_value.coeffs().to_vec()).collect();
    let images = linalg::solve_for_map(&basis, &values, b.dim())
        .ok_or_else(|| StandardError::InvariantFailure("word values are not a basis".into()))?;
    let chi = LinearMap::new(env.clone(), b.clone(), env.whole(), images)?;
    for w in &dependent {
        if chi.apply(&w.env_value)? != w.target_value {
            return Err(StandardError::InconsistentSystem { word: w.letters.clone() });
        }
    }
    let v = lie::check_assoc_hom(&chi, false)?;
    if !v.pass {
        return Err(StandardError::NotMultiplicative(Box::new(v)));
    }
    let a = &ep.algebra;
    let psi1 = LinearMap::from_fn(a.clone(), b.clone(), a.whole(), |x| {
        chi.apply(&ep.left(x)).expect("whole domain")
    })?;
    let psi2 = LinearMap::from_fn(a.clone(), b.clone(), a.whole(), |x| {
        chi.apply(&ep.right(x)).expect("whole domain")
    })?;
    let dec = StandardDecomposition {
        chi,
        psi1,
        psi2,
        solution_space_dim,
        words_enumerated: independent.len() + dependent.len(),
    };
    verify_decomposition(&dec, phi)?;
    Ok(dec)
}

/// Checks every invariant of a standard decomposition against `φ`.
pub fn verify_decomposition(dec: &StandardDecomposition, phi: &LinearMap) -> Result<()> {
    let fail = |s: &str| Err(StandardError::InvariantFailure(s.into()));
    if !lie::check_assoc_hom(&dec.psi1, false)?.pass {
        return fail("psi1 is not a homomorphism");
    }
    if !lie::check_assoc_hom(&dec.psi2, true)?.pass {
        return fail("psi2 is not an anti-homomorphism");
    }
    let a = dec.psi1.source();
    let b = dec.psi1.target();
    let p1: Vec<Element> = a.basis_elements().iter().map(|x| dec.psi1.apply(x)).collect::<Result<_, _>>()?;
    let p2: Vec<Element> = a.basis_elements().iter().map(|x| dec.psi2.apply(x)).collect::<Result<_, _>>()?;
    for x in &p1 {
        for y in &p2 {
            if !b.mul(x, y).is_zero() || !b.mul(y, x).is_zero() {
                return fail("images of psi1 and psi2 are not orthogonal");
            }
        }
    }
    for r in phi.domain().basis() {
        let x = Element::from_vec(r.clone());
        if dec.psi1.apply(&x)?.sub(&dec.psi2.apply(&x)?) != phi.apply(&x)? {
            return fail("phi != psi1 - psi2 on [A, A]");
        }
    }
    Ok(())
}

/// The subspace `span θ(A_ij)` of generators, for diagnostics.
pub fn generator_span(ep: &EnvelopePair, frame: &IdempotentFrame) -> Result<Subspace> {
    Ok(ep.env.span(&theta_images(ep, frame))?)
}
