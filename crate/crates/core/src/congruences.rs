//! Congruence checking, enumeration and closure, the congruence extension
//! property, and the principal/compose/decompose constructions for
//! QB-algebras.
//!
//! Congruences are [`Partition`]s. Constructions that the theory states as
//! explicit pair sets go through [`Partition::from_relation_checked`], so a
//! pair set that is not already an equivalence relation is reported instead
//! of being silently closed.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::partition::{Partition, RelationDefect, UnionFind};
use crate::quotients::{chi, quotient, tau};

/// Largest carrier for which partitions or subsets are enumerated.
pub const ENUMERATION_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("carrier of size {size} exceeds the enumeration limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("partition covers {found} elements but the algebra has {expected}")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("the given set is not a subalgebra")]
    NotASubalgebra,
    #[error("the given partition is not a congruence")]
    NotACongruence,
    #[error("no congruence on the algebra restricts to the given one")]
    NoExtensionFound,
    #[error("split lemma fails at ({x}, {y}): related in θ = {in_theta}, related in θ₁×θ₂ = {in_product}")]
    LemmaViolation { x: String, y: String, in_theta: bool, in_product: bool },
    #[error("operation needs a non-flat algebra")]
    FlatInput,
    #[error("operation needs a flat algebra")]
    NotFlat,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("not closed under star: {0}")]
    NotStarClosed(String),
    #[error("pair set is not an equivalence relation: {0}")]
    NotAnEquivalence(RelationDefect),
    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
    #[error("condition (C1) violated: {0}")]
    ConditionC1Violated(String),
    #[error("condition (C2) violated: {0}")]
    ConditionC2Violated(String),
    #[error("condition (C3) violated: {0}")]
    ConditionC3Violated(String),
}

fn check_carrier(a: &FiniteAlgebra, theta: &Partition) -> Result<(), CongruenceError> {
    if theta.carrier_size() != a.size() {
        return Err(CongruenceError::CarrierMismatch { expected: a.size(), found: theta.carrier_size() });
    }
    Ok(())
}

fn guard(a: &FiniteAlgebra) -> Result<(), CongruenceError> {
    if a.size() > ENUMERATION_LIMIT {
        return Err(CongruenceError::TooLarge { size: a.size(), limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Compatibility of `theta` with join, meet and star.
///
/// Checking each element against the least member of its block suffices:
/// the remaining pairs follow by transitivity.
pub fn is_congruence(a: &FiniteAlgebra, theta: &Partition) -> bool {
    if theta.carrier_size() != a.size() {
        return false;
    }
    theta.blocks().iter().all(|block| {
        let x = block[0];
        block[1..].iter().all(|&y| {
            theta.related(a.star(x), a.star(y))
                && a.elements().all(|c| {
                    theta.related(a.join(x, c), a.join(y, c))
                        && theta.related(a.join(c, x), a.join(c, y))
                        && theta.related(a.meet(x, c), a.meet(y, c))
                        && theta.related(a.meet(c, x), a.meet(c, y))
                })
        })
    })
}

/// Every congruence, in restricted-growth-string order.
pub fn all_congruences(a: &FiniteAlgebra) -> Result<Vec<Partition>, CongruenceError> {
    guard(a)?;
    let n = a.size();
    let mut labels = vec![0usize; n];
    let mut out = Vec::new();
    rgs(a, &mut labels, 0, 0, &mut out);
    Ok(out)
}

fn rgs(a: &FiniteAlgebra, labels: &mut [usize], k: usize, blocks: usize, out: &mut Vec<Partition>) {
    let n = a.size();
    if k == n {
        let p = Partition::from_labels(labels);
        debug_assert!(is_congruence(a, &p));
        out.push(p);
        return;
    }
    for label in 0..=blocks {
        labels[k] = label;
        if consistent_so_far(a, labels, k) {
            rgs(a, labels, k + 1, blocks.max(label + 1), out);
        }
    }
}

/// Rejects a partial labelling of `0..=k` once some compatibility
/// requirement between assigned elements is already violated.
fn consistent_so_far(a: &FiniteAlgebra, labels: &[usize], k: usize) -> bool {
    let assigned = |u: Element| u <= k;
    let clash = |u: Element, v: Element| assigned(u) && assigned(v) && labels[u] != labels[v];
    for y in 0..=k {
        for x in 0..y {
            if labels[x] != labels[y] {
                continue;
            }
            if clash(a.star(x), a.star(y)) {
                return false;
            }
            for c in a.elements() {
                if clash(a.join(x, c), a.join(y, c))
                    || clash(a.join(c, x), a.join(c, y))
                    || clash(a.meet(x, c), a.meet(y, c))
                    || clash(a.meet(c, x), a.meet(c, y))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// The least congruence containing `seed`.
pub fn generated_congruence(a: &FiniteAlgebra, seed: &[(Element, Element)]) -> Partition {
    let mut uf = UnionFind::new(a.size());
    let mut work = Vec::new();
    for &(x, y) in seed {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    // Only merges need propagating: they generate the equivalence, and the
    // translations preserve every chain built from them.
    while let Some((x, y)) = work.pop() {
        let mut push = |u: Element, v: Element| {
            if uf.union(u, v) {
                work.push((u, v));
            }
        };
        push(a.star(x), a.star(y));
        for c in a.elements() {
            push(a.join(x, c), a.join(y, c));
            push(a.join(c, x), a.join(c, y));
            push(a.meet(x, c), a.meet(y, c));
            push(a.meet(c, x), a.meet(c, y));
        }
    }
    uf.partition()
}

/// All subuniverses, ordered by size and then lexicographically.
pub fn subalgebras(a: &FiniteAlgebra) -> Result<Vec<Vec<Element>>, CongruenceError> {
    guard(a)?;
    let n = a.size();
    let required = (1u32 << a.zero()) | (1u32 << a.one());
    let mut out: Vec<Vec<Element>> = (0u32..1 << n)
        .filter(|mask| mask & required == required)
        .map(|mask| (0..n).filter(|&x| mask >> x & 1 == 1).collect::<Vec<_>>())
        .filter(|subset| a.is_subuniverse(subset))
        .collect();
    out.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)));
    Ok(out)
}

/// A congruence on the whole algebra extending one on a subalgebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub congruence: Partition,
    /// Set when the generated congruence did not restrict correctly and an
    /// exhaustive search had to supply the answer. Should never happen.
    pub via_fallback: bool,
}

/// Extends `theta0` (a congruence on the subalgebra on `sub`, indexed by
/// position in `sub`) to the least congruence on `a` that contains it, and
/// checks that it restricts back to `theta0`.
pub fn extend_from_subalgebra(
    a: &FiniteAlgebra,
    sub: &[Element],
    theta0: &Partition,
) -> Result<Extension, CongruenceError> {
    let q0 = a.subalgebra(sub).ok_or(CongruenceError::NotASubalgebra)?;
    if theta0.carrier_size() != sub.len() || !is_congruence(&q0, theta0) {
        return Err(CongruenceError::NotACongruence);
    }
    let seed: Vec<(Element, Element)> =
        theta0.blocks().iter().flat_map(|b| b[1..].iter().map(move |&i| (sub[b[0]], sub[i]))).collect();
    let least = generated_congruence(a, &seed);
    if least.restrict(sub) == *theta0 {
        return Ok(Extension { congruence: least, via_fallback: false });
    }
    all_congruences(a)?
        .into_iter()
        .find(|theta| theta.restrict(sub) == *theta0)
        .map(|congruence| Extension { congruence, via_fallback: true })
        .ok_or(CongruenceError::NoExtensionFound)
}

/// θ pushed through the canonical projections onto `A/χ` and `A/τ`.
#[derive(Debug, Clone)]
pub struct SplitCongruence {
    pub boolean_factor: FiniteAlgebra,
    pub flat_factor: FiniteAlgebra,
    pub theta_chi: Partition,
    pub theta_tau: Partition,
}

/// Splits θ into θ₁ on `A/χ` and θ₂ on `A/τ` and checks exhaustively that
/// `(x, y) ∈ θ` iff `(x/χ, y/χ) ∈ θ₁` and `(x/τ, y/τ) ∈ θ₂`.
pub fn split_congruence(a: &FiniteAlgebra, theta: &Partition) -> Result<SplitCongruence, CongruenceError> {
    check_carrier(a, theta)?;
    if !is_congruence(a, theta) {
        return Err(CongruenceError::NotACongruence);
    }
    let (boolean_factor, to_chi) = quotient(a, &chi(a)).map_err(|_| CongruenceError::NotACongruence)?;
    let (flat_factor, to_tau) = quotient(a, &tau(a)).map_err(|_| CongruenceError::NotACongruence)?;
    let pairs = theta.pairs();
    let theta_chi =
        Partition::from_pairs(boolean_factor.size(), pairs.iter().map(|&(x, y)| (to_chi.apply(x), to_chi.apply(y))));
    let theta_tau =
        Partition::from_pairs(flat_factor.size(), pairs.iter().map(|&(x, y)| (to_tau.apply(x), to_tau.apply(y))));
    if !is_congruence(&boolean_factor, &theta_chi) || !is_congruence(&flat_factor, &theta_tau) {
        return Err(CongruenceError::NotACongruence);
    }
    for x in a.elements() {
        for y in a.elements() {
            let in_theta = theta.related(x, y);
            let in_product = theta_chi.related(to_chi.apply(x), to_chi.apply(y))
                && theta_tau.related(to_tau.apply(x), to_tau.apply(y));
            if in_theta != in_product {
                return Err(CongruenceError::LemmaViolation {
                    x: a.name(x).to_string(),
                    y: a.name(y).to_string(),
                    in_theta,
                    in_product,
                });
            }
        }
    }
    Ok(SplitCongruence { boolean_factor, flat_factor, theta_chi, theta_tau })
}

fn symmetric_pairs(pairs: &[(Element, Element)]) -> impl Iterator<Item = (Element, Element)> + '_ {
    pairs.iter().flat_map(|&(x, y)| [(x, y), (y, x)])
}

fn from_pair_set(a: &FiniteAlgebra, pairs: BTreeSet<(Element, Element)>) -> Result<Partition, CongruenceError> {
    Partition::from_relation_checked(a.size(), &pairs).map_err(CongruenceError::NotAnEquivalence)
}

fn diagonal(a: &FiniteAlgebra) -> impl Iterator<Item = (Element, Element)> {
    a.elements().map(|x| (x, x))
}

/// `θ ∪ Δ ∪ {(x,y), (y,x), (x*,y*), (y*,x*)}` for a congruence θ on the
/// regular subalgebra, given on positions of [`FiniteAlgebra::regular_elements`].
pub fn principal_ext_nonflat(
    a: &FiniteAlgebra,
    theta_r: &Partition,
    x: Element,
    y: Element,
) -> Result<Partition, CongruenceError> {
    if a.is_flat() {
        return Err(CongruenceError::FlatInput);
    }
    let regular = a.regular_elements();
    let r_alg = a.subalgebra(&regular).expect("regular elements form a subalgebra");
    if theta_r.carrier_size() != regular.len() || !is_congruence(&r_alg, theta_r) {
        return Err(CongruenceError::PreconditionViolated("θ must be a congruence on the regular subalgebra".into()));
    }
    for (label, e) in [("x", x), ("y", y)] {
        if a.is_regular(e) {
            return Err(CongruenceError::PreconditionViolated(format!("{label} = {} is regular", a.name(e))));
        }
    }
    if a.join(y, y) != a.join(x, x) {
        return Err(CongruenceError::PreconditionViolated(format!(
            "{} is not in cl({} ∨ {})",
            a.name(y),
            a.name(x),
            a.name(x)
        )));
    }
    let mut pairs: BTreeSet<(Element, Element)> =
        theta_r.pairs().into_iter().map(|(i, j)| (regular[i], regular[j])).collect();
    pairs.extend(diagonal(a));
    pairs.extend(symmetric_pairs(&[(x, y), (a.star(x), a.star(y))]));
    let theta = from_pair_set(a, pairs)?;
    if !is_congruence(a, &theta) {
        return Err(CongruenceError::NotACongruence);
    }
    Ok(theta)
}

/// The four-case pair set for `θ_{x,y}` in a flat algebra, selected by
/// whether `x` and `y` are fixed by star.
pub fn principal_flat(a: &FiniteAlgebra, x: Element, y: Element) -> Result<Partition, CongruenceError> {
    if !a.is_flat() {
        return Err(CongruenceError::NotFlat);
    }
    if x == y {
        return Err(CongruenceError::PreconditionViolated("x and y must differ".into()));
    }
    for e in [x, y] {
        if a.is_regular(e) {
            return Err(CongruenceError::PreconditionViolated(format!("{} is regular", a.name(e))));
        }
    }
    let (xs, ys) = (a.star(x), a.star(y));
    let mut generators = vec![(x, y)];
    match (xs == x, ys == y) {
        (true, true) => {}
        (true, false) => generators.extend([(xs, ys), (y, ys)]),
        (false, true) => generators.extend([(xs, ys), (x, xs)]),
        (false, false) => generators.extend([(xs, ys), (x, xs), (y, ys), (x, ys), (xs, y)]),
    }
    let mut pairs: BTreeSet<(Element, Element)> = diagonal(a).collect();
    pairs.extend(symmetric_pairs(&generators));
    let theta = from_pair_set(a, pairs)?;
    if !is_congruence(a, &theta) {
        return Err(CongruenceError::NotACongruence);
    }
    Ok(theta)
}

/// `Δ_R ∪ θ_IR` for a star-closed equivalence on the irregular elements of a
/// flat algebra, given on positions of [`FiniteAlgebra::irregular_elements`].
pub fn compose_flat(a: &FiniteAlgebra, theta_ir: &Partition) -> Result<Partition, CongruenceError> {
    if !a.is_flat() {
        return Err(CongruenceError::NotFlat);
    }
    let irregular = a.irregular_elements();
    if theta_ir.carrier_size() != irregular.len() {
        return Err(CongruenceError::CarrierMismatch { expected: irregular.len(), found: theta_ir.carrier_size() });
    }
    let theta = theta_ir.lift(&irregular, a.size());
    for block in theta_ir.blocks() {
        let image: Vec<Element> = block.iter().map(|&i| a.star(irregular[i])).collect();
        if !image.iter().all(|&s| theta.related(s, image[0])) {
            let names: Vec<Element> = block.iter().map(|&i| irregular[i]).collect();
            return Err(CongruenceError::NotStarClosed(format!(
                "the star image of {} is not a block",
                a.format_set(&names)
            )));
        }
    }
    if !is_congruence(a, &theta) {
        return Err(CongruenceError::NotACongruence);
    }
    Ok(theta)
}

/// One arrow of the partial map `f : X → IR/θ_IR`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockMapping {
    pub block: Vec<Element>,
    pub image: Vec<Element>,
}

/// The parts of a congruence on a non-flat algebra. Every block is a sorted
/// list of carrier indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceDecomposition {
    /// θ ∩ 𝓡², as blocks covering the regular elements.
    pub theta_r: Vec<Vec<Element>>,
    /// θ ∩ 𝓘𝓡², as blocks covering the irregular elements.
    pub theta_ir: Vec<Vec<Element>>,
    /// The θ_R-blocks in the domain of `f`.
    pub x: Vec<Vec<Element>>,
    pub f: Vec<BlockMapping>,
    /// Mixed pairs of θ in both orders, sorted.
    pub theta_cross: Vec<(Element, Element)>,
}

impl CongruenceDecomposition {
    pub fn display(&self, a: &FiniteAlgebra) -> String {
        let blocks = |bs: &[Vec<Element>]| {
            if bs.is_empty() {
                "∅".to_string()
            } else {
                bs.iter().map(|b| a.format_set(b)).collect::<Vec<_>>().join(" ")
            }
        };
        let f = if self.f.is_empty() {
            "∅".to_string()
        } else {
            self.f
                .iter()
                .map(|m| format!("{} ↦ {}", a.format_set(&m.block), a.format_set(&m.image)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let cross = if self.theta_cross.is_empty() {
            "∅".to_string()
        } else {
            self.theta_cross
                .iter()
                .map(|&(x, y)| format!("⟨{},{}⟩", a.name(x), a.name(y)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "theta_R:  {}\ntheta_IR: {}\nX:        {}\nf:        {}\ncross:    {}\n",
            blocks(&self.theta_r),
            blocks(&self.theta_ir),
            blocks(&self.x),
            f,
            cross
        )
    }
}

/// Splits a congruence on a non-flat algebra into its regular part, its
/// irregular part, and the mixed pairs, together with `X` and `f`.
pub fn decompose(a: &FiniteAlgebra, theta: &Partition) -> Result<CongruenceDecomposition, CongruenceError> {
    if a.is_flat() {
        return Err(CongruenceError::FlatInput);
    }
    check_carrier(a, theta)?;
    if !is_congruence(a, theta) {
        return Err(CongruenceError::NotACongruence);
    }
    let mut theta_r = Vec::new();
    let mut theta_ir = Vec::new();
    let mut x = Vec::new();
    let mut f = Vec::new();
    for block in theta.blocks() {
        let (regular, irregular): (Vec<Element>, Vec<Element>) = block.iter().partition(|&&e| a.is_regular(e));
        if !irregular.is_empty() {
            theta_ir.push(irregular.clone());
        }
        if regular.is_empty() {
            continue;
        }
        // y ∈ cl(r) ∩ 𝓘𝓡 ∩ r/θ for some r in the block; least index wins
        if let Some(&y) = irregular.iter().find(|&&y| regular.contains(&a.join(y, y))) {
            x.push(regular.clone());
            let image = theta.block_of(y).iter().copied().filter(|&e| !a.is_regular(e)).collect();
            f.push(BlockMapping { block: regular.clone(), image });
        }
        theta_r.push(regular);
    }
    theta_ir.sort();
    let theta_cross = theta.pairs().into_iter().filter(|&(p, q)| a.is_regular(p) != a.is_regular(q)).collect();
    let d = CongruenceDecomposition { theta_r, theta_ir, x, f, theta_cross };
    debug_assert_eq!(compose_nonflat(a, &d).as_ref(), Ok(theta));
    Ok(d)
}

fn blocks_cover(
    a: &FiniteAlgebra,
    blocks: &[Vec<Element>],
    expected: &[Element],
    what: &str,
) -> Result<Partition, CongruenceError> {
    let mut seen: Vec<Element> = blocks.iter().flatten().copied().collect();
    seen.sort_unstable();
    if seen != expected || blocks.iter().any(Vec::is_empty) {
        return Err(CongruenceError::MalformedDecomposition(format!(
            "{what} blocks must partition {}",
            a.format_set(expected)
        )));
    }
    Ok(Partition::from_blocks(a.size(), blocks).expect("blocks are disjoint and in range"))
}

/// Reassembles `θ_R ∪ θ_IR ∪ θ_cross` after checking (C1), (C2) and (C3).
pub fn compose_nonflat(a: &FiniteAlgebra, d: &CongruenceDecomposition) -> Result<Partition, CongruenceError> {
    if a.is_flat() {
        return Err(CongruenceError::FlatInput);
    }
    let regular = a.regular_elements();
    let irregular = a.irregular_elements();
    let theta_r = blocks_cover(a, &d.theta_r, &regular, "theta_R")?;
    let theta_ir = blocks_cover(a, &d.theta_ir, &irregular, "theta_IR")?;
    let r_alg = a.subalgebra(&regular).expect("regular elements form a subalgebra");
    if !is_congruence(&r_alg, &theta_r.restrict(&regular)) {
        return Err(CongruenceError::MalformedDecomposition(
            "theta_R is not a congruence on the regular subalgebra".into(),
        ));
    }
    let set = |s: &[Element]| a.format_set(s);
    let star_of = |block: &[Element]| {
        let mut image: Vec<Element> = block.iter().map(|&e| a.star(e)).collect();
        image.sort_unstable();
        image
    };

    // (C1): θ_IR is star-closed and lives inside the clouds of θ_R-blocks
    for block in &d.theta_ir {
        let image = star_of(block);
        if theta_ir.block_of(image[0]) != image.as_slice() {
            return Err(CongruenceError::ConditionC1Violated(format!(
                "star image {} of {} is not a theta_IR block",
                set(&image),
                set(block)
            )));
        }
        let k = a.join(block[0], block[0]);
        if let Some(&b) = block.iter().find(|&&b| !theta_r.related(a.join(b, b), k)) {
            return Err(CongruenceError::ConditionC1Violated(format!(
                "{} and {} lie in clouds of different theta_R blocks",
                a.name(block[0]),
                a.name(b)
            )));
        }
    }

    // (C2): f is an injective, star-preserving map on a star-closed X
    let domain: Vec<&Vec<Element>> = d.f.iter().map(|m| &m.block).collect();
    let mut x_sorted: Vec<&Vec<Element>> = d.x.iter().collect();
    let mut domain_sorted = domain.clone();
    x_sorted.sort();
    domain_sorted.sort();
    domain_sorted.dedup();
    if x_sorted != domain_sorted || domain_sorted.len() != domain.len() {
        return Err(CongruenceError::ConditionC2Violated("the domain of f must be exactly X".into()));
    }
    let image_of = |block: &[Element]| d.f.iter().find(|m| m.block == block).map(|m| &m.image);
    for m in &d.f {
        if theta_r.block_of(m.block[0]) != m.block.as_slice() {
            return Err(CongruenceError::ConditionC2Violated(format!("{} is not a theta_R block", set(&m.block))));
        }
        if m.image.is_empty() || theta_ir.block_of(m.image[0]) != m.image.as_slice() {
            return Err(CongruenceError::ConditionC2Violated(format!("{} is not a theta_IR block", set(&m.image))));
        }
        if !m.image.iter().any(|&y| m.block.contains(&a.join(y, y))) {
            return Err(CongruenceError::ConditionC2Violated(format!(
                "{} does not meet the cloud of {}",
                set(&m.image),
                set(&m.block)
            )));
        }
        let starred = star_of(&m.block);
        let Some(starred_image) = image_of(&starred) else {
            return Err(CongruenceError::ConditionC2Violated(format!(
                "X is not star-closed: {} is missing",
                set(&starred)
            )));
        };
        if *starred_image != star_of(&m.image) {
            return Err(CongruenceError::ConditionC2Violated(format!(
                "f({}) = {} but f({})* = {}",
                set(&starred),
                set(starred_image),
                set(&m.block),
                set(&star_of(&m.image))
            )));
        }
    }
    for (i, m) in d.f.iter().enumerate() {
        if let Some(other) = d.f[..i].iter().find(|o| o.image == m.image) {
            return Err(CongruenceError::ConditionC2Violated(format!(
                "f is not injective: {} and {} both map to {}",
                set(&other.block),
                set(&m.block),
                set(&m.image)
            )));
        }
    }

    // (C3): the mixed pairs are exactly B × f(B) and f(B) × B for B in X
    let expected: BTreeSet<(Element, Element)> =
        d.f.iter()
            .flat_map(|m| m.block.iter().flat_map(move |&r| m.image.iter().flat_map(move |&y| [(r, y), (y, r)])))
            .collect();
    let given: BTreeSet<(Element, Element)> = d.theta_cross.iter().copied().collect();
    if let Some(&(p, q)) = expected.symmetric_difference(&given).next() {
        let state = if given.contains(&(p, q)) { "unexpected" } else { "missing" };
        return Err(CongruenceError::ConditionC3Violated(format!("{state} cross pair ⟨{},{}⟩", a.name(p), a.name(q))));
    }

    let mut pairs = theta_r.pairs();
    pairs.extend(theta_ir.pairs());
    pairs.extend(given);
    let theta = from_pair_set(a, pairs)?;
    if !is_congruence(a, &theta) {
        return Err(CongruenceError::NotACongruence);
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn part(a: &FiniteAlgebra, text: &str) -> Partition {
        Partition::parse(text, a.names()).unwrap()
    }

    fn show(a: &FiniteAlgebra, p: &Partition) -> String {
        p.display(a.names())
    }

    fn el(a: &FiniteAlgebra, name: &str) -> Element {
        a.index_of(name).unwrap()
    }

    /// Every set partition of `0..n`, by brute force over label vectors.
    fn every_partition(n: usize) -> Vec<Partition> {
        let mut out = BTreeSet::new();
        let total = n.pow(n as u32);
        for mut code in 0..total {
            let labels: Vec<usize> = (0..n)
                .map(|_| {
                    let l = code % n;
                    code /= n;
                    l
                })
                .collect();
            out.insert(Partition::from_labels(&labels));
        }
        out.into_iter().collect()
    }

    /// Compatibility checked pair by pair against the definition.
    fn naive_is_congruence(a: &FiniteAlgebra, theta: &Partition) -> bool {
        let pairs = theta.pairs();
        pairs.iter().all(|&(x, y)| {
            pairs.contains(&(a.star(x), a.star(y)))
                && pairs.iter().all(|&(u, v)| {
                    pairs.contains(&(a.join(x, u), a.join(y, v))) && pairs.contains(&(a.meet(x, u), a.meet(y, v)))
                })
        })
    }

    #[test]
    fn congruence_check_examples() {
        let four = fixtures::four();
        assert!(is_congruence(&four, &part(&four, "0,1;a;b")));
        let bad = part(&four, "0,a;b;1");
        assert!(!is_congruence(&four, &bad));
        // the star witness: (0,a) maps to (1,b), which is unrelated
        assert!(!bad.related(four.star(el(&four, "0")), four.star(el(&four, "a"))));
        for (_, a) in fixtures::all() {
            assert!(is_congruence(&a, &Partition::identity(a.size())));
            assert!(is_congruence(&a, &Partition::total(a.size())));
        }
    }

    #[test]
    fn enumeration_matches_naive_filter() {
        for (name, a) in fixtures::all() {
            let fast = all_congruences(&a).unwrap();
            let slow: Vec<Partition> =
                every_partition(a.size()).into_iter().filter(|p| naive_is_congruence(&a, p)).collect();
            let mut fast_sorted = fast.clone();
            fast_sorted.sort();
            assert_eq!(fast_sorted, slow, "{name}");
            assert!(fast.contains(&chi(&a)) && fast.contains(&tau(&a)), "{name}");
        }
    }

    #[test]
    fn small_congruence_lattices() {
        let two = fixtures::two();
        assert_eq!(all_congruences(&two).unwrap(), vec![Partition::total(2), Partition::identity(2)]);
        let four = fixtures::four();
        assert!(all_congruences(&four).unwrap().contains(&part(&four, "0,1;a;b")));
        let f3 = fixtures::f3();
        assert!(all_congruences(&f3).unwrap().contains(&part(&f3, "0;c,d")));
        let big = crate::quotients::make_flat(11, 1).unwrap();
        assert!(matches!(all_congruences(&big), Err(CongruenceError::TooLarge { size: 11, .. })));
    }

    #[test]
    fn generated_congruences() {
        let four = fixtures::four();
        let (a, b) = (el(&four, "a"), el(&four, "b"));
        let theta = generated_congruence(&four, &[(a, b)]);
        assert_eq!(show(&four, &theta), "0,1;a,b");
        assert_eq!(generated_congruence(&four, &[]), Partition::identity(4));
        let f3 = fixtures::f3();
        let theta = generated_congruence(&f3, &[(el(&f3, "c"), el(&f3, "d"))]);
        assert_eq!(show(&f3, &theta), "0;c,d");
    }

    #[test]
    fn generated_congruence_is_least() {
        for (name, a) in fixtures::all() {
            let all = all_congruences(&a).unwrap();
            for x in a.elements() {
                for y in a.elements() {
                    let least = generated_congruence(&a, &[(x, y)]);
                    assert!(is_congruence(&a, &least));
                    let containing: Vec<&Partition> = all.iter().filter(|t| t.related(x, y)).collect();
                    assert!(containing.contains(&&least), "{name}");
                    assert!(containing.iter().all(|t| least.refines(t)), "{name}");
                }
            }
        }
    }

    #[test]
    fn subalgebra_lists() {
        let six = fixtures::six();
        let subs = subalgebras(&six).unwrap();
        let four_carrier: Vec<Element> =
            ["0", "a", "b", "1"].iter().map(|n| el(&six, n)).collect::<BTreeSet<_>>().into_iter().collect();
        assert!(subs.contains(&four_carrier));
        let four = fixtures::four();
        let subs = subalgebras(&four).unwrap();
        assert_eq!(subs.first().unwrap(), &vec![0, 3]);
        assert_eq!(subs.last().unwrap(), &vec![0, 1, 2, 3]);
        let a = fixtures::a();
        assert!(subalgebras(&a).unwrap().contains(&a.regular_elements()));
        for s in subalgebras(&a).unwrap() {
            assert!(a.subalgebra(&s).unwrap().is_qb_algebra());
        }
    }

    #[test]
    fn extension_examples() {
        let six = fixtures::six();
        let sub: Vec<Element> = vec![el(&six, "0"), el(&six, "a"), el(&six, "b"), el(&six, "1")];
        let mut sorted = sub.clone();
        sorted.sort_unstable();
        let ext = extend_from_subalgebra(&six, &sorted, &Partition::total(4)).unwrap();
        assert_eq!(show(&six, &ext.congruence), "0,a,b,1;e;f");
        assert!(!ext.via_fallback);
        let ext = extend_from_subalgebra(&six, &sorted, &Partition::identity(4)).unwrap();
        assert!(ext.congruence.is_identity());

        let f5 = fixtures::f5();
        let mut sub = vec![el(&f5, "0"), el(&f5, "g"), el(&f5, "i")];
        sub.sort_unstable();
        let q0 = f5.subalgebra(&sub).unwrap();
        let theta0 = Partition::parse("0;g,i", q0.names()).unwrap();
        let ext = extend_from_subalgebra(&f5, &sub, &theta0).unwrap();
        assert_eq!(show(&f5, &ext.congruence), "0;g,i;h;j");

        assert_eq!(
            extend_from_subalgebra(&six, &[0, 1], &Partition::identity(2)).unwrap_err(),
            CongruenceError::NotASubalgebra
        );
    }

    #[test]
    fn split_examples() {
        let four = fixtures::four();
        let s = split_congruence(&four, &Partition::total(4)).unwrap();
        assert!(s.theta_chi.is_total() && s.boolean_factor.size() == 2);
        assert!(s.theta_tau.is_total() && s.flat_factor.size() == 3);
        let s = split_congruence(&four, &Partition::identity(4)).unwrap();
        assert!(s.theta_chi.is_identity() && s.theta_tau.is_identity());
        let s = split_congruence(&four, &chi(&four)).unwrap();
        assert!(s.theta_chi.is_identity());
        assert!(s.theta_tau.is_total());
    }

    #[test]
    fn split_lemma_on_every_fixture_congruence() {
        for (name, a) in fixtures::all() {
            for theta in all_congruences(&a).unwrap() {
                let result = split_congruence(&a, &theta);
                assert!(result.is_ok(), "{name} {}: {:?}", show(&a, &theta), result.err());
            }
        }
    }

    #[test]
    fn principal_nonflat_examples() {
        let four = fixtures::four();
        let a4 = el(&four, "a");
        let theta = principal_ext_nonflat(&four, &Partition::total(2), a4, a4).unwrap();
        assert_eq!(show(&four, &theta), "0,1;a;b");
        // b is not in the cloud of a ∨ a, so (a, b) is outside the construction
        assert!(matches!(
            principal_ext_nonflat(&four, &Partition::total(2), a4, el(&four, "b")),
            Err(CongruenceError::PreconditionViolated(_))
        ));

        let six = fixtures::six();
        let (a, e, b) = (el(&six, "a"), el(&six, "e"), el(&six, "b"));
        let theta = principal_ext_nonflat(&six, &Partition::identity(2), a, e).unwrap();
        assert_eq!(show(&six, &theta), "0;a,e;f,b;1");
        assert!(matches!(
            principal_ext_nonflat(&six, &Partition::identity(2), a, b),
            Err(CongruenceError::PreconditionViolated(_))
        ));
        assert_eq!(
            principal_ext_nonflat(&fixtures::f3(), &Partition::identity(1), 1, 2),
            Err(CongruenceError::FlatInput)
        );
    }

    #[test]
    fn principal_nonflat_is_least() {
        for (name, a) in fixtures::all().into_iter().filter(|(_, a)| !a.is_flat()) {
            let regular = a.regular_elements();
            let r_alg = a.subalgebra(&regular).unwrap();
            for theta_r in all_congruences(&r_alg).unwrap() {
                for x in a.irregular_elements() {
                    for y in a.cloud_of(x).into_iter().filter(|&y| !a.is_regular(y)) {
                        let theta = principal_ext_nonflat(&a, &theta_r, x, y).unwrap();
                        let mut seed: Vec<(Element, Element)> =
                            theta_r.pairs().into_iter().map(|(i, j)| (regular[i], regular[j])).collect();
                        seed.push((x, y));
                        assert_eq!(theta, generated_congruence(&a, &seed), "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn principal_flat_examples() {
        let f3 = fixtures::f3();
        let theta = principal_flat(&f3, el(&f3, "c"), el(&f3, "d")).unwrap();
        assert_eq!(show(&f3, &theta), "0;c,d");

        let f5 = fixtures::f5();
        let (g, h) = (el(&f5, "g"), el(&f5, "h"));
        let theta = principal_flat(&f5, g, h).unwrap();
        assert_eq!(show(&f5, &theta), "0;g,h,i,j");
        // the twelve off-diagonal pairs of the fourth case
        assert_eq!(theta.pairs().len() - f5.size(), 12);
        assert!(matches!(principal_flat(&f5, g, g), Err(CongruenceError::PreconditionViolated(_))));
        assert_eq!(principal_flat(&fixtures::four(), 1, 2), Err(CongruenceError::NotFlat));
    }

    #[test]
    fn principal_flat_minimality() {
        // Least whenever the pair set is forced by star; when x and y are
        // moved by star and y ≠ x*, {x,y};{x*,y*} is already a congruence.
        for k in [1, 2, 3, 5] {
            let n = k + 4;
            let a = crate::quotients::make_flat(n, k).unwrap();
            for x in a.irregular_elements() {
                for y in a.irregular_elements().into_iter().filter(|&y| y != x) {
                    let theta = principal_flat(&a, x, y).unwrap();
                    let least = generated_congruence(&a, &[(x, y)]);
                    let both_moved = a.star(x) != x && a.star(y) != y;
                    if both_moved && a.star(x) != y {
                        assert!(least.refines(&theta) && least != theta);
                        assert_eq!(least.block_of(x), sorted(&[x, y]));
                    } else {
                        assert_eq!(theta, least);
                    }
                }
            }
        }
    }

    fn sorted(xs: &[Element]) -> Vec<Element> {
        let mut v = xs.to_vec();
        v.sort_unstable();
        v
    }

    #[test]
    fn compose_flat_examples() {
        let f3 = fixtures::f3();
        let theta = compose_flat(&f3, &Partition::total(2)).unwrap();
        assert_eq!(show(&f3, &theta), "0;c,d");
        let f5 = fixtures::f5();
        assert!(compose_flat(&f5, &Partition::identity(4)).unwrap().is_identity());
        // irregular positions: g h i j
        let theta_ir = Partition::parse("g,h;i,j", &f5.names()[1..]).unwrap();
        let theta = compose_flat(&f5, &theta_ir).unwrap();
        assert_eq!(show(&f5, &theta), "0;g,h;i,j");
        let closed = Partition::parse("g,i", &f5.names()[1..]).unwrap();
        assert!(compose_flat(&f5, &closed).is_ok());
        let not_closed = Partition::parse("g,h", &f5.names()[1..]).unwrap();
        assert!(matches!(compose_flat(&f5, &not_closed), Err(CongruenceError::NotStarClosed(_))));
    }

    #[test]
    fn decompose_four() {
        let four = fixtures::four();
        let d = decompose(&four, &part(&four, "0,1;a;b")).unwrap();
        assert_eq!(d.theta_r, vec![vec![0, 3]]);
        assert_eq!(d.theta_ir, vec![vec![1], vec![2]]);
        assert!(d.x.is_empty() && d.f.is_empty() && d.theta_cross.is_empty());
        assert_eq!(compose_nonflat(&four, &d).unwrap(), part(&four, "0,1;a;b"));

        let d = decompose(&four, &Partition::identity(4)).unwrap();
        assert_eq!(d.theta_r, vec![vec![0], vec![3]]);
        assert!(d.f.is_empty() && d.theta_cross.is_empty());
    }

    #[test]
    fn decompose_six_chi() {
        let six = fixtures::six();
        let theta = chi(&six);
        let d = decompose(&six, &theta).unwrap();
        let ids = |names: &[&str]| sorted(&names.iter().map(|n| el(&six, n)).collect::<Vec<_>>());
        assert_eq!(d.theta_r, vec![ids(&["0"]), ids(&["1"])]);
        assert_eq!(d.theta_ir, vec![ids(&["a", "e"]), ids(&["f", "b"])]);
        assert_eq!(
            d.f,
            vec![
                BlockMapping { block: ids(&["0"]), image: ids(&["a", "e"]) },
                BlockMapping { block: ids(&["1"]), image: ids(&["f", "b"]) },
            ]
        );
        assert_eq!(d.theta_cross.len(), 8);
        assert_eq!(compose_nonflat(&six, &d).unwrap(), theta);
    }

    #[test]
    fn compose_examples_and_failures() {
        let four = fixtures::four();
        let d = CongruenceDecomposition {
            theta_r: vec![vec![0, 3]],
            theta_ir: vec![vec![1], vec![2]],
            x: vec![],
            f: vec![],
            theta_cross: vec![],
        };
        assert_eq!(show(&four, &compose_nonflat(&four, &d).unwrap()), "0,1;a;b");

        let bad = CongruenceDecomposition {
            x: vec![vec![0, 3]],
            f: vec![BlockMapping { block: vec![0, 3], image: vec![1] }],
            theta_cross: vec![(0, 1), (1, 0), (3, 1), (1, 3)],
            ..d.clone()
        };
        assert!(matches!(compose_nonflat(&four, &bad), Err(CongruenceError::ConditionC2Violated(_))));

        // a ∨ a = 0 and b ∨ b = 1 are not θ_R-related once θ_R = Δ
        let c1 = CongruenceDecomposition { theta_r: vec![vec![0], vec![3]], theta_ir: vec![vec![1, 2]], ..d.clone() };
        assert!(matches!(compose_nonflat(&four, &c1), Err(CongruenceError::ConditionC1Violated(_))));

        let c3 = CongruenceDecomposition { theta_cross: vec![(0, 1), (1, 0)], ..d };
        assert!(matches!(compose_nonflat(&four, &c3), Err(CongruenceError::ConditionC3Violated(_))));
    }

    #[test]
    fn round_trip_on_every_fixture_congruence() {
        for (name, a) in fixtures::all().into_iter().filter(|(_, a)| !a.is_flat()) {
            for theta in all_congruences(&a).unwrap() {
                let d = decompose(&a, &theta).unwrap();
                assert_eq!(compose_nonflat(&a, &d).unwrap(), theta, "{name}");
                // θ_R is a congruence on 𝓡 and θ_IR is star-closed
                let regular = a.regular_elements();
                let r_alg = a.subalgebra(&regular).unwrap();
                assert!(is_congruence(&r_alg, &theta.restrict(&regular)));
                for block in &d.theta_ir {
                    let image = sorted(&block.iter().map(|&e| a.star(e)).collect::<Vec<_>>());
                    assert!(d.theta_ir.contains(&image));
                }
            }
        }
    }

    #[test]
    fn restriction_lemmas() {
        for (name, a) in fixtures::all() {
            for sub in subalgebras(&a).unwrap() {
                let q0 = a.subalgebra(&sub).unwrap();
                assert_eq!(chi(&q0), chi(&a).restrict(&sub), "{name}");
                assert_eq!(tau(&q0), tau(&a).restrict(&sub), "{name}");
            }
        }
    }

    #[test]
    fn cep_on_fixtures() {
        for (name, a) in fixtures::all() {
            for sub in subalgebras(&a).unwrap() {
                let q0 = a.subalgebra(&sub).unwrap();
                for theta0 in all_congruences(&q0).unwrap() {
                    let ext = extend_from_subalgebra(&a, &sub, &theta0).unwrap();
                    assert_eq!(ext.congruence.restrict(&sub), theta0, "{name}");
                    assert!(!ext.via_fallback, "{name}");
                }
            }
        }
    }
}
