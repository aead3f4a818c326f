//! The canonical congruences χ and τ, quotients, products, homomorphisms and
//! the structural constructors for flat and irreducible algebras.

mod iso;

pub use iso::{all_isomorphisms, are_isomorphic, count_automorphisms, find_isomorphism};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::congruences::is_congruence;
use crate::fixtures;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("partition is not a congruence of the algebra")]
    NotACongruence,
    #[error("quotient is ill-defined: representatives {0} and {1} disagree")]
    IllDefinedQuotient(String, String),
    #[error("canonical embedding failed: {0}")]
    EmbeddingFailure(String),
    #[error("irreducibility is only defined for non-flat algebras")]
    FlatInput,
    #[error("no flat algebra with {size} elements and {fixed} star fixed points")]
    InvalidShape { size: usize, fixed: usize },
}

/// A total map between two carriers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElementMap {
    pub source_size: usize,
    pub target_size: usize,
    pub mapping: Vec<Element>,
}

impl ElementMap {
    pub fn new(source_size: usize, target_size: usize, mapping: Vec<Element>) -> Self {
        assert_eq!(mapping.len(), source_size, "map must be total");
        assert!(mapping.iter().all(|&y| y < target_size), "map leaves its target");
        ElementMap { source_size, target_size, mapping }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, n, (0..n).collect())
    }

    #[inline]
    pub fn apply(&self, x: Element) -> Element {
        self.mapping[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        self.mapping.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target_size];
        for &y in &self.mapping {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bijective(&self) -> bool {
        self.source_size == self.target_size && self.is_injective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ElementMap) -> ElementMap {
        assert_eq!(self.target_size, other.source_size, "maps are not composable");
        ElementMap::new(self.source_size, other.target_size, self.mapping.iter().map(|&y| other.apply(y)).collect())
    }

    /// The kernel of the map as a partition of the source.
    pub fn kernel(&self) -> Partition {
        Partition::from_labels(&self.mapping)
    }
}

/// χ: `x` and `y` are related iff `x ∨ x = y ∨ y`. Its blocks are the clouds.
pub fn chi(a: &FiniteAlgebra) -> Partition {
    let squares: Vec<Element> = a.elements().map(|x| a.join(x, x)).collect();
    Partition::from_labels(&squares)
}

/// τ: the regular elements form one block, every irregular element is a singleton.
pub fn tau(a: &FiniteAlgebra) -> Partition {
    let labels: Vec<Element> = a.elements().map(|x| if a.is_regular(x) { a.zero() } else { x }).collect();
    Partition::from_labels(&labels)
}

/// The quotient algebra and its canonical projection.
pub fn quotient(a: &FiniteAlgebra, theta: &Partition) -> Result<(FiniteAlgebra, ElementMap), QuotientError> {
    if theta.carrier_size() != a.size() || !is_congruence(a, theta) {
        return Err(QuotientError::NotACongruence);
    }
    let k = theta.num_blocks();
    let mut join = vec![vec![usize::MAX; k]; k];
    let mut meet = vec![vec![usize::MAX; k]; k];
    let mut star = vec![usize::MAX; k];
    let conflict =
        |x: Element, y: Element| QuotientError::IllDefinedQuotient(a.name(x).to_string(), a.name(y).to_string());
    for x in a.elements() {
        let bx = theta.block_index(x);
        let s = theta.block_index(a.star(x));
        if star[bx] != usize::MAX && star[bx] != s {
            return Err(conflict(x, theta.block_of(x)[0]));
        }
        star[bx] = s;
        for y in a.elements() {
            let by = theta.block_index(y);
            let j = theta.block_index(a.join(x, y));
            let m = theta.block_index(a.meet(x, y));
            if (join[bx][by] != usize::MAX && join[bx][by] != j) || (meet[bx][by] != usize::MAX && meet[bx][by] != m) {
                return Err(conflict(x, y));
            }
            join[bx][by] = j;
            meet[bx][by] = m;
        }
    }
    let names = theta.blocks().iter().map(|b| format!("[{}]", a.name(b[0]))).collect();
    let q = FiniteAlgebra::new(names, join, meet, star, theta.block_index(a.zero()), theta.block_index(a.one()))
        .expect("quotient tables are well formed");
    let projection = ElementMap::new(a.size(), k, a.elements().map(|x| theta.block_index(x)).collect());
    Ok((q, projection))
}

/// Component-wise product; pair `(i, j)` lives at index `i·|B| + j`.
pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> FiniteAlgebra {
    let nb = b.size();
    let pair = |i: Element, j: Element| i * nb + j;
    let names = a
        .elements()
        .flat_map(|i| b.elements().map(move |j| (i, j)))
        .map(|(i, j)| format!("({},{})", a.name(i), b.name(j)))
        .collect();
    FiniteAlgebra::from_fn(
        names,
        |x, y| pair(a.join(x / nb, y / nb), b.join(x % nb, y % nb)),
        |x, y| pair(a.meet(x / nb, y / nb), b.meet(x % nb, y % nb)),
        |x| pair(a.star(x / nb), b.star(x % nb)),
        pair(a.zero(), b.zero()),
        pair(a.one(), b.one()),
    )
    .expect("product of well-formed algebras is well formed")
}

/// `x ↦ (x/χ, x/τ)` into `A/χ × A/τ`, together with its factors.
#[derive(Debug, Clone)]
pub struct ProductEmbedding {
    pub boolean_factor: FiniteAlgebra,
    pub flat_factor: FiniteAlgebra,
    pub product: FiniteAlgebra,
    pub map: ElementMap,
}

pub fn embed_into_product(a: &FiniteAlgebra) -> Result<ProductEmbedding, QuotientError> {
    let failure = |what: &str| QuotientError::EmbeddingFailure(what.to_string());
    let (boolean_factor, to_chi) = quotient(a, &chi(a)).map_err(|_| failure("χ is not a congruence"))?;
    let (flat_factor, to_tau) = quotient(a, &tau(a)).map_err(|_| failure("τ is not a congruence"))?;
    let product = direct_product(&boolean_factor, &flat_factor);
    let width = flat_factor.size();
    let map = ElementMap::new(
        a.size(),
        product.size(),
        a.elements().map(|x| to_chi.apply(x) * width + to_tau.apply(x)).collect(),
    );
    if !map.is_injective() {
        return Err(failure("map is not injective"));
    }
    if !is_homomorphism(a, &product, &map) {
        return Err(failure("map is not a homomorphism"));
    }
    Ok(ProductEmbedding { boolean_factor, flat_factor, product, map })
}

/// Exhaustively checks that `f` preserves join, meet, star, 0 and 1.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, f: &ElementMap) -> bool {
    if f.source_size != a.size() || f.target_size != b.size() {
        return false;
    }
    if f.apply(a.zero()) != b.zero() || f.apply(a.one()) != b.one() {
        return false;
    }
    a.elements().all(|x| {
        f.apply(a.star(x)) == b.star(f.apply(x))
            && a.elements().all(|y| {
                f.apply(a.join(x, y)) == b.join(f.apply(x), f.apply(y))
                    && f.apply(a.meet(x, y)) == b.meet(f.apply(x), f.apply(y))
            })
    })
}

/// Irreducible means non-flat with exactly the two regular elements 0 and 1.
pub fn is_irreducible(a: &FiniteAlgebra) -> Result<bool, QuotientError> {
    if a.is_flat() {
        return Err(QuotientError::FlatInput);
    }
    Ok(a.regular_elements() == sorted_pair(a.zero(), a.one()))
}

fn sorted_pair(x: Element, y: Element) -> Vec<Element> {
    if x <= y {
        vec![x, y]
    } else {
        vec![y, x]
    }
}

/// Flat algebra on `size` elements whose star has exactly `fixed` fixed points.
///
/// Fixed points come first (index 0 is the constant); the remaining elements
/// are paired as `(fixed, fixed+1), (fixed+2, fixed+3), ...`.
pub fn make_flat(size: usize, fixed: usize) -> Result<FiniteAlgebra, QuotientError> {
    if fixed == 0 || fixed > size || !(size - fixed).is_multiple_of(2) {
        return Err(QuotientError::InvalidShape { size, fixed });
    }
    let names = (0..size).map(|i| if i == 0 { "0".to_string() } else { format!("e{i}") }).collect();
    let star = move |x: Element| {
        if x < fixed {
            x
        } else if (x - fixed).is_multiple_of(2) {
            x + 1
        } else {
            x - 1
        }
    };
    Ok(FiniteAlgebra::from_fn(names, |_, _| 0, |_, _| 0, star, 0, 0).expect("flat tables are well formed"))
}

/// `2 × F_{2k+1}`, where the flat factor has a single star fixed point.
pub fn make_irreducible(k: usize) -> FiniteAlgebra {
    let flat = make_flat(2 * k + 1, 1).expect("2k+1 with one fixed point is a valid shape");
    direct_product(&fixtures::two(), &flat)
}
