//! Equivalence relations on a finite carrier, stored as canonical blocks.
//!
//! Blocks are sorted ascending and ordered by their least member, so two
//! partitions are equal exactly when they describe the same relation.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("element {0} appears in more than one block")]
    Overlap(String),
    #[error("element {element} is outside the carrier of size {size}")]
    OutOfRange { element: Element, size: usize },
    #[error("unknown element name `{0}`")]
    UnknownName(String),
    #[error("empty block in partition text `{0}`")]
    EmptyBlock(String),
}

/// Why a set of ordered pairs is not an equivalence relation.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum RelationDefect {
    #[error("not reflexive: ({0},{0}) is missing")]
    NotReflexive(Element),
    #[error("not symmetric: ({1},{0}) is missing although ({0},{1}) is present")]
    NotSymmetric(Element, Element),
    #[error("not transitive: ({x},{z}) is missing although ({x},{via}) and ({via},{z}) are present")]
    NotTransitive { x: Element, via: Element, z: Element },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Element>>", into = "Vec<Vec<Element>>")]
pub struct Partition {
    blocks: Vec<Vec<Element>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Builds the partition whose classes are the fibres of `labels`.
    pub fn from_labels<L: Ord + Copy>(labels: &[L]) -> Self {
        let mut firsts: Vec<(L, Element)> = Vec::new();
        let mut block_of = Vec::with_capacity(labels.len());
        for (x, &label) in labels.iter().enumerate() {
            let idx = match firsts.iter().position(|&(l, _)| l == label) {
                Some(i) => i,
                None => {
                    firsts.push((label, x));
                    firsts.len() - 1
                }
            };
            block_of.push(idx);
        }
        let mut blocks = vec![Vec::new(); firsts.len()];
        for (x, &b) in block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        // blocks are already ordered by least member since labels are first seen in index order
        Partition { blocks, block_of }
    }

    /// Δ, the all-singletons partition.
    pub fn identity(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// ∇, the single-block partition.
    pub fn total(n: usize) -> Self {
        Self::from_labels(&vec![0u8; n])
    }

    /// Builds a partition from explicit blocks; elements not mentioned become singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<Element>]) -> Result<Self, PartitionError> {
        let mut labels: Vec<Option<usize>> = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(PartitionError::OutOfRange { element: x, size: n });
                }
                if labels[x].is_some() {
                    return Err(PartitionError::Overlap(x.to_string()));
                }
                labels[x] = Some(b);
            }
        }
        let labels: Vec<usize> = labels.iter().enumerate().map(|(x, l)| l.unwrap_or(blocks.len() + x)).collect();
        Ok(Self::from_labels(&labels))
    }

    /// The least equivalence relation containing `pairs`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (Element, Element)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (x, y) in pairs {
            uf.union(x, y);
        }
        uf.partition()
    }

    /// Converts an explicit pair set, insisting that it already is an
    /// equivalence relation. The first defect found is returned; transitivity
    /// failures report the lexicographically least missing pair.
    pub fn from_relation_checked(n: usize, pairs: &BTreeSet<(Element, Element)>) -> Result<Self, RelationDefect> {
        if let Some(x) = (0..n).find(|&x| !pairs.contains(&(x, x))) {
            return Err(RelationDefect::NotReflexive(x));
        }
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| !pairs.contains(&(y, x))) {
            return Err(RelationDefect::NotSymmetric(x, y));
        }
        for x in 0..n {
            for z in 0..n {
                if pairs.contains(&(x, z)) {
                    continue;
                }
                if let Some(via) = (0..n).find(|&y| pairs.contains(&(x, y)) && pairs.contains(&(y, z))) {
                    return Err(RelationDefect::NotTransitive { x, via, z });
                }
            }
        }
        Ok(Self::from_pairs(n, pairs.iter().copied()))
    }

    /// Parses `"0,1;a;b"` against element names. Unmentioned elements are singletons.
    pub fn parse(text: &str, names: &[String]) -> Result<Self, PartitionError> {
        let mut blocks = Vec::new();
        let trimmed = text.trim();
        if !trimmed.is_empty() {
            for part in split_top_level(trimmed, ';') {
                let mut block = Vec::new();
                for name in split_top_level(part, ',') {
                    let name = name.trim();
                    if name.is_empty() {
                        return Err(PartitionError::EmptyBlock(text.to_string()));
                    }
                    let x = names
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| PartitionError::UnknownName(name.to_string()))?;
                    block.push(x);
                }
                blocks.push(block);
            }
        }
        Self::from_blocks(names.len(), &blocks).map_err(|e| match e {
            PartitionError::Overlap(x) => PartitionError::Overlap(x.parse::<usize>().map_or(x, |i| names[i].clone())),
            other => other,
        })
    }

    /// Canonical text form using element names.
    pub fn display(&self, names: &[String]) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn carrier_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<Element>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `x`.
    pub fn block_index(&self, x: Element) -> usize {
        self.block_of[x]
    }

    pub fn block_of(&self, x: Element) -> &[Element] {
        &self.blocks[self.block_of[x]]
    }

    pub fn related(&self, x: Element, y: Element) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.len() == self.carrier_size()
    }

    pub fn is_total(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// All ordered pairs of the relation.
    pub fn pairs(&self) -> BTreeSet<(Element, Element)> {
        self.blocks.iter().flat_map(|b| b.iter().flat_map(move |&x| b.iter().map(move |&y| (x, y)))).collect()
    }

    /// Restriction to `subset`, re-indexed so position `i` stands for `subset[i]`.
    pub fn restrict(&self, subset: &[Element]) -> Partition {
        let labels: Vec<usize> = subset.iter().map(|&x| self.block_of[x]).collect();
        Partition::from_labels(&labels)
    }

    /// Transports a partition of `subset` positions back onto the full carrier,
    /// leaving everything outside `subset` as singletons.
    pub fn lift(&self, subset: &[Element], n: usize) -> Partition {
        let blocks: Vec<Vec<Element>> = self.blocks.iter().map(|b| b.iter().map(|&i| subset[i]).collect()).collect();
        Partition::from_blocks(n, &blocks).expect("lifting a partition of a subset is well formed")
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.related(b[0], x)))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> =
            self.blocks.iter().map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "Partition({})", text.join(";"))
    }
}

impl TryFrom<Vec<Vec<Element>>> for Partition {
    type Error = PartitionError;

    fn try_from(blocks: Vec<Vec<Element>>) -> Result<Self, Self::Error> {
        let n = blocks.iter().map(Vec::len).sum();
        let p = Self::from_blocks(n, &blocks)?;
        if p.num_blocks() != blocks.len() {
            return Err(PartitionError::EmptyBlock(format!("{blocks:?}")));
        }
        Ok(p)
    }
}

impl From<Partition> for Vec<Vec<Element>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

/// Splits on `sep` outside parentheses, so product names like `(0,c)` survive.
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    pub(crate) fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut rx, mut ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx;
        self.size[rx] += self.size[ry];
        true
    }

    pub(crate) fn partition(&mut self) -> Partition {
        let labels: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_and_display() {
        let n = names(&["0", "a", "b", "1"]);
        let p = Partition::parse("1,0; b ;a", &n).unwrap();
        assert_eq!(p.display(&n), "0,1;a;b");
        assert_eq!(Partition::parse("0,a", &n).unwrap().display(&n), "0,a;b;1");
        assert_eq!(Partition::parse("", &n).unwrap(), Partition::identity(4));
        assert!(matches!(Partition::parse("0,x", &n), Err(PartitionError::UnknownName(_))));
        assert!(matches!(Partition::parse("0,a;a", &n), Err(PartitionError::Overlap(ref s)) if s == "a"));
        assert!(matches!(Partition::parse("0,,a", &n), Err(PartitionError::EmptyBlock(_))));
    }

    #[test]
    fn product_names_keep_their_commas() {
        let n = names(&["(0,0)", "(0,c)", "(1,0)", "(1,c)"]);
        let p = Partition::parse("(0,0),(1,0);(0,c)", &n).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.display(&n), "(0,0),(1,0);(0,c);(1,c)");
    }

    #[test]
    fn trivial_partitions() {
        assert!(Partition::identity(3).is_identity());
        assert!(Partition::total(3).is_total());
        assert_eq!(Partition::total(3).blocks(), &[vec![0, 1, 2]]);
        assert!(Partition::identity(3).refines(&Partition::total(3)));
        assert!(!Partition::total(3).refines(&Partition::identity(3)));
    }

    #[test]
    fn checked_relation_reports_missing_transitive_pair() {
        let mut pairs: BTreeSet<(usize, usize)> = (0..3).map(|x| (x, x)).collect();
        pairs.extend([(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(
            Partition::from_relation_checked(3, &pairs),
            Err(RelationDefect::NotTransitive { x: 0, via: 1, z: 2 })
        );
        pairs.extend([(0, 2), (2, 0)]);
        assert_eq!(Partition::from_relation_checked(3, &pairs), Ok(Partition::total(3)));
        pairs.remove(&(2, 0));
        assert_eq!(Partition::from_relation_checked(3, &pairs), Err(RelationDefect::NotSymmetric(0, 2)));
        pairs.remove(&(1, 1));
        assert_eq!(Partition::from_relation_checked(3, &pairs), Err(RelationDefect::NotReflexive(1)));
    }

    #[test]
    fn restrict_and_lift() {
        let p = Partition::from_blocks(5, &[vec![0, 3], vec![1, 4]]).unwrap();
        let sub = [0, 1, 3];
        let r = p.restrict(&sub);
        assert_eq!(r.blocks(), &[vec![0, 2], vec![1]]);
        assert_eq!(r.lift(&sub, 5).blocks(), &[vec![0, 3], vec![1], vec![2], vec![4]]);
    }

    proptest! {
        #[test]
        fn canonical_form_is_label_invariant(labels in proptest::collection::vec(0u8..5, 1..10), shift in 0u8..50) {
            let p = Partition::from_labels(&labels);
            let shifted: Vec<u8> = labels.iter().map(|l| l.wrapping_mul(7).wrapping_add(shift)).collect();
            prop_assert_eq!(&p, &Partition::from_labels(&shifted));
            prop_assert_eq!(&p, &Partition::from_pairs(labels.len(), p.pairs()));
            prop_assert_eq!(Partition::from_relation_checked(labels.len(), &p.pairs()), Ok(p.clone()));
            for b in p.blocks() {
                prop_assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
            prop_assert!(p.blocks().windows(2).all(|w| w[0][0] < w[1][0]));
        }
    }
}
