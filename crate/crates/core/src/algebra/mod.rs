//! Finite QB-algebras stored as operation tables.
//!
//! Elements are dense indices `0..n`; names are display metadata only.
//! A [`FiniteAlgebra`] is immutable once built. Construction checks table
//! shapes and ranges but not the QB axioms; call [`FiniteAlgebra::validate`]
//! for that.

mod axioms;
mod format;

pub use axioms::{Axiom, ValidationReport, Violation};
pub use format::{load_algebra, AlgebraFormatError};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a carrier element.
pub type Element = usize;

/// Errors raised when assembling an algebra from raw tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("an algebra needs at least one element")]
    Empty,
    #[error("expected {expected} names, found {found}")]
    NameCount { expected: usize, found: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("invalid element name `{0}`")]
    InvalidName(String),
    #[error("wrong table dimensions for {table}: expected {expected}, found {found}")]
    WrongDimensions { table: &'static str, expected: String, found: String },
    #[error("entry {value} in {table} table is outside the carrier 0..{size}")]
    OutOfRange { table: &'static str, value: Element, size: usize },
}

/// A finite algebra of type ⟨2,2,1,0,0⟩ given by its tables.
///
/// Serialises as [`AlgebraTables`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "AlgebraTables", try_from = "AlgebraTables")]
pub struct FiniteAlgebra {
    names: Vec<String>,
    join: Vec<Element>,
    meet: Vec<Element>,
    star: Vec<Element>,
    zero: Element,
    one: Element,
}

impl FiniteAlgebra {
    /// Builds an algebra from row-major tables.
    pub fn new(
        names: Vec<String>,
        join: Vec<Vec<Element>>,
        meet: Vec<Vec<Element>>,
        star: Vec<Element>,
        zero: Element,
        one: Element,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        let join = flatten_square("join", join, n)?;
        let meet = flatten_square("meet", meet, n)?;
        if star.len() != n {
            return Err(AlgebraError::WrongDimensions {
                table: "star",
                expected: format!("1×{n}"),
                found: format!("1×{}", star.len()),
            });
        }
        Self::from_flat(names, join, meet, star, zero, one)
    }

    /// Builds an algebra by evaluating the operations on every argument.
    pub fn from_fn(
        names: Vec<String>,
        join: impl Fn(Element, Element) -> Element,
        meet: impl Fn(Element, Element) -> Element,
        star: impl Fn(Element) -> Element,
        zero: Element,
        one: Element,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        let mut j = Vec::with_capacity(n * n);
        let mut m = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                j.push(join(x, y));
                m.push(meet(x, y));
            }
        }
        let s = (0..n).map(star).collect();
        Self::from_flat(names, j, m, s, zero, one)
    }

    pub(crate) fn from_flat(
        names: Vec<String>,
        join: Vec<Element>,
        meet: Vec<Element>,
        star: Vec<Element>,
        zero: Element,
        one: Element,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if !is_valid_name(name) {
                return Err(AlgebraError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        debug_assert_eq!(join.len(), n * n);
        debug_assert_eq!(meet.len(), n * n);
        for (table, values) in [("join", &join), ("meet", &meet), ("star", &star)] {
            if let Some(&value) = values.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::OutOfRange { table, value, size: n });
            }
        }
        for (table, value) in [("zero", zero), ("one", one)] {
            if value >= n {
                return Err(AlgebraError::OutOfRange { table, value, size: n });
            }
        }
        Ok(FiniteAlgebra { names, join, meet, star, zero, one })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: Element) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<Element> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn join(&self, x: Element, y: Element) -> Element {
        self.join[x * self.size() + y]
    }

    #[inline]
    pub fn meet(&self, x: Element, y: Element) -> Element {
        self.meet[x * self.size() + y]
    }

    #[inline]
    pub fn star(&self, x: Element) -> Element {
        self.star[x]
    }

    pub fn zero(&self) -> Element {
        self.zero
    }

    pub fn one(&self) -> Element {
        self.one
    }

    pub fn join_rows(&self) -> Vec<Vec<Element>> {
        self.join.chunks(self.size()).map(<[_]>::to_vec).collect()
    }

    pub fn meet_rows(&self) -> Vec<Vec<Element>> {
        self.meet.chunks(self.size()).map(<[_]>::to_vec).collect()
    }

    pub fn star_row(&self) -> &[Element] {
        &self.star
    }

    /// Copy of the algebra with a single join cell overwritten.
    pub fn with_join_entry(&self, x: Element, y: Element, value: Element) -> Self {
        assert!(value < self.size(), "join entry out of range");
        let mut out = self.clone();
        let n = self.size();
        out.join[x * n + y] = value;
        out
    }

    /// Copy of the algebra with new display names.
    pub fn with_names(&self, names: Vec<String>) -> Result<Self, AlgebraError> {
        if names.len() != self.size() {
            return Err(AlgebraError::NameCount { expected: self.size(), found: names.len() });
        }
        Self::from_flat(names, self.join.clone(), self.meet.clone(), self.star.clone(), self.zero, self.one)
    }

    /// Transports the structure along the bijection `perm` (old index ↦ new index).
    pub fn relabel(&self, perm: &[Element]) -> Self {
        let n = self.size();
        assert_eq!(perm.len(), n, "relabel needs a permutation of the carrier");
        let mut inverse = vec![usize::MAX; n];
        for (old, &new) in perm.iter().enumerate() {
            assert!(new < n && inverse[new] == usize::MAX, "relabel needs a bijection");
            inverse[new] = old;
        }
        let names = inverse.iter().map(|&old| self.names[old].clone()).collect();
        Self::from_fn(
            names,
            |x, y| perm[self.join(inverse[x], inverse[y])],
            |x, y| perm[self.meet(inverse[x], inverse[y])],
            |x| perm[self.star(inverse[x])],
            perm[self.zero],
            perm[self.one],
        )
        .expect("relabelling preserves well-formedness")
    }

    /// Tables without names, for comparing labelled structures.
    pub fn table_key(&self) -> (Vec<Element>, Vec<Element>, Vec<Element>, Element, Element) {
        (self.join.clone(), self.meet.clone(), self.star.clone(), self.zero, self.one)
    }

    /// Checks every QB axiom exhaustively and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        axioms::validate(self)
    }

    /// Short-circuiting form of [`validate`](Self::validate).
    pub fn is_qb_algebra(&self) -> bool {
        axioms::first_violation(self).is_none()
    }

    pub fn is_regular(&self, x: Element) -> bool {
        self.join(x, x) == x
    }

    /// The regular elements `{ x : x ∨ x = x }` in ascending order.
    pub fn regular_elements(&self) -> Vec<Element> {
        self.elements().filter(|&x| self.is_regular(x)).collect()
    }

    pub fn irregular_elements(&self) -> Vec<Element> {
        self.elements().filter(|&x| !self.is_regular(x)).collect()
    }

    /// Flat algebras satisfy `1 = 0`.
    pub fn is_flat(&self) -> bool {
        self.zero == self.one
    }

    /// `x ≤ y` iff `x ∨ y = y ∨ y`.
    pub fn quasi_leq(&self, x: Element, y: Element) -> bool {
        self.join(x, y) == self.join(y, y)
    }

    /// Meet-based characterisation of the quasi-order, `x ∧ y = x ∧ x`.
    pub fn quasi_leq_by_meet(&self, x: Element, y: Element) -> bool {
        self.meet(x, y) == self.meet(x, x)
    }

    /// The cloud of `x`: every `y` with `y ∨ y = x ∨ x`.
    pub fn cloud_of(&self, x: Element) -> Vec<Element> {
        let r = self.join(x, x);
        self.elements().filter(|&y| self.join(y, y) == r).collect()
    }

    /// True when `subset` contains both constants and is closed under every operation.
    pub fn is_subuniverse(&self, subset: &[Element]) -> bool {
        let mut member = vec![false; self.size()];
        for &x in subset {
            member[x] = true;
        }
        member[self.zero]
            && member[self.one]
            && subset.iter().all(|&x| {
                member[self.star(x)] && subset.iter().all(|&y| member[self.join(x, y)] && member[self.meet(x, y)])
            })
    }

    /// The subalgebra on `subset` (ascending, duplicate-free), re-indexed so
    /// position `i` stands for `subset[i]`. `None` unless `subset` is a subuniverse.
    pub fn subalgebra(&self, subset: &[Element]) -> Option<FiniteAlgebra> {
        if subset.is_empty()
            || subset.windows(2).any(|w| w[0] >= w[1])
            || subset.iter().any(|&x| x >= self.size())
            || !self.is_subuniverse(subset)
        {
            return None;
        }
        let mut position = vec![usize::MAX; self.size()];
        for (i, &x) in subset.iter().enumerate() {
            position[x] = i;
        }
        let names = subset.iter().map(|&x| self.names[x].clone()).collect();
        let sub = Self::from_fn(
            names,
            |i, j| position[self.join(subset[i], subset[j])],
            |i, j| position[self.meet(subset[i], subset[j])],
            |i| position[self.star(subset[i])],
            position[self.zero],
            position[self.one],
        )
        .expect("a subuniverse induces well-formed tables");
        Some(sub)
    }

    /// True for the one-element algebra.
    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    /// Serialises to the algebra file format.
    pub fn to_file_string(&self) -> String {
        format::write_algebra(self)
    }

    pub fn format_set(&self, set: &[Element]) -> String {
        let names: Vec<&str> = set.iter().map(|&x| self.name(x)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Name-based table layout used for JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraTables {
    pub names: Vec<String>,
    pub zero: String,
    pub one: String,
    pub join: Vec<Vec<String>>,
    pub meet: Vec<Vec<String>>,
    pub star: Vec<String>,
}

impl From<FiniteAlgebra> for AlgebraTables {
    fn from(a: FiniteAlgebra) -> Self {
        let name = |x: Element| a.names[x].clone();
        let table = |rows: Vec<Vec<Element>>| -> Vec<Vec<String>> {
            rows.into_iter().map(|r| r.into_iter().map(name).collect()).collect()
        };
        AlgebraTables {
            zero: name(a.zero),
            one: name(a.one),
            join: table(a.join_rows()),
            meet: table(a.meet_rows()),
            star: a.star.iter().map(|&x| name(x)).collect(),
            names: a.names.clone(),
        }
    }
}

impl TryFrom<AlgebraTables> for FiniteAlgebra {
    type Error = String;

    fn try_from(t: AlgebraTables) -> Result<Self, Self::Error> {
        let index = |name: &String| {
            t.names.iter().position(|n| n == name).ok_or_else(|| format!("unknown element name `{name}`"))
        };
        let table = |rows: &[Vec<String>]| -> Result<Vec<Vec<Element>>, String> {
            rows.iter().map(|r| r.iter().map(index).collect()).collect()
        };
        let join = table(&t.join)?;
        let meet = table(&t.meet)?;
        let star = t.star.iter().map(index).collect::<Result<_, _>>()?;
        let (zero, one) = (index(&t.zero)?, index(&t.one)?);
        FiniteAlgebra::new(t.names.clone(), join, meet, star, zero, one).map_err(|e| e.to_string())
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAlgebra")
            .field("names", &self.names)
            .field("zero", &self.names[self.zero])
            .field("one", &self.names[self.one])
            .finish_non_exhaustive()
    }
}

/// Names may not contain whitespace, `;` or `#`; commas are allowed only inside
/// balanced parentheses so that partition text stays unambiguous.
pub fn is_valid_name(name: &str) -> bool {
    let mut depth = 0usize;
    for c in name.chars() {
        match c {
            '(' => depth += 1,
            ')' => match depth.checked_sub(1) {
                Some(d) => depth = d,
                None => return false,
            },
            ',' if depth == 0 => return false,
            ';' | '#' => return false,
            c if c.is_whitespace() => return false,
            _ => {}
        }
    }
    !name.is_empty() && depth == 0
}

fn flatten_square(table: &'static str, rows: Vec<Vec<Element>>, n: usize) -> Result<Vec<Element>, AlgebraError> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::WrongDimensions {
            table,
            expected: format!("{n}×{n}"),
            found: format!("{}×{}", rows.len(), cols),
        });
    }
    Ok(rows.into_iter().flatten().collect())
}
