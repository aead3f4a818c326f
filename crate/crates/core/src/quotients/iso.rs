//! Backtracking search for QB-isomorphisms.
//!
//! Candidates are pruned by a per-element signature and every assignment is
//! propagated through star, join and meet before branching again.

use crate::algebra::{Element, FiniteAlgebra};

use super::{is_homomorphism, ElementMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Signature {
    is_zero: bool,
    is_one: bool,
    regular: bool,
    star_fixed: bool,
    cloud_size: usize,
    /// Number of elements whose square is this element.
    square_preimages: usize,
}

fn signatures(a: &FiniteAlgebra) -> Vec<Signature> {
    a.elements()
        .map(|x| Signature {
            is_zero: x == a.zero(),
            is_one: x == a.one(),
            regular: a.is_regular(x),
            star_fixed: a.star(x) == x,
            cloud_size: a.cloud_of(x).len(),
            square_preimages: a.elements().filter(|&y| a.join(y, y) == x).count(),
        })
        .collect()
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    sig_a: Vec<Signature>,
    sig_b: Vec<Signature>,
    map: Vec<Option<Element>>,
    used: Vec<bool>,
    assigned: Vec<Element>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra) -> Option<Self> {
        if a.size() != b.size() {
            return None;
        }
        let sig_a = signatures(a);
        let sig_b = signatures(b);
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        let n = a.size();
        Some(Search { a, b, sig_a, sig_b, map: vec![None; n], used: vec![false; n], assigned: Vec::with_capacity(n) })
    }

    /// Assigns `x ↦ y` and everything it forces. On failure the partial
    /// assignments stay on the trail; callers roll back with [`undo`].
    fn assign(&mut self, x: Element, y: Element) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((u, v)) = queue.pop() {
            match self.map[u] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            if self.used[v] || self.sig_a[u] != self.sig_b[v] {
                return false;
            }
            self.map[u] = Some(v);
            self.used[v] = true;
            self.assigned.push(u);
            queue.push((self.a.star(u), self.b.star(v)));
            for &z in &self.assigned {
                let fz = self.map[z].expect("assigned elements are mapped");
                queue.push((self.a.join(u, z), self.b.join(v, fz)));
                queue.push((self.a.join(z, u), self.b.join(fz, v)));
                queue.push((self.a.meet(u, z), self.b.meet(v, fz)));
                queue.push((self.a.meet(z, u), self.b.meet(fz, v)));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let u = self.assigned.pop().expect("trail is longer than mark");
            let v = self.map[u].take().expect("trail entries are mapped");
            self.used[v] = false;
        }
    }

    /// Calls `visit` on each isomorphism; stops when it returns false.
    fn run(&mut self, visit: &mut dyn FnMut(ElementMap) -> bool) -> bool {
        let Some(x) = self.map.iter().position(Option::is_none) else {
            let mapping: Vec<Element> = self.map.iter().map(|m| m.expect("complete")).collect();
            let f = ElementMap::new(self.a.size(), self.b.size(), mapping);
            if is_homomorphism(self.a, self.b, &f) {
                return visit(f);
            }
            return true;
        };
        for y in self.b.elements() {
            if self.used[y] || self.sig_a[x] != self.sig_b[y] {
                continue;
            }
            let mark = self.assigned.len();
            if self.assign(x, y) && !self.run(visit) {
                self.undo(mark);
                return false;
            }
            self.undo(mark);
        }
        true
    }

    fn start(&mut self, visit: &mut dyn FnMut(ElementMap) -> bool) {
        let (za, zb, oa, ob) = (self.a.zero(), self.b.zero(), self.a.one(), self.b.one());
        if self.assign(za, zb) && self.assign(oa, ob) {
            self.run(visit);
        }
    }
}

/// A bijective QB-homomorphism from `a` onto `b`, if one exists.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<ElementMap> {
    let mut search = Search::new(a, b)?;
    let mut found = None;
    search.start(&mut |f| {
        found = Some(f);
        false
    });
    found
}

pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Every isomorphism from `a` onto `b`.
pub fn all_isomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<ElementMap> {
    let mut out = Vec::new();
    if let Some(mut search) = Search::new(a, b) {
        search.start(&mut |f| {
            out.push(f);
            true
        });
    }
    out
}

/// Size of the automorphism group.
pub fn count_automorphisms(a: &FiniteAlgebra) -> usize {
    let mut count = 0;
    if let Some(mut search) = Search::new(a, a) {
        search.start(&mut |_| {
            count += 1;
            true
        });
    }
    count
}
