use serde::{Deserialize, Serialize};

use super::{Element, FiniteAlgebra};

/// One law of the QB axiom system, split into its join and meet halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    Ql1Join,
    Ql1Meet,
    Ql2Join,
    Ql2Meet,
    Ql3Join,
    Ql3Meet,
    Ql4Join,
    Ql4Meet,
    Ql5,
    Qb2Join,
    Qb2Meet,
    Qb3Join,
    Qb3Meet,
    Qb4,
    Qb5,
    DistJoin,
    DistMeet,
}

impl Axiom {
    /// Check order used by [`FiniteAlgebra::validate`]: q-lattice laws,
    /// then QB2–QB5, then distributivity.
    pub const ALL: [Axiom; 17] = [
        Axiom::Ql1Join,
        Axiom::Ql1Meet,
        Axiom::Ql2Join,
        Axiom::Ql2Meet,
        Axiom::Ql3Join,
        Axiom::Ql3Meet,
        Axiom::Ql4Join,
        Axiom::Ql4Meet,
        Axiom::Ql5,
        Axiom::Qb2Join,
        Axiom::Qb2Meet,
        Axiom::Qb3Join,
        Axiom::Qb3Meet,
        Axiom::Qb4,
        Axiom::Qb5,
        Axiom::DistJoin,
        Axiom::DistMeet,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::Ql1Join => "QL1(join)",
            Axiom::Ql1Meet => "QL1(meet)",
            Axiom::Ql2Join => "QL2(join)",
            Axiom::Ql2Meet => "QL2(meet)",
            Axiom::Ql3Join => "QL3(join)",
            Axiom::Ql3Meet => "QL3(meet)",
            Axiom::Ql4Join => "QL4(join)",
            Axiom::Ql4Meet => "QL4(meet)",
            Axiom::Ql5 => "QL5",
            Axiom::Qb2Join => "QB2(join)",
            Axiom::Qb2Meet => "QB2(meet)",
            Axiom::Qb3Join => "QB3(join)",
            Axiom::Qb3Meet => "QB3(meet)",
            Axiom::Qb4 => "QB4",
            Axiom::Qb5 => "QB5",
            Axiom::DistJoin => "DIST(join)",
            Axiom::DistMeet => "DIST(meet)",
        }
    }

    /// The law as an equation in the term syntax, over variables `x`, `y`, `z`.
    pub fn equation(self) -> &'static str {
        match self {
            Axiom::Ql1Join => r"x \/ y = y \/ x",
            Axiom::Ql1Meet => r"x /\ y = y /\ x",
            Axiom::Ql2Join => r"x \/ (y \/ z) = (x \/ y) \/ z",
            Axiom::Ql2Meet => r"x /\ (y /\ z) = (x /\ y) /\ z",
            Axiom::Ql3Join => r"x \/ (x /\ y) = x \/ x",
            Axiom::Ql3Meet => r"x /\ (x \/ y) = x /\ x",
            Axiom::Ql4Join => r"x \/ (y \/ y) = x \/ y",
            Axiom::Ql4Meet => r"x /\ (y /\ y) = x /\ y",
            Axiom::Ql5 => r"x \/ x = x /\ x",
            Axiom::Qb2Join => r"x \/ 1 = 1",
            Axiom::Qb2Meet => r"x /\ 0 = 0",
            Axiom::Qb3Join => r"x \/ x' = 1",
            Axiom::Qb3Meet => r"x /\ x' = 0",
            Axiom::Qb4 => r"(x /\ x)' = x' \/ x'",
            Axiom::Qb5 => r"x'' = x",
            Axiom::DistJoin => r"x \/ (y /\ z) = (x \/ y) /\ (x \/ z)",
            Axiom::DistMeet => r"x /\ (y \/ z) = (x /\ y) \/ (x /\ z)",
        }
    }

    /// Number of universally quantified variables.
    pub fn arity(self) -> usize {
        match self {
            Axiom::Ql5
            | Axiom::Qb2Join
            | Axiom::Qb2Meet
            | Axiom::Qb3Join
            | Axiom::Qb3Meet
            | Axiom::Qb4
            | Axiom::Qb5 => 1,
            Axiom::Ql1Join | Axiom::Ql1Meet | Axiom::Ql3Join | Axiom::Ql3Meet => 2,
            Axiom::Ql4Join | Axiom::Ql4Meet => 2,
            Axiom::Ql2Join | Axiom::Ql2Meet | Axiom::DistJoin | Axiom::DistMeet => 3,
        }
    }

    /// Evaluates the law at one tuple; `w` holds `arity()` elements.
    pub fn holds_at(self, a: &FiniteAlgebra, w: &[Element]) -> bool {
        let j = |x, y| a.join(x, y);
        let m = |x, y| a.meet(x, y);
        let s = |x| a.star(x);
        let x = w[0];
        let y = w.get(1).copied().unwrap_or(x);
        let z = w.get(2).copied().unwrap_or(x);
        match self {
            Axiom::Ql1Join => j(x, y) == j(y, x),
            Axiom::Ql1Meet => m(x, y) == m(y, x),
            Axiom::Ql2Join => j(x, j(y, z)) == j(j(x, y), z),
            Axiom::Ql2Meet => m(x, m(y, z)) == m(m(x, y), z),
            Axiom::Ql3Join => j(x, m(x, y)) == j(x, x),
            Axiom::Ql3Meet => m(x, j(x, y)) == m(x, x),
            Axiom::Ql4Join => j(x, j(y, y)) == j(x, y),
            Axiom::Ql4Meet => m(x, m(y, y)) == m(x, y),
            Axiom::Ql5 => j(x, x) == m(x, x),
            Axiom::Qb2Join => j(x, a.one()) == a.one(),
            Axiom::Qb2Meet => m(x, a.zero()) == a.zero(),
            Axiom::Qb3Join => j(x, s(x)) == a.one(),
            Axiom::Qb3Meet => m(x, s(x)) == a.zero(),
            Axiom::Qb4 => s(m(x, x)) == j(s(x), s(x)),
            Axiom::Qb5 => s(s(x)) == x,
            Axiom::DistJoin => j(x, m(y, z)) == m(j(x, y), j(x, z)),
            Axiom::DistMeet => m(x, j(y, z)) == j(m(x, y), m(x, z)),
        }
    }

    /// First failing tuple in lexicographic order, if any.
    pub fn first_counterexample(self, a: &FiniteAlgebra) -> Option<Vec<Element>> {
        let n = a.size();
        let k = self.arity();
        let mut tuple = vec![0; k];
        loop {
            if !self.holds_at(a, &tuple) {
                return Some(tuple);
            }
            // odometer increment, last position fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }
}

/// A failed axiom together with the first tuple that breaks it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

pub(super) fn validate(a: &FiniteAlgebra) -> ValidationReport {
    let violations: Vec<Violation> = Axiom::ALL
        .iter()
        .filter_map(|&axiom| axiom.first_counterexample(a).map(|witness| Violation { axiom, witness }))
        .collect();
    ValidationReport { passed: violations.is_empty(), violations }
}

pub(super) fn first_violation(a: &FiniteAlgebra) -> Option<Violation> {
    Axiom::ALL.iter().find_map(|&axiom| axiom.first_counterexample(a).map(|witness| Violation { axiom, witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn all_fixtures_validate() {
        for (name, alg) in fixtures::all() {
            let report = alg.validate();
            assert!(report.passed, "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn overwritten_join_cell_is_caught() {
        let four = fixtures::four();
        let a = four.index_of("a").unwrap();
        let b = four.index_of("b").unwrap();
        let mutated = four.with_join_entry(a, b, a);
        let report = mutated.validate();
        assert!(!report.passed);
        assert!(report.violations.iter().any(|v| v.axiom == Axiom::Ql1Join));
        for v in &report.violations {
            assert!(!v.axiom.holds_at(&mutated, &v.witness), "{:?} witness does not fail", v);
        }
    }

    #[test]
    fn single_element_algebra_passes_everything() {
        let t = FiniteAlgebra::from_fn(vec!["0".into()], |_, _| 0, |_, _| 0, |_| 0, 0, 0).unwrap();
        for axiom in Axiom::ALL {
            assert_eq!(axiom.first_counterexample(&t), None);
        }
    }

    #[test]
    fn violations_follow_the_fixed_check_order() {
        // constant-zero star breaks QB3/QB4/QB5 on the Boolean 2
        let two = fixtures::two();
        let broken =
            FiniteAlgebra::from_fn(two.names().to_vec(), |x, y| two.join(x, y), |x, y| two.meet(x, y), |_| 0, 0, 1)
                .unwrap();
        let report = broken.validate();
        let order: Vec<usize> =
            report.violations.iter().map(|v| Axiom::ALL.iter().position(|&a| a == v.axiom).unwrap()).collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(report.violations.iter().any(|v| v.axiom == Axiom::Qb5));
    }
}
