//! Bundled example algebras, compiled in from `fixtures/*.alg`.

use crate::algebra::{load_algebra, FiniteAlgebra};

pub const FOUR_SRC: &str = include_str!("../fixtures/4.alg");
pub const FOUR_BAR_SRC: &str = include_str!("../fixtures/4bar.alg");
pub const A_SRC: &str = include_str!("../fixtures/A.alg");
pub const F3_SRC: &str = include_str!("../fixtures/F3.alg");
pub const F5_SRC: &str = include_str!("../fixtures/F5.alg");
pub const SIX_SRC: &str = include_str!("../fixtures/6.alg");
pub const TWO_SRC: &str = include_str!("../fixtures/2.alg");
pub const BOOLEAN4_SRC: &str = include_str!("../fixtures/B4.alg");

fn load(src: &str) -> FiniteAlgebra {
    load_algebra(src).expect("bundled fixture parses")
}

pub fn four() -> FiniteAlgebra {
    load(FOUR_SRC)
}

pub fn four_bar() -> FiniteAlgebra {
    load(FOUR_BAR_SRC)
}

pub fn a() -> FiniteAlgebra {
    load(A_SRC)
}

pub fn f3() -> FiniteAlgebra {
    load(F3_SRC)
}

pub fn f5() -> FiniteAlgebra {
    load(F5_SRC)
}

pub fn six() -> FiniteAlgebra {
    load(SIX_SRC)
}

/// The two-element Boolean algebra.
pub fn two() -> FiniteAlgebra {
    load(TWO_SRC)
}

/// The four-element Boolean algebra.
pub fn boolean4() -> FiniteAlgebra {
    load(BOOLEAN4_SRC)
}

/// Every bundled algebra with its short name.
pub fn all() -> Vec<(&'static str, FiniteAlgebra)> {
    vec![
        ("4", four()),
        ("4bar", four_bar()),
        ("A", a()),
        ("F3", f3()),
        ("F5", f5()),
        ("6", six()),
        ("2", two()),
        ("B4", boolean4()),
    ]
}

pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, a)| a)
}
