use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A term over variables, the constants `0` and `1`, join, meet and star.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Star(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn join(l: Term, r: Term) -> Term {
        Term::Join(Box::new(l), Box::new(r))
    }

    pub fn meet(l: Term, r: Term) -> Term {
        Term::Meet(Box::new(l), Box::new(r))
    }

    pub fn star(t: Term) -> Term {
        Term::Star(Box::new(t))
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::One => 0,
            Term::Star(t) => 1 + t.depth(),
            Term::Join(l, r) | Term::Meet(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Star(t) => t.collect_vars(out),
            Term::Join(l, r) | Term::Meet(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    // 0 = join operand, 1 = meet operand, 2 = star operand
    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        let needs_parens = match self {
            Term::Join(..) => level > 0,
            Term::Meet(..) => level > 1,
            _ => false,
        };
        if needs_parens {
            f.write_str("(")?;
        }
        match self {
            Term::Var(v) => f.write_str(v)?,
            Term::Zero => f.write_str("0")?,
            Term::One => f.write_str("1")?,
            Term::Join(l, r) => {
                l.fmt_at(f, 0)?;
                f.write_str(r" \/ ")?;
                r.fmt_at(f, 1)?;
            }
            Term::Meet(l, r) => {
                l.fmt_at(f, 1)?;
                f.write_str(r" /\ ")?;
                r.fmt_at(f, 2)?;
            }
            Term::Star(t) => {
                t.fmt_at(f, 2)?;
                f.write_str("'")?;
            }
        }
        if needs_parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    /// Distinct variables of both sides, sorted by name.
    pub fn variables(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        self.lhs.collect_vars(&mut out);
        self.rhs.collect_vars(&mut out);
        out.into_iter().collect()
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}
