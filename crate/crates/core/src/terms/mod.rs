//! The term language, evaluation in a finite algebra, and decision of
//! equations in QB, FQB and Boolean algebras through their small generators.

mod ast;
pub mod corpus;
mod parser;

pub use ast::{Equation, Term};
pub use parser::{parse_equation, parse_term, ParseError};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::fixtures;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
}

/// Evaluates `t` with the variables bound by `env`.
pub fn eval_term(a: &FiniteAlgebra, t: &Term, env: &BTreeMap<String, Element>) -> Result<Element, EvalError> {
    Ok(match t {
        Term::Var(v) => *env.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?,
        Term::Zero => a.zero(),
        Term::One => a.one(),
        Term::Join(l, r) => a.join(eval_term(a, l, env)?, eval_term(a, r, env)?),
        Term::Meet(l, r) => a.meet(eval_term(a, l, env)?, eval_term(a, r, env)?),
        Term::Star(t) => a.star(eval_term(a, t, env)?),
    })
}

/// A falsifying assignment, with element names throughout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub algebra: String,
    pub assignment: BTreeMap<String, String>,
    pub lhs_value: String,
    pub rhs_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub witness: Option<Witness>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("VALID"),
            Some(w) => {
                let assignment: Vec<String> = w.assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(
                    f,
                    "INVALID in {}: {} gives lhs={} rhs={}",
                    w.algebra,
                    if assignment.is_empty() { "(no variables)".into() } else { assignment.join(", ") },
                    w.lhs_value,
                    w.rhs_value
                )
            }
        }
    }
}

/// Checks `eq` under every assignment of its variables (sorted by name, the
/// first varying slowest) and returns the first counterexample.
pub fn holds_in(a: &FiniteAlgebra, eq: &Equation) -> Verdict {
    holds_in_named(a, "the algebra", eq)
}

pub fn holds_in_named(a: &FiniteAlgebra, algebra_name: &str, eq: &Equation) -> Verdict {
    let vars = eq.variables();
    let n = a.size();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let env: BTreeMap<String, Element> = vars.iter().cloned().zip(digits.iter().copied()).collect();
        let l = eval_term(a, &eq.lhs, &env).expect("every variable is bound");
        let r = eval_term(a, &eq.rhs, &env).expect("every variable is bound");
        if l != r {
            return Verdict {
                valid: false,
                witness: Some(Witness {
                    algebra: algebra_name.to_string(),
                    assignment: env.into_iter().map(|(k, v)| (k, a.name(v).to_string())).collect(),
                    lhs_value: a.name(l).to_string(),
                    rhs_value: a.name(r).to_string(),
                }),
            };
        }
        // odometer, last variable fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Verdict { valid: true, witness: None };
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variety {
    /// All QB-algebras, generated by 4.
    Qb,
    /// Flat QB-algebras, generated by F₃.
    Fqb,
    /// Boolean algebras, generated by 2.
    B,
}

impl Variety {
    pub fn generator(self) -> (&'static str, FiniteAlgebra) {
        match self {
            Variety::Qb => ("4", fixtures::four()),
            Variety::Fqb => ("F3", fixtures::f3()),
            Variety::B => ("2", fixtures::two()),
        }
    }
}

impl FromStr for Variety {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qb" => Ok(Variety::Qb),
            "fqb" => Ok(Variety::Fqb),
            "b" => Ok(Variety::B),
            other => Err(format!("unknown variety `{other}` (expected qb, fqb or b)")),
        }
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variety::Qb => "qb",
            Variety::Fqb => "fqb",
            Variety::B => "b",
        })
    }
}

/// Validity in the whole variety, decided in its standard generator.
pub fn decide(variety: Variety, eq: &Equation) -> Verdict {
    let (name, generator) = variety.generator();
    holds_in_named(&generator, name, eq)
}

/// Like [`decide`] but with an explicit generating algebra.
pub fn decide_with(generator: &FiniteAlgebra, name: &str, eq: &Equation) -> Verdict {
    holds_in_named(generator, name, eq)
}
