//! Text format for algebra files.
//!
//! ```text
//! # comment
//! size 4
//! names 0 a b 1
//! zero 0
//! one 1
//! join
//! 0 0 1 1
//! ...            (n rows of n names)
//! meet
//! ...            (n rows of n names)
//! star
//! 1 b a 0        (one row of n names)
//! ```
//!
//! Sections appear in exactly this order. `#` starts a comment that runs to
//! the end of the line and blank lines are ignored. Table cells are element
//! names, never indices.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AlgebraError, Element, FiniteAlgebra};

const KEYWORDS: [&str; 7] = ["size", "names", "zero", "one", "join", "meet", "star"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraFormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown element name `{name}`")]
    UnknownName { line: usize, name: String },
    #[error("{0}")]
    Semantic(#[from] AlgebraError),
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

impl Line<'_> {
    fn keyword(&self) -> Option<&str> {
        self.tokens.first().copied().filter(|t| KEYWORDS.contains(t))
    }
}

/// Parses algebra-file contents. Table shapes and names are resolved here;
/// the QB axioms are not checked.
pub fn load_algebra(text: &str) -> Result<FiniteAlgebra, AlgebraFormatError> {
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect();
    let mut cursor = Cursor { lines: &lines, pos: 0 };

    let size_line = cursor.expect_keyword("size")?;
    let size = match size_line.tokens.as_slice() {
        [_, n] => n.parse::<usize>().map_err(|_| AlgebraFormatError::Parse {
            line: size_line.number,
            message: format!("`{n}` is not a valid size"),
        })?,
        _ => return Err(parse_err(size_line.number, "expected `size <n>`")),
    };
    if size == 0 {
        return Err(AlgebraError::Empty.into());
    }

    let names_line = cursor.expect_keyword("names")?;
    let names: Vec<String> = names_line.tokens[1..].iter().map(|s| s.to_string()).collect();
    if names.len() != size {
        return Err(AlgebraError::NameCount { expected: size, found: names.len() }.into());
    }
    if let Some(bad) = names.iter().find(|n| KEYWORDS.contains(&n.as_str())) {
        return Err(AlgebraError::InvalidName(bad.clone()).into());
    }
    if let Some((_, dup)) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)) {
        return Err(AlgebraError::DuplicateName(dup.clone()).into());
    }
    let resolve = |line: usize, name: &str| -> Result<Element, AlgebraFormatError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AlgebraFormatError::UnknownName { line, name: name.to_string() })
    };

    let zero = cursor.single_name("zero", &resolve)?;
    let one = cursor.single_name("one", &resolve)?;
    let join = cursor.table("join", &resolve)?;
    let meet = cursor.table("meet", &resolve)?;
    let mut star_rows = cursor.table("star", &resolve)?;
    if let Some(extra) = cursor.lines.get(cursor.pos) {
        return Err(parse_err(extra.number, "unexpected content after the star table"));
    }
    if star_rows.len() != 1 {
        let cols = star_rows.iter().map(Vec::len).max().unwrap_or(0);
        return Err(AlgebraError::WrongDimensions {
            table: "star",
            expected: format!("1×{size}"),
            found: format!("{}×{}", star_rows.len(), cols),
        }
        .into());
    }
    let star = star_rows.pop().unwrap_or_default();
    Ok(FiniteAlgebra::new(names, join, meet, star, zero, one)?)
}

struct Cursor<'l, 'a> {
    lines: &'l [Line<'a>],
    pos: usize,
}

impl<'l, 'a> Cursor<'l, 'a> {
    fn expect_keyword(&mut self, keyword: &str) -> Result<&'l Line<'a>, AlgebraFormatError> {
        match self.lines.get(self.pos) {
            Some(line) if line.tokens[0] == keyword => {
                self.pos += 1;
                Ok(line)
            }
            Some(line) => Err(parse_err(line.number, &format!("expected `{keyword}`, found `{}`", line.tokens[0]))),
            None => Err(parse_err(self.lines.last().map_or(0, |l| l.number), &format!("missing `{keyword}` section"))),
        }
    }

    fn single_name(
        &mut self,
        keyword: &str,
        resolve: &impl Fn(usize, &str) -> Result<Element, AlgebraFormatError>,
    ) -> Result<Element, AlgebraFormatError> {
        let line = self.expect_keyword(keyword)?;
        match line.tokens.as_slice() {
            [_, name] => resolve(line.number, name),
            _ => Err(parse_err(line.number, &format!("expected `{keyword} <name>`"))),
        }
    }

    /// Reads a keyword line followed by rows up to the next keyword. Cells on
    /// the keyword line itself form the first row.
    fn table(
        &mut self,
        keyword: &str,
        resolve: &impl Fn(usize, &str) -> Result<Element, AlgebraFormatError>,
    ) -> Result<Vec<Vec<Element>>, AlgebraFormatError> {
        let head = self.expect_keyword(keyword)?;
        let mut rows = Vec::new();
        if head.tokens.len() > 1 {
            rows.push(resolve_row(head.number, &head.tokens[1..], resolve)?);
        }
        while let Some(line) = self.lines.get(self.pos) {
            if line.keyword().is_some() {
                break;
            }
            rows.push(resolve_row(line.number, &line.tokens, resolve)?);
            self.pos += 1;
        }
        Ok(rows)
    }
}

fn resolve_row(
    line: usize,
    tokens: &[&str],
    resolve: &impl Fn(usize, &str) -> Result<Element, AlgebraFormatError>,
) -> Result<Vec<Element>, AlgebraFormatError> {
    tokens.iter().map(|t| resolve(line, t)).collect()
}

fn parse_err(line: usize, message: &str) -> AlgebraFormatError {
    AlgebraFormatError::Parse { line, message: message.to_string() }
}

pub(super) fn write_algebra(a: &FiniteAlgebra) -> String {
    let mut out = String::new();
    let n = a.size();
    let row = |cells: &mut dyn Iterator<Item = Element>| -> String {
        cells.map(|x| a.name(x).to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "size {n}");
    let _ = writeln!(out, "names {}", a.names().join(" "));
    let _ = writeln!(out, "zero {}", a.name(a.zero()));
    let _ = writeln!(out, "one {}", a.name(a.one()));
    out.push_str("join\n");
    for x in 0..n {
        let _ = writeln!(out, "{}", row(&mut (0..n).map(|y| a.join(x, y))));
    }
    out.push_str("meet\n");
    for x in 0..n {
        let _ = writeln!(out, "{}", row(&mut (0..n).map(|y| a.meet(x, y))));
    }
    out.push_str("star\n");
    let _ = writeln!(out, "{}", row(&mut (0..n).map(|x| a.star(x))));
    out
}
