//! Recursive-descent parser for equations.
//!
//! ```text
//! eq     := term "=" term
//! term   := factor { "\/" factor }
//! factor := atom { "/\" atom }
//! atom   := base { "'" }
//! base   := "0" | "1" | ident | "(" term ")"
//! ident  := [a-z][a-zA-Z0-9_]*
//! ```

use thiserror::Error;

use super::ast::{Equation, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message} (found {found})")]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub position: usize,
    /// One-based column, for humans.
    pub column: usize,
    pub found: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Join,
    Meet,
    Prime,
    LParen,
    RParen,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Join => r"`\/`".into(),
            Tok::Meet => r"`/\`".into(),
            Tok::Prime => "`'`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn error(text: &str, position: usize, found: String, message: &str) -> ParseError {
    let column = text[..position.min(text.len())].chars().count() + 1;
    ParseError { position, column, found, message: message.to_string() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                i += 2;
                Tok::Join
            }
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                i += 2;
                Tok::Meet
            }
            b'\'' => {
                i += 1;
                Tok::Prime
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'=' => {
                i += 1;
                Tok::Eq
            }
            b'0' | b'1' if !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') => {
                i += 1;
                if c == b'0' {
                    Tok::Zero
                } else {
                    Tok::One
                }
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(error(text, start, format!("`{ch}`"), "unexpected character"));
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'t> {
    text: &'t str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn fail<T>(&self, message: &str) -> Result<T, ParseError> {
        let (tok, at) = &self.toks[self.pos];
        Err(error(self.text, *at, tok.describe(), message))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Join {
            self.pos += 1;
            t = Term::join(t, self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::Meet {
            self.pos += 1;
            t = Term::meet(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let mut t = self.base()?;
        while *self.peek() == Tok::Prime {
            self.pos += 1;
            t = Term::star(t);
        }
        Ok(t)
    }

    fn base(&mut self) -> Result<Term, ParseError> {
        let t = match self.peek().clone() {
            Tok::Zero => Term::Zero,
            Tok::One => Term::One,
            Tok::Ident(name) => Term::Var(name),
            Tok::LParen => {
                self.pos += 1;
                let inner = self.term()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("expected `)`");
                }
                inner
            }
            _ => return self.fail("expected a variable, constant or `(`"),
        };
        self.pos += 1;
        Ok(t)
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { text, toks: tokenize(text)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(t)
}

pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let mut p = Parser { text, toks: tokenize(text)?, pos: 0 };
    let lhs = p.term()?;
    if *p.peek() != Tok::Eq {
        return p.fail("expected `=`");
    }
    p.pos += 1;
    let rhs = p.term()?;
    if *p.peek() != Tok::End {
        return p.fail("unexpected trailing input");
    }
    Ok(Equation::new(lhs, rhs))
}
