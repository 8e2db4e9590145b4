//! Text syntax for decomposable bundles.
//!
//! ```text
//! expr  := term ("+" term)*
//! term  := [int "*"] fb ("#" fb)*
//! fb    := "O(" int ("," int)* ")" | "S" ["1"|"2"] "(" int ")"
//!        | "T" ["^" int] "(" int ")" | "Psi" int "(" int ")"
//! ```
//!
//! Whitespace is ignored. `O(a,b,c)` expands to one line bundle per factor,
//! so `O(1,2)` and `O(1)#O(2)` are the same term. `T` is `Λ^1 T`.

use std::fmt;

use crate::bundle::{BundleExpr, FactorBundle, SpinorKind, Term};
use crate::error::{Error, Result};
use crate::space::Space;

/// Parses and validates against `space`.
pub fn parse(input: &str, space: &Space) -> Result<BundleExpr> {
    BundleExpr::new(parse_terms(input)?, space)
}

/// Parses without checking the result against a space.
pub fn parse_terms(input: &str) -> Result<Vec<Term>> {
    let mut p = Parser::new(input);
    let mut terms = vec![p.term()?];
    while p.eat('+') {
        terms.push(p.term()?);
    }
    if let Some((pos, c)) = p.peek() {
        return Err(p.err_at(pos, format!("unexpected '{c}'")));
    }
    Ok(terms)
}

struct Parser {
    chars: Vec<(usize, char)>,
    idx: usize,
    len: usize,
}

impl Parser {
    fn new(input: &str) -> Self {
        let chars = input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, idx: 0, len: input.len() }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.idx).copied()
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.len, |(p, _)| p)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse { pos, msg: msg.into() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        self.err_at(self.pos(), msg)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().map(|(_, x)| x) == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn at_digit(&self) -> bool {
        self.peek().is_some_and(|(_, c)| c.is_ascii_digit())
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos();
        let mut s = String::new();
        if let Some((_, c @ ('-' | '+'))) = self.peek() {
            s.push(c);
            self.idx += 1;
        }
        while let Some((_, c)) = self.peek().filter(|(_, c)| c.is_ascii_digit()) {
            s.push(c);
            self.idx += 1;
        }
        s.parse().map_err(|_| self.err_at(start, "expected an integer"))
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos();
        if !self.at_digit() {
            return Err(self.err("expected a non-negative integer"));
        }
        let v = self.int()?;
        u32::try_from(v).map_err(|_| self.err_at(start, "integer out of range"))
    }

    fn paren_int(&mut self) -> Result<i64> {
        self.expect('(')?;
        let v = self.int()?;
        self.expect(')')?;
        Ok(v)
    }

    fn term(&mut self) -> Result<Term> {
        let mut mult = 1u64;
        if self.at_digit() {
            let start = self.pos();
            let m = self.int()?;
            if m <= 0 {
                return Err(self.err_at(start, "multiplicity must be positive"));
            }
            mult = m as u64;
            self.expect('*')?;
        }
        let mut slots = Vec::new();
        self.factor_bundle(&mut slots)?;
        while self.eat('#') {
            self.factor_bundle(&mut slots)?;
        }
        Ok(Term::new(mult, slots))
    }

    fn factor_bundle(&mut self, out: &mut Vec<FactorBundle>) -> Result<()> {
        let Some((pos, c)) = self.peek() else {
            return Err(self.err("expected a factor bundle"));
        };
        self.idx += 1;
        match c {
            'O' => {
                self.expect('(')?;
                out.push(FactorBundle::Line(self.int()?));
                while self.eat(',') {
                    out.push(FactorBundle::Line(self.int()?));
                }
                self.expect(')')?;
            }
            'S' => {
                let kind = if self.eat('1') {
                    SpinorKind::S1
                } else if self.eat('2') {
                    SpinorKind::S2
                } else {
                    SpinorKind::S
                };
                out.push(FactorBundle::Spinor(kind, self.paren_int()?));
            }
            'T' => {
                let p = if self.eat('^') { self.uint()? } else { 1 };
                out.push(FactorBundle::Wedge(p, self.paren_int()?));
            }
            'P' => {
                if !(self.eat('s') && self.eat('i')) {
                    return Err(self.err_at(pos, "expected 'Psi'"));
                }
                let j = self.uint()?;
                out.push(FactorBundle::Psi(j, self.paren_int()?));
            }
            other => return Err(self.err_at(pos, format!("unknown bundle symbol '{other}'"))),
        }
        Ok(())
    }
}

impl fmt::Display for FactorBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FactorBundle::Line(t) => write!(f, "O({t})"),
            FactorBundle::Spinor(k, t) => write!(f, "{}({t})", k.tag()),
            FactorBundle::Wedge(1, t) => write!(f, "T({t})"),
            FactorBundle::Wedge(p, t) => write!(f, "T^{p}({t})"),
            FactorBundle::Psi(j, t) => write!(f, "Psi{j}({t})"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult != 1 {
            write!(f, "{}*", self.mult)?;
        }
        if self.is_line() {
            let tw: Vec<String> = self.slots.iter().map(|b| b.twist().to_string()).collect();
            return write!(f, "O({})", tw.join(","));
        }
        let parts: Vec<String> = self.slots.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("#"))
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
