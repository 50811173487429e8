//! The line-oriented ELT text format.
//!
//! ```text
//! # comment
//! concept NAME
//! role NAME
//! C SubClassOf D
//! ```
//!
//! where a concept is `NAME`, `Top`, `(C and D)` or `(some r C)`. Conjunctions
//! with more than two operands are accepted; operands are sorted and folded
//! left.

use std::fmt::Write as _;

use crate::concept::{Axiom, Concept, Name};
use crate::error::{Error, Result};
use crate::tbox::TBox;

/// A non-fatal issue found while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub tbox: TBox,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

struct Lexer<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    text: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Result<Self> {
        let mut tokens = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            match c {
                '(' => {
                    tokens.push((Tok::Open, i + 1));
                    chars.next();
                }
                ')' => {
                    tokens.push((Tok::Close, i + 1));
                    chars.next();
                }
                c if c.is_whitespace() => {
                    chars.next();
                }
                _ => {
                    let start = i;
                    let mut end = i;
                    while let Some(&(j, d)) = chars.peek() {
                        if d.is_whitespace() || d == '(' || d == ')' {
                            break;
                        }
                        end = j + d.len_utf8();
                        chars.next();
                    }
                    tokens.push((Tok::Word(text[start..end].to_string()), start + 1));
                }
            }
        }
        Ok(Lexer { tokens, pos: 0, line, text })
    }

    fn err(&self, message: impl Into<String>) -> Error {
        let column = self
            .tokens
            .get(self.pos)
            .map(|t| t.1)
            .unwrap_or_else(|| self.text.len() + 1);
        Error::Syntax { line: self.line, column, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.0.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err("expected ')'")),
        }
    }

    fn name(&mut self, what: &str) -> Result<Name> {
        match self.peek() {
            Some(Tok::Word(w)) if Name::is_valid(w) && !is_keyword(w) => {
                let n = Name::new(w);
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err(format!("expected {what} name"))),
        }
    }

    fn concept(&mut self) -> Result<Concept> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "Top" => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Some(Tok::Word(_)) => Ok(Concept::Atomic(self.name("concept")?)),
            Some(Tok::Open) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Word(w)) if w == "some") {
                    self.pos += 1;
                    let role = self.name("role")?;
                    let filler = self.concept()?;
                    self.expect_close()?;
                    return Ok(Concept::Exists(role, Box::new(filler)));
                }
                let mut operands = vec![self.concept()?];
                while matches!(self.peek(), Some(Tok::Word(w)) if w == "and") {
                    self.pos += 1;
                    operands.push(self.concept()?);
                }
                if operands.len() < 2 {
                    return Err(self.err("expected 'and' or 'some'"));
                }
                self.expect_close()?;
                operands.sort();
                let mut it = operands.into_iter();
                let first = it.next().unwrap();
                Ok(it.fold(first, Concept::and))
            }
            Some(Tok::Close) => Err(self.err("unexpected ')'")),
            None => Err(self.err("unexpected end of line")),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.tokens.len() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

fn is_keyword(w: &str) -> bool {
    matches!(w, "Top" | "and" | "some" | "SubClassOf")
}

enum Line {
    Blank,
    ConceptDecl(Name),
    RoleDecl(Name),
    Axiom(Axiom),
}

fn parse_line(text: &str, line: usize) -> Result<Line> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(Line::Blank);
    }
    let mut lx = Lexer::new(text, line)?;
    if let Some(Tok::Word(w)) = lx.peek() {
        if (w == "concept" || w == "role") && lx.tokens.len() == 2 {
            let kind = w.clone();
            lx.next();
            let n = lx.name(&kind)?;
            return Ok(if kind == "concept" { Line::ConceptDecl(n) } else { Line::RoleDecl(n) });
        }
    }
    let lhs = lx.concept()?;
    match lx.next() {
        Some(Tok::Word(w)) if w == "SubClassOf" => {}
        _ => {
            lx.pos = lx.pos.saturating_sub(1);
            return Err(lx.err("expected 'SubClassOf'"));
        }
    }
    let rhs = lx.concept()?;
    lx.finish()?;
    Ok(Line::Axiom(Axiom::new(lhs, rhs)))
}

fn reserved_warnings(axiom_or_name: impl Iterator<Item = Name>, line: usize, out: &mut Vec<Warning>) {
    for n in axiom_or_name {
        if Name::is_reserved(n.as_str()) {
            out.push(Warning {
                line,
                message: format!("name '{n}' uses an infix reserved for generated concepts"),
            });
        }
    }
}

fn concept_names(c: &Concept) -> Vec<Name> {
    let mut out = Vec::new();
    c.visit_names(&mut |n| out.push(n.clone()), &mut |_| {});
    out
}

/// Parses a TBox. Duplicate axioms keep their first position.
pub fn parse_tbox(text: &str) -> Result<Parsed> {
    let mut tbox = TBox::new();
    let mut warnings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match parse_line(raw, line)? {
            Line::Blank => {}
            Line::ConceptDecl(n) => {
                reserved_warnings(std::iter::once(n.clone()), line, &mut warnings);
                tbox.declare_concept(n);
            }
            Line::RoleDecl(n) => tbox.declare_role(n),
            Line::Axiom(ax) => {
                let names = concept_names(&ax.lhs).into_iter().chain(concept_names(&ax.rhs));
                reserved_warnings(names, line, &mut warnings);
                tbox.insert(ax);
            }
        }
    }
    warnings.dedup_by(|a, b| a.message == b.message);
    Ok(Parsed { tbox, warnings })
}

/// Parses a list of axioms, keeping file order and dropping repeats.
pub fn parse_axiom_list(text: &str) -> Result<Vec<Axiom>> {
    let mut out: Vec<Axiom> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        match parse_line(raw, i + 1)? {
            Line::Axiom(ax) if !out.contains(&ax) => out.push(ax),
            Line::Axiom(_) | Line::Blank | Line::ConceptDecl(_) | Line::RoleDecl(_) => {}
        }
    }
    Ok(out)
}

pub fn parse_axiom(text: &str) -> Result<Axiom> {
    match parse_line(text, 1)? {
        Line::Axiom(ax) => Ok(ax),
        _ => Err(Error::Syntax { line: 1, column: 1, message: "expected an axiom".into() }),
    }
}

pub fn parse_concept(text: &str) -> Result<Concept> {
    let mut lx = Lexer::new(text, 1)?;
    let c = lx.concept()?;
    lx.finish()?;
    Ok(c)
}

/// Declarations first, then axioms, both in order.
pub fn serialize_tbox(t: &TBox) -> String {
    let mut out = String::new();
    for n in &t.signature().concepts {
        let _ = writeln!(out, "concept {n}");
    }
    for r in &t.signature().roles {
        let _ = writeln!(out, "role {r}");
    }
    for ax in t.axioms() {
        let _ = writeln!(out, "{ax}");
    }
    out
}
