//! Modal propositional formulas: AST, parser, printer and substitution.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! formula := or ("->" formula)?          right associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "[]" unary | IDENT | "(" formula ")"
//! IDENT   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `¬ ∧ ∨ → □` are accepted as aliases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
        Parser::new(text).parse_all()
    }

    /// Variables occurring in the formula, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Not(f) | Formula::Box(f) => f.collect_vars(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Maximum nesting of `□`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::Box(f) => 1 + f.modal_depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.modal_depth().max(r.modal_depth())
            }
        }
    }

    pub fn is_modal(&self) -> bool {
        self.modal_depth() > 0
    }

    pub fn uses_implication(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Imp(..) => true,
            Formula::Not(f) | Formula::Box(f) => f.uses_implication(),
            Formula::And(l, r) | Formula::Or(l, r) => l.uses_implication() || r.uses_implication(),
        }
    }

    pub fn uses_negation(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Not(_) => true,
            Formula::Box(f) => f.uses_negation(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.uses_negation() || r.uses_negation()
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Not(f) | Formula::Box(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Simultaneous substitution; unmapped variables are left alone.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Not(f) => Formula::not(f.substitute(map)),
            Formula::Box(f) => Formula::boxed(f.substitute(map)),
            Formula::And(l, r) => Formula::and(l.substitute(map), r.substitute(map)),
            Formula::Or(l, r) => Formula::or(l.substitute(map), r.substitute(map)),
            Formula::Imp(l, r) => Formula::imp(l.substitute(map), r.substitute(map)),
        }
    }

    /// Canonical text with minimal parentheses.
    pub fn render(&self) -> String {
        self.to_string()
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(_) | Formula::Box(_) | Formula::Var(_) => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(v) => f.write_str(v)?,
            Formula::Not(c) => {
                f.write_str("~")?;
                c.fmt_at(f, 4)?;
            }
            Formula::Box(c) => {
                f.write_str("[]")?;
                c.fmt_at(f, 4)?;
            }
            // `|` and `&` chains parse left-nested, `->` right-nested
            Formula::Or(l, r) => {
                l.fmt_at(f, 2)?;
                f.write_str(" | ")?;
                r.fmt_at(f, 3)?;
            }
            Formula::And(l, r) => {
                l.fmt_at(f, 3)?;
                f.write_str(" & ")?;
                r.fmt_at(f, 4)?;
            }
            Formula::Imp(l, r) => {
                l.fmt_at(f, 2)?;
                f.write_str(" -> ")?;
                r.fmt_at(f, 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: found {found}, expected one of {}", expected.join(", "))]
pub struct SyntaxError {
    pub offset: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    Box,
    And,
    Or,
    Imp,
    LParen,
    RParen,
    Ident(String),
    Invalid(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Not => "`~`".into(),
            Tok::Box => "`[]`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Invalid(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else {
            match c {
                '~' | '¬' => (Tok::Not, c.len_utf8()),
                '□' => (Tok::Box, c.len_utf8()),
                '&' | '∧' => (Tok::And, c.len_utf8()),
                '|' | '∨' => (Tok::Or, c.len_utf8()),
                '→' => (Tok::Imp, c.len_utf8()),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let len = rest
                        .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                        .unwrap_or(rest.len());
                    (Tok::Ident(rest[..len].to_string()), len)
                }
                other => (Tok::Invalid(other), other.len_utf8()),
            }
        };
        out.push((i, tok));
        while chars.peek().is_some_and(|&(j, _)| j < i + len) {
            chars.next();
        }
        if matches!(out.last(), Some((_, Tok::Invalid(_)))) {
            break;
        }
    }
    out.push((text.len(), Tok::Eof));
    out
}

const UNARY_START: [&str; 4] = ["`~`", "`[]`", "identifier", "`(`"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            toks: lex(text),
            pos: 0,
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&'static str]) -> SyntaxError {
        let (offset, tok) = &self.toks[self.pos];
        SyntaxError {
            offset: *offset,
            found: tok.describe(),
            expected: expected.to_vec(),
        }
    }

    fn parse_all(mut self) -> Result<Formula, SyntaxError> {
        let f = self.formula()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error(&["`&`", "`|`", "`->`", "end of input"]));
        }
        Ok(f)
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Imp {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.pos += 1;
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.pos += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`&`", "`|`", "`->`", "`)`"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error(&UNARY_START)),
        }
    }
}

/// `□(p → q) → (□p → □q)`
pub fn axiom_k() -> Formula {
    Formula::parse("[](p -> q) -> []p -> []q").expect("static formula")
}

/// `(□p ∨ □q) → □(p ∨ q)`
pub fn box_disjunction() -> Formula {
    Formula::parse("[]p | []q -> [](p | q)").expect("static formula")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn parses_axiom_k() {
        let expected = Formula::imp(
            Formula::boxed(Formula::imp(v("p"), v("q"))),
            Formula::imp(Formula::boxed(v("p")), Formula::boxed(v("q"))),
        );
        assert_eq!(p("[](p -> q) -> ([]p -> []q)"), expected);
        assert_eq!(axiom_k(), expected);
    }

    #[test]
    fn and_binds_tighter_than_or() {
        assert_eq!(p("p | q & r"), Formula::or(v("p"), Formula::and(v("q"), v("r"))));
    }

    #[test]
    fn left_nested_chains() {
        assert_eq!(
            p("p | q | r"),
            Formula::or(Formula::or(v("p"), v("q")), v("r"))
        );
        assert_eq!(
            p("p -> q -> r"),
            Formula::imp(v("p"), Formula::imp(v("q"), v("r")))
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(p("□(p → q) → (□p → □q)"), axiom_k());
        assert_eq!(p("¬p ∧ q ∨ r"), p("~p & q | r"));
    }

    #[test]
    fn truncated_input() {
        let err = Formula::parse("p ->").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.found, "end of input");
        assert!(err.expected.contains(&"identifier"));
    }

    #[test]
    fn other_syntax_errors() {
        let err = Formula::parse("p q").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.expected.contains(&"end of input"));
        let err = Formula::parse("(p & q").unwrap_err();
        assert_eq!((err.offset, err.expected.contains(&"`)`")), (6, true));
        let err = Formula::parse("p & 3").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = Formula::parse("").unwrap_err();
        assert_eq!(err.offset, 0);
        let err = Formula::parse("p -> é").unwrap_err();
        assert_eq!((err.offset, err.found.as_str()), (5, "`é`"));
        assert!(Formula::parse("[ ]p").is_err());
    }

    #[test]
    fn renders_minimal_parentheses() {
        assert_eq!(Formula::boxed(Formula::or(v("p"), v("q"))).render(), "[](p | q)");
        assert_eq!(
            Formula::imp(v("p"), Formula::imp(v("q"), v("r"))).render(),
            "p -> q -> r"
        );
        assert_eq!(
            Formula::and(Formula::or(v("p"), v("q")), v("r")).render(),
            "(p | q) & r"
        );
        assert_eq!(
            Formula::imp(Formula::imp(v("p"), v("q")), v("r")).render(),
            "(p -> q) -> r"
        );
        assert_eq!(axiom_k().render(), "[](p -> q) -> []p -> []q");
        assert_eq!(p("~~[]~p").render(), "~~[]~p");
        assert_eq!(p("p & (q & r)").render(), "p & (q & r)");
    }

    #[test]
    fn substitution() {
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), p("[]p"));
        assert_eq!(p("p | q").substitute(&m), p("[]p | q"));
        assert_eq!(p("p").substitute(&BTreeMap::new()), p("p"));
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), p("q & r"));
        assert_eq!(p("[](p -> p)").substitute(&m), p("[]((q & r) -> (q & r))"));
    }

    #[test]
    fn simultaneous_not_sequential() {
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), v("q"));
        m.insert("q".to_string(), v("p"));
        assert_eq!(p("p -> q").substitute(&m), p("q -> p"));
    }

    #[test]
    fn derived_attributes() {
        let k = axiom_k();
        assert_eq!(k.vars().into_iter().collect::<Vec<_>>(), vec!["p", "q"]);
        assert_eq!(k.modal_depth(), 1);
        assert_eq!(p("[][]p & q").modal_depth(), 2);
        assert!(!p("p -> q").is_modal());
        assert!(k.uses_implication() && !k.uses_negation());
        assert_eq!(box_disjunction().render(), "[]p | []q -> [](p | q)");
    }
}
