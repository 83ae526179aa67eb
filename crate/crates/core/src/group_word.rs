//! Formal products over the atomic alphabet, with a small template layer
//! (index arithmetic, bound variables, iterated products) used by fixtures.
//!
//! Grammar:
//!
//! ```text
//! word    := term ('*' term)*
//! term    := primary ('^' (int | '(' expr ')'))?
//! primary := atom | '(' word ')' | '{' word '}'
//!          | ('prod' | 'rprod') '(' ident '=' expr '..' expr ':' word ')'
//! atom    := 'rho(' expr ',' expr ')' | 'lam(' expr ',' expr ')'
//!          | 't(' expr ',' expr ')' | 'e(' expr ')' | 'cyc' ('(' expr ')')? | 'id'
//! ```
//!
//! Braces group like parentheses but mark a membership step. `prod` runs its
//! variable upward and `rprod` downward; both splice their factors into the
//! surrounding product. The variable `n` is bound to the rank.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{AtomicName, AutError, Automorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupWordError {
    #[error("parse error at byte {pos} in `{text}`: {reason}")]
    Parse {
        text: String,
        pos: usize,
        reason: String,
    },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("index expression evaluated to {0}, expected a positive index")]
    BadIndex(i64),
    #[error("division by zero in index expression")]
    DivisionByZero,
    #[error(transparent)]
    Aut(#[from] AutError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factor {
    Atom(AtomicName),
    Group { body: GroupWord, braced: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub factor: Factor,
    pub exponent: i64,
}

/// Left-to-right product of atoms and groups.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupWord {
    pub terms: Vec<Term>,
}

impl GroupWord {
    pub fn atom(name: AtomicName) -> Self {
        GroupWord {
            terms: vec![Term {
                factor: Factor::Atom(name),
                exponent: 1,
            }],
        }
    }

    pub fn from_atoms<I: IntoIterator<Item = AtomicName>>(names: I) -> Self {
        GroupWord {
            terms: names
                .into_iter()
                .map(|name| Term {
                    factor: Factor::Atom(name),
                    exponent: 1,
                })
                .collect(),
        }
    }

    /// Parse a closed word; `n` is bound to `rank`.
    pub fn parse(text: &str, rank: usize) -> Result<Self, GroupWordError> {
        let template = WordTemplate::parse(text)?;
        template.instantiate(&Env::with_rank(rank))
    }

    pub fn evaluate(&self, rank: usize) -> Result<Automorphism, GroupWordError> {
        let mut acc = Automorphism::identity(rank);
        for term in &self.terms {
            let base = match &term.factor {
                Factor::Atom(name) => Automorphism::atomic(*name, rank)?,
                Factor::Group { body, .. } => body.evaluate(rank)?,
            };
            acc = acc.compose(&base.pow(term.exponent)?)?;
        }
        Ok(acc)
    }

    /// True when every top-level term is a braced group with exponent 1.
    pub fn is_membership_chain(&self) -> bool {
        !self.terms.is_empty()
            && self.terms.iter().all(|t| {
                t.exponent == 1 && matches!(t.factor, Factor::Group { braced: true, .. })
            })
    }

    /// Bodies of the top-level braced groups, in order.
    pub fn braced_parts(&self) -> Vec<&GroupWord> {
        self.terms
            .iter()
            .filter_map(|t| match &t.factor {
                Factor::Group { body, braced: true } => Some(body),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "id");
        }
        for (k, term) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            match &term.factor {
                Factor::Atom(name) => write!(f, "{name}")?,
                Factor::Group { body, braced: true } => write!(f, "{{{body}}}")?,
                Factor::Group { body, braced: false } => write!(f, "({body})")?,
            }
            if term.exponent != 1 {
                write!(f, "^{}", term.exponent)?;
            }
        }
        Ok(())
    }
}

/// Variable bindings for template instantiation.
#[derive(Debug, Clone, Default)]
pub struct Env {
    vars: BTreeMap<String, i64>,
}

impl Env {
    pub fn with_rank(rank: usize) -> Self {
        let mut env = Env::default();
        env.vars.insert("n".into(), rank as i64);
        env
    }

    pub fn bind(&self, name: &str, value: i64) -> Env {
        let mut env = self.clone();
        env.vars.insert(name.to_string(), value);
        env
    }

    pub fn get(&self, name: &str) -> Result<i64, GroupWordError> {
        self.vars
            .get(name)
            .copied()
            .ok_or_else(|| GroupWordError::Unbound(name.to_string()))
    }

    pub fn rank(&self) -> Result<usize, GroupWordError> {
        let n = self.get("n")?;
        usize::try_from(n).map_err(|_| GroupWordError::BadIndex(n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexExpr {
    Num(i64),
    Var(String),
    Neg(Box<IndexExpr>),
    Bin(char, Box<IndexExpr>, Box<IndexExpr>),
}

impl IndexExpr {
    pub fn parse(text: &str) -> Result<Self, GroupWordError> {
        let mut p = Parser::new(text);
        let e = p.expr()?;
        p.finish()?;
        Ok(e)
    }

    pub fn eval(&self, env: &Env) -> Result<i64, GroupWordError> {
        Ok(match self {
            IndexExpr::Num(v) => *v,
            IndexExpr::Var(name) => env.get(name)?,
            IndexExpr::Neg(e) => -e.eval(env)?,
            IndexExpr::Bin(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    _ if b == 0 => return Err(GroupWordError::DivisionByZero),
                    '/' => a.div_euclid(b),
                    _ => a.rem_euclid(b),
                }
            }
        })
    }

    fn index(&self, env: &Env) -> Result<usize, GroupWordError> {
        let v = self.eval(env)?;
        if v < 1 {
            return Err(GroupWordError::BadIndex(v));
        }
        Ok(v as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum AtomTemplate {
    Rho(IndexExpr, IndexExpr),
    Lam(IndexExpr, IndexExpr),
    T(IndexExpr, IndexExpr),
    E(IndexExpr),
    Cyc(Option<IndexExpr>),
    Id,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum FactorTemplate {
    Atom(AtomTemplate),
    Group {
        body: WordTemplate,
        braced: bool,
    },
    Prod {
        var: String,
        lo: IndexExpr,
        hi: IndexExpr,
        body: WordTemplate,
        descending: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct TermTemplate {
    factor: FactorTemplate,
    exponent: IndexExpr,
}

/// A group word with free index variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTemplate {
    terms: Vec<TermTemplate>,
}

impl WordTemplate {
    pub fn parse(text: &str) -> Result<Self, GroupWordError> {
        let mut p = Parser::new(text);
        let w = p.word()?;
        p.finish()?;
        Ok(w)
    }

    pub fn instantiate(&self, env: &Env) -> Result<GroupWord, GroupWordError> {
        let mut terms = Vec::new();
        for term in &self.terms {
            let exponent = term.exponent.eval(env)?;
            match &term.factor {
                FactorTemplate::Atom(a) => {
                    let name = match a {
                        AtomTemplate::Rho(i, j) => AtomicName::Rho(i.index(env)?, j.index(env)?),
                        AtomTemplate::Lam(i, j) => {
                            AtomicName::Lambda(i.index(env)?, j.index(env)?)
                        }
                        AtomTemplate::T(i, j) => {
                            AtomicName::Transposition(i.index(env)?, j.index(env)?)
                        }
                        AtomTemplate::E(i) => AtomicName::Flip(i.index(env)?),
                        AtomTemplate::Cyc(None) => AtomicName::Cycle(env.rank()?),
                        AtomTemplate::Cyc(Some(m)) => AtomicName::Cycle(m.index(env)?),
                        AtomTemplate::Id => AtomicName::Identity,
                    };
                    terms.push(Term {
                        factor: Factor::Atom(name),
                        exponent,
                    });
                }
                FactorTemplate::Group { body, braced } => terms.push(Term {
                    factor: Factor::Group {
                        body: body.instantiate(env)?,
                        braced: *braced,
                    },
                    exponent,
                }),
                FactorTemplate::Prod {
                    var,
                    lo,
                    hi,
                    body,
                    descending,
                } => {
                    let (lo, hi) = (lo.eval(env)?, hi.eval(env)?);
                    let values: Vec<i64> = if *descending {
                        (lo..=hi).rev().collect()
                    } else {
                        (lo..=hi).collect()
                    };
                    let mut spliced = Vec::new();
                    for v in values {
                        spliced.extend(body.instantiate(&env.bind(var, v))?.terms);
                    }
                    if exponent == 1 {
                        terms.extend(spliced);
                    } else {
                        terms.push(Term {
                            factor: Factor::Group {
                                body: GroupWord { terms: spliced },
                                braced: false,
                            },
                            exponent,
                        });
                    }
                }
            }
        }
        Ok(GroupWord { terms })
    }
}

pub(crate) struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    pub(crate) fn error(&self, reason: impl Into<String>) -> GroupWordError {
        GroupWordError::Parse {
            text: self.text.to_string(),
            pos: self.pos,
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    pub(crate) fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, token: &str) -> Result<(), GroupWordError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), GroupWordError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    pub(crate) fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(k, c)| !(c.is_ascii_alphabetic() || c == '_' || (k > 0 && c.is_ascii_digit())))
            .map(|(k, _)| k)
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    fn number(&mut self) -> Option<i64> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        let v = rest[..len].parse().ok()?;
        self.pos += len;
        Some(v)
    }

    pub(crate) fn expr(&mut self) -> Result<IndexExpr, GroupWordError> {
        let mut lhs = self.mul_expr()?;
        loop {
            // `..` is a range separator, never a subtraction.
            let op = match self.peek() {
                Some(c @ ('+' | '-')) => c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.mul_expr()?;
            lhs = IndexExpr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn mul_expr(&mut self) -> Result<IndexExpr, GroupWordError> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek() {
                Some(c @ ('*' | '/' | '%')) => c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary_expr()?;
            lhs = IndexExpr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary_expr(&mut self) -> Result<IndexExpr, GroupWordError> {
        if self.eat("-") {
            return Ok(IndexExpr::Neg(Box::new(self.unary_expr()?)));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if let Some(v) = self.number() {
            return Ok(IndexExpr::Num(v));
        }
        match self.ident() {
            Some(name) => Ok(IndexExpr::Var(name.to_string())),
            None => Err(self.error("expected an index expression")),
        }
    }

    fn word(&mut self) -> Result<WordTemplate, GroupWordError> {
        let mut terms = vec![self.term()?];
        while self.eat("*") {
            terms.push(self.term()?);
        }
        Ok(WordTemplate { terms })
    }

    fn term(&mut self) -> Result<TermTemplate, GroupWordError> {
        let factor = self.primary()?;
        let mut exponent = IndexExpr::Num(1);
        if self.eat("^") {
            if self.eat("(") {
                exponent = self.expr()?;
                self.expect(")")?;
            } else {
                let neg = self.eat("-");
                let v = self
                    .number()
                    .ok_or_else(|| self.error("expected an integer exponent"))?;
                exponent = IndexExpr::Num(if neg { -v } else { v });
            }
        }
        Ok(TermTemplate { factor, exponent })
    }

    fn pair(&mut self) -> Result<(IndexExpr, IndexExpr), GroupWordError> {
        self.expect("(")?;
        let i = self.expr()?;
        self.expect(",")?;
        let j = self.expr()?;
        self.expect(")")?;
        Ok((i, j))
    }

    fn primary(&mut self) -> Result<FactorTemplate, GroupWordError> {
        if self.eat("(") {
            let body = self.word()?;
            self.expect(")")?;
            return Ok(FactorTemplate::Group {
                body,
                braced: false,
            });
        }
        if self.eat("{") {
            let body = self.word()?;
            self.expect("}")?;
            return Ok(FactorTemplate::Group { body, braced: true });
        }
        let start = self.pos;
        let name = self
            .ident()
            .ok_or_else(|| self.error("expected a generator"))?;
        let atom = match name {
            "rho" => {
                let (i, j) = self.pair()?;
                AtomTemplate::Rho(i, j)
            }
            "lam" => {
                let (i, j) = self.pair()?;
                AtomTemplate::Lam(i, j)
            }
            "t" => {
                let (i, j) = self.pair()?;
                AtomTemplate::T(i, j)
            }
            "e" => {
                self.expect("(")?;
                let i = self.expr()?;
                self.expect(")")?;
                AtomTemplate::E(i)
            }
            "cyc" => {
                if self.peek() == Some('(') {
                    self.expect("(")?;
                    let m = self.expr()?;
                    self.expect(")")?;
                    AtomTemplate::Cyc(Some(m))
                } else {
                    AtomTemplate::Cyc(None)
                }
            }
            "id" => AtomTemplate::Id,
            "prod" | "rprod" => {
                self.expect("(")?;
                let var = self
                    .ident()
                    .ok_or_else(|| self.error("expected a loop variable"))?
                    .to_string();
                self.expect("=")?;
                let lo = self.expr()?;
                self.expect("..")?;
                let hi = self.expr()?;
                self.expect(":")?;
                let body = self.word()?;
                self.expect(")")?;
                return Ok(FactorTemplate::Prod {
                    var,
                    lo,
                    hi,
                    body,
                    descending: name == "rprod",
                });
            }
            other => {
                self.pos = start;
                return Err(self.error(format!("unknown generator `{other}`")));
            }
        };
        Ok(FactorTemplate::Atom(atom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AtomicName::*;

    fn ev(text: &str, rank: usize) -> Automorphism {
        GroupWord::parse(text, rank).unwrap().evaluate(rank).unwrap()
    }

    fn at(name: AtomicName, rank: usize) -> Automorphism {
        Automorphism::atomic(name, rank).unwrap()
    }

    #[test]
    fn parses_atoms_in_string_order() {
        let w = GroupWord::parse("e(2)*rho(1,2)", 4).unwrap();
        assert_eq!(w, GroupWord::from_atoms([Flip(2), Rho(1, 2)]));
        assert_eq!(w.to_string(), "e(2)*rho(1,2)");
        let a = ev("e(2)*rho(1,2)", 4);
        assert_eq!(a, at(Flip(2), 4).compose(&at(Rho(1, 2), 4)).unwrap());
    }

    #[test]
    fn rank_variable_and_arithmetic() {
        let w = GroupWord::parse("t(n-1, n)*e(n/2)*cyc", 6).unwrap();
        assert_eq!(
            w,
            GroupWord::from_atoms([Transposition(5, 6), Flip(3), Cycle(6)])
        );
        assert_eq!(
            GroupWord::parse("t((n+1)*2-9,2*2)", 5).unwrap(),
            GroupWord::atom(Transposition(3, 4))
        );
    }

    #[test]
    fn exponents_and_groups() {
        assert!(ev("t(1,2)^2", 3).is_identity());
        assert!(ev("(rho(1,2)*e(3))^-1*e(3)*rho(1,2)", 3).is_identity());
        assert_eq!(ev("rho(1,2)^-1", 3), at(Rho(1, 2), 3).inverse().unwrap());
        assert_eq!(ev("rho(1,2)^3", 3), ev("rho(1,2)*rho(1,2)*rho(1,2)", 3));
        assert_eq!(ev("e(1)^(n%2)*t(1,2)", 3), ev("e(1)*t(1,2)", 3));
        assert_eq!(ev("e(1)^(n%2)*t(1,2)", 4), ev("t(1,2)", 4));
    }

    #[test]
    fn products_splice_in_order() {
        let up = GroupWord::parse("prod(i=1..n-1: t(i,i+1))", 4).unwrap();
        assert_eq!(
            up,
            GroupWord::from_atoms([
                Transposition(1, 2),
                Transposition(2, 3),
                Transposition(3, 4)
            ])
        );
        let down = GroupWord::parse("rprod(i=1..n-1: {t(i,i+1)})", 4).unwrap();
        assert!(down.is_membership_chain());
        assert_eq!(down.braced_parts().len(), 3);
        assert_eq!(down.to_string(), "{t(3,4)}*{t(2,3)}*{t(1,2)}");
        let empty = GroupWord::parse("id*prod(k=5..4: t(1,k))", 4).unwrap();
        assert!(empty.evaluate(4).unwrap().is_identity());
    }

    #[test]
    fn cycle_is_the_descending_transposition_product() {
        for n in 3..=7 {
            assert_eq!(ev("rprod(i=1..n-1: t(i,i+1))", n), at(Cycle(n), n));
        }
    }

    #[test]
    fn membership_detection() {
        let w = GroupWord::parse("{t(2,3)*e(1)}*{t(3,4)}*{t(2,3)*e(1)}", 4).unwrap();
        assert!(w.is_membership_chain());
        assert!(!GroupWord::parse("{t(2,3)}*e(1)", 4).unwrap().is_membership_chain());
        assert!(!GroupWord::parse("{t(2,3)}^-1", 4).unwrap().is_membership_chain());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            GroupWord::parse("rho(1,", 3),
            Err(GroupWordError::Parse { .. })
        ));
        assert!(matches!(
            GroupWord::parse("foo(1)", 3),
            Err(GroupWordError::Parse { .. })
        ));
        assert_eq!(
            GroupWord::parse("e(k)", 3),
            Err(GroupWordError::Unbound("k".into()))
        );
        assert_eq!(
            GroupWord::parse("e(n-3)", 3),
            Err(GroupWordError::BadIndex(0))
        );
        assert!(matches!(
            GroupWord::parse("e(4)", 3).unwrap().evaluate(3),
            Err(GroupWordError::Aut(_))
        ));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "e(2)*e(4)*rho(1,2)",
            "{t(1,2)*e(1)*e(2)}*{e(2)}*{e(1)}",
            "(t(1,2)*lam(2,3))^-1*cyc(4)",
            "id",
        ] {
            let w = GroupWord::parse(text, 5).unwrap();
            assert_eq!(GroupWord::parse(&w.to_string(), 5).unwrap(), w);
        }
    }
}
