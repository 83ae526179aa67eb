//! Line-oriented relation fixtures.
//!
//! Each non-blank line is `LABEL ; LHS ; RHS`, optionally preceded by any
//! number of `for VAR=EXPR..EXPR:` and `if COND:` prefixes, where `COND` is
//! `EXPR odd`, `EXPR even` or `EXPR op EXPR` with `op` one of
//! `== != < <= > >=`. Labels may interpolate `{EXPR}`. `#` starts a comment.

use thiserror::Error;

use crate::group_word::{Env, GroupWord, GroupWordError, IndexExpr, Parser, WordTemplate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fixture line {line}: {source}")]
pub struct FixtureError {
    pub line: usize,
    #[source]
    pub source: GroupWordError,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Cond {
    Odd(IndexExpr),
    Even(IndexExpr),
    Cmp(String, IndexExpr, IndexExpr),
}

impl Cond {
    fn holds(&self, env: &Env) -> Result<bool, GroupWordError> {
        Ok(match self {
            Cond::Odd(e) => e.eval(env)?.rem_euclid(2) == 1,
            Cond::Even(e) => e.eval(env)?.rem_euclid(2) == 0,
            Cond::Cmp(op, a, b) => {
                let (a, b) = (a.eval(env)?, b.eval(env)?);
                match op.as_str() {
                    "==" => a == b,
                    "!=" => a != b,
                    "<" => a < b,
                    "<=" => a <= b,
                    ">" => a > b,
                    _ => a >= b,
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Prefix {
    For(String, IndexExpr, IndexExpr),
    If(Cond),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum LabelPart {
    Text(String),
    Expr(IndexExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureLine {
    pub line: usize,
    prefixes: Vec<Prefix>,
    label: Vec<LabelPart>,
    lhs: WordTemplate,
    rhs: WordTemplate,
}

/// A relation instantiated at a fixed rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub line: usize,
    pub lhs: GroupWord,
    pub rhs: GroupWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    lines: Vec<FixtureLine>,
}

impl Fixture {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let line = k + 1;
            lines.push(parse_line(body).map_err(|source| FixtureError { line, source })?.with_line(line));
        }
        Ok(Fixture { lines })
    }

    pub fn lines(&self) -> &[FixtureLine] {
        &self.lines
    }

    /// Instantiate every line at rank `n`, in file order.
    pub fn expand(&self, n: usize) -> Result<Vec<Relation>, FixtureError> {
        let mut out = Vec::new();
        for fl in &self.lines {
            fl.expand_into(&Env::with_rank(n), 0, &mut out)
                .map_err(|source| FixtureError {
                    line: fl.line,
                    source,
                })?;
        }
        Ok(out)
    }
}

impl FixtureLine {
    fn with_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }

    fn expand_into(
        &self,
        env: &Env,
        depth: usize,
        out: &mut Vec<Relation>,
    ) -> Result<(), GroupWordError> {
        match self.prefixes.get(depth) {
            Some(Prefix::For(var, lo, hi)) => {
                for v in lo.eval(env)?..=hi.eval(env)? {
                    self.expand_into(&env.bind(var, v), depth + 1, out)?;
                }
                Ok(())
            }
            Some(Prefix::If(cond)) => {
                if cond.holds(env)? {
                    self.expand_into(env, depth + 1, out)?;
                }
                Ok(())
            }
            None => {
                let mut label = String::new();
                for part in &self.label {
                    match part {
                        LabelPart::Text(t) => label.push_str(t),
                        LabelPart::Expr(e) => label.push_str(&e.eval(env)?.to_string()),
                    }
                }
                out.push(Relation {
                    label,
                    line: self.line,
                    lhs: self.lhs.instantiate(env)?,
                    rhs: self.rhs.instantiate(env)?,
                });
                Ok(())
            }
        }
    }
}

fn parse_line(body: &str) -> Result<FixtureLine, GroupWordError> {
    let mut rest = body;
    let mut prefixes = Vec::new();
    loop {
        let (keyword, tail) = match rest.split_once(char::is_whitespace) {
            Some((k @ ("for" | "if"), tail)) => (k, tail),
            _ => break,
        };
        let (head, after) = tail
            .split_once(':')
            .ok_or_else(|| Parser::new(rest).error("prefix without `:`"))?;
        let mut p = Parser::new(head);
        let prefix = if keyword == "for" {
            let var = p
                .ident()
                .ok_or_else(|| p.error("expected a loop variable"))?
                .to_string();
            p.expect("=")?;
            let lo = p.expr()?;
            p.expect("..")?;
            let hi = p.expr()?;
            Prefix::For(var, lo, hi)
        } else {
            let a = p.expr()?;
            let cond = if p.eat("odd") {
                Cond::Odd(a)
            } else if p.eat("even") {
                Cond::Even(a)
            } else {
                let op = ["==", "!=", "<=", ">=", "<", ">"]
                    .into_iter()
                    .find(|op| p.eat(op))
                    .ok_or_else(|| p.error("expected a comparison"))?;
                Cond::Cmp(op.to_string(), a, p.expr()?)
            };
            Prefix::If(cond)
        };
        p.finish()?;
        prefixes.push(prefix);
        rest = after.trim_start();
    }
    let fields: Vec<&str> = rest.split(';').map(str::trim).collect();
    let [label, lhs, rhs] = fields[..] else {
        return Err(Parser::new(rest).error("expected `LABEL ; LHS ; RHS`"));
    };
    Ok(FixtureLine {
        line: 0,
        prefixes,
        label: parse_label(label)?,
        lhs: WordTemplate::parse(lhs)?,
        rhs: WordTemplate::parse(rhs)?,
    })
}

fn parse_label(text: &str) -> Result<Vec<LabelPart>, GroupWordError> {
    let mut parts = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        if open > 0 {
            parts.push(LabelPart::Text(rest[..open].to_string()));
        }
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| Parser::new(text).error("unclosed `{` in label"))?;
        parts.push(LabelPart::Expr(IndexExpr::parse(&rest[open + 1..open + close])?));
        rest = &rest[open + close + 1..];
    }
    if !rest.is_empty() {
        parts.push(LabelPart::Text(rest.to_string()));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::AtomicName::*;

    #[test]
    fn plain_line() {
        let f = Fixture::parse("# comment\n\nx/swap ; t(1,2)^2 ; id  # trailing\n").unwrap();
        let rels = f.expand(4).unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].label, "x/swap");
        assert_eq!(rels[0].line, 3);
        assert_eq!(rels[0].rhs, GroupWord::atom(Identity));
    }

    #[test]
    fn loops_conditions_and_labels() {
        let text = "for i=1..n: for j=1..n: if i != j: c/{i}-{j} ; e(j) ; t(i,j)*e(i)*t(i,j)";
        let rels = Fixture::parse(text).unwrap().expand(3).unwrap();
        assert_eq!(rels.len(), 6);
        assert_eq!(rels[0].label, "c/1-2");
        assert_eq!(rels[5].label, "c/3-2");
        assert_eq!(rels[5].lhs, GroupWord::atom(Flip(2)));
    }

    #[test]
    fn parity_conditions() {
        let text = "if n odd: a ; id ; id\nif n even: b ; id ; id\nif n-1 >= 5: c ; id ; id";
        let f = Fixture::parse(text).unwrap();
        let labels = |n| -> Vec<String> { f.expand(n).unwrap().into_iter().map(|r| r.label).collect() };
        assert_eq!(labels(5), vec!["a"]);
        assert_eq!(labels(6), vec!["b", "c"]);
    }

    #[test]
    fn empty_ranges_expand_to_nothing() {
        let rels = Fixture::parse("for k=4..n-1: s/{k} ; t(3,k+1) ; id").unwrap().expand(4).unwrap();
        assert!(rels.is_empty());
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let err = Fixture::parse("ok ; id ; id\nbroken ; id\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(Fixture::parse("if n: x ; id ; id").is_err());
        assert!(Fixture::parse("bad{ ; id ; id").is_err());
    }
}
