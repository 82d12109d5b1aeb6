//! Text format for theories.
//!
//! ```text
//! # comments run to end of line
//! theory Semilattice {
//!   op join : 2;
//!   op bot : 0;
//!   eq (x,y) join(x,y) = join(y,x);
//!   eq (x) join(x,bot) = x;
//! }
//! ```
//!
//! Equation contexts are explicit. A bare identifier in a term is a context
//! variable if listed, otherwise a declared constant. Errors carry line and
//! column.

use thiserror::Error;

use super::{Equation, OpSymbol, Term, Theory};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(usize),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let (l, co) = (line, col);
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Spanned { tok: Tok::Ident(s), line: l, col: co });
        } else if c.is_ascii_digit() {
            let (l, co) = (line, col);
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let n = s.parse().map_err(|_| DslError { line: l, col: co, msg: "number too large".into() })?;
            out.push(Spanned { tok: Tok::Number(n), line: l, col: co });
        } else if "{}():;,=".contains(c) {
            out.push(Spanned { tok: Tok::Punct(c), line, col });
            chars.next();
            col += 1;
        } else {
            return Err(DslError { line, col, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    end_line: usize,
}

impl Parser {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.at)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, 1))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        let (line, col) = self.here();
        Err(DslError { line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|s| s.tok.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect_punct(&mut self, c: char) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Punct(p)) if *p == c => {
                self.at += 1;
                Ok(())
            }
            _ => self.fail(format!("expected '{c}'")),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.at += 1;
                Ok(())
            }
            _ => self.fail(format!("expected '{kw}'")),
        }
    }

    fn term(&mut self, theory: &Theory, ctx: &[String]) -> Result<Term, DslError> {
        let (line, col) = self.here();
        let name = self.expect_ident("a term")?;
        if let Some(Tok::Punct('(')) = self.peek() {
            self.at += 1;
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::Punct(')')) {
                loop {
                    args.push(self.term(theory, ctx)?);
                    match self.peek() {
                        Some(Tok::Punct(',')) => {
                            self.at += 1;
                        }
                        Some(Tok::Punct(')')) => break,
                        _ => return self.fail("expected ',' or ')'"),
                    }
                }
            }
            self.expect_punct(')')?;
            let op = theory
                .op(&name)
                .ok_or(DslError { line, col, msg: format!("unknown operation '{name}'") })?;
            if op.arity != args.len() {
                return Err(DslError {
                    line,
                    col,
                    msg: format!("'{name}' has arity {}, got {} arguments", op.arity, args.len()),
                });
            }
            return Ok(Term::App(name, args));
        }
        if ctx.iter().any(|v| *v == name) {
            return Ok(Term::Var(name));
        }
        match theory.op(&name) {
            Some(op) if op.arity == 0 => Ok(Term::App(name, vec![])),
            Some(op) => Err(DslError {
                line,
                col,
                msg: format!("'{name}' has arity {}, needs arguments", op.arity),
            }),
            None => Err(DslError {
                line,
                col,
                msg: format!("'{name}' is neither a context variable nor a constant"),
            }),
        }
    }
}

/// Parse one theory declaration. The whole input must be consumed.
pub fn parse_theory(src: &str) -> Result<Theory, DslError> {
    let end_line = src.lines().count().max(1);
    let mut p = Parser { toks: lex(src)?, at: 0, end_line };
    p.keyword("theory")?;
    // Names of derived theories carry parameters, e.g. `State(2)`.
    let mut name = p.expect_ident("theory name")?;
    while !matches!(p.peek(), Some(Tok::Punct('{')) | None) {
        match p.next().unwrap() {
            Tok::Ident(s) => name.push_str(&s),
            Tok::Number(n) => name.push_str(&n.to_string()),
            Tok::Punct(c) => name.push(c),
        }
    }
    p.expect_punct('{')?;
    let mut theory = Theory::new(name, vec![], vec![]);
    loop {
        match p.peek() {
            Some(Tok::Punct('}')) => {
                p.at += 1;
                break;
            }
            Some(Tok::Ident(kw)) if kw == "op" => {
                p.at += 1;
                let (line, col) = p.here();
                let opname = p.expect_ident("operation name")?;
                p.expect_punct(':')?;
                let arity = match p.next() {
                    Some(Tok::Number(n)) => n,
                    _ => return p.fail("expected arity"),
                };
                p.expect_punct(';')?;
                if theory.op(&opname).is_some() {
                    return Err(DslError { line, col, msg: format!("operation '{opname}' declared twice") });
                }
                theory.ops.push(OpSymbol::new(opname, arity));
            }
            Some(Tok::Ident(kw)) if kw == "eq" => {
                p.at += 1;
                p.expect_punct('(')?;
                let mut context = Vec::new();
                if p.peek() != Some(&Tok::Punct(')')) {
                    loop {
                        let (line, col) = p.here();
                        let v = p.expect_ident("context variable")?;
                        if context.contains(&v) {
                            return Err(DslError { line, col, msg: format!("variable '{v}' listed twice") });
                        }
                        context.push(v);
                        match p.peek() {
                            Some(Tok::Punct(',')) => {
                                p.at += 1;
                            }
                            Some(Tok::Punct(')')) => break,
                            _ => return p.fail("expected ',' or ')'"),
                        }
                    }
                }
                p.expect_punct(')')?;
                let lhs = p.term(&theory, &context)?;
                p.expect_punct('=')?;
                let rhs = p.term(&theory, &context)?;
                p.expect_punct(';')?;
                theory.equations.push(Equation { context, lhs, rhs });
            }
            Some(_) => return p.fail("expected 'op', 'eq' or '}'"),
            None => return p.fail("unexpected end of input"),
        }
    }
    if p.at != p.toks.len() {
        return p.fail("trailing input after theory");
    }
    debug_assert!(theory.validate().is_ok(), "parser admitted an ill-formed theory");
    Ok(theory)
}
