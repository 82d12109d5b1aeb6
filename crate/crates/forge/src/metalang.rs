//! A first-order metalanguage for computations: finite base sets, unit and
//! product types, one monad type former `T`, and do-notation.
//!
//! Programs declare their base sets, function symbols with concrete tables,
//! free variables, and named terms:
//!
//! ```text
//! set A = {a0, a1};
//! fun not : A -> A = { a0 : a1, a1 : a0 };
//! var p : T A;
//! var q : T A;
//! term swap = do x <- p; do y <- q; ret (not(y), x);
//! ```
//!
//! Terms are typechecked once into a resolved form that carries the element
//! type at every `ret` and bind, which is exactly what evaluation through a
//! [`FiniteMonad`] needs: a bind evaluates its body at every element of the
//! source type and extends. Env propagation through the body plays the role
//! of strength, which on these monads is unique. Equivalence of two terms of
//! one type quantifies the free variables over their (possibly fragmentary)
//! carriers, optionally sweeping the base sets over prefix sizes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monad::{Carrier, FiniteMonad, Kleisli};
use crate::value::{FiniteSet, FnTable, Value};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MType {
    Unit,
    Base(String),
    Prod(Box<MType>, Box<MType>),
    Monad(Box<MType>),
}

impl fmt::Display for MType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MType::Unit => write!(f, "1"),
            MType::Base(n) => write!(f, "{n}"),
            MType::Prod(a, b) => write!(f, "({a} * {b})"),
            MType::Monad(a) => match a.as_ref() {
                MType::Prod(_, _) => write!(f, "T {a}"),
                MType::Unit | MType::Base(_) => write!(f, "T {a}"),
                MType::Monad(_) => write!(f, "T ({a})"),
            },
        }
    }
}

/// Surface syntax, identifiers unresolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MTerm {
    Ident(String),
    UnitVal,
    Apply(String, Box<MTerm>),
    Pair(Box<MTerm>, Box<MTerm>),
    Fst(Box<MTerm>),
    Snd(Box<MTerm>),
    Ret(Box<MTerm>),
    Bind(String, Box<MTerm>, Box<MTerm>),
}

impl fmt::Display for MTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MTerm::Ident(n) => write!(f, "{n}"),
            MTerm::UnitVal => write!(f, "*"),
            MTerm::Apply(n, t) => write!(f, "{n}({t})"),
            MTerm::Pair(a, b) => write!(f, "({a}, {b})"),
            MTerm::Fst(t) => write!(f, "fst ({t})"),
            MTerm::Snd(t) => write!(f, "snd ({t})"),
            MTerm::Ret(t) => write!(f, "ret ({t})"),
            MTerm::Bind(x, s, b) => write!(f, "do {x} <- {s}; {b}"),
        }
    }
}

/// Typechecked term: identifiers resolved, element types pinned where
/// evaluation needs them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TTerm {
    Var(String, MType),
    UnitVal,
    /// A set atom together with the name of the set that owns it.
    Atom(Value, String),
    /// Function symbol application with the symbol's codomain.
    Apply(String, Box<TTerm>, MType),
    Pair(Box<TTerm>, Box<TTerm>),
    Fst(Box<TTerm>),
    Snd(Box<TTerm>),
    /// `ret t` with the element type of `t`.
    Ret(Box<TTerm>, MType),
    /// `do var <- src; body` where `src : T elem` and `body : T out`.
    Bind { var: String, elem: MType, out: MType, src: Box<TTerm>, body: Box<TTerm> },
}

impl TTerm {
    /// Type of a checked term. Total: every node that needs type data to
    /// answer stores it.
    pub fn ty(&self) -> MType {
        match self {
            TTerm::Var(_, t) => t.clone(),
            TTerm::UnitVal => MType::Unit,
            TTerm::Atom(_, set) => MType::Base(set.clone()),
            TTerm::Apply(_, _, cod) => cod.clone(),
            TTerm::Pair(a, b) => MType::Prod(Box::new(a.ty()), Box::new(b.ty())),
            TTerm::Fst(t) => match t.ty() {
                MType::Prod(a, _) => *a,
                _ => unreachable!("checked"),
            },
            TTerm::Snd(t) => match t.ty() {
                MType::Prod(_, b) => *b,
                _ => unreachable!("checked"),
            },
            TTerm::Ret(_, elem) => MType::Monad(Box::new(elem.clone())),
            TTerm::Bind { out, .. } => MType::Monad(Box::new(out.clone())),
        }
    }

    /// Set names whose atoms the term mentions as literals, with the least
    /// prefix length of each set that keeps those literals in scope.
    fn literal_floor(&self, floor: &mut BTreeMap<String, usize>, prog: &Program) {
        match self {
            TTerm::Atom(v, set) => {
                let idx = prog.sets[set].index_of(v).expect("checked atom") + 1;
                let e = floor.entry(set.clone()).or_insert(0);
                *e = (*e).max(idx);
            }
            TTerm::Apply(_, t, _) | TTerm::Fst(t) | TTerm::Snd(t) | TTerm::Ret(t, _) => {
                t.literal_floor(floor, prog)
            }
            TTerm::Pair(a, b) => {
                a.literal_floor(floor, prog);
                b.literal_floor(floor, prog);
            }
            TTerm::Bind { src, body, .. } => {
                src.literal_floor(floor, prog);
                body.literal_floor(floor, prog);
            }
            TTerm::Var(_, _) | TTerm::UnitVal => {}
        }
    }
}

/// A function symbol: a typed, concrete table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDecl {
    pub dom: MType,
    pub cod: MType,
    pub table: BTreeMap<Value, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub sets: BTreeMap<String, FiniteSet>,
    pub funs: BTreeMap<String, FunDecl>,
    /// Free computation variables in declaration order.
    pub vars: Vec<(String, MType)>,
    pub terms: Vec<(String, MTerm)>,
}

impl Program {
    pub fn term(&self, name: &str) -> Option<&MTerm> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn var_type(&self, name: &str) -> Option<&MType> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Declarations other than terms; two programs with equal signatures can
    /// have their terms compared.
    pub fn same_signature(&self, other: &Program) -> bool {
        self.sets == other.sets && self.funs == other.funs && self.vars == other.vars
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, col {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Error, PartialEq, Eq, Clone, Serialize, Deserialize)]
#[error("[{rule}] {msg}")]
pub struct TypeError {
    /// The violated typing rule, by name.
    pub rule: String,
    pub msg: String,
}

fn terr(rule: &str, msg: String) -> TypeError {
    TypeError { rule: rule.into(), msg }
}

// ---------------------------------------------------------------------------
// Lexer and parser.

const KEYWORDS: [&str; 9] = ["do", "ret", "fst", "snd", "star", "set", "fun", "var", "term"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(char),
    Arrow, // <-
    To,    // ->
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
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
            }
        } else if c.is_alphanumeric() || c == '_' {
            let (l, co) = (line, col);
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(s), l, co));
        } else if c == '<' {
            let (l, co) = (line, col);
            chars.next();
            col += 1;
            if chars.peek() == Some(&'-') {
                chars.next();
                col += 1;
                toks.push((Tok::Arrow, l, co));
            } else {
                return Err(ParseError { line: l, col: co, msg: "expected '<-'".into() });
            }
        } else if c == '-' {
            let (l, co) = (line, col);
            chars.next();
            col += 1;
            if chars.peek() == Some(&'>') {
                chars.next();
                col += 1;
                toks.push((Tok::To, l, co));
            } else {
                return Err(ParseError { line: l, col: co, msg: "expected '->'".into() });
            }
        } else if "={};:,()*[]".contains(c) {
            toks.push((Tok::Sym(c), line, col));
            chars.next();
            col += 1;
        } else {
            return Err(ParseError { line, col, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).or_else(|| self.toks.last()).map(|&(_, l, c)| (l, c)).unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{c}'"))),
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(s)) = self.next() else { unreachable!() };
                Ok(s)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == kw {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn expect_name(&mut self) -> Result<String, ParseError> {
        let s = self.expect_ident()?;
        if KEYWORDS.contains(&s.as_str()) {
            self.pos -= 1;
            return Err(self.err(format!("'{s}' is a keyword")));
        }
        Ok(s)
    }

    /// Literal value in table position: atom, `*`, `bot`, pair, set, list.
    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "bot" => {
                self.pos += 1;
                Ok(Value::Bottom)
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Value::atom(s))
            }
            Some(Tok::Sym('*')) => {
                self.pos += 1;
                Ok(Value::Unit)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let a = self.value()?;
                self.expect_sym(',')?;
                let b = self.value()?;
                self.expect_sym(')')?;
                Ok(Value::pair(a, b))
            }
            Some(Tok::Sym('{')) => {
                self.pos += 1;
                let mut elems = Vec::new();
                loop {
                    if let Some(Tok::Sym('}')) = self.peek() {
                        self.pos += 1;
                        break;
                    }
                    elems.push(self.value()?);
                    if let Some(Tok::Sym(',')) = self.peek() {
                        self.pos += 1;
                    }
                }
                Ok(Value::Set(elems.into_iter().collect()))
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let mut elems = Vec::new();
                loop {
                    if let Some(Tok::Sym(']')) = self.peek() {
                        self.pos += 1;
                        break;
                    }
                    elems.push(self.value()?);
                    if let Some(Tok::Sym(',')) = self.peek() {
                        self.pos += 1;
                    }
                }
                Ok(Value::Seq(elems))
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut lx = lex(src)?;
    let mut sets = BTreeMap::new();
    let mut funs = BTreeMap::new();
    let mut vars: Vec<(String, MType)> = Vec::new();
    let mut terms: Vec<(String, MTerm)> = Vec::new();
    while lx.peek().is_some() {
        if lx.eat_keyword("set") {
            let name = lx.expect_name()?;
            lx.expect_sym('=')?;
            lx.expect_sym('{')?;
            let mut elems = Vec::new();
            loop {
                if let Some(Tok::Sym('}')) = lx.peek() {
                    lx.pos += 1;
                    break;
                }
                elems.push(Value::atom(lx.expect_name()?));
                if let Some(Tok::Sym(',')) = lx.peek() {
                    lx.pos += 1;
                }
            }
            lx.expect_sym(';')?;
            if sets.insert(name.clone(), FiniteSet::new(elems)).is_some() {
                return Err(lx.err(format!("set '{name}' declared twice")));
            }
        } else if lx.eat_keyword("fun") {
            let name = lx.expect_name()?;
            lx.expect_sym(':')?;
            let dom = parse_type(&mut lx)?;
            match lx.peek() {
                Some(Tok::To) => lx.pos += 1,
                _ => return Err(lx.err("expected '->'")),
            }
            let cod = parse_type(&mut lx)?;
            lx.expect_sym('=')?;
            lx.expect_sym('{')?;
            let mut table = BTreeMap::new();
            loop {
                if let Some(Tok::Sym('}')) = lx.peek() {
                    lx.pos += 1;
                    break;
                }
                let k = lx.value()?;
                lx.expect_sym(':')?;
                let v = lx.value()?;
                table.insert(k, v);
                if let Some(Tok::Sym(',')) = lx.peek() {
                    lx.pos += 1;
                }
            }
            lx.expect_sym(';')?;
            if funs.insert(name.clone(), FunDecl { dom, cod, table }).is_some() {
                return Err(lx.err(format!("function '{name}' declared twice")));
            }
        } else if lx.eat_keyword("var") {
            let name = lx.expect_name()?;
            lx.expect_sym(':')?;
            let ty = parse_type(&mut lx)?;
            lx.expect_sym(';')?;
            if vars.iter().any(|(n, _)| *n == name) {
                return Err(lx.err(format!("variable '{name}' declared twice")));
            }
            vars.push((name, ty));
        } else if lx.eat_keyword("term") {
            let name = lx.expect_name()?;
            lx.expect_sym('=')?;
            let t = parse_term(&mut lx)?;
            lx.expect_sym(';')?;
            if terms.iter().any(|(n, _)| *n == name) {
                return Err(lx.err(format!("term '{name}' defined twice")));
            }
            terms.push((name, t));
        } else {
            return Err(lx.err("expected 'set', 'fun', 'var' or 'term'"));
        }
    }
    Ok(Program { sets, funs, vars, terms })
}

fn parse_type(lx: &mut Lexer) -> Result<MType, ParseError> {
    let mut left = parse_atype(lx)?;
    while let Some(Tok::Sym('*')) = lx.peek() {
        lx.pos += 1;
        let right = parse_atype(lx)?;
        left = MType::Prod(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_atype(lx: &mut Lexer) -> Result<MType, ParseError> {
    match lx.peek() {
        Some(Tok::Ident(s)) if s == "T" => {
            lx.pos += 1;
            Ok(MType::Monad(Box::new(parse_atype(lx)?)))
        }
        Some(Tok::Ident(s)) if s == "1" => {
            lx.pos += 1;
            Ok(MType::Unit)
        }
        Some(Tok::Ident(_)) => Ok(MType::Base(lx.expect_ident()?)),
        Some(Tok::Sym('(')) => {
            lx.pos += 1;
            let t = parse_type(lx)?;
            lx.expect_sym(')')?;
            Ok(t)
        }
        _ => Err(lx.err("expected a type")),
    }
}

fn parse_term(lx: &mut Lexer) -> Result<MTerm, ParseError> {
    if lx.eat_keyword("do") {
        let x = lx.expect_name()?;
        match lx.peek() {
            Some(Tok::Arrow) => lx.pos += 1,
            _ => return Err(lx.err("expected '<-'")),
        }
        let src = parse_term(lx)?;
        lx.expect_sym(';')?;
        let body = parse_term(lx)?;
        return Ok(MTerm::Bind(x, Box::new(src), Box::new(body)));
    }
    if lx.eat_keyword("ret") {
        return Ok(MTerm::Ret(Box::new(parse_aterm(lx)?)));
    }
    if lx.eat_keyword("fst") {
        return Ok(MTerm::Fst(Box::new(parse_aterm(lx)?)));
    }
    if lx.eat_keyword("snd") {
        return Ok(MTerm::Snd(Box::new(parse_aterm(lx)?)));
    }
    parse_aterm(lx)
}

fn parse_aterm(lx: &mut Lexer) -> Result<MTerm, ParseError> {
    match lx.peek() {
        Some(Tok::Ident(s)) if s == "do" || s == "ret" || s == "fst" || s == "snd" => parse_term(lx),
        Some(Tok::Ident(s)) if s == "star" => {
            lx.pos += 1;
            Ok(MTerm::UnitVal)
        }
        Some(Tok::Ident(_)) => {
            let name = lx.expect_ident()?;
            // An immediately following '(' is function application.
            if let Some(Tok::Sym('(')) = lx.peek() {
                let arg = parse_aterm(lx)?;
                return Ok(MTerm::Apply(name, Box::new(arg)));
            }
            Ok(MTerm::Ident(name))
        }
        Some(Tok::Sym('*')) => {
            lx.pos += 1;
            Ok(MTerm::UnitVal)
        }
        Some(Tok::Sym('(')) => {
            lx.pos += 1;
            let first = parse_term(lx)?;
            match lx.peek() {
                Some(Tok::Sym(',')) => {
                    lx.pos += 1;
                    let second = parse_term(lx)?;
                    lx.expect_sym(')')?;
                    Ok(MTerm::Pair(Box::new(first), Box::new(second)))
                }
                Some(Tok::Sym(')')) => {
                    lx.pos += 1;
                    Ok(first)
                }
                _ => Err(lx.err("expected ',' or ')'")),
            }
        }
        _ => Err(lx.err("expected a term")),
    }
}

// ---------------------------------------------------------------------------
// Typechecking.

/// Typecheck one term of `prog`. Identifiers resolve to binders, declared
/// variables, or set atoms (in that order); atoms must live in exactly one
/// declared set.
pub fn typecheck(prog: &Program, term: &MTerm) -> Result<TTerm, TypeError> {
    check(prog, &mut Vec::new(), term)
}

/// Typecheck every `term` item, in order.
pub fn typecheck_all(prog: &Program) -> Result<Vec<(String, TTerm)>, TypeError> {
    prog.terms
        .iter()
        .map(|(n, t)| {
            let tt = typecheck(prog, t)
                .map_err(|e| terr(&e.rule, format!("in term '{n}': {}", e.msg)))?;
            Ok((n.clone(), tt))
        })
        .collect()
}

fn check(prog: &Program, scope: &mut Vec<(String, MType)>, term: &MTerm) -> Result<TTerm, TypeError> {
    match term {
        MTerm::Ident(name) => {
            if let Some((_, ty)) = scope.iter().rev().find(|(n, _)| n == name) {
                return Ok(TTerm::Var(name.clone(), ty.clone()));
            }
            if let Some(ty) = prog.var_type(name) {
                return Ok(TTerm::Var(name.clone(), ty.clone()));
            }
            let v = Value::atom(name.clone());
            let homes: Vec<&String> =
                prog.sets.iter().filter(|(_, s)| s.contains(&v)).map(|(n, _)| n).collect();
            match homes.as_slice() {
                [] => Err(terr(
                    "ident-unbound",
                    format!("'{name}' is not a variable and not an atom of any declared set"),
                )),
                [one] => Ok(TTerm::Atom(v, (*one).clone())),
                many => Err(terr(
                    "atom-ambiguous",
                    format!("atom '{name}' lives in several sets: {many:?}"),
                )),
            }
        }
        MTerm::UnitVal => Ok(TTerm::UnitVal),
        MTerm::Apply(name, arg) => {
            let Some(decl) = prog.funs.get(name) else {
                return Err(terr(
                    "apply-unknown",
                    format!("'{name}' is not a declared function symbol"),
                ));
            };
            let targ = check(prog, scope, arg)?;
            let at = targ.ty();
            if at != decl.dom {
                return Err(terr(
                    "apply-arg",
                    format!("'{name}' expects {}, got {at}", decl.dom),
                ));
            }
            Ok(TTerm::Apply(name.clone(), Box::new(targ), decl.cod.clone()))
        }
        MTerm::Pair(a, b) => {
            let ta = check(prog, scope, a)?;
            let tb = check(prog, scope, b)?;
            Ok(TTerm::Pair(Box::new(ta), Box::new(tb)))
        }
        MTerm::Fst(t) => {
            let tt = check(prog, scope, t)?;
            match tt.ty() {
                MType::Prod(_, _) => Ok(TTerm::Fst(Box::new(tt))),
                other => Err(terr("fst-arg", format!("fst needs a product, got {other}"))),
            }
        }
        MTerm::Snd(t) => {
            let tt = check(prog, scope, t)?;
            match tt.ty() {
                MType::Prod(_, _) => Ok(TTerm::Snd(Box::new(tt))),
                other => Err(terr("snd-arg", format!("snd needs a product, got {other}"))),
            }
        }
        MTerm::Ret(t) => {
            let tt = check(prog, scope, t)?;
            let elem = tt.ty();
            Ok(TTerm::Ret(Box::new(tt), elem))
        }
        MTerm::Bind(x, src, body) => {
            let tsrc = check(prog, scope, src)?;
            let MType::Monad(elem) = tsrc.ty() else {
                return Err(terr(
                    "bind-source",
                    format!("'do {x} <- ...' needs a computation, got {}", tsrc.ty()),
                ));
            };
            scope.push((x.clone(), (*elem).clone()));
            let tbody = check(prog, scope, body);
            scope.pop();
            let tbody = tbody?;
            let MType::Monad(out) = tbody.ty() else {
                return Err(terr(
                    "bind-body",
                    format!("the body of 'do {x} <- ...' must be a computation, got {}", tbody.ty()),
                ));
            };
            Ok(TTerm::Bind {
                var: x.clone(),
                elem: *elem,
                out: *out,
                src: Box::new(tsrc),
                body: Box::new(tbody),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Semantics.

/// The set of values of a type under `m`, with a completeness flag that goes
/// false once any monadic layer contributes a bounded fragment.
pub fn type_carrier(m: &FiniteMonad, prog: &Program, ty: &MType) -> Result<Carrier, TypeError> {
    match ty {
        MType::Unit => Ok(Carrier { set: [Value::Unit].into_iter().collect(), complete: true }),
        MType::Base(n) => match prog.sets.get(n) {
            Some(s) => Ok(Carrier { set: s.clone(), complete: true }),
            None => Err(terr("unknown-set", format!("no set named '{n}'"))),
        },
        MType::Prod(a, b) => {
            let ca = type_carrier(m, prog, a)?;
            let cb = type_carrier(m, prog, b)?;
            let set = ca
                .set
                .iter()
                .flat_map(|x| cb.set.iter().map(move |y| Value::pair(x.clone(), y.clone())))
                .collect();
            Ok(Carrier { set, complete: ca.complete && cb.complete })
        }
        MType::Monad(a) => {
            let ca = type_carrier(m, prog, a)?;
            let c = m.carrier(&ca.set);
            Ok(Carrier { set: c.set, complete: ca.complete && c.complete })
        }
    }
}

/// Evaluate a resolved term under an environment for the free variables.
/// Binds enumerate the element type, so every variable the body may see is
/// covered; the environment must assign every declared variable the term
/// mentions.
pub fn eval(
    m: &FiniteMonad,
    prog: &Program,
    term: &TTerm,
    env: &BTreeMap<String, Value>,
) -> Result<Value, TypeError> {
    match term {
        TTerm::Var(n, _) => env
            .get(n)
            .cloned()
            .ok_or_else(|| terr("env-missing", format!("no value supplied for '{n}'"))),
        TTerm::UnitVal => Ok(Value::Unit),
        TTerm::Atom(v, _) => Ok(v.clone()),
        TTerm::Apply(name, arg, _) => {
            let v = eval(m, prog, arg, env)?;
            prog.funs[name]
                .table
                .get(&v)
                .cloned()
                .ok_or_else(|| terr("apply-partial", format!("'{name}' has no entry for {v}")))
        }
        TTerm::Pair(a, b) => Ok(Value::pair(eval(m, prog, a, env)?, eval(m, prog, b, env)?)),
        TTerm::Fst(t) => match eval(m, prog, t, env)? {
            Value::Pair(a, _) => Ok(*a),
            other => Err(terr("eval-fst", format!("fst of a non-pair value {other}"))),
        },
        TTerm::Snd(t) => match eval(m, prog, t, env)? {
            Value::Pair(_, b) => Ok(*b),
            other => Err(terr("eval-snd", format!("snd of a non-pair value {other}"))),
        },
        TTerm::Ret(t, elem) => {
            let v = eval(m, prog, t, env)?;
            let dom = type_carrier(m, prog, elem)?;
            Ok(m.unit(&dom.set, &v))
        }
        TTerm::Bind { var, elem, out, src, body } => {
            let mv = eval(m, prog, src, env)?;
            let dom = type_carrier(m, prog, elem)?;
            let target = type_carrier(m, prog, out)?;
            let mut map = BTreeMap::new();
            let mut inner = env.clone();
            for a in dom.set.iter() {
                inner.insert(var.clone(), a.clone());
                map.insert(a.clone(), eval(m, prog, body, &inner)?);
            }
            Ok(m.ext(&Kleisli::new(FnTable::new(map), target.set), &mv))
        }
    }
}

/// Check that every declared function table is total on its domain carrier
/// and lands in its codomain carrier, under `m`'s interpretation of types.
pub fn validate_signature(m: &FiniteMonad, prog: &Program) -> Result<(), TypeError> {
    for (name, decl) in &prog.funs {
        let dom = type_carrier(m, prog, &decl.dom)?;
        let cod = type_carrier(m, prog, &decl.cod)?;
        for x in dom.set.iter() {
            match decl.table.get(x) {
                None => {
                    return Err(terr(
                        "fun-table-missing",
                        format!("'{name}' has no entry for {x}"),
                    ))
                }
                Some(y) if !cod.set.contains(y) => {
                    return Err(terr(
                        "fun-table-value",
                        format!("'{name}' maps {x} to {y}, outside {}", decl.cod),
                    ))
                }
                Some(_) => {}
            }
        }
        for k in decl.table.keys() {
            if !dom.set.contains(k) {
                return Err(terr(
                    "fun-table-key",
                    format!("'{name}' has an entry for {k}, outside {}", decl.dom),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivWitness {
    pub env: BTreeMap<String, Value>,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivReport {
    pub monad: String,
    pub ty: String,
    pub equal: bool,
    /// Environments compared.
    pub checked: u64,
    /// True when a quantified variable ranged over a carrier fragment.
    pub bounded_fragment: bool,
    pub witness: Option<EquivWitness>,
}

/// Decide whether two terms denote the same function of their free
/// variables, by exhausting all environments. Both terms must have the same
/// type; variables not mentioned by either term are still quantified (they
/// only multiply work, never change the verdict).
pub fn equiv(
    m: &FiniteMonad,
    prog: &Program,
    left: &TTerm,
    right: &TTerm,
) -> Result<EquivReport, TypeError> {
    let lt = left.ty();
    let rt = right.ty();
    if lt != rt {
        return Err(terr(
            "equiv-type-mismatch",
            format!("left has type {lt}, right has type {rt}"),
        ));
    }
    validate_signature(m, prog)?;
    let mut domains: Vec<(String, FiniteSet)> = Vec::new();
    let mut bounded = false;
    for (name, ty) in &prog.vars {
        let c = type_carrier(m, prog, ty)?;
        bounded |= !c.complete;
        domains.push((name.clone(), c.set));
    }
    let mut env: BTreeMap<String, Value> = BTreeMap::new();
    let mut checked = 0u64;
    let mut witness = None;
    let sizes: Vec<usize> = domains.iter().map(|(_, s)| s.len()).collect();
    'outer: for tuple in crate::value::index_tuples_mixed(&sizes) {
        for ((name, dom), &i) in domains.iter().zip(&tuple) {
            env.insert(name.clone(), dom.get(i).clone());
        }
        checked += 1;
        let l = eval(m, prog, left, &env)?;
        let r = eval(m, prog, right, &env)?;
        if l != r {
            witness = Some(EquivWitness { env: env.clone(), left: l, right: r });
            break 'outer;
        }
    }
    Ok(EquivReport {
        monad: m.name.clone(),
        ty: lt.to_string(),
        equal: witness.is_none(),
        checked,
        bounded_fragment: bounded,
        witness,
    })
}

/// The same program with each base set cut down to a prefix of its atoms.
/// Unmentioned sets keep their declared size.
pub fn truncate_sets(prog: &Program, sizes: &BTreeMap<String, usize>) -> Program {
    let mut out = prog.clone();
    for (name, set) in &mut out.sets {
        if let Some(&n) = sizes.get(name) {
            *set = set.iter().take(n).cloned().collect();
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivSweep {
    pub monad: String,
    pub ty: String,
    pub size_bound: usize,
    pub equal: bool,
    /// Environments compared, summed over all set-size tuples.
    pub checked: u64,
    pub size_tuples: u64,
    pub bounded_fragment: bool,
    /// Set sizes plus the environment of the first disagreement.
    pub witness: Option<(BTreeMap<String, usize>, EquivWitness)>,
}

/// Run [`equiv`] at every assignment of base-set sizes from 1 up to
/// `size_bound` (capped by the declared sizes), interpreting each set as a
/// prefix of its declared atoms. Sizes that would orphan an atom literal or a
/// function table are skipped: programs with function symbols are checked at
/// declared sizes only, since tables pin their domains.
pub fn equiv_over_sizes(
    m: &FiniteMonad,
    prog: &Program,
    left: &TTerm,
    right: &TTerm,
    size_bound: usize,
) -> Result<EquivSweep, TypeError> {
    let lt = left.ty();
    let rt = right.ty();
    if lt != rt {
        return Err(terr(
            "equiv-type-mismatch",
            format!("left has type {lt}, right has type {rt}"),
        ));
    }
    let mut floor: BTreeMap<String, usize> = BTreeMap::new();
    left.literal_floor(&mut floor, prog);
    right.literal_floor(&mut floor, prog);
    let names: Vec<&String> = prog.sets.keys().collect();
    let ranges: Vec<Vec<usize>> = names
        .iter()
        .map(|n| {
            let declared = prog.sets[*n].len();
            if !prog.funs.is_empty() {
                return vec![declared];
            }
            let lo = floor.get(*n).copied().unwrap_or(1).max(1);
            (lo..=declared.min(size_bound).max(lo)).collect()
        })
        .collect();
    let radii: Vec<usize> = ranges.iter().map(|r| r.len()).collect();
    let mut sweep = EquivSweep {
        monad: m.name.clone(),
        ty: lt.to_string(),
        size_bound,
        equal: true,
        checked: 0,
        size_tuples: 0,
        bounded_fragment: false,
        witness: None,
    };
    for pick in crate::value::index_tuples_mixed(&radii) {
        let sizes: BTreeMap<String, usize> = pick
            .iter()
            .enumerate()
            .map(|(j, &i)| (names[j].clone(), ranges[j][i]))
            .collect();
        let cut = truncate_sets(prog, &sizes);
        let rep = equiv(m, &cut, left, right)?;
        sweep.size_tuples += 1;
        sweep.checked += rep.checked;
        sweep.bounded_fragment |= rep.bounded_fragment;
        if let Some(w) = rep.witness {
            sweep.equal = false;
            sweep.witness = Some((sizes, w));
            break;
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::catalog::{identity, parse_monad, powerset_full, state, wellorder};
    use crate::monad::pair_exchange;
    use crate::value::parse_value;

    fn v(s: &str) -> Value {
        parse_value(s).unwrap()
    }

    const COMM: &str = "
        set A = {a0, a1};
        set B = {b0, b1};
        var p : T A;
        var q : T B;
        term left  = do x <- p; do y <- q; ret (x, y);
        term right = do y <- q; do x <- p; ret (x, y);
    ";

    #[test]
    fn parses_and_types_the_exchange_program() {
        let prog = parse_program(COMM).unwrap();
        assert_eq!(prog.vars.len(), 2);
        let typed = typecheck_all(&prog).unwrap();
        assert_eq!(typed.len(), 2);
        let want = "T (A * B)";
        assert_eq!(typed[0].1.ty().to_string(), want);
        assert_eq!(typed[1].1.ty().to_string(), want);
    }

    #[test]
    fn display_round_trips() {
        let prog = parse_program(COMM).unwrap();
        for (_, t) in &prog.terms {
            let again = {
                let mut lx = lex(&t.to_string()).unwrap();
                parse_term(&mut lx).unwrap()
            };
            assert_eq!(&again, t);
        }
    }

    #[test]
    fn typing_rules_fire_by_name() {
        let bad = |src: &str| {
            let prog = parse_program(src).unwrap();
            typecheck_all(&prog).unwrap_err().rule
        };
        assert_eq!(bad("term t = nowhere;"), "ident-unbound");
        assert_eq!(
            bad("set A = {a0}; set B = {a0}; term t = ret a0;"),
            "atom-ambiguous"
        );
        assert_eq!(bad("set A = {a0}; term t = do x <- a0; ret x;"), "bind-source");
        assert_eq!(
            bad("set A = {a0}; var p : T A; term t = do x <- p; x;"),
            "bind-body"
        );
        assert_eq!(bad("set A = {a0}; term t = fst a0;"), "fst-arg");
        assert_eq!(bad("set A = {a0}; term t = snd (ret a0);"), "snd-arg");
    }

    #[test]
    fn shadowing_resolves_to_the_inner_binder() {
        let src = "
            set A = {a0, a1};
            var p : T A;
            term t = do x <- p; do x <- ret (x, x); ret (snd x);
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        assert_eq!(typed[0].1.ty().to_string(), "T A");
    }

    #[test]
    fn evaluation_matches_hand_computation() {
        let prog = parse_program(COMM).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = powerset_full();
        let env: BTreeMap<String, Value> =
            [("p".to_string(), v("{a0,a1}")), ("q".to_string(), v("{b1}"))].into();
        let got = eval(&m, &prog, &typed[0].1, &env).unwrap();
        assert_eq!(got, v("{(a0,b1),(a1,b1)}"));
    }

    #[test]
    fn bind_on_nested_computation_is_join() {
        let src = "
            set A = {a0, a1};
            var pp : T (T A);
            term flatten = do x <- pp; x;
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = powerset_full();
        let env: BTreeMap<String, Value> = [("pp".to_string(), v("{{a0},{a0,a1}}"))].into();
        let got = eval(&m, &prog, &typed[0].1, &env).unwrap();
        assert_eq!(got, v("{a0,a1}"));
        // agrees with derived multiplication
        let x = FiniteSet::atoms("a", 2);
        assert_eq!(got, m.mu(&x, &v("{{a0},{a0,a1}}")));
    }

    #[test]
    fn right_unit_law_holds_across_monads() {
        let src = "
            set A = {a0, a1};
            var p : T A;
            term bound = do x <- p; ret x;
            term plain = p;
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        for spec in ["identity", "powerset:full", "wellorder", "state:S=2", "list:cap=3"] {
            let m = parse_monad(spec).unwrap();
            let rep = equiv(&m, &prog, &typed[0].1, &typed[1].1).unwrap();
            assert!(rep.equal, "{spec}: {:?}", rep.witness);
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn exchange_fails_for_state_with_witness() {
        let prog = parse_program(COMM).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = state(2);
        let rep = equiv(&m, &prog, &typed[0].1, &typed[1].1).unwrap();
        assert!(!rep.equal);
        let w = rep.witness.unwrap();
        // the witness replays
        let got_l = eval(&m, &prog, &typed[0].1, &w.env).unwrap();
        let got_r = eval(&m, &prog, &typed[1].1, &w.env).unwrap();
        assert_eq!((got_l, got_r), (w.left.clone(), w.right.clone()));
        assert_ne!(w.left, w.right);
    }

    #[test]
    fn exchange_agrees_with_the_monad_level_check() {
        let prog = parse_program(COMM).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = wellorder();
        let a = FiniteSet::atoms("a", 2);
        let b = FiniteSet::atoms("b", 2);
        for p in m.carrier(&a).set.iter() {
            for q in m.carrier(&b).set.iter() {
                let env: BTreeMap<String, Value> =
                    [("p".to_string(), p.clone()), ("q".to_string(), q.clone())].into();
                let l = eval(&m, &prog, &typed[0].1, &env).unwrap();
                let r = eval(&m, &prog, &typed[1].1, &env).unwrap();
                let (el, er) = pair_exchange(&m, &a, p, &b, q);
                assert_eq!((l, r), (el, er));
            }
        }
    }

    #[test]
    fn equiv_rejects_type_mismatches() {
        let src = "
            set A = {a0};
            var p : T A;
            term one = p;
            term two = ret (p);
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let err = equiv(&identity(), &prog, &typed[0].1, &typed[1].1).unwrap_err();
        assert_eq!(err.rule, "equiv-type-mismatch");
    }

    #[test]
    fn star_keyword_and_symbol_coincide() {
        let prog = parse_program("term a = ret star; term b = ret *;").unwrap();
        assert_eq!(prog.terms[0].1, prog.terms[1].1);
        let err = parse_program("term t = do x <- star; ret x;")
            .map(|p| typecheck_all(&p).unwrap_err())
            .unwrap();
        assert_eq!(err.rule, "bind-source");
        assert!(err.msg.contains("got 1"), "{}", err.msg);
    }

    #[test]
    fn function_symbols_apply_pointwise() {
        let src = "
            set A = {a0, a1};
            fun not : A -> A = { a0 : a1, a1 : a0 };
            var p : T A;
            term t = do x <- p; ret (not(x));
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = powerset_full();
        validate_signature(&m, &prog).unwrap();
        let env: BTreeMap<String, Value> = [("p".to_string(), v("{a0}"))].into();
        assert_eq!(eval(&m, &prog, &typed[0].1, &env).unwrap(), v("{a1}"));
    }

    #[test]
    fn signature_validation_catches_bad_tables() {
        let cases = [
            ("fun f : A -> A = { a0 : a0 };", "fun-table-missing"),
            ("fun f : A -> A = { a0 : a0, a1 : b9 };", "fun-table-value"),
            ("fun f : A -> A = { a0 : a0, a1 : a1, b9 : a0 };", "fun-table-key"),
        ];
        for (decl, rule) in cases {
            let src = format!("set A = {{a0, a1}};\n{decl}");
            let prog = parse_program(&src).unwrap();
            let err = validate_signature(&identity(), &prog).unwrap_err();
            assert_eq!(err.rule, rule, "{decl}");
        }
    }

    #[test]
    fn apply_rules_fire_by_name() {
        let bad = |src: &str| {
            let prog = parse_program(src).unwrap();
            typecheck_all(&prog).unwrap_err().rule
        };
        assert_eq!(bad("set A = {a0}; term t = g(a0);"), "apply-unknown");
        assert_eq!(
            bad("set A = {a0}; fun f : A -> A = { a0 : a0 }; term t = f(ret a0);"),
            "apply-arg"
        );
    }

    #[test]
    fn size_sweep_covers_prefixes() {
        let src = "
            set A = {a0, a1};
            var p : T A;
            term bound = do x <- p; ret x;
            term plain = p;
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = powerset_full();
        let sweep = equiv_over_sizes(&m, &prog, &typed[0].1, &typed[1].1, 2).unwrap();
        assert!(sweep.equal);
        assert_eq!(sweep.size_tuples, 2); // |A| = 1 and 2
        assert_eq!(sweep.checked, 2 + 4);
    }

    #[test]
    fn size_sweep_witness_pins_the_set_sizes() {
        let prog = parse_program(COMM).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        let m = state(2);
        let sweep = equiv_over_sizes(&m, &prog, &typed[0].1, &typed[1].1, 2).unwrap();
        assert!(!sweep.equal);
        let (sizes, w) = sweep.witness.unwrap();
        let cut = truncate_sets(&prog, &sizes);
        let l = eval(&m, &cut, &typed[0].1, &w.env).unwrap();
        let r = eval(&m, &cut, &typed[1].1, &w.env).unwrap();
        assert_eq!((l, r), (w.left, w.right));
    }

    #[test]
    fn associativity_law_holds_across_monads() {
        let src = "
            set A = {a0, a1};
            set B = {b0, b1};
            set C = {c0, c1};
            var p : T A;
            var q : T B;
            var r : T C;
            term nested = do x <- (do y <- p; q); r;
            term flat   = do y <- p; do x <- q; r;
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        for spec in ["identity", "powerset:full", "state:S=2", "wellorder", "list:cap=2"] {
            let m = parse_monad(spec).unwrap();
            let rep = equiv(&m, &prog, &typed[0].1, &typed[1].1).unwrap();
            assert!(rep.equal, "{spec}: {:?}", rep.witness);
        }
    }

    #[test]
    fn unit_and_products_evaluate() {
        let src = "
            set A = {a0};
            term t = ret ((*, a0), fst (a0, *));
        ";
        let prog = parse_program(src).unwrap();
        let typed = typecheck_all(&prog).unwrap();
        assert_eq!(typed[0].1.ty().to_string(), "T ((1 * A) * A)");
        let got = eval(&identity(), &prog, &typed[0].1, &BTreeMap::new()).unwrap();
        assert_eq!(got, v("((*,a0),a0)"));
    }
}
