//! Concrete elements of finite sets and the structured values monads build
//! from them.
//!
//! Everything a monad can produce here is a [`Value`]: atoms for carrier
//! elements, sets, sequences, multisets, finite function tables, and tree
//! nodes for free-monad terms. `Value` has a total order (derived), so
//! collections of values have a canonical enumeration order and reports are
//! deterministic. Every value prints to a literal that [`parse_value`] reads
//! back; witnesses in failure reports round-trip through this syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One inhabitant of a finite set, or a structured value over such.
///
/// Literal syntax, as printed and parsed:
///
/// ```text
/// bot            distinguished bottom
/// *              unit
/// a0             atom (identifier)
/// (a0,a1)        pair
/// [a0,a1]        sequence
/// {a0,a1}        set
/// {|a0:2,a1:1|}  multiset with multiplicities
/// {a0->a1}       function table ({->} when empty)
/// leaf(a0)       free-term leaf
/// n1(leaf(a0),leaf(a1))   free-term node, operation index 1
/// ```
///
/// `bot` and `leaf` are reserved and cannot be used as atom names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bottom,
    Unit,
    Atom(String),
    Pair(Box<Value>, Box<Value>),
    Seq(Vec<Value>),
    Set(BTreeSet<Value>),
    Multi(BTreeMap<Value, u32>),
    Table(BTreeMap<Value, Value>),
    Leaf(Box<Value>),
    Node(usize, Vec<Value>),
}

impl Value {
    pub fn atom(name: impl Into<String>) -> Value {
        Value::Atom(name.into())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn set(items: impl IntoIterator<Item = Value>) -> Value {
        Value::Set(items.into_iter().collect())
    }

    pub fn leaf(v: Value) -> Value {
        Value::Leaf(Box::new(v))
    }

    /// Canonical literal form; identical to the `Display` output.
    pub fn literal(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, items: &mut dyn Iterator<Item = String>) -> fmt::Result {
            for (i, s) in items.enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            Ok(())
        }
        match self {
            Value::Bottom => write!(f, "bot"),
            Value::Unit => write!(f, "*"),
            Value::Atom(s) => write!(f, "{s}"),
            Value::Pair(a, b) => write!(f, "({a},{b})"),
            Value::Seq(xs) => {
                write!(f, "[")?;
                join(f, &mut xs.iter().map(|v| v.to_string()))?;
                write!(f, "]")
            }
            Value::Set(xs) => {
                write!(f, "{{")?;
                join(f, &mut xs.iter().map(|v| v.to_string()))?;
                write!(f, "}}")
            }
            Value::Multi(m) => {
                write!(f, "{{|")?;
                join(f, &mut m.iter().map(|(v, k)| format!("{v}:{k}")))?;
                write!(f, "|}}")
            }
            Value::Table(m) => {
                if m.is_empty() {
                    return write!(f, "{{->}}");
                }
                write!(f, "{{")?;
                join(f, &mut m.iter().map(|(k, v)| format!("{k}->{v}")))?;
                write!(f, "}}")
            }
            Value::Leaf(v) => write!(f, "leaf({v})"),
            Value::Node(op, args) => {
                write!(f, "n{op}(")?;
                join(f, &mut args.iter().map(|v| v.to_string()))?;
                write!(f, ")")
            }
        }
    }
}

/// Values cross serialization boundaries as their literal strings, so JSON
/// reports and witnesses stay readable and map keys stay legal.
impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Value, D::Error> {
        let text = String::deserialize(d)?;
        parse_value(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("value syntax error at byte {pos}: {msg}")]
pub struct ValueParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse the literal syntax documented on [`Value`]. Whitespace is allowed
/// between tokens. The full input must be consumed.
pub fn parse_value(input: &str) -> Result<Value, ValueParseError> {
    let mut p = Cursor { src: input.as_bytes(), pos: 0 };
    let v = p.value()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> ValueParseError {
        ValueParseError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), ValueParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", b as char)))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ValueParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u32, ValueParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn comma_list(&mut self, terminator: u8) -> Result<Vec<Value>, ValueParseError> {
        let mut items = Vec::new();
        if self.peek() == Some(terminator) {
            return Ok(items);
        }
        loop {
            items.push(self.value()?);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(t) if t == terminator => break,
                _ => return Err(self.err(format!("expected ',' or '{}'", terminator as char))),
            }
        }
        Ok(items)
    }

    fn value(&mut self) -> Result<Value, ValueParseError> {
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(Value::Unit)
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.value()?;
                self.eat(b',')?;
                let b = self.value()?;
                self.eat(b')')?;
                Ok(Value::pair(a, b))
            }
            Some(b'[') => {
                self.pos += 1;
                let items = self.comma_list(b']')?;
                self.eat(b']')?;
                Ok(Value::Seq(items))
            }
            Some(b'{') => self.braced(),
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => self.named(),
            _ => Err(self.err("expected a value")),
        }
    }

    // {..} is a set, a multiset {|..|}, or a table {k->v,..} / {->}.
    fn braced(&mut self) -> Result<Value, ValueParseError> {
        self.eat(b'{')?;
        if self.eat_str("|") {
            let mut m = BTreeMap::new();
            if self.peek() != Some(b'|') {
                loop {
                    let v = self.value()?;
                    self.eat(b':')?;
                    let k = self.number()?;
                    if k > 0 && m.insert(v, k).is_some() {
                        return Err(self.err("duplicate multiset entry"));
                    }
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b'|') => break,
                        _ => return Err(self.err("expected ',' or '|'")),
                    }
                }
            }
            self.eat(b'|')?;
            self.eat(b'}')?;
            return Ok(Value::Multi(m));
        }
        if self.eat_str("->") {
            self.eat(b'}')?;
            return Ok(Value::Table(BTreeMap::new()));
        }
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(Value::Set(BTreeSet::new()));
        }
        let first = self.value()?;
        if self.eat_str("->") {
            let mut m = BTreeMap::new();
            let v = self.value()?;
            m.insert(first, v);
            while self.peek() == Some(b',') {
                self.pos += 1;
                let k = self.value()?;
                self.eat_str("->")
                    .then_some(())
                    .ok_or_else(|| self.err("expected '->'"))?;
                let v = self.value()?;
                if m.insert(k, v).is_some() {
                    return Err(self.err("duplicate table key"));
                }
            }
            self.eat(b'}')?;
            return Ok(Value::Table(m));
        }
        let mut s = BTreeSet::new();
        s.insert(first);
        while self.peek() == Some(b',') {
            self.pos += 1;
            s.insert(self.value()?);
        }
        self.eat(b'}')?;
        Ok(Value::Set(s))
    }

    fn named(&mut self) -> Result<Value, ValueParseError> {
        let name = self.ident()?;
        if name == "bot" {
            return Ok(Value::Bottom);
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            if name == "leaf" {
                let v = self.value()?;
                self.eat(b')')?;
                return Ok(Value::leaf(v));
            }
            if let Some(digits) = name.strip_prefix('n') {
                if let Ok(op) = digits.parse::<usize>() {
                    let args = self.comma_list(b')')?;
                    self.eat(b')')?;
                    return Ok(Value::Node(op, args));
                }
            }
            return Err(self.err(format!("unknown constructor '{name}'")));
        }
        if name == "leaf" {
            return Err(self.err("'leaf' is reserved"));
        }
        Ok(Value::Atom(name))
    }
}

/// A finite set of values, kept sorted and duplicate-free. Iteration order is
/// the canonical `Value` order, so any construction quantifying over a
/// `FiniteSet` is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiniteSet {
    elems: Vec<Value>,
}

impl FiniteSet {
    pub fn new(mut elems: Vec<Value>) -> FiniteSet {
        elems.sort();
        elems.dedup();
        FiniteSet { elems }
    }

    pub fn empty() -> FiniteSet {
        FiniteSet { elems: Vec::new() }
    }

    /// `{prefix0, prefix1, ..}`: the canonical n-element set of atoms.
    pub fn atoms(prefix: &str, n: usize) -> FiniteSet {
        FiniteSet { elems: (0..n).map(|i| Value::atom(format!("{prefix}{i}"))).collect() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Value> {
        self.elems.iter()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.elems.binary_search(v).is_ok()
    }

    pub fn index_of(&self, v: &Value) -> Option<usize> {
        self.elems.binary_search(v).ok()
    }

    pub fn get(&self, i: usize) -> &Value {
        &self.elems[i]
    }

    pub fn as_slice(&self) -> &[Value] {
        &self.elems
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        let mut v = self.elems.clone();
        v.extend(other.elems.iter().cloned());
        FiniteSet::new(v)
    }

    pub fn insert(&mut self, v: Value) {
        if let Err(i) = self.elems.binary_search(&v) {
            self.elems.insert(i, v);
        }
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Value> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> FiniteSet {
        FiniteSet::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Value;
    type IntoIter = std::slice::Iter<'a, Value>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// A function between finite sets, as an explicit graph. Total on its key
/// set; applying it elsewhere is a caller bug and panics.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FnTable {
    map: BTreeMap<Value, Value>,
}

impl FnTable {
    pub fn new(map: BTreeMap<Value, Value>) -> FnTable {
        FnTable { map }
    }

    pub fn from_fn(dom: &FiniteSet, f: impl Fn(&Value) -> Value) -> FnTable {
        FnTable { map: dom.iter().map(|x| (x.clone(), f(x))).collect() }
    }

    pub fn apply(&self, x: &Value) -> &Value {
        self.map
            .get(x)
            .unwrap_or_else(|| panic!("function table has no entry for {x}"))
    }

    pub fn get(&self, x: &Value) -> Option<&Value> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Value, &Value)> {
        self.map.iter()
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.map.values()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_value(&self) -> Value {
        Value::Table(self.map.clone())
    }

    pub fn from_value(v: &Value) -> Option<FnTable> {
        match v {
            Value::Table(m) => Some(FnTable { map: m.clone() }),
            _ => None,
        }
    }
}

impl fmt::Display for FnTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_value())
    }
}

/// All functions `dom -> cod`, enumerated in odometer order over the sorted
/// domain and codomain. `cod^|dom|` tables; check [`count_functions`] first
/// when the sizes are not obviously small.
pub fn all_functions(dom: &FiniteSet, cod: &[Value]) -> FunctionIter {
    FunctionIter {
        dom: dom.as_slice().to_vec(),
        cod: cod.to_vec(),
        odometer: vec![0; dom.len()],
        done: cod.is_empty() && !dom.is_empty(),
    }
}

/// `|cod|^|dom|`, or `None` on overflow.
pub fn count_functions(dom_size: usize, cod_size: usize) -> Option<u128> {
    let c = cod_size as u128;
    let mut acc: u128 = 1;
    for _ in 0..dom_size {
        acc = acc.checked_mul(c)?;
    }
    Some(acc)
}

pub struct FunctionIter {
    dom: Vec<Value>,
    cod: Vec<Value>,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for FunctionIter {
    type Item = FnTable;

    fn next(&mut self) -> Option<FnTable> {
        if self.done {
            return None;
        }
        let table = FnTable {
            map: self
                .dom
                .iter()
                .zip(&self.odometer)
                .map(|(x, &i)| (x.clone(), self.cod[i].clone()))
                .collect(),
        };
        // Advance; empty domain yields exactly the empty table.
        self.done = true;
        for slot in self.odometer.iter_mut().rev() {
            *slot += 1;
            if *slot < self.cod.len() {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(table)
    }
}

/// Odometer over index tuples `[0,n)^k`, lexicographic. The workhorse for
/// quantifying over argument tuples of an operation table.
pub fn index_tuples(n: usize, k: usize) -> IndexTupleIter {
    IndexTupleIter { n, tuple: vec![0; k], done: n == 0 && k > 0 }
}

pub struct IndexTupleIter {
    n: usize,
    tuple: Vec<usize>,
    done: bool,
}

impl Iterator for IndexTupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.tuple.clone();
        self.done = true;
        for slot in self.tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < self.n {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(out)
    }
}

/// Mixed-radix odometer: tuples with `tuple[i] in [0, radii[i])`,
/// lexicographic. Empty iff some radix is zero.
pub fn index_tuples_mixed(radii: &[usize]) -> MixedTupleIter {
    MixedTupleIter {
        radii: radii.to_vec(),
        tuple: vec![0; radii.len()],
        done: radii.iter().any(|&r| r == 0),
    }
}

pub struct MixedTupleIter {
    radii: Vec<usize>,
    tuple: Vec<usize>,
    done: bool,
}

impl Iterator for MixedTupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.tuple.clone();
        self.done = true;
        for (slot, &r) in self.tuple.iter_mut().zip(&self.radii).rev() {
            *slot += 1;
            if *slot < r {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        let samples = [
            "bot",
            "*",
            "a0",
            "(a0,a1)",
            "[a0,a1,a0]",
            "[]",
            "{}",
            "{a0,a1}",
            "{|a0:2,a1:1|}",
            "{||}",
            "{->}",
            "{a0->a1,a1->a1}",
            "leaf(a0)",
            "n0(leaf(a0),n1())",
            "((a0,a1),{[a0]})",
        ];
        for s in samples {
            let v = parse_value(s).unwrap();
            assert_eq!(v.to_string(), s, "canonical form of {s}");
            assert_eq!(parse_value(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn parse_tolerates_whitespace() {
        assert_eq!(
            parse_value(" { a0 , a1 } ").unwrap(),
            parse_value("{a0,a1}").unwrap()
        );
        assert_eq!(
            parse_value("{ a0 -> a1 }").unwrap(),
            parse_value("{a0->a1}").unwrap()
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_value("").is_err());
        assert!(parse_value("(a0,)").is_err());
        assert!(parse_value("{a0->}").is_err());
        assert!(parse_value("a0 b1").is_err());
        assert!(parse_value("leaf").is_err());
        assert!(parse_value("frob(a0)").is_err());
    }

    #[test]
    fn sets_normalise() {
        assert_eq!(
            parse_value("{a1,a0,a1}").unwrap().to_string(),
            "{a0,a1}"
        );
    }

    #[test]
    fn finite_set_order_and_lookup() {
        let s = FiniteSet::new(vec![Value::atom("b"), Value::atom("a"), Value::atom("b")]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.index_of(&Value::atom("b")), Some(1));
        assert!(s.contains(&Value::atom("a")));
        assert_eq!(s.to_string(), "{a,b}");
    }

    #[test]
    fn function_enumeration_counts() {
        let dom = FiniteSet::atoms("x", 2);
        let cod: Vec<Value> = FiniteSet::atoms("y", 3).as_slice().to_vec();
        assert_eq!(all_functions(&dom, &cod).count(), 9);
        assert_eq!(count_functions(2, 3), Some(9));
        // Empty domain: exactly one (empty) function, even into an empty codomain.
        assert_eq!(all_functions(&FiniteSet::empty(), &[]).count(), 1);
        // Nonempty domain into empty codomain: none.
        assert_eq!(all_functions(&dom, &[]).count(), 0);
    }

    #[test]
    fn index_tuple_order() {
        let all: Vec<_> = index_tuples(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(index_tuples(3, 0).count(), 1);
        assert_eq!(index_tuples(0, 2).count(), 0);
    }
}
