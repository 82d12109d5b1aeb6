//! The builtin monads, their presentations, and the stock morphisms.
//!
//! Every constructor here is referable by a spec string (`state:S=2`,
//! `powerset:nonempty`, `free:I=2:depth=2`, ...); [`parse_monad`] turns the
//! string into the monad and the monad's `name` is the canonical string, so
//! names round-trip through reports.

use std::collections::{BTreeMap, BTreeSet};

use super::{Carrier, FiniteMonad, Kleisli, LawOptions, MonadMorphism, PresentedMonad};
use crate::theory;
use crate::value::{all_functions, FiniteSet, FnTable, Value};

// Carrier enumerations materialise the whole of TX; sizes beyond this are a
// caller bug, not a computation to attempt.
const MAX_CARRIER: usize = 2_000_000;

fn assert_carrier(n: u128, monad: &str) -> usize {
    assert!(
        n <= MAX_CARRIER as u128,
        "{monad}: carrier of {n} values is past the enumeration guard"
    );
    n as usize
}

pub fn identity() -> FiniteMonad {
    FiniteMonad::new(
        "identity",
        |x| Carrier { set: x.clone(), complete: true },
        |_, v| v.clone(),
        |f, m| f.apply(m).clone(),
    )
}

/// TX = 1 for every X.
pub fn terminal() -> FiniteMonad {
    FiniteMonad::new(
        "terminal",
        |_| Carrier { set: [Value::Unit].into_iter().collect(), complete: true },
        |_, _| Value::Unit,
        |_, _| Value::Unit,
    )
}

/// Global state with store `{s0..}`: TX = (S x X)^S as tables.
pub fn state(s: usize) -> FiniteMonad {
    let store = FiniteSet::atoms("s", s);
    let st = store.clone();
    let apply = move |x: &FiniteSet| {
        let pairs: Vec<Value> = st
            .iter()
            .flat_map(|sv| x.iter().map(move |xv| Value::pair(sv.clone(), xv.clone())))
            .collect();
        let n = crate::value::count_functions(st.len(), pairs.len()).unwrap_or(u128::MAX);
        assert_carrier(n, "state");
        Carrier {
            set: all_functions(&st, &pairs).map(|t| t.as_value()).collect(),
            complete: true,
        }
    };
    let st = store.clone();
    let unit = move |_: &FiniteSet, v: &Value| {
        FnTable::from_fn(&st, |sv| Value::pair(sv.clone(), v.clone())).as_value()
    };
    let st = store;
    let ext = move |f: &Kleisli, m: &Value| {
        let mt = FnTable::from_value(m).expect("state value is a table");
        FnTable::from_fn(&st, |sv| {
            let Value::Pair(s1, xv) = mt.apply(sv) else {
                panic!("state table entry is not a pair")
            };
            let ft = FnTable::from_value(f.apply(xv)).expect("state value is a table");
            ft.apply(s1).clone()
        })
        .as_value()
    };
    FiniteMonad::new(format!("state:S={s}"), apply, unit, ext)
}

fn subsets(x: &FiniteSet) -> Vec<Value> {
    assert!(x.len() < 21, "powerset carrier guard");
    (0..(1u32 << x.len()))
        .map(|mask| {
            let s: BTreeSet<Value> = x
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| v.clone())
                .collect();
            Value::Set(s)
        })
        .collect()
}

fn powerset_ext(f: &Kleisli, m: &Value) -> Value {
    let Value::Set(items) = m else { panic!("powerset value is not a set") };
    let mut out = BTreeSet::new();
    for v in items {
        let Value::Set(fv) = f.apply(v) else { panic!("powerset value is not a set") };
        out.extend(fv.iter().cloned());
    }
    Value::Set(out)
}

pub fn powerset_full() -> FiniteMonad {
    FiniteMonad::new(
        "powerset:full",
        |x| Carrier { set: subsets(x).into_iter().collect(), complete: true },
        |_, v| Value::Set([v.clone()].into()),
        powerset_ext,
    )
}

pub fn powerset_nonempty() -> FiniteMonad {
    FiniteMonad::new(
        "powerset:nonempty",
        |x| {
            Carrier {
                set: subsets(x)
                    .into_iter()
                    .filter(|s| !matches!(s, Value::Set(m) if m.is_empty()))
                    .collect(),
                complete: true,
            }
        },
        |_, v| Value::Set([v.clone()].into()),
        powerset_ext,
    )
}

fn words(x: &FiniteSet, cap: usize) -> Vec<Value> {
    let mut out = Vec::new();
    for len in 0..=cap {
        let n = crate::value::count_functions(len, x.len()).unwrap_or(u128::MAX);
        assert_carrier(n, "word enumeration");
        for tuple in crate::value::index_tuples(x.len(), len) {
            out.push(Value::Seq(tuple.iter().map(|&i| x.get(i).clone()).collect()));
        }
    }
    out
}

/// Lists up to length `cap`; the fragment is complete only over the empty
/// set. Extension concatenates and is total on all lists.
pub fn list(cap: usize) -> FiniteMonad {
    FiniteMonad::new(
        format!("list:cap={cap}"),
        move |x| Carrier { set: words(x, cap).into_iter().collect(), complete: x.is_empty() },
        |_, v| Value::Seq(vec![v.clone()]),
        |f, m| {
            let Value::Seq(items) = m else { panic!("list value is not a sequence") };
            let mut out = Vec::new();
            for v in items {
                let Value::Seq(fv) = f.apply(v) else { panic!("list value is not a sequence") };
                out.extend(fv.iter().cloned());
            }
            Value::Seq(out)
        },
    )
}

fn multisets(elems: &[Value], cap: u32) -> Vec<Value> {
    fn go(elems: &[Value], cap: u32, acc: &mut BTreeMap<Value, u32>, out: &mut Vec<Value>) {
        match elems {
            [] => out.push(Value::Multi(acc.clone())),
            [first, rest @ ..] => {
                for k in 0..=cap {
                    if k > 0 {
                        acc.insert(first.clone(), k);
                    }
                    go(rest, cap - k, acc, out);
                    acc.remove(first);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(elems, cap, &mut BTreeMap::new(), &mut out);
    out
}

/// Multisets of total multiplicity up to `cap`.
pub fn multiset(cap: u32) -> FiniteMonad {
    FiniteMonad::new(
        format!("multiset:cap={cap}"),
        move |x| {
            Carrier { set: multisets(x.as_slice(), cap).into_iter().collect(), complete: x.is_empty() }
        },
        |_, v| Value::Multi([(v.clone(), 1)].into()),
        |f, m| {
            let Value::Multi(items) = m else { panic!("multiset value is not a multiset") };
            let mut out: BTreeMap<Value, u32> = BTreeMap::new();
            for (v, k) in items {
                let Value::Multi(fv) = f.apply(v) else {
                    panic!("multiset value is not a multiset")
                };
                for (w, j) in fv {
                    *out.entry(w.clone()).or_insert(0) += j * k;
                }
            }
            Value::Multi(out)
        },
    )
}

/// Continuations with result set `{r0..}`: TX = R^(R^X), values as tables
/// keyed by tables.
pub fn cont(r: usize) -> FiniteMonad {
    let rset = FiniteSet::atoms("r", r);
    let rs = rset.clone();
    let apply = move |x: &FiniteSet| {
        let keys: FiniteSet = all_functions(x, rs.as_slice()).map(|t| t.as_value()).collect();
        let n = crate::value::count_functions(keys.len(), rs.len()).unwrap_or(u128::MAX);
        assert_carrier(n, "cont");
        Carrier {
            set: all_functions(&keys, rs.as_slice()).map(|t| t.as_value()).collect(),
            complete: true,
        }
    };
    let rs = rset.clone();
    let unit = move |x: &FiniteSet, v: &Value| {
        let keys: FiniteSet = all_functions(x, rs.as_slice()).map(|t| t.as_value()).collect();
        FnTable::from_fn(&keys, |k| {
            FnTable::from_value(k).expect("cont key is a table").apply(v).clone()
        })
        .as_value()
    };
    let rs = rset;
    let ext = move |f: &Kleisli, m: &Value| {
        let mt = FnTable::from_value(m).expect("cont value is a table");
        let keys: FiniteSet =
            all_functions(&f.target, rs.as_slice()).map(|t| t.as_value()).collect();
        FnTable::from_fn(&keys, |k| {
            // k' : Y -> R becomes the key X -> R sending x to f(x)(k').
            let kx = Value::Table(
                f.map
                    .iter()
                    .map(|(xv, fx)| {
                        let fxt = FnTable::from_value(fx).expect("cont value is a table");
                        (xv.clone(), fxt.apply(k).clone())
                    })
                    .collect(),
            );
            mt.apply(&kx).clone()
        })
        .as_value()
    };
    FiniteMonad::new(format!("cont:R={r}"), apply, unit, ext)
}

fn injective_seqs(x: &FiniteSet) -> Vec<Value> {
    fn go(pool: &[Value], current: &mut Vec<Value>, out: &mut Vec<Value>) {
        for v in pool {
            if current.contains(v) {
                continue;
            }
            current.push(v.clone());
            out.push(Value::Seq(current.clone()));
            go(pool, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(x.as_slice(), &mut Vec::new(), &mut out);
    out
}

/// TX = duplicate-free nonempty sequences plus bottom; concatenation that
/// would repeat an element, or touch bottom, collapses to bottom. The whole
/// carrier is finite, so the fragment is complete.
pub fn wellorder() -> FiniteMonad {
    FiniteMonad::new(
        "wellorder",
        |x| {
            let mut set: FiniteSet = injective_seqs(x).into_iter().collect();
            set.insert(Value::Bottom);
            Carrier { set, complete: true }
        },
        |_, v| Value::Seq(vec![v.clone()]),
        |f, m| {
            let Value::Seq(items) = m else { return Value::Bottom };
            let mut out: Vec<Value> = Vec::new();
            for v in items {
                let Value::Seq(fv) = f.apply(v) else { return Value::Bottom };
                out.extend(fv.iter().cloned());
            }
            let distinct: BTreeSet<&Value> = out.iter().collect();
            if distinct.len() != out.len() {
                return Value::Bottom;
            }
            Value::Seq(out)
        },
    )
}

fn trees_next(i: usize, layer: &BTreeSet<Value>) -> BTreeSet<Value> {
    let mut next = layer.clone();
    let pool: Vec<Value> = layer.iter().cloned().collect();
    for tuple in crate::value::index_tuples(pool.len(), i) {
        next.insert(Value::Node(0, tuple.iter().map(|&j| pool[j].clone()).collect()));
    }
    next
}

/// Free monad on one `i`-ary operation, carriers cut at tree height `depth`.
pub fn free_signature(i: usize, depth: usize) -> FiniteMonad {
    let apply = move |x: &FiniteSet| {
        let mut layer: BTreeSet<Value> = x.iter().map(|v| Value::Leaf(Box::new(v.clone()))).collect();
        if i == 0 {
            layer.insert(Value::Node(0, vec![]));
        }
        for _ in 0..depth {
            layer = trees_next(i, &layer);
            assert_carrier(layer.len() as u128, "free");
        }
        let complete = trees_next(i, &layer).len() == layer.len();
        Carrier { set: layer.into_iter().collect(), complete }
    };
    FiniteMonad::new(
        format!("free:I={i}:depth={depth}"),
        apply,
        |_, v| Value::Leaf(Box::new(v.clone())),
        |f, m| graft(f, m),
    )
}

/// Substitute at the leaves, keeping node structure.
fn graft(f: &Kleisli, m: &Value) -> Value {
    match m {
        Value::Leaf(v) => f.apply(v).clone(),
        Value::Node(tag, children) => {
            Value::Node(*tag, children.iter().map(|c| graft(f, c)).collect())
        }
        other => panic!("tree value expected, got {other}"),
    }
}

/// Free monad on two binary operations `n0`, `n1`.
pub fn sigma22(depth: usize) -> FiniteMonad {
    let apply = move |x: &FiniteSet| {
        let mut layer: BTreeSet<Value> = x.iter().map(|v| Value::Leaf(Box::new(v.clone()))).collect();
        for _ in 0..depth {
            let pool: Vec<Value> = layer.iter().cloned().collect();
            let mut next = layer.clone();
            for tag in 0..2 {
                for tuple in crate::value::index_tuples(pool.len(), 2) {
                    next.insert(Value::Node(tag, tuple.iter().map(|&j| pool[j].clone()).collect()));
                }
            }
            assert_carrier(next.len() as u128, "sigma22");
            layer = next;
        }
        Carrier { set: layer.into_iter().collect(), complete: x.is_empty() }
    };
    FiniteMonad::new(
        format!("sigma22:depth={depth}"),
        apply,
        |_, v| Value::Leaf(Box::new(v.clone())),
        |f, m| graft(f, m),
    )
}

/// Writer over the free monoid on `{o0..}`, words cut at `cap`:
/// TX = O^{<=cap} x X.
pub fn output(o: usize, cap: usize) -> FiniteMonad {
    let oset = FiniteSet::atoms("o", o);
    let os = oset.clone();
    let apply = move |x: &FiniteSet| {
        let mut set = Vec::new();
        for w in words(&os, cap) {
            for xv in x.iter() {
                set.push(Value::pair(w.clone(), xv.clone()));
            }
        }
        Carrier { set: set.into_iter().collect(), complete: os.is_empty() || x.is_empty() }
    };
    FiniteMonad::new(
        format!("output:O={o}:cap={cap}"),
        apply,
        |_, v| Value::pair(Value::Seq(vec![]), v.clone()),
        |f, m| {
            let Value::Pair(w, xv) = m else { panic!("output value is not a pair") };
            let Value::Pair(w2, yv) = f.apply(xv) else { panic!("output value is not a pair") };
            let (Value::Seq(a), Value::Seq(b)) = (w.as_ref(), w2.as_ref()) else {
                panic!("output word is not a sequence")
            };
            Value::pair(Value::Seq(a.iter().chain(b.iter()).cloned().collect()), (**yv).clone())
        },
    )
}

/// The exception-extended variant: T'X = T(X + E) with unit through the
/// left summand and extension leaving raised exceptions alone. Exception
/// labels `{e0..}` must stay disjoint from the carrier atoms, which all
/// stock constructions guarantee.
pub fn exception_extend(inner: FiniteMonad, labels: usize) -> FiniteMonad {
    let eset = FiniteSet::atoms("e", labels);
    let name = format!("{}:exc={labels}", inner.name);
    let m1 = inner.clone();
    let e1 = eset.clone();
    let apply = move |x: &FiniteSet| m1.carrier(&x.union(&e1));
    let m2 = inner.clone();
    let e2 = eset.clone();
    let unit = move |x: &FiniteSet, v: &Value| m2.unit(&x.union(&e2), v);
    let ext = move |f: &Kleisli, m: &Value| {
        let target = f.target.union(&eset);
        let mut map: BTreeMap<Value, Value> =
            f.map.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for e in eset.iter() {
            map.insert(e.clone(), inner.unit(&target, e));
        }
        inner.ext(&Kleisli { map: FnTable::new(map), target }, m)
    };
    FiniteMonad::new(name, apply, unit, ext)
}

// ---------------------------------------------------------------------------
// Spec strings.

/// Grammar: `head(:key=value|:tag)*`. Defaults fill in omitted parameters
/// and the resulting monad's name is the fully spelled-out string. A
/// trailing `exc=n` wraps the monad in the exception extension.
pub fn parse_monad(spec: &str) -> Result<FiniteMonad, String> {
    let mut segments: Vec<&str> = spec.split(':').collect();
    let head = segments.remove(0);
    let mut exc = None;
    if let Some(last) = segments.last() {
        if let Some(n) = last.strip_prefix("exc=") {
            exc = Some(n.parse::<usize>().map_err(|_| format!("bad exc count '{n}'"))?);
            segments.pop();
        }
    }
    let mut params: BTreeMap<&str, &str> = BTreeMap::new();
    let mut tags: Vec<&str> = Vec::new();
    for seg in &segments {
        match seg.split_once('=') {
            Some((k, v)) => {
                params.insert(k, v);
            }
            None => tags.push(seg),
        }
    }
    let num = |params: &BTreeMap<&str, &str>, key: &str, default: usize| -> Result<usize, String> {
        match params.get(key) {
            Some(v) => v.parse().map_err(|_| format!("bad value for {key}: '{v}'")),
            None => Ok(default),
        }
    };
    let no_tags = |tags: &[&str]| -> Result<(), String> {
        if tags.is_empty() {
            Ok(())
        } else {
            Err(format!("unexpected tag '{}'", tags[0]))
        }
    };
    let base = match head {
        "identity" => {
            no_tags(&tags)?;
            identity()
        }
        "terminal" => {
            no_tags(&tags)?;
            terminal()
        }
        "state" => {
            no_tags(&tags)?;
            state(num(&params, "S", 2)?)
        }
        "powerset" => match tags.as_slice() {
            [] | ["full"] => powerset_full(),
            ["nonempty"] => powerset_nonempty(),
            [t, ..] => return Err(format!("unknown powerset variant '{t}'")),
        },
        "list" => {
            no_tags(&tags)?;
            list(num(&params, "cap", 3)?)
        }
        "multiset" => {
            no_tags(&tags)?;
            multiset(num(&params, "cap", 3)? as u32)
        }
        "cont" => {
            no_tags(&tags)?;
            cont(num(&params, "R", 2)?)
        }
        "wellorder" => {
            no_tags(&tags)?;
            wellorder()
        }
        "free" => {
            no_tags(&tags)?;
            free_signature(num(&params, "I", 2)?, num(&params, "depth", 2)?)
        }
        "sigma22" => {
            no_tags(&tags)?;
            sigma22(num(&params, "depth", 2)?)
        }
        "output" => {
            no_tags(&tags)?;
            output(num(&params, "O", 2)?, num(&params, "cap", 3)?)
        }
        other => return Err(format!("unknown monad '{other}'")),
    };
    Ok(match exc {
        Some(n) => exception_extend(base, n),
        None => base,
    })
}

/// The standard law-audit roster: every builtin at carriers up to size 2,
/// the well-order monad additionally at size 3 for the unit laws, and the
/// exception extensions of the strength-relevant monads. Caps are chosen so
/// the fully exhaustive entries stay inside the default budget; the
/// depth-2 tree monads and the larger writer/state extensions deliberately
/// overflow it on their top associativity blocks and get seeded sampling
/// there, visible in the report's coverage field.
pub fn law_suite() -> Vec<(String, LawOptions)> {
    let base = LawOptions::default;
    let mut out: Vec<(String, LawOptions)> = [
        "identity",
        "terminal",
        "state:S=2",
        "powerset:full",
        "powerset:nonempty",
        "list:cap=3",
        "multiset:cap=3",
        "cont:R=2",
        "wellorder",
        "free:I=2:depth=1",
        "sigma22:depth=1",
        "output:O=2:cap=3",
        "identity:exc=1",
        "state:S=2:exc=1",
        "powerset:full:exc=1",
        "powerset:nonempty:exc=1",
        "list:cap=2:exc=1",
        "multiset:cap=2:exc=1",
        "wellorder:exc=1",
        "output:O=2:cap=1:exc=1",
    ]
    .iter()
    .map(|s| (s.to_string(), base()))
    .collect();
    out.push((
        "free:I=2:depth=2".to_string(),
        LawOptions { eval_budget: 1_000_000, ..base() },
    ));
    out.push((
        "wellorder".to_string(),
        LawOptions { max_size: 3, unit_laws_only: true, ..base() },
    ));
    out
}

// ---------------------------------------------------------------------------
// Presentations.

/// Finite joins present the full powerset: join is union, bot is empty.
pub fn presented_semilattice() -> PresentedMonad {
    PresentedMonad::new(theory::semilattice(), powerset_full(), |op, args, _| match op {
        "join" => {
            let (Value::Set(a), Value::Set(b)) = (&args[0], &args[1]) else {
                panic!("powerset value is not a set")
            };
            Value::Set(a.union(b).cloned().collect())
        }
        "bot" => Value::Set(BTreeSet::new()),
        other => panic!("semilattice has no operation '{other}'"),
    })
}

/// The monoid theory presents lists: multiplication is concatenation.
pub fn presented_monoid(cap: usize) -> PresentedMonad {
    PresentedMonad::new(theory::monoid(), list(cap), |op, args, _| match op {
        "mul" => {
            let (Value::Seq(a), Value::Seq(b)) = (&args[0], &args[1]) else {
                panic!("list value is not a sequence")
            };
            Value::Seq(a.iter().chain(b.iter()).cloned().collect())
        }
        "e" => Value::Seq(vec![]),
        other => panic!("monoid has no operation '{other}'"),
    })
}

/// Lookup/update generic effects present global state.
pub fn presented_state(v: usize) -> PresentedMonad {
    let store = FiniteSet::atoms("s", v);
    PresentedMonad::new(theory::state_theory(v), state(v), move |op, args, _| {
        if op == "lookup" {
            return FnTable::from_fn(&store, |sv| {
                let i = store.index_of(sv).unwrap();
                FnTable::from_value(&args[i]).expect("state value is a table").apply(sv).clone()
            })
            .as_value();
        }
        if let Some(i) = op.strip_prefix("update_") {
            let si = Value::atom(format!("s{i}"));
            let t = FnTable::from_value(&args[0]).expect("state value is a table");
            let at_si = t.apply(&si).clone();
            return FnTable::from_fn(&store, |_| at_si.clone()).as_value();
        }
        panic!("state theory has no operation '{op}'")
    })
}

/// The raw two-binary-op signature presents its own free monad.
pub fn presented_sigma22(depth: usize) -> PresentedMonad {
    PresentedMonad::new(theory::sigma22_free(), sigma22(depth), |op, args, _| match op {
        "u0" => Value::Node(0, args.to_vec()),
        "u1" => Value::Node(1, args.to_vec()),
        other => panic!("sigma22 has no operation '{other}'"),
    })
}

/// The width-lowered well-order theory acts on the well-order monad:
/// iota_k concatenates k arguments, collapsing on repetition or bottom.
pub fn presented_wellorder(width: usize) -> PresentedMonad {
    PresentedMonad::new(theory::well_order_lowered(width), wellorder(), |op, args, _| {
        if op == "bot" {
            return Value::Bottom;
        }
        if op.strip_prefix("iota_").is_some() {
            let mut out: Vec<Value> = Vec::new();
            for a in args {
                let Value::Seq(items) = a else { return Value::Bottom };
                out.extend(items.iter().cloned());
            }
            let distinct: BTreeSet<&Value> = out.iter().collect();
            if distinct.len() != out.len() {
                return Value::Bottom;
            }
            return Value::Seq(out);
        }
        panic!("well-order theory has no operation '{op}'")
    })
}

/// The empty theory presents the identity monad.
pub fn presented_empty() -> PresentedMonad {
    PresentedMonad::new(theory::empty_theory(), identity(), |op, _, _| {
        panic!("empty theory has no operation '{op}'")
    })
}

// ---------------------------------------------------------------------------
// Stock morphisms.

/// Forget list order: list -> multiset, componentwise counting.
pub fn morphism_list_to_multiset(cap: usize) -> MonadMorphism {
    MonadMorphism::new(
        format!("list:cap={cap}->multiset:cap={cap}"),
        list(cap),
        multiset(cap as u32),
        |_, m| {
            let Value::Seq(items) = m else { panic!("list value is not a sequence") };
            let mut counts: BTreeMap<Value, u32> = BTreeMap::new();
            for v in items {
                *counts.entry(v.clone()).or_insert(0) += 1;
            }
            Value::Multi(counts)
        },
    )
}

/// Forget order and multiplicity: list -> full powerset.
pub fn morphism_list_to_powerset(cap: usize) -> MonadMorphism {
    MonadMorphism::new(
        format!("list:cap={cap}->powerset:full"),
        list(cap),
        powerset_full(),
        |_, m| {
            let Value::Seq(items) = m else { panic!("list value is not a sequence") };
            Value::Set(items.iter().cloned().collect())
        },
    )
}

/// The unit, as a morphism from the identity monad.
pub fn morphism_unit(target: FiniteMonad) -> MonadMorphism {
    let t = target.clone();
    MonadMorphism::new(
        format!("identity->{}", target.name),
        identity(),
        target,
        move |x, v| t.unit(x, v),
    )
}

/// The unique collapse into the terminal monad.
pub fn morphism_to_terminal(source: FiniteMonad) -> MonadMorphism {
    MonadMorphism::new(
        format!("{}->terminal", source.name),
        source,
        terminal(),
        |_, _| Value::Unit,
    )
}

/// Named morphisms for the command line.
pub fn parse_morphism(name: &str) -> Result<MonadMorphism, String> {
    if let Some((src, dst)) = name.split_once("->") {
        if src.starts_with("list") && dst.starts_with("multiset") {
            let m = parse_monad(src)?;
            let cap = m.name.strip_prefix("list:cap=").and_then(|c| c.parse().ok()).unwrap_or(3);
            return Ok(morphism_list_to_multiset(cap));
        }
        if src.starts_with("list") && dst.starts_with("powerset") {
            let m = parse_monad(src)?;
            let cap = m.name.strip_prefix("list:cap=").and_then(|c| c.parse().ok()).unwrap_or(3);
            return Ok(morphism_list_to_powerset(cap));
        }
        if src == "identity" {
            return Ok(morphism_unit(parse_monad(dst)?));
        }
        if dst == "terminal" {
            return Ok(morphism_to_terminal(parse_monad(src)?));
        }
        return Err(format!("no stock morphism '{name}'"));
    }
    Err("morphism names look like 'source->target'".to_string())
}

/// Theory/monad pairings for the presentation-aware commands.
pub fn parse_presented(name: &str) -> Result<PresentedMonad, String> {
    match name {
        "semilattice" => Ok(presented_semilattice()),
        "monoid" => Ok(presented_monoid(3)),
        "sigma22" => Ok(presented_sigma22(2)),
        "empty" => Ok(presented_empty()),
        other => {
            if let Some(v) = other.strip_prefix("state:") {
                let v: usize =
                    v.parse().map_err(|_| format!("bad state store size '{v}'"))?;
                return Ok(presented_state(v));
            }
            if let Some(w) = other.strip_prefix("wellorder:") {
                let w: usize = w.parse().map_err(|_| format!("bad width '{w}'"))?;
                return Ok(presented_wellorder(w));
            }
            Err(format!("no presentation named '{other}'"))
        }
    }
}
