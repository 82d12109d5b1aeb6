//! Finitary equational theories: signatures, terms in context, equations,
//! and the sum and tensor constructions.
//!
//! A theory here is plain syntax. Model-side questions (does a table satisfy
//! the equations, what is the free algebra) live in [`crate::model`] and
//! [`crate::free`].

pub mod dsl;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An operation symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

impl OpSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> OpSymbol {
        OpSymbol { name: name.into(), arity }
    }
}

/// A term over a signature, with named variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::height).max().unwrap_or(0).min(usize::MAX),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) => {
                if args.is_empty() {
                    return write!(f, "{op}");
                }
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Capture-free substitution of variables by terms. Variables without an
/// entry are left alone.
pub fn substitute(term: &Term, env: &BTreeMap<String, Term>) -> Term {
    match term {
        Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| term.clone()),
        Term::App(op, args) => {
            Term::App(op.clone(), args.iter().map(|a| substitute(a, env)).collect())
        }
    }
}

/// An equation in context: both sides may only mention the listed variables.
/// The context is ordered; it fixes the argument order when the equation is
/// instantiated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub context: Vec<String>,
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(context: Vec<&str>, lhs: Term, rhs: Term) -> Equation {
        Equation { context: context.into_iter().map(String::from).collect(), lhs, rhs }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {} = {}", self.context.join(","), self.lhs, self.rhs)
    }
}

/// A finitary equational theory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub name: String,
    pub ops: Vec<OpSymbol>,
    pub equations: Vec<Equation>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("operation '{0}' declared twice")]
    DuplicateOp(String),
    #[error("unknown operation '{op}' in term '{term}'")]
    UnknownOp { op: String, term: String },
    #[error("operation '{op}' has arity {expected}, applied to {got} arguments in '{term}'")]
    ArityMismatch { op: String, expected: usize, got: usize, term: String },
    #[error("variable '{var}' not in context of equation '{equation}'")]
    UnboundVar { var: String, equation: String },
    #[error("variable '{var}' listed twice in context of equation '{equation}'")]
    DuplicateVar { var: String, equation: String },
}

impl Theory {
    pub fn new(name: impl Into<String>, ops: Vec<OpSymbol>, equations: Vec<Equation>) -> Theory {
        Theory { name: name.into(), ops, equations }
    }

    pub fn op(&self, name: &str) -> Option<&OpSymbol> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }

    /// Well-formedness: distinct operation names, every applied symbol known
    /// with the right arity, every variable bound by its context, contexts
    /// duplicate-free.
    pub fn validate(&self) -> Result<(), TheoryError> {
        let mut seen = BTreeSet::new();
        for o in &self.ops {
            if !seen.insert(&o.name) {
                return Err(TheoryError::DuplicateOp(o.name.clone()));
            }
        }
        for eq in &self.equations {
            let mut ctx = BTreeSet::new();
            for v in &eq.context {
                if !ctx.insert(v.clone()) {
                    return Err(TheoryError::DuplicateVar { var: v.clone(), equation: eq.to_string() });
                }
            }
            for side in [&eq.lhs, &eq.rhs] {
                self.check_term(side, &ctx, &eq.to_string())?;
            }
        }
        Ok(())
    }

    fn check_term(
        &self,
        term: &Term,
        ctx: &BTreeSet<String>,
        equation: &str,
    ) -> Result<(), TheoryError> {
        match term {
            Term::Var(v) => {
                if !ctx.contains(v) {
                    return Err(TheoryError::UnboundVar { var: v.clone(), equation: equation.into() });
                }
            }
            Term::App(opname, args) => {
                let op = self.op(opname).ok_or_else(|| TheoryError::UnknownOp {
                    op: opname.clone(),
                    term: term.to_string(),
                })?;
                if op.arity != args.len() {
                    return Err(TheoryError::ArityMismatch {
                        op: opname.clone(),
                        expected: op.arity,
                        got: args.len(),
                        term: term.to_string(),
                    });
                }
                for a in args {
                    self.check_term(a, ctx, equation)?;
                }
            }
        }
        Ok(())
    }

    /// Canonical JSON form: operations sorted by name, equations sorted by
    /// their printed sides. Two theories with the same canonical form are
    /// syntactically identical up to presentation order.
    pub fn canonical_json(&self) -> serde_json::Value {
        let mut ops: Vec<&OpSymbol> = self.ops.iter().collect();
        ops.sort_by(|a, b| a.name.cmp(&b.name));
        let mut eqs: Vec<&Equation> = self.equations.iter().collect();
        eqs.sort_by_key(|e| (e.lhs.to_string(), e.rhs.to_string()));
        serde_json::json!({
            "name": self.name,
            "ops": ops.iter().map(|o| serde_json::json!({"name": o.name, "arity": o.arity})).collect::<Vec<_>>(),
            "equations": eqs.iter().map(|e| serde_json::json!({
                "context": e.context,
                "lhs": e.lhs.to_string(),
                "rhs": e.rhs.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {} {{", self.name)?;
        for o in &self.ops {
            writeln!(f, "  op {} : {};", o.name, o.arity)?;
        }
        for e in &self.equations {
            writeln!(f, "  eq {e};")?;
        }
        write!(f, "}}")
    }
}

/// Disjoint union of two theories. Operation names that clash are qualified
/// as `left.<name>` and `right.<name>` (in operations and in equations);
/// non-clashing names are kept.
pub fn theory_sum(left: &Theory, right: &Theory) -> Theory {
    let clashes: BTreeSet<String> = left
        .ops
        .iter()
        .map(|o| o.name.clone())
        .filter(|n| right.op(n).is_some())
        .collect();
    let qualify = |side: &str, t: &Theory| -> Theory {
        if clashes.is_empty() {
            return t.clone();
        }
        let rename = |n: &str| -> String {
            if clashes.contains(n) {
                format!("{side}.{n}")
            } else {
                n.to_string()
            }
        };
        fn rename_term(t: &Term, rename: &dyn Fn(&str) -> String) -> Term {
            match t {
                Term::Var(v) => Term::Var(v.clone()),
                Term::App(op, args) => Term::App(
                    rename(op),
                    args.iter().map(|a| rename_term(a, rename)).collect(),
                ),
            }
        }
        Theory {
            name: t.name.clone(),
            ops: t.ops.iter().map(|o| OpSymbol::new(rename(&o.name), o.arity)).collect(),
            equations: t
                .equations
                .iter()
                .map(|e| Equation {
                    context: e.context.clone(),
                    lhs: rename_term(&e.lhs, &rename),
                    rhs: rename_term(&e.rhs, &rename),
                })
                .collect(),
        }
    };
    let l = qualify("left", left);
    let r = qualify("right", right);
    let mut ops = l.ops;
    ops.extend(r.ops);
    let mut equations = l.equations;
    equations.extend(r.equations);
    Theory { name: format!("Sum({},{})", left.name, right.name), ops, equations }
}

/// The commutation equation between an operation `f` of the left theory and
/// `g` of the right: applying `f` to `g`-combinations row-wise equals
/// applying `g` to `f`-combinations column-wise, over the variable grid
/// `x_i_j` (`i` indexing `f` arguments, `j` indexing `g` arguments).
pub fn commutation_equation(f: &OpSymbol, g: &OpSymbol) -> Equation {
    let m = f.arity;
    let k = g.arity;
    let var = |i: usize, j: usize| Term::var(format!("x_{i}_{j}"));
    let lhs = Term::App(
        f.name.clone(),
        (0..m)
            .map(|i| Term::App(g.name.clone(), (0..k).map(|j| var(i, j)).collect()))
            .collect(),
    );
    let rhs = Term::App(
        g.name.clone(),
        (0..k)
            .map(|j| Term::App(f.name.clone(), (0..m).map(|i| var(i, j)).collect()))
            .collect(),
    );
    let mut context = Vec::new();
    for i in 0..m {
        for j in 0..k {
            context.push(format!("x_{i}_{j}"));
        }
    }
    Equation { context, lhs, rhs }
}

/// Tensor of two theories: their sum plus one commutation equation per pair
/// of operations (left op against right op).
pub fn theory_tensor(left: &Theory, right: &Theory) -> Theory {
    let mut out = theory_sum(left, right);
    out.name = format!("Tensor({},{})", left.name, right.name);
    // Ops in `out` are left's ops followed by right's, post-qualification.
    let (lops, rops) = out.ops.split_at(left.ops.len());
    let mut comm = Vec::new();
    for f in lops {
        for g in rops {
            comm.push(commutation_equation(f, g));
        }
    }
    out.equations.extend(comm);
    out
}

/// Adjoin one fresh constant per element of `extra`, named by the element's
/// literal form. Equations are untouched: this presents the monad
/// `X |-> T(X + E)`.
pub fn add_constants(theory: &Theory, extra: &crate::value::FiniteSet) -> Theory {
    let mut out = theory.clone();
    out.name = format!("{}+{}", theory.name, extra);
    for v in extra.iter() {
        out.ops.push(OpSymbol::new(v.literal(), 0));
    }
    out
}

// ---------------------------------------------------------------------------
// Built-in theories.

/// Bounded join-semilattices: associative, commutative, idempotent `join`
/// with unit `bot`.
pub fn semilattice() -> Theory {
    let j = |a: Term, b: Term| Term::app("join", vec![a, b]);
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
    Theory::new(
        "Semilattice",
        vec![OpSymbol::new("join", 2), OpSymbol::new("bot", 0)],
        vec![
            Equation::new(vec!["x", "y", "z"], j(j(x.clone(), y.clone()), z.clone()), j(x.clone(), j(y.clone(), z.clone()))),
            Equation::new(vec!["x", "y"], j(x.clone(), y.clone()), j(y.clone(), x.clone())),
            Equation::new(vec!["x"], j(x.clone(), x.clone()), x.clone()),
            Equation::new(vec!["x"], j(x.clone(), Term::constant("bot")), x.clone()),
        ],
    )
}

/// Two binary operations, no equations: the signature whose free algebras
/// are binary-tree terms.
pub fn sigma22_free() -> Theory {
    Theory::new(
        "Sigma22Free",
        vec![OpSymbol::new("u0", 2), OpSymbol::new("u1", 2)],
        vec![],
    )
}

/// One unary operation, no equations.
pub fn unary_op() -> Theory {
    Theory::new("UnaryOp", vec![OpSymbol::new("u", 1)], vec![])
}

/// The empty theory: no operations, no equations. Presents the identity
/// monad.
pub fn empty_theory() -> Theory {
    Theory::new("Empty", vec![], vec![])
}

/// Monoids: associative `mul` with two-sided unit `e`. Presents the list
/// monad.
pub fn monoid() -> Theory {
    let m = |a: Term, b: Term| Term::app("mul", vec![a, b]);
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
    let e = Term::constant("e");
    Theory::new(
        "Monoid",
        vec![OpSymbol::new("mul", 2), OpSymbol::new("e", 0)],
        vec![
            Equation::new(vec!["x", "y", "z"], m(m(x.clone(), y.clone()), z.clone()), m(x.clone(), m(y.clone(), z.clone()))),
            Equation::new(vec!["x"], m(e.clone(), x.clone()), x.clone()),
            Equation::new(vec!["x"], m(x.clone(), e.clone()), x.clone()),
        ],
    )
}

/// Constants `k0..k{n-1}` and a ternary `f` that compares its first two
/// arguments against the constants: `f(ka,ka,x) = k0` and `f(ka,kb,x) = x`
/// for `a != b`. Every model identifying all the constants collapses.
pub fn spurious_analog(n: usize) -> Theory {
    assert!(n >= 1, "needs at least one constant");
    let mut ops: Vec<OpSymbol> = (0..n).map(|a| OpSymbol::new(format!("k{a}"), 0)).collect();
    ops.push(OpSymbol::new("f", 3));
    let k = |a: usize| Term::constant(format!("k{a}"));
    let mut equations = Vec::new();
    for a in 0..n {
        equations.push(Equation::new(
            vec!["x"],
            Term::app("f", vec![k(a), k(a), Term::var("x")]),
            k(0),
        ));
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                equations.push(Equation::new(
                    vec!["x"],
                    Term::app("f", vec![k(a), k(b), Term::var("x")]),
                    Term::var("x"),
                ));
            }
        }
    }
    Theory::new(format!("SpuriousAnalog({n})"), ops, equations)
}

/// The theory of `v`-state stores: a `v`-ary `lookup` and unary `update_i`
/// per state. Presents the state monad over a `v`-element store.
///
/// Axiom schemas, with `3 + v + v^2` equations in total:
/// 1. reading and ignoring the state does nothing;
/// 2. two consecutive reads agree (diagonal law);
/// 3. reading right after writing `i` yields branch `i`;
/// 4. a second write overwrites the first;
/// 5. writing back what was just read does nothing.
pub fn state_theory(v: usize) -> Theory {
    assert!(v >= 1, "store must be inhabited");
    let mut ops = vec![OpSymbol::new("lookup", v)];
    for i in 0..v {
        ops.push(OpSymbol::new(format!("update_{i}"), 1));
    }
    let lookup = |args: Vec<Term>| Term::app("lookup", args);
    let update = |i: usize, t: Term| Term::app(format!("update_{i}"), vec![t]);
    let x = Term::var("x");
    let mut equations = Vec::new();
    // (1) lookup(x,..,x) = x
    equations.push(Equation::new(
        vec!["x"],
        lookup(vec![x.clone(); v]),
        x.clone(),
    ));
    // (2) lookup(i |-> lookup(j |-> x_i_j)) = lookup(i |-> x_i_i)
    let grid: Vec<String> = (0..v).flat_map(|i| (0..v).map(move |j| format!("x_{i}_{j}"))).collect();
    equations.push(Equation {
        context: grid,
        lhs: lookup(
            (0..v)
                .map(|i| lookup((0..v).map(|j| Term::var(format!("x_{i}_{j}"))).collect()))
                .collect(),
        ),
        rhs: lookup((0..v).map(|i| Term::var(format!("x_{i}_{i}"))).collect()),
    });
    // (3) update_i(lookup(x_0,..,x_{v-1})) = update_i(x_i)
    for i in 0..v {
        equations.push(Equation {
            context: (0..v).map(|j| format!("x_{j}")).collect(),
            lhs: update(i, lookup((0..v).map(|j| Term::var(format!("x_{j}"))).collect())),
            rhs: update(i, Term::var(format!("x_{i}"))),
        });
    }
    // (4) update_i(update_j(x)) = update_j(x)
    for i in 0..v {
        for j in 0..v {
            equations.push(Equation::new(
                vec!["x"],
                update(i, update(j, x.clone())),
                update(j, x.clone()),
            ));
        }
    }
    // (5) lookup(i |-> update_i(x)) = x
    equations.push(Equation::new(
        vec!["x"],
        lookup((0..v).map(|i| update(i, x.clone())).collect()),
        x.clone(),
    ));
    Theory::new(format!("State({v})"), ops, equations)
}

/// Arity-lowered theory of strict nonempty well-orderings, truncated at
/// width `n`: a constant `bot` and one `iota_k` per `k <= n`.
///
/// `iota_k` is the k-fold ordered join; it collapses to `bot` whenever an
/// argument is `bot` (strictness) or two argument positions coincide
/// (non-repetition), and nested applications flatten (associativity over all
/// composition shapes of total width `<= n`). `iota_1` is the identity.
pub fn well_order_lowered(n: usize) -> Theory {
    assert!(n >= 1);
    let mut ops = vec![OpSymbol::new("bot", 0)];
    for k in 1..=n {
        ops.push(OpSymbol::new(format!("iota_{k}"), k));
    }
    let iota = |k: usize, args: Vec<Term>| Term::app(format!("iota_{k}"), args);
    let bot = Term::constant("bot");
    let xs = |k: usize| -> Vec<Term> { (0..k).map(|i| Term::var(format!("x{i}"))).collect() };
    let ctx = |k: usize| -> Vec<String> { (0..k).map(|i| format!("x{i}")).collect() };

    let mut equations = Vec::new();
    // Unit: the 1-fold join is the identity.
    equations.push(Equation::new(vec!["x0"], iota(1, vec![Term::var("x0")]), Term::var("x0")));
    // Strictness, one equation per argument position.
    for k in 1..=n {
        for p in 0..k {
            let mut args = xs(k);
            args[p] = bot.clone();
            let context: Vec<String> = (0..k).filter(|&i| i != p).map(|i| format!("x{i}")).collect();
            equations.push(Equation {
                context,
                lhs: iota(k, args),
                rhs: bot.clone(),
            });
        }
    }
    // Non-repetition, one equation per unordered pair of positions.
    for k in 2..=n {
        for p in 0..k {
            for q in (p + 1)..k {
                let mut args = xs(k);
                args[q] = args[p].clone();
                let context: Vec<String> = (0..k).filter(|&i| i != q).map(|i| format!("x{i}")).collect();
                equations.push(Equation {
                    context,
                    lhs: iota(k, args),
                    rhs: bot.clone(),
                });
            }
        }
    }
    // Associativity: iota_nu over blocks of widths k_1..k_nu flattens,
    // for every composition shape with total width <= n.
    for shape in composition_shapes(n) {
        let total: usize = shape.iter().sum();
        let nu = shape.len();
        if nu == 1 && shape[0] == 1 {
            continue; // iota_1(iota_1(x)) adds nothing beyond the unit law
        }
        let flat = xs(total);
        let mut blocks = Vec::new();
        let mut off = 0;
        for &k in &shape {
            blocks.push(iota(k, flat[off..off + k].to_vec()));
            off += k;
        }
        equations.push(Equation {
            context: ctx(total),
            lhs: iota(nu, blocks),
            rhs: iota(total, flat),
        });
    }
    Theory::new(format!("WellOrder({n})"), ops, equations)
}

/// All tuples `(k_1..k_nu)` with `nu >= 1`, each `k_mu >= 1`, sum `<= n`.
fn composition_shapes(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(n: usize, used: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for k in 1..=(n - used) {
            cur.push(k);
            go(n, used + k, cur, out);
            cur.pop();
        }
    }
    go(n, 0, &mut cur, &mut out);
    out
}

/// Look a built-in theory up by the name used on the command line.
///
/// Parameterised families take their argument after a colon, as in
/// `state:2`, `spurious:3`, `wellorder:2`.
pub fn builtin_theory(spec: &str) -> Option<Theory> {
    let (head, param) = match spec.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (spec, None),
    };
    let arg = |def: usize| param.and_then(|p| p.parse().ok()).unwrap_or(def);
    match head {
        "semilattice" => Some(semilattice()),
        "sigma22" => Some(sigma22_free()),
        "unary" => Some(unary_op()),
        "empty" => Some(empty_theory()),
        "monoid" => Some(monoid()),
        "spurious" => Some(spurious_analog(arg(3))),
        "state" => Some(state_theory(arg(2))),
        "wellorder" => Some(well_order_lowered(arg(2))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for spec in [
            "semilattice",
            "sigma22",
            "unary",
            "empty",
            "monoid",
            "spurious:1",
            "spurious:3",
            "state:1",
            "state:2",
            "state:3",
            "wellorder:1",
            "wellorder:2",
            "wellorder:3",
        ] {
            let t = builtin_theory(spec).unwrap();
            t.validate().unwrap_or_else(|e| panic!("{spec}: {e}"));
        }
        assert!(builtin_theory("nosuch").is_none());
    }

    #[test]
    fn equation_counts() {
        assert_eq!(semilattice().equations.len(), 4);
        assert_eq!(sigma22_free().equations.len(), 0);
        assert_eq!(spurious_analog(3).equations.len(), 3 + 6);
        for v in 1..=3 {
            assert_eq!(state_theory(v).equations.len(), 3 + v + v * v, "state:{v}");
        }
    }

    #[test]
    fn well_order_lowered_shape() {
        let t = well_order_lowered(2);
        assert_eq!(t.ops.len(), 3); // bot, iota_1, iota_2
        // unit, strictness 1+2, non-repetition 1, associativity shapes
        // (2), (1,1) at width 2.
        assert_eq!(t.equations.len(), 1 + 3 + 1 + 2);
        let t3 = well_order_lowered(3);
        assert_eq!(t3.ops.len(), 4);
        t3.validate().unwrap();
        // strictness 1+2+3, non-repetition 1+3, shapes with sum <= 3 minus (1).
        assert_eq!(t3.equations.len(), 1 + 6 + 4 + (composition_shapes(3).len() - 1));
    }

    #[test]
    fn composition_shapes_small() {
        let mut s2 = composition_shapes(2);
        s2.sort();
        assert_eq!(s2, vec![vec![1], vec![1, 1], vec![2]]);
        assert_eq!(composition_shapes(3).len(), 7); // (1)(2)(3)(1,1)(1,2)(2,1)(1,1,1)
    }

    #[test]
    fn sum_qualifies_clashes() {
        let s = theory_sum(&semilattice(), &well_order_lowered(2));
        s.validate().unwrap();
        // `bot` clashes; `join` and the iotas do not.
        assert!(s.op("left.bot").is_some());
        assert!(s.op("right.bot").is_some());
        assert!(s.op("bot").is_none());
        assert!(s.op("join").is_some());
        assert!(s.op("iota_2").is_some());
        // Clash-qualified names also rewritten inside equations.
        let unit_eq = s
            .equations
            .iter()
            .find(|e| e.lhs.to_string() == "join(x,left.bot)")
            .expect("semilattice unit law got qualified");
        assert_eq!(unit_eq.rhs.to_string(), "x");
    }

    #[test]
    fn sum_without_clash_keeps_names() {
        let s = theory_sum(&semilattice(), &sigma22_free());
        assert!(s.op("join").is_some());
        assert!(s.op("bot").is_some());
        assert!(s.op("u0").is_some());
        assert_eq!(s.equations.len(), 4);
    }

    #[test]
    fn tensor_adds_commutation_grid() {
        let t = theory_tensor(&semilattice(), &sigma22_free());
        t.validate().unwrap();
        // 4 semilattice equations + 2x2 commutation equations.
        assert_eq!(t.equations.len(), 4 + 4);
        let comm = commutation_equation(&OpSymbol::new("join", 2), &OpSymbol::new("u0", 2));
        assert_eq!(
            comm.lhs.to_string(),
            "join(u0(x_0_0,x_0_1),u0(x_1_0,x_1_1))"
        );
        assert_eq!(
            comm.rhs.to_string(),
            "u0(join(x_0_0,x_1_0),join(x_0_1,x_1_1))"
        );
        assert_eq!(comm.context, vec!["x_0_0", "x_0_1", "x_1_0", "x_1_1"]);
    }

    #[test]
    fn commutation_with_constants() {
        // f nullary against g binary: f = g(f,f).
        let comm = commutation_equation(&OpSymbol::new("c", 0), &OpSymbol::new("g", 2));
        assert_eq!(comm.lhs.to_string(), "c");
        assert_eq!(comm.rhs.to_string(), "g(c,c)");
        assert!(comm.context.is_empty());
    }

    #[test]
    fn add_constants_leaves_equations() {
        use crate::value::FiniteSet;
        let t = add_constants(&semilattice(), &FiniteSet::atoms("e", 2));
        t.validate().unwrap();
        assert_eq!(t.ops.len(), 4);
        assert_eq!(t.equations.len(), 4);
        assert!(t.op("e0").is_some());
        assert_eq!(t.op("e1").unwrap().arity, 0);
    }

    #[test]
    fn canonical_json_is_order_insensitive() {
        let a = semilattice();
        let mut b = semilattice();
        b.ops.reverse();
        b.equations.reverse();
        assert_eq!(a.canonical_json(), b.canonical_json());
        let j = serde_json::to_string(&a.canonical_json()).unwrap();
        assert!(j.contains("\"ops\""));
        assert!(j.contains("join(x,y)"));
    }

    #[test]
    fn validate_catches_bad_terms() {
        let mut t = semilattice();
        t.equations.push(Equation::new(vec!["x"], Term::app("join", vec![Term::var("x")]), Term::var("x")));
        assert!(matches!(t.validate(), Err(TheoryError::ArityMismatch { .. })));

        let mut t = semilattice();
        t.equations.push(Equation::new(vec![], Term::var("y"), Term::var("y")));
        assert!(matches!(t.validate(), Err(TheoryError::UnboundVar { .. })));

        let mut t = semilattice();
        t.ops.push(OpSymbol::new("join", 1));
        assert!(matches!(t.validate(), Err(TheoryError::DuplicateOp(_))));
    }

    #[test]
    fn substitution() {
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), Term::constant("bot"));
        let t = Term::app("join", vec![Term::var("x"), Term::var("y")]);
        assert_eq!(substitute(&t, &env).to_string(), "join(bot,y)");
    }
}
