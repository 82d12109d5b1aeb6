//! Monads on finite sets, as executable Kleisli triples.
//!
//! A [`FiniteMonad`] packages the carrier construction `X -> TX`, the unit
//! `X -> TX`, and Kleisli extension `(X -> TY) -> (TX -> TY)`. Multiplication
//! and the functor action are derived. Everything downstream (law checking,
//! commutativity, the tensor law, the metalanguage) works through this
//! interface, so a monad is exactly as trustworthy as its extension operator;
//! [`check_monad_laws`] is the audit.
//!
//! Carriers may be honest fragments: for monads with infinite `TX` (lists,
//! trees, words) `apply` returns a bounded slice flagged `complete: false`.
//! Quantifiers in the checkers run over the fragment and reports carry that
//! flag; unit and extension remain total on all values regardless.

pub mod catalog;

use std::collections::BTreeMap;
use std::rc::Rc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::theory::{Equation, OpSymbol, Term, Theory};
use crate::value::{all_functions, count_functions, FiniteSet, FnTable, Value};

/// The object part of a monad applied to one finite set.
#[derive(Clone, Debug)]
pub struct Carrier {
    pub set: FiniteSet,
    /// False when the set is a bounded fragment of an infinite carrier.
    pub complete: bool,
}

/// A function into a monad: the explicit graph plus the target set, which
/// extension operators need when the graph alone underdetermines the
/// codomain (continuations, empty domains).
#[derive(Clone, Debug)]
pub struct Kleisli {
    pub map: FnTable,
    pub target: FiniteSet,
}

impl Kleisli {
    pub fn new(map: FnTable, target: FiniteSet) -> Kleisli {
        Kleisli { map, target }
    }

    pub fn from_fn(dom: &FiniteSet, target: &FiniteSet, f: impl Fn(&Value) -> Value) -> Kleisli {
        Kleisli { map: FnTable::from_fn(dom, f), target: target.clone() }
    }

    pub fn apply(&self, x: &Value) -> &Value {
        self.map.apply(x)
    }
}

#[derive(Clone)]
pub struct FiniteMonad {
    pub name: String,
    apply: Rc<dyn Fn(&FiniteSet) -> Carrier>,
    unit: Rc<dyn Fn(&FiniteSet, &Value) -> Value>,
    ext: Rc<dyn Fn(&Kleisli, &Value) -> Value>,
}

impl std::fmt::Debug for FiniteMonad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteMonad({})", self.name)
    }
}

impl FiniteMonad {
    pub fn new(
        name: impl Into<String>,
        apply: impl Fn(&FiniteSet) -> Carrier + 'static,
        unit: impl Fn(&FiniteSet, &Value) -> Value + 'static,
        ext: impl Fn(&Kleisli, &Value) -> Value + 'static,
    ) -> FiniteMonad {
        FiniteMonad {
            name: name.into(),
            apply: Rc::new(apply),
            unit: Rc::new(unit),
            ext: Rc::new(ext),
        }
    }

    pub fn carrier(&self, x: &FiniteSet) -> Carrier {
        (self.apply)(x)
    }

    /// Unit at the object `x`; some monads need the whole set, not just
    /// the point (continuations enumerate their key space from it).
    pub fn unit(&self, x: &FiniteSet, v: &Value) -> Value {
        (self.unit)(x, v)
    }

    /// Kleisli extension `f*`.
    pub fn ext(&self, f: &Kleisli, m: &Value) -> Value {
        (self.ext)(f, m)
    }

    /// Functor action, derived: `T h = (unit . h)*`.
    pub fn fmap(&self, h: &FnTable, target: &FiniteSet, m: &Value) -> Value {
        let lifted = Kleisli {
            map: FnTable::new(
                h.iter().map(|(k, v)| (k.clone(), self.unit(target, v))).collect(),
            ),
            target: target.clone(),
        };
        self.ext(&lifted, m)
    }

    /// Multiplication, derived: `mu = (id_TX)*` on `TTX`.
    pub fn mu(&self, x: &FiniteSet, mm: &Value) -> Value {
        let tx = self.carrier(x).set;
        let id = Kleisli::from_fn(&tx, x, |m| m.clone());
        self.ext(&id, mm)
    }
}

// ---------------------------------------------------------------------------
// Law checking.

#[derive(Clone, Debug)]
pub struct LawOptions {
    /// Carriers X, Y, Z range over all sizes `0..=max_size`.
    pub max_size: usize,
    /// Check only the two unit laws; extension associativity is skipped.
    pub unit_laws_only: bool,
    /// Estimated evaluation ceiling per block before sampling kicks in.
    pub eval_budget: u128,
    /// Sample count per oversized block.
    pub samples: u32,
    pub seed: u64,
}

impl Default for LawOptions {
    fn default() -> LawOptions {
        LawOptions {
            max_size: 2,
            unit_laws_only: false,
            eval_budget: 4_000_000,
            samples: 5_000,
            seed: crate::DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Coverage {
    Exhaustive,
    /// Some blocks exceeded the budget and were sampled instead.
    Sampled { exhaustive_blocks: usize, sampled_blocks: usize, samples_per_block: u32 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LawWitness {
    pub law: String,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub f: Option<Value>,
    pub g: Option<Value>,
    pub m: Value,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LawReport {
    pub monad: String,
    pub max_size: usize,
    pub unit_laws_only: bool,
    /// Instances actually evaluated.
    pub checked: u64,
    pub coverage: Coverage,
    /// True when some quantifier ranged over an incomplete carrier.
    pub bounded_fragment: bool,
    pub witness: Option<LawWitness>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

const LAW_UNIT_EXT: &str = "f* . eta = f";
const LAW_EXT_UNIT: &str = "eta* = id";
const LAW_EXT_ASSOC: &str = "(g* . f)* = g* . f*";

struct LawRun<'a> {
    m: &'a FiniteMonad,
    opts: &'a LawOptions,
    checked: u64,
    bounded: bool,
    exhaustive_blocks: usize,
    sampled_blocks: usize,
    witness: Option<LawWitness>,
    rng: ChaCha8Rng,
}

/// Exhaustively verify the three Kleisli laws over all carriers of size up
/// to `opts.max_size`, falling back to seeded sampling on blocks whose
/// instance count exceeds the budget.
pub fn check_monad_laws(m: &FiniteMonad, opts: &LawOptions) -> LawReport {
    let mut run = LawRun {
        m,
        opts,
        checked: 0,
        bounded: false,
        exhaustive_blocks: 0,
        sampled_blocks: 0,
        witness: None,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
    };
    'outer: for nx in 0..=opts.max_size {
        let x = FiniteSet::atoms("x", nx);
        run.law_ext_unit(&x);
        if run.witness.is_some() {
            break;
        }
        for ny in 0..=opts.max_size {
            let y = FiniteSet::atoms("y", ny);
            run.law_unit_ext(&x, &y);
            if run.witness.is_some() {
                break 'outer;
            }
            if opts.unit_laws_only {
                continue;
            }
            for nz in 0..=opts.max_size {
                let z = FiniteSet::atoms("z", nz);
                run.law_ext_assoc(&x, &y, &z);
                if run.witness.is_some() {
                    break 'outer;
                }
            }
        }
    }
    let coverage = if run.sampled_blocks == 0 {
        Coverage::Exhaustive
    } else {
        Coverage::Sampled {
            exhaustive_blocks: run.exhaustive_blocks,
            sampled_blocks: run.sampled_blocks,
            samples_per_block: opts.samples,
        }
    };
    LawReport {
        monad: m.name.clone(),
        max_size: opts.max_size,
        unit_laws_only: opts.unit_laws_only,
        checked: run.checked,
        coverage,
        bounded_fragment: run.bounded,
        witness: run.witness,
    }
}

impl<'a> LawRun<'a> {
    fn carrier(&mut self, s: &FiniteSet) -> FiniteSet {
        let c = self.m.carrier(s);
        self.bounded |= !c.complete;
        c.set
    }

    fn random_kleisli(&mut self, dom: &FiniteSet, target: &FiniteSet, tvals: &FiniteSet) -> Kleisli {
        let map = FnTable::new(
            dom.iter()
                .map(|v| {
                    let pick = self.rng.gen_range(0..tvals.len());
                    (v.clone(), tvals.get(pick).clone())
                })
                .collect(),
        );
        Kleisli { map, target: target.clone() }
    }

    /// eta* = id on TX.
    fn law_ext_unit(&mut self, x: &FiniteSet) {
        let tx = self.carrier(x);
        let eta = Kleisli::from_fn(x, x, |v| self.m.unit(x, v));
        self.exhaustive_blocks += 1;
        for mv in tx.iter() {
            self.checked += 1;
            let got = self.m.ext(&eta, mv);
            if got != *mv {
                self.witness = Some(LawWitness {
                    law: LAW_EXT_UNIT.into(),
                    x: lits(x),
                    y: vec![],
                    z: vec![],
                    f: None,
                    g: None,
                    m: mv.clone(),
                    left: got,
                    right: mv.clone(),
                });
                return;
            }
        }
    }

    /// f* . eta = f for every f : X -> TY.
    fn law_unit_ext(&mut self, x: &FiniteSet, y: &FiniteSet) {
        let ty = self.carrier(y);
        let nfuncs = count_functions(x.len(), ty.len()).unwrap_or(u128::MAX);
        let cost = nfuncs.saturating_mul(x.len() as u128);
        let units: Vec<(Value, Value)> =
            x.iter().map(|v| (v.clone(), self.m.unit(x, v))).collect();
        let attempt = |run: &mut Self, f: &Kleisli| -> bool {
            for (xv, etax) in &units {
                run.checked += 1;
                let left = run.m.ext(f, etax);
                let right = f.apply(xv).clone();
                if left != right {
                    run.witness = Some(LawWitness {
                        law: LAW_UNIT_EXT.into(),
                        x: lits(x),
                        y: lits(y),
                        z: vec![],
                        f: Some(f.map.as_value()),
                        g: None,
                        m: etax.clone(),
                        left,
                        right,
                    });
                    return true;
                }
            }
            false
        };
        if cost <= self.opts.eval_budget {
            self.exhaustive_blocks += 1;
            for map in all_functions(x, ty.as_slice()) {
                let f = Kleisli { map, target: y.clone() };
                if attempt(self, &f) {
                    return;
                }
            }
        } else {
            self.sampled_blocks += 1;
            for _ in 0..self.opts.samples {
                let f = self.random_kleisli(x, y, &ty);
                if attempt(self, &f) {
                    return;
                }
            }
        }
    }

    /// (g* . f)* = g* . f* pointwise on TX.
    fn law_ext_assoc(&mut self, x: &FiniteSet, y: &FiniteSet, z: &FiniteSet) {
        let tx = self.carrier(x);
        let ty = self.carrier(y);
        let tz = self.carrier(z);
        let nf = count_functions(x.len(), ty.len()).unwrap_or(u128::MAX);
        let ng = count_functions(y.len(), tz.len()).unwrap_or(u128::MAX);
        let cost = nf
            .saturating_mul(ng)
            .saturating_mul((tx.len() as u128).max(1))
            .saturating_mul(2);
        if cost <= self.opts.eval_budget {
            self.exhaustive_blocks += 1;
            for fmap in all_functions(x, ty.as_slice()) {
                let f = Kleisli { map: fmap, target: y.clone() };
                // f* memoised over TX; reused across g.
                let fstar: Vec<Value> = tx.iter().map(|m| self.m.ext(&f, m)).collect();
                for gmap in all_functions(y, tz.as_slice()) {
                    let g = Kleisli { map: gmap, target: z.clone() };
                    if self.assoc_instance(x, y, z, &f, &g, &tx, &fstar) {
                        return;
                    }
                }
            }
        } else {
            self.sampled_blocks += 1;
            for _ in 0..self.opts.samples {
                let f = self.random_kleisli(x, y, &ty);
                let fstar: Vec<Value> = tx.iter().map(|m| self.m.ext(&f, m)).collect();
                let g = self.random_kleisli(y, z, &tz);
                if self.assoc_instance(x, y, z, &f, &g, &tx, &fstar) {
                    return;
                }
            }
        }
    }

    fn assoc_instance(
        &mut self,
        x: &FiniteSet,
        y: &FiniteSet,
        z: &FiniteSet,
        f: &Kleisli,
        g: &Kleisli,
        tx: &FiniteSet,
        fstar: &[Value],
    ) -> bool {
        // h = g* . f as a Kleisli map X -> TZ.
        let h = Kleisli {
            map: FnTable::new(
                f.map.iter().map(|(k, fv)| (k.clone(), self.m.ext(g, fv))).collect(),
            ),
            target: z.clone(),
        };
        for (i, mv) in tx.iter().enumerate() {
            self.checked += 1;
            let left = self.m.ext(&h, mv);
            let right = self.m.ext(g, &fstar[i]);
            if left != right {
                self.witness = Some(LawWitness {
                    law: LAW_EXT_ASSOC.into(),
                    x: lits(x),
                    y: lits(y),
                    z: lits(z),
                    f: Some(f.map.as_value()),
                    g: Some(g.map.as_value()),
                    m: mv.clone(),
                    left,
                    right,
                });
                return true;
            }
        }
        false
    }
}

fn lits(s: &FiniteSet) -> Vec<String> {
    s.iter().map(Value::literal).collect()
}

/// Re-evaluate one law instance from witness data; returns the two sides.
/// The witness replay path on the command line goes through this.
pub fn law_instance(
    m: &FiniteMonad,
    law: &str,
    x: &FiniteSet,
    y: &FiniteSet,
    z: &FiniteSet,
    f: Option<&FnTable>,
    g: Option<&FnTable>,
    mv: &Value,
) -> Result<(Value, Value), String> {
    match law {
        LAW_EXT_UNIT => {
            let eta = Kleisli::from_fn(x, x, |v| m.unit(x, v));
            Ok((m.ext(&eta, mv), mv.clone()))
        }
        LAW_UNIT_EXT => {
            let f = f.ok_or("law needs f")?;
            let fk = Kleisli { map: f.clone(), target: y.clone() };
            // m is eta(x0) for some x0; recover x0 by matching units.
            let x0 = x
                .iter()
                .find(|v| m.unit(x, v) == *mv)
                .ok_or("m is not a unit value over X")?;
            Ok((m.ext(&fk, mv), fk.apply(x0).clone()))
        }
        LAW_EXT_ASSOC => {
            let f = f.ok_or("law needs f")?;
            let g = g.ok_or("law needs g")?;
            let fk = Kleisli { map: f.clone(), target: y.clone() };
            let gk = Kleisli { map: g.clone(), target: z.clone() };
            let h = Kleisli {
                map: FnTable::new(
                    fk.map.iter().map(|(k, fv)| (k.clone(), m.ext(&gk, fv))).collect(),
                ),
                target: z.clone(),
            };
            Ok((m.ext(&h, mv), m.ext(&gk, &m.ext(&fk, mv))))
        }
        other => Err(format!("unknown law '{other}'")),
    }
}

// ---------------------------------------------------------------------------
// Commutativity.

/// The two evaluation orders of drawing from `p` then `q` versus `q` then
/// `p`, pairing the results. Equal for every p, q iff the monad is
/// commutative (on the tested carriers).
pub fn pair_exchange(
    m: &FiniteMonad,
    a: &FiniteSet,
    p: &Value,
    b: &FiniteSet,
    q: &Value,
) -> (Value, Value) {
    let prod: FiniteSet = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| Value::pair(x.clone(), y.clone())))
        .collect();
    // left: x <- p; y <- q; ret (x,y)
    let left = {
        let inner = |xv: &Value| {
            let k =
                Kleisli::from_fn(b, &prod, |yv| m.unit(&prod, &Value::pair(xv.clone(), yv.clone())));
            m.ext(&k, q)
        };
        let outer = Kleisli::from_fn(a, &prod, inner);
        m.ext(&outer, p)
    };
    // right: y <- q; x <- p; ret (x,y)
    let right = {
        let inner = |yv: &Value| {
            let k =
                Kleisli::from_fn(a, &prod, |xv| m.unit(&prod, &Value::pair(xv.clone(), yv.clone())));
            m.ext(&k, p)
        };
        let outer = Kleisli::from_fn(b, &prod, inner);
        m.ext(&outer, q)
    };
    (left, right)
}

pub fn commutes(m: &FiniteMonad, a: &FiniteSet, p: &Value, b: &FiniteSet, q: &Value) -> bool {
    let (l, r) = pair_exchange(m, a, p, b, q);
    l == r
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutativityWitness {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub p: Value,
    pub q: Value,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CommutativityReport {
    pub monad: String,
    pub max_size: usize,
    pub commutative: bool,
    pub checked: u64,
    pub bounded_fragment: bool,
    /// Minimal counterexample in the search order: carrier sizes ascending
    /// by total then left size, then canonical value order.
    pub witness: Option<CommutativityWitness>,
}

/// Search all pairs of carriers up to `max_size` for an exchange violation.
pub fn is_commutative(m: &FiniteMonad, max_size: usize) -> CommutativityReport {
    let mut checked = 0u64;
    let mut bounded = false;
    let mut sizes: Vec<(usize, usize)> = (0..=max_size)
        .flat_map(|na| (0..=max_size).map(move |nb| (na, nb)))
        .collect();
    sizes.sort_by_key(|&(na, nb)| (na + nb, na));
    for (na, nb) in sizes {
        let a = FiniteSet::atoms("a", na);
        let b = FiniteSet::atoms("b", nb);
        let ca = m.carrier(&a);
        let cb = m.carrier(&b);
        bounded |= !ca.complete || !cb.complete;
        for p in ca.set.iter() {
            for q in cb.set.iter() {
                checked += 1;
                let (l, r) = pair_exchange(m, &a, p, &b, q);
                if l != r {
                    return CommutativityReport {
                        monad: m.name.clone(),
                        max_size,
                        commutative: false,
                        checked,
                        bounded_fragment: bounded,
                        witness: Some(CommutativityWitness {
                            a: lits(&a),
                            b: lits(&b),
                            p: p.clone(),
                            q: q.clone(),
                            left: l,
                            right: r,
                        }),
                    };
                }
            }
        }
    }
    CommutativityReport {
        monad: m.name.clone(),
        max_size,
        commutative: true,
        checked,
        bounded_fragment: bounded,
        witness: None,
    }
}

// ---------------------------------------------------------------------------
// Monad morphisms.

#[derive(Clone)]
pub struct MonadMorphism {
    pub name: String,
    pub source: FiniteMonad,
    pub target: FiniteMonad,
    component: Rc<dyn Fn(&FiniteSet, &Value) -> Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MorphismReport {
    pub morphism: String,
    pub max_size: usize,
    pub checked: u64,
    pub bounded_fragment: bool,
    pub failure: Option<String>,
}

impl MonadMorphism {
    pub fn new(
        name: impl Into<String>,
        source: FiniteMonad,
        target: FiniteMonad,
        component: impl Fn(&FiniteSet, &Value) -> Value + 'static,
    ) -> MonadMorphism {
        MonadMorphism { name: name.into(), source, target, component: Rc::new(component) }
    }

    pub fn apply(&self, x: &FiniteSet, m: &Value) -> Value {
        (self.component)(x, m)
    }

    /// Unit preservation and compatibility with extension, in Kleisli form:
    /// `alpha . eta_S = eta_T` and `alpha(f*_S m) = (alpha . f)*_T (alpha m)`.
    pub fn check(&self, max_size: usize) -> MorphismReport {
        let mut checked = 0u64;
        let mut bounded = false;
        for nx in 0..=max_size {
            let x = FiniteSet::atoms("x", nx);
            for v in x.iter() {
                checked += 1;
                if self.apply(&x, &self.source.unit(&x, v)) != self.target.unit(&x, v) {
                    return self.fail(max_size, checked, bounded, format!("unit at {v}"));
                }
            }
            let sx = self.source.carrier(&x);
            bounded |= !sx.complete;
            for ny in 0..=max_size {
                let y = FiniteSet::atoms("y", ny);
                let sy = self.source.carrier(&y);
                bounded |= !sy.complete;
                for fmap in all_functions(&x, sy.set.as_slice()) {
                    let f = Kleisli { map: fmap, target: y.clone() };
                    let af = Kleisli {
                        map: FnTable::new(
                            f.map.iter().map(|(k, v)| (k.clone(), self.apply(&y, v))).collect(),
                        ),
                        target: y.clone(),
                    };
                    for mv in sx.set.iter() {
                        checked += 1;
                        let left = self.apply(&y, &self.source.ext(&f, mv));
                        let right = self.target.ext(&af, &self.apply(&x, mv));
                        if left != right {
                            return self.fail(
                                max_size,
                                checked,
                                bounded,
                                format!("extension at f={}, m={mv}: {left} vs {right}", f.map),
                            );
                        }
                    }
                }
            }
        }
        MorphismReport {
            morphism: self.name.clone(),
            max_size,
            checked,
            bounded_fragment: bounded,
            failure: None,
        }
    }

    fn fail(&self, max_size: usize, checked: u64, bounded: bool, why: String) -> MorphismReport {
        MorphismReport {
            morphism: self.name.clone(),
            max_size,
            checked,
            bounded_fragment: bounded,
            failure: Some(why),
        }
    }
}

// ---------------------------------------------------------------------------
// Theory truncation: one named operation per (arity, monad value).

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TheorifyReport {
    pub monad: String,
    pub max_arity: usize,
    pub ops: usize,
    pub equations: usize,
    pub carriers_checked: Vec<usize>,
    pub violations: Vec<crate::model::Violation>,
}

/// Truncated theory of a monad: an operation `h{k}[m]` of arity `k` for
/// every `m` in `T(a0..a{k-1})` with `k <= max_arity`, a projection
/// equation per unit value, and a substitution equation per composable pair
/// of operations. The report re-checks every generated equation in the
/// monad itself over scratch carriers of size `0..=witness_size`, where the
/// operations act by Kleisli extension.
pub fn theorify(m: &FiniteMonad, max_arity: usize, witness_size: usize) -> (Theory, TheorifyReport) {
    let mut ops = Vec::new();
    let mut equations = Vec::new();
    // (arity, m-value, op name); argument position i corresponds to atom a{i}.
    let mut levels: Vec<(FiniteSet, Vec<(Value, String)>)> = Vec::new();
    for k in 0..=max_arity {
        let x = FiniteSet::atoms("a", k);
        let tx = m.carrier(&x).set;
        let named: Vec<(Value, String)> = tx
            .iter()
            .map(|mv| (mv.clone(), format!("h{k}[{mv}]")))
            .collect();
        for (_, name) in &named {
            ops.push(OpSymbol::new(name.clone(), k));
        }
        levels.push((x, named));
    }
    let pvars = |n: usize| -> Vec<String> { (0..n).map(|i| format!("p{i}")).collect() };
    // Projection: h_{X, eta(a_i)}(p0..pk) = p_i.
    for (x, named) in &levels {
        let k = x.len();
        for (i, a) in x.iter().enumerate() {
            let eta = m.unit(x, a);
            if let Some((_, name)) = named.iter().find(|(mv, _)| *mv == eta) {
                equations.push(Equation {
                    context: pvars(k),
                    lhs: Term::App(name.clone(), (0..k).map(|j| Term::var(format!("p{j}"))).collect()),
                    rhs: Term::var(format!("p{i}")),
                });
            }
        }
    }
    // Substitution: h_{X,m}(h_{Y,f(a_i)}(ps) | i) = h_{Y, f*(m)}(ps).
    for (x, xnamed) in &levels {
        for (y, ynamed) in &levels {
            let l = y.len();
            let ty = m.carrier(y).set;
            let yname: BTreeMap<&Value, &String> =
                ynamed.iter().map(|(v, n)| (v, n)).collect();
            for fmap in all_functions(x, ty.as_slice()) {
                let f = Kleisli { map: fmap, target: y.clone() };
                let ps: Vec<Term> = (0..l).map(|j| Term::var(format!("p{j}"))).collect();
                for (mv, mname) in xnamed {
                    let fm = m.ext(&f, mv);
                    let Some(rhs_name) = yname.get(&fm) else {
                        // f*(m) escaped the enumerated fragment; skip the
                        // instance rather than invent an operation.
                        continue;
                    };
                    let lhs_args: Vec<Term> = x
                        .iter()
                        .map(|a| Term::App(yname[f.apply(a)].clone(), ps.clone()))
                        .collect();
                    equations.push(Equation {
                        context: pvars(l),
                        lhs: Term::App(mname.clone(), lhs_args),
                        rhs: Term::App((*rhs_name).clone(), ps.clone()),
                    });
                }
            }
        }
    }
    let theory = Theory::new(format!("Theta({})", m.name), ops, equations);

    // Re-check every equation semantically over T(W). Operations act by
    // extension; intermediate values may leave a bounded carrier fragment,
    // which extension handles, so evaluation is structural rather than
    // through a finite table.
    let op_values: BTreeMap<String, (FiniteSet, Value)> = levels
        .iter()
        .flat_map(|(x, named)| {
            named.iter().map(move |(mv, name)| (name.clone(), (x.clone(), mv.clone())))
        })
        .collect();
    let eval = |term: &Term, env: &BTreeMap<String, Value>, w: &FiniteSet| -> Value {
        fn go(
            m: &FiniteMonad,
            ops: &BTreeMap<String, (FiniteSet, Value)>,
            term: &Term,
            env: &BTreeMap<String, Value>,
            w: &FiniteSet,
        ) -> Value {
            match term {
                Term::Var(v) => env[v].clone(),
                Term::App(op, args) => {
                    let (x, mv) = &ops[op];
                    let f = Kleisli {
                        map: FnTable::new(
                            x.iter()
                                .zip(args)
                                .map(|(a, arg)| (a.clone(), go(m, ops, arg, env, w)))
                                .collect(),
                        ),
                        target: w.clone(),
                    };
                    m.ext(&f, mv)
                }
            }
        }
        go(m, &op_values, term, env, w)
    };
    let mut violations = Vec::new();
    let mut carriers = Vec::new();
    for wsize in 0..=witness_size {
        let w = FiniteSet::atoms("w", wsize);
        let tw = m.carrier(&w).set;
        carriers.push(tw.len());
        'eqs: for eq in &theory.equations {
            let k = eq.context.len();
            for tuple in crate::value::index_tuples(tw.len(), k) {
                let env: BTreeMap<String, Value> = eq
                    .context
                    .iter()
                    .zip(&tuple)
                    .map(|(v, &i)| (v.clone(), tw.get(i).clone()))
                    .collect();
                let l = eval(&eq.lhs, &env, &w);
                let r = eval(&eq.rhs, &env, &w);
                if l != r {
                    violations.push(crate::model::Violation {
                        equation: eq.to_string(),
                        assignment: env,
                        lhs_value: l,
                        rhs_value: r,
                    });
                    continue 'eqs;
                }
            }
        }
    }
    let report = TheorifyReport {
        monad: m.name.clone(),
        max_arity,
        ops: theory.ops.len(),
        equations: theory.equations.len(),
        carriers_checked: carriers,
        violations,
    };
    (theory, report)
}

// ---------------------------------------------------------------------------
// Presented monads and quotient presentations.

/// A monad together with an equational presentation: the theory, and an
/// interpretation of each theory operation as an algebraic operation on
/// `TX` for every carrier `X`.
#[derive(Clone)]
pub struct PresentedMonad {
    pub theory: Theory,
    pub monad: FiniteMonad,
    interp: Rc<dyn Fn(&str, &[Value], &FiniteSet) -> Value>,
}

impl PresentedMonad {
    pub fn new(
        theory: Theory,
        monad: FiniteMonad,
        interp: impl Fn(&str, &[Value], &FiniteSet) -> Value + 'static,
    ) -> PresentedMonad {
        PresentedMonad { theory, monad, interp: Rc::new(interp) }
    }

    pub fn op(&self, name: &str, args: &[Value], x: &FiniteSet) -> Value {
        (self.interp)(name, args, x)
    }

    /// Evaluate a term into `TX`; variables name atoms of `x` and map to
    /// unit values.
    pub fn eval_term(&self, term: &Term, x: &FiniteSet) -> Value {
        match term {
            Term::Var(v) => self.monad.unit(x, &Value::atom(v.clone())),
            Term::App(op, args) => {
                let vals: Vec<Value> = args.iter().map(|a| self.eval_term(a, x)).collect();
                self.op(op, &vals, x)
            }
        }
    }

    /// Spot-check that the presentation's equations hold in `TX` for all
    /// test sizes, quantifying variables over the (possibly fragmentary)
    /// carrier.
    pub fn check_presents(&self, max_size: usize) -> Option<String> {
        for n in 0..=max_size {
            let x = FiniteSet::atoms("v", n);
            let tx = self.monad.carrier(&x).set;
            for eq in &self.theory.equations {
                let k = eq.context.len();
                for tuple in crate::value::index_tuples(tx.len(), k) {
                    let env: BTreeMap<String, Value> = eq
                        .context
                        .iter()
                        .zip(&tuple)
                        .map(|(v, &i)| (v.clone(), tx.get(i).clone()))
                        .collect();
                    let l = self.eval_with(&eq.lhs, &env, &x);
                    let r = self.eval_with(&eq.rhs, &env, &x);
                    if l != r {
                        return Some(format!(
                            "{} fails in {} over {} at {:?}",
                            eq, self.monad.name, x, env
                        ));
                    }
                }
            }
        }
        None
    }

    fn eval_with(&self, term: &Term, env: &BTreeMap<String, Value>, x: &FiniteSet) -> Value {
        match term {
            Term::Var(v) => env[v].clone(),
            Term::App(op, args) => {
                let vals: Vec<Value> = args.iter().map(|a| self.eval_with(a, env, x)).collect();
                self.op(op, &vals, x)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientReport {
    pub source: String,
    pub target: String,
    pub generator_sizes: Vec<usize>,
    pub term_depth: usize,
    pub added_equations: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum QuotientError {
    #[error("morphism component is not surjective onto {monad} at size {size}: missed {value}")]
    NotSurjective { monad: String, size: usize, value: String },
    #[error("{0}")]
    Free(#[from] crate::free::FreeError),
}

/// Present the target of a surjective morphism: keep the source
/// presentation's signature and equations, and add one equation for each
/// pair of enumerated terms that the composite `alpha . eval` identifies.
/// Terms are enumerated to `depth` over generator sets of size
/// `1..=max_gens`; surjectivity of `alpha` is verified on those sizes
/// against the target's carrier fragment.
pub fn quotient_presentation(
    source: &PresentedMonad,
    alpha: &MonadMorphism,
    max_gens: usize,
    depth: usize,
    budget: usize,
) -> Result<(Theory, QuotientReport), QuotientError> {
    let mut theory = source.theory.clone();
    theory.name = format!("Quotient({},{})", source.theory.name, alpha.target.name);
    let mut added = 0usize;
    let mut sizes = Vec::new();
    for n in 1..=max_gens {
        let x = FiniteSet::atoms("v", n);
        sizes.push(n);
        // Enumerate source terms and bucket them by image in the target.
        let bank = crate::free::free_algebra(&source.theory, &x, depth, budget)?;
        let mut buckets: BTreeMap<Value, Vec<Term>> = BTreeMap::new();
        for class in &bank.classes {
            let sv = source.eval_term(&class.repr, &x);
            let tv = alpha.apply(&x, &sv);
            buckets.entry(tv).or_default().push(class.repr.clone());
        }
        let target_carrier = alpha.target.carrier(&x).set;
        for needed in target_carrier.iter() {
            if !buckets.contains_key(needed) {
                return Err(QuotientError::NotSurjective {
                    monad: alpha.target.name.clone(),
                    size: n,
                    value: needed.to_string(),
                });
            }
        }
        let context: Vec<String> = x.iter().map(Value::literal).collect();
        for terms in buckets.values() {
            for other in &terms[1..] {
                theory.equations.push(Equation {
                    context: context.clone(),
                    lhs: terms[0].clone(),
                    rhs: other.clone(),
                });
                added += 1;
            }
        }
    }
    let report = QuotientReport {
        source: source.theory.name.clone(),
        target: alpha.target.name.clone(),
        generator_sizes: sizes,
        term_depth: depth,
        added_equations: added,
    };
    Ok((theory, report))
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;
    use crate::value::parse_value;

    fn atoms(p: &str, n: usize) -> FiniteSet {
        FiniteSet::atoms(p, n)
    }

    fn v(s: &str) -> Value {
        parse_value(s).unwrap()
    }

    // |W(n)| = 1 + sum_{k=1..n} n!/(n-k)!; frozen small values.
    #[test]
    fn wellorder_carrier_counts() {
        let w = wellorder();
        assert_eq!(w.carrier(&atoms("x", 0)).set.len(), 1);
        assert_eq!(w.carrier(&atoms("x", 1)).set.len(), 2);
        assert_eq!(w.carrier(&atoms("x", 2)).set.len(), 5);
        assert_eq!(w.carrier(&atoms("x", 3)).set.len(), 16);
        assert!(w.carrier(&atoms("x", 3)).complete);
    }

    #[test]
    fn carrier_counts_match_formulas() {
        assert_eq!(state(2).carrier(&atoms("x", 2)).set.len(), 16); // (2*2)^2
        assert_eq!(cont(2).carrier(&atoms("x", 0)).set.len(), 2); // 2^(2^0)
        assert_eq!(cont(2).carrier(&atoms("x", 2)).set.len(), 16); // 2^(2^2)
        assert_eq!(powerset_full().carrier(&atoms("x", 3)).set.len(), 8);
        assert_eq!(powerset_nonempty().carrier(&atoms("x", 2)).set.len(), 3);
        assert_eq!(list(3).carrier(&atoms("x", 2)).set.len(), 15); // 1+2+4+8
        assert_eq!(multiset(3).carrier(&atoms("x", 2)).set.len(), 10);
        assert_eq!(output(2, 3).carrier(&atoms("x", 1)).set.len(), 15);
        assert_eq!(free_signature(2, 2).carrier(&atoms("x", 2)).set.len(), 38); // 2, 6, 38
        assert_eq!(sigma22(2).carrier(&atoms("x", 2)).set.len(), 202); // 2, 10, 202
        assert_eq!(
            exception_extend(state(2), 1).carrier(&atoms("x", 1)).set.len(),
            16 // store 2, carrier atoms x0,e0: (2*2)^2
        );
        // free monads over the empty set have empty carriers
        assert_eq!(sigma22(2).carrier(&atoms("x", 0)).set.len(), 0);
        assert!(sigma22(2).carrier(&atoms("x", 0)).complete);
    }

    #[test]
    fn units_take_expected_shapes() {
        let x = atoms("x", 2);
        assert_eq!(identity().unit(&x, &v("x0")), v("x0"));
        assert_eq!(wellorder().unit(&x, &v("x0")), v("[x0]"));
        assert_eq!(powerset_full().unit(&x, &v("x1")), v("{x1}"));
        assert_eq!(list(3).unit(&x, &v("x0")), v("[x0]"));
        assert_eq!(multiset(3).unit(&x, &v("x0")), v("{|x0:1|}"));
        assert_eq!(output(2, 3).unit(&x, &v("x0")), v("([],x0)"));
        assert_eq!(free_signature(2, 2).unit(&x, &v("x0")), v("leaf(x0)"));
        // cont unit at {x0,x1}: keys are the four tables {x0,x1} -> {r0,r1}
        let cu = cont(2).unit(&x, &v("x0"));
        let Value::Table(t) = &cu else { panic!() };
        assert_eq!(t.len(), 4);
        assert_eq!(t[&v("{x0->r1,x1->r0}")], v("r1"));
    }

    #[test]
    fn wellorder_extension_collapses_on_repetition() {
        let w = wellorder();
        let x = atoms("x", 2);
        let y = atoms("y", 2);
        // x0 |-> [y0], x1 |-> [y0,y1]: concatenation repeats y0.
        let f = Kleisli::from_fn(&x, &y, |xv| {
            if *xv == v("x0") { v("[y0]") } else { v("[y0,y1]") }
        });
        assert_eq!(w.ext(&f, &v("[x0,x1]")), Value::Bottom);
        assert_eq!(w.ext(&f, &v("[x1]")), v("[y0,y1]"));
        assert_eq!(w.ext(&f, &Value::Bottom), Value::Bottom);
    }

    #[test]
    fn derived_mu_and_fmap() {
        let p = powerset_full();
        let x = atoms("x", 2);
        assert_eq!(p.mu(&x, &v("{{x0},{x0,x1}}")), v("{x0,x1}"));
        let l = list(3);
        let y = atoms("y", 1);
        let h = FnTable::from_fn(&x, |_| v("y0"));
        assert_eq!(l.fmap(&h, &y, &v("[x0,x1]")), v("[y0,y0]"));
    }

    #[test]
    fn laws_pass_for_small_builtins() {
        for spec in ["identity", "terminal", "powerset:full", "powerset:nonempty", "wellorder", "state:S=2", "multiset:cap=3", "list:cap=3"] {
            let m = parse_monad(spec).unwrap();
            let rep = check_monad_laws(&m, &LawOptions::default());
            assert!(rep.passed(), "{spec}: {:?}", rep.witness);
            assert_eq!(rep.coverage, Coverage::Exhaustive, "{spec}");
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn laws_pass_for_wellorder_units_at_size_three() {
        let rep = check_monad_laws(
            &wellorder(),
            &LawOptions { max_size: 3, unit_laws_only: true, ..Default::default() },
        );
        assert!(rep.passed());
        assert_eq!(rep.coverage, Coverage::Exhaustive);
    }

    #[test]
    fn oversized_blocks_fall_back_to_sampling() {
        let m = free_signature(2, 2);
        let rep = check_monad_laws(
            &m,
            &LawOptions { eval_budget: 200_000, samples: 200, ..Default::default() },
        );
        assert!(rep.passed(), "{:?}", rep.witness);
        let Coverage::Sampled { exhaustive_blocks, sampled_blocks, .. } = rep.coverage else {
            panic!("tree carriers at size 2 must overflow a 200k budget")
        };
        assert!(exhaustive_blocks > 0 && sampled_blocks > 0);
        assert!(rep.bounded_fragment);
    }

    #[test]
    fn broken_unit_is_caught_with_witness() {
        // list monad with a doubled unit: eta* is no longer the identity.
        let bad = FiniteMonad::new(
            "list:bad-unit",
            |x| list(3).carrier(x),
            |_, v| Value::Seq(vec![v.clone(), v.clone()]),
            |f, m| {
                let Value::Seq(items) = m else { panic!() };
                let mut out = Vec::new();
                for i in items {
                    let Value::Seq(fv) = f.apply(i) else { panic!() };
                    out.extend(fv.iter().cloned());
                }
                Value::Seq(out)
            },
        );
        let rep = check_monad_laws(&bad, &LawOptions::default());
        let w = rep.witness.expect("broken unit must be caught");
        assert_eq!(w.law, "eta* = id");
        // the witness replays to the same mismatch
        let x: FiniteSet = w.x.iter().map(|s| parse_value(s).unwrap()).collect();
        let (l, r) = law_instance(&bad, &w.law, &x, &FiniteSet::empty(), &FiniteSet::empty(), None, None, &w.m).unwrap();
        assert_ne!(l, r);
        assert_eq!((l, r), (w.left, w.right));
    }

    #[test]
    fn broken_extension_is_caught_with_witness() {
        // "first projection" extension ignores f; the unit laws with
        // distinct source and target expose it.
        let bad = FiniteMonad::new(
            "identity:bad-ext",
            |x| Carrier { set: x.clone(), complete: true },
            |_, v| v.clone(),
            |_, m| m.clone(),
        );
        let rep = check_monad_laws(&bad, &LawOptions::default());
        let w = rep.witness.expect("broken extension must be caught");
        assert_eq!(w.law, "f* . eta = f");
        let x: FiniteSet = w.x.iter().map(|s| parse_value(s).unwrap()).collect();
        let y: FiniteSet = w.y.iter().map(|s| parse_value(s).unwrap()).collect();
        let f = FnTable::from_value(w.f.as_ref().unwrap()).unwrap();
        let (l, r) = law_instance(&bad, &w.law, &x, &y, &FiniteSet::empty(), Some(&f), None, &w.m).unwrap();
        assert_ne!(l, r);
        assert_eq!((l, r), (w.left, w.right));
    }

    #[test]
    fn stale_store_state_fails_laws() {
        // ext that reads the original store instead of threading it.
        let store = FiniteSet::atoms("s", 2);
        let st = store.clone();
        let good = state(2);
        let bad = FiniteMonad::new(
            "state:stale",
            move |x| good.carrier(x),
            {
                let st = store.clone();
                move |_, v| FnTable::from_fn(&st, |sv| Value::pair(sv.clone(), v.clone())).as_value()
            },
            move |f, m| {
                let mt = FnTable::from_value(m).unwrap();
                FnTable::from_fn(&st, |sv| {
                    let Value::Pair(_, xv) = mt.apply(sv) else { panic!() };
                    FnTable::from_value(f.apply(xv)).unwrap().apply(sv).clone()
                })
                .as_value()
            },
        );
        let rep = check_monad_laws(&bad, &LawOptions::default());
        assert!(!rep.passed());
    }

    #[test]
    fn powerset_commutes_state_does_not() {
        let rep = is_commutative(&powerset_full(), 2);
        assert!(rep.commutative, "{:?}", rep.witness);
        let rep = is_commutative(&state(2), 2);
        let w = rep.witness.expect("state must fail commutativity");
        // replay
        let a: FiniteSet = w.a.iter().map(|s| parse_value(s).unwrap()).collect();
        let b: FiniteSet = w.b.iter().map(|s| parse_value(s).unwrap()).collect();
        let (l, r) = pair_exchange(&state(2), &a, &w.p, &b, &w.q);
        assert_eq!((l, r), (w.left.clone(), w.right.clone()));
        assert_ne!(w.left, w.right);
    }

    #[test]
    fn wellorder_fails_commutativity_at_two_and_two() {
        let rep = is_commutative(&wellorder(), 2);
        let w = rep.witness.expect("order of concatenation must matter");
        assert_eq!((w.a.len(), w.b.len()), (2, 2));
        // minimal witness: the first interleaving that distinguishes orders
        assert_eq!(w.p, v("[a0,a1]"));
        assert_eq!(w.q, v("[b0,b1]"));
        assert_eq!(w.left, v("[(a0,b0),(a0,b1),(a1,b0),(a1,b1)]"));
        assert_eq!(w.right, v("[(a0,b0),(a1,b0),(a0,b1),(a1,b1)]"));
    }

    #[test]
    fn theorify_builtin_truncations_hold() {
        for (spec, arity, wsize) in
            [("powerset:full", 2, 1), ("wellorder", 2, 1), ("identity", 2, 2), ("state:S=2", 2, 1)]
        {
            let m = parse_monad(spec).unwrap();
            let (theory, rep) = theorify(&m, arity, wsize);
            assert!(theory.validate().is_ok(), "{spec}");
            assert!(rep.violations.is_empty(), "{spec}: {:?}", rep.violations);
            assert!(rep.equations > 0 && rep.ops > 0, "{spec}");
        }
    }

    #[test]
    fn theorify_catches_a_broken_extension() {
        let bad = FiniteMonad::new(
            "powerset:intersecting",
            |x| powerset_full().carrier(x),
            |_, v| Value::Set([v.clone()].into()),
            |f, m| {
                // union replaced by intersection over nonunary inputs
                let Value::Set(items) = m else { panic!() };
                let sets: Vec<&Value> = items.iter().map(|i| f.apply(i)).collect();
                match sets.as_slice() {
                    [] => Value::Set(Default::default()),
                    [one] => (*one).clone(),
                    many => {
                        let mut acc = match many[0] {
                            Value::Set(s) => s.clone(),
                            _ => panic!(),
                        };
                        for s in &many[1..] {
                            let Value::Set(s) = s else { panic!() };
                            acc = acc.intersection(s).cloned().collect();
                        }
                        Value::Set(acc)
                    }
                }
            },
        );
        let (_, rep) = theorify(&bad, 2, 1);
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn stock_morphisms_check_out() {
        assert!(morphism_list_to_multiset(3).check(2).failure.is_none());
        assert!(morphism_list_to_powerset(3).check(2).failure.is_none());
        assert!(morphism_unit(wellorder()).check(2).failure.is_none());
        assert!(morphism_to_terminal(state(2)).check(1).failure.is_none());
    }

    #[test]
    fn broken_morphism_is_rejected() {
        // drops the tail of the list: not compatible with extension
        let bad = MonadMorphism::new(
            "list->list:head",
            list(3),
            list(3),
            |_, m| {
                let Value::Seq(items) = m else { panic!() };
                Value::Seq(items.iter().take(1).cloned().collect())
            },
        );
        assert!(bad.check(2).failure.is_some());
    }

    #[test]
    fn builtin_presentations_satisfy_their_theories() {
        assert_eq!(presented_semilattice().check_presents(2), None);
        assert_eq!(presented_monoid(3).check_presents(2), None);
        assert_eq!(presented_state(2).check_presents(1), None);
        assert_eq!(presented_sigma22(2).check_presents(1), None);
        assert_eq!(presented_wellorder(2).check_presents(2), None);
        assert_eq!(presented_empty().check_presents(2), None);
    }

    #[test]
    fn presented_eval_term_matches_monad_values() {
        use crate::theory::Term;
        let p = presented_semilattice();
        let x = atoms("v", 2);
        let t = Term::app("join", vec![Term::var("v0"), Term::app("join", vec![Term::var("v1"), Term::var("v0")])]);
        assert_eq!(p.eval_term(&t, &x), v("{v0,v1}"));
        assert_eq!(p.eval_term(&Term::app("bot", vec![]), &x), v("{}"));
    }

    #[test]
    fn quotient_of_lists_onto_powerset_is_the_semilattice_quotient() {
        let source = presented_monoid(3);
        let alpha = morphism_list_to_powerset(3);
        let (theory, rep) =
            quotient_presentation(&source, &alpha, 2, 2, crate::DEFAULT_TERM_BUDGET).unwrap();
        assert!(rep.added_equations > 0);
        assert!(theory.validate().is_ok());
        // the quotient theory identifies exactly the word/subset collapse:
        // its free algebra over two generators is the 4-element powerset
        let fa = crate::free::free_algebra(&theory, &atoms("v", 2), 2, crate::DEFAULT_TERM_BUDGET)
            .unwrap();
        assert_eq!(fa.classes.len(), 4);
    }

    #[test]
    fn quotient_requires_surjectivity() {
        let source = presented_empty();
        let alpha = morphism_unit(wellorder());
        let err = quotient_presentation(&source, &alpha, 1, 2, crate::DEFAULT_TERM_BUDGET)
            .expect_err("units alone cannot cover bottom");
        assert!(matches!(err, QuotientError::NotSurjective { .. }));
    }

    #[test]
    fn spec_strings_round_trip() {
        for spec in [
            "identity",
            "terminal",
            "state:S=2",
            "powerset:full",
            "powerset:nonempty",
            "list:cap=3",
            "multiset:cap=3",
            "cont:R=2",
            "wellorder",
            "free:I=2:depth=2",
            "sigma22:depth=2",
            "output:O=2:cap=3",
            "state:S=2:exc=1",
            "wellorder:exc=2",
        ] {
            let m = parse_monad(spec).unwrap();
            assert_eq!(m.name, spec, "canonical names round-trip");
            assert_eq!(parse_monad(&m.name).unwrap().name, m.name);
        }
        // defaults fill in
        assert_eq!(parse_monad("state").unwrap().name, "state:S=2");
        assert_eq!(parse_monad("powerset").unwrap().name, "powerset:full");
        assert_eq!(parse_monad("list").unwrap().name, "list:cap=3");
        // junk is rejected
        assert!(parse_monad("poset").is_err());
        assert!(parse_monad("state:S=x").is_err());
        assert!(parse_monad("powerset:odd").is_err());
    }

    #[test]
    fn law_suite_entries_all_parse() {
        let suite = law_suite();
        assert!(suite.len() >= 20);
        for (spec, _) in &suite {
            parse_monad(spec).unwrap();
        }
    }

    #[test]
    fn exception_extension_keeps_labels_separate() {
        let m = exception_extend(powerset_full(), 1);
        let x = atoms("x", 1);
        // unit lands in the left summand
        assert_eq!(m.unit(&x, &v("x0")), v("{x0}"));
        // raising: a computation that already holds the label passes through
        let y = atoms("y", 1);
        let f = Kleisli::from_fn(&x, &y, |_| v("{y0}"));
        assert_eq!(m.ext(&f, &v("{e0}")), v("{e0}"));
        assert_eq!(m.ext(&f, &v("{e0,x0}")), v("{e0,y0}"));
    }
}
