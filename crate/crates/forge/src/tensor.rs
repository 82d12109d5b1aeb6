//! Two monad structures sharing one finite carrier.
//!
//! The semantic view keeps an Eilenberg-Moore structure map per monad and
//! checks the bilinear tensor law on grids `f: Y x Z -> carrier`: folding
//! rows first and columns second must agree with the other order. The
//! syntactic view keeps operation tables for two theories and checks every
//! pairwise commutation instance. On presented pairs the views agree;
//! `commutation_cross_check` exercises that agreement on random candidates.
//!
//! Free tensor algebras are built by alternating closure over the shared
//! term bank (`saturate_free_tensor`), and `verify_state_tensor` confirms
//! the closed form of the powerset/state tensor on small instances.
//! Enumeration of reachable tensor algebras lives in [`search`].

pub mod search;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::free::{free_algebra_saturating, FreeAlgebra, FreeError};
use crate::model::{FinAlgebra, ModelError, OpTable, Violation};
use crate::monad::{catalog, FiniteMonad, Kleisli};
use crate::theory::{self, Theory};
use crate::value::{all_functions, FiniteSet, FnTable, Value};

fn vpair(a: &Value, b: &Value) -> Value {
    Value::Pair(Box::new(a.clone()), Box::new(b.clone()))
}

// ---------------------------------------------------------------------------
// Eilenberg-Moore algebras.

/// A monad structure map on a finite carrier: `structure` sends the stored
/// fragment of `T(carrier)` into the carrier. Whether it really is an
/// algebra for the monad is `check_em_algebra`'s question, not a
/// construction invariant; only totality is enforced here.
#[derive(Clone)]
pub struct EmAlgebra {
    pub monad: FiniteMonad,
    pub carrier: FiniteSet,
    pub structure: FnTable,
}

impl EmAlgebra {
    pub fn new(monad: FiniteMonad, carrier: FiniteSet, structure: FnTable) -> Result<EmAlgebra, String> {
        let ta = monad.carrier(&carrier);
        for v in ta.set.iter() {
            match structure.get(v) {
                None => return Err(format!("structure map is missing {v}")),
                Some(out) if !carrier.contains(out) => {
                    return Err(format!("structure maps {v} to {out}, outside the carrier"))
                }
                _ => {}
            }
        }
        Ok(EmAlgebra { monad, carrier, structure })
    }

    /// The identity monad's unique structure on a carrier.
    pub fn identity(carrier: &FiniteSet) -> EmAlgebra {
        let structure = FnTable::from_fn(carrier, |v| v.clone());
        EmAlgebra { monad: catalog::identity(), carrier: carrier.clone(), structure }
    }

    /// Structure map; `None` when `v` falls outside the stored fragment.
    pub fn alpha(&self, v: &Value) -> Option<&Value> {
        self.structure.get(v)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "law")]
#[serde(rename_all = "camelCase")]
pub enum EmWitness {
    /// `alpha(unit(x)) != x`.
    Unit { x: Value, got: Value },
    /// The multiplication law in Kleisli form: for `f: Y -> T(carrier)` and
    /// `m` in `T(Y)`, `alpha(ext(f)(m)) != alpha(ext(unit . alpha . f)(m))`.
    Mult { test_size: usize, f: FnTable, m: Value, left: Value, right: Value },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EmReport {
    pub monad: String,
    pub carrier: usize,
    pub bound: usize,
    pub ok: bool,
    pub checked: u64,
    /// Law instances whose evaluation left the stored fragment.
    pub skipped: u64,
    pub bounded_fragment: bool,
    pub witness: Option<EmWitness>,
}

/// Check both algebra laws. The unit law is exhaustive over the carrier;
/// the multiplication law runs in Kleisli form over every `f: Y ->
/// T(carrier)` and `m` in `T(Y)` for test sets `Y` of size `0..=bound`.
/// Instances that escape a bounded carrier fragment are counted as skipped,
/// never as passed.
pub fn check_em_algebra(alg: &EmAlgebra, bound: usize) -> EmReport {
    let ta = alg.monad.carrier(&alg.carrier);
    let tavec: Vec<Value> = ta.set.iter().cloned().collect();
    let mut report = EmReport {
        monad: alg.monad.name.clone(),
        carrier: alg.carrier.len(),
        bound,
        ok: true,
        checked: 0,
        skipped: 0,
        bounded_fragment: !ta.complete,
        witness: None,
    };

    for x in alg.carrier.iter() {
        let e = alg.monad.unit(&alg.carrier, x);
        match alg.alpha(&e) {
            Some(v) if v == x => report.checked += 1,
            Some(v) => {
                report.ok = false;
                report.witness = Some(EmWitness::Unit { x: x.clone(), got: v.clone() });
                return report;
            }
            None => {
                report.skipped += 1;
                report.bounded_fragment = true;
            }
        }
    }

    for size in 0..=bound {
        let y = FiniteSet::atoms("w", size);
        let ty = alg.monad.carrier(&y);
        report.bounded_fragment |= !ty.complete;
        for f in all_functions(&y, &tavec) {
            let fk = Kleisli::new(f.clone(), ta.set.clone());
            let gk = Kleisli::from_fn(&y, &ta.set, |yv| {
                let a = alg.alpha(f.apply(yv)).expect("structure is total on the fragment");
                alg.monad.unit(&alg.carrier, a)
            });
            for m in ty.set.iter() {
                let l = alg.monad.ext(&fk, m);
                let r = alg.monad.ext(&gk, m);
                match (alg.alpha(&l), alg.alpha(&r)) {
                    (Some(lv), Some(rv)) => {
                        if lv == rv {
                            report.checked += 1;
                        } else {
                            report.ok = false;
                            report.witness = Some(EmWitness::Mult {
                                test_size: size,
                                f: f.clone(),
                                m: m.clone(),
                                left: lv.clone(),
                                right: rv.clone(),
                            });
                            return report;
                        }
                    }
                    _ => {
                        report.skipped += 1;
                        report.bounded_fragment = true;
                    }
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Tensor algebras and the tensor law.

/// One carrier, two structure maps: `s_struct` is the alpha side of the
/// tensor law, `t_struct` the beta side.
#[derive(Clone)]
pub struct TensorAlgebra {
    pub s_struct: EmAlgebra,
    pub t_struct: EmAlgebra,
}

impl TensorAlgebra {
    pub fn new(s_struct: EmAlgebra, t_struct: EmAlgebra) -> Result<TensorAlgebra, String> {
        if s_struct.carrier != t_struct.carrier {
            return Err("the two structures must share one carrier".into());
        }
        Ok(TensorAlgebra { s_struct, t_struct })
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.s_struct.carrier
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TensorWitness {
    pub y_size: usize,
    pub z_size: usize,
    /// The grid, keyed by `(y,z)` pairs.
    pub f: FnTable,
    pub p: Value,
    pub q: Value,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TensorLawReport {
    pub ok: bool,
    pub checked: u64,
    pub skipped: u64,
    /// Instance budget ran out before the sweep finished.
    pub partial: bool,
    pub bounded_fragment: bool,
    pub witness: Option<TensorWitness>,
}

fn grid_column(f: &FnTable, yset: &FiniteSet, zv: &Value) -> FnTable {
    FnTable::from_fn(yset, |yv| f.apply(&vpair(yv, zv)).clone())
}

fn grid_row(f: &FnTable, zset: &FiniteSet, yv: &Value) -> FnTable {
    FnTable::from_fn(zset, |zv| f.apply(&vpair(yv, zv)).clone())
}

/// Evaluate both sides of the tensor law on one instance: the left side
/// folds grid columns through alpha and the result through beta, the right
/// side folds rows through beta and the result through alpha. `None` when
/// either evaluation leaves a bounded fragment.
pub fn tensor_law_instance(
    alg: &TensorAlgebra,
    y_size: usize,
    z_size: usize,
    f: &FnTable,
    p: &Value,
    q: &Value,
) -> Option<(Value, Value)> {
    let yset = FiniteSet::atoms("y", y_size);
    let zset = FiniteSet::atoms("z", z_size);
    let x = alg.carrier();
    let s = &alg.s_struct;
    let t = &alg.t_struct;

    let mut hmap = BTreeMap::new();
    for zv in zset.iter() {
        let v = s.alpha(&s.monad.fmap(&grid_column(f, &yset, zv), x, p))?;
        hmap.insert(zv.clone(), v.clone());
    }
    let left = t.alpha(&t.monad.fmap(&FnTable::new(hmap), x, q))?.clone();

    let mut gmap = BTreeMap::new();
    for yv in yset.iter() {
        let v = t.alpha(&t.monad.fmap(&grid_row(f, &zset, yv), x, q))?;
        gmap.insert(yv.clone(), v.clone());
    }
    let right = s.alpha(&s.monad.fmap(&FnTable::new(gmap), x, p))?.clone();
    Some((left, right))
}

/// Exhaust the tensor law over test sets `|Y| <= y_bound`, `|Z| <= z_bound`,
/// all `p` in `S(Y)`, `q` in `T(Z)` and all grids `f: Y x Z -> carrier`.
/// `budget` caps the number of instances (checked plus skipped); exceeding
/// it sets the partial flag instead of lying about coverage.
pub fn check_tensor_law(alg: &TensorAlgebra, y_bound: usize, z_bound: usize, budget: u64) -> TensorLawReport {
    let x = alg.carrier();
    let xvec: Vec<Value> = x.iter().cloned().collect();
    let s = &alg.s_struct;
    let t = &alg.t_struct;
    let mut report = TensorLawReport {
        ok: true,
        checked: 0,
        skipped: 0,
        partial: false,
        bounded_fragment: !s.monad.carrier(x).complete || !t.monad.carrier(x).complete,
        witness: None,
    };

    for y_size in 0..=y_bound {
        for z_size in 0..=z_bound {
            let yset = FiniteSet::atoms("y", y_size);
            let zset = FiniteSet::atoms("z", z_size);
            let sy = s.monad.carrier(&yset);
            let tz = t.monad.carrier(&zset);
            report.bounded_fragment |= !sy.complete || !tz.complete;
            let grid: FiniteSet = yset
                .iter()
                .flat_map(|yv| zset.iter().map(move |zv| vpair(yv, zv)))
                .collect();
            for f in all_functions(&grid, &xvec) {
                // Column folds per p and row folds per q are shared across
                // the (p,q) square.
                let hs: Vec<Option<FnTable>> = sy
                    .set
                    .iter()
                    .map(|p| {
                        let mut hmap = BTreeMap::new();
                        for zv in zset.iter() {
                            let v = s.alpha(&s.monad.fmap(&grid_column(&f, &yset, zv), x, p))?;
                            hmap.insert(zv.clone(), v.clone());
                        }
                        Some(FnTable::new(hmap))
                    })
                    .collect();
                let gs: Vec<Option<FnTable>> = tz
                    .set
                    .iter()
                    .map(|q| {
                        let mut gmap = BTreeMap::new();
                        for yv in yset.iter() {
                            let v = t.alpha(&t.monad.fmap(&grid_row(&f, &zset, yv), x, q))?;
                            gmap.insert(yv.clone(), v.clone());
                        }
                        Some(FnTable::new(gmap))
                    })
                    .collect();
                for (pi, p) in sy.set.iter().enumerate() {
                    for (qi, q) in tz.set.iter().enumerate() {
                        if report.checked + report.skipped >= budget {
                            report.partial = true;
                            return report;
                        }
                        let (Some(h), Some(g)) = (&hs[pi], &gs[qi]) else {
                            report.skipped += 1;
                            continue;
                        };
                        let lv = t.alpha(&t.monad.fmap(h, x, q));
                        let rv = s.alpha(&s.monad.fmap(g, x, p));
                        match (lv, rv) {
                            (Some(l), Some(r)) => {
                                if l == r {
                                    report.checked += 1;
                                } else {
                                    report.ok = false;
                                    report.witness = Some(TensorWitness {
                                        y_size,
                                        z_size,
                                        f: f.clone(),
                                        p: p.clone(),
                                        q: q.clone(),
                                        left: l.clone(),
                                        right: r.clone(),
                                    });
                                    return report;
                                }
                            }
                            _ => report.skipped += 1,
                        }
                    }
                }
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Syntactic mode: commutation of operation tables.

#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub ok: bool,
    pub pairs: usize,
    pub checked: u64,
    pub witness: Option<Violation>,
}

/// Check every commutation instance between `left`'s and `right`'s
/// operations over `alg`'s tables: `f` applied to `g`-rows must equal `g`
/// applied to `f`-columns for all carrier assignments. This is the
/// syntactic counterpart of `check_tensor_law`.
pub fn check_commutation_tables(
    left: &Theory,
    right: &Theory,
    alg: &FinAlgebra,
) -> Result<CommutationReport, ModelError> {
    let n = alg.carrier.len();
    for op in left.ops.iter().chain(right.ops.iter()) {
        let t = alg.tables.get(&op.name).ok_or_else(|| ModelError::MissingTable(op.name.clone()))?;
        if t.arity != op.arity {
            return Err(ModelError::TableArity { op: op.name.clone(), expected: op.arity, got: t.arity });
        }
        let want = n.checked_pow(op.arity as u32).unwrap_or(usize::MAX);
        if t.data.len() != want {
            return Err(ModelError::TableSize { op: op.name.clone(), expected: want, got: t.data.len() });
        }
        if t.data.iter().any(|&v| v >= n) {
            return Err(ModelError::RangeError { op: op.name.clone() });
        }
    }

    let mut report = CommutationReport {
        ok: true,
        pairs: left.ops.len() * right.ops.len(),
        checked: 0,
        witness: None,
    };
    for f in &left.ops {
        for g in &right.ops {
            let eq = theory::commutation_equation(f, g);
            for tuple in crate::value::index_tuples(n, eq.context.len()) {
                let env: BTreeMap<String, usize> =
                    eq.context.iter().cloned().zip(tuple.iter().copied()).collect();
                let l = alg.eval(&eq.lhs, &env)?;
                let r = alg.eval(&eq.rhs, &env)?;
                if l != r {
                    report.ok = false;
                    report.witness = Some(Violation {
                        equation: eq.to_string(),
                        assignment: eq
                            .context
                            .iter()
                            .zip(&tuple)
                            .map(|(v, &i)| (v.clone(), alg.carrier.get(i).clone()))
                            .collect(),
                        lhs_value: alg.carrier.get(l).clone(),
                        rhs_value: alg.carrier.get(r).clone(),
                    });
                    return Ok(report);
                }
                report.checked += 1;
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Bridges from operation tables to structure maps.

/// Read a `join`/`bot` table pair as a full-powerset structure: alpha folds
/// a subset through `join` starting from `bot`. When the tables satisfy the
/// bounded-semilattice equations this is the unique structure extending
/// them; on arbitrary tables it is only a candidate for the checkers.
pub fn em_from_semilattice_tables(alg: &FinAlgebra) -> Result<EmAlgebra, String> {
    let n = alg.carrier.len();
    let join = alg.tables.get("join").ok_or("missing 'join' table")?;
    let bot = alg.tables.get("bot").ok_or("missing 'bot' table")?;
    if join.arity != 2 || bot.arity != 0 {
        return Err("'join' must be binary and 'bot' nullary".into());
    }
    let monad = catalog::powerset_full();
    let ta = monad.carrier(&alg.carrier);
    let structure = FnTable::from_fn(&ta.set, |sv| {
        let Value::Set(items) = sv else { panic!("powerset value is not a set") };
        let mut acc = bot.get(n, &[]);
        for item in items {
            let i = alg.carrier.index_of(item).expect("subset of the carrier");
            acc = join.get(n, &[acc, i]);
        }
        alg.carrier.get(acc).clone()
    });
    EmAlgebra::new(monad, alg.carrier.clone(), structure)
}

/// Read `u0`/`u1` tables as a structure for the free monad on two binary
/// operations, truncated at `depth`: alpha folds a tree bottom-up through
/// the tables. Any total table pair yields a lawful structure, because the
/// theory is equation-free.
pub fn em_from_sigma22_tables(alg: &FinAlgebra, depth: usize) -> Result<EmAlgebra, String> {
    let n = alg.carrier.len();
    for name in ["u0", "u1"] {
        let t = alg.tables.get(name).ok_or_else(|| format!("missing '{name}' table"))?;
        if t.arity != 2 {
            return Err(format!("'{name}' must be binary"));
        }
    }
    let u = [alg.tables["u0"].clone(), alg.tables["u1"].clone()];
    let monad = catalog::sigma22(depth);
    let ta = monad.carrier(&alg.carrier);

    fn fold(v: &Value, carrier: &FiniteSet, u: &[OpTable; 2], n: usize) -> usize {
        match v {
            Value::Leaf(x) => carrier.index_of(x).expect("leaf in the carrier"),
            Value::Node(tag, children) => {
                let a = fold(&children[0], carrier, u, n);
                let b = fold(&children[1], carrier, u, n);
                u[*tag].get(n, &[a, b])
            }
            other => panic!("tree value expected, got {other}"),
        }
    }
    let carrier = alg.carrier.clone();
    let structure =
        FnTable::from_fn(&ta.set, |tv| carrier.get(fold(tv, &carrier, &u, n)).clone());
    EmAlgebra::new(monad, alg.carrier.clone(), structure)
}

// ---------------------------------------------------------------------------
// Random candidates and the syntactic/semantic cross-check.

/// A random syntactic candidate between Semilattice and Sigma22Free. The
/// join side is always genuine: the carrier is a union-closed set family
/// over `universe` ground atoms, join is union, bot is the empty set. The
/// u-tables draw from fully random tables plus a menu of commuting ones
/// (join itself, a projection, constantly bot), so both verdicts show up in
/// a sample run.
pub fn random_commutation_candidate(universe: usize, rng: &mut ChaCha8Rng) -> FinAlgebra {
    assert!(universe > 0 && universe <= 16, "ground universe out of range");
    let ground = FiniteSet::atoms("e", universe.min(9));
    let full: u32 = (1 << ground.len()) - 1;
    let s1 = rng.gen_range(0..=full);
    let s2 = rng.gen_range(0..=full);
    let masks: BTreeSet<u32> = [0, s1, s2, s1 | s2].into();
    let masks: Vec<u32> = masks.into_iter().collect();
    let as_set = |m: u32| {
        Value::Set(
            ground
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, v)| v.clone())
                .collect(),
        )
    };
    let carrier = FiniteSet::new(masks.iter().map(|&m| as_set(m)).collect());
    let n = carrier.len();
    let index_of_mask = |m: u32| carrier.index_of(&as_set(m)).expect("mask in the family");
    let mask_of: Vec<u32> = {
        let mut v = vec![0; n];
        for &m in &masks {
            v[index_of_mask(m)] = m;
        }
        v
    };

    let mut tables = BTreeMap::new();
    tables.insert(
        "join".to_string(),
        OpTable::from_fn(2, n, |t| index_of_mask(mask_of[t[0]] | mask_of[t[1]])),
    );
    tables.insert("bot".to_string(), OpTable::constant(index_of_mask(0)));
    let bot_ix = index_of_mask(0);
    for name in ["u0", "u1"] {
        let style = rng.gen_range(0..6u8);
        let table = match style {
            0..=2 => {
                let data: Vec<usize> = (0..n * n).map(|_| rng.gen_range(0..n)).collect();
                OpTable::new(2, data)
            }
            3 => tables["join"].clone(),
            4 => OpTable::from_fn(2, n, |t| t[0]),
            _ => OpTable::from_fn(2, n, |_| bot_ix),
        };
        tables.insert(name.to_string(), table);
    }
    FinAlgebra { carrier, generators: Vec::new(), tables }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossCheckReport {
    pub samples: usize,
    pub universe: usize,
    pub seed: u64,
    pub agreements: usize,
    /// Samples where both checkers said yes.
    pub both_pass: usize,
    /// Samples where both checkers said no.
    pub both_fail: usize,
    pub disagreements: Vec<serde_json::Value>,
    pub ok: bool,
}

/// Run `check_commutation_tables` and `check_tensor_law` (bounds 2,2, via
/// the powerset and tree-fold bridges) on random candidates and demand they
/// return the same verdict on every one.
pub fn commutation_cross_check(samples: usize, universe: usize, seed: u64) -> CrossCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lt = theory::semilattice();
    let rt = theory::sigma22_free();
    let mut report = CrossCheckReport {
        samples,
        universe,
        seed,
        agreements: 0,
        both_pass: 0,
        both_fail: 0,
        disagreements: Vec::new(),
        ok: true,
    };
    for _ in 0..samples {
        let alg = random_commutation_candidate(universe, &mut rng);
        let syntactic = check_commutation_tables(&lt, &rt, &alg)
            .expect("candidate tables are total")
            .ok;
        let s = em_from_semilattice_tables(&alg).expect("candidate has join/bot");
        let t = em_from_sigma22_tables(&alg, 1).expect("candidate has u0/u1");
        let pair = TensorAlgebra::new(s, t).expect("shared carrier");
        let semantic = check_tensor_law(&pair, 2, 2, 10_000_000).ok;
        if syntactic == semantic {
            report.agreements += 1;
            if syntactic {
                report.both_pass += 1;
            } else {
                report.both_fail += 1;
            }
        } else {
            report.ok = false;
            report.disagreements.push(serde_json::json!({
                "algebra": alg.to_json(),
                "commutation_tables": syntactic,
                "tensor_law": semantic,
            }));
        }
    }
    report.ok &= report.agreements == samples;
    report
}

// ---------------------------------------------------------------------------
// Free tensor algebras by alternating saturation.

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SaturateReport {
    pub theory: String,
    pub generators: usize,
    pub max_rounds: usize,
    pub rounds: usize,
    pub stabilized: bool,
    /// The alternation converged: one more monad-operation layer followed
    /// by one more join layer adds nothing, so the carrier equals the
    /// operation closure of its own join closure.
    pub pattern_observed: bool,
    pub classes: usize,
    /// Class count after seeding and after each round.
    pub class_trace: Vec<usize>,
}

/// Build the free algebra of `tensor(Semilattice, m_theory)` over `gens`
/// generators by alternating closure: one layer of monad operations over
/// class representatives, re-quotient, one layer of joins, re-quotient,
/// until a full round adds no new term or `max_rounds` runs out.
pub fn saturate_free_tensor(
    m_theory: &Theory,
    gens: usize,
    max_rounds: usize,
    budget: usize,
) -> Result<(FreeAlgebra, SaturateReport), FreeError> {
    let sl = theory::semilattice();
    let full = theory::theory_tensor(&sl, m_theory);
    full.validate()?;
    // theory_tensor lists the left theory's operations first,
    // post-qualification.
    let join_ops: Vec<String> = full.ops[..sl.ops.len()].iter().map(|o| o.name.clone()).collect();
    let monad_ops: Vec<String> = full.ops[sl.ops.len()..].iter().map(|o| o.name.clone()).collect();

    let gen_set = FiniteSet::atoms("x", gens);
    let mut bank = crate::free::Bank::new(&full, &gen_set);
    bank.seed();
    bank.close();
    let mut trace = vec![bank.class_count()];
    let mut rounds = 0;
    let mut stabilized = false;
    while rounds < max_rounds {
        let grew_m = bank.grow_over_reps(&monad_ops, budget)?;
        bank.close();
        let grew_j = bank.grow_over_reps(&join_ops, budget)?;
        bank.close();
        rounds += 1;
        trace.push(bank.class_count());
        if grew_m == 0 && grew_j == 0 {
            stabilized = true;
            break;
        }
    }
    let boundary = if stabilized { usize::MAX } else { bank.max_level() };
    let mut algebra = bank.snapshot(boundary);
    if stabilized {
        algebra.closed = true;
    }
    let report = SaturateReport {
        theory: full.name.clone(),
        generators: gens,
        max_rounds,
        rounds,
        stabilized,
        pattern_observed: stabilized,
        classes: algebra.classes.len(),
        class_trace: trace,
    };
    Ok((algebra, report))
}

/// Whether the canonical generator-respecting map from a free fragment to
/// `alg` is defined on every class, respects every enumerated operation
/// entry, and covers the whole carrier. Generators are matched by position:
/// free generator `i` goes to `alg.generators[i]`.
pub fn maps_onto(free: &FreeAlgebra, alg: &FinAlgebra) -> bool {
    if free.generators.len() != alg.generators.len() {
        return false;
    }
    let n = alg.carrier.len();
    let mut env: BTreeMap<String, usize> = BTreeMap::new();
    for (g, v) in free.generators.iter().zip(&alg.generators) {
        match alg.carrier.index_of(v) {
            Some(i) => {
                env.insert(g.literal(), i);
            }
            None => return false,
        }
    }
    let mut img = Vec::with_capacity(free.classes.len());
    for c in &free.classes {
        match alg.eval(&c.repr, &env) {
            Ok(i) => img.push(i),
            Err(_) => return false,
        }
    }
    for (op, table) in &free.op_tables {
        let Some(at) = alg.tables.get(op) else { return false };
        for (args, &res) in table {
            let mapped: Vec<usize> = args.iter().map(|&c| img[c]).collect();
            if at.get(n, &mapped) != img[res] {
                return false;
            }
        }
    }
    let hit: BTreeSet<usize> = img.iter().copied().collect();
    hit.len() == n
}

// ---------------------------------------------------------------------------
// The powerset/state tensor identity.

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StateTensorReport {
    pub s_size: usize,
    pub x_size: usize,
    /// `(2^(s_size * x_size))^s_size`, the size of `S -> P(S x X)`.
    pub expected: u128,
    pub found: usize,
    pub rounds: usize,
    pub stabilized: bool,
    pub model_satisfies_theory: bool,
    pub bijection: bool,
    /// pass, fail, or inconclusive (the free side did not stabilize).
    pub outcome: String,
}

/// Check `tensor(Semilattice, StateTheory(s_size))` free over `x_size`
/// generators against its closed form: the algebra of all maps
/// `S -> P(S x X)` with pointwise union, state lookup and update, and
/// generator `x` interpreted as `fun s -> {(s, x)}`. Passing means the
/// class count matches and the canonical generator-respecting map is a
/// bijection respecting every enumerated operation.
pub fn verify_state_tensor(
    s_size: usize,
    x_size: usize,
    max_rounds: usize,
    budget: usize,
) -> Result<StateTensorReport, FreeError> {
    assert!(s_size >= 1, "state space must be nonempty");
    let full = theory::theory_tensor(&theory::semilattice(), &theory::state_theory(s_size));
    let states = FiniteSet::atoms("s", s_size);
    let xs = FiniteSet::atoms("x", x_size);

    let points: Vec<Value> = states
        .iter()
        .flat_map(|s| xs.iter().map(move |x| vpair(s, x)))
        .collect();
    let mut subsets: Vec<Value> = Vec::with_capacity(1 << points.len());
    for mask in 0u32..(1 << points.len()) {
        let set: BTreeSet<Value> = points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        subsets.push(Value::Set(set));
    }
    let carrier: FiniteSet = all_functions(&states, &subsets).map(|t| t.as_value()).collect();
    let n = carrier.len();
    let expected = crate::value::count_functions(s_size, subsets.len()).expect("small instance");
    debug_assert_eq!(n as u128, expected);

    let as_table = |i: usize| FnTable::from_value(carrier.get(i)).expect("carrier of state tables");
    let index_of = |t: FnTable| carrier.index_of(&t.as_value()).expect("closed under the operations");

    let mut tables = BTreeMap::new();
    tables.insert(
        "join".to_string(),
        OpTable::from_fn(2, n, |t| {
            let (a, b) = (as_table(t[0]), as_table(t[1]));
            index_of(FnTable::from_fn(&states, |s| {
                let (Value::Set(x), Value::Set(y)) = (a.apply(s), b.apply(s)) else {
                    panic!("state table values are sets")
                };
                Value::Set(x.union(y).cloned().collect())
            }))
        }),
    );
    tables.insert(
        "bot".to_string(),
        OpTable::constant(index_of(FnTable::from_fn(&states, |_| Value::Set(BTreeSet::new())))),
    );
    tables.insert(
        "lookup".to_string(),
        OpTable::from_fn(s_size, n, |args| {
            index_of(FnTable::from_fn(&states, |s| {
                let i = states.index_of(s).expect("state");
                as_table(args[i]).apply(s).clone()
            }))
        }),
    );
    for i in 0..s_size {
        let si = states.get(i).clone();
        tables.insert(
            format!("update_{i}"),
            OpTable::from_fn(1, n, |args| {
                let at = as_table(args[0]).apply(&si).clone();
                index_of(FnTable::from_fn(&states, |_| at.clone()))
            }),
        );
    }
    let generators: Vec<Value> = xs
        .iter()
        .map(|x| {
            FnTable::from_fn(&states, |s| Value::Set([vpair(s, x)].into())).as_value()
        })
        .collect();
    let model = FinAlgebra { carrier, generators, tables };
    let model_ok = model
        .check_equations(&full)
        .expect("model tables fit the tensor theory")
        .is_none();

    let sat = free_algebra_saturating(&full, &xs, max_rounds, budget)?;
    let found = sat.algebra.classes.len();
    let bijection =
        sat.stabilized && found == n && model_ok && maps_onto(&sat.algebra, &model);
    let outcome = if !sat.stabilized {
        "inconclusive"
    } else if bijection && found as u128 == expected {
        "pass"
    } else {
        "fail"
    };
    Ok(StateTensorReport {
        s_size,
        x_size,
        expected,
        found,
        rounds: sat.rounds,
        stabilized: sat.stabilized,
        model_satisfies_theory: model_ok,
        bijection,
        outcome: outcome.to_string(),
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::OpSymbol;

    /// Two-element chain a0 < a1: join = max, bot = a0.
    fn chain2() -> FinAlgebra {
        let carrier = FiniteSet::atoms("a", 2);
        let mut tables = BTreeMap::new();
        tables.insert("join".into(), OpTable::from_fn(2, 2, |t| t[0].max(t[1])));
        tables.insert("bot".into(), OpTable::constant(0));
        FinAlgebra { carrier, generators: vec![Value::atom("a1")], tables }
    }

    fn with_u(mut alg: FinAlgebra, u0: OpTable, u1: OpTable) -> FinAlgebra {
        alg.tables.insert("u0".into(), u0);
        alg.tables.insert("u1".into(), u1);
        alg
    }

    #[test]
    fn identity_structure_is_an_algebra() {
        let alg = EmAlgebra::identity(&FiniteSet::atoms("a", 3));
        let rep = check_em_algebra(&alg, 2);
        assert!(rep.ok);
        assert_eq!(rep.skipped, 0);
        assert!(!rep.bounded_fragment);
        assert!(rep.checked > 0);
    }

    #[test]
    fn powerset_join_fold_is_an_algebra() {
        let em = em_from_semilattice_tables(&chain2()).unwrap();
        let rep = check_em_algebra(&em, 2);
        assert!(rep.ok, "witness: {:?}", rep.witness);
        assert_eq!(rep.skipped, 0);
        assert!(!rep.bounded_fragment);
    }

    #[test]
    fn powerset_least_element_fold_fails_multiplication() {
        // alpha picks the least element of a subset, empty set to a0. The
        // unit law holds; flattening does not: collapsing {} into the mix
        // loses minima.
        let m = catalog::powerset_full();
        let x = FiniteSet::atoms("a", 2);
        let ta = m.carrier(&x);
        let structure = FnTable::from_fn(&ta.set, |sv| {
            let Value::Set(items) = sv else { panic!("not a set") };
            items.iter().next().cloned().unwrap_or(Value::atom("a0"))
        });
        let alg = EmAlgebra::new(m, x, structure).unwrap();
        let rep = check_em_algebra(&alg, 2);
        assert!(!rep.ok);
        let Some(EmWitness::Mult { f, m: mv, left, right, .. }) = &rep.witness else {
            panic!("expected a multiplication witness, got {:?}", rep.witness)
        };
        assert_ne!(left, right);
        // Replay the witness through the raw monad operations.
        let fk = Kleisli::new(f.clone(), alg.monad.carrier(&alg.carrier).set.clone());
        let l = alg.alpha(&alg.monad.ext(&fk, mv)).unwrap();
        assert_eq!(l, left);
    }

    #[test]
    fn em_construction_requires_total_structure() {
        let m = catalog::powerset_full();
        let x = FiniteSet::atoms("a", 2);
        let partial = FnTable::new(BTreeMap::from([(Value::Set(BTreeSet::new()), Value::atom("a0"))]));
        assert!(EmAlgebra::new(m, x, partial).is_err());
    }

    #[test]
    fn tensor_law_with_identity_side_passes() {
        let em = em_from_semilattice_tables(&chain2()).unwrap();
        let id = EmAlgebra::identity(&FiniteSet::atoms("a", 2));
        let pair = TensorAlgebra::new(em, id).unwrap();
        let rep = check_tensor_law(&pair, 2, 2, 1_000_000);
        assert!(rep.ok, "witness: {:?}", rep.witness);
        assert!(!rep.partial);
        assert_eq!(rep.skipped, 0);
        assert!(rep.checked > 0);
    }

    #[test]
    fn tensor_law_fails_with_replayable_witness() {
        // u0 negates its first argument, which no join algebra tolerates.
        let alg = with_u(
            chain2(),
            OpTable::from_fn(2, 2, |t| 1 - t[0]),
            OpTable::from_fn(2, 2, |t| t[0].max(t[1])),
        );
        let s = em_from_semilattice_tables(&alg).unwrap();
        let t = em_from_sigma22_tables(&alg, 1).unwrap();
        let pair = TensorAlgebra::new(s, t).unwrap();
        let rep = check_tensor_law(&pair, 2, 2, 1_000_000);
        assert!(!rep.ok);
        let w = rep.witness.expect("tensor law witness");
        assert_ne!(w.left, w.right);
        let (l, r) = tensor_law_instance(&pair, w.y_size, w.z_size, &w.f, &w.p, &w.q)
            .expect("witness instance replays");
        assert_eq!((l, r), (w.left, w.right));
    }

    #[test]
    fn commutation_spec_cases() {
        let sl = theory::semilattice();
        let unary = theory::unary_op();

        // The identity endomorphism commutes with join.
        let mut id_alg = chain2();
        id_alg.tables.insert("u".into(), OpTable::from_fn(1, 2, |t| t[0]));
        let rep = check_commutation_tables(&sl, &unary, &id_alg).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.pairs, 2);

        // Negation does not: u(a0 v a1) = a0 but u(a0) v u(a1) = a1.
        let mut neg_alg = chain2();
        neg_alg.tables.insert("u".into(), OpTable::from_fn(1, 2, |t| 1 - t[0]));
        let rep = check_commutation_tables(&sl, &unary, &neg_alg).unwrap();
        assert!(!rep.ok);
        let w = rep.witness.unwrap();
        let vals: Vec<&Value> = w.assignment.values().collect();
        assert_eq!(vals, vec![&Value::atom("a0"), &Value::atom("a1")]);
        assert_ne!(w.lhs_value, w.rhs_value);

        // A constant commutes with join exactly when it is join-idempotent,
        // which every element of a chain is.
        let join_only = Theory::new("JoinOnly", vec![OpSymbol::new("join", 2)], vec![]);
        let constant = Theory::new("Constant", vec![OpSymbol::new("c", 0)], vec![]);
        for c in 0..2 {
            let mut alg = chain2();
            alg.tables.insert("c".into(), OpTable::constant(c));
            let rep = check_commutation_tables(&join_only, &constant, &alg).unwrap();
            assert!(rep.ok, "constant {c} is idempotent under max");
        }
    }

    #[test]
    fn syntactic_and_semantic_checks_agree_on_random_candidates() {
        let rep = commutation_cross_check(60, 3, crate::DEFAULT_SEED);
        assert!(rep.ok, "disagreements: {:?}", rep.disagreements);
        assert!(rep.both_pass > 0, "no passing candidate sampled");
        assert!(rep.both_fail > 0, "no failing candidate sampled");
    }

    #[test]
    fn free_tensor_with_identity_monad_is_the_free_semilattice() {
        let (algebra, rep) = saturate_free_tensor(&theory::empty_theory(), 2, 16, 100_000).unwrap();
        assert!(rep.stabilized);
        assert!(rep.pattern_observed);
        assert_eq!(rep.classes, 4);
        assert!(algebra.closed);
        assert_eq!(rep.class_trace[0], 3); // bot and the two generators
    }

    #[test]
    fn free_tensor_with_one_slot_state_collapses_to_the_free_semilattice() {
        // A one-slot store makes lookup and update trivial.
        let (_, rep) = saturate_free_tensor(&theory::state_theory(1), 2, 16, 200_000).unwrap();
        assert!(rep.stabilized);
        assert_eq!(rep.classes, 4);
    }

    #[test]
    fn free_tensor_with_no_generators_is_the_point() {
        let (_, rep) = saturate_free_tensor(&theory::state_theory(1), 0, 8, 100_000).unwrap();
        assert!(rep.stabilized);
        assert_eq!(rep.classes, 1);
    }

    #[test]
    fn state_tensor_identity_on_one_state() {
        let rep = verify_state_tensor(1, 1, 24, 200_000).unwrap();
        assert_eq!(rep.expected, 2);
        assert_eq!(rep.found, 2);
        assert_eq!(rep.outcome, "pass");
        let rep = verify_state_tensor(1, 2, 24, 200_000).unwrap();
        assert_eq!(rep.expected, 4);
        assert_eq!(rep.found, 4);
        assert_eq!(rep.outcome, "pass");
    }

    #[test]
    fn state_tensor_identity_on_two_states() {
        let rep = verify_state_tensor(2, 1, 24, 500_000).unwrap();
        assert_eq!(rep.expected, 16);
        assert_eq!(rep.found, 16);
        assert!(rep.model_satisfies_theory);
        assert!(rep.bijection);
        assert_eq!(rep.outcome, "pass");
    }
}
