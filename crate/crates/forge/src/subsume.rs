//! Subsumption between ultimately periodic sequences.
//!
//! A lasso is a finite preamble followed by a cycle repeated forever; it is
//! the finitely-representable fragment of infinite sequences on which the
//! subsumption relation is decidable. A set-valued lasso `a` subsumes a
//! value lasso `x` when there is an infinite set M of positions such that
//! `x_i` lies in `a_j` for all i < j from M.
//!
//! Two independent decision procedures live here: the membership-recurrence
//! characterization used by [`subsumes`], and a bounded-prefix chain search
//! ([`bounded_chain_subsumes`]) used to cross-check it on the built-in
//! [`catalog`]. The splitting law (`union_split_property`) is checked by
//! the seeded [`ramsey_run`] property runner.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::value::{FiniteSet, Value};

/// Preamble plus nonempty cycle; position `i` reads the preamble first and
/// then the cycle forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso<T> {
    pub preamble: Vec<T>,
    pub cycle: Vec<T>,
}

pub type LassoSeq = Lasso<Value>;
pub type LassoSetSeq = Lasso<BTreeSet<Value>>;

impl<T: Clone> Lasso<T> {
    pub fn new(preamble: Vec<T>, cycle: Vec<T>) -> Result<Lasso<T>, String> {
        if cycle.is_empty() {
            return Err("lasso cycle must be nonempty".into());
        }
        Ok(Lasso { preamble, cycle })
    }

    pub fn at(&self, i: usize) -> &T {
        if i < self.preamble.len() {
            &self.preamble[i]
        } else {
            &self.cycle[(i - self.preamble.len()) % self.cycle.len()]
        }
    }

    /// The same sequence with the first `k` positions dropped.
    pub fn shift(&self, k: usize) -> Lasso<T> {
        let pre = self.preamble.len();
        let preamble = if k < pre { self.preamble[k..].to_vec() } else { Vec::new() };
        let mut cycle = self.cycle.clone();
        if k > pre {
            cycle.rotate_left((k - pre) % self.cycle.len());
        }
        Lasso { preamble, cycle }
    }

    /// The same sequence with the cycle written out twice.
    pub fn unroll(&self) -> Lasso<T> {
        let mut cycle = self.cycle.clone();
        cycle.extend(self.cycle.iter().cloned());
        Lasso { preamble: self.preamble.clone(), cycle }
    }
}

impl LassoSetSeq {
    /// Pointwise union, aligned to the longer preamble and the least common
    /// cycle.
    pub fn union(&self, other: &LassoSetSeq) -> LassoSetSeq {
        let pre = self.preamble.len().max(other.preamble.len());
        let cyc = lcm(self.cycle.len(), other.cycle.len());
        let join = |i: usize| self.at(i).union(other.at(i)).cloned().collect();
        Lasso {
            preamble: (0..pre).map(join).collect(),
            cycle: (pre..pre + cyc).map(join).collect(),
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

// ---------------------------------------------------------------------------
// The decision procedure.

/// Whether `a` subsumes `x`: some infinite M has `x_i` in `a_j` for all
/// i < j from M.
///
/// Decided through a reduction to membership recurrence: `a` subsumes `x`
/// if and only if some value v has infinitely many positions i with
/// `x_i = v` and `v` in `a_i`. Given such positions, they form M directly
/// (the earlier value v lies in every later set). Conversely, given an
/// infinite M, the values `x_i` on M range over a finite set, so some v
/// recurs on an infinite M' from M, and every position of M' past the
/// first has both `x_i = v` and `v` in `a_i`. For lassos both sequences
/// are simultaneously periodic past the longer preamble, so recurrence at
/// a single aligned super-period decides the condition.
pub fn subsumes(a: &LassoSetSeq, x: &LassoSeq) -> bool {
    subsumption_witness(a, x).is_some()
}

/// The first aligned position whose membership hit recurs forever, with
/// its value.
pub fn subsumption_witness(a: &LassoSetSeq, x: &LassoSeq) -> Option<(usize, Value)> {
    let start = a.preamble.len().max(x.preamble.len());
    let period = lcm(a.cycle.len(), x.cycle.len());
    (start..start + period)
        .find(|&i| a.at(i).contains(x.at(i)))
        .map(|i| (i, x.at(i).clone()))
}

/// Decide subsumption without the recurrence reduction: search a bounded
/// prefix for the longest chain of positions i_1 < .. < i_k whose every
/// earlier value belongs to every later set, the condition straight from
/// the definition.
///
/// The threshold separates exactly. If `a` subsumes `x`, one membership
/// hit recurs every super-period, and those positions chain freely, so the
/// scanned window yields a chain longer than the threshold. If not, a
/// chain can use each value at most once past the preambles (a second
/// position with the same value would be a recurring membership hit), so
/// its length is at most the preamble length plus the number of distinct
/// values of `x`.
pub fn bounded_chain_subsumes(a: &LassoSetSeq, x: &LassoSeq) -> bool {
    let start = a.preamble.len().max(x.preamble.len());
    let period = lcm(a.cycle.len(), x.cycle.len());
    let values: Vec<&Value> = {
        let mut vs: Vec<&Value> = x.preamble.iter().chain(&x.cycle).collect();
        vs.sort();
        vs.dedup();
        vs
    };
    assert!(values.len() <= 16, "chain search supports at most 16 distinct values");
    let bit = |v: &Value| values.binary_search(&v).expect("value of x") as u32;

    let threshold = start + values.len() + 1;
    let len = start + (threshold + 2) * period;
    let states = 1usize << values.len();

    // best[j][S]: longest chain ending at j whose elements carry exactly
    // the value set S.
    let mut best = vec![vec![0u32; states]; len];
    let mut longest = 0;
    for j in 0..len {
        let xbit = 1usize << bit(x.at(j));
        let aset: usize = values
            .iter()
            .enumerate()
            .filter(|(_, v)| a.at(j).contains(v))
            .map(|(k, _)| 1usize << k)
            .sum();
        best[j][xbit] = best[j][xbit].max(1);
        for i in 0..j {
            for s in 0..states {
                if best[i][s] == 0 || s & !aset != 0 {
                    continue;
                }
                let ns = s | xbit;
                if best[i][s] + 1 > best[j][ns] {
                    best[j][ns] = best[i][s] + 1;
                }
            }
        }
        longest = longest.max(*best[j].iter().max().unwrap());
        if longest as usize >= threshold {
            return true;
        }
    }
    false
}

/// Whether the union of two set lassos subsumes exactly when one of them
/// does. Returns the truth of the biconditional, which the splitting law
/// predicts to hold always.
pub fn union_split_property(a: &LassoSetSeq, b: &LassoSetSeq, x: &LassoSeq) -> bool {
    subsumes(&a.union(b), x) == (subsumes(a, x) || subsumes(b, x))
}

// ---------------------------------------------------------------------------
// Text form: pre:[..];cyc:[..]

impl fmt::Display for LassoSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |vs: &[Value]| vs.iter().map(Value::literal).collect::<Vec<_>>().join(",");
        write!(f, "pre:[{}];cyc:[{}]", names(&self.preamble), names(&self.cycle))
    }
}

impl fmt::Display for LassoSetSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |s: &BTreeSet<Value>| {
            format!("{{{}}}", s.iter().map(Value::literal).collect::<Vec<_>>().join(","))
        };
        let items = |vs: &[BTreeSet<Value>]| vs.iter().map(one).collect::<Vec<_>>().join(",");
        write!(f, "pre:[{}];cyc:[{}]", items(&self.preamble), items(&self.cycle))
    }
}

fn split_pre_cyc(s: &str) -> Result<(String, String), String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix("pre:[")
        .ok_or_else(|| format!("expected 'pre:[..];cyc:[..]', got '{s}'"))?;
    let (pre, rest) = rest
        .split_once("];cyc:[")
        .ok_or_else(|| format!("expected 'pre:[..];cyc:[..]', got '{s}'"))?;
    let cyc = rest
        .strip_suffix(']')
        .ok_or_else(|| format!("expected 'pre:[..];cyc:[..]', got '{s}'"))?;
    Ok((pre.to_string(), cyc.to_string()))
}

fn parse_name(s: &str) -> Result<Value, String> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad value name '{s}'"));
    }
    Ok(Value::atom(s))
}

pub fn parse_lasso(s: &str) -> Result<LassoSeq, String> {
    let (pre, cyc) = split_pre_cyc(s)?;
    let items = |part: &str| -> Result<Vec<Value>, String> {
        if part.is_empty() {
            return Ok(Vec::new());
        }
        part.split(',').map(parse_name).collect()
    };
    LassoSeq::new(items(&pre)?, items(&cyc)?)
}

pub fn parse_lasso_sets(s: &str) -> Result<LassoSetSeq, String> {
    let (pre, cyc) = split_pre_cyc(s)?;
    let items = |part: &str| -> Result<Vec<BTreeSet<Value>>, String> {
        let mut out = Vec::new();
        let mut rest = part;
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(|| format!("expected a set in '{part}'"))?;
            let (inner, tail) =
                body.split_once('}').ok_or_else(|| format!("unclosed set in '{part}'"))?;
            let set: BTreeSet<Value> = if inner.is_empty() {
                BTreeSet::new()
            } else {
                inner.split(',').map(parse_name).collect::<Result<_, _>>()?
            };
            out.push(set);
            rest = match tail.strip_prefix(',') {
                Some(r) => r,
                None if tail.is_empty() => tail,
                None => return Err(format!("expected ',' between sets in '{part}'")),
            };
        }
        Ok(out)
    };
    LassoSetSeq::new(items(&pre)?, items(&cyc)?)
}

// ---------------------------------------------------------------------------
// Random instances and the property runner.

pub fn random_lasso_seq(universe: &FiniteSet, max_pre: usize, max_cyc: usize, rng: &mut ChaCha8Rng) -> LassoSeq {
    let draw = |rng: &mut ChaCha8Rng| universe.get(rng.gen_range(0..universe.len())).clone();
    let pre = rng.gen_range(0..=max_pre);
    let cyc = rng.gen_range(1..=max_cyc);
    Lasso {
        preamble: (0..pre).map(|_| draw(rng)).collect(),
        cycle: (0..cyc).map(|_| draw(rng)).collect(),
    }
}

pub fn random_lasso_set_seq(
    universe: &FiniteSet,
    max_pre: usize,
    max_cyc: usize,
    rng: &mut ChaCha8Rng,
) -> LassoSetSeq {
    let draw = |rng: &mut ChaCha8Rng| {
        universe.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect::<BTreeSet<Value>>()
    };
    let pre = rng.gen_range(0..=max_pre);
    let cyc = rng.gen_range(1..=max_cyc);
    Lasso {
        preamble: (0..pre).map(|_| draw(rng)).collect(),
        cycle: (0..cyc).map(|_| draw(rng)).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RamseyReport {
    pub samples: usize,
    pub universe: usize,
    pub seed: u64,
    pub holds: usize,
    pub ok: bool,
    pub failures: Vec<serde_json::Value>,
}

/// Check the splitting law on seeded random lassos: the union of two set
/// lassos must subsume exactly when one of the two does.
pub fn ramsey_run(samples: usize, universe: usize, seed: u64) -> RamseyReport {
    let u = FiniteSet::atoms("v", universe);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        RamseyReport { samples, universe, seed, holds: 0, ok: true, failures: Vec::new() };
    for _ in 0..samples {
        let a = random_lasso_set_seq(&u, 3, 4, &mut rng);
        let b = random_lasso_set_seq(&u, 3, 4, &mut rng);
        let x = random_lasso_seq(&u, 3, 4, &mut rng);
        if union_split_property(&a, &b, &x) {
            report.holds += 1;
        } else {
            report.ok = false;
            report.failures.push(serde_json::json!({
                "a": a.to_string(),
                "b": b.to_string(),
                "x": x.to_string(),
                "union": a.union(&b).to_string(),
                "unionSubsumes": subsumes(&a.union(&b), &x),
                "aSubsumes": subsumes(&a, &x),
                "bSubsumes": subsumes(&b, &x),
            }));
        }
    }
    report
}

/// Fifty fixed instances for cross-checking the two decision procedures:
/// a handcrafted head covering the edge shapes (constant hits, empty sets,
/// misaligned parities, preamble-only matches, coprime cycle lengths) and
/// a seeded random tail.
pub fn catalog() -> Vec<(LassoSetSeq, LassoSeq)> {
    let u = FiniteSet::atoms("v", 4);
    let v = |i: usize| u.get(i).clone();
    let set = |ix: &[usize]| -> BTreeSet<Value> { ix.iter().map(|&i| v(i)).collect() };
    let seq = |pre: &[usize], cyc: &[usize]| -> LassoSeq {
        Lasso { preamble: pre.iter().map(|&i| v(i)).collect(), cycle: cyc.iter().map(|&i| v(i)).collect() }
    };
    let sets = |pre: &[&[usize]], cyc: &[&[usize]]| -> LassoSetSeq {
        Lasso { preamble: pre.iter().map(|ix| set(ix)).collect(), cycle: cyc.iter().map(|ix| set(ix)).collect() }
    };

    let mut out = vec![
        // Constant hit: a = {v0} forever against x = v0 forever.
        (sets(&[], &[&[0]]), seq(&[], &[0])),
        // Empty sets never subsume anything.
        (sets(&[], &[&[]]), seq(&[], &[0])),
        (sets(&[], &[&[]]), seq(&[1, 2], &[3, 0])),
        // Alternation off by one: x_i lands in a_{i+1}, never in a_i.
        (sets(&[], &[&[1], &[0]]), seq(&[], &[0, 1])),
        // The aligned alternation hits every position.
        (sets(&[], &[&[0], &[1]]), seq(&[], &[0, 1])),
        // A match only in the preamble does not count.
        (sets(&[&[0]], &[&[]]), seq(&[0], &[0])),
        // A mismatching preamble does not hurt.
        (sets(&[&[], &[], &[]], &[&[2]]), seq(&[], &[2])),
        // Coprime cycles: hits land where i = 0 mod 6.
        (sets(&[], &[&[0], &[], &[]]), seq(&[], &[0, 1])),
        // Coprime cycles with no common hit: v0 at odd set positions only.
        (sets(&[], &[&[], &[0]]), seq(&[], &[0, 1])),
        // Full sets absorb everything.
        (sets(&[], &[&[0, 1, 2, 3]]), seq(&[], &[3, 2])),
        // Rotating singleton aligned with a rotating value.
        (sets(&[], &[&[0], &[1], &[2], &[3]]), seq(&[], &[0, 1, 2, 3])),
        // Rotating singleton one step behind.
        (sets(&[], &[&[3], &[0], &[1], &[2]]), seq(&[], &[0, 1, 2, 3])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    while out.len() < 50 {
        out.push((random_lasso_set_seq(&u, 3, 4, &mut rng), random_lasso_seq(&u, 3, 4, &mut rng)));
    }
    out
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn atoms4() -> FiniteSet {
        FiniteSet::atoms("v", 4)
    }

    fn val(i: usize) -> Value {
        atoms4().get(i).clone()
    }

    #[test]
    fn constant_hit_subsumes() {
        let a = parse_lasso_sets("pre:[];cyc:[{v0}]").unwrap();
        let x = parse_lasso("pre:[];cyc:[v0]").unwrap();
        assert!(subsumes(&a, &x));
        assert_eq!(subsumption_witness(&a, &x), Some((0, val(0))));
    }

    #[test]
    fn empty_sets_subsume_nothing() {
        let a = parse_lasso_sets("pre:[];cyc:[{}]").unwrap();
        for x in ["pre:[];cyc:[v0]", "pre:[v1];cyc:[v2,v3]", "pre:[];cyc:[v0,v1,v2,v3]"] {
            assert!(!subsumes(&a, &parse_lasso(x).unwrap()));
        }
    }

    #[test]
    fn offset_alternation_never_hits() {
        // x_i is in a_{i+1} at every i, but never in a_i itself.
        let a = parse_lasso_sets("pre:[];cyc:[{v1},{v0}]").unwrap();
        let x = parse_lasso("pre:[];cyc:[v0,v1]").unwrap();
        for i in 0..8 {
            assert!(a.at(i + 1).contains(x.at(i)));
            assert!(!a.at(i).contains(x.at(i)));
        }
        assert!(!subsumes(&a, &x));
        assert!(!bounded_chain_subsumes(&a, &x));
    }

    #[test]
    fn alignment_spans_both_preambles_and_cycles() {
        let a = parse_lasso_sets("pre:[{v0}];cyc:[{},{v1}]").unwrap();
        let x = parse_lasso("pre:[];cyc:[v1]").unwrap();
        assert_eq!(subsumption_witness(&a, &x), Some((2, val(1))));
    }

    #[test]
    fn both_methods_agree_on_the_catalog() {
        let mut saw_true = false;
        let mut saw_false = false;
        for (i, (a, x)) in catalog().iter().enumerate() {
            let fast = subsumes(a, x);
            let chain = bounded_chain_subsumes(a, x);
            assert_eq!(fast, chain, "instance {i}: a = {a}, x = {x}");
            saw_true |= fast;
            saw_false |= !fast;
        }
        assert_eq!(catalog().len(), 50);
        assert!(saw_true && saw_false, "catalog must exercise both verdicts");
    }

    #[test]
    fn union_split_trivial_shapes() {
        let a = parse_lasso_sets("pre:[];cyc:[{v0},{v2}]").unwrap();
        let x = parse_lasso("pre:[];cyc:[v0]").unwrap();
        assert!(union_split_property(&a, &a, &x));
        let empty = parse_lasso_sets("pre:[];cyc:[{}]").unwrap();
        assert!(subsumes(&a, &x));
        assert!(subsumes(&a.union(&empty), &x));
        assert!(union_split_property(&a, &empty, &x));
    }

    #[test]
    fn ramsey_run_is_seeded_and_clean() {
        let rep = ramsey_run(300, 4, 11);
        assert!(rep.ok, "failures: {:?}", rep.failures);
        assert_eq!(rep.holds, 300);
        let again = ramsey_run(300, 4, 11);
        assert_eq!(rep.holds, again.holds);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["pre:[];cyc:[v0]", "pre:[v1,v0];cyc:[v2,v2,v3]"] {
            assert_eq!(parse_lasso(s).unwrap().to_string(), s);
        }
        for s in ["pre:[];cyc:[{}]", "pre:[{v0},{}];cyc:[{v0,v1},{v3}]"] {
            assert_eq!(parse_lasso_sets(s).unwrap().to_string(), s);
        }
        assert!(parse_lasso("pre:[];cyc:[]").is_err(), "empty cycle");
        assert!(parse_lasso("cyc:[v0]").is_err());
        assert!(parse_lasso("pre:[];cyc:[v-0]").is_err());
        assert_eq!(parse_lasso("pre:[]; cyc:[v0, v1]").unwrap().to_string(), "pre:[];cyc:[v0,v1]");
        assert!(parse_lasso_sets("pre:[];cyc:[v0]").is_err(), "sets need braces");
        assert!(parse_lasso_sets("pre:[];cyc:[{v0}").is_err());
    }

    fn arb_lasso() -> impl Strategy<Value = LassoSeq> {
        (
            proptest::collection::vec(0..4usize, 0..4),
            proptest::collection::vec(0..4usize, 1..5),
        )
            .prop_map(|(pre, cyc)| Lasso {
                preamble: pre.into_iter().map(val).collect(),
                cycle: cyc.into_iter().map(val).collect(),
            })
    }

    fn arb_lasso_sets() -> impl Strategy<Value = LassoSetSeq> {
        let as_set = |mask: u8| -> BTreeSet<Value> {
            (0..4).filter(|k| mask & (1 << k) != 0).map(val).collect()
        };
        (
            proptest::collection::vec(0..16u8, 0..4),
            proptest::collection::vec(0..16u8, 1..5),
        )
            .prop_map(move |(pre, cyc)| Lasso {
                preamble: pre.into_iter().map(as_set).collect(),
                cycle: cyc.into_iter().map(as_set).collect(),
            })
    }

    proptest! {
        #[test]
        fn monotone_in_the_sets(a in arb_lasso_sets(), b in arb_lasso_sets(), x in arb_lasso()) {
            if subsumes(&a, &x) {
                prop_assert!(subsumes(&a.union(&b), &x));
            }
        }

        #[test]
        fn shift_invariant(a in arb_lasso_sets(), x in arb_lasso(), k in 0..8usize) {
            prop_assert_eq!(subsumes(&a.shift(k), &x.shift(k)), subsumes(&a, &x));
        }

        #[test]
        fn unroll_invariant(a in arb_lasso_sets(), x in arb_lasso()) {
            let base = subsumes(&a, &x);
            prop_assert_eq!(subsumes(&a.unroll(), &x), base);
            prop_assert_eq!(subsumes(&a, &x.unroll()), base);
            prop_assert_eq!(subsumes(&a.unroll(), &x.unroll()), base);
        }

        #[test]
        fn union_split_always_holds(a in arb_lasso_sets(), b in arb_lasso_sets(), x in arb_lasso()) {
            prop_assert!(union_split_property(&a, &b, &x));
        }

        #[test]
        fn chain_search_agrees(a in arb_lasso_sets(), x in arb_lasso()) {
            prop_assert_eq!(bounded_chain_subsumes(&a, &x), subsumes(&a, &x));
        }
    }
}
