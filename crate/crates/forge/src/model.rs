//! Finite algebras for a theory, given by explicit operation tables.
//!
//! Carriers are [`FiniteSet`]s; tables index into the carrier and are stored
//! flat in mixed radix (first argument most significant). The JSON file form
//! keys each table entry by the comma-joined argument literals:
//!
//! ```json
//! {
//!   "carrier": ["a0", "a1"],
//!   "generators": ["a0"],
//!   "tables": {
//!     "join": {"a0,a0": "a0", "a0,a1": "a1", "a1,a0": "a1", "a1,a1": "a1"},
//!     "bot": {"": "a0"}
//!   }
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theory::{Equation, Term, Theory};
use crate::value::{index_tuples, parse_value, FiniteSet, Value};

/// One operation table: `data[i1*n^(k-1) + .. + ik]` is the result index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    pub arity: usize,
    pub data: Vec<usize>,
}

impl OpTable {
    pub fn new(arity: usize, data: Vec<usize>) -> OpTable {
        OpTable { arity, data }
    }

    pub fn constant(value: usize) -> OpTable {
        OpTable { arity: 0, data: vec![value] }
    }

    /// Build from a function on index tuples.
    pub fn from_fn(arity: usize, n: usize, f: impl Fn(&[usize]) -> usize) -> OpTable {
        OpTable { arity, data: index_tuples(n, arity).map(|t| f(&t)).collect() }
    }

    pub fn get(&self, n: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0;
        for &a in args {
            idx = idx * n + a;
        }
        self.data[idx]
    }
}

/// A finite algebra: carrier, a table per operation, and a distinguished
/// generator list (possibly empty) used by reachability checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlgebra {
    pub carrier: FiniteSet,
    pub generators: Vec<Value>,
    pub tables: BTreeMap<String, OpTable>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("no table for operation '{0}'")]
    MissingTable(String),
    #[error("table for '{op}' has arity {got}, theory says {expected}")]
    TableArity { op: String, expected: usize, got: usize },
    #[error("table for '{op}' has {got} entries, need {expected}")]
    TableSize { op: String, expected: usize, got: usize },
    #[error("table for '{op}' maps outside the carrier")]
    RangeError { op: String },
    #[error("generator {0} is not in the carrier")]
    BadGenerator(String),
    #[error("variable '{0}' unassigned during evaluation")]
    UnboundVar(String),
    #[error("bad algebra file: {0}")]
    BadFile(String),
}

/// A failed equation instance, with the variable assignment that breaks it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub equation: String,
    pub assignment: BTreeMap<String, Value>,
    pub lhs_value: Value,
    pub rhs_value: Value,
}

impl FinAlgebra {
    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    /// Check the tables fit the theory's signature and stay in range.
    pub fn validate_shape(&self, theory: &Theory) -> Result<(), ModelError> {
        let n = self.carrier.len();
        for op in &theory.ops {
            let t = self
                .tables
                .get(&op.name)
                .ok_or_else(|| ModelError::MissingTable(op.name.clone()))?;
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
        for g in &self.generators {
            if !self.carrier.contains(g) {
                return Err(ModelError::BadGenerator(g.to_string()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, term: &Term, env: &BTreeMap<String, usize>) -> Result<usize, ModelError> {
        match term {
            Term::Var(v) => env.get(v).copied().ok_or_else(|| ModelError::UnboundVar(v.clone())),
            Term::App(op, args) => {
                let table = self.tables.get(op).ok_or_else(|| ModelError::MissingTable(op.clone()))?;
                let mut idx = Vec::with_capacity(args.len());
                for a in args {
                    idx.push(self.eval(a, env)?);
                }
                Ok(table.get(self.carrier.len(), &idx))
            }
        }
    }

    /// First equation instance the algebra breaks, in deterministic order
    /// (equations as listed, assignments in carrier order), or `None` if it
    /// is a model of the theory.
    pub fn check_equations(&self, theory: &Theory) -> Result<Option<Violation>, ModelError> {
        self.validate_shape(theory)?;
        let n = self.carrier.len();
        for eq in &theory.equations {
            if let Some(v) = self.check_one(eq, n)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    fn check_one(&self, eq: &Equation, n: usize) -> Result<Option<Violation>, ModelError> {
        for tuple in index_tuples(n, eq.context.len()) {
            let env: BTreeMap<String, usize> =
                eq.context.iter().cloned().zip(tuple.iter().copied()).collect();
            let l = self.eval(&eq.lhs, &env)?;
            let r = self.eval(&eq.rhs, &env)?;
            if l != r {
                return Ok(Some(Violation {
                    equation: eq.to_string(),
                    assignment: eq
                        .context
                        .iter()
                        .zip(&tuple)
                        .map(|(v, &i)| (v.clone(), self.carrier.get(i).clone()))
                        .collect(),
                    lhs_value: self.carrier.get(l).clone(),
                    rhs_value: self.carrier.get(r).clone(),
                }));
            }
        }
        Ok(None)
    }

    /// Elements reachable from the generators under all operations.
    /// Nullary operations count as reachable starting points.
    pub fn reachable(&self) -> Vec<usize> {
        let n = self.carrier.len();
        let mut hit = vec![false; n];
        for g in &self.generators {
            if let Some(i) = self.carrier.index_of(g) {
                hit[i] = true;
            }
        }
        loop {
            let mut grew = false;
            for table in self.tables.values() {
                for tuple in index_tuples(n, table.arity) {
                    if tuple.iter().all(|&i| hit[i]) {
                        let v = table.get(n, &tuple);
                        if !hit[v] {
                            hit[v] = true;
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        (0..n).filter(|&i| hit[i]).collect()
    }

    pub fn is_reachable(&self) -> bool {
        self.reachable().len() == self.carrier.len()
    }

    // -- JSON file form -----------------------------------------------------

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.carrier.len();
        let mut tables = serde_json::Map::new();
        for (op, t) in &self.tables {
            let mut entries = serde_json::Map::new();
            for tuple in index_tuples(n, t.arity) {
                let key = tuple
                    .iter()
                    .map(|&i| self.carrier.get(i).literal())
                    .collect::<Vec<_>>()
                    .join(",");
                let val = self.carrier.get(t.get(n, &tuple)).literal();
                entries.insert(key, serde_json::Value::String(val));
            }
            tables.insert(op.clone(), serde_json::Value::Object(entries));
        }
        serde_json::json!({
            "carrier": self.carrier.iter().map(Value::literal).collect::<Vec<_>>(),
            "generators": self.generators.iter().map(Value::literal).collect::<Vec<_>>(),
            "tables": tables,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FinAlgebra, ModelError> {
        let bad = |m: &str| ModelError::BadFile(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let carrier_lits = obj
            .get("carrier")
            .and_then(|c| c.as_array())
            .ok_or_else(|| bad("missing 'carrier' array"))?;
        let mut elems = Vec::new();
        for lit in carrier_lits {
            let s = lit.as_str().ok_or_else(|| bad("carrier entries must be strings"))?;
            elems.push(parse_value(s).map_err(|e| bad(&format!("carrier: {e}")))?);
        }
        let carrier = FiniteSet::new(elems);
        let generators = match obj.get("generators") {
            None => Vec::new(),
            Some(g) => {
                let arr = g.as_array().ok_or_else(|| bad("'generators' must be an array"))?;
                arr.iter()
                    .map(|lit| {
                        lit.as_str()
                            .ok_or_else(|| bad("generator entries must be strings"))
                            .and_then(|s| parse_value(s).map_err(|e| bad(&format!("generators: {e}"))))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        let tables_obj = obj
            .get("tables")
            .and_then(|t| t.as_object())
            .ok_or_else(|| bad("missing 'tables' object"))?;
        let n = carrier.len();
        let mut tables = BTreeMap::new();
        for (op, entries) in tables_obj {
            let entries = entries
                .as_object()
                .ok_or_else(|| bad(&format!("table '{op}' must be an object")))?;
            let mut parsed: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut arity = None;
            for (key, val) in entries {
                let args: Vec<usize> = if key.is_empty() {
                    vec![]
                } else {
                    key.split(',')
                        .map(|part| {
                            let pv = parse_value(part.trim())
                                .map_err(|e| bad(&format!("table '{op}' key '{key}': {e}")))?;
                            carrier
                                .index_of(&pv)
                                .ok_or_else(|| bad(&format!("table '{op}': '{part}' not in carrier")))
                        })
                        .collect::<Result<Vec<_>, _>>()?
                };
                match arity {
                    None => arity = Some(args.len()),
                    Some(a) if a != args.len() => {
                        return Err(bad(&format!("table '{op}' mixes arities")));
                    }
                    _ => {}
                }
                let vs = val
                    .as_str()
                    .ok_or_else(|| bad(&format!("table '{op}' values must be strings")))?;
                let vv = parse_value(vs).map_err(|e| bad(&format!("table '{op}': {e}")))?;
                let vi = carrier
                    .index_of(&vv)
                    .ok_or_else(|| bad(&format!("table '{op}': result '{vs}' not in carrier")))?;
                parsed.insert(args, vi);
            }
            let arity = arity.ok_or_else(|| bad(&format!("table '{op}' is empty")))?;
            let want = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
            if parsed.len() != want {
                return Err(bad(&format!(
                    "table '{op}' has {} entries, need {want} for arity {arity} over {n} elements",
                    parsed.len()
                )));
            }
            let mut data = Vec::with_capacity(want);
            for tuple in index_tuples(n, arity) {
                data.push(*parsed.get(&tuple).ok_or_else(|| {
                    bad(&format!("table '{op}' is missing an argument tuple"))
                })?);
            }
            tables.insert(op.clone(), OpTable { arity, data });
        }
        Ok(FinAlgebra { carrier, generators, tables })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::semilattice;

    /// Two-element chain a0 < a1 with join = max.
    fn chain2() -> FinAlgebra {
        let carrier = FiniteSet::atoms("a", 2);
        let mut tables = BTreeMap::new();
        tables.insert("join".into(), OpTable::from_fn(2, 2, |t| t[0].max(t[1])));
        tables.insert("bot".into(), OpTable::constant(0));
        FinAlgebra { carrier, generators: vec![Value::atom("a0")], tables }
    }

    #[test]
    fn chain_is_a_semilattice() {
        assert_eq!(chain2().check_equations(&semilattice()).unwrap(), None);
    }

    #[test]
    fn broken_table_reports_first_violation() {
        let mut a = chain2();
        // Make join non-commutative at (a0,a1).
        a.tables.get_mut("join").unwrap().data[1] = 0;
        let v = a.check_equations(&semilattice()).unwrap().unwrap();
        assert!(v.equation.contains("join(join(x,y),z)") || v.equation.contains("join(x,y)"));
        assert_ne!(v.lhs_value, v.rhs_value);
    }

    #[test]
    fn shape_validation() {
        let mut a = chain2();
        a.tables.remove("bot");
        assert_eq!(
            a.validate_shape(&semilattice()),
            Err(ModelError::MissingTable("bot".into()))
        );
        let mut a = chain2();
        a.tables.get_mut("join").unwrap().data[0] = 9;
        assert!(matches!(a.validate_shape(&semilattice()), Err(ModelError::RangeError { .. })));
    }

    #[test]
    fn reachability() {
        let a = chain2();
        // bot() = a0 and a0 generate; join never reaches a1 from a0 alone...
        // except bot and a0 coincide, so only a0 is reachable.
        assert_eq!(a.reachable(), vec![0]);
        let mut b = chain2();
        b.generators = vec![Value::atom("a1")];
        assert!(b.is_reachable()); // bot() = a0, generator a1
    }

    #[test]
    fn json_round_trip() {
        let a = chain2();
        let j = a.to_json();
        let b = FinAlgebra::from_json(&j).unwrap();
        assert_eq!(a, b);
        assert_eq!(j["tables"]["bot"][""], "a0");
        assert_eq!(j["tables"]["join"]["a0,a1"], "a1");
    }

    #[test]
    fn json_rejects_partial_tables() {
        let mut j = chain2().to_json();
        j["tables"]["join"].as_object_mut().unwrap().remove("a0,a1");
        let err = FinAlgebra::from_json(&j).unwrap_err();
        assert!(matches!(err, ModelError::BadFile(_)));
    }
}
